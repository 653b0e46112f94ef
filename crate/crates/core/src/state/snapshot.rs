use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::elliptic::Velocity;
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, InterfaceState, Side, StripField};
use crate::spectral::{Grid, PeriodicField};

use super::types::{CompressibleState, Constants, IncompressibleState, TwoPhaseState};

pub const SNAPSHOT_FORMAT: &str = "ewlab-snapshot";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotField {
    pub name: String,
    /// `None` for interface fields.
    pub side: Option<Side>,
    /// Sidecar file name, relative to the manifest.
    pub file: String,
    /// `[rows, columns]`, row-major.
    pub shape: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotManifest {
    pub format: String,
    pub version: u32,
    pub d: usize,
    pub nx: usize,
    pub ny: usize,
    pub f_star: f64,
    pub kappa: usize,
    pub constants: Constants,
    pub sides: [Side; 2],
    pub fields: Vec<SnapshotField>,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub manifest: SnapshotManifest,
    pub state: TwoPhaseState,
}

fn write_f64(path: &Path, v: &[f64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(v.len() * 8);
    for x in v {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn read_f64(path: &Path, n: usize) -> Result<Vec<f64>> {
    let bytes = fs::read(path)?;
    if bytes.len() != 8 * n {
        return Err(Error::Format(format!("{}: {} bytes, expected {}", path.display(), bytes.len(), 8 * n)));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

/// Writes `<stem>.json` and one `<stem>.<field>[.<side>].f64` sidecar per field.
/// Returns the manifest path.
pub fn write_snapshot(dir: &Path, stem: &str, state: &TwoPhaseState, kappa: usize) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let iface = state.interface();
    let (nx, ny) = (state.nx(), state.ny());
    let mut fields = Vec::new();
    let mut emit = |name: &str, side: Option<Side>, rows: usize, v: &[f64]| -> Result<()> {
        let file = match side {
            Some(s) => format!("{stem}.{name}.{}.f64", s.label()),
            None => format!("{stem}.{name}.f64"),
        };
        write_f64(&dir.join(&file), v)?;
        fields.push(SnapshotField { name: name.into(), side, file, shape: [rows, nx] });
        Ok(())
    };
    emit("f", None, 1, &iface.f.real_samples())?;
    emit("ft", None, 1, &iface.ft.real_samples())?;
    let rows = ny + 1;
    for (k, side) in [Side::Minus, Side::Plus].into_iter().enumerate() {
        emit("p", Some(side), rows, state.pressure(k).values())?;
        emit("u1", Some(side), rows, state.velocity(k).u1.values())?;
        emit("u3", Some(side), rows, state.velocity(k).u3.values())?;
        if let Some(s) = state.entropy(k) {
            emit("S", Some(side), rows, s.values())?;
        }
    }
    let manifest = SnapshotManifest {
        format: SNAPSHOT_FORMAT.into(),
        version: 1,
        d: iface.dim(),
        nx,
        ny,
        f_star: iface.f_star,
        kappa,
        constants: state.constants(),
        sides: [Side::Minus, Side::Plus],
        fields,
    };
    let path = dir.join(format!("{stem}.json"));
    fs::write(&path, crate::json::to_string_pretty17(&manifest)?)?;
    Ok(path)
}

pub fn read_snapshot(manifest_path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(manifest_path)?;
    let manifest: SnapshotManifest = serde_json::from_str(&text)?;
    if manifest.format != SNAPSHOT_FORMAT {
        return Err(Error::Format(format!("unknown snapshot format {:?}", manifest.format)));
    }
    if manifest.d != 1 {
        return Err(Error::UnsupportedDimension(manifest.d));
    }
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let load = |name: &str, side: Option<Side>| -> Result<Option<Vec<f64>>> {
        let Some(entry) = manifest.fields.iter().find(|f| f.name == name && f.side == side) else {
            return Ok(None);
        };
        let expect = if side.is_some() { [manifest.ny + 1, manifest.nx] } else { [1, manifest.nx] };
        if entry.shape != expect {
            return Err(Error::Format(format!("field {name} has shape {:?}, expected {expect:?}", entry.shape)));
        }
        Ok(Some(read_f64(&dir.join(&entry.file), expect[0] * expect[1])?))
    };
    let need = |name: &str, side: Option<Side>| -> Result<Vec<f64>> {
        load(name, side)?.ok_or_else(|| Error::IncompleteState(format!("snapshot lacks field {name}")))
    };
    let grid = Grid::line(manifest.nx)?;
    let iface = InterfaceState::new(
        PeriodicField::from_real(grid.clone(), need("f", None)?)?,
        PeriodicField::from_real(grid, need("ft", None)?)?,
        manifest.f_star,
    )?;
    let mut p = Vec::new();
    let mut u = Vec::new();
    let mut s = Vec::new();
    for side in [Side::Minus, Side::Plus] {
        let map = HarmonicMap::new(&iface, side, manifest.ny)?;
        p.push(StripField::new(map.clone(), need("p", Some(side))?)?);
        u.push(Velocity {
            u1: StripField::new(map.clone(), need("u1", Some(side))?)?,
            u3: StripField::new(map.clone(), need("u3", Some(side))?)?,
        });
        if let Some(v) = load("S", Some(side))? {
            s.push(StripField::new(map, v)?);
        }
    }
    let pair = <[StripField; 2]>::try_from;
    let p: [StripField; 2] = pair(p).expect("two sides");
    let u: [Velocity; 2] = u.try_into().expect("two sides");
    let state = match manifest.constants {
        Constants::Compressible { a, gamma } => {
            let s: [StripField; 2] = s.try_into().map_err(|_| Error::IncompleteState("snapshot lacks entropy".into()))?;
            TwoPhaseState::from(CompressibleState::new(p, u, s, a, gamma)?)
        }
        Constants::Incompressible { rho, g } => TwoPhaseState::from(IncompressibleState::new(u, p, rho, g)?),
    };
    Ok(Snapshot { manifest, state })
}
