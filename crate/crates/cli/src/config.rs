use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use ewlab_core::InterfaceMode;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Simulate,
    Dispersion,
    DnTest,
    Energy,
    CheckState,
    Budget,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Simulate => "simulate",
            Scenario::Dispersion => "dispersion",
            Scenario::DnTest => "dn-test",
            Scenario::Energy => "energy",
            Scenario::CheckState => "check-state",
            Scenario::Budget => "budget",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Horizontal collocation points.
    pub nx: usize,
    /// Chebyshev intervals per layer.
    pub ny: usize,
}

/// Physical constants: either the incompressible pair or the compressible EOS.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ConstantsConfig {
    Incompressible { rho: [f64; 2], g: f64 },
    Compressible {
        a: f64,
        gamma: f64,
        /// Interface pressure of the entropy-wave state.
        #[serde(default = "default_q")]
        q: f64,
        /// Densities on the two sides, `[minus, plus]`.
        #[serde(default = "default_rho")]
        rho: [f64; 2],
        #[serde(default)]
        g: f64,
        /// Background shear `U0 + U1 z`.
        #[serde(default)]
        shear: [f64; 2],
    },
}

fn default_q() -> f64 {
    10.0
}

fn default_rho() -> [f64; 2] {
    [2.0, 1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceConfig {
    /// Mean height `c` of `f` in `(-1, 1)`.
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub modes: Vec<InterfaceMode>,
    /// Modes of the initial potential jump `μ = ρ⁻Φ⁻ - ρ⁺Φ⁺`.
    #[serde(default)]
    pub potential_modes: Vec<InterfaceMode>,
    /// Amplitude of a seeded random perturbation of `f` on `1 ≤ k ≤ nx/8`.
    #[serde(default)]
    pub noise: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Threshold for "zero" jumps and residuals.
    #[serde(default = "tol_zero")]
    pub zero: f64,
    /// Lower bound for "bounded away from zero" jumps.
    #[serde(default = "tol_bounded")]
    pub bounded: f64,
    /// Required Taylor margin `c0` of a neutral state.
    #[serde(default = "tol_c0")]
    pub c0: f64,
    /// Maximal relative DN error accepted by `dn-test`.
    #[serde(default = "tol_dn")]
    pub dn: f64,
    /// Maximal budget closure defect relative to `max |I_j|`.
    #[serde(default = "tol_budget")]
    pub budget: f64,
}

fn tol_zero() -> f64 {
    1e-6
}
fn tol_bounded() -> f64 {
    1e-2
}
fn tol_c0() -> f64 {
    1e-3
}
fn tol_dn() -> f64 {
    1e-6
}
fn tol_budget() -> f64 {
    0.05
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { zero: tol_zero(), bounded: tol_bounded(), c0: tol_c0(), dn: tol_dn(), budget: tol_budget() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must agree with the scenario given on the command line.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    pub grid: GridConfig,
    #[serde(default = "default_d")]
    pub d: usize,
    pub constants: ConstantsConfig,
    #[serde(default = "default_interface")]
    pub interface: InterfaceConfig,
    /// Time step (nondimensional time units).
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Steps between emitted records.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_kappa")]
    pub kappa: usize,
    /// Number of material derivatives in the energy (`0..=2`).
    #[serde(default)]
    pub truncation: usize,
    #[serde(default = "default_modes")]
    pub record_modes: usize,
    /// Stop with the hyperbolicity-loss status when `min 𝔞 ≤ 0`.
    #[serde(default = "default_true")]
    pub stop_on_hyperbolicity_loss: bool,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    /// Snapshot manifest to analyse (`energy`, `check-state`), relative to the config file.
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn default_d() -> usize {
    1
}
fn default_interface() -> InterfaceConfig {
    InterfaceConfig { c: 0.0, modes: Vec::new(), potential_modes: Vec::new(), noise: 0.0 }
}
fn default_dt() -> f64 {
    0.05
}
fn default_t_end() -> f64 {
    1.0
}
fn default_stride() -> usize {
    1
}
fn default_kappa() -> usize {
    4
}
fn default_modes() -> usize {
    8
}
fn default_true() -> bool {
    true
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(s) = &cfg.snapshot {
            if s.is_relative() {
                cfg.snapshot = Some(base.join(s));
            }
        }
        Ok(cfg)
    }

    /// Checks the documented invariants; failures are usage errors.
    pub fn validate(&self, scenario: Scenario) -> anyhow::Result<()> {
        if let Some(s) = self.scenario {
            if s != scenario {
                bail!("config is for scenario {:?}, invoked as {:?}", s.name(), scenario.name());
            }
        }
        let pow2 = |n: usize| n >= 2 && n.is_power_of_two();
        if !pow2(self.grid.nx) || !pow2(self.grid.ny) {
            bail!("grid sizes must be powers of two (nx = {}, ny = {})", self.grid.nx, self.grid.ny);
        }
        if self.grid.ny < 4 {
            bail!("ny must be at least 4");
        }
        if self.d != 1 && scenario != Scenario::Dispersion {
            bail!("scenario {} needs d = 1 (got d = {})", scenario.name(), self.d);
        }
        if !(self.d == 1 || self.d == 2) {
            bail!("d must be 1 or 2");
        }
        if !(self.t_end > 0.0) || !(self.dt > 0.0) {
            bail!("dt and t_end must be positive");
        }
        if self.stride == 0 {
            bail!("stride must be positive");
        }
        let t = &self.tolerances;
        for (name, v) in [("zero", t.zero), ("bounded", t.bounded), ("c0", t.c0), ("dn", t.dn), ("budget", t.budget)] {
            if !(v > 0.0) {
                bail!("tolerance {name} must be positive");
            }
        }
        if !(self.interface.c.abs() < 1.0) {
            bail!("interface mean height must lie in (-1, 1)");
        }
        if self.truncation > 2 {
            bail!("truncation must be at most 2");
        }
        match self.constants {
            ConstantsConfig::Incompressible { rho, g } => {
                if !(rho[0] > 0.0 && rho[1] > 0.0 && g.is_finite()) {
                    bail!("densities must be positive");
                }
            }
            ConstantsConfig::Compressible { a, gamma, q, rho, .. } => {
                if !(a > 0.0 && gamma > 1.0 && q > 0.0 && rho[0] > 0.0 && rho[1] > 0.0) {
                    bail!("compressible constants need A > 0, gamma > 1, q > 0 and positive densities");
                }
                if matches!(scenario, Scenario::Simulate | Scenario::Budget | Scenario::Dispersion) {
                    bail!("scenario {} needs incompressible constants", scenario.name());
                }
            }
        }
        Ok(())
    }
}
