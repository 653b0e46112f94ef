use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use anyhow::anyhow;
use ewlab_core::dn::{dn_flat_symbol, DnOperator};
use ewlab_core::dynamics::{
    interface_energy_budget, linear_dispersion, sim_record, stability_classify, stability_classify_background,
    BudgetFrame, FlatBackground, RecordOptions, ReferenceIntegrator, SimParams, SimRecord, SimState,
};
use ewlab_core::geometry::modal_height;
use ewlab_core::state::{
    check_compatibility, classify_discontinuity, energy_norm, entropy_wave_state, hydrostatic_state, read_snapshot,
    tangential_pressure_check, taylor_sign, write_snapshot, EntropyWaveSpec, Tolerances, TwoPhaseState,
};
use ewlab_core::{Error, Grid, InterfaceState, PeriodicField, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{ConstantsConfig, RunConfig, Scenario};
use crate::output::{write_json, RecordWriter};

/// Terminal failure of a run, mapped to the process exit status.
pub enum Failure {
    Usage(anyhow::Error),
    Validation(anyhow::Error),
    Solver(Error, String),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Solver(e, _) => match e {
                Error::HyperbolicityLoss { .. } => 4,
                Error::Cfl { .. } => 5,
                Error::BijectivityLoss { .. } | Error::InterfaceExit { .. } => 6,
                _ => 1,
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Failure::Runtime(_) => "error",
            Failure::Usage(_) => "usage error",
            Failure::Validation(_) => "validation failure",
            Failure::Solver(e, _) => match e {
                Error::HyperbolicityLoss { .. } => "hyperbolicity loss",
                Error::Cfl { .. } => "CFL violation",
                Error::BijectivityLoss { .. } | Error::InterfaceExit { .. } => "bijectivity loss",
                _ => "solver error",
            },
        }
    }

    pub fn error(&self) -> anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Validation(e) | Failure::Runtime(e) => anyhow!("{e:#}"),
            Failure::Solver(e, ctx) => anyhow!("{ctx}: {e}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

trait Context<T> {
    fn during(self, ctx: impl fmt::Display) -> Result<T, Failure>;
}

impl<T> Context<T> for ewlab_core::Result<T> {
    fn during(self, ctx: impl fmt::Display) -> Result<T, Failure> {
        self.map_err(|e| Failure::Solver(e, ctx.to_string()))
    }
}

/// Files written into the output directory and the run outcome.
struct Outcome {
    snapshots: Vec<String>,
    result: serde_json::Value,
    failure: Option<Failure>,
}

impl Outcome {
    fn ok(result: serde_json::Value) -> Self {
        Outcome { snapshots: Vec::new(), result, failure: None }
    }
}

pub fn run(scenario: Scenario, cfg: &RunConfig) -> Result<String, Failure> {
    let out = cfg.out.clone();
    let mut rec = RecordWriter::create(&out)?;
    let outcome = match scenario {
        Scenario::Simulate => simulate(cfg, &out, &mut rec, false)?,
        Scenario::Budget => simulate(cfg, &out, &mut rec, true)?,
        Scenario::Dispersion => dispersion(cfg, &mut rec)?,
        Scenario::DnTest => dn_test(cfg, &mut rec)?,
        Scenario::Energy => energy(cfg, &out, &mut rec)?,
        Scenario::CheckState => check_state(cfg, &out, &mut rec)?,
    };
    let rows = rec.rows;
    rec.finish()?;
    let status = match &outcome.failure {
        None => json!({ "code": 0, "label": "ok" }),
        Some(f) => json!({ "code": f.code(), "label": f.label(), "message": format!("{:#}", f.error()) }),
    };
    let manifest = json!({
        "tool": "ewlab",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": ewlab_core::VERSION,
        "scenario": scenario.name(),
        "config": cfg,
        "grid": { "d": cfg.d, "nx": cfg.grid.nx, "ny": cfg.grid.ny, "c": cfg.interface.c },
        "seed": cfg.seed,
        "files": { "record": "record.jsonl", "rows": rows, "snapshots": outcome.snapshots },
        "result": outcome.result,
        "status": status,
    });
    write_json(&out.join("manifest.json"), &manifest)?;
    match outcome.failure {
        Some(f) => Err(f),
        None => Ok(format!(
            "{}: {} records in {}\n{}",
            scenario.name(),
            rows,
            out.display(),
            ewlab_core::json::to_string17(&outcome.result).unwrap_or_default()
        )),
    }
}

fn tolerances(cfg: &RunConfig) -> Tolerances {
    Tolerances { zero: cfg.tolerances.zero, bounded: cfg.tolerances.bounded }
}

fn grid(cfg: &RunConfig) -> Result<Grid, Failure> {
    Grid::line(cfg.grid.nx).during("building the interface grid")
}

/// Initial interface height: modal part plus the seeded perturbation.
fn initial_height(cfg: &RunConfig, g: &Grid) -> Result<PeriodicField, Failure> {
    let mut f = modal_height(g, cfg.interface.c, &cfg.interface.modes);
    if cfg.interface.noise != 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let kmax = (cfg.grid.nx / 8).max(1) as i64;
        let modes: Vec<ewlab_core::InterfaceMode> = (1..=kmax)
            .map(|k| ewlab_core::InterfaceMode {
                amplitude: cfg.interface.noise * rng.gen_range(-1.0..1.0) / (k * k) as f64,
                wavenumber: k,
                phase: rng.gen_range(0.0..2.0 * PI),
            })
            .collect();
        f = &f + &modal_height(g, 0.0, &modes);
    }
    Ok(f)
}

fn incompressible(cfg: &RunConfig) -> Result<([f64; 2], f64), Failure> {
    match cfg.constants {
        ConstantsConfig::Incompressible { rho, g } => Ok((rho, g)),
        ConstantsConfig::Compressible { .. } => Err(Failure::Usage(anyhow!("scenario needs incompressible constants"))),
    }
}

fn simulate(cfg: &RunConfig, out: &Path, rec: &mut RecordWriter, budget: bool) -> Result<Outcome, Failure> {
    let (rho, g) = incompressible(cfg)?;
    let grid = grid(cfg)?;
    let f = initial_height(cfg, &grid)?;
    let mu = modal_height(&grid, 0.0, &cfg.interface.potential_modes);
    let mut s = SimState::new(f, mu).during("initial state")?;
    let integ = ReferenceIntegrator::new(SimParams::new(rho, g, cfg.grid.ny)).during("integrator setup")?;
    let opts = RecordOptions { kappa: cfg.kappa, modes: cfg.record_modes, c0: cfg.tolerances.c0, tolerances: tolerances(cfg) };
    let n = ((cfg.t_end / cfg.dt) - 1e-9).ceil().max(1.0) as u64;
    let dt = cfg.t_end / n as f64;
    let snap_dir = out.join("snapshots");
    let mut snapshots = Vec::new();
    let snap = |state: &TwoPhaseState, step: u64, list: &mut Vec<String>| -> Result<(), Failure> {
        let stem = format!("state_{step:06}");
        write_snapshot(&snap_dir, &stem, state, cfg.kappa).during("writing a snapshot")?;
        list.push(format!("snapshots/{stem}.json"));
        Ok(())
    };

    // rolling window of budget frames, each paired with its record
    let mut window: Vec<(SimRecord, BudgetFrame)> = Vec::new();
    let mut worst_defect: f64 = 0.0;
    let mut min_taylor = f64::INFINITY;
    let mut last_emitted = None;
    let mut last: Option<(SimRecord, TwoPhaseState)> = None;
    let mut failure = None;

    for i in 0..=n {
        if i > 0 {
            match integ.step(&s, dt) {
                Ok(next) => s = next,
                Err(e) => {
                    failure = Some(Failure::Solver(e, format!("step {i} at t = {}", s.time)));
                    break;
                }
            }
        }
        let emit = i % cfg.stride as u64 == 0 || i == n;
        if !(budget || emit) {
            continue;
        }
        let flow = integ.flow(&s).during(format!("velocity at step {i}"))?;
        let (record, state) = sim_record(&integ, &s, &flow, &opts).during(format!("diagnostics at step {i}"))?;
        min_taylor = min_taylor.min(record.min_taylor);
        if i == 0 {
            snap(&state, 0, &mut snapshots)?;
        }
        if cfg.stop_on_hyperbolicity_loss && !(record.min_taylor > 0.0) {
            rec.push(&record)?;
            failure =
                Some(Failure::Solver(Error::HyperbolicityLoss { min_taylor: record.min_taylor }, format!("step {i}")));
            last_emitted = Some(i);
            last = Some((record, state));
            break;
        }
        if budget {
            let frame = BudgetFrame::from_state(&state, s.time, cfg.kappa).during(format!("budget frame at step {i}"))?;
            window.push((record.clone(), frame));
            if window.len() == 3 {
                let b = interface_energy_budget([&window[0].1, &window[1].1, &window[2].1], dt)
                    .during(format!("budget at step {}", i - 1))?;
                worst_defect = worst_defect.max(b.relative_defect);
                let mid = i - 1;
                if mid % cfg.stride as u64 == 0 {
                    let mut r = window[1].0.clone();
                    r.budget = Some(b);
                    rec.push(&r)?;
                    last_emitted = Some(mid);
                }
                window.remove(0);
            }
        } else {
            rec.push(&record)?;
            last_emitted = Some(i);
        }
        last = Some((record, state));
    }

    // terminal record of the last good state
    if let Some((record, state)) = &last {
        if !budget && last_emitted != Some(record.step) {
            rec.push(record)?;
        }
        snap(state, record.step, &mut snapshots)?;
    }
    let mut result = json!({
        "steps": s.step,
        "dt": dt,
        "final_time": s.time,
        "min_taylor": min_taylor,
    });
    if budget {
        result["max_relative_closure_defect"] = json!(worst_defect);
        if failure.is_none() && worst_defect > cfg.tolerances.budget {
            failure = Some(Failure::Validation(anyhow!(
                "budget closure defect {worst_defect:.3e} exceeds {}",
                cfg.tolerances.budget
            )));
        }
    }
    Ok(Outcome { snapshots, result, failure })
}

fn dispersion(cfg: &RunConfig, rec: &mut RecordWriter) -> Result<Outcome, Failure> {
    let (rho, g) = incompressible(cfg)?;
    let bg = FlatBackground::new(rho, g, cfg.interface.c).during("background")?;
    println!("{:>4} {:>24} {:>24} {:>24}", "k", "omega2_exact", "omega2_principal", "growth_rate");
    for k in 1..=16 {
        let d = linear_dispersion(&bg, k as f64).during(format!("dispersion at k = {k}"))?;
        println!("{:>4} {:>24.16e} {:>24.16e} {:>24.16e}", k, d.omega2_exact, d.omega2_principal, d.growth_rate);
        rec.push(&d)?;
    }
    let stab = stability_classify_background(&bg, cfg.tolerances.c0);
    Ok(Outcome::ok(json!({ "taylor": bg.taylor(), "stability": stab })))
}

#[derive(Serialize)]
struct DnRow {
    side: Side,
    k: i64,
    computed: f64,
    exact: f64,
    relative_error: f64,
}

fn dn_test(cfg: &RunConfig, rec: &mut RecordWriter) -> Result<Outcome, Failure> {
    let grid = grid(cfg)?;
    let c = cfg.interface.c;
    let iface = InterfaceState::flat(&grid, c).during("flat interface")?;
    let kmax = 16.min(cfg.grid.nx as i64 / 2 - 1);
    let mut worst: f64 = 0.0;
    for side in [Side::Minus, Side::Plus] {
        let op = DnOperator::new(&iface, side, cfg.grid.ny).during("DN operator setup")?;
        for k in 0..=kmax {
            let e = PeriodicField::mode(&grid, [k, 0]);
            let out = op.apply(&e).during(format!("DN at k = {k}"))?;
            let exact = dn_flat_symbol(k as f64, c, side).during("flat symbol")?;
            let computed = out.coefficients()[grid.index_of([k, 0]).expect("mode on grid")].re;
            let relative_error = out.max_diff(&e.scale(exact)) / exact;
            worst = worst.max(relative_error);
            rec.push(&DnRow { side, k, computed, exact, relative_error })?;
        }
    }
    let mut outcome = Outcome::ok(json!({ "max_relative_error": worst, "k_max": kmax }));
    if !(worst < cfg.tolerances.dn) {
        outcome.failure =
            Some(Failure::Validation(anyhow!("max relative DN error {worst:.3e} is not below {}", cfg.tolerances.dn)));
    }
    Ok(outcome)
}

/// The snapshot named in the config, or a state constructed from the
/// constants: an entropy wave (compressible) or a hydrostatic state.
fn load_state(cfg: &RunConfig, out: &Path) -> Result<(TwoPhaseState, Vec<String>), Failure> {
    if let Some(p) = &cfg.snapshot {
        let snap = read_snapshot(p).during(format!("reading snapshot {}", p.display()))?;
        return Ok((snap.state, Vec::new()));
    }
    let grid = grid(cfg)?;
    let f = initial_height(cfg, &grid)?;
    let c = cfg.interface.c;
    let state: TwoPhaseState = match cfg.constants {
        ConstantsConfig::Compressible { a, gamma, q, rho, g, shear } => {
            let spec = EntropyWaveSpec { a, gamma, q, rho, shear, g };
            entropy_wave_state(&f, c, cfg.grid.ny, &spec).during("entropy-wave state")?.into()
        }
        ConstantsConfig::Incompressible { rho, g } => {
            hydrostatic_state(&f, c, cfg.grid.ny, rho, g, 0.0, 0.0).during("hydrostatic state")?.into()
        }
    };
    let stem = "state_000000";
    write_snapshot(&out.join("snapshots"), stem, &state, cfg.kappa).during("writing a snapshot")?;
    Ok((state, vec![format!("snapshots/{stem}.json")]))
}

fn energy(cfg: &RunConfig, out: &Path, rec: &mut RecordWriter) -> Result<Outcome, Failure> {
    let (state, snapshots) = load_state(cfg, out)?;
    let report = energy_norm(&state, cfg.kappa, cfg.truncation).during("energy norm")?;
    rec.push(&report)?;
    let result = json!({ "e_total": report.e_total, "f_total": report.f_total, "resolution_warning": report.resolution_warning });
    Ok(Outcome { snapshots, result, failure: None })
}

fn check_state(cfg: &RunConfig, out: &Path, rec: &mut RecordWriter) -> Result<Outcome, Failure> {
    let (state, snapshots) = load_state(cfg, out)?;
    let tol = tolerances(cfg);
    let trace = classify_discontinuity(&state, tol);
    let tangential = tangential_pressure_check(&state, tol);
    let order = if state.is_compressible() { 2 } else { 0 };
    let compat = check_compatibility(&state, order).during("compatibility conditions")?;
    let taylor = taylor_sign(&state);
    let stability = stability_classify(&state, cfg.tolerances.c0, tol);
    let row = json!({
        "classification": trace.class,
        "trace": trace,
        "tangential": tangential,
        "compatibility": compat,
        "taylor_min": taylor.min,
        "taylor_agreement": taylor.agreement,
        "stability": stability,
    });
    rec.push(&row)?;
    let result = json!({
        "classification": trace.class,
        "tangential_residual": tangential.residual,
        "compatibility_order1": compat.max_up_to(order.min(1)),
        "compatibility_max": compat.max_up_to(order),
    });
    Ok(Outcome { snapshots, result, failure: None })
}

