use std::f64::consts::PI;

use ewlab_core::elliptic::{
    compressible_pressure_consistency, divcurl_solve, pressure_incompressible, pressure_residual, solve_laplace,
    BcKind, Boundary, CompressiblePhase, DivCurlData, EllipticProblem, TransmissionData, TransmissionSolver, Velocity,
};
use ewlab_core::state::{entropy_wave_state, EntropyWaveSpec};
use ewlab_core::{Error, Grid, HarmonicMap, InterfaceState, PeriodicField, Side, StripField};

fn wavy(n: usize) -> InterfaceState {
    let g = Grid::line(n).unwrap();
    InterfaceState::from_fn(&g, |x| 0.15 * x[0].sin() + 0.05 * (2.0 * x[0]).cos(), |_| 0.0).unwrap()
}

#[test]
fn poisson_manufactured_solution() {
    // u = sin x z² + e^z cos x, Δu = sin x (2 - z²)
    let u = |x: f64, z: f64| x.sin() * z * z + z.exp() * x.cos();
    let mut errs = Vec::new();
    for n in [8usize, 16, 32] {
        let f = wavy(n);
        let map = HarmonicMap::new(&f, Side::Minus, n).unwrap();
        let src = StripField::from_fn(&map, |x, z| x.sin() * (2.0 - z * z));
        let exact = StripField::from_fn(&map, u);
        let iface = exact.interface_trace();
        // ∂_3 u at z = -1
        let wall: Vec<f64> = (0..n).map(|i| {
            let x = 2.0 * PI * i as f64 / n as f64;
            -2.0 * x.sin() + (-1.0f64).exp() * x.cos()
        }).collect();
        let sol = solve_laplace(&EllipticProblem::new(
            &map,
            src.values().to_vec(),
            Boundary::Dirichlet(iface),
            Boundary::Neumann(wall),
        ))
        .unwrap();
        errs.push(sol.max_diff(&exact));
    }
    assert!(errs[2] < 1e-9, "{errs:?}");
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn hydrostatic_pressure_is_exact() {
    // on a flat interface z = c the unforced-flow pressure is -ρ g (z - c)
    let g = Grid::line(16).unwrap();
    let c = 0.3;
    let f = InterfaceState::flat(&g, c).unwrap();
    let maps = [HarmonicMap::new(&f, Side::Minus, 16).unwrap(), HarmonicMap::new(&f, Side::Plus, 16).unwrap()];
    let u = [Velocity::zeros(&maps[0]), Velocity::zeros(&maps[1])];
    let rho = [2.0, 1.0];
    let p = pressure_incompressible([&u[0], &u[1]], rho, 1.5).unwrap();
    for k in 0..2 {
        let exact = StripField::from_fn(&maps[k], |_, z| -rho[k] * 1.5 * (z - c));
        assert!(p[k].max_diff(&exact) < 1e-11, "{}", p[k].max_diff(&exact));
    }
    assert!(matches!(pressure_incompressible([&u[1], &u[0]], rho, 1.0), Err(Error::Shape(_))));

    // curved interface: harmonic, vanishing on Γ_f, wall flux -ρ g;
    // the pointwise Laplacian is limited by the horizontal resolution of the map
    let mut worst = Vec::new();
    for (nx, ny) in [(16usize, 16usize), (64, 16)] {
        let f = wavy(nx);
        let maps = [HarmonicMap::new(&f, Side::Minus, ny).unwrap(), HarmonicMap::new(&f, Side::Plus, ny).unwrap()];
        let u = [Velocity::zeros(&maps[0]), Velocity::zeros(&maps[1])];
        let p = pressure_incompressible([&u[0], &u[1]], rho, 1.5).unwrap();
        let mut w: f64 = 0.0;
        for k in 0..2 {
            w = w.max(pressure_residual(&p[k], &u[k], rho[k]));
            assert!(p[k].interface_trace().iter().all(|v| v.abs() < 1e-12));
            assert!(p[k].dz().wall_trace().iter().all(|v| (v + rho[k] * 1.5).abs() < 1e-8));
        }
        worst.push(w);
    }
    assert!(worst[1] < worst[0] && worst[1] < 1e-6, "{worst:?}");
}

#[test]
fn pressure_of_a_steady_flow_satisfies_its_equation() {
    let f = wavy(32);
    let map = HarmonicMap::new(&f, Side::Minus, 24).unwrap();
    // u = ∇(cosh(z+1) cos x): harmonic potential flow, tangential on the wall
    let u = Velocity {
        u1: StripField::from_fn(&map, |x, z| -(z + 1.0).cosh() * x.sin()),
        u3: StripField::from_fn(&map, |x, z| (z + 1.0).sinh() * x.cos()),
    };
    let plus = HarmonicMap::new(&f, Side::Plus, 24).unwrap();
    let p = pressure_incompressible([&u, &Velocity::zeros(&plus)], [1.0, 1.0], 0.0).unwrap();
    assert!(pressure_residual(&p[0], &u, 1.0) < 1e-7);
    assert!(p[0].interface_trace().iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn transmission_recovers_harmonic_pair() {
    let n = 32;
    let f = wavy(n);
    let (mm, mp) = (HarmonicMap::new(&f, Side::Minus, 24).unwrap(), HarmonicMap::new(&f, Side::Plus, 24).unwrap());
    let wm = StripField::from_fn(&mm, |x, z| z.exp() * x.cos() + 0.2);
    let wp = StripField::from_fn(&mp, |x, z| (-2.0 * z).exp() * (2.0 * x).sin() + 0.5 * z);
    let (a, b) = ([1.0, 2.0], [2.0, 1.0]);
    let (tm, tp) = (wm.interface_trace(), wp.interface_trace());
    let (nm, np) = (wm.conormal_trace(), wp.conormal_trace());
    let jv: Vec<f64> = (0..n).map(|i| a[0] * tm[i] - a[1] * tp[i]).collect();
    let jf: Vec<f64> = (0..n).map(|i| b[0] * nm[i] - b[1] * np[i]).collect();
    let zero = vec![0.0; mm.grid.len()];
    let solver = TransmissionSolver::new(&mm, &mp, [BcKind::Dirichlet, BcKind::Dirichlet], a, b).unwrap();
    let out = solver
        .solve(&TransmissionData {
            source: [&zero, &zero],
            jump_value: &jv,
            jump_flux: &jf,
            wall: [&wm.wall_trace(), &wp.wall_trace()],
        })
        .unwrap();
    assert!(out[0].max_diff(&wm) < 1e-9, "{}", out[0].max_diff(&wm));
    assert!(out[1].max_diff(&wp) < 1e-9, "{}", out[1].max_diff(&wp));
    assert!(TransmissionSolver::new(&mp, &mm, [BcKind::Dirichlet; 2], a, b).is_err());
}

#[test]
fn divcurl_rejects_incompatible_flux() {
    let f = wavy(16);
    let map = HarmonicMap::new(&f, Side::Minus, 8).unwrap();
    let zero = StripField::zeros(&map);
    let theta = vec![0.1; 16];
    let r = divcurl_solve(&DivCurlData { omega: &zero, sigma: &zero, theta: &theta, alpha: 0.0 });
    assert!(matches!(r, Err(Error::IncompatibleData(_))));
}

#[test]
fn divcurl_rigid_shear() {
    // u = (z, 0): ω = -1, σ = 0, u·N = -f_x f on Γ_f, wall mean -1
    let f = wavy(32);
    let map = HarmonicMap::new(&f, Side::Minus, 16).unwrap();
    let omega = StripField::constant(&map, -1.0);
    let zero = StripField::zeros(&map);
    let fv = f.f.real_samples();
    let theta: Vec<f64> = map.fx().iter().zip(&fv).map(|(d, h)| -d * h).collect();
    let u = divcurl_solve(&DivCurlData { omega: &omega, sigma: &zero, theta: &theta, alpha: -1.0 }).unwrap();
    assert!(u.u1.max_diff(&StripField::from_fn(&map, |_, z| z)) < 1e-10);
    assert!(u.u3.max_abs() < 1e-10);
}

#[test]
fn compressible_consistency_of_an_entropy_wave() {
    let g = Grid::line(32).unwrap();
    let f = PeriodicField::from_fn(&g, |x| 0.05 * x[0].cos());
    let spec = EntropyWaveSpec { shear: [0.2, 0.1], g: 0.0, ..EntropyWaveSpec::default() };
    let st = entropy_wave_state(&f, 0.0, 16, &spec).unwrap();
    let zeros = [StripField::zeros(&st.p[0].map().clone()), StripField::zeros(&st.p[1].map().clone())];
    let ph = |k: usize| CompressiblePhase { p: &st.p[k], u: &st.u[k], s: &st.s[k], dtp: Some(&zeros[k]), dt2p: Some(&zeros[k]) };
    let (a, b) = (ph(0), ph(1));
    let r = compressible_pressure_consistency([&a, &b], st.a, st.gamma).unwrap();
    for k in 0..2 {
        assert!(r.interior[k] < 1e-9 && r.interface[k] < 1e-12 && r.wall[k] < 1e-9, "{r:?}");
    }
    assert!((r.q - spec.q).abs() < 1e-12);
    let missing = CompressiblePhase { dtp: None, ..a };
    assert!(matches!(
        compressible_pressure_consistency([&missing, &b], st.a, st.gamma),
        Err(Error::IncompleteState(_))
    ));
}
