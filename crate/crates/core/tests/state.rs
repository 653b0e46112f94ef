use approx::assert_relative_eq;
use ewlab_core::state::{
    check_compatibility, classify_discontinuity, energy_norm, entropy_wave_state, eos_density, eos_entropy,
    eos_pressure, hydrostatic_state, read_snapshot, taylor_sign, tangential_pressure_check, write_snapshot,
    Discontinuity, EntropyWaveSpec, Tolerances, TwoPhaseState,
};
use ewlab_core::{Error, Grid, PeriodicField};
use proptest::prelude::*;

fn wave(n: usize) -> PeriodicField {
    let g = Grid::line(n).unwrap();
    PeriodicField::from_fn(&g, |x| 0.05 * x[0].sin() + 0.02 * (2.0 * x[0]).cos())
}

fn entropy_wave() -> TwoPhaseState {
    let spec = EntropyWaveSpec { shear: [0.3, 0.2], ..EntropyWaveSpec::default() };
    entropy_wave_state(&wave(32), 0.0, 16, &spec).unwrap().into()
}

#[test]
fn equation_of_state_examples() {
    assert_relative_eq!(eos_pressure(2.0, 0.0, 1.0, 1.4).unwrap(), 2f64.powf(1.4), max_relative = 1e-15);
    assert_relative_eq!(eos_pressure(1.0, 1.0, 3.0, 2.0).unwrap(), 3.0 * 1f64.exp(), max_relative = 1e-15);
    assert_relative_eq!(eos_density(8.0, 0.0, 1.0, 3.0).unwrap(), 2.0, max_relative = 1e-15);
    assert!(eos_density(-1.0, 0.0, 1.0, 1.4).is_err());
    assert!(eos_pressure(1.0, 0.0, 1.0, 0.5).is_err());
    assert!(eos_entropy(1.0, 0.0, 1.0, 1.4).is_err());
}

proptest! {
    #[test]
    fn equation_of_state_round_trip(rho in 0.1f64..10.0, s in -2.0f64..2.0, a in 0.2f64..5.0, gamma in 1.05f64..3.0) {
        let p = eos_pressure(rho, s, a, gamma).unwrap();
        prop_assert!((eos_density(p, s, a, gamma).unwrap() / rho - 1.0).abs() < 1e-13);
        prop_assert!((eos_entropy(p, rho, a, gamma).unwrap() - s).abs() < 1e-12);
    }
}

#[test]
fn hydrostatic_classification_and_taylor_sign() {
    let st: TwoPhaseState = hydrostatic_state(&wave(32), 0.0, 16, [2.0, 1.0], 1.0, 0.0, 0.0).unwrap().into();
    let tol = Tolerances::default();
    let t = taylor_sign(&st);
    assert!(t.a.iter().all(|a| (a - 1.0 / 3.0).abs() < 1e-10), "{:?}", t.min);
    assert!(t.consistent(tol));
    assert!(tangential_pressure_check(&st, tol).residual < 1e-10);
    let r = classify_discontinuity(&st, tol);
    assert_eq!(r.class, Discontinuity::EntropyWave);
    assert!(r.jump_p < 1e-12 && r.jump_u_tangential < 1e-12);

    let same: TwoPhaseState = hydrostatic_state(&wave(32), 0.0, 16, [1.0, 1.0], 1.0, 0.0, 0.2).unwrap().into();
    assert_eq!(classify_discontinuity(&same, tol).class, Discontinuity::Continuous);
}

#[test]
fn entropy_wave_is_compatible() {
    let st = entropy_wave();
    let tol = Tolerances::default();
    assert_eq!(classify_discontinuity(&st, tol).class, Discontinuity::EntropyWave);
    let c = check_compatibility(&st, 2).unwrap();
    assert!(c.max_up_to(1) < 1e-8, "{c:?}");
    // one shear profile on both sides: no velocity jump at all
    assert!(c.u_normal < 1e-10 && c.u_tangential < 1e-10);
    assert!(matches!(check_compatibility(&st, 3), Err(Error::UnsupportedOrder(3))));
}

#[test]
fn reflection_is_an_involution() {
    for st in [entropy_wave(), hydrostatic_state(&wave(16), 0.1, 8, [3.0, 1.0], 2.0, 0.5, 0.1).unwrap().into()] {
        let r = st.reflected().unwrap();
        let rr = r.reflected().unwrap();
        for k in 0..2 {
            assert!(rr.pressure(k).max_diff(st.pressure(k)) < 1e-14);
            assert!(rr.velocity(k).u3.max_diff(&st.velocity(k).u3) < 1e-14);
        }
        // Taylor sign and discontinuity class are frame invariants
        assert!((taylor_sign(&r).min - taylor_sign(&st).min).abs() < 1e-9);
        let tol = Tolerances::default();
        assert_eq!(classify_discontinuity(&r, tol).class, classify_discontinuity(&st, tol).class);
    }
}

#[test]
fn energy_grows_with_kappa() {
    let st = entropy_wave();
    let mut prev = 0.0;
    for kappa in 2..=4 {
        let e = energy_norm(&st, kappa, 0).unwrap();
        assert!(e.e_total > prev, "kappa = {kappa}");
        assert!(e.e_entry("f").is_some() && e.f_entry("u[minus]").is_some());
        prev = e.e_total;
    }
    let e2 = energy_norm(&st, 4, 2).unwrap();
    assert!(e2.e_total >= energy_norm(&st, 4, 0).unwrap().e_total);
}

#[test]
fn snapshot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (stem, st) in [
        ("cmp", entropy_wave()),
        ("inc", hydrostatic_state(&wave(16), 0.0, 8, [2.0, 1.0], 1.0, 0.0, 0.0).unwrap().into()),
    ] {
        let path = write_snapshot(dir.path(), stem, &st, 4).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.manifest.nx, st.nx());
        assert_eq!(back.manifest.constants, st.constants());
        assert_eq!(back.state.interface().f.real_samples(), st.interface().f.real_samples());
        for k in 0..2 {
            assert_eq!(back.state.pressure(k).values(), st.pressure(k).values());
            assert_eq!(back.state.velocity(k).u1.values(), st.velocity(k).u1.values());
        }
    }
    assert!(read_snapshot(&dir.path().join("missing.json")).is_err());
}
