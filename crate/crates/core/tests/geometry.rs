use ewlab_core::geometry::{
    frame, harmonic_extension, modal_height, tangential_derivative, tangential_time_derivative, HarmonicMap,
    InterfaceMode, InterfaceState, Side, StripField,
};
use ewlab_core::spectral::{Grid, PeriodicField};
use ewlab_core::Error;
use proptest::prelude::*;

#[test]
fn flat_extension_matches_exact_profile() {
    // ℋ⁻ e^{ikx} on T × [-1, 0] with zero wall data: sinh(k(z+1))/sinh(k) e^{ikx}
    let g = Grid::line(32).unwrap();
    let f = InterfaceState::flat(&g, 0.0).unwrap();
    for k in [1i64, 3, 6] {
        let m = PeriodicField::mode(&g, [k, 0]).re();
        for side in [Side::Minus, Side::Plus] {
            let ext = harmonic_extension(&m, &f, side, 24).unwrap();
            let kk = k as f64;
            let exact = StripField::from_fn(ext.map(), |x, z| {
                let d = (z - side.wall()).abs();
                (kk * d).sinh() / kk.sinh() * (kk * x).cos()
            });
            assert!(ext.max_diff(&exact) < 1e-10, "k = {k} {side:?}");
        }
    }
}

#[test]
fn extension_reproduces_linear_functions() {
    // z is harmonic: interface data f(x), wall data −1 is not imposed (zero),
    // so test ℋ of the constant 1 on a flat strip: (z + 1)
    let g = Grid::line(16).unwrap();
    let f = InterfaceState::flat(&g, 0.2).unwrap();
    let one = PeriodicField::constant(&g, 1.0);
    let ext = harmonic_extension(&one, &f, Side::Minus, 16).unwrap();
    let exact = StripField::from_fn(ext.map(), |_, z| (z + 1.0) / 1.2);
    assert!(ext.max_diff(&exact) < 1e-12);
}

#[test]
fn curved_map_is_harmonic_and_bijective() {
    let g = Grid::line(64).unwrap();
    let f = InterfaceState::from_fn(&g, |x| 0.3 * x[0].sin() + 0.1 * (2.0 * x[0]).cos(), |_| 0.0).unwrap();
    for side in [Side::Minus, Side::Plus] {
        let m = HarmonicMap::new(&f, side, 32).unwrap();
        assert!(m.min_jacobian() > 0.1);
        let fv = f.f.real_samples();
        for i in 0..64 {
            assert!((m.z(i, 0) - fv[i]).abs() < 1e-12);
            assert!((m.z(i, 32) - side.wall()).abs() < 1e-14);
        }
        // the height map itself is harmonic in physical coordinates: z has zero Laplacian
        let z = StripField::from_fn(&m, |_, z| z);
        assert!(z.laplacian().max_abs() < 1e-8);
        let x = StripField::from_fn(&m, |x, _| x.sin());
        // ∂_z of a function of x only vanishes
        assert!(x.dz().max_abs() < 1e-9);
    }
}

#[test]
fn tangential_derivative_of_extension_is_interface_derivative() {
    let g = Grid::line(64).unwrap();
    let f = InterfaceState::from_fn(&g, |x| 0.2 * x[0].cos(), |_| 0.0).unwrap();
    let data = PeriodicField::from_fn(&g, |x| (2.0 * x[0]).sin());
    let w = harmonic_extension(&data, &f, Side::Plus, 32).unwrap();
    let t = tangential_derivative(&w, 0).unwrap();
    let expect = data.derivative(0).real_samples();
    let tr = t.interface_trace();
    for i in 0..64 {
        assert!((tr[i] - expect[i]).abs() < 1e-9);
    }
    assert!(matches!(tangential_derivative(&w, 1), Err(Error::Domain(_)) | Err(Error::UnsupportedDimension(_))));
    // a steady field has ∂̄_t equal to the flux along the moving interface
    let zero = StripField::zeros(w.map());
    let tt = tangential_time_derivative(&w, &zero).unwrap();
    assert!(tt.max_abs().is_finite());
}

#[test]
fn bijectivity_loss_is_reported() {
    let g = Grid::line(32).unwrap();
    let f = InterfaceState::from_fn(&g, |x| 0.97 * x[0].sin(), |_| 0.0);
    let err = match f {
        Err(e) => e,
        Ok(f) => HarmonicMap::new(&f, Side::Minus, 16).map(|_| ()).unwrap_err(),
    };
    assert!(matches!(err, Error::BijectivityLoss { .. } | Error::InterfaceExit { .. }), "{err:?}");
    let out = InterfaceState::from_fn(&g, |x| 1.2 * x[0].sin(), |_| 0.0);
    assert!(matches!(out, Err(Error::InterfaceExit { .. })));
}

#[test]
fn modal_heights() {
    let g = Grid::line(16).unwrap();
    let modes = [
        InterfaceMode { amplitude: 0.1, wavenumber: 2, phase: 0.0 },
        InterfaceMode { amplitude: 0.05, wavenumber: 3, phase: 1.0 },
    ];
    let f = modal_height(&g, 0.2, &modes);
    assert!((f.mean().re - 0.2).abs() < 1e-15);
    let i = g.index_of([2, 0]).unwrap();
    assert!((f.coefficients()[i].re - 0.05).abs() < 1e-15);
}

#[test]
fn mirror_maps_swap_sides() {
    let g = Grid::line(16).unwrap();
    let f = InterfaceState::from_fn(&g, |x| 0.1 * x[0].sin(), |_| 0.0).unwrap();
    let m = HarmonicMap::new(&f, Side::Minus, 8).unwrap();
    let r = m.mirror().unwrap();
    assert_eq!(r.side(), Side::Plus);
    for i in 0..16 {
        // same interface, opposite wall
        assert!((r.z(i, 0) - m.z(i, 0)).abs() < 1e-14);
        assert!((r.z(i, 8) - 1.0).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frame_is_orthogonal(a in -0.4f64..0.4, b in -0.2f64..0.2, k in 1i64..5) {
        let g = Grid::line(32).unwrap();
        let f = InterfaceState::from_fn(&g, |x| a * x[0].sin() + b * (k as f64 * x[0]).cos(), |_| 0.0).unwrap();
        prop_assert!(frame(&f).orthogonality_defect() < 1e-13);
    }

    #[test]
    fn harmonic_map_jacobian_positive(a in -0.15f64..0.15, k in 1i64..4) {
        // slopes up to 0.45 stay inside the admissible set
        let g = Grid::line(32).unwrap();
        let f = InterfaceState::from_fn(&g, |x| a * (k as f64 * x[0]).sin(), |_| 0.0).unwrap();
        for side in [Side::Minus, Side::Plus] {
            let m = HarmonicMap::new(&f, side, 16).unwrap();
            prop_assert!(m.min_jacobian() > 0.1);
        }
    }
}
