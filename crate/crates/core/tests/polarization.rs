use nanofiber_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn setup() -> (FiberSpec64, ModeSolution64, GuidedMode64) {
    let spec = FiberSpec64::silica_nanofiber();
    let sol = solve_he11(&spec).unwrap();
    let mode = GuidedMode::new(&spec, &sol).unwrap();
    (spec, sol, mode)
}

fn id(p: MainPolarization, d: Direction) -> ModeId {
    ModeId::new(p, d)
}

const XP: ModeId = ModeId { p: MainPolarization::X, d: Direction::PlusZ };
const XM: ModeId = ModeId { p: MainPolarization::X, d: Direction::MinusZ };

fn local(mode: &GuidedMode64, m: ModeId, x: f64, y: f64) -> LocalPolarization64 {
    local_polarization(&mode.field(m, x, y), &QuantizationFrame::default()).unwrap()
}

#[test]
fn trap_site_overlaps() {
    let (_, _, mode) = setup();
    let left = local(&mode, XP, -480.0, 0.0).overlap;
    let right = local(&mode, XP, 480.0, 0.0).overlap;
    assert!((left.xi_sigma_minus - 0.920_671_513).abs() < 1e-8, "{left:?}");
    assert!((right.xi_sigma_minus - 0.079_328_487).abs() < 1e-8, "{right:?}");
    assert!((left.xi_sigma_plus - right.xi_sigma_minus).abs() < 1e-12);
}

#[test]
fn no_pi_light_for_x_modes_on_axis_line() {
    let (_, _, mode) = setup();
    for d in [Direction::PlusZ, Direction::MinusZ] {
        for k in 0..=400 {
            let x = -2000.0 + 10.0 * k as f64;
            if x == 0.0 {
                continue;
            }
            let o = local(&mode, id(MainPolarization::X, d), x, 0.0).overlap;
            assert!(o.xi_pi < 1e-10, "x={x}: {o:?}");
        }
    }
}

#[test]
fn y_modes_are_pure_pi_on_axis_line() {
    let (_, _, mode) = setup();
    for k in 0..=200 {
        let x = -1000.0 + 10.0 * k as f64;
        let o = local(&mode, id(MainPolarization::Y, Direction::PlusZ), x, 0.0).overlap;
        assert!((o.xi_pi - 1.0).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn pi_fraction_bounded_on_figure_window() {
    let (spec, sol, _) = setup();
    let grid = GridSpec::square(1000.0, 200);
    for m in [XP, XM] {
        let map = overlap_map(&spec, &sol, m, &QuantizationFrame::default(), &grid).unwrap();
        let max = map.values.iter().map(|o| o.xi_pi).fold(0.0, f64::max);
        assert!(max <= 0.09, "{max}");
        assert!(max > 0.07, "{max}");
    }
}

#[test]
fn chirality_invariants_on_grid() {
    let (spec, sol, _) = setup();
    let grid = GridSpec::square(1000.0, 120);
    let f = QuantizationFrame::default();
    let plus = overlap_map(&spec, &sol, XP, &f, &grid).unwrap();
    let minus = overlap_map(&spec, &sol, XM, &f, &grid).unwrap();
    let n = grid.nx;
    for iy in 0..grid.ny {
        for ix in 0..n {
            let a = plus.at(ix, iy);
            let b = minus.at(ix, iy);
            let mirrored = plus.at(n - 1 - ix, iy);
            assert!((a.xi_sigma_plus - b.xi_sigma_minus).abs() < 1e-10);
            assert!((a.xi_sigma_minus - b.xi_sigma_plus).abs() < 1e-10);
            assert!((a.xi_sigma_plus - mirrored.xi_sigma_minus).abs() < 1e-10);
            assert!((a.xi_pi - mirrored.xi_pi).abs() < 1e-10);
        }
    }
}

#[test]
fn transverse_spin_locked_to_direction_and_side() {
    let (_, _, mode) = setup();
    let s = local(&mode, XP, -480.0, 0.0).spin;
    assert!((s.sy + 0.841_343).abs() < 1e-5, "{s:?}");
    assert!(s.sx.abs() < 1e-12 && s.sz.abs() < 1e-12);
    let opposite_side = local(&mode, XP, 480.0, 0.0).spin;
    assert!((opposite_side.sy + s.sy).abs() < 1e-12);
    let backward = local(&mode, XM, -480.0, 0.0).spin;
    assert!((backward.sy + s.sy).abs() < 1e-12);
    // on y = 0 the spin equals the σ imbalance
    let o = local(&mode, XP, -480.0, 0.0).overlap;
    assert!((s.sy - (o.xi_sigma_plus - o.xi_sigma_minus)).abs() < 1e-12);
}

#[test]
fn frame_along_y_matches_default() {
    let a = QuantizationFrame64::along_axis([0.0, 1.0, 0.0]).unwrap();
    let b = QuantizationFrame64::default();
    for (u, v) in a.vectors().iter().zip(b.vectors().iter()) {
        assert!((*u - *v).norm() < 1e-15);
    }
}

#[test]
fn zero_field_and_non_unit_vectors_rejected() {
    assert!(matches!(unit_polarization(&FieldVector64::zero()), Err(Error::ZeroField)));
    let v = FieldVector64::real(1.0, 1.0, 0.0);
    assert!(matches!(overlaps(&v, &QuantizationFrame::default()), Err(Error::NonUnitVector(_))));
    assert!(QuantizationFrame64::along_axis([0.0, 0.0, 0.0]).is_err());
}

#[test]
fn empty_grid_rejected() {
    let (spec, sol, _) = setup();
    let mut grid = GridSpec::square(1000.0, 10);
    grid.nx = 1;
    assert!(matches!(
        polarization_map(&spec, &sol, XP, &QuantizationFrame::default(), &grid),
        Err(Error::EmptyGrid(_))
    ));
}

fn c() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn overlaps_complete(ex in c(), ey in c(), ez in c(), ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0) {
        let v = FieldVector64::new(ex, ey, ez);
        prop_assume!(v.norm() > 1e-3);
        prop_assume!((ax * ax + ay * ay + az * az).sqrt() > 1e-3);
        let frame = QuantizationFrame64::along_axis([ax, ay, az]).unwrap();
        let u = unit_polarization(&v).unwrap();
        let o = overlaps(&u, &frame).unwrap();
        prop_assert!((o.sum() - 1.0).abs() < 1e-12);
        let s = spin_density(&u).unwrap();
        prop_assert!(s.norm() <= 1.0 + 1e-12);
        // spin projected on the axis equals the σ imbalance
        let n = frame.axis();
        let proj = s.sx * n[0] + s.sy * n[1] + s.sz * n[2];
        prop_assert!((proj - (o.xi_sigma_plus - o.xi_sigma_minus)).abs() < 1e-12);
    }

    #[test]
    fn mode_overlaps_complete(x in -1500.0f64..1500.0, y in -1500.0f64..1500.0, k in 0usize..4) {
        let (_, _, mode) = setup();
        prop_assume!(x.hypot(y) > 1.0);
        let o = local(&mode, ModeId::ALL[k], x, y).overlap;
        prop_assert!((o.sum() - 1.0).abs() < 1e-12);
    }
}
