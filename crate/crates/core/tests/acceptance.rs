//! Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;

use nanofiber_core::fibermode::VACUUM_IMPEDANCE_OHM;
use nanofiber_core::specfun::{i_table, j_table, k_table, y_table};
use nanofiber_core::*;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

type Outcome = std::result::Result<String, String>;

struct Ctx {
    spec: FiberSpec64,
    sol: ModeSolution64,
    mode: GuidedMode64,
    model: EmissionModel64,
}

const XP: ModeId = ModeId { p: MainPolarization::X, d: Direction::PlusZ };
const XM: ModeId = ModeId { p: MainPolarization::X, d: Direction::MinusZ };

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn frame() -> QuantizationFrame64 {
    QuantizationFrame::default()
}

fn xi(ctx: &Ctx, id: ModeId, x: f64, y: f64) -> std::result::Result<PolarizationOverlap64, String> {
    Ok(local_polarization(&ctx.mode.field(id, x, y), &frame()).map_err(err)?.overlap)
}

fn site(x: f64, y: f64, m: i32) -> std::result::Result<AtomSite64, String> {
    Ok(AtomSite::new(x, y, TransitionSpec::cs_d2(m).map_err(err)?))
}

fn criterion_1(ctx: &Ctx) -> Outcome {
    let left = xi(ctx, XP, -480.0, 0.0)?.xi_sigma_minus;
    let right = xi(ctx, XP, 480.0, 0.0)?.xi_sigma_minus;
    ensure(
        (left - 0.92).abs() <= 0.01 && (right - 0.08).abs() <= 0.01,
        format!("xi_sigma_minus(-480,0) = {left:.6}, xi_sigma_minus(+480,0) = {right:.6}"),
    )
}

fn criterion_2(ctx: &Ctx) -> Outcome {
    let mut axis_max = 0.0f64;
    for id in [XP, XM] {
        for k in 0..=400 {
            let x = -2000.0 + 10.0 * k as f64;
            if x != 0.0 {
                axis_max = axis_max.max(xi(ctx, id, x, 0.0)?.xi_pi);
            }
        }
    }
    let grid = GridSpec::square(1000.0, 200);
    let p_x_max = {
        let mut m = 0.0f64;
        for id in [XP, XM] {
            let map = overlap_map(&ctx.spec, &ctx.sol, id, &frame(), &grid).map_err(err)?;
            m = map.values.iter().fold(m, |a, o| a.max(o.xi_pi));
        }
        m
    };
    ensure(
        axis_max < 1e-10 && p_x_max <= 0.09,
        format!("max xi_pi on y=0 = {axis_max:.2e}, max xi_pi on 200x200 grid (p=x) = {p_x_max:.4}"),
    )
}

fn criterion_3(ctx: &Ctx) -> Outcome {
    let ax = ctx.mode.intensity(XP, -480.0, 0.0);
    let ay = ctx.mode.intensity(ModeId::new(MainPolarization::Y, Direction::PlusZ), -480.0, 0.0);
    let ratio = ay / ax;
    ensure((ratio - 0.36).abs() <= 0.02, format!("alpha_y/alpha_x = {ratio:.6}"))
}

fn criterion_4() -> Outcome {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let t1 = branching(&TransitionSpec::cs_d2(-1).map_err(err)?).map_err(err)?;
    let t5 = branching(&TransitionSpec::cs_d2(-5).map_err(err)?).map_err(err)?;
    let ok1 = (t1.p_sigma_plus.clone(), t1.p_pi.clone(), t1.p_sigma_minus.clone()) == (r(2, 15), r(8, 15), r(5, 15));
    let ok5 = t5.p_sigma_plus.is_zero() && t5.p_pi.is_zero() && t5.p_sigma_minus.is_one();
    ensure(
        ok1 && ok5,
        format!(
            "m'=-1 -> ({}, {}, {}), m'=-5 -> ({}, {}, {})",
            t1.p_sigma_plus, t1.p_pi, t1.p_sigma_minus, t5.p_sigma_plus, t5.p_pi, t5.p_sigma_minus
        ),
    )
}

fn criterion_5(ctx: &Ctx) -> Outcome {
    let stretched = ctx.model.eta_fractions(&site(-480.0, 0.0, -5)?).map_err(err)?.favored_fraction();
    let m0 = ctx.model.eta_fractions(&site(-480.0, 0.0, -1)?).map_err(err)?.favored_fraction();
    let mut swap = 0.0f64;
    for m in -5..=5 {
        let l = ctx.model.eta_fractions(&site(-480.0, 0.0, m)?).map_err(err)?;
        let r = ctx.model.eta_fractions(&site(480.0, 0.0, m)?).map_err(err)?;
        swap = swap.max((l.eta_1 - r.eta_2).abs()).max((l.eta_2 - r.eta_1).abs());
    }
    ensure(
        (stretched - 0.92).abs() <= 0.01 && (m0 - 0.60).abs() <= 0.01 && swap < 1e-10,
        format!("stretched eta = {stretched:.6}, m_F=0 preparation eta = {m0:.6}, side-swap residual = {swap:.1e}"),
    )
}

fn criterion_6(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for x in [-480.0, 480.0] {
        let res = ctx.model.eta_fractions(&site(x, 0.0, -1)?).map_err(err)?;
        let cf = res.closed_form_eta_1.ok_or("closed form not evaluated")?;
        worst = worst.max((cf - res.eta_1).abs());
    }
    ensure(worst < 1e-12, format!("|closed form - channel sum| = {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let sol = solve_scattering(&ScatterSpec64::silica_nanofiber()).map_err(err)?;
    let lp = |x: f64, y: f64| -> std::result::Result<LocalPolarization64, String> {
        local_polarization(&sol.total_field(x, y).map_err(err)?, &frame()).map_err(err)
    };
    let forward = lp(0.0, 250.0)?.intensity;
    let (l, r) = (lp(-480.0, 0.0)?, lp(480.0, 0.0)?);
    let mut trap = (l.intensity - r.intensity).abs();
    for c in Channel::ALL {
        trap = trap.max((l.overlap.get(c) - r.overlap.get(c)).abs());
    }
    let a = sol.spec.cylinder_radius_nm;
    let n2 = sol.spec.relative_index().powi(2);
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for k in 0..360 {
        let phi = 2.0 * PI * k as f64 / 360.0;
        let (x, y) = (a * phi.cos(), a * phi.sin());
        let (ei, hi) = sol.fields_on_side(x, y, Side::Core).map_err(err)?;
        let (eo, ho) = sol.fields_on_side(x, y, Side::Cladding).map_err(err)?;
        let [eri, epi, ezi] = ei.to_cylindrical(phi);
        let [ero, epo, ezo] = eo.to_cylindrical(phi);
        scale = scale.max(eo.norm()).max(ho.norm());
        for d in [(epi - epo).norm(), (ezi - ezo).norm(), (eri * n2 - ero).norm() / n2, (hi - ho).norm()] {
            worst = worst.max(d);
        }
    }
    let boundary = worst / scale;
    ensure(
        (1.8..=2.2).contains(&forward) && trap < 1e-10 && boundary < 1e-8,
        format!("I(0,250) = {forward:.6}, trap-site mismatch = {trap:.1e}, boundary residual = {boundary:.1e}"),
    )
}

fn criterion_8(ctx: &Ctx) -> Outcome {
    let grid = GridSpec::square(1000.0, 200);
    let plus = overlap_map(&ctx.spec, &ctx.sol, XP, &frame(), &grid).map_err(err)?;
    let minus = overlap_map(&ctx.spec, &ctx.sol, XM, &frame(), &grid).map_err(err)?;
    let (mut dir, mut mirror) = (0.0f64, 0.0f64);
    let n = grid.nx;
    for iy in 0..grid.ny {
        for ix in 0..n {
            let (a, b, m) = (plus.at(ix, iy), minus.at(ix, iy), plus.at(n - 1 - ix, iy));
            dir = dir.max((a.xi_sigma_plus - b.xi_sigma_minus).abs());
            mirror = mirror.max((a.xi_sigma_plus - m.xi_sigma_minus).abs());
        }
    }
    ensure(dir < 1e-10 && mirror < 1e-10, format!("direction residual = {dir:.1e}, mirror residual = {mirror:.1e}"))
}

fn wronskian_residual() -> std::result::Result<f64, String> {
    let mut worst = 0.0f64;
    for k in 0..=60 {
        let x = 10f64.powf(-2.0 + k as f64 * (50f64.log10() + 2.0) / 60.0);
        let (j, y, i, kk) = (
            j_table(6, x).map_err(err)?,
            y_table(6, x).map_err(err)?,
            i_table(6, x).map_err(err)?,
            k_table(6, x).map_err(err)?,
        );
        for n in 0..=5 {
            let want = 2.0 / (PI * x);
            let w_jy = j.values[n + 1] * y.values[n] - j.values[n] * y.values[n + 1];
            let w_ik = i.values[n] * kk.values[n + 1] + i.values[n + 1] * kk.values[n];
            worst = worst.max((w_jy / want - 1.0).abs()).max((w_ik * x - 1.0).abs());
        }
    }
    Ok(worst)
}

fn poynting_power(mode: &GuidedMode64, id: ModeId) -> f64 {
    let a = mode.spec().radius_nm;
    let q = mode.solution().q;
    let n_phi = 24;
    let ring = |r: f64, side: Side| -> f64 {
        let mut s = 0.0;
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            let (e, h) = mode.fields_on_side(id, r * phi.cos(), r * phi.sin(), side);
            let sz: Complex64 = e.ex * h.ey.conj() - e.ey * h.ex.conj();
            s += sz.re;
        }
        0.5 * s * 2.0 * PI / n_phi as f64 * r
    };
    let simpson = |lo: f64, hi: f64, panels: usize, side: Side| {
        let h = (hi - lo) / panels as f64;
        let mut s = ring(lo, side) + ring(hi, side);
        for i in 1..panels {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * ring(lo + i as f64 * h, side);
        }
        s * h / 3.0
    };
    (simpson(0.0, a, 400, Side::Core) + simpson(a, a + 45.0 / q, 4000, Side::Cladding)) * 1e-18
}

fn fiber_continuity(ctx: &Ctx) -> f64 {
    let a = ctx.spec.radius_nm;
    let (n1, n2) = (ctx.spec.n_core.powi(2), ctx.spec.n_clad.powi(2));
    let mut worst = 0.0f64;
    for id in ModeId::ALL {
        let (mut w, mut scale) = (0.0f64, 0.0f64);
        for k in 0..360 {
            let phi = 2.0 * PI * k as f64 / 360.0;
            let (x, y) = (a * phi.cos(), a * phi.sin());
            let (ei, hi) = ctx.mode.fields_on_side(id, x, y, Side::Core);
            let (eo, ho) = ctx.mode.fields_on_side(id, x, y, Side::Cladding);
            let [eri, epi, ezi] = ei.to_cylindrical(phi);
            let [ero, epo, ezo] = eo.to_cylindrical(phi);
            scale = scale.max(eo.norm()).max(ho.norm() * VACUUM_IMPEDANCE_OHM);
            let dr = (eri * n1 - ero * n2).norm() / n1;
            for d in [(epi - epo).norm(), (ezi - ezo).norm(), dr, (hi - ho).norm() * VACUUM_IMPEDANCE_OHM] {
                w = w.max(d);
            }
        }
        worst = worst.max(w / scale);
    }
    worst
}

/// Closed-form `|<j1 M−q; 1 q | J M>|²`.
fn cg_closed_form(j1: f64, q: i32, j: f64, m: f64) -> f64 {
    let v = match ((j - j1).round() as i32, q) {
        (1, 1) => (j1 + m) * (j1 + m + 1.0) / ((2.0 * j1 + 1.0) * (2.0 * j1 + 2.0)),
        (1, 0) => (j1 - m + 1.0) * (j1 + m + 1.0) / ((2.0 * j1 + 1.0) * (j1 + 1.0)),
        (1, -1) => (j1 - m) * (j1 - m + 1.0) / ((2.0 * j1 + 1.0) * (2.0 * j1 + 2.0)),
        (0, 1) => (j1 + m) * (j1 - m + 1.0) / (2.0 * j1 * (j1 + 1.0)),
        (0, 0) => m * m / (j1 * (j1 + 1.0)),
        (0, -1) => (j1 - m) * (j1 + m + 1.0) / (2.0 * j1 * (j1 + 1.0)),
        (-1, 1) => (j1 - m) * (j1 - m + 1.0) / (2.0 * j1 * (2.0 * j1 + 1.0)),
        (-1, 0) => (j1 - m) * (j1 + m) / (j1 * (2.0 * j1 + 1.0)),
        (-1, -1) => (j1 + m + 1.0) * (j1 + m) / (2.0 * j1 * (2.0 * j1 + 1.0)),
        _ => 0.0,
    };
    v.max(0.0)
}

fn cg_residual() -> std::result::Result<f64, String> {
    let hi = HalfInt::from_int;
    let mut worst = 0.0f64;
    for me in -5i32..=5 {
        for q in -1..=1 {
            let mg = me - q;
            if mg.abs() > 4 {
                continue;
            }
            let exact = clebsch_gordan_sq(hi(4), hi(mg), q, hi(5), hi(me)).map_err(err)?;
            let exact = exact.numer().to_f64().unwrap_or(f64::NAN) / exact.denom().to_f64().unwrap_or(f64::NAN);
            worst = worst.max((exact - cg_closed_form(4.0, q, 5.0, me as f64)).abs());
        }
    }
    Ok(worst)
}

fn criterion_9(ctx: &Ctx) -> Outcome {
    let wronskian = wronskian_residual()?;
    let mut dispersion = 0.0f64;
    for (a, lambda) in [(250.0f64, 852.0f64), (200.0, 780.0), (300.0, 1064.0)] {
        let n1 = sellmeier_silica(lambda).map_err(err)?;
        let spec = FiberSpec::new(a, lambda, n1, 1.0).map_err(err)?;
        let sol = solve_he11(&spec).map_err(err)?;
        dispersion = dispersion.max(characteristic_residual(&spec, sol.n_eff).abs());
    }
    let continuity = fiber_continuity(ctx);
    let poynting = ModeId::ALL
        .iter()
        .map(|&id| (poynting_power(&ctx.mode, id) * id.d.sign::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let grid = GridSpec::square(1000.0, 100);
    let mut completeness = 0.0f64;
    for id in ModeId::ALL {
        let map = overlap_map(&ctx.spec, &ctx.sol, id, &frame(), &grid).map_err(err)?;
        completeness = map.values.iter().fold(completeness, |m, o| m.max((o.sum() - 1.0).abs()));
    }
    let cg = cg_residual()?;
    ensure(
        wronskian < 1e-10 && dispersion < 1e-10 && continuity < 1e-9 && poynting < 1e-6 && completeness < 1e-12 && cg < 1e-12,
        format!(
            "wronskian {wronskian:.1e}, dispersion {dispersion:.1e}, continuity {continuity:.1e}, poynting {poynting:.1e}, completeness {completeness:.1e}, CG {cg:.1e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let config = DetectionConfig64::new(100, 10_000, 1.0, 1.0, 20_240_101);
    let a = simulate_fraction(0.92, &config).map_err(err)?;
    let b = simulate_fraction(0.92, &config).map_err(err)?;
    let (ja, jb) =
        (serde_json::to_string(&a).map_err(|e| e.to_string())?, serde_json::to_string(&b).map_err(|e| e.to_string())?);
    let sigmas = (a.eta1_hat - 0.92).abs() / a.ci_halfwidth;
    ensure(
        a.photons_emitted == 1_000_000 && sigmas < 3.0 && ja == jb,
        format!("eta1_hat = {:.6} ({sigmas:.2} sigma), JSON identical: {}", a.eta1_hat, ja == jb),
    )
}

fn context() -> std::result::Result<Ctx, String> {
    let spec = FiberSpec64::silica_nanofiber();
    let sol = solve_he11(&spec).map_err(err)?;
    let mode = GuidedMode::new(&spec, &sol).map_err(err)?;
    let model = EmissionModel::new(&spec, &sol).map_err(err)?;
    Ok(Ctx { spec, sol, mode, model })
}

fn main() -> ExitCode {
    let ctx = match context() {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL setup: {e}");
            return ExitCode::FAILURE;
        }
    };
    let results: [(u32, Outcome); 10] = [
        (1, criterion_1(&ctx)),
        (2, criterion_2(&ctx)),
        (3, criterion_3(&ctx)),
        (4, criterion_4()),
        (5, criterion_5(&ctx)),
        (6, criterion_6(&ctx)),
        (7, criterion_7()),
        (8, criterion_8(&ctx)),
        (9, criterion_9(&ctx)),
        (10, criterion_10()),
    ];
    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(d) => println!("PASS criterion {n}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {n}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
