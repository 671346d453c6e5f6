//! Subcommand implementations. Each returns its payload as a string.

use clap::ValueEnum;
use nanofiber_core::emission::ChannelRate;
use nanofiber_core::output::write_map_csv;
use nanofiber_core::{
    characteristic_residual, polarization_map, scatter_map, simulate_with_model, solve_he11, solve_scattering,
    AtomSite, EmissionModel, GuidedMode, ModeId, TransitionSpec,
};
use serde::Serialize;

use crate::config::{RunConfig, SiteConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Intensity,
    Overlap,
    Spin,
    Scatter,
}

#[derive(Debug, Serialize)]
struct SolveReport {
    beta_per_nm: f64,
    n_eff: f64,
    v_number: f64,
    h_per_nm: f64,
    q_per_nm: f64,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct EmissionEntry {
    site: SiteConfig,
    state: TransitionSpec,
    eta_1: f64,
    eta_2: f64,
    alpha_x: f64,
    alpha_y: f64,
    per_channel_rates: Vec<ChannelRate<f64>>,
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn model(cfg: &RunConfig) -> CliResult<EmissionModel<f64>> {
    let spec = cfg.fiber_spec()?;
    let sol = solve_he11(&spec)?;
    Ok(EmissionModel::new(&spec, &sol)?.with_frame(cfg.frame()?).with_detectors(cfg.detectors()))
}

pub fn solve(cfg: &RunConfig) -> CliResult<String> {
    let spec = cfg.fiber_spec()?;
    let sol = solve_he11(&spec)?;
    Ok(to_json(&SolveReport {
        beta_per_nm: sol.beta,
        n_eff: sol.n_eff,
        v_number: sol.v_number,
        h_per_nm: sol.h,
        q_per_nm: sol.q,
        residual: characteristic_residual(&spec, sol.n_eff).abs(),
    }))
}

/// CSV map. Guided-mode kinds share one schema with the intensity column
/// normalized to the mode's maximum on the fiber surface; the scatter kind
/// normalizes to the incident intensity.
pub fn map(cfg: &RunConfig, kind: MapKind, mode: ModeId) -> CliResult<String> {
    let frame = cfg.frame()?;
    let map = match kind {
        MapKind::Scatter => {
            let sol = solve_scattering(&cfg.scatter_spec()?)?;
            scatter_map(&sol, &cfg.grid, &frame)?
        }
        MapKind::Intensity | MapKind::Overlap | MapKind::Spin => {
            let spec = cfg.fiber_spec()?;
            let sol = solve_he11(&spec)?;
            let peak = GuidedMode::new(&spec, &sol)?.surface_max_intensity(mode);
            let mut map = polarization_map(&spec, &sol, mode, &frame, &cfg.grid)?;
            for v in &mut map.values {
                v.intensity /= peak;
            }
            map
        }
    };
    let mut buf = Vec::new();
    write_map_csv(&mut buf, &map)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

/// One entry per (state, site) pair, states in the outer loop.
pub fn emission(cfg: &RunConfig) -> CliResult<String> {
    let model = model(cfg)?;
    let mut out = Vec::with_capacity(cfg.states.len() * cfg.sites.len());
    for state in &cfg.states {
        for site in &cfg.sites {
            let r = model.eta_fractions(&AtomSite::new(site.x_nm, site.y_nm, *state))?;
            out.push(EmissionEntry {
                site: *site,
                state: *state,
                eta_1: r.eta_1,
                eta_2: r.eta_2,
                alpha_x: r.alpha_x,
                alpha_y: r.alpha_y,
                per_channel_rates: r.per_channel_rates,
            });
        }
    }
    Ok(to_json(&out))
}

/// Counting simulation for the first configured site and state.
pub fn simulate(cfg: &RunConfig, seed: Option<u64>) -> CliResult<String> {
    let site = cfg.sites.first().ok_or_else(|| CliError::Config("simulate needs at least one site".into()))?;
    let state = cfg.states.first().ok_or_else(|| CliError::Config("simulate needs at least one state".into()))?;
    let mut mc = cfg.mc;
    if let Some(s) = seed {
        mc.rng_seed = s;
    }
    let record = simulate_with_model(&model(cfg)?, &AtomSite::new(site.x_nm, site.y_nm, *state), &mc)?;
    Ok(to_json(&record))
}
