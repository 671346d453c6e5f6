//! Photon-counting simulation of the two-detector directionality measurement.
//!
//! Each emitted guided photon goes to detector 1 with probability `η₁` and
//! is then registered with that detector's efficiency. Losses are undone by
//! dividing each count by its efficiency:
//!
//! ```text
//! η̂₁ = (c₁/ε₁) / (c₁/ε₁ + c₂/ε₂),   half-width = sqrt(η̂₁ (1 − η̂₁) / N_detected)
//! ```
//!
//! Run `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so the
//! result is independent of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emission::{AtomSite, EmissionModel};
use crate::error::{Error, Result};
use crate::fibermode::{FiberSpec, ModeSolution};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig<T> {
    pub n_runs: u64,
    pub photons_per_run: u64,
    pub efficiency_det1: T,
    pub efficiency_det2: T,
    pub rng_seed: u64,
}

impl<T: Real> DetectionConfig<T> {
    pub fn new(n_runs: u64, photons_per_run: u64, efficiency_det1: T, efficiency_det2: T, rng_seed: u64) -> Self {
        Self { n_runs, photons_per_run, efficiency_det1, efficiency_det2, rng_seed }
    }

    /// Checks counts and efficiency ranges. Zero efficiency is accepted here
    /// and reported by [`simulate_fraction`] as an undefined estimator.
    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 || self.photons_per_run == 0 {
            return Err(Error::InvalidDetection("n_runs and photons_per_run must be positive".into()));
        }
        for (name, e) in [("efficiency_det1", self.efficiency_det1), ("efficiency_det2", self.efficiency_det2)] {
            if !(e >= T::zero() && e <= T::one()) {
                return Err(Error::InvalidDetection(format!("{name} must lie in [0, 1], got {e}")));
            }
        }
        Ok(())
    }

    pub fn total_photons(&self) -> u64 {
        self.n_runs.saturating_mul(self.photons_per_run)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountRecord<T> {
    pub counts_det1: u64,
    pub counts_det2: u64,
    pub eta1_hat: T,
    pub eta2_hat: T,
    pub ci_halfwidth: T,
    /// `η₁` the photons were drawn with.
    pub eta1_true: T,
    pub photons_emitted: u64,
    pub seed: u64,
}

impl<T: Real> CountRecord<T> {
    pub fn detected(&self) -> u64 {
        self.counts_det1 + self.counts_det2
    }
}

fn run_counts(eta_1: f64, eff1: f64, eff2: f64, photons: u64, seed: u64, run: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    let (mut c1, mut c2) = (0u64, 0u64);
    for _ in 0..photons {
        let to_det1 = rng.random::<f64>() < eta_1;
        let eff = if to_det1 { eff1 } else { eff2 };
        if rng.random::<f64>() < eff {
            if to_det1 {
                c1 += 1;
            } else {
                c2 += 1;
            }
        }
    }
    (c1, c2)
}

/// Loss-corrected `(η̂₁, η̂₂, half-width)` from raw counts.
pub fn estimate<T: Real>(
    counts_det1: u64,
    counts_det2: u64,
    efficiency_det1: T,
    efficiency_det2: T,
) -> Result<(T, T, T)> {
    if !(efficiency_det1 > T::zero() && efficiency_det2 > T::zero()) {
        return Err(Error::EstimatorUndefined("detector efficiency is zero".into()));
    }
    let detected = counts_det1 + counts_det2;
    if detected == 0 {
        return Err(Error::EstimatorUndefined("no photons detected".into()));
    }
    let r1 = T::from_u64(counts_det1).unwrap_or_else(T::nan) / efficiency_det1;
    let r2 = T::from_u64(counts_det2).unwrap_or_else(T::nan) / efficiency_det2;
    let eta1 = r1 / (r1 + r2);
    let eta2 = r2 / (r1 + r2);
    let n = T::from_u64(detected).unwrap_or_else(T::nan);
    let ci = (eta1 * (T::one() - eta1) / n).sqrt();
    Ok((eta1, eta2, ci))
}

/// Simulates detection of photons emitted with detector-1 fraction `eta_1`.
pub fn simulate_fraction<T: Real>(eta_1: T, config: &DetectionConfig<T>) -> Result<CountRecord<T>> {
    config.validate()?;
    if !(eta_1 >= T::zero() && eta_1 <= T::one()) {
        return Err(Error::InvalidDetection(format!("eta_1 must lie in [0, 1], got {eta_1}")));
    }
    if !(config.efficiency_det1 > T::zero() && config.efficiency_det2 > T::zero()) {
        return Err(Error::EstimatorUndefined("detector efficiency is zero".into()));
    }
    let to_f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let (p, e1, e2) = (to_f(eta_1), to_f(config.efficiency_det1), to_f(config.efficiency_det2));
    let (c1, c2) = (0..config.n_runs)
        .into_par_iter()
        .map(|run| run_counts(p, e1, e2, config.photons_per_run, config.rng_seed, run))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let (eta1_hat, eta2_hat, ci_halfwidth) = estimate(c1, c2, config.efficiency_det1, config.efficiency_det2)?;
    Ok(CountRecord {
        counts_det1: c1,
        counts_det2: c2,
        eta1_hat,
        eta2_hat,
        ci_halfwidth,
        eta1_true: eta_1,
        photons_emitted: config.total_photons(),
        seed: config.rng_seed,
    })
}

/// Simulates detection for an emitter at `site`, with `η₁` from the model.
pub fn simulate_with_model<T: Real>(
    model: &EmissionModel<T>,
    site: &AtomSite<T>,
    config: &DetectionConfig<T>,
) -> Result<CountRecord<T>> {
    config.validate()?;
    let eta = model.eta_fractions(site)?.eta_1;
    simulate_fraction(eta, config)
}

/// [`simulate_with_model`] with the default frame and detector mapping.
pub fn simulate<T: Real>(
    site: &AtomSite<T>,
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
    config: &DetectionConfig<T>,
) -> Result<CountRecord<T>> {
    simulate_with_model(&EmissionModel::new(spec, sol)?, site, config)
}
