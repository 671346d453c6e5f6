//! Direction-resolved spontaneous emission into the guided basis modes.
//!
//! The rate into mode `(p, d)` through decay channel `q` is
//! `P_q |<e_q, E_{p,d}(r)>|²` with power-normalized fields, summed
//! incoherently over channels and over `p`. Rates share one arbitrary scale
//! ((V/m)² per W of guided power), so only ratios are meaningful.
//!
//! For sites on the `y = 0` line the p = x modes carry no π component and
//! the p = y modes no σ components, so the direction-resolved rate reduces to
//!
//! ```text
//! P(d) = α_x [ξσ+(d) Pσ+ + ξσ−(d) Pσ−] + α_y ξπ(d) Pπ
//! ```
//!
//! with `α_p = |E_p|²`. [`closed_form_eta`] evaluates that expression from
//! the overlaps and intensities, and [`EmissionModel::eta_fractions`] checks
//! it against the full channel sum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atomics::{branching, BranchingTable, TransitionSpec};
use crate::error::{Error, Result};
use crate::fibermode::{Direction, FiberSpec, GuidedMode, MainPolarization, ModeId, ModeSolution};
use crate::polarization::{overlaps, unit_polarization, Channel, PolarizationOverlap, QuantizationFrame};
use crate::real::Real;

const CROSS_CHECK_TOL: f64 = 1e-12;

/// An emitter at a transverse position, prepared in an excited sublevel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSite<T> {
    pub x_nm: T,
    pub y_nm: T,
    pub prepared_state: TransitionSpec,
}

impl<T: Real> AtomSite<T> {
    pub fn new(x_nm: T, y_nm: T, prepared_state: TransitionSpec) -> Self {
        Self { x_nm, y_nm, prepared_state }
    }

    /// Trap site on the `y = 0` line: `x = side * (a + 230 nm)`.
    pub fn trap_site(spec: &FiberSpec<T>, side: T, prepared_state: TransitionSpec) -> Self {
        Self::new(side.signum() * spec.trap_site_x(), T::zero(), prepared_state)
    }
}

/// Which propagation direction reaches detector 1 (the other goes to 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectorMapping {
    pub detector_1: Direction,
}

impl Default for DetectorMapping {
    fn default() -> Self {
        Self { detector_1: Direction::PlusZ }
    }
}

/// Rate into one basis mode through one decay channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRate<T> {
    pub mode: ModeId,
    pub channel: Channel,
    pub rate: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionResult<T> {
    pub rate_plus_z: T,
    pub rate_minus_z: T,
    /// Fraction of guided emission reaching detector 1.
    pub eta_1: T,
    pub eta_2: T,
    /// `|E|²` of the p = x and p = y modes at the site.
    pub alpha_x: T,
    pub alpha_y: T,
    pub per_channel_rates: Vec<ChannelRate<T>>,
    /// `η₁` from the closed-form expression, for sites on `y = 0`.
    pub closed_form_eta_1: Option<T>,
}

impl<T: Real> EmissionResult<T> {
    /// The larger of `η₁`, `η₂`.
    pub fn favored_fraction(&self) -> T {
        self.eta_1.max(self.eta_2)
    }
}

/// Guided mode plus the conventions needed to evaluate emission.
#[derive(Debug, Clone, Copy)]
pub struct EmissionModel<T> {
    mode: GuidedMode<T>,
    frame: QuantizationFrame<T>,
    detectors: DetectorMapping,
}

impl<T: Real> EmissionModel<T> {
    pub fn new(spec: &FiberSpec<T>, sol: &ModeSolution<T>) -> Result<Self> {
        Ok(Self {
            mode: GuidedMode::new(spec, sol)?,
            frame: QuantizationFrame::default(),
            detectors: DetectorMapping::default(),
        })
    }

    pub fn with_frame(mut self, frame: QuantizationFrame<T>) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_detectors(mut self, detectors: DetectorMapping) -> Self {
        self.detectors = detectors;
        self
    }

    pub fn guided_mode(&self) -> &GuidedMode<T> {
        &self.mode
    }

    fn check_outside(&self, site: &AtomSite<T>) -> Result<()> {
        let r = site.x_nm.hypot(site.y_nm);
        let a = self.mode.spec().radius_nm;
        if !(r > a) {
            return Err(Error::AtomInsideFiber {
                r_nm: r.to_f64().unwrap_or(f64::NAN),
                a_nm: a.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    fn rate_with_table(&self, site: &AtomSite<T>, mode: ModeId, channel: Channel, table: &BranchingTable) -> T {
        let e = self.mode.field(mode, site.x_nm, site.y_nm);
        table.probability::<T>(channel) * self.frame.basis(channel).inner(&e).norm_sqr()
    }

    /// Rate into basis mode `mode` through decay `channel`.
    pub fn guided_rate(&self, site: &AtomSite<T>, mode: ModeId, channel: Channel) -> Result<T> {
        self.check_outside(site)?;
        let table = branching(&site.prepared_state)?;
        Ok(self.rate_with_table(site, mode, channel, &table))
    }

    /// Direction-resolved rates, `η₁`, `η₂` and the intensity weights.
    pub fn eta_fractions(&self, site: &AtomSite<T>) -> Result<EmissionResult<T>> {
        self.check_outside(site)?;
        let table = branching(&site.prepared_state)?;
        let mut per_channel = Vec::with_capacity(12);
        let (mut plus, mut minus) = (T::zero(), T::zero());
        for mode in ModeId::ALL {
            for channel in Channel::ALL {
                let rate = self.rate_with_table(site, mode, channel, &table);
                match mode.d {
                    Direction::PlusZ => plus = plus + rate,
                    Direction::MinusZ => minus = minus + rate,
                }
                per_channel.push(ChannelRate { mode, channel, rate });
            }
        }
        let total = plus + minus;
        if !(total > T::zero()) {
            return Err(Error::NoDecayChannel);
        }
        let (to_det1, to_det2) = match self.detectors.detector_1 {
            Direction::PlusZ => (plus, minus),
            Direction::MinusZ => (minus, plus),
        };
        let eta_1 = to_det1 / total;
        let eta_2 = to_det2 / total;

        let x_mode = ModeId::new(MainPolarization::X, Direction::PlusZ);
        let y_mode = ModeId::new(MainPolarization::Y, Direction::PlusZ);
        let alpha_x = self.mode.intensity(x_mode, site.x_nm, site.y_nm);
        let alpha_y = self.mode.intensity(y_mode, site.x_nm, site.y_nm);

        let on_axis_line = site.y_nm.abs() <= T::lit(1e-9) * self.mode.spec().radius_nm;
        let closed_form_eta_1 = if on_axis_line {
            let inputs = self.closed_form_inputs(site)?;
            let cf = closed_form_eta(&inputs, &table, self.detectors);
            let gap = (cf - eta_1).abs();
            if !(gap <= T::lit(CROSS_CHECK_TOL)) {
                return Err(Error::CrossCheck(gap.to_f64().unwrap_or(f64::NAN)));
            }
            Some(cf)
        } else {
            None
        };

        Ok(EmissionResult {
            rate_plus_z: plus,
            rate_minus_z: minus,
            eta_1,
            eta_2,
            alpha_x,
            alpha_y,
            per_channel_rates: per_channel,
            closed_form_eta_1,
        })
    }

    /// Overlaps and intensities entering the closed-form expression.
    pub fn closed_form_inputs(&self, site: &AtomSite<T>) -> Result<ClosedFormInputs<T>> {
        self.check_outside(site)?;
        let xi = |p: MainPolarization, d: Direction| -> Result<PolarizationOverlap<T>> {
            let e = self.mode.field(ModeId::new(p, d), site.x_nm, site.y_nm);
            overlaps(&unit_polarization(&e)?, &self.frame)
        };
        Ok(ClosedFormInputs {
            alpha_x: self.mode.intensity(ModeId::new(MainPolarization::X, Direction::PlusZ), site.x_nm, site.y_nm),
            alpha_y: self.mode.intensity(ModeId::new(MainPolarization::Y, Direction::PlusZ), site.x_nm, site.y_nm),
            xi_x_plus: xi(MainPolarization::X, Direction::PlusZ)?,
            xi_x_minus: xi(MainPolarization::X, Direction::MinusZ)?,
            xi_y_plus: xi(MainPolarization::Y, Direction::PlusZ)?,
            xi_y_minus: xi(MainPolarization::Y, Direction::MinusZ)?,
        })
    }
}

/// Inputs of the closed-form directional rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs<T> {
    pub alpha_x: T,
    pub alpha_y: T,
    pub xi_x_plus: PolarizationOverlap<T>,
    pub xi_x_minus: PolarizationOverlap<T>,
    pub xi_y_plus: PolarizationOverlap<T>,
    pub xi_y_minus: PolarizationOverlap<T>,
}

/// `P(d) = α_x [ξσ+(d) Pσ+ + ξσ−(d) Pσ−] + α_y ξπ(d) Pπ` for one direction.
pub fn closed_form_rate<T: Real>(inputs: &ClosedFormInputs<T>, table: &BranchingTable, d: Direction) -> T {
    let (xi_x, xi_y) = match d {
        Direction::PlusZ => (inputs.xi_x_plus, inputs.xi_y_plus),
        Direction::MinusZ => (inputs.xi_x_minus, inputs.xi_y_minus),
    };
    let p = |c| table.probability::<T>(c);
    inputs.alpha_x * (xi_x.xi_sigma_plus * p(Channel::SigmaPlus) + xi_x.xi_sigma_minus * p(Channel::SigmaMinus))
        + inputs.alpha_y * xi_y.xi_pi * p(Channel::Pi)
}

/// `η₁` from the closed-form rates.
pub fn closed_form_eta<T: Real>(inputs: &ClosedFormInputs<T>, table: &BranchingTable, detectors: DetectorMapping) -> T {
    let det1 = closed_form_rate(inputs, table, detectors.detector_1);
    let det2 = closed_form_rate(inputs, table, detectors.detector_1.reversed());
    det1 / (det1 + det2)
}

/// Rate into `mode` through `channel` with the default frame and detectors.
pub fn guided_rate<T: Real>(
    site: &AtomSite<T>,
    mode: ModeId,
    channel: Channel,
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
) -> Result<T> {
    EmissionModel::new(spec, sol)?.guided_rate(site, mode, channel)
}

/// `η₁`, `η₂` with the default frame (`+y`) and detector 1 on `+z`.
pub fn eta_fractions<T: Real>(
    site: &AtomSite<T>,
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
) -> Result<EmissionResult<T>> {
    EmissionModel::new(spec, sol)?.eta_fractions(site)
}

/// One row of a directionality sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub x_nm: T,
    pub y_nm: T,
    pub state: TransitionSpec,
    pub eta_1: T,
    pub eta_2: T,
    pub alpha_x: T,
    pub alpha_y: T,
}

/// `η` for every (state, position) pair; states in the outer loop,
/// positions in the inner loop.
pub fn directionality_sweep<T: Real>(
    model: &EmissionModel<T>,
    states: &[TransitionSpec],
    positions: &[(T, T)],
) -> Result<Vec<SweepRow<T>>> {
    let jobs: Vec<(TransitionSpec, (T, T))> =
        states.iter().flat_map(|s| positions.iter().map(move |p| (*s, *p))).collect();
    jobs.par_iter()
        .map(|&(state, (x, y))| {
            let r = model.eta_fractions(&AtomSite::new(x, y, state))?;
            Ok(SweepRow {
                x_nm: x,
                y_nm: y,
                state,
                eta_1: r.eta_1,
                eta_2: r.eta_2,
                alpha_x: r.alpha_x,
                alpha_y: r.alpha_y,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "x_nm,y_nm,f_excited,f_ground,m_excited,eta_1,eta_2,alpha_x,alpha_y";

/// CSV rendering of a sweep (LF line endings, 9 significant digits).
pub fn sweep_to_csv<T: Real>(rows: &[SweepRow<T>]) -> String {
    use crate::output::sig;
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let f = |v: T| sig(v.to_f64().unwrap_or(f64::NAN));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            f(r.x_nm),
            f(r.y_nm),
            r.state.f_excited,
            r.state.f_ground,
            r.state.m_excited,
            f(r.eta_1),
            f(r.eta_2),
            f(r.alpha_x),
            f(r.alpha_y)
        ));
    }
    out
}
