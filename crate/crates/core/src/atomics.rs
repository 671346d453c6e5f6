//! Clebsch–Gordan branching ratios for spontaneous decay between hyperfine
//! manifolds, in exact rational arithmetic.
//!
//! Photon labels follow the spherical index `q = m_excited − m_ground`: a
//! σ⁺ photon is emitted when the decay lowers `m` by one. Only the closed
//! `F' → F` channel is considered, so the weights of one excited sublevel
//! sum to one.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polarization::Channel;
use crate::real::Real;

/// Angular momentum or projection quantum number, stored as twice its value
/// so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_doubled(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn from_int(v: i32) -> Self {
        Self(2 * v)
    }

    /// Parses `v` if it is an integer or half-integer.
    pub fn from_f64(v: f64) -> Option<Self> {
        let t = 2.0 * v;
        (t.is_finite() && t == t.round() && t.abs() < 1e6).then_some(Self(t as i32))
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_integer() {
            s.serialize_i32(self.0 / 2)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        HalfInt::from_f64(v).ok_or_else(|| serde::de::Error::custom(format!("{v} is not an integer or half-integer")))
    }
}

/// Decay `|F_excited, m_excited> → |F_ground, ·>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub f_excited: HalfInt,
    pub f_ground: HalfInt,
    pub m_excited: HalfInt,
}

impl TransitionSpec {
    pub fn new(f_excited: HalfInt, f_ground: HalfInt, m_excited: HalfInt) -> Result<Self> {
        let t = Self { f_excited, f_ground, m_excited };
        t.validate()?;
        Ok(t)
    }

    /// Cs D2 line, `F' = 5 → F = 4`, from excited sublevel `m'`.
    pub fn cs_d2(m_excited: i32) -> Result<Self> {
        Self::new(HalfInt::from_int(5), HalfInt::from_int(4), HalfInt::from_int(m_excited))
    }

    pub fn validate(&self) -> Result<()> {
        check_projection(self.f_excited, self.m_excited)?;
        check_projection(self.f_ground, self.f_ground)?;
        let diff = (self.f_excited.0 - self.f_ground.0).abs();
        if diff > 2 || diff % 2 != 0 {
            return Err(Error::InvalidAngularMomentum(format!(
                "|F' - F| must be 0 or 1, got F' = {}, F = {}",
                self.f_excited, self.f_ground
            )));
        }
        if self.f_excited.0 == 0 && self.f_ground.0 == 0 {
            return Err(Error::NoDecayChannel);
        }
        Ok(())
    }

    /// The same transition from `−m'`.
    pub fn mirrored(&self) -> Self {
        Self { m_excited: HalfInt(-self.m_excited.0), ..*self }
    }
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::InvalidAngularMomentum(format!("negative angular momentum {j}")));
    }
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(Error::InvalidAngularMomentum(format!("projection {m} incompatible with {j}")));
    }
    Ok(())
}

fn factorial(n: i32) -> BigInt {
    (2..=n.max(1)).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact `|<j1 m1; j2 m2 | J M>|²` by Racah's formula. Returns zero for
/// violated selection rules.
pub fn clebsch_gordan_squared_general(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<BigRational> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;
    let (j1, m1, j2, m2, j, m) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    if m1 + m2 != m || j > j1 + j2 || j < (j1 - j2).abs() || (j1 + j2 - j) % 2 != 0 {
        return Ok(BigRational::zero());
    }
    // All of these are integers once the doubled values are halved.
    let h = |v: i32| v / 2;
    let a = h(j1 + j2 - j);
    let b = h(j1 - m1);
    let c = h(j2 + m2);
    let d = h(j - j2 + m1);
    let e = h(j - j1 - m2);

    let pre_num = BigInt::from(j + 1)
        * factorial(h(j + j1 - j2))
        * factorial(h(j - j1 + j2))
        * factorial(a)
        * factorial(h(j + m))
        * factorial(h(j - m))
        * factorial(b)
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(c);
    let pre_den = factorial(h(j1 + j2 + j) + 1);

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den =
            factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k) * factorial(d + k) * factorial(e + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(BigRational::new(pre_num, pre_den) * &sum * &sum)
}

/// `|<F_ground m_ground; 1 q | F_excited m_excited>|²` as an exact rational.
pub fn clebsch_gordan_sq(
    f_ground: HalfInt,
    m_ground: HalfInt,
    q: i32,
    f_excited: HalfInt,
    m_excited: HalfInt,
) -> Result<BigRational> {
    if q.abs() > 1 {
        return Err(Error::InvalidAngularMomentum(format!("photon index q must be -1, 0 or 1, got {q}")));
    }
    clebsch_gordan_squared_general(f_ground, m_ground, HalfInt::from_int(1), HalfInt::from_int(q), f_excited, m_excited)
}

/// Emission-channel probabilities for one excited sublevel.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingTable {
    pub p_sigma_plus: BigRational,
    pub p_pi: BigRational,
    pub p_sigma_minus: BigRational,
}

impl BranchingTable {
    pub fn get(&self, channel: Channel) -> &BigRational {
        match channel {
            Channel::SigmaPlus => &self.p_sigma_plus,
            Channel::Pi => &self.p_pi,
            Channel::SigmaMinus => &self.p_sigma_minus,
        }
    }

    /// Channel probability converted to floating point.
    pub fn probability<T: Real>(&self, channel: Channel) -> T {
        rational_to_real(self.get(channel))
    }

    pub fn total(&self) -> BigRational {
        &self.p_sigma_plus + &self.p_pi + &self.p_sigma_minus
    }
}

pub(crate) fn rational_to_real<T: Real>(r: &BigRational) -> T {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    T::lit(num / den)
}

/// Normalized decay weights of `spec` into the σ⁺, π and σ⁻ channels.
pub fn branching(spec: &TransitionSpec) -> Result<BranchingTable> {
    spec.validate()?;
    let weight = |channel: Channel| -> Result<BigRational> {
        let q = channel.q();
        let m_ground = HalfInt(spec.m_excited.0 - 2 * q);
        if m_ground.0.abs() > spec.f_ground.0 {
            return Ok(BigRational::zero());
        }
        clebsch_gordan_sq(spec.f_ground, m_ground, q, spec.f_excited, spec.m_excited)
    };
    let (sp, pi, sm) = (weight(Channel::SigmaPlus)?, weight(Channel::Pi)?, weight(Channel::SigmaMinus)?);
    let total = &sp + &pi + &sm;
    if !total.is_positive() {
        return Err(Error::NoDecayChannel);
    }
    Ok(BranchingTable { p_sigma_plus: sp / &total, p_pi: pi / &total, p_sigma_minus: sm / total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn hi(v: i32) -> HalfInt {
        HalfInt::from_int(v)
    }

    #[test]
    fn cs_d2_cg_examples() {
        assert_eq!(clebsch_gordan_sq(hi(4), hi(-2), 1, hi(5), hi(-1)).unwrap(), r(2, 15));
        assert_eq!(clebsch_gordan_sq(hi(4), hi(-1), 0, hi(5), hi(-1)).unwrap(), r(8, 15));
        assert_eq!(clebsch_gordan_sq(hi(4), hi(0), -1, hi(5), hi(-1)).unwrap(), r(5, 15));
    }

    #[test]
    fn selection_rule_violation_gives_zero() {
        assert!(clebsch_gordan_sq(hi(4), hi(0), 1, hi(5), hi(-1)).unwrap().is_zero());
        assert!(clebsch_gordan_sq(hi(1), hi(0), 0, hi(3), hi(0)).unwrap().is_zero());
    }

    #[test]
    fn invalid_quantum_numbers_rejected() {
        assert!(clebsch_gordan_sq(hi(4), hi(5), 0, hi(5), hi(5)).is_err());
        assert!(clebsch_gordan_sq(hi(4), HalfInt::from_doubled(1), 0, hi(5), hi(0)).is_err());
        assert!(clebsch_gordan_sq(hi(4), hi(0), 2, hi(5), hi(2)).is_err());
        assert!(TransitionSpec::new(hi(6), hi(4), hi(0)).is_err());
        assert!(TransitionSpec::new(hi(5), hi(4), hi(6)).is_err());
        assert!(matches!(TransitionSpec::new(hi(0), hi(0), hi(0)), Err(Error::NoDecayChannel)));
    }

    #[test]
    fn stretched_and_m_minus_one_tables() {
        let t = branching(&TransitionSpec::cs_d2(-5).unwrap()).unwrap();
        assert_eq!((t.p_sigma_plus.clone(), t.p_pi.clone(), t.p_sigma_minus.clone()), (r(0, 1), r(0, 1), r(1, 1)));
        let t = branching(&TransitionSpec::cs_d2(-1).unwrap()).unwrap();
        assert_eq!((t.p_sigma_plus.clone(), t.p_pi.clone(), t.p_sigma_minus.clone()), (r(2, 15), r(8, 15), r(5, 15)));
        let m = branching(&TransitionSpec::cs_d2(1).unwrap()).unwrap();
        assert_eq!(m.p_sigma_plus, t.p_sigma_minus);
        assert_eq!(m.p_sigma_minus, t.p_sigma_plus);
        assert_eq!(m.p_pi, t.p_pi);
    }

    #[test]
    fn half_integer_manifold_sums_to_one() {
        // e.g. a J' = 3/2 -> J = 1/2 line
        for m2 in [-3, -1, 1, 3] {
            let spec =
                TransitionSpec::new(HalfInt::from_doubled(3), HalfInt::from_doubled(1), HalfInt::from_doubled(m2))
                    .unwrap();
            let t = branching(&spec).unwrap();
            assert_eq!(t.total(), BigRational::one());
        }
        let spec =
            TransitionSpec::new(HalfInt::from_doubled(3), HalfInt::from_doubled(1), HalfInt::from_doubled(1)).unwrap();
        let t = branching(&spec).unwrap();
        assert_eq!((t.p_sigma_plus.clone(), t.p_pi.clone(), t.p_sigma_minus.clone()), (r(1, 3), r(2, 3), r(0, 1)));
    }

    #[test]
    fn half_int_serde() {
        let v: HalfInt = serde_json::from_str("4.5").unwrap();
        assert_eq!(v, HalfInt::from_doubled(9));
        assert_eq!(serde_json::to_string(&hi(-5)).unwrap(), "-5");
        assert!(serde_json::from_str::<HalfInt>("0.3").is_err());
        assert_eq!(v.to_string(), "9/2");
    }
}
