//! Cylindrical Bessel functions of integer order and real argument.
//!
//! * `J_n`: Miller backward recurrence normalised by `J_0 + 2 Σ J_2k = 1`.
//! * `Y_0`, `Y_1`: Neumann series over the `J_2k` produced by the same
//!   recurrence, then upward recurrence (stable for the dominant solution).
//! * `I_n`: Miller backward recurrence on `e^{-x} I_n`, normalised by
//!   `e^{-x} (I_0 + 2 Σ I_k) = 1`.
//! * `K_0`, `K_1`: ascending series for `x <= 2`, Temme's continued fraction
//!   (Steed's CF2) above, then upward recurrence.
//!
//! Derivatives come from the standard three-term relations, so every value
//! and derivative in a table shares one evaluation pass.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// A Bessel function value and its first derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval<T> {
    pub order: u32,
    pub x: T,
    pub value: T,
    pub derivative: T,
}

/// Values and first derivatives for orders `0..=n_max` at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselTable<T> {
    pub x: T,
    pub values: Vec<T>,
    pub derivatives: Vec<T>,
}

impl<T: Real> BesselTable<T> {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    fn eval(&self, n: u32) -> BesselEval<T> {
        BesselEval { order: n, x: self.x, value: self.values[n as usize], derivative: self.derivatives[n as usize] }
    }
}

fn check_positive<T: Real>(name: &str, x: T) -> Result<()> {
    if x.is_nan() || x <= T::zero() {
        return Err(Error::Domain(format!("{name} requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Err(Error::Domain(format!("{name} requires finite x")));
    }
    Ok(())
}

/// Even starting order for the backward recurrences.
fn miller_start<T: Real>(n_max: usize, x: T) -> usize {
    let top = (n_max as f64).max(x.to_f64().unwrap_or(0.0).ceil());
    let m = (top + 20.0 + 10.0 * top.sqrt()).ceil() as usize;
    m + (m % 2)
}

/// Unnormalised backward recurrence `f_{k-1} = (2k/x) f_k + sign * f_{k+1}`
/// from `f_m = 1`, rescaled on overflow. Returns `f_0..=f_m`.
fn backward_recurrence<T: Real>(m: usize, x: T, sign: T) -> Vec<T> {
    let big = T::lit(1e10);
    let mut vals = vec![T::zero(); m + 1];
    vals[m] = T::one();
    let mut next = T::zero();
    let mut cur = T::one();
    for k in (1..=m).rev() {
        let prev = T::from_int(2 * k as i64) / x * cur + sign * next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > big {
            let shrink = T::one() / cur.abs();
            for v in &mut vals[k - 1..] {
                *v = *v * shrink;
            }
            cur = cur * shrink;
            next = next * shrink;
        }
    }
    vals
}

/// `J_0..=J_m` for some `m >= n_max + 1` (all orders of the recurrence).
fn j_all<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let m = miller_start(n_max + 1, x);
    let mut vals = backward_recurrence(m, x, -T::one());
    let mut norm = vals[0];
    for v in vals.iter().skip(2).step_by(2) {
        norm = norm + T::lit(2.0) * *v;
    }
    for v in &mut vals {
        *v = *v / norm;
    }
    vals
}

/// `e^{-x} I_0..=I_m` for some `m >= n_max + 1`.
fn i_scaled_all<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let m = miller_start(n_max + 1, x);
    let mut vals = backward_recurrence(m, x, T::one());
    let mut norm = vals[0];
    for v in vals.iter().skip(1) {
        norm = norm + T::lit(2.0) * *v;
    }
    for v in &mut vals {
        *v = *v / norm;
    }
    vals
}

/// Derivatives from `f_0' = s0 * f_1` and `f_n' = f_{n-1} - (n/x) f_n`
/// (valid for J, Y, I with the appropriate `s0`).
fn derivs_down<T: Real>(vals: &[T], n_max: usize, x: T, s0: T) -> Vec<T> {
    (0..=n_max).map(|n| if n == 0 { s0 * vals[1] } else { vals[n - 1] - T::from_int(n as i64) / x * vals[n] }).collect()
}

/// `J_n(x)` and `J_n'(x)` for `n = 0..=n_max`; `x = 0` is handled exactly.
pub fn j_table<T: Real>(n_max: usize, x: T) -> Result<BesselTable<T>> {
    if x == T::zero() {
        let mut values = vec![T::zero(); n_max + 1];
        let mut derivatives = vec![T::zero(); n_max + 1];
        values[0] = T::one();
        if n_max >= 1 {
            derivatives[1] = T::lit(0.5);
        }
        return Ok(BesselTable { x, values, derivatives });
    }
    check_positive("J_n", x)?;
    let all = j_all(n_max, x);
    let derivatives = derivs_down(&all, n_max, x, -T::one());
    Ok(BesselTable { x, values: all[..=n_max].to_vec(), derivatives })
}

/// `Y_0(x)`, `Y_1(x)` from the Neumann series over `J_2k`.
fn y01<T: Real>(x: T) -> (T, T) {
    let j = j_all(1, x);
    let log_term = (x / T::lit(2.0)).ln() + T::euler_gamma();
    let mut s0 = T::zero();
    let mut s1 = T::zero();
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let kk = T::from_int(k as i64);
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        s0 = s0 + sign * j[2 * k] / kk;
        s1 = s1 + sign * (j[2 * k - 1] - j[2 * k + 1]) / kk;
        k += 1;
    }
    let two_over_pi = T::FRAC_2_PI();
    let y0 = two_over_pi * (log_term * j[0] - T::lit(2.0) * s0);
    let y1 = two_over_pi * (-j[0] / x + log_term * j[1] + s1);
    (y0, y1)
}

/// `Y_n(x)` and `Y_n'(x)` for `n = 0..=n_max`.
pub fn y_table<T: Real>(n_max: usize, x: T) -> Result<BesselTable<T>> {
    check_positive("Y_n", x)?;
    let (y0, y1) = y01(x);
    let mut vals = Vec::with_capacity(n_max + 2);
    vals.push(y0);
    vals.push(y1);
    for n in 1..=n_max {
        let next = T::from_int(2 * n as i64) / x * vals[n] - vals[n - 1];
        vals.push(next);
    }
    let derivatives = derivs_down(&vals, n_max, x, -T::one());
    vals.truncate(n_max + 1);
    Ok(BesselTable { x, values: vals, derivatives })
}

/// `I_n(x)` and `I_n'(x)` for `n = 0..=n_max`.
pub fn i_table<T: Real>(n_max: usize, x: T) -> Result<BesselTable<T>> {
    if x == T::zero() {
        let mut values = vec![T::zero(); n_max + 1];
        let mut derivatives = vec![T::zero(); n_max + 1];
        values[0] = T::one();
        if n_max >= 1 {
            derivatives[1] = T::lit(0.5);
        }
        return Ok(BesselTable { x, values, derivatives });
    }
    check_positive("I_n", x)?;
    let scale = x.exp();
    let all: Vec<T> = i_scaled_all(n_max, x).into_iter().map(|v| v * scale).collect();
    let derivatives = derivs_down(&all, n_max, x, T::one());
    Ok(BesselTable { x, values: all[..=n_max].to_vec(), derivatives })
}

/// Ascending series for `K_0`, `K_1` (accurate for `x <= 2`).
fn k01_series<T: Real>(x: T) -> (T, T) {
    let t = x * x / T::lit(4.0);
    let g = T::euler_gamma();
    let mut term = T::one();
    let mut harmonic = T::zero();
    let (mut i0, mut s0, mut i1, mut s1) = (T::zero(), T::zero(), T::zero(), T::zero());
    for k in 0..200 {
        if k > 0 {
            let kk = T::from_int(k);
            term = term * t / (kk * kk);
            harmonic = harmonic + T::one() / kk;
        }
        let kp1 = T::from_int(k + 1);
        let t1 = term / kp1;
        i0 = i0 + term;
        s0 = s0 + harmonic * term;
        i1 = i1 + t1;
        // psi(k+1) + psi(k+2) = 2 (H_k - gamma) + 1/(k+1)
        s1 = s1 + (T::lit(2.0) * (harmonic - g) + T::one() / kp1) * t1;
        if term < T::epsilon() * T::epsilon() * i0 {
            break;
        }
    }
    i1 = i1 * x / T::lit(2.0);
    let log_half = (x / T::lit(2.0)).ln();
    let k0 = -(log_half + g) * i0 + s0;
    let k1 = T::one() / x + log_half * i1 - x / T::lit(4.0) * s1;
    (k0, k1)
}

/// Temme's continued fraction for `K_0`, `K_1` (converges fast for `x > 2`).
fn k01_cf2<T: Real>(x: T) -> (T, T) {
    let two = T::lit(2.0);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = T::lit(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 2..100_000i64 {
        a = a - T::from_int(2 * (i - 1));
        c = -a * c / T::from_int(i);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() / two {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + T::lit(0.5) - h) / x;
    (k0, k1)
}

/// `K_n(x)` and `K_n'(x)` for `n = 0..=n_max`.
pub fn k_table<T: Real>(n_max: usize, x: T) -> Result<BesselTable<T>> {
    check_positive("K_n", x)?;
    let (k0, k1) = if x <= T::lit(2.0) { k01_series(x) } else { k01_cf2(x) };
    let mut vals = Vec::with_capacity(n_max + 2);
    vals.push(k0);
    vals.push(k1);
    for n in 1..=n_max {
        let next = vals[n - 1] + T::from_int(2 * n as i64) / x * vals[n];
        vals.push(next);
    }
    let derivatives = (0..=n_max)
        .map(|n| if n == 0 { -vals[1] } else { -vals[n - 1] - T::from_int(n as i64) / x * vals[n] })
        .collect();
    vals.truncate(n_max + 1);
    Ok(BesselTable { x, values: vals, derivatives })
}

/// Bessel function of the first kind `J_n(x)`, `x >= 0`.
pub fn bessel_j<T: Real>(n: u32, x: T) -> Result<BesselEval<T>> {
    if x < T::zero() {
        return Err(Error::Domain(format!("J_n requires x >= 0, got {x}")));
    }
    Ok(j_table(n as usize, x)?.eval(n))
}

/// Bessel function of the second kind `Y_n(x)`, `x > 0`.
pub fn bessel_y<T: Real>(n: u32, x: T) -> Result<BesselEval<T>> {
    Ok(y_table(n as usize, x)?.eval(n))
}

/// Modified Bessel function of the first kind `I_n(x)`, `x >= 0`.
pub fn bessel_i<T: Real>(n: u32, x: T) -> Result<BesselEval<T>> {
    if x < T::zero() {
        return Err(Error::Domain(format!("I_n requires x >= 0, got {x}")));
    }
    Ok(i_table(n as usize, x)?.eval(n))
}

/// Modified Bessel function of the second kind `K_n(x)`, `x > 0`.
pub fn bessel_k<T: Real>(n: u32, x: T) -> Result<BesselEval<T>> {
    Ok(k_table(n as usize, x)?.eval(n))
}

/// Hankel function of the first kind and its derivative,
/// `H_n^(1)(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1<T: Real>(n: u32, x: T) -> Result<(Complex<T>, Complex<T>)> {
    let j = bessel_j(n, x)?;
    let y = bessel_y(n, x)?;
    Ok((Complex::new(j.value, y.value), Complex::new(j.derivative, y.derivative)))
}

/// Cylinder-function tables for integer orders of either sign:
/// `Z_{-n} = (-1)^n Z_n` for `Z` in {J, Y, H}.
#[inline]
pub(crate) fn signed_order<T: Real>(table: &[T], n: i64) -> T {
    let v = table[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}
