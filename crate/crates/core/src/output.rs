//! Plain-text rendering of maps and numbers.

use std::io::{self, Write};

use crate::grid::FieldMap;
use crate::polarization::LocalPolarization;
use crate::real::Real;

pub const MAP_CSV_HEADER: &str = "x_nm,y_nm,intensity,xi_sigma_plus,xi_pi,xi_sigma_minus,s_x,s_y,s_z";

const SIG_DIGITS: usize = 9;

/// `v` with 9 significant digits, trailing zeros kept. Fixed notation for
/// decimal exponents in `[-5, 9)`, scientific otherwise.
pub fn sig(v: f64) -> String {
    significant(v, SIG_DIGITS)
}

pub fn significant(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

/// Writes a polarization map as CSV, rows in grid order (x fastest).
pub fn write_map_csv<T: Real, W: Write>(mut w: W, map: &FieldMap<T, LocalPolarization<T>>) -> io::Result<()> {
    writeln!(w, "{MAP_CSV_HEADER}")?;
    let f = |v: T| sig(v.to_f64().unwrap_or(f64::NAN));
    for ((x, y), p) in map.iter() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            f(x),
            f(y),
            f(p.intensity),
            f(p.overlap.xi_sigma_plus),
            f(p.overlap.xi_pi),
            f(p.overlap.xi_sigma_minus),
            f(p.spin.sx),
            f(p.spin.sy),
            f(p.spin.sz)
        )?;
    }
    Ok(())
}
