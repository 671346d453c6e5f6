//! Rectangular sampling grids in the transverse plane and per-node maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Rectangular grid in nm. Nodes are ordered row by row: `y` ascending in
/// the outer loop, `x` ascending in the inner loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> GridSpec<T> {
    /// Square window of half-width `half_width_nm` with `n` samples per axis.
    pub fn square(half_width_nm: T, n: usize) -> Self {
        Self { x_min: -half_width_nm, x_max: half_width_nm, y_min: -half_width_nm, y_max: half_width_nm, nx: n, ny: n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::EmptyGrid(format!("need at least 2x2 samples, got {}x{}", self.nx, self.ny)));
        }
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::EmptyGrid("extents must be finite with max > min".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, ix: usize) -> T {
        lerp(self.x_min, self.x_max, ix, self.nx)
    }

    pub fn y(&self, iy: usize) -> T {
        lerp(self.y_min, self.y_max, iy, self.ny)
    }

    /// Coordinates of node `index` in row order.
    pub fn node(&self, index: usize) -> (T, T) {
        (self.x(index % self.nx), self.y(index / self.nx))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }
}

fn lerp<T: Real>(lo: T, hi: T, i: usize, n: usize) -> T {
    if i + 1 == n {
        return hi;
    }
    lo + (hi - lo) * T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap()
}

/// Values sampled on a [`GridSpec`], stored in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap<T, V> {
    pub grid: GridSpec<T>,
    pub values: Vec<V>,
}

impl<T: Real, V> FieldMap<T, V> {
    pub fn at(&self, ix: usize, iy: usize) -> &V {
        &self.values[iy * self.grid.nx + ix]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((T, T), &V)> + '_ {
        self.grid.nodes().zip(self.values.iter())
    }
}
