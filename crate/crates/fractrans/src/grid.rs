//! Uniform tensor meshes over the space-time rectangle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GridError {
    #[error("spatial bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]")]
    BadSpatialBounds { x_min: f64, x_max: f64 },
    #[error("time horizon must be positive, got {t_final}")]
    BadTimeHorizon { t_final: f64 },
    #[error("need at least 2 steps per direction, got nx={nx}, nt={nt}")]
    TooFewSteps { nx: usize, nt: usize },
}

/// Uniform mesh over `[x_min, x_max] x [0, T]` with `nx` space steps and
/// `nt` time steps. Node `(i, n)` sits at `(x_min + i*h, n*tau)` for
/// `0 <= i <= nx`, `0 <= n <= nt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    x_min: f64,
    x_max: f64,
    t_final: f64,
    nx: usize,
    nt: usize,
}

impl UniformGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        t_final: f64,
        nx: usize,
        nt: usize,
    ) -> Result<Self, GridError> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(GridError::BadSpatialBounds { x_min, x_max });
        }
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(GridError::BadTimeHorizon { t_final });
        }
        if nx < 2 || nt < 2 {
            return Err(GridError::TooFewSteps { nx, nt });
        }
        Ok(UniformGrid { x_min, x_max, t_final, nx, nt })
    }

    /// Same domain, different resolution. Used by refinement ladders.
    pub fn refined(&self, nx: usize, nt: usize) -> Result<Self, GridError> {
        UniformGrid::new(self.x_min, self.x_max, self.t_final, nx, nt)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    /// Space step h.
    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    /// Time step tau.
    pub fn tau(&self) -> f64 {
        self.t_final / self.nt as f64
    }

    /// Coordinate of space node `i`, computed directly from the index so no
    /// rounding accumulates.
    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i <= self.nx);
        self.x_min + i as f64 * self.h()
    }

    /// Coordinate of time node `n`.
    pub fn t(&self, n: usize) -> f64 {
        debug_assert!(n <= self.nt);
        n as f64 * self.tau()
    }

    /// Number of nodes, `(nx + 1) * (nt + 1)`.
    pub fn node_count(&self) -> usize {
        (self.nx + 1) * (self.nt + 1)
    }
}
