//! Fixed-point iteration `x = T(x)` in the max norm.

use crate::error::{FloodError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Stop once `max |T(x) - x| < tolerance`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relaxation weight on the new iterate once damping is engaged.
    pub damping: f64,
    /// Consecutive non-decreasing residuals before damping is engaged.
    pub patience: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            tolerance: 1e-12,
            max_iterations: 100_000,
            damping: 0.5,
            patience: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Max-norm step on the final iteration.
    pub residual: f64,
    pub damped: bool,
}

/// Iterates `map` from `start`. Plain iteration is used until the residual fails
/// to decrease `patience` times in a row, after which every step is relaxed.
pub fn solve_fixed_point<F>(start: Vec<f64>, mut map: F, opts: &FixedPointOptions) -> Result<FixedPoint>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut x = start;
    let mut next = vec![0.0; x.len()];
    let mut previous = f64::INFINITY;
    let mut stalled = 0;
    let mut damped = false;
    let mut residual = f64::INFINITY;
    for iteration in 1..=opts.max_iterations {
        map(&x, &mut next);
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual.is_nan() {
            break;
        }
        if damped {
            for (xi, &ni) in x.iter_mut().zip(&next) {
                *xi += opts.damping * (ni - *xi);
            }
        } else {
            std::mem::swap(&mut x, &mut next);
        }
        if residual < opts.tolerance {
            return Ok(FixedPoint {
                values: x,
                iterations: iteration,
                residual,
                damped,
            });
        }
        if residual >= previous {
            stalled += 1;
            if stalled >= opts.patience {
                damped = true;
            }
        } else {
            stalled = 0;
        }
        previous = residual;
    }
    Err(FloodError::NoConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Max-norm distance between `x` and `map(x)`.
pub fn residual<F>(x: &[f64], mut map: F) -> f64
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut image = vec![0.0; x.len()];
    map(x, &mut image);
    x.iter().zip(&image).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}
