use serde::{Deserialize, Serialize};

use super::solver::{solve_fixed_point, FixedPointOptions};
use super::{geometric_path_length, THETA_EPS};
use crate::degree::DegreeModel;
use crate::error::{FloodError, Result};

/// Percolation quantities of the undirected graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GccAnalysis {
    /// Probability that a neighbor leads only to a small component; smallest root of `q = G₁(q)`.
    pub q: f64,
    /// Fraction of nodes in the giant component.
    pub theta_g: f64,
    /// Mean degree inside the giant component (0 when there is none).
    pub z_gcc: f64,
    /// Mean number of 2-neighbors inside the giant component (0 when there is none).
    pub z2_gcc: f64,
    /// Expected path length over the whole graph.
    pub l_g: Option<f64>,
    /// Expected path length inside the giant component.
    pub l_gcc: Option<f64>,
    pub n: usize,
    pub iterations: usize,
}

pub fn gcc_analysis(model: &DegreeModel, n: usize) -> Result<GccAnalysis> {
    let z = model.mean();
    if z <= 0.0 {
        return Err(FloodError::ZeroMeanDegree);
    }
    let fp = solve_fixed_point(
        vec![0.0],
        |x, y| y[0] = model.g1(x[0].clamp(0.0, 1.0)).unwrap_or(1.0).clamp(0.0, 1.0),
        &FixedPointOptions::default(),
    )?;
    let q = fp.values[0].clamp(0.0, 1.0);
    let theta_g = (1.0 - model.g0(q)).max(0.0);
    let excess = model.mean_excess_degree()?;

    let z2 = z * excess;
    let l_g = geometric_path_length(n as f64, z, z2 / z);

    let (z_gcc, z2_gcc, l_gcc) = if theta_g > THETA_EPS {
        let z_gcc = (z - q * model.g0_prime(q)) / theta_g;
        let z2_gcc = z_gcc * excess;
        let l_gcc = geometric_path_length(n as f64 * theta_g, z_gcc, excess);
        (z_gcc, z2_gcc, l_gcc)
    } else {
        (0.0, 0.0, None)
    };

    Ok(GccAnalysis {
        q,
        theta_g,
        z_gcc,
        z2_gcc,
        l_g,
        l_gcc,
        n,
        iterations: fp.iterations,
    })
}
