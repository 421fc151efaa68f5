//! Generating-function predictions for flooding on random graphs.
//!
//! Two layers: percolation of the undirected graph ([`gcc_analysis`]) and
//! percolation of the random flooding digraph whose edge `u → v` is present
//! with probability `f(deg u, deg v)` ([`digraph_analysis`]). The reach,
//! message and waiting-time ratios are read off the second.

mod digraph;
mod gcc;
pub mod kernel;
pub mod solver;

pub use digraph::{
    digraph_analysis, digraph_analysis_with_kernel, giant_fractions, solve_dead_end_probs,
    solve_dead_end_probs_with_kernel, DigraphAnalysis, Direction, PathLengthMethod, WaitingPrediction,
};
pub use gcc::{gcc_analysis, GccAnalysis};

use crate::degree::DegreeModel;
use crate::error::{FloodError, Result};
use crate::rule::FloodRule;

/// Giant-component fractions at or below this are treated as absent.
pub const THETA_EPS: f64 = 1e-9;

/// Solves `Σ_{r=1..L} z1·ratio^(r-1) = nodes - 1` for `L`.
///
/// `None` when the progression does not grow or the log argument is not positive.
pub(crate) fn geometric_path_length(nodes: f64, z1: f64, ratio: f64) -> Option<f64> {
    if !(z1 > 0.0 && ratio > 1.0) {
        return None;
    }
    let arg = (nodes - 1.0) / z1 * (ratio - 1.0) + 1.0;
    if arg.is_nan() || arg <= 0.0 {
        return None;
    }
    let l = arg.ln() / ratio.ln();
    l.is_finite().then_some(l)
}

/// `θ^in θ^out / θ_G²`.
pub fn predict_pn(model: &DegreeModel, rule: FloodRule) -> Result<f64> {
    // n only affects path lengths
    Ok(digraph_analysis(model, rule, model.max_degree() + 1)?.p_n)
}

/// `z_gout · P_n / z_gcc`.
pub fn predict_pm(model: &DegreeModel, rule: FloodRule) -> Result<f64> {
    Ok(digraph_analysis(model, rule, model.max_degree() + 1)?.p_m)
}

/// `θ^in L_gout / (θ_G L_gcc)`.
pub fn predict_pt(model: &DegreeModel, rule: FloodRule, n: usize) -> Result<f64> {
    match digraph_analysis(model, rule, n)?.p_t {
        WaitingPrediction::Value(v) => Ok(v),
        WaitingPrediction::Unsupported => Err(FloodError::Unsupported(format!(
            "no waiting-time estimate for {rule} on {} degrees",
            model.kind().family_name()
        ))),
        WaitingPrediction::Undefined(why) => Err(FloodError::PathLengthUndefined(why)),
    }
}

/// All three predicted ratios at once.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Prediction {
    pub p_n: f64,
    pub p_m: f64,
    pub p_t: WaitingPrediction,
}

pub fn predict(model: &DegreeModel, rule: FloodRule, n: usize) -> Result<Prediction> {
    let a = digraph_analysis(model, rule, n)?;
    Ok(Prediction {
        p_n: a.p_n,
        p_m: a.p_m,
        p_t: a.p_t,
    })
}
