use serde::{Deserialize, Serialize};

use super::gcc::{gcc_analysis, GccAnalysis};
use super::kernel::{ForwardingKernel, MinDegreeKernel};
use super::solver::{residual, solve_fixed_point, FixedPointOptions};
use super::{geometric_path_length, THETA_EPS};
use crate::degree::{DegreeKind, DegreeModel};
use crate::error::{FloodError, Result};
use crate::rule::FloodRule;

/// Which way a dead-end system looks along the flooding digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Small descent: feeds the giant in-component.
    Out,
    /// Small ancestry: feeds the giant out-component.
    In,
}

/// How the directed path length inside the giant out-component is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLengthMethod {
    /// Out-neighbor counts form a geometric progression with ratio `z2_gout / z_gout`.
    Geometric,
    /// Progression ratio taken as the mean out-branching `rho` along a random edge of F.
    EdgeBranching,
    /// No usable estimate.
    Unsupported,
}

impl PathLengthMethod {
    /// Constant rules are exact under the geometric form; the heuristic rule only
    /// has an estimate on Poisson degrees.
    pub fn for_rule(rule: &FloodRule, model: &DegreeModel) -> Self {
        match (rule, model.kind()) {
            (FloodRule::Uninformed | FloodRule::Probabilistic { .. }, _) => PathLengthMethod::Geometric,
            (FloodRule::Heuristic { .. }, DegreeKind::Poisson { .. }) => PathLengthMethod::EdgeBranching,
            (FloodRule::Heuristic { .. }, _) => PathLengthMethod::Unsupported,
        }
    }
}

/// Predicted waiting-time ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum WaitingPrediction {
    Value(f64),
    /// No analytical estimate exists for this rule and degree family.
    Unsupported,
    /// The formulas do not apply (no giant out-component, or a log of a nonpositive number).
    Undefined(String),
}

impl WaitingPrediction {
    pub fn value(&self) -> Option<f64> {
        match self {
            WaitingPrediction::Value(v) => Some(*v),
            _ => None,
        }
    }
}

/// Giant in/out-component quantities of the flooding digraph and the three predicted ratios.
///
/// Per-degree arrays are indexed by degree `0..=D`; entry 0 is a placeholder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigraphAnalysis {
    pub gcc: GccAnalysis,
    pub q_out: Vec<f64>,
    pub q_in: Vec<f64>,
    /// `Σ_b w^out_{a,b} bP(b)/Z`: probability that a given neighbor of a degree-`a` node is an out dead-end.
    pub dead_end_out: Vec<f64>,
    /// Same with `w^in`.
    pub dead_end_in: Vec<f64>,
    pub theta_in: f64,
    pub theta_out: f64,
    /// Mean forwarding probability of a degree-`a` node over its neighbors.
    pub h_minus: Vec<f64>,
    /// Mean out-degree in F inside the giant out-component; stands in for the
    /// out-degree of reached nodes in the message ratio.
    pub z_gout: f64,
    pub z2_gout: f64,
    pub rho: f64,
    pub path_method: PathLengthMethod,
    pub l_gout: Option<f64>,
    pub p_n: f64,
    pub p_m: f64,
    pub p_t: WaitingPrediction,
    /// Set when the prediction is known to rest on a non-converging second moment.
    pub p_t_caveat: Option<String>,
    pub residual_out: f64,
    pub residual_in: f64,
}

fn dead_end_step<K: ForwardingKernel + ?Sized>(
    kernel: &K,
    e: &[f64],
    direction: Direction,
    q: &[f64],
    y: &mut [f64],
    scratch: &mut [f64],
) {
    // y_a = 1 - Σ_b f(a,b) e_b (1 - q_b)   (f transposed for the in direction)
    for b in 0..q.len() {
        scratch[b] = e[b] * (1.0 - q[b]);
    }
    match direction {
        Direction::Out => kernel.apply(scratch, y),
        Direction::In => kernel.apply_transposed(scratch, y),
    }
    for v in y.iter_mut() {
        *v = (1.0 - *v).clamp(0.0, 1.0);
    }
}

/// Per-degree probability that a neighbor is a dead-end, given the solved `q`.
fn dead_end_probability<K: ForwardingKernel + ?Sized>(
    kernel: &K,
    e: &[f64],
    direction: Direction,
    q: &[f64],
) -> Vec<f64> {
    let mut y = vec![0.0; q.len()];
    let mut scratch = vec![0.0; q.len()];
    dead_end_step(kernel, e, direction, q, &mut y, &mut scratch);
    y
}

fn dead_end_map<'a, K: ForwardingKernel + ?Sized>(
    kernel: &'a K,
    e: &'a [f64],
    direction: Direction,
) -> impl FnMut(&[f64], &mut [f64]) + 'a {
    let mut y = vec![0.0; e.len()];
    let mut scratch = vec![0.0; e.len()];
    move |q: &[f64], out: &mut [f64]| {
        dead_end_step(kernel, e, direction, q, &mut y, &mut scratch);
        out[0] = 1.0;
        for b in 1..q.len() {
            out[b] = y[b].powi((b - 1) as i32);
        }
    }
}

/// Solves the dead-end system for an arbitrary kernel; returns `(q, residual)`.
pub fn solve_dead_end_probs_with_kernel<K: ForwardingKernel + ?Sized>(
    model: &DegreeModel,
    kernel: &K,
    direction: Direction,
) -> Result<(Vec<f64>, f64)> {
    let e = model.edge_end_pmf()?;
    let d = model.max_degree();
    if kernel.max_degree() != d {
        return Err(FloodError::InvalidModel(format!(
            "kernel covers degrees up to {}, model up to {d}",
            kernel.max_degree()
        )));
    }
    let fp = solve_fixed_point(
        vec![0.0; d + 1],
        dead_end_map(kernel, &e, direction),
        &FixedPointOptions::default(),
    )?;
    let res = residual(&fp.values, dead_end_map(kernel, &e, direction));
    Ok((fp.values, res))
}

/// `q_b` for `b = 0..=D` (entry 0 fixed at 1).
pub fn solve_dead_end_probs(model: &DegreeModel, rule: FloodRule, direction: Direction) -> Result<Vec<f64>> {
    rule.validate()?;
    let kernel = MinDegreeKernel::new(rule, model.max_degree());
    solve_dead_end_probs_with_kernel(model, &kernel, direction).map(|(q, _)| q)
}

/// `1 - Σ_a y_a^a P(a)`.
fn giant_fraction(model: &DegreeModel, dead_end: &[f64]) -> f64 {
    let outside: f64 = model
        .pmf()
        .iter()
        .zip(dead_end)
        .enumerate()
        .map(|(a, (&p, &y))| if a == 0 { p } else { y.powi(a as i32) * p })
        .sum();
    (1.0 - outside).clamp(0.0, 1.0)
}

/// `(θ^in, θ^out)` with both dead-end systems solved independently.
pub fn giant_fractions(model: &DegreeModel, rule: FloodRule) -> Result<(f64, f64)> {
    rule.validate()?;
    let kernel = MinDegreeKernel::new(rule, model.max_degree());
    let e = model.edge_end_pmf()?;
    let (q_out, _) = solve_dead_end_probs_with_kernel(model, &kernel, Direction::Out)?;
    let (q_in, _) = solve_dead_end_probs_with_kernel(model, &kernel, Direction::In)?;
    let theta_in = giant_fraction(model, &dead_end_probability(&kernel, &e, Direction::Out, &q_out));
    let theta_out = giant_fraction(model, &dead_end_probability(&kernel, &e, Direction::In, &q_in));
    Ok((theta_in, theta_out))
}

/// Full analysis for one of the shipped rules.
pub fn digraph_analysis(model: &DegreeModel, rule: FloodRule, n: usize) -> Result<DigraphAnalysis> {
    rule.validate()?;
    let kernel = MinDegreeKernel::new(rule, model.max_degree());
    let method = PathLengthMethod::for_rule(&rule, model);
    let mut analysis = digraph_analysis_with_kernel(model, &kernel, method, n)?;
    if method == PathLengthMethod::Geometric && matches!(model.kind(), DegreeKind::PowerLaw { tau } if *tau <= 3.0) {
        analysis.p_t_caveat = Some(
            "second moment of a power law with tau <= 3 does not converge; path lengths depend on the truncation"
                .to_string(),
        );
    }
    Ok(analysis)
}

/// Full analysis for any forwarding kernel sized to the model's truncation bound.
pub fn digraph_analysis_with_kernel<K: ForwardingKernel + ?Sized>(
    model: &DegreeModel,
    kernel: &K,
    path_method: PathLengthMethod,
    n: usize,
) -> Result<DigraphAnalysis> {
    let gcc = gcc_analysis(model, n)?;
    if gcc.theta_g <= THETA_EPS {
        return Err(FloodError::NoGiantComponent(format!(
            "giant component fraction is {:e}",
            gcc.theta_g
        )));
    }
    let e = model.edge_end_pmf()?;
    let pmf = model.pmf();
    let d = model.max_degree();

    let (q_out, residual_out) = solve_dead_end_probs_with_kernel(model, kernel, Direction::Out)?;
    let (q_in, residual_in) = solve_dead_end_probs_with_kernel(model, kernel, Direction::In)?;
    let dead_end_out = dead_end_probability(kernel, &e, Direction::Out, &q_out);
    let dead_end_in = dead_end_probability(kernel, &e, Direction::In, &q_in);
    let theta_in = giant_fraction(model, &dead_end_out);
    let theta_out = giant_fraction(model, &dead_end_in);

    let mut h_minus = vec![0.0; d + 1];
    kernel.apply(&e, &mut h_minus);

    // v_b = (b-1) h_b e_b;  u_a = Σ_b f(a,b) v_b  (expected 2-out-neighbors through one neighbor)
    let v: Vec<f64> = (0..=d)
        .map(|b| {
            if b == 0 {
                0.0
            } else {
                (b - 1) as f64 * h_minus[b] * e[b]
            }
        })
        .collect();
    let mut u = vec![0.0; d + 1];
    kernel.apply(&v, &mut u);

    let rho = {
        let denom: f64 = (1..=d).map(|b| h_minus[b] * e[b]).sum();
        let numer: f64 = (1..=d).map(|a| e[a] * u[a]).sum();
        if denom > 0.0 {
            numer / denom
        } else {
            0.0
        }
    };

    let out_exists = theta_out > THETA_EPS && theta_in > THETA_EPS;
    let (z_gout, z2_gout) = if theta_out > THETA_EPS {
        // P(a | GOUT) = [1 - y_a^a] P(a) / θ^out
        let mut z1 = 0.0;
        let mut z2 = 0.0;
        for a in 1..=d {
            let w = (1.0 - dead_end_in[a].powi(a as i32)) * pmf[a] / theta_out;
            z1 += a as f64 * h_minus[a] * w;
            z2 += a as f64 * u[a] * w;
        }
        (z1, z2)
    } else {
        (0.0, 0.0)
    };

    let theta_g = gcc.theta_g;
    let (p_n, p_m) = if out_exists {
        let p_n = (theta_in * theta_out / (theta_g * theta_g)).clamp(0.0, 1.0);
        (p_n, z_gout * p_n / gcc.z_gcc)
    } else {
        (0.0, 0.0)
    };

    let nodes_out = n as f64 * theta_out;
    let l_gout = if !out_exists {
        None
    } else {
        match path_method {
            PathLengthMethod::Geometric if z_gout > 0.0 => geometric_path_length(nodes_out, z_gout, z2_gout / z_gout),
            PathLengthMethod::EdgeBranching => geometric_path_length(nodes_out, z_gout, rho),
            _ => None,
        }
    };

    let p_t = if path_method == PathLengthMethod::Unsupported {
        WaitingPrediction::Unsupported
    } else if !out_exists {
        WaitingPrediction::Undefined("flooding digraph has no giant in/out-component".into())
    } else {
        match (l_gout, gcc.l_gcc) {
            (Some(l_out), Some(l_gcc)) => WaitingPrediction::Value(theta_in * l_out / (theta_g * l_gcc)),
            (None, _) => WaitingPrediction::Undefined("directed path length undefined".into()),
            (_, None) => WaitingPrediction::Undefined("giant-component path length undefined".into()),
        }
    };

    Ok(DigraphAnalysis {
        gcc,
        q_out,
        q_in,
        dead_end_out,
        dead_end_in,
        theta_in,
        theta_out,
        h_minus,
        z_gout,
        z2_gout,
        rho,
        path_method,
        l_gout,
        p_n,
        p_m,
        p_t,
        p_t_caveat: None,
        residual_out,
        residual_in,
    })
}
