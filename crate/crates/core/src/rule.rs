//! Forwarding policies `f(a, b)`: the probability that a node of degree `a`
//! forwards the item to a neighbor of degree `b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FloodError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum FloodRule {
    /// Forward on every edge.
    Uninformed,
    /// Forward on each edge with fixed probability `p`.
    Probabilistic { p: f64 },
    /// Degree-aware forwarding aiming at reach probability `alpha`.
    Heuristic { alpha: f64 },
}

impl FloodRule {
    pub fn probabilistic(p: f64) -> Result<Self> {
        let rule = FloodRule::Probabilistic { p };
        rule.validate()?;
        Ok(rule)
    }

    pub fn heuristic(alpha: f64) -> Result<Self> {
        let rule = FloodRule::Heuristic { alpha };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FloodRule::Uninformed => Ok(()),
            FloodRule::Probabilistic { p } if (0.0..=1.0).contains(&p) => Ok(()),
            FloodRule::Probabilistic { p } => Err(FloodError::InvalidRule(format!(
                "forwarding probability must lie in [0, 1], got {p}"
            ))),
            FloodRule::Heuristic { alpha } if alpha > 0.0 && alpha < 1.0 => Ok(()),
            FloodRule::Heuristic { alpha } => Err(FloodError::InvalidRule(format!(
                "heuristic alpha must lie in (0, 1), got {alpha}"
            ))),
        }
    }

    /// Short identifier used in result files.
    pub fn name(&self) -> &'static str {
        match self {
            FloodRule::Uninformed => "uninformed",
            FloodRule::Probabilistic { .. } => "probabilistic",
            FloodRule::Heuristic { .. } => "heuristic",
        }
    }

    /// `p` or `alpha`; `None` for the uninformed rule.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            FloodRule::Uninformed => None,
            FloodRule::Probabilistic { p } => Some(p),
            FloodRule::Heuristic { alpha } => Some(alpha),
        }
    }

    /// `f(a, b)` for degrees `a, b >= 1`.
    ///
    /// Panics if either degree is zero: a node without edges never forwards.
    pub fn forward_probability(&self, a: usize, b: usize) -> f64 {
        assert!(
            a >= 1 && b >= 1,
            "forward_probability needs degrees >= 1, got ({a}, {b})"
        );
        match *self {
            FloodRule::Uninformed => 1.0,
            FloodRule::Probabilistic { p } => p,
            FloodRule::Heuristic { alpha } => heuristic_probability(alpha, a.min(b)),
        }
    }

    /// Forwarding probability as a function of `min(a, b)` alone.
    ///
    /// Every shipped rule depends on the degrees only through their minimum.
    pub fn by_min_degree(&self, min_degree: usize) -> f64 {
        self.forward_probability(min_degree, min_degree)
    }

    /// Table of `by_min_degree(m)` for `m` in `0..=max_degree`; entry 0 is unused and set to 0.
    pub fn min_degree_table(&self, max_degree: usize) -> Vec<f64> {
        std::iter::once(0.0)
            .chain((1..=max_degree).map(|m| self.by_min_degree(m)))
            .collect()
    }
}

impl fmt::Display for FloodRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(v) => write!(f, "{}({v})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

/// `h = (1 - (1 - alpha)^(1/m)) / alpha`.
fn heuristic_probability(alpha: f64, min_degree: usize) -> f64 {
    if min_degree == 1 {
        return 1.0;
    }
    // 1 - (1-alpha)^(1/m) without cancellation for large m
    let numer = -((1.0 - alpha).ln() / min_degree as f64).exp_m1();
    (numer / alpha).clamp(0.0, 1.0)
}
