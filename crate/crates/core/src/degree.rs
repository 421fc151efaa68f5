//! Truncated node-degree distributions and their generating-function quantities.

use serde::{Deserialize, Serialize};

use crate::error::{FloodError, Result};

const CRITICAL_RATIO_EPS: f64 = 1e-12;

/// Family a [`DegreeModel`] was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DegreeKind {
    /// Poisson with mean degree `z`.
    Poisson { z: f64 },
    /// `P(a) ∝ a^-tau` for `a >= 1`.
    PowerLaw { tau: f64 },
    /// Histogram of degree counts, indexed by degree.
    Empirical { counts: Vec<u64> },
}

impl DegreeKind {
    pub fn family_name(&self) -> &'static str {
        match self {
            DegreeKind::Poisson { .. } => "poisson",
            DegreeKind::PowerLaw { .. } => "power_law",
            DegreeKind::Empirical { .. } => "empirical",
        }
    }
}

/// A degree distribution truncated to `0..=max_degree` and renormalized.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeModel {
    kind: DegreeKind,
    max_degree: usize,
    pmf: Vec<f64>,
}

impl DegreeModel {
    pub fn build(kind: DegreeKind, max_degree: usize) -> Result<Self> {
        if max_degree < 1 {
            return Err(FloodError::InvalidModel(format!(
                "max_degree must be at least 1, got {max_degree}"
            )));
        }
        let weights = match &kind {
            DegreeKind::Poisson { z } => poisson_weights(*z, max_degree)?,
            DegreeKind::PowerLaw { tau } => power_law_weights(*tau, max_degree)?,
            DegreeKind::Empirical { counts } => empirical_weights(counts, max_degree)?,
        };
        let pmf = normalize(weights)?;
        Ok(DegreeModel { kind, max_degree, pmf })
    }

    pub fn poisson(z: f64, max_degree: usize) -> Result<Self> {
        Self::build(DegreeKind::Poisson { z }, max_degree)
    }

    pub fn power_law(tau: f64, max_degree: usize) -> Result<Self> {
        Self::build(DegreeKind::PowerLaw { tau }, max_degree)
    }

    /// All mass on a single degree.
    pub fn point_mass(degree: usize) -> Result<Self> {
        let mut counts = vec![0; degree + 1];
        counts[degree] = 1;
        Self::build(DegreeKind::Empirical { counts }, degree.max(1))
    }

    pub fn kind(&self) -> &DegreeKind {
        &self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Probabilities indexed by degree, `0..=max_degree`.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Largest degree carrying nonzero mass.
    pub fn support_max(&self) -> usize {
        self.pmf.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }

    /// `Σ a^s P(a)`.
    pub fn moment(&self, s: u32) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(a, &p)| (a as f64).powi(s as i32) * p)
            .sum()
    }

    /// Mean degree Z_G.
    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    /// Degree distribution of the node at the end of a uniformly chosen edge:
    /// entry `b` is `b P(b) / Z`. Indexed by degree, entry 0 is always 0.
    pub fn edge_end_pmf(&self) -> Result<Vec<f64>> {
        let z = self.mean();
        if z <= 0.0 {
            return Err(FloodError::ZeroMeanDegree);
        }
        Ok(self.pmf.iter().enumerate().map(|(b, &p)| b as f64 * p / z).collect())
    }

    /// `(⟨K²⟩/Z > 2, ⟨K²⟩/Z)`. Ratios within rounding of 2 count as critical, not above.
    pub fn above_phase_transition(&self) -> Result<(bool, f64)> {
        let z = self.mean();
        if z <= 0.0 {
            return Err(FloodError::ZeroMeanDegree);
        }
        let ratio = self.moment(2) / z;
        Ok((ratio - 2.0 > CRITICAL_RATIO_EPS, ratio))
    }

    /// G₀(x) = Σ x^a P(a).
    pub fn g0(&self, x: f64) -> f64 {
        horner(&self.pmf, x)
    }

    /// G₀'(x) = Σ a x^(a-1) P(a).
    pub fn g0_prime(&self, x: f64) -> f64 {
        let coeffs: Vec<f64> = self
            .pmf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(a, &p)| a as f64 * p)
            .collect();
        horner(&coeffs, x)
    }

    /// G₁(x) = G₀'(x) / Z.
    pub fn g1(&self, x: f64) -> Result<f64> {
        let z = self.mean();
        if z <= 0.0 {
            return Err(FloodError::ZeroMeanDegree);
        }
        Ok(self.g0_prime(x) / z)
    }

    /// Mean excess degree G₁'(1) = Σ (b-1) b P(b) / Z.
    pub fn mean_excess_degree(&self) -> Result<f64> {
        let e = self.edge_end_pmf()?;
        Ok(e.iter().enumerate().skip(1).map(|(b, &w)| (b - 1) as f64 * w).sum())
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poisson_weights(z: f64, max_degree: usize) -> Result<Vec<f64>> {
    if !(z.is_finite() && z > 0.0) {
        return Err(FloodError::InvalidModel(format!(
            "poisson mean must be positive, got {z}"
        )));
    }
    let ln_z = z.ln();
    let mut log_p = -z;
    let mut weights = Vec::with_capacity(max_degree + 1);
    weights.push(log_p.exp());
    for a in 1..=max_degree {
        log_p += ln_z - (a as f64).ln();
        weights.push(log_p.exp());
    }
    Ok(weights)
}

fn power_law_weights(tau: f64, max_degree: usize) -> Result<Vec<f64>> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(FloodError::InvalidModel(format!(
            "power-law exponent must be positive, got {tau}"
        )));
    }
    let mut weights = vec![0.0; max_degree + 1];
    for (a, w) in weights.iter_mut().enumerate().skip(1) {
        *w = (a as f64).powf(-tau);
    }
    Ok(weights)
}

fn empirical_weights(counts: &[u64], max_degree: usize) -> Result<Vec<f64>> {
    let mut weights = vec![0.0; max_degree + 1];
    for (w, &c) in weights.iter_mut().zip(counts) {
        *w = c as f64;
    }
    Ok(weights)
}

fn normalize(mut weights: Vec<f64>) -> Result<Vec<f64>> {
    // smallest terms first
    let total: f64 = weights.iter().rev().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(FloodError::InvalidModel(
            "distribution has no mass within the truncation bound".into(),
        ));
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    Ok(weights)
}
