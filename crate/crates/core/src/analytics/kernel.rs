//! Linear maps `x ↦ Σ_b f(a, b) x_b` over degrees `1..=D`.
//!
//! Vectors are indexed by degree; index 0 is ignored on input and written as 0.

use crate::rule::FloodRule;

pub trait ForwardingKernel: Sync {
    fn max_degree(&self) -> usize;

    /// `f(a, b)` for `1 <= a, b <= max_degree`.
    fn value(&self, a: usize, b: usize) -> f64;

    /// `y_a = Σ_b f(a, b) x_b`.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        dense_apply(self.max_degree(), |a, b| self.value(a, b), x, y);
    }

    /// `y_a = Σ_b f(b, a) x_b`.
    fn apply_transposed(&self, x: &[f64], y: &mut [f64]) {
        dense_apply(self.max_degree(), |a, b| self.value(b, a), x, y);
    }
}

fn dense_apply(d: usize, f: impl Fn(usize, usize) -> f64, x: &[f64], y: &mut [f64]) {
    y[0] = 0.0;
    for (a, ya) in y.iter_mut().enumerate().take(d + 1).skip(1) {
        *ya = (1..=d).map(|b| f(a, b) * x[b]).sum();
    }
}

/// Kernel for a rule of the form `f(a, b) = g(min(a, b))`, applied in `O(D)`
/// with prefix and suffix sums. Symmetric by construction.
#[derive(Debug, Clone)]
pub struct MinDegreeKernel {
    by_min: Vec<f64>,
}

impl MinDegreeKernel {
    pub fn new(rule: FloodRule, max_degree: usize) -> Self {
        MinDegreeKernel {
            by_min: rule.min_degree_table(max_degree),
        }
    }
}

impl ForwardingKernel for MinDegreeKernel {
    fn max_degree(&self) -> usize {
        self.by_min.len() - 1
    }

    fn value(&self, a: usize, b: usize) -> f64 {
        self.by_min[a.min(b)]
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let d = self.max_degree();
        // y_a = Σ_{b<a} g(b) x_b + g(a) Σ_{b>=a} x_b
        let mut tail = vec![0.0; d + 2];
        for b in (1..=d).rev() {
            tail[b] = tail[b + 1] + x[b];
        }
        y[0] = 0.0;
        let mut head = 0.0;
        for a in 1..=d {
            y[a] = head + self.by_min[a] * tail[a];
            head += self.by_min[a] * x[a];
        }
    }

    fn apply_transposed(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y);
    }
}

/// Arbitrary `f(a, b)` evaluated densely in `O(D²)`.
pub struct DenseKernel<F> {
    max_degree: usize,
    f: F,
}

impl<F> DenseKernel<F>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    pub fn new(max_degree: usize, f: F) -> Self {
        DenseKernel { max_degree, f }
    }
}

impl<F> ForwardingKernel for DenseKernel<F>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn value(&self, a: usize, b: usize) -> f64 {
        (self.f)(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_kernel_matches_dense_evaluation() {
        let rule = FloodRule::heuristic(0.9).unwrap();
        let fast = MinDegreeKernel::new(rule, 30);
        let dense = DenseKernel::new(30, |a, b| rule.forward_probability(a, b));
        let x: Vec<f64> = (0..=30).map(|i| ((i * 7919) % 31) as f64 / 31.0).collect();
        let mut y1 = vec![0.0; 31];
        let mut y2 = vec![0.0; 31];
        fast.apply(&x, &mut y1);
        dense.apply(&x, &mut y2);
        for a in 0..=30 {
            assert!((y1[a] - y2[a]).abs() < 1e-12, "a={a}: {} vs {}", y1[a], y2[a]);
        }
    }

    #[test]
    fn dense_transpose() {
        let k = DenseKernel::new(2, |a, b| if a == 1 && b == 2 { 1.0 } else { 0.0 });
        let x = [0.0, 3.0, 5.0];
        let mut y = [0.0; 3];
        k.apply(&x, &mut y);
        assert_eq!(y, [0.0, 5.0, 0.0]);
        k.apply_transposed(&x, &mut y);
        assert_eq!(y, [0.0, 0.0, 3.0]);
    }
}
