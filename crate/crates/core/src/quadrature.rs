//! Gauss–Hermite rules for averaging over a normal distribution.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg;

/// Nodes and weights of the `n`-point rule for `∫ e^{-x²} f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `(p_n(z), √(2n) p_{n-1}(z))` for the orthonormal Hermite recurrence
/// scaled by `π^{-1/4}`; the second entry is `p_n'(z)`.
fn orthonormal_hermite(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

impl GaussHermite {
    /// Nodes are the eigenvalues of the Jacobi matrix of the Hermite
    /// recurrence, polished by Newton steps on the orthonormal recurrence,
    /// which also yields the weights.
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::config("noise.quad_order", "quadrature order must be at least 1"));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut off: Vec<f64> = (1..n).map(|k| (0.5 * k as f64).sqrt()).collect();
        off.push(0.0);
        linalg::tridiagonal_eigenvalues(&mut nodes, &mut off);
        nodes.sort_by(|a, b| a.total_cmp(b));
        // Enforce the symmetry of the rule exactly.
        for i in 0..n / 2 {
            let z = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let weights = nodes
            .iter_mut()
            .map(|z| {
                let mut pp = 0.0;
                for _ in 0..3 {
                    let (p1, d) = orthonormal_hermite(n, *z);
                    pp = d;
                    if *z != 0.0 {
                        *z -= p1 / pp;
                    }
                }
                2.0 / (pp * pp)
            })
            .collect();
        Ok(GaussHermite { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Sample points and probabilities representing `N(mean, sigma)`.
    /// Probabilities are normalised to sum to one.
    pub fn normal_points(&self, mean: f64, sigma: f64) -> Vec<(f64, f64)> {
        let total: f64 = self.weights.iter().sum();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mean + std::f64::consts::SQRT_2 * sigma * x, w / total))
            .collect()
    }
}
