//! Maximal CHSH value for a qubit ⊗ qudit state.
//!
//! Writing `ρ = ½[1 ⊗ β₀ + Σ σᵢ ⊗ βᵢ]`, the optimum over all dichotomic
//! observables is `2 max_R √(‖(Rβ)₁‖₁² + ‖(Rβ)₂‖₁²)` with `R` ranging over
//! SO(3) and `‖·‖₁` the sum of absolute eigenvalues. `R` is parametrised as
//! `Rz(a) Ry(b) Rz(c)`.

mod simplex;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jc_dynamics::{HybridDensityMatrix, HybridPureState};
use crate::linalg::{self, CMatrix, I};

/// Hermiticity tolerance applied to `ρ_ee` and `ρ_gg` before decomposing.
const HERMITIAN_TOL: f64 = 1e-10;

/// `β₀ = ρ_ee + ρ_gg`, `β₁ = ρ_eg + ρ_ge`, `β₂ = i(ρ_eg - ρ_ge)`, `β₃ = ρ_ee - ρ_gg`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaDecomposition {
    pub beta0: CMatrix,
    pub beta1: CMatrix,
    pub beta2: CMatrix,
    pub beta3: CMatrix,
}

impl BetaDecomposition {
    pub fn decompose(rho: &HybridDensityMatrix) -> Result<Self> {
        let defect = rho.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Validation(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let ge = rho.ge();
        Ok(BetaDecomposition {
            beta0: rho.ee() + rho.gg(),
            beta1: rho.eg() + &ge,
            beta2: (rho.eg() - &ge) * I,
            beta3: rho.ee() - rho.gg(),
        })
    }

    pub fn dim(&self) -> usize {
        self.beta0.nrows()
    }

    /// `½[1₂ ⊗ β₀ + Σ σᵢ ⊗ βᵢ]` as a full `2d × 2d` matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let half = Complex64::new(0.5, 0.0);
        let ee = (&self.beta0 + &self.beta3) * half;
        let gg = (&self.beta0 - &self.beta3) * half;
        let eg = (&self.beta1 - &self.beta2 * I) * half;
        HybridDensityMatrix::from_blocks(ee, eg, gg)
            .expect("blocks share a shape")
            .to_full()
    }

    fn blocks(&self) -> [&CMatrix; 3] {
        [&self.beta1, &self.beta2, &self.beta3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationScanConfig {
    /// Grid resolution: angles are sampled every `π / coarse_steps`.
    #[serde(default = "RotationScanConfig::default_coarse_steps")]
    pub coarse_steps: usize,
    #[serde(default = "RotationScanConfig::default_refine_iters")]
    pub refine_iters: usize,
    #[serde(default = "RotationScanConfig::default_refine_tol")]
    pub refine_tol: f64,
}

impl RotationScanConfig {
    pub const MIN_COARSE_STEPS: usize = 8;

    fn default_coarse_steps() -> usize {
        24
    }

    fn default_refine_iters() -> usize {
        500
    }

    fn default_refine_tol() -> f64 {
        1e-9
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_steps < Self::MIN_COARSE_STEPS {
            return Err(Error::config(
                "scan.coarse_steps",
                format!("must be at least {}", Self::MIN_COARSE_STEPS),
            ));
        }
        if !(self.refine_tol > 0.0) || !self.refine_tol.is_finite() {
            return Err(Error::config("scan.refine_tol", "must be positive and finite"));
        }
        Ok(())
    }
}

impl Default for RotationScanConfig {
    fn default() -> Self {
        RotationScanConfig {
            coarse_steps: Self::default_coarse_steps(),
            refine_iters: Self::default_refine_iters(),
            refine_tol: Self::default_refine_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult {
    pub value: f64,
    /// `(a, b, c)` of `Rz(a) Ry(b) Rz(c)`, each wrapped into `[0, 2π)`.
    pub euler: [f64; 3],
    pub sum1: f64,
    pub sum2: f64,
}

impl BellResult {
    fn new(euler: [f64; 3], (sum1, sum2): (f64, f64)) -> Self {
        BellResult {
            value: bell_value(sum1, sum2),
            euler: euler.map(|x| x.rem_euclid(TAU)),
            sum1,
            sum2,
        }
    }
}

fn bell_value(s1: f64, s2: f64) -> f64 {
    2.0 * s1.hypot(s2)
}

/// First two rows of `Rz(a) Ry(b) Rz(c)`.
fn rotation_rows(x: &[f64; 3]) -> [[f64; 3]; 2] {
    let (sa, ca) = x[0].sin_cos();
    let (sb, cb) = x[1].sin_cos();
    let (sc, cc) = x[2].sin_cos();
    [
        [ca * cb * cc - sa * sc, -ca * cb * sc - sa * cc, ca * sb],
        [sa * cb * cc + ca * sc, -sa * cb * sc + ca * cc, sa * sb],
    ]
}

/// β₁..β₃ in a form that makes `‖Σ_j c_j β_j‖₁` cheap to evaluate.
enum Representation {
    Dense([CMatrix; 3]),
    /// Every block is tridiagonal: real diagonals and complex
    /// super-diagonals.
    Tridiagonal { diag: [Vec<f64>; 3], off: [Vec<Complex64>; 3] },
}

struct Evaluator {
    rep: Representation,
    dense: CMatrix,
    diag: Vec<f64>,
    off: Vec<Complex64>,
    scratch: Vec<f64>,
}

impl Evaluator {
    /// Builds a reduced representation of the β blocks.
    ///
    /// Field indices whose populations add up to at most `trim_tol` are
    /// dropped first. If the rest is not tridiagonal, the state is projected
    /// onto the field subspace carried by its eigenvectors, discarding
    /// eigen-components of total weight at most `rank_tol`. Since
    /// `|ρ_ij|² ≤ ρ_ii ρ_jj`, both steps change the trace norms by
    /// `O(√tol)`.
    fn new(beta: &BetaDecomposition, trim_tol: f64, rank_tol: f64) -> Self {
        let mut pops: Vec<(f64, usize)> = (0..beta.dim()).map(|n| (beta.beta0[(n, n)].re.max(0.0), n)).collect();
        pops.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut dropped = 0.0;
        let mut keep = Vec::new();
        for &(p, n) in &pops {
            if keep.is_empty() && dropped + p <= trim_tol {
                dropped += p;
            } else {
                keep.push(n);
            }
        }
        if keep.is_empty() {
            keep.push(pops.last().map_or(0, |x| x.1));
        }
        keep.sort_unstable();
        let sub = |m: &CMatrix| CMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])]);
        let b0 = sub(&beta.beta0);
        let blocks = beta.blocks().map(sub);
        let d = keep.len();

        let rep = if d > 2 && blocks.iter().all(|m| linalg::bandwidth(m, 1e-15) <= 1) {
            Representation::Tridiagonal {
                diag: std::array::from_fn(|j| (0..d).map(|i| blocks[j][(i, i)].re).collect()),
                off: std::array::from_fn(|j| (0..d - 1).map(|i| blocks[j][(i, i + 1)]).collect()),
            }
        } else if d > 2 {
            match support_basis(&b0, &blocks, rank_tol) {
                Some(v) => {
                    let vh = v.adjoint();
                    Representation::Dense(blocks.map(|m| &vh * m * &v))
                }
                None => Representation::Dense(blocks),
            }
        } else {
            Representation::Dense(blocks)
        };
        let dim = match &rep {
            Representation::Dense(m) => m[0].nrows(),
            Representation::Tridiagonal { diag, .. } => diag[0].len(),
        };
        Evaluator {
            rep,
            dense: CMatrix::zeros(dim, dim),
            diag: Vec::with_capacity(dim),
            off: Vec::with_capacity(dim),
            scratch: Vec::with_capacity(dim),
        }
    }

    fn dim(&self) -> usize {
        self.dense.nrows()
    }

    fn sums(&mut self, x: &[f64; 3]) -> (f64, f64) {
        let rows = rotation_rows(x);
        let s1 = self.trace_norm(&rows[0]);
        let s2 = self.trace_norm(&rows[1]);
        (s1, s2)
    }

    fn value(&mut self, x: &[f64; 3]) -> f64 {
        let (s1, s2) = self.sums(x);
        bell_value(s1, s2)
    }

    fn trace_norm(&mut self, c: &[f64; 3]) -> f64 {
        match &self.rep {
            Representation::Dense(b) => {
                for (k, out) in self.dense.as_mut_slice().iter_mut().enumerate() {
                    *out = b[0].as_slice()[k] * c[0] + b[1].as_slice()[k] * c[1] + b[2].as_slice()[k] * c[2];
                }
                linalg::trace_norm(&self.dense)
            }
            Representation::Tridiagonal { diag, off } => {
                self.diag.clear();
                self.diag
                    .extend((0..diag[0].len()).map(|i| c[0] * diag[0][i] + c[1] * diag[1][i] + c[2] * diag[2][i]));
                self.off.clear();
                self.off
                    .extend((0..off[0].len()).map(|i| off[0][i] * c[0] + off[1][i] * c[1] + off[2][i] * c[2]));
                linalg::tridiagonal_trace_norm(&self.diag, &self.off, &mut self.scratch)
            }
        }
    }
}

/// Orthonormal basis (as columns) of the field subspace spanned by the
/// excited and ground parts of the dominant eigenvectors of ρ, or `None`
/// when that subspace is the whole space.
fn support_basis(b0: &CMatrix, blocks: &[CMatrix; 3], rank_tol: f64) -> Option<CMatrix> {
    let d = b0.nrows();
    let half = Complex64::new(0.5, 0.0);
    let ee = (b0 + &blocks[2]) * half;
    let gg = (b0 - &blocks[2]) * half;
    let eg = (&blocks[0] - &blocks[1] * I) * half;
    let full = HybridDensityMatrix::from_blocks(ee, eg, gg).ok()?.to_full();
    let eig = full.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()).then(a.cmp(&b)));
    let mut dropped = 0.0;
    let mut kept = Vec::new();
    for &k in &order {
        let p = eig.eigenvalues[k].abs();
        if kept.is_empty() && dropped + p <= rank_tol {
            dropped += p;
        } else {
            kept.push(k);
        }
    }
    if 2 * kept.len() >= d + d / 4 {
        return None;
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for &k in &kept {
        let scale = eig.eigenvalues[k].abs().sqrt();
        let col = eig.eigenvectors.column(k);
        for part in [0, d] {
            let mut v: Vec<Complex64> = (0..d).map(|i| col[part + i] * scale).collect();
            for _ in 0..2 {
                for u in &basis {
                    let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-13 {
                basis.push(v.into_iter().map(|z| z / norm).collect());
            }
        }
    }
    if basis.len() >= d {
        return None;
    }
    Some(CMatrix::from_fn(d, basis.len(), |i, j| basis[j][i]))
}

/// Trimming tolerance for the representation used at the optimum.
const ACCURATE_TOL: f64 = 1e-20;
const ACCURATE_RANK_TOL: f64 = 1e-12;
/// Looser tolerance for seeding the search on the coarse grid.
const PROXY_TOL: f64 = 1e-4;
/// Seeds taken from the coarse grid.
const SEEDS: usize = 4;

/// Coarse grid plus Nelder–Mead refinement of the rotation.
///
/// The objective is unchanged by flipping either of the first two rows of
/// `R`, by swapping them, and by flipping the third, so `a ∈ [0, π/2)`,
/// `b ∈ [0, π/2]`, `c ∈ [0, 2π)` covers every distinct value. The grid
/// spacing is `π / coarse_steps` in each angle. The identity rotation is
/// always evaluated as well.
pub fn bell_max_scan(rho: &HybridDensityMatrix, cfg: &RotationScanConfig) -> Result<BellResult> {
    cfg.validate()?;
    let beta = BetaDecomposition::decompose(rho)?;
    Ok(scan_beta(&beta, cfg))
}

pub(crate) fn scan_beta(beta: &BetaDecomposition, cfg: &RotationScanConfig) -> BellResult {
    let mut accurate = Evaluator::new(beta, ACCURATE_TOL, ACCURATE_RANK_TOL);
    let mut proxy = if accurate.dim() > 4 {
        Some(Evaluator::new(beta, PROXY_TOL, PROXY_TOL))
    } else {
        None
    };

    let s = cfg.coarse_steps;
    let step = PI / s as f64;
    let (na, nb, nc) = (s.div_ceil(2), s.div_ceil(2), 2 * s);
    let point = |i: usize, j: usize, k: usize| [i as f64 * step, (j as f64 + 0.5) * step, k as f64 * step];
    let mut grid = vec![0.0; na * nb * nc];
    {
        let eval = proxy.as_mut().unwrap_or(&mut accurate);
        for i in 0..na {
            for j in 0..nb {
                for k in 0..nc {
                    grid[(i * nb + j) * nc + k] = eval.value(&point(i, j, k));
                }
            }
        }
    }

    let mut peaks = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nc {
                let v = grid[(i * nb + j) * nc + k];
                let mut is_peak = true;
                'nbr: for di in [na - 1, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        for dk in [nc - 1, 0, 1] {
                            let jj = j as i64 + dj;
                            if jj < 0 || jj >= nb as i64 {
                                continue;
                            }
                            let ii = (i + di) % na;
                            let kk = (k + dk) % nc;
                            if grid[(ii * nb + jj as usize) * nc + kk] > v {
                                is_peak = false;
                                break 'nbr;
                            }
                        }
                    }
                }
                if is_peak {
                    peaks.push((v, (i * nb + j) * nc + k));
                }
            }
        }
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut seeds: Vec<[f64; 3]> = peaks
        .iter()
        .take(SEEDS)
        .map(|&(_, idx)| point(idx / (nb * nc), (idx / nc) % nb, idx % nc))
        .collect();
    if seeds.is_empty() {
        seeds.push(point(0, 0, 0));
    }

    let identity = [0.0; 3];
    let mut best_x = identity;
    let mut best_v = accurate.value(&identity);
    let mut consider = |x: [f64; 3], v: f64| {
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    };
    for seed in seeds {
        let v = accurate.value(&seed);
        consider(seed, v);
        let mut out = simplex::maximize(|x| accurate.value(x), seed, 0.5 * step, cfg.refine_iters, cfg.refine_tol);
        // One restart from the converged point guards against a collapsed
        // simplex.
        out = {
            let again = simplex::maximize(|x| accurate.value(x), out.x, 0.125 * step, cfg.refine_iters, cfg.refine_tol);
            if again.value >= out.value {
                again
            } else {
                out
            }
        };
        consider(out.x, out.value);
    }
    BellResult::new(best_x, accurate.sums(&best_x))
}

/// The objective at `R = 1`, which is already a valid CHSH value.
pub fn identity_lower_bound(rho: &HybridDensityMatrix) -> Result<f64> {
    let beta = BetaDecomposition::decompose(rho)?;
    Ok(bell_value(linalg::trace_norm(&beta.beta1), linalg::trace_norm(&beta.beta2)))
}

/// Closed form for pure states:
/// `2√(1 + 4(⟨φ_g|φ_g⟩⟨φ_e|φ_e⟩ - |⟨φ_g|φ_e⟩|²))`.
pub fn bell_max_pure(state: &HybridPureState) -> Result<f64> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(format!("state norm² = {n} differs from 1 by more than 1e-8")));
    }
    let rho_a = state.reduced_atom();
    let det = rho_a[(0, 0)].re * rho_a[(1, 1)].re - rho_a[(0, 1)].norm_sqr();
    Ok(2.0 * (1.0 + 4.0 * det.max(0.0)).sqrt())
}

/// Closed form for `|e⟩|k⟩` evolved under Gaussian coupling noise:
/// `2√(1 + e^{-4(k+1)t²σ²} sin²(2√(k+1) t λ̄))`.
pub fn bell_max_fock_noisy(k: u32, lambda_bar: f64, sigma: f64, t: f64) -> f64 {
    let w = (k as f64 + 1.0).sqrt();
    let damp = (-4.0 * (k as f64 + 1.0) * t * t * sigma * sigma).exp();
    2.0 * (1.0 + damp * (2.0 * w * t * lambda_bar).sin().powi(2)).sqrt()
}
