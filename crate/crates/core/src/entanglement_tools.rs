//! Entropies, Schmidt angle, partial transpose and the PPT witness for the
//! long-time coherent-state ρ.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::jc_dynamics::{HybridDensityMatrix, HybridPureState};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

impl EntropyBase {
    fn log(self, x: f64) -> f64 {
        match self {
            EntropyBase::Bits => x.log2(),
            EntropyBase::Nats => x.ln(),
        }
    }
}

/// Non-positive eigenvalues (numerical noise around zero) contribute nothing.
fn shannon(probs: &[f64], base: EntropyBase) -> f64 {
    probs
        .iter()
        .copied()
        .filter(|&p| p > 0.0)
        .map(|p| -p * base.log(p))
        .sum::<f64>()
        .max(0.0)
}

fn atom_spectrum(rho_a: &CMatrix) -> [f64; 2] {
    linalg::hermitian_2x2_eigenvalues(rho_a[(0, 0)].re, rho_a[(0, 1)], rho_a[(1, 1)].re)
}

/// `-Tr ρ_A log ρ_A` of the reduced atom state.
pub fn von_neumann_entropy(state: &HybridPureState, base: EntropyBase) -> f64 {
    shannon(&atom_spectrum(&state.reduced_atom()), base)
}

/// Entropy of the reduced atom state of a mixed ρ. For pure states this is
/// the entanglement entropy; for mixed states it also counts classical
/// mixing.
pub fn atom_entropy(rho: &HybridDensityMatrix, base: EntropyBase) -> f64 {
    shannon(&atom_spectrum(&rho.reduced_atom()), base)
}

/// `cos θ |0⟩|0'⟩ + sin θ |1⟩|1'⟩` form of a pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtData {
    pub theta: f64,
}

impl SchmidtData {
    pub fn cos(&self) -> f64 {
        self.theta.cos()
    }

    pub fn sin(&self) -> f64 {
        self.theta.sin()
    }

    /// `2√(1 + sin² 2θ)`.
    pub fn bell_max(&self) -> f64 {
        2.0 * (1.0 + (2.0 * self.theta).sin().powi(2)).sqrt()
    }

    pub fn entropy(&self, base: EntropyBase) -> f64 {
        let c2 = self.cos().powi(2);
        shannon(&[c2, 1.0 - c2], base)
    }
}

/// `θ = arcsin √λ_min(ρ_A)`.
pub fn schmidt_angle(state: &HybridPureState) -> SchmidtData {
    let lo = atom_spectrum(&state.reduced_atom())[0].clamp(0.0, 0.5);
    SchmidtData {
        theta: lo.sqrt().asin().min(FRAC_PI_4),
    }
}

/// `(S_vN in bits, 2√(1 + sin² 2θ))` for each `θ ∈ [0, π/4]`.
pub fn entropy_bell_curve(theta_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    theta_grid
        .iter()
        .map(|&theta| {
            if !(0.0..=FRAC_PI_4).contains(&theta) {
                return Err(Error::Validation(format!("Schmidt angle {theta} outside [0, π/4]")));
            }
            let s = SchmidtData { theta };
            Ok((s.entropy(EntropyBase::Bits), s.bell_max()))
        })
        .collect()
}

/// Transpose on the field index: every block is transposed in place, so
/// `ρ_eg` becomes `ρ_egᵀ` in the `|e⟩⟨g|` slot.
pub fn partial_transpose(rho: &HybridDensityMatrix) -> HybridDensityMatrix {
    HybridDensityMatrix::from_blocks(rho.ee().transpose(), rho.eg().transpose(), rho.gg().transpose())
        .expect("transposition keeps block shapes")
}

/// Smallest eigenvalue of the partial transpose; negative certifies
/// entanglement.
pub fn ppt_min_eigenvalue(rho: &HybridDensityMatrix) -> f64 {
    linalg::hermitian_min_eigenvalue(&partial_transpose(rho).to_full())
}

/// Entries of the 2x2 block of the partially transposed long-time
/// coherent ρ that couples `|g, n⟩` and `|e, n+1⟩`, with the witness
/// polynomial at that mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBlock {
    pub n: usize,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub mu_minus: f64,
    pub p_of_n: f64,
}

/// Result of the coherent-state PPT certificate.
///
/// `n_star` is the mode singled out by the polynomial condition: `0` when
/// `α² < 2c_e²/c_g²`, otherwise an integer in `[n_min, n_min + 1]`. That mode
/// is guaranteed negative but need not be the most negative one, so the
/// deepest mode is located separately by scanning every mode up to the
/// larger root of `P`, beyond which `P > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub n_star: usize,
    pub mu_minus: f64,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub p_of_n: f64,
    /// `-1 + c_g²α²/c_e²`.
    pub n_min: f64,
    pub deepest_mode: usize,
    pub deepest_mu_minus: f64,
}

struct CoherentLadder {
    cg2: f64,
    ce2: f64,
    cg_ce: f64,
    alpha2: f64,
    /// `|C_n|²` of the coherent state.
    pops: Vec<f64>,
}

impl CoherentLadder {
    fn new(c_g: f64, c_e: f64, alpha: f64, n_max: usize) -> Self {
        let alpha2 = alpha * alpha;
        let mut pops = Vec::with_capacity(n_max + 3);
        let mut p = (-alpha2).exp();
        for n in 0..n_max + 3 {
            if n > 0 {
                p *= alpha2 / n as f64;
            }
            pops.push(p);
        }
        CoherentLadder {
            cg2: c_g * c_g,
            ce2: c_e * c_e,
            cg_ce: c_g * c_e,
            alpha2,
            pops,
        }
    }

    fn block(&self, n: usize) -> ModeBlock {
        let c = |k: usize| self.pops[k];
        let below = if n == 0 { 0.0 } else { c(n - 1) };
        let vacuum = if n == 0 { self.cg2 * c(0) } else { 0.0 };
        let a11 = 0.5 * (vacuum + self.cg2 * c(n) + self.ce2 * below);
        let a12 = self.cg_ce * (c(n) * c(n + 1)).sqrt();
        let a22 = 0.5 * (self.ce2 * c(n + 1) + self.cg2 * c(n + 2));
        let nf = n as f64;
        let p_of_n = self.ce2 * self.ce2 * nf * (nf + 2.0) - 2.0 * self.ce2 * self.cg2 * self.alpha2 * (nf + 3.0)
            + self.cg2 * self.cg2 * self.alpha2 * self.alpha2;
        ModeBlock {
            n,
            a11,
            a12,
            a22,
            mu_minus: linalg::hermitian_2x2_eigenvalues(a11, a12.into(), a22)[0],
            p_of_n,
        }
    }
}

/// PPT certificate for `(c_g|g⟩ + c_e|e⟩)|α⟩` after infinite-time noise
/// averaging. Inputs are taken real; a complex `α` or relative phase can be
/// removed beforehand by redefining the basis states.
pub fn coherent_witness(c_g: f64, c_e: f64, alpha: f64) -> Result<WitnessReport> {
    if ![c_g, c_e, alpha].iter().all(|x| x.is_finite()) {
        return Err(Error::Validation("witness inputs must be finite".into()));
    }
    if (c_g * c_g + c_e * c_e - 1.0).abs() > 1e-10 {
        return Err(Error::Validation("atom weights must satisfy c_g² + c_e² = 1".into()));
    }
    if c_e == 0.0 {
        return Err(Error::Validation("c_e = 0: the state stays separable".into()));
    }
    if c_g == 0.0 || alpha == 0.0 {
        return Err(Error::Validation(
            "degenerate input: ρ_eg vanishes when c_g·α = 0, no witness applies".into(),
        ));
    }
    let m = c_g * c_g * alpha * alpha / (c_e * c_e);
    let n_min = m - 1.0;
    let upper_root = n_min + (1.0 + 4.0 * m).sqrt();
    let window = 4usize.max(n_min.ceil().max(0.0) as usize + 2).max(upper_root.floor() as usize + 1);
    let ladder = CoherentLadder::new(c_g, c_e, alpha, window);

    let certificate = if alpha * alpha < 2.0 * c_e * c_e / (c_g * c_g) {
        ladder.block(0)
    } else {
        let lo = n_min.ceil().max(0.0) as usize;
        let hi = n_min.floor() as usize + 1;
        let a = ladder.block(lo);
        if a.p_of_n < 0.0 {
            a
        } else {
            ladder.block(hi)
        }
    };
    let deepest = (0..=window)
        .map(|n| ladder.block(n))
        .fold(None::<ModeBlock>, |best, b| match best {
            Some(x) if x.mu_minus <= b.mu_minus => Some(x),
            _ => Some(b),
        })
        .expect("window is non-empty");
    Ok(WitnessReport {
        n_star: certificate.n,
        mu_minus: certificate.mu_minus,
        a11: certificate.a11,
        a12: certificate.a12,
        a22: certificate.a22,
        p_of_n: certificate.p_of_n,
        n_min,
        deepest_mode: deepest.n,
        deepest_mu_minus: deepest.mu_minus,
    })
}

/// The 2x2 block at mode `n` for the same inputs, for inspection.
pub fn coherent_mode_block(c_g: f64, c_e: f64, alpha: f64, n: usize) -> ModeBlock {
    CoherentLadder::new(c_g, c_e, alpha, n).block(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_space::{make_coherent, make_fock, FockVector, TruncationPolicy};
    use crate::jc_dynamics::{asymptotic_density_matrix, evolve_pure};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binary_bits(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn entropy_of_product_and_bell_states() {
        let f = make_fock(1, &TruncationPolicy::default()).unwrap();
        let product = HybridPureState::separable(c(0.6, 0.0), c(0.8, 0.0), &f).unwrap();
        assert!(von_neumann_entropy(&product, EntropyBase::Bits).abs() < 1e-12);
        assert!(schmidt_angle(&product).theta < 1e-7);

        let h = c(0.5f64.sqrt(), 0.0);
        let bell = HybridPureState::new(FockVector::basis(0, 2).scaled(h), FockVector::basis(1, 2).scaled(h)).unwrap();
        assert!((von_neumann_entropy(&bell, EntropyBase::Bits) - 1.0).abs() < 1e-12);
        assert!((von_neumann_entropy(&bell, EntropyBase::Nats) - 2f64.ln()).abs() < 1e-12);
        assert!((schmidt_angle(&bell).theta - PI / 4.0).abs() < 1e-8);
    }

    #[test]
    fn entropy_of_evolved_excited_vacuum() {
        let e0 = HybridPureState::separable(c(0.0, 0.0), c(1.0, 0.0), &FockVector::basis(0, 1)).unwrap();
        for &t in &[PI / 8.0, 0.3, 1.1] {
            let s = evolve_pure(&e0, 1.0, t);
            let expect = binary_bits(t.cos().powi(2));
            assert!((von_neumann_entropy(&s, EntropyBase::Bits) - expect).abs() < 1e-12);
            let theta = schmidt_angle(&s);
            assert!((theta.entropy(EntropyBase::Bits) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn curve_endpoints_and_midpoint() {
        let pts = entropy_bell_curve(&[0.0, PI / 8.0, PI / 4.0]).unwrap();
        assert_eq!(pts[0], (0.0, 2.0));
        assert!((pts[2].0 - 1.0).abs() < 1e-12);
        assert!((pts[2].1 - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((pts[1].0 - binary_bits((PI / 8.0).cos().powi(2))).abs() < 1e-12);
        assert!((pts[1].1 - 2.0 * 1.5f64.sqrt()).abs() < 1e-12);
        assert!(entropy_bell_curve(&[0.9]).is_err());
        assert!(entropy_bell_curve(&[-0.1]).is_err());
    }

    #[test]
    fn ladder_state_partial_transpose() {
        let h = c(0.5f64.sqrt(), 0.0);
        let s = HybridPureState::new(FockVector::basis(1, 3).scaled(h), FockVector::basis(0, 3).scaled(h)).unwrap();
        let rho = asymptotic_density_matrix(&s);
        assert!((ppt_min_eigenvalue(&rho) + 0.5).abs() < 1e-15);
        let twice = partial_transpose(&partial_transpose(&rho));
        assert_eq!(twice, rho);
    }

    #[test]
    fn diagonal_state_is_unchanged() {
        let mut ee = CMatrix::zeros(2, 2);
        ee[(1, 1)] = c(0.3, 0.0);
        let mut gg = CMatrix::zeros(2, 2);
        gg[(0, 0)] = c(0.7, 0.0);
        let rho = HybridDensityMatrix::from_blocks(ee, CMatrix::zeros(2, 2), gg).unwrap();
        assert_eq!(partial_transpose(&rho), rho);
        assert!(ppt_min_eigenvalue(&rho) >= 0.0);
    }

    #[test]
    fn witness_small_alpha_uses_vacuum_mode() {
        let h = 0.5f64.sqrt();
        let w = coherent_witness(h, h, 0.5).unwrap();
        assert_eq!(w.n_star, 0);
        assert!(w.mu_minus < 0.0);
        let tr = w.a11 + w.a22;
        let det = w.a11 * w.a22 - w.a12 * w.a12;
        assert!((w.mu_minus - 0.5 * (tr - (tr * tr - 4.0 * det).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn witness_large_alpha_brute_force() {
        let (cg, ce, alpha) = (0.9, 0.19f64.sqrt(), 2.0);
        let w = coherent_witness(cg, ce, alpha).unwrap();
        assert!((w.n_min - (-1.0 + 0.81 * 4.0 / 0.19)).abs() < 1e-12);
        assert_eq!(w.n_star, 17);
        assert!(w.p_of_n < 0.0 && w.mu_minus < 0.0);
        // Brute force over n = 0..40 directly from coherent amplitudes.
        let pop = |n: i64| {
            if n < 0 {
                0.0
            } else {
                (-alpha * alpha + n as f64 * (alpha * alpha).ln() - (1..=n).map(|k| (k as f64).ln()).sum::<f64>()).exp()
            }
        };
        let mut best = (f64::INFINITY, 0);
        for n in 0..=40i64 {
            let a11 = 0.5 * (if n == 0 { cg * cg * pop(0) } else { 0.0 } + cg * cg * pop(n) + ce * ce * pop(n - 1));
            let a12 = cg * ce * (pop(n) * pop(n + 1)).sqrt();
            let a22 = 0.5 * (ce * ce * pop(n + 1) + cg * cg * pop(n + 2));
            let mu = 0.5 * (a11 + a22 - ((a11 - a22).powi(2) + 4.0 * a12 * a12).sqrt());
            if n == 17 {
                assert!((mu - w.mu_minus).abs() < 1e-15);
            }
            if mu < best.0 {
                best = (mu, n as usize);
            }
        }
        assert_eq!(w.deepest_mode, best.1);
        assert!((w.deepest_mu_minus - best.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_minimum_closed_form() {
        for &(cg, alpha) in &[(0.3, 0.7), (0.6, 2.5), (0.95, 3.9)] {
            let ce = (1.0f64 - cg * cg).sqrt();
            let w = coherent_witness(cg, ce, alpha).unwrap();
            let (cg2, ce2, a2) = (cg * cg, ce * ce, alpha * alpha);
            let n = w.n_min;
            let p = ce2 * ce2 * n * (n + 2.0) - 2.0 * ce2 * cg2 * a2 * (n + 3.0) + cg2 * cg2 * a2 * a2;
            let expect = -ce2 * (ce2 + 4.0 * cg2 * a2);
            assert!((p - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn witness_rejects_degenerate_inputs() {
        assert!(coherent_witness(0.0, 1.0, 1.0).is_err());
        assert!(coherent_witness(1.0, 0.0, 1.0).is_err());
        assert!(coherent_witness(0.6, 0.8, 0.0).is_err());
        assert!(coherent_witness(0.6, 0.6, 1.0).is_err());
    }

    #[test]
    fn witness_matches_assembled_partial_transpose() {
        let h = 0.5f64.sqrt();
        let policy = TruncationPolicy::new(64, 1e-16).unwrap();
        let field = make_coherent(c(0.5, 0.0), &policy).unwrap();
        let s = HybridPureState::separable(c(h, 0.0), c(h, 0.0), &field).unwrap();
        let rho = asymptotic_density_matrix(&s);
        let w = coherent_witness(h, h, 0.5).unwrap();
        let min = ppt_min_eigenvalue(&rho);
        assert!(min < 0.0);
        assert!((min - w.deepest_mu_minus).abs() < 1e-10);
        assert!(min <= w.mu_minus + 1e-10);
    }
}
