//! Resonant Jaynes–Cummings evolution of atom ⊗ cavity-mode states.
//!
//! The qubit basis is ordered `(|e⟩, |g⟩)` everywhere: full `2d × 2d`
//! matrices put the excited block first, so `σ_z = |e⟩⟨e| - |g⟩⟨g|` is
//! `diag(1, -1)`. The interaction-picture propagator only couples
//! `|e, n⟩ ↔ |g, n+1⟩`, at angular frequency `√(n+1) λ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_space::{inner, FockVector};
use crate::linalg::{self, CMatrix};
use crate::quadrature::GaussHermite;

/// Tolerance on `⟨φ_g|φ_g⟩ + ⟨φ_e|φ_e⟩ = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` count as numerically non-negative.
pub const PSD_TOL: f64 = 1e-10;

/// `|g⟩|φ_g⟩ + |e⟩|φ_e⟩` with both field vectors of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridPureState {
    phi_g: FockVector,
    phi_e: FockVector,
}

impl HybridPureState {
    /// Pads the shorter component and checks the joint norm.
    pub fn new(phi_g: FockVector, phi_e: FockVector) -> Result<Self> {
        let s = Self::from_parts(phi_g, phi_e);
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "hybrid state norm² = {n} differs from 1 by more than {NORM_TOL:e}"
            )));
        }
        Ok(s)
    }

    /// Rescales to unit norm before validating; for inputs truncated with a
    /// loose tail tolerance.
    pub fn normalized(phi_g: FockVector, phi_e: FockVector) -> Result<Self> {
        let s = Self::from_parts(phi_g, phi_e);
        let n = s.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::Validation("cannot normalise the zero state".into()));
        }
        let k = Complex64::new(1.0 / n.sqrt(), 0.0);
        Ok(Self::from_parts(s.phi_g.scaled(k), s.phi_e.scaled(k)))
    }

    /// `(c_g |g⟩ + c_e |e⟩) ⊗ |field⟩`.
    pub fn separable(c_g: Complex64, c_e: Complex64, field: &FockVector) -> Result<Self> {
        Self::new(field.scaled(c_g), field.scaled(c_e))
    }

    pub(crate) fn from_parts(phi_g: FockVector, phi_e: FockVector) -> Self {
        let d = phi_g.dim().max(phi_e.dim());
        HybridPureState {
            phi_g: phi_g.padded(d),
            phi_e: phi_e.padded(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.phi_g.dim()
    }

    pub fn phi_g(&self) -> &FockVector {
        &self.phi_g
    }

    pub fn phi_e(&self) -> &FockVector {
        &self.phi_e
    }

    pub fn norm_sqr(&self) -> f64 {
        self.phi_g.norm_sqr() + self.phi_e.norm_sqr()
    }

    /// Amplitudes in the joint basis, excited block first.
    pub fn to_vector(&self) -> Vec<Complex64> {
        self.phi_e.amps().iter().chain(self.phi_g.amps()).copied().collect()
    }

    /// Reduced atom density matrix in the `(e, g)` basis; entry `(a, b)` is
    /// `⟨φ_b|φ_a⟩`.
    pub fn reduced_atom(&self) -> CMatrix {
        let ee = inner(&self.phi_e, &self.phi_e);
        let gg = inner(&self.phi_g, &self.phi_g);
        let eg = inner(&self.phi_g, &self.phi_e);
        CMatrix::from_row_slice(2, 2, &[ee, eg, eg.conj(), gg])
    }

    pub fn projector(&self) -> HybridDensityMatrix {
        let v = self.to_vector();
        let n = v.len();
        let full = CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        HybridDensityMatrix::split(&full)
    }
}

/// Density matrix `|e⟩⟨e|⊗ρ_ee + |e⟩⟨g|⊗ρ_eg + |g⟩⟨e|⊗ρ_eg† + |g⟩⟨g|⊗ρ_gg`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridDensityMatrix {
    ee: CMatrix,
    eg: CMatrix,
    gg: CMatrix,
}

impl HybridDensityMatrix {
    /// Assembles from blocks. Only the shapes are checked here; use
    /// [`HybridDensityMatrix::check_physical`] for the density-matrix
    /// invariants.
    pub fn from_blocks(ee: CMatrix, eg: CMatrix, gg: CMatrix) -> Result<Self> {
        let d = ee.nrows();
        for (name, m) in [("rho_ee", &ee), ("rho_eg", &eg), ("rho_gg", &gg)] {
            if m.shape() != (d, d) {
                return Err(Error::Validation(format!(
                    "{name} has shape {:?}, expected ({d}, {d})",
                    m.shape()
                )));
            }
        }
        if d == 0 {
            return Err(Error::Validation("empty density matrix".into()));
        }
        Ok(HybridDensityMatrix { ee, eg, gg })
    }

    /// Splits a full `2d × 2d` matrix, rejecting non-Hermitian input.
    pub fn from_full(m: &CMatrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::Validation(format!("expected a 2d x 2d matrix, got {r} x {c}")));
        }
        let defect = linalg::max_hermitian_defect(m);
        if defect > 1e-12 {
            return Err(Error::Validation(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        Ok(Self::split(m))
    }

    fn split(m: &CMatrix) -> Self {
        let d = m.nrows() / 2;
        HybridDensityMatrix {
            ee: m.view((0, 0), (d, d)).into_owned(),
            eg: m.view((0, d), (d, d)).into_owned(),
            gg: m.view((d, d), (d, d)).into_owned(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ee.nrows()
    }

    pub fn ee(&self) -> &CMatrix {
        &self.ee
    }

    pub fn eg(&self) -> &CMatrix {
        &self.eg
    }

    pub fn gg(&self) -> &CMatrix {
        &self.gg
    }

    pub fn ge(&self) -> CMatrix {
        self.eg.adjoint()
    }

    pub fn to_full(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(2 * d, 2 * d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.ee);
        m.view_mut((0, d), (d, d)).copy_from(&self.eg);
        m.view_mut((d, 0), (d, d)).copy_from(&self.eg.adjoint());
        m.view_mut((d, d), (d, d)).copy_from(&self.gg);
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.ee.trace() + self.gg.trace()
    }

    /// `Tr_B ρ` in the `(e, g)` basis.
    pub fn reduced_atom(&self) -> CMatrix {
        let eg = self.eg.trace();
        CMatrix::from_row_slice(2, 2, &[self.ee.trace(), eg, eg.conj(), self.gg.trace()])
    }

    /// `Tr_A ρ`.
    pub fn reduced_field(&self) -> CMatrix {
        &self.ee + &self.gg
    }

    /// Zero-pads the field dimension.
    pub fn padded(&self, dim: usize) -> Self {
        let d = self.dim();
        if dim <= d {
            return self.clone();
        }
        let pad = |m: &CMatrix| {
            let mut out = CMatrix::zeros(dim, dim);
            out.view_mut((0, 0), (d, d)).copy_from(m);
            out
        };
        HybridDensityMatrix {
            ee: pad(&self.ee),
            eg: pad(&self.eg),
            gg: pad(&self.gg),
        }
    }

    /// Frobenius norm of the difference, zero-padding the smaller matrix.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        let d = self.dim().max(other.dim());
        linalg::frobenius_distance(&self.padded(d).to_full(), &other.padded(d).to_full())
    }

    pub fn hermitian_defect(&self) -> f64 {
        linalg::max_hermitian_defect(&self.ee).max(linalg::max_hermitian_defect(&self.gg))
    }

    /// Hermitian, unit trace and positive semidefinite, each within 1e-10.
    pub fn check_physical(&self) -> Result<()> {
        let defect = self.hermitian_defect();
        if defect > 1e-10 {
            return Err(Error::Numerical(format!("density matrix not Hermitian (defect {defect:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!("density matrix trace {tr} differs from 1")));
        }
        let min = linalg::hermitian_min_eigenvalue(&self.to_full());
        if min < -PSD_TOL {
            return Err(Error::Numerical(format!("density matrix has eigenvalue {min:e} < 0")));
        }
        Ok(())
    }
}

/// How the average over the coupling distribution is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingMethod {
    /// Closed form from the Gaussian characteristic function.
    #[default]
    Exact,
    /// Gauss–Hermite quadrature over the coupling.
    Quadrature,
}

/// Gaussian spread of the coupling constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default = "NoiseModel::default_lambda_bar")]
    pub lambda_bar: f64,
    #[serde(default)]
    pub sigma: f64,
    /// Minimum quadrature order; see [`required_quad_order`].
    #[serde(default = "NoiseModel::default_quad_order")]
    pub quad_order: usize,
    #[serde(default)]
    pub method: AveragingMethod,
}

impl NoiseModel {
    pub const DEFAULT_QUAD_ORDER: usize = 41;

    fn default_lambda_bar() -> f64 {
        1.0
    }

    fn default_quad_order() -> usize {
        Self::DEFAULT_QUAD_ORDER
    }

    pub fn new(lambda_bar: f64, sigma: f64) -> Self {
        NoiseModel {
            lambda_bar,
            sigma,
            quad_order: Self::DEFAULT_QUAD_ORDER,
            method: AveragingMethod::Exact,
        }
    }

    /// Same distribution, averaged by quadrature of at least `order` points.
    pub fn with_quadrature(self, order: usize) -> Self {
        NoiseModel {
            quad_order: order,
            method: AveragingMethod::Quadrature,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_bar > 0.0) || !self.lambda_bar.is_finite() {
            return Err(Error::config("noise.lambda_bar", "must be positive and finite"));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::config("noise.sigma", "must be non-negative and finite"));
        }
        if self.quad_order < 1 {
            return Err(Error::config("noise.quad_order", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::new(1.0, 0.0)
    }
}

/// `U_λ(t)|ψ⟩`. The output carries one extra Fock mode because the
/// propagator moves `|e, d-1⟩` into `|g, d⟩`; no amplitude is lost.
pub fn evolve_pure(initial: &HybridPureState, lambda: f64, t: f64) -> HybridPureState {
    let d = initial.dim();
    let cg = |n: usize| initial.phi_g.get(n);
    let ce = |n: usize| initial.phi_e.get(n);
    let mut g = Vec::with_capacity(d + 1);
    let mut e = Vec::with_capacity(d + 1);
    for n in 0..=d {
        // |g, n⟩ pairs with |e, n-1⟩ at frequency √n λ.
        let (s, c) = ((n as f64).sqrt() * lambda * t).sin_cos();
        let from_e = if n == 0 { Complex64::new(0.0, 0.0) } else { ce(n - 1) };
        g.push(cg(n) * c - linalg::I * from_e * s);
        // |e, n⟩ pairs with |g, n+1⟩ at frequency √(n+1) λ.
        let (s, c) = (((n + 1) as f64).sqrt() * lambda * t).sin_cos();
        e.push(ce(n) * c - linalg::I * cg(n + 1) * s);
    }
    HybridPureState {
        phi_g: FockVector::from_amps(g).expect("finite amplitudes"),
        phi_e: FockVector::from_amps(e).expect("finite amplitudes"),
    }
}

/// Largest Gauss–Hermite order [`noisy_density_matrix`] will use.
pub const MAX_QUAD_ORDER: usize = 640;

/// Gauss–Hermite order needed to average the state at time `t`.
///
/// The amplitude pairs of `|n⟩` rotate at `√(n+1) λ`, so ρ contains
/// `cos(ω λ)` with `ω ≤ 2√(n_top+1) t`, where `n_top` is the highest
/// occupied photon number. After `λ = λ̄ + √2 σ x` the frequency in `x` is
/// `κ = √2 σ ω`, and an `n`-point rule averages `e^{-x²} cos(κ x)` to
/// rounding level once `√(2n) ≥ κ`. The configured order acts as a floor.
pub fn required_quad_order(initial: &HybridPureState, noise: &NoiseModel, t: f64) -> usize {
    let mut tail = 0.0;
    let mut n_top = 0;
    for n in (0..initial.dim()).rev() {
        tail += initial.phi_g.get(n).norm_sqr() + initial.phi_e.get(n).norm_sqr();
        if tail > 1e-15 {
            n_top = n;
            break;
        }
    }
    let kappa = std::f64::consts::SQRT_2 * noise.sigma * 2.0 * ((n_top + 1) as f64).sqrt() * t.abs();
    noise.quad_order.max((0.5 * kappa * kappa).ceil() as usize)
}

fn cached_rule(order: usize) -> Result<Arc<GaussHermite>> {
    static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let rules = RULES.get_or_init(Default::default);
    if let Some(rule) = rules.lock().expect("rule cache").get(&order) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(GaussHermite::new(order)?);
    rules.lock().expect("rule cache").insert(order, rule.clone());
    Ok(rule)
}

/// `∫ dλ N(λ̄, σ)(λ) |ψ(λ,t)⟩⟨ψ(λ,t)|` over the whole real line
/// (negative couplings included), by the configured [`AveragingMethod`].
pub fn noisy_density_matrix(initial: &HybridPureState, noise: &NoiseModel, t: f64) -> Result<HybridDensityMatrix> {
    noise.validate()?;
    if noise.sigma == 0.0 {
        return Ok(evolve_pure(initial, noise.lambda_bar, t).projector());
    }
    match noise.method {
        AveragingMethod::Exact => Ok(exact_average(initial, noise, t)),
        AveragingMethod::Quadrature => quadrature_average(initial, noise, t),
    }
}

/// Every evolved amplitude is `c₊ e^{iωλ} + c₋ e^{-iωλ}`, and
/// `E[e^{iΩλ}] = e^{iΩλ̄ - Ω²σ²/2}`, so each entry of ρ is a sum of four
/// damped phases.
fn exact_average(initial: &HybridPureState, noise: &NoiseModel, t: f64) -> HybridDensityMatrix {
    let d = initial.dim() + 1;
    let cg = |n: usize| initial.phi_g.get(n);
    let ce = |n: usize| initial.phi_e.get(n);
    let zero = Complex64::new(0.0, 0.0);
    // (c₊, c₋, ω) per joint index, excited block first.
    let mut terms = Vec::with_capacity(2 * d);
    for n in 0..d {
        let (a, b) = (ce(n), cg(n + 1));
        terms.push(((a - b) * 0.5, (a + b) * 0.5, ((n + 1) as f64).sqrt() * t));
    }
    for n in 0..d {
        let (a, b) = (cg(n), if n == 0 { zero } else { ce(n - 1) });
        terms.push(((a - b) * 0.5, (a + b) * 0.5, (n as f64).sqrt() * t));
    }
    let s2 = noise.sigma * noise.sigma;
    let phase = |w: f64| Complex64::from_polar((-0.5 * w * w * s2).exp(), w * noise.lambda_bar);
    let m = 2 * d;
    let mut acc = CMatrix::zeros(m, m);
    for j in 0..m {
        let (jp, jm, wj) = terms[j];
        if jp == zero && jm == zero {
            continue;
        }
        for i in 0..=j {
            let (ip, im, wi) = terms[i];
            if ip == zero && im == zero {
                continue;
            }
            let v = ip * jp.conj() * phase(wi - wj)
                + ip * jm.conj() * phase(wi + wj)
                + im * jp.conj() * phase(-wi - wj)
                + im * jm.conj() * phase(wj - wi);
            acc[(i, j)] = v;
            acc[(j, i)] = v.conj();
        }
    }
    for i in 0..m {
        acc[(i, i)].im = 0.0;
    }
    HybridDensityMatrix::split(&acc)
}

fn quadrature_average(initial: &HybridPureState, noise: &NoiseModel, t: f64) -> Result<HybridDensityMatrix> {
    let order = required_quad_order(initial, noise, t);
    if order > MAX_QUAD_ORDER {
        return Err(Error::Numerical(format!(
            "averaging at t = {t} needs a {order}-point quadrature rule (limit {MAX_QUAD_ORDER})"
        )));
    }
    let rule = cached_rule(order)?;
    let n = 2 * (initial.dim() + 1);
    let mut acc = CMatrix::zeros(n, n);
    for (lambda, p) in rule.normal_points(noise.lambda_bar, noise.sigma) {
        let v = evolve_pure(initial, lambda, t).to_vector();
        for j in 0..n {
            let vj = v[j].conj() * p;
            if vj.re == 0.0 && vj.im == 0.0 {
                continue;
            }
            for i in 0..n {
                acc[(i, j)] += v[i] * vj;
            }
        }
    }
    Ok(HybridDensityMatrix::split(&acc))
}

/// Long-time limit of the noise-averaged state: only the `cos²`/`sin²`
/// terms survive, leaving diagonal `ρ_ee`, `ρ_gg` and a single
/// super-diagonal in `ρ_eg`. Output has one extra Fock mode.
pub fn asymptotic_density_matrix(initial: &HybridPureState) -> HybridDensityMatrix {
    let d = initial.dim() + 1;
    let cg = |n: usize| initial.phi_g.get(n);
    let ce = |n: usize| initial.phi_e.get(n);
    let mut ee = CMatrix::zeros(d, d);
    let mut eg = CMatrix::zeros(d, d);
    let mut gg = CMatrix::zeros(d, d);
    for n in 0..d {
        ee[(n, n)] = Complex64::new(0.5 * ce(n).norm_sqr() + 0.5 * cg(n + 1).norm_sqr(), 0.0);
        let below = if n == 0 { 0.0 } else { ce(n - 1).norm_sqr() };
        let mut g = 0.5 * cg(n).norm_sqr() + 0.5 * below;
        if n == 0 {
            g += 0.5 * cg(0).norm_sqr();
        }
        gg[(n, n)] = Complex64::new(g, 0.0);
        if n + 1 < d {
            eg[(n, n + 1)] = Complex64::new((cg(n + 1) * ce(n).conj()).re, 0.0);
        }
    }
    HybridDensityMatrix { ee, eg, gg }
}
