//! Truncated single-mode bosonic states.
//!
//! A [`FockVector`] holds the amplitudes `C_n` of `Σ C_n |n⟩` for
//! `n < dim`. The three builders (Fock, single-mode squeezed vacuum,
//! coherent) return amplitudes exactly as defined, without rephasing or
//! renormalisation, and choose the smallest dimension whose discarded
//! probability mass is provably below the policy's `tail_tol`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Limits applied by the state builders.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationPolicy {
    /// Largest number of Fock modes a builder may return.
    #[serde(default = "TruncationPolicy::default_max_dim")]
    pub max_dim: usize,
    /// Largest probability mass allowed beyond the kept modes.
    #[serde(default = "TruncationPolicy::default_tail_tol")]
    pub tail_tol: f64,
}

impl TruncationPolicy {
    pub const DEFAULT_MAX_DIM: usize = 64;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    fn default_max_dim() -> usize {
        Self::DEFAULT_MAX_DIM
    }

    fn default_tail_tol() -> f64 {
        Self::DEFAULT_TAIL_TOL
    }

    pub fn new(max_dim: usize, tail_tol: f64) -> Result<Self> {
        let p = TruncationPolicy { max_dim, tail_tol };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_dim == 0 {
            return Err(Error::config("truncation.max_dim", "must be at least 1"));
        }
        if !(self.tail_tol > 0.0) || !self.tail_tol.is_finite() {
            return Err(Error::config("truncation.tail_tol", "must be a positive finite number"));
        }
        Ok(())
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_dim: Self::DEFAULT_MAX_DIM,
            tail_tol: Self::DEFAULT_TAIL_TOL,
        }
    }
}

/// Complex amplitudes over the truncated Fock basis `|0⟩ … |dim-1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    /// Raw amplitude list. Used for tests and the `amps:[…]` escape hatch.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Validation("a Fock vector needs at least one amplitude".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("amplitudes must be finite".into()));
        }
        Ok(FockVector { amps })
    }

    pub fn zeros(dim: usize) -> Self {
        FockVector {
            amps: vec![Complex64::new(0.0, 0.0); dim.max(1)],
        }
    }

    /// The basis vector `|k⟩` in a space of dimension `dim > k`.
    pub fn basis(k: usize, dim: usize) -> Self {
        let mut v = Self::zeros(dim.max(k + 1));
        v.amps[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude `C_n`, zero outside the stored range.
    pub fn get(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Zero-pad (never truncate) to at least `dim` modes.
    pub fn padded(&self, dim: usize) -> Self {
        let mut amps = self.amps.clone();
        if amps.len() < dim {
            amps.resize(dim, Complex64::new(0.0, 0.0));
        }
        FockVector { amps }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        FockVector {
            amps: self.amps.iter().map(|z| z * c).collect(),
        }
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`; the shorter vector is zero-padded.
pub fn inner(u: &FockVector, v: &FockVector) -> Complex64 {
    u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum()
}

/// Single Fock state `|k⟩`, with one spare mode above `k`.
pub fn make_fock(k: usize, policy: &TruncationPolicy) -> Result<FockVector> {
    policy.validate()?;
    if k >= policy.max_dim {
        return Err(Error::Truncation(format!(
            "Fock index {k} does not fit below max_dim = {}",
            policy.max_dim
        )));
    }
    Ok(FockVector::basis(k, k + 2))
}

/// Single-mode squeezed vacuum with squeeze magnitude `r` and phase `theta`.
///
/// Even amplitudes follow from `C_0 = 1/√cosh r` and
/// `C_{n+2} = -√((n+1)/(n+2)) e^{iθ} tanh r · C_n`; odd amplitudes are zero.
/// Each step shrinks `|C_n|²` by at least `tanh² r`, so the mass beyond an
/// even cut `N` is bounded by `|C_{N+2}|² cosh² r`.
pub fn make_smsv(r: f64, theta: f64, policy: &TruncationPolicy) -> Result<FockVector> {
    policy.validate()?;
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::Validation(format!("squeezing requires finite r >= 0, got r = {r}")));
    }
    let t = r.tanh();
    let step = Complex64::from_polar(t, theta);
    let cosh2 = r.cosh().powi(2);
    let mut amps = vec![Complex64::new(1.0 / r.cosh().sqrt(), 0.0)];
    loop {
        let n = amps.len() - 1; // last kept index, always even
        let next = -amps[n] * step * (((n + 1) as f64) / ((n + 2) as f64)).sqrt();
        if next.norm_sqr() * cosh2 <= policy.tail_tol {
            break;
        }
        if n + 3 > policy.max_dim {
            return Err(Error::Truncation(format!(
                "squeezed vacuum r = {r} needs more than max_dim = {} modes for tail_tol = {:e}",
                policy.max_dim, policy.tail_tol
            )));
        }
        amps.push(Complex64::new(0.0, 0.0));
        amps.push(next);
    }
    Ok(FockVector { amps })
}

/// Coherent state `e^{-|α|²/2} Σ αⁿ/√n! |n⟩`, built by the recurrence
/// `C_{n+1} = C_n α/√(n+1)`.
///
/// Once `n + 1 > |α|²` the ratios `|C_{m+1}|²/|C_m|²` stay below
/// `q = |α|²/(n+1)`, giving the tail bound `|C_n|²/(1 - q)`.
pub fn make_coherent(alpha: Complex64, policy: &TruncationPolicy) -> Result<FockVector> {
    policy.validate()?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::Validation("coherent amplitude must be finite".into()));
    }
    let a2 = alpha.norm_sqr();
    let c0 = (-0.5 * a2).exp();
    if c0 == 0.0 {
        return Err(Error::Truncation(format!("|alpha|^2 = {a2} underflows the vacuum amplitude")));
    }
    let mut amps = vec![Complex64::new(c0, 0.0)];
    loop {
        let n = amps.len(); // index of the first discarded amplitude
        let next = amps[n - 1] * alpha / (n as f64).sqrt();
        let q = a2 / (n as f64 + 1.0);
        if q < 1.0 && next.norm_sqr() / (1.0 - q) <= policy.tail_tol {
            break;
        }
        if n + 1 > policy.max_dim {
            return Err(Error::Truncation(format!(
                "coherent state |alpha| = {} needs more than max_dim = {} modes for tail_tol = {:e}",
                a2.sqrt(),
                policy.max_dim,
                policy.tail_tol
            )));
        }
        amps.push(next);
    }
    Ok(FockVector { amps })
}

/// Textual field-state specification: `fock:k`, `smsv:r,theta`,
/// `coherent:re,im` or `amps:[c0,c1,…]` where each entry is a real or
/// complex literal such as `0.5`, `-0.2i` or `0.1+0.3i`.
#[derive(Debug, Clone, PartialEq, serde::Deserialize, serde::Serialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Fock(usize),
    Smsv { r: f64, theta: f64 },
    Coherent(Complex64),
    Amps(Vec<Complex64>),
}

impl FieldSpec {
    pub fn build(&self, policy: &TruncationPolicy) -> Result<FockVector> {
        match self {
            FieldSpec::Fock(k) => make_fock(*k, policy),
            FieldSpec::Smsv { r, theta } => make_smsv(*r, *theta, policy),
            FieldSpec::Coherent(alpha) => make_coherent(*alpha, policy),
            FieldSpec::Amps(a) => FockVector::from_amps(a.clone()),
        }
    }
}

fn parse_real(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Validation(format!("cannot parse {what} from `{s}`")))
}

/// Parse `x`, `yi`, `x+yi` or `x-yi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Validation("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&s, "real number")?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(t, "imaginary part"),
        }
    };
    match split {
        Some(p) => Ok(Complex64::new(parse_real(&body[..p], "real part")?, imag(&body[p..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Validation(format!("field spec `{s}` is missing `kind:`")))?;
        let fields: Vec<&str> = args.split(',').map(str::trim).collect();
        let arity = |n: usize| -> Result<()> {
            if fields.len() == n {
                Ok(())
            } else {
                Err(Error::Validation(format!("`{kind}` expects {n} field(s), got `{args}`")))
            }
        };
        match kind.trim() {
            "fock" => {
                arity(1)?;
                let k = fields[0]
                    .parse::<usize>()
                    .map_err(|_| Error::Validation(format!("Fock index must be a non-negative integer, got `{}`", fields[0])))?;
                Ok(FieldSpec::Fock(k))
            }
            "smsv" => {
                arity(2)?;
                Ok(FieldSpec::Smsv {
                    r: parse_real(fields[0], "squeeze magnitude")?,
                    theta: parse_real(fields[1], "squeeze phase")?,
                })
            }
            "coherent" => {
                arity(2)?;
                Ok(FieldSpec::Coherent(Complex64::new(
                    parse_real(fields[0], "Re alpha")?,
                    parse_real(fields[1], "Im alpha")?,
                )))
            }
            "amps" => {
                let inner = args
                    .trim()
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Validation("amplitude list must be bracketed: amps:[…]".into()))?;
                let amps = inner.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
                Ok(FieldSpec::Amps(amps))
            }
            other => Err(Error::Validation(format!("unknown field kind `{other}`"))),
        }
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Fock(k) => write!(f, "fock:{k}"),
            FieldSpec::Smsv { r, theta } => write!(f, "smsv:{r},{theta}"),
            FieldSpec::Coherent(a) => write!(f, "coherent:{},{}", a.re, a.im),
            FieldSpec::Amps(a) => {
                let items: Vec<String> = a.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                write!(f, "amps:[{}]", items.join(","))
            }
        }
    }
}
