//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "initial_state": { "atom": "e", "field": "smsv:1,0" },
//!   "noise": { "lambda_bar": 1.0, "sigma": 0.1, "quad_order": 41 },
//!   "time_grid": { "start": 0.0, "stop": 10.0, "steps": 101 },
//!   "outputs": ["bell", "bell_lower", "entropy", "ppt_min"],
//!   "scan": { "coarse_steps": 24, "refine_iters": 500, "refine_tol": 1e-9 },
//!   "truncation": { "max_dim": 64, "tail_tol": 1e-12 }
//! }
//! ```
//!
//! Only `initial_state` and `time_grid` are required.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell_optimizer::RotationScanConfig;
use crate::error::{Error, Result};
use crate::fock_space::{parse_complex, FieldSpec, TruncationPolicy};
use crate::jc_dynamics::{HybridPureState, NoiseModel};

/// Atom amplitudes `c_g|g⟩ + c_e|e⟩`: written `g`, `e`, or `sup:c_g,c_e`
/// with real or complex literals (`sup:0.6,0.8i`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AtomSpec {
    pub c_g: Complex64,
    pub c_e: Complex64,
}

impl AtomSpec {
    pub const NORM_TOL: f64 = 1e-9;

    pub fn ground() -> Self {
        AtomSpec {
            c_g: Complex64::new(1.0, 0.0),
            c_e: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        AtomSpec {
            c_g: Complex64::new(0.0, 0.0),
            c_e: Complex64::new(1.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_g.norm_sqr() + self.c_e.norm_sqr()
    }
}

impl std::str::FromStr for AtomSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "g" => Ok(AtomSpec::ground()),
            "e" => Ok(AtomSpec::excited()),
            other => {
                let body = other
                    .strip_prefix("sup:")
                    .ok_or_else(|| Error::Validation(format!("atom spec `{other}` is not `g`, `e` or `sup:c_g,c_e`")))?;
                let (g, e) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Validation("superposition needs two amplitudes `sup:c_g,c_e`".into()))?;
                Ok(AtomSpec {
                    c_g: parse_complex(g)?,
                    c_e: parse_complex(e)?,
                })
            }
        }
    }
}

impl TryFrom<String> for AtomSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for AtomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == AtomSpec::ground() {
            return write!(f, "g");
        }
        if *self == AtomSpec::excited() {
            return write!(f, "e");
        }
        let lit = |z: Complex64| format!("{}{:+}i", z.re, z.im);
        write!(f, "sup:{},{}", lit(self.c_g), lit(self.c_e))
    }
}

impl From<AtomSpec> for String {
    fn from(a: AtomSpec) -> String {
        a.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub atom: AtomSpec,
    pub field: FieldSpec,
}

impl InitialState {
    /// The separable product state. The field is renormalised, which only
    /// matters when the tail tolerance is loose.
    pub fn build(&self, policy: &TruncationPolicy) -> Result<HybridPureState> {
        let field = self.field.build(policy)?;
        HybridPureState::normalized(field.scaled(self.atom.c_g), field.scaled(self.atom.c_e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    /// `steps` evenly spaced points, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + span * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// Scanned CHSH maximum.
    Bell,
    /// CHSH value at the identity rotation.
    BellLower,
    /// Entropy of the reduced atom state, in bits.
    Entropy,
    /// Minimum eigenvalue of the partial transpose.
    PptMin,
}

impl Output {
    pub const ALL: [Output; 4] = [Output::Bell, Output::BellLower, Output::Entropy, Output::PptMin];

    pub fn name(self) -> &'static str {
        match self {
            Output::Bell => "bell",
            Output::BellLower => "bell_lower",
            Output::Entropy => "entropy",
            Output::PptMin => "ppt_min",
        }
    }
}

impl std::str::FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| Error::config("outputs", format!("unknown output `{s}`")))
    }
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Bell]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub initial_state: InitialState,
    #[serde(default)]
    pub noise: NoiseModel,
    pub time_grid: TimeGrid,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub scan: RotationScanConfig,
    #[serde(default)]
    pub truncation: TruncationPolicy,
}

impl ExperimentConfig {
    /// Parses and validates. Errors name the offending field by its dotted
    /// path.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let cfg: Self = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<document>".to_string() } else { path };
            Error::config(field, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.time_grid;
        if g.steps < 2 {
            return Err(Error::config("time_grid.steps", "need at least 2 points"));
        }
        if !(g.start >= 0.0) || !g.start.is_finite() {
            return Err(Error::config("time_grid.start", "must be finite and non-negative"));
        }
        if !(g.stop > g.start) || !g.stop.is_finite() {
            return Err(Error::config("time_grid.stop", "must be finite and greater than start"));
        }
        let n = self.initial_state.atom.norm_sqr();
        if (n - 1.0).abs() > AtomSpec::NORM_TOL {
            return Err(Error::config(
                "initial_state.atom",
                format!("|c_g|² + |c_e|² = {n}, expected 1 within {:e}", AtomSpec::NORM_TOL),
            ));
        }
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "request at least one output"));
        }
        for (i, o) in self.outputs.iter().enumerate() {
            if self.outputs[..i].contains(o) {
                return Err(Error::config("outputs", format!("`{}` listed twice", o.name())));
            }
        }
        self.noise.validate()?;
        self.scan.validate()?;
        self.truncation.validate()?;
        Ok(())
    }

    pub fn column_names(&self) -> Vec<String> {
        self.outputs.iter().map(|o| o.name().to_string()).collect()
    }

    pub fn initial_pure_state(&self) -> Result<HybridPureState> {
        self.initial_state.build(&self.truncation)
    }
}
