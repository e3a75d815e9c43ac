use std::fmt;

use crate::error::{Error, Result};

/// Couplings of the XY chain in a transverse field.
///
/// `H = -Σ (J/2)[(1+γ) σˣσˣ + (1-γ) σʸσʸ] + h Σ σᶻ`. All correlators depend on
/// `(γ, λ = J/h)` only; `J` and `h` are retained so energies carry their scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub h: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl ModelParams {
    /// Normalized parameters: `h = 1`, `J = λ`.
    pub fn new(gamma: f64, lambda: f64) -> Result<Self> {
        Self::from_couplings(lambda, 1.0, gamma)
    }

    pub fn from_couplings(j: f64, h: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::ParameterDomain(format!("gamma = {gamma} not in (0, 1]")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::ParameterDomain(format!("h = {h} must be positive")));
        }
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::ParameterDomain(format!("J = {j} must be non-negative")));
        }
        Ok(ModelParams { j, h, gamma, lambda: j / h })
    }

    /// Symmetry-breaking critical point.
    pub fn lambda1(&self) -> f64 {
        1.0
    }

    /// Factorizing (second) critical point `1/sqrt(1-γ²)`; infinite at `γ = 1`.
    pub fn lambda2(&self) -> f64 {
        lambda2(self.gamma)
    }

    pub fn is_ferromagnetic(&self) -> bool {
        self.lambda > 1.0
    }

    /// Same anisotropy at a different λ, keeping `h`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::from_couplings(lambda * self.h, self.h, self.gamma)
    }
}

pub fn lambda2(gamma: f64) -> f64 {
    if gamma >= 1.0 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - gamma * gamma).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKind {
    Symmetric,
    Broken,
}

impl StateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateKind::Symmetric => "symmetric",
            StateKind::Broken => "broken",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "symmetric" | "sym" => Ok(StateKind::Symmetric),
            "broken" => Ok(StateKind::Broken),
            other => Err(Error::Config(format!("unknown state kind `{other}`"))),
        }
    }
}
