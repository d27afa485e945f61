use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::Sig17;

/// Couplings of the Jaynes-Cummings Hamiltonian with a Kerr medium.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JCKerrParams {
    /// Field mode frequency.
    pub omega: f64,
    /// Atomic transition frequency.
    pub omega0: f64,
    /// Atom-field coupling.
    pub kappa: f64,
    /// Kerr coupling.
    pub lambda: f64,
}

impl JCKerrParams {
    pub fn new(omega: f64, omega0: f64, kappa: f64, lambda: f64) -> Result<Self> {
        let p = JCKerrParams { omega, omega0, kappa, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.omega, self.omega0, self.kappa, self.lambda].iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("couplings must be finite".into()))
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        JCKerrParams { omega: c * self.omega, omega0: c * self.omega0, kappa: c * self.kappa, lambda: c * self.lambda }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "omega": Sig17(self.omega).to_value(),
            "omega0": Sig17(self.omega0).to_value(),
            "kappa": Sig17(self.kappa).to_value(),
            "lambda": Sig17(self.lambda).to_value(),
        })
    }
}

/// Couplings of the two-mode (modified) Jaynes-Cummings Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MJCParams {
    /// Common mode frequency.
    pub omega: f64,
    /// Atomic transition frequency.
    pub omega0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl MJCParams {
    pub fn new(omega: f64, omega0: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let p = MJCParams { omega, omega0, lambda1, lambda2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.omega, self.omega0, self.lambda1, self.lambda2].iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("couplings must be finite".into()))
        }
    }

    /// `lambda1^2 + lambda2^2`
    pub fn coupling_strength(&self) -> f64 {
        self.lambda1 * self.lambda1 + self.lambda2 * self.lambda2
    }

    /// Same Hamiltonian with the two modes relabeled.
    pub fn swapped(&self) -> Self {
        MJCParams { lambda1: self.lambda2, lambda2: self.lambda1, ..*self }
    }

    pub fn scaled(&self, c: f64) -> Self {
        MJCParams { omega: c * self.omega, omega0: c * self.omega0, lambda1: c * self.lambda1, lambda2: c * self.lambda2 }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "omega": Sig17(self.omega).to_value(),
            "omega0": Sig17(self.omega0).to_value(),
            "lambda1": Sig17(self.lambda1).to_value(),
            "lambda2": Sig17(self.lambda2).to_value(),
        })
    }
}
