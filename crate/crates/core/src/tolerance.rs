use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Name of the environment variable holding tolerance overrides.
pub const TOLERANCE_ENV: &str = "CLONEBOUND_TOL";

/// Numerical thresholds and size limits shared by the library, the test suite
/// and the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Maximum entrywise |A - A^dagger| accepted for a density operator.
    pub hermitian: f64,
    /// Most negative eigenvalue accepted (and clamped to zero).
    pub positivity: f64,
    /// Allowed deviation of the trace from one.
    pub trace: f64,
    /// Allowed deviation of a pure-state norm from one.
    pub norm: f64,
    /// Allowed deviation of a prior distribution's sum from one.
    pub probability_sum: f64,
    /// Allowed deviation of sum K^dagger K from the identity.
    pub kraus: f64,
    /// Allowed deviation of U^dagger U from the identity.
    pub unitary: f64,
    /// Max-norm distance under which two polytope vertices are merged.
    pub vertex_dedup: f64,
    /// Agreement required between a simulated relative error and its bound.
    pub saturation: f64,
    /// Largest tolerated weight left on the ancilla or on delta'_+.
    pub clone_residual: f64,
    /// Largest matrix dimension an explicit tensor power may produce.
    pub dim_cap: usize,
    /// Largest register the statevector simulator accepts.
    pub max_register_qubits: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            positivity: 1e-10,
            trace: 1e-9,
            norm: 1e-12,
            probability_sum: 1e-9,
            kraus: 1e-9,
            unitary: 1e-10,
            vertex_dedup: 1e-9,
            saturation: 1e-8,
            clone_residual: 1e-9,
            dim_cap: 1 << 14,
            max_register_qubits: 20,
        }
    }
}

impl Tolerances {
    /// Defaults with the overrides from `CLONEBOUND_TOL` applied, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(overrides) => Self::default().with_overrides(&overrides),
            Err(std::env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(Error::BadTolerance(e.to_string())),
        }
    }

    /// Applies a comma-separated list of `key=value` overrides, e.g.
    /// `"trace=1e-6,dim_cap=256"`.
    pub fn with_overrides(mut self, overrides: &str) -> Result<Self> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::BadTolerance(format!("expected key=value, got {item:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let float = || -> Result<f64> {
                let v: f64 = value
                    .parse()
                    .map_err(|_| Error::BadTolerance(format!("{key}: not a number: {value:?}")))?;
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::BadTolerance(format!("{key}: must be finite and >= 0")));
                }
                Ok(v)
            };
            let count = || -> Result<usize> {
                value
                    .parse()
                    .map_err(|_| Error::BadTolerance(format!("{key}: not an integer: {value:?}")))
            };
            match key {
                "hermitian" => self.hermitian = float()?,
                "positivity" => self.positivity = float()?,
                "trace" => self.trace = float()?,
                "norm" => self.norm = float()?,
                "probability_sum" => self.probability_sum = float()?,
                "kraus" => self.kraus = float()?,
                "unitary" => self.unitary = float()?,
                "vertex_dedup" => self.vertex_dedup = float()?,
                "saturation" => self.saturation = float()?,
                "clone_residual" => self.clone_residual = float()?,
                "dim_cap" => self.dim_cap = count()?,
                "max_register_qubits" => self.max_register_qubits = count()?,
                other => return Err(Error::BadTolerance(format!("unknown key {other:?}"))),
            }
        }
        Ok(self)
    }
}
