use serde::{Deserialize, Serialize};

use super::DensityOperator;
use crate::linalg::{psd_sqrt, trace_norm};
use crate::{Error, Result};

/// Fidelity together with the three distances it induces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub fidelity: f64,
    /// Bures angle, in [0, pi/2].
    pub angle: f64,
    /// sin of the Bures angle.
    pub sine_distance: f64,
    /// sqrt(2 - 2 sqrt(F)).
    pub bures_metric: f64,
}

/// F(omega, sigma) = (Tr|sqrt(omega) sqrt(sigma)|)^2, clamped to [0, 1].
pub fn fidelity(omega: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if omega.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(omega.dim(), sigma.dim()));
    }
    let product = psd_sqrt(omega.matrix()) * psd_sqrt(sigma.matrix());
    let root = trace_norm(&product);
    Ok((root * root).clamp(0.0, 1.0))
}

pub fn bures_angle(omega: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(angle_from_fidelity(fidelity(omega, sigma)?))
}

pub fn sine_distance(omega: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(bures_angle(omega, sigma)?.sin())
}

pub fn metrics(omega: &DensityOperator, sigma: &DensityOperator) -> Result<MetricReport> {
    Ok(MetricReport::from_fidelity(fidelity(omega, sigma)?))
}

pub(crate) fn angle_from_fidelity(f: f64) -> f64 {
    f.clamp(0.0, 1.0).sqrt().clamp(0.0, 1.0).acos()
}

impl MetricReport {
    pub fn from_fidelity(fidelity: f64) -> Self {
        let fidelity = fidelity.clamp(0.0, 1.0);
        let angle = angle_from_fidelity(fidelity);
        Self {
            fidelity,
            angle,
            sine_distance: angle.sin(),
            bures_metric: (2.0 - 2.0 * fidelity.sqrt()).max(0.0).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;
    use crate::qstate::make_density;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn identical_and_orthogonal() {
        let zero = DensityOperator::basis(2, 0).unwrap();
        let one = DensityOperator::basis(2, 1).unwrap();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-14);
        assert!(fidelity(&zero, &one).unwrap() < 1e-14);
        let m = metrics(&zero, &zero).unwrap();
        assert!(m.angle < 1e-6 && m.sine_distance < 1e-6 && m.bures_metric < 1e-6);
    }

    #[test]
    fn mixed_against_pure() {
        let mixed = DensityOperator::maximally_mixed(2).unwrap();
        let zero = DensityOperator::basis(2, 0).unwrap();
        assert!((fidelity(&mixed, &zero).unwrap() - 0.5).abs() < 1e-14);
        let m = metrics(&mixed, &zero).unwrap();
        assert!((m.angle - FRAC_PI_4).abs() < 1e-14);
        assert!((m.sine_distance - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((m.bures_metric - (2.0 - 2.0f64.sqrt()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn commuting_states_use_classical_fidelity() {
        // (sum sqrt(p_i q_i))^2 for diagonal states
        let a = make_density(real_matrix(2, 2, &[0.9, 0.0, 0.0, 0.1])).unwrap();
        let b = make_density(real_matrix(2, 2, &[0.4, 0.0, 0.0, 0.6])).unwrap();
        let expected = ((0.9f64 * 0.4).sqrt() + (0.1f64 * 0.6).sqrt()).powi(2);
        assert!((fidelity(&a, &b).unwrap() - expected).abs() < 1e-14);
        assert!((fidelity(&b, &a).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityOperator::maximally_mixed(2).unwrap();
        let b = DensityOperator::maximally_mixed(3).unwrap();
        assert_eq!(fidelity(&a, &b), Err(Error::DimensionMismatch(2, 3)));
    }
}
