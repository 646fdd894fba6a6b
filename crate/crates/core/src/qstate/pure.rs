use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::DensityOperator;
use crate::{CVector, Complex64, Error, Result, Tolerances};

/// Which member of the pair `cos a |0> +- sin a |1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Unit vector in C^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: CVector,
}

impl PureState {
    pub fn new(vector: CVector) -> Result<Self> {
        Self::with_tolerances(vector, &Tolerances::default())
    }

    pub fn with_tolerances(vector: CVector, tol: &Tolerances) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let norm = vector.norm();
        if !((norm - 1.0).abs() <= tol.norm) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { vector })
    }

    /// Normalises any nonzero vector.
    pub fn normalized(vector: CVector) -> Result<Self> {
        let norm = vector.norm();
        if vector.is_empty() || !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { vector: vector.unscale(norm) })
    }

    pub(crate) fn from_trusted(vector: CVector) -> Self {
        Self { vector }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    /// <self|other>.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.vector.dotc(&other.vector))
    }

    /// |psi><psi|.
    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_trusted(&self.vector * self.vector.adjoint())
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        Self::from_trusted(self.vector.kronecker(&other.vector))
    }
}

/// `cos(alpha)|0> +- sin(alpha)|1>` for alpha in [0, pi/4]; the pair has
/// overlap cos(2 alpha).
pub fn real_qubit_state(alpha: f64, sign: Sign) -> Result<PureState> {
    if !(0.0..=FRAC_PI_4).contains(&alpha) {
        return Err(Error::AngleOutOfRange { value: alpha, min: 0.0, max: FRAC_PI_4 });
    }
    Ok(qubit(alpha, sign))
}

/// Same family without the range check; used for circuit angles that are in
/// range by construction.
pub(crate) fn qubit(alpha: f64, sign: Sign) -> PureState {
    PureState::from_trusted(CVector::from_vec(vec![
        Complex64::new(alpha.cos(), 0.0),
        Complex64::new(sign.factor() * alpha.sin(), 0.0),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn family_endpoints() {
        let zero = real_qubit_state(0.0, Sign::Plus).unwrap();
        assert_eq!(zero.vector()[0], Complex64::new(1.0, 0.0));
        assert_eq!(zero.vector()[1].norm(), 0.0);

        let minus = real_qubit_state(FRAC_PI_4, Sign::Minus).unwrap();
        assert!((minus.vector()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((minus.vector()[1].re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pair_overlap_is_cos_two_alpha() {
        let a = PI / 8.0;
        let plus = real_qubit_state(a, Sign::Plus).unwrap();
        let minus = real_qubit_state(a, Sign::Minus).unwrap();
        let overlap = plus.inner(&minus).unwrap();
        assert!((overlap.re - 0.707_106_781_186_547_5).abs() < 1e-15);
        assert!(overlap.im.abs() < 1e-15);
    }

    #[test]
    fn out_of_range_alpha() {
        assert!(matches!(
            real_qubit_state(1.0, Sign::Plus),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(real_qubit_state(-0.1, Sign::Minus).is_err());
    }

    #[test]
    fn norm_is_checked() {
        let v = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(PureState::new(v.clone()), Err(Error::NotNormalized(_))));
        let s = PureState::normalized(v).unwrap();
        assert!((s.vector().norm() - 1.0).abs() < 1e-15);
        assert!(PureState::normalized(CVector::zeros(2)).is_err());
    }
}
