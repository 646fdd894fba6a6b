use serde::{Deserialize, Serialize};

use super::json::MatrixJson;
use crate::linalg::{from_spectrum, hermitian_eigen, hermiticity_defect, real_trace};
use crate::{CMatrix, Complex64, Error, Result, Tolerances};

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct DensityOperator {
    matrix: CMatrix,
}

/// Validates `matrix` as a density operator with the default tolerances.
pub fn make_density(matrix: CMatrix) -> Result<DensityOperator> {
    DensityOperator::new(matrix)
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validates hermiticity, positivity and trace. Eigenvalues in
    /// `[-tol.positivity, 0)` are clamped to zero and the matrix reassembled.
    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let defect = hermiticity_defect(&matrix);
        if !(defect <= tol.hermitian) {
            return Err(Error::NotHermitian(defect));
        }
        let (values, vectors) = hermitian_eigen(&matrix);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol.positivity {
            return Err(Error::NotPositive(min));
        }
        let matrix = if min < 0.0 {
            let clamped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
            from_spectrum(&clamped, &vectors)
        } else {
            (&matrix + matrix.adjoint()).scale(0.5)
        };
        let trace = real_trace(&matrix);
        if !((trace - 1.0).abs() <= tol.trace) {
            return Err(Error::BadTrace(trace));
        }
        Ok(Self { matrix })
    }

    /// I/dim.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self {
            matrix: CMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        })
    }

    /// Projector onto basis state `index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(index, index)] = Complex64::new(1.0, 0.0);
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is a density operator by construction.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Tensor product `self (x) other`; `self` is the most significant factor.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        Self::from_trusted(self.matrix.kronecker(&other.matrix))
    }
}

/// k-fold tensor power with the default dimension cap.
pub fn tensor_power(rho: &DensityOperator, k: usize) -> Result<DensityOperator> {
    tensor_power_with_cap(rho, k, Tolerances::default().dim_cap)
}

pub fn tensor_power_with_cap(rho: &DensityOperator, k: usize, cap: usize) -> Result<DensityOperator> {
    if k == 0 {
        return Err(Error::InvalidScenario("tensor power must be at least 1".into()));
    }
    let requested = u32::try_from(k)
        .ok()
        .and_then(|k| rho.dim().checked_pow(k))
        .unwrap_or(usize::MAX);
    if requested > cap {
        return Err(Error::DimensionCapExceeded { requested, cap });
    }
    let mut out = rho.matrix.clone();
    for _ in 1..k {
        out = out.kronecker(&rho.matrix);
    }
    Ok(DensityOperator::from_trusted(out))
}

impl From<DensityOperator> for MatrixJson {
    fn from(rho: DensityOperator) -> Self {
        MatrixJson::from_matrix(&rho.matrix)
    }
}

impl TryFrom<MatrixJson> for DensityOperator {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        DensityOperator::new(m.to_matrix()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    #[test]
    fn maximally_mixed_qubit_is_valid() {
        let rho = make_density(real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        assert_eq!(rho.dim(), 2);
        assert!((rho.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pure_projector_is_valid() {
        let rho = make_density(real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let err = make_density(real_matrix(2, 2, &[1.001, 0.0, 0.0, -0.001])).unwrap_err();
        assert!(matches!(err, Error::NotPositive(v) if (v + 1e-3).abs() < 1e-12));
    }

    #[test]
    fn tiny_negative_eigenvalue_is_clamped() {
        let rho = make_density(real_matrix(2, 2, &[1.0 + 5e-11, 0.0, 0.0, -5e-11])).unwrap();
        let (values, _) = hermitian_eigen(rho.matrix());
        assert!(values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            make_density(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        assert!(matches!(
            make_density(real_matrix(2, 2, &[0.5, 0.1, 0.0, 0.5])),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            make_density(real_matrix(2, 2, &[0.6, 0.0, 0.0, 0.6])),
            Err(Error::BadTrace(_))
        ));
    }

    #[test]
    fn tensor_power_dimensions_and_cap() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        assert_eq!(tensor_power(&rho, 1).unwrap(), rho);
        let cube = tensor_power(&rho, 3).unwrap();
        assert_eq!(cube.dim(), 8);
        assert!((real_trace(cube.matrix()) - 1.0).abs() < 1e-14);
        assert!(matches!(
            tensor_power_with_cap(&rho, 5, 16),
            Err(Error::DimensionCapExceeded { requested: 32, cap: 16 })
        ));
        assert!(matches!(tensor_power(&rho, 200), Err(Error::DimensionCapExceeded { .. })));
    }

    #[test]
    fn json_wire_format_round_trips() {
        let rho = DensityOperator::basis(2, 1).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.starts_with("{\"dim\":2,\"re\":"));
        let back: DensityOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rho);
        let bad = "{\"dim\":2,\"re\":[[2,0],[0,0]]}";
        assert!(serde_json::from_str::<DensityOperator>(bad).is_err());
    }
}
