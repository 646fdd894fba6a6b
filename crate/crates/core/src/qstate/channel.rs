use super::DensityOperator;
use crate::linalg::{hermitian_eigen, identity_defect};
use crate::{CMatrix, Complex64, Error, Result, Tolerances};

/// Completely positive trace-preserving map in operator-sum form.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl Channel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerances(kraus, &Tolerances::default())
    }

    /// Checks that all operators share one shape and that sum K^dagger K = I.
    pub fn with_tolerances(kraus: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyMatrix)?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch(k.ncols(), dim_in));
        }
        let completeness = kraus
            .iter()
            .fold(CMatrix::zeros(dim_in, dim_in), |acc, k| acc + k.adjoint() * k);
        let defect = identity_defect(&completeness);
        if !(defect <= tol.kraus) {
            return Err(Error::IncompleteKraus(defect));
        }
        Ok(Self { kraus, dim_in, dim_out })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![CMatrix::identity(dim, dim)])
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Tr_B on C^dim_a (x) C^dim_b.
    pub fn partial_trace_second(dim_a: usize, dim_b: usize) -> Result<Self> {
        let kraus = (0..dim_b)
            .map(|i| {
                CMatrix::from_fn(dim_a, dim_a * dim_b, |r, c| {
                    if c == r * dim_b + i {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self::new(kraus)
    }

    /// Tr_A on C^dim_a (x) C^dim_b.
    pub fn partial_trace_first(dim_a: usize, dim_b: usize) -> Result<Self> {
        let kraus = (0..dim_a)
            .map(|i| {
                CMatrix::from_fn(dim_b, dim_a * dim_b, |r, c| {
                    if c == i * dim_b + r {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }
}

/// sum_i K_i rho K_i^dagger.
pub fn apply_channel(ch: &Channel, rho: &DensityOperator) -> Result<DensityOperator> {
    if ch.dim_in != rho.dim() {
        return Err(Error::DimensionMismatch(ch.dim_in, rho.dim()));
    }
    let out = ch
        .kraus
        .iter()
        .fold(CMatrix::zeros(ch.dim_out, ch.dim_out), |acc, k| {
            acc + k * rho.matrix() * k.adjoint()
        });
    DensityOperator::new(out)
}

/// Measurement given by positive effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let tol = Tolerances::default();
        let first = effects.first().ok_or(Error::EmptyMatrix)?;
        let dim = first.nrows();
        let mut total = CMatrix::zeros(dim, dim);
        for e in &effects {
            if e.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(e.nrows(), dim));
            }
            let (values, _) = hermitian_eigen(e);
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            if min < -tol.positivity {
                return Err(Error::NotPositive(min));
            }
            total += e;
        }
        let defect = identity_defect(&total);
        if !(defect <= tol.kraus) {
            return Err(Error::IncompleteKraus(defect));
        }
        Ok(Self { effects })
    }

    /// {A, I - A} for 0 <= A <= I.
    pub fn binary(effect: CMatrix) -> Result<Self> {
        let complement = CMatrix::identity(effect.nrows(), effect.ncols()) - &effect;
        Self::new(vec![effect, complement])
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    /// Outcome probabilities Tr(A_mu rho).
    pub fn probabilities(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        let dim = self.effects[0].nrows();
        if dim != rho.dim() {
            return Err(Error::DimensionMismatch(dim, rho.dim()));
        }
        Ok(self.effects.iter().map(|e| (e * rho.matrix()).trace().re).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_entry, real_matrix};
    use crate::qstate::fidelity;

    #[test]
    fn identity_channel_is_noop() {
        let rho = make_mixed();
        let out = apply_channel(&Channel::identity(2).unwrap(), &rho).unwrap();
        assert!(max_abs_entry(&(out.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn bit_flip_maps_zero_to_one() {
        let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let out = apply_channel(&Channel::unitary(x).unwrap(), &DensityOperator::basis(2, 0).unwrap())
            .unwrap();
        assert_eq!(out, DensityOperator::basis(2, 1).unwrap());
    }

    #[test]
    fn partial_traces_recover_factors() {
        let rho = make_mixed();
        let sigma = DensityOperator::maximally_mixed(3).unwrap();
        let joint = rho.tensor(&sigma);
        let a = apply_channel(&Channel::partial_trace_second(2, 3).unwrap(), &joint).unwrap();
        assert!(max_abs_entry(&(a.matrix() - rho.matrix())) < 1e-14);
        let b = apply_channel(&Channel::partial_trace_first(2, 3).unwrap(), &joint).unwrap();
        assert!(max_abs_entry(&(b.matrix() - sigma.matrix())) < 1e-14);
        assert!((fidelity(&a, &rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(matches!(Channel::new(vec![half]), Err(Error::IncompleteKraus(_))));
        let ch = Channel::identity(3).unwrap();
        assert_eq!(apply_channel(&ch, &make_mixed()), Err(Error::DimensionMismatch(3, 2)));
    }

    #[test]
    fn binary_povm_probabilities() {
        let povm = Povm::binary(real_matrix(2, 2, &[0.8, 0.0, 0.0, 0.3])).unwrap();
        let p = povm.probabilities(&make_mixed()).unwrap();
        assert!((p[0] + p[1] - 1.0).abs() < 1e-15);
        assert!((p[0] - (0.8 * 0.7 + 0.3 * 0.3)).abs() < 1e-15);
        assert!(Povm::binary(real_matrix(2, 2, &[1.5, 0.0, 0.0, 0.0])).is_err());
    }

    fn make_mixed() -> DensityOperator {
        DensityOperator::new(real_matrix(2, 2, &[0.7, 0.2, 0.2, 0.3])).unwrap()
    }
}
