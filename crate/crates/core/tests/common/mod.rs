#![allow(dead_code)]

use clonebound::qstate::{make_density, Channel, DensityOperator, PureState};
use clonebound::{CMatrix, CVector, Complex64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

fn gaussian(rng: &mut TestRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn ginibre(rng: &mut TestRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random mixed state of random rank.
pub fn random_density(rng: &mut TestRng, dim: usize) -> DensityOperator {
    let rank = rng.random_range(1..=dim);
    let g = ginibre(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    make_density(m.unscale(tr)).expect("valid random state")
}

pub fn random_pure(rng: &mut TestRng, dim: usize) -> PureState {
    PureState::normalized(CVector::from_fn(dim, |_, _| gaussian(rng))).unwrap()
}

/// Columns of a tall Ginibre matrix orthonormalised: an isometry.
pub fn random_isometry(rng: &mut TestRng, rows: usize, cols: usize) -> CMatrix {
    ginibre(rng, rows, cols).qr().q()
}

pub fn random_unitary(rng: &mut TestRng, dim: usize) -> CMatrix {
    random_isometry(rng, dim, dim)
}

/// Effect `0 <= A <= I` with uniformly random spectrum in a random basis.
pub fn random_effect(rng: &mut TestRng, dim: usize) -> CMatrix {
    let u = random_unitary(rng, dim);
    let d = CMatrix::from_diagonal(&CVector::from_fn(dim, |_, _| Complex64::new(rng.random::<f64>(), 0.0)));
    &u * d * u.adjoint()
}

/// Rank-one effects `|w_i><w_i|` from the rows of a random `k x dim`
/// isometry (`k >= dim`), summing to the identity.
pub fn random_rank_one_povm(rng: &mut TestRng, dim: usize, outcomes: usize) -> Vec<CMatrix> {
    let w = random_isometry(rng, outcomes, dim);
    (0..outcomes)
        .map(|i| {
            let row = w.row(i).transpose();
            row.conjugate() * row.transpose()
        })
        .collect()
}

/// Channel with `ops` Kraus operators cut from a random isometry.
pub fn random_channel(rng: &mut TestRng, dim_in: usize, dim_out: usize, ops: usize) -> Channel {
    let v = random_isometry(rng, ops * dim_out, dim_in);
    let kraus = (0..ops).map(|i| v.rows(i * dim_out, dim_out).into_owned()).collect();
    Channel::new(kraus).expect("isometry blocks are complete")
}
