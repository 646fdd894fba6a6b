mod common;

use clonebound::bounds::{
    criteria, multi_state_bound, pair_angles, pair_angles_explicit, relative_error, simplex_bound, two_state_bound,
    CloningScenario,
};
use clonebound::circuit::{build_circuit, run_circuit};
use clonebound::qstate::{apply_channel, tensor_power, Channel, DensityOperator, PureState, Sign};
use clonebound::{CMatrix, CVector, Tolerances};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn bound(f: f64, phi: f64, p_minus: f64, n: usize, l: usize) -> f64 {
    two_state_bound(&CloningScenario::pure_pair(f, phi, p_minus, n, l).unwrap()).unwrap().value
}

/// Outputs of the physical machine `rho^N (x) |0..0> (x) ancilla (x) |0>_env -> U(.)U^dag`,
/// traced down to the `L` clone positions.
fn machine_outputs(sc: &CloningScenario, u: &CMatrix) -> Vec<DensityOperator> {
    let (n, l) = (sc.originals(), sc.copies());
    let blank = DensityOperator::basis(1 << (l - n), 0).unwrap();
    let env = DensityOperator::basis(2, 0).unwrap();
    let trace_out = Channel::partial_trace_second(1 << l, 4).unwrap();
    let evolve = Channel::unitary(u.clone()).unwrap();
    (0..2)
        .map(|j| {
            let ancilla = match sc.ancillas() {
                Some(a) => a[j].clone(),
                None => DensityOperator::basis(2, 0).unwrap(),
            };
            let input = tensor_power(&sc.states()[j], n).unwrap().tensor(&blank).tensor(&ancilla).tensor(&env);
            apply_channel(&trace_out, &apply_channel(&evolve, &input).unwrap()).unwrap()
        })
        .collect()
}

fn admissible(f: f64, phi_frac: f64, m: usize) -> f64 {
    let floor = f.powi(m as i32);
    (floor + (1.0 - floor) * phi_frac).min(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_grows_as_priors_even_out(f in 0.05f64..0.95, phi_frac in 0.05f64..1.0, n in 1usize..4, m in 1usize..4) {
        let phi = admissible(f, phi_frac, m);
        let mut last = 0.0;
        for i in 1..=50 {
            let b = bound(f, phi, 0.01 * i as f64, n, n + m);
            prop_assert!(b >= last - 1e-12);
            last = b;
        }
        // symmetric in the two priors
        prop_assert!((bound(f, phi, 0.3, n, n + m) - bound(f, phi, 0.7, n, n + m)).abs() < 1e-12);
    }

    #[test]
    fn bound_grows_with_ancilla_overlap(f in 0.05f64..0.95, p_minus in 0.05f64..0.95, n in 1usize..4, m in 1usize..4) {
        let floor = f.powi(m as i32);
        let mut last = 0.0;
        for i in 1..=40 {
            let phi = (floor + (1.0 - floor) * i as f64 / 40.0).min(1.0);
            let b = bound(f, phi, p_minus, n, n + m);
            prop_assert!(b >= last - 1e-12);
            last = b;
        }
        prop_assert!(bound(f, floor * 0.999, p_minus, n, n + m) == 0.0);
    }

    #[test]
    fn bound_vanishes_with_many_originals(f in 0.1f64..0.9, phi in 0.5f64..=1.0, m in 1usize..4) {
        let values: Vec<f64> = (1..=20).map(|n| bound(f, phi.max(f.powi(m as i32) + 1e-3), 0.5, n, n + m)).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        let far = bound(f, phi.max(f.powi(m as i32) + 1e-3), 0.5, 400, 400 + m);
        prop_assert!(far < 1e-6, "bound {far} at N = 400");
    }

    #[test]
    fn minimal_relative_error_is_the_bound(f in 0.0f64..0.99, n in 1usize..6, m in 1usize..6) {
        let l = n + m;
        let c = criteria(f, n, l).unwrap();
        prop_assert!((c.min_r - bound(f, 1.0, 0.5, n, l)).abs() <= 1e-12);
    }

    #[test]
    fn random_machines_respect_the_bound(seed in any::<u64>(), f in 0.1f64..0.95, phi_frac in 0.0f64..=1.0, p_minus in 0.05f64..0.95) {
        let mut r = rng(seed);
        for (n, l) in [(1usize, 2usize), (2, 3), (1, 3)] {
            let phi = admissible(f, phi_frac, l - n);
            let sc = CloningScenario::pure_pair(f, phi, p_minus, n, l).unwrap();
            let b = two_state_bound(&sc).unwrap().value;
            let u = random_unitary(&mut r, 1 << (l + 2));
            let rel = relative_error(&sc, &machine_outputs(&sc, &u)).unwrap();
            prop_assert!(rel >= b - 1e-9, "R = {rel} < bound {b}");
        }
    }

    #[test]
    fn perturbed_optimal_circuits_respect_the_bound(seed in any::<u64>(), alpha0 in 0.05f64..0.75, theta_frac in 0.0f64..0.9, p_minus in 0.05f64..0.95, scale in 1e-4f64..1e-1) {
        let mut r = rng(seed);
        let (n, l) = (1usize, 3usize);
        let c = (2.0 * alpha0).cos();
        let theta = ((c.powi(2) + (1.0 - c.powi(2)) * (1.0 - theta_frac)).acos() / 2.0).max(0.0);
        let plan = build_circuit(n, l, alpha0, theta).unwrap();
        let tol = Tolerances::default();
        // a unitary close to the identity, exp(i scale H), through its Cayley form
        let h = {
            let g = ginibre(&mut r, 1 << (l + 1), 1 << (l + 1));
            (&g + g.adjoint()).scale(0.5 * scale)
        };
        let i = CMatrix::identity(h.nrows(), h.ncols());
        let ih = h.map(|z| z * clonebound::Complex64::i());
        let kick = (&i + &ih) * (&i - &ih).try_inverse().unwrap();
        let sc = CloningScenario::pure_pair(c, (2.0 * theta).cos(), p_minus, n, l).unwrap();
        let trace_out = Channel::partial_trace_second(1 << l, 2).unwrap();
        let outputs: Vec<DensityOperator> = [Sign::Plus, Sign::Minus]
            .iter()
            .map(|&s| {
                let (state, _) = run_circuit(&plan, s, &tol).unwrap();
                let v = CVector::from_vec(state.amplitudes().to_vec());
                // statevector bit 0 is the ancilla: reorder to (clone register) (x) ancilla
                let perm = CVector::from_fn(v.len(), |idx, _| v[reorder(idx, l)]);
                let kicked = PureState::normalized(&kick * perm).unwrap().to_density();
                apply_channel(&trace_out, &kicked).unwrap()
            })
            .collect();
        let b = two_state_bound(&sc).unwrap().value;
        let rel = relative_error(&sc, &outputs).unwrap();
        prop_assert!(rel >= b - 1e-9, "R = {rel} < bound {b}");
    }
}

/// Index map from `(clone register) (x) ancilla` ordering, clone position `p`
/// (1-based) as the `p`-th most significant of the first `l` bits, to the
/// simulator's little-endian layout with the ancilla at bit 0.
fn reorder(idx: usize, l: usize) -> usize {
    let ancilla = idx & 1;
    let clones = idx >> 1;
    let mut sim = ancilla;
    for p in 1..=l {
        let bit = (clones >> (l - p)) & 1;
        sim |= bit << p;
    }
    sim
}

#[test]
fn explicit_angles_match_multiplicativity_for_mixed_states() {
    let mut r = rng(3);
    for _ in 0..10 {
        let states = vec![random_density(&mut r, 2), random_density(&mut r, 2), random_density(&mut r, 2)];
        let ancillas = vec![random_density(&mut r, 2), random_density(&mut r, 2), random_density(&mut r, 2)];
        let sc = CloningScenario::new(states, vec![0.2, 0.3, 0.5], Some(ancillas), 2, 4).unwrap();
        let fast = pair_angles(&sc).unwrap();
        let slow = pair_angles_explicit(&sc, &Tolerances::default()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((fast.delta_n[j][k] - slow.delta_n[j][k]).abs() < 1e-7);
                assert!((fast.delta_l[j][k] - slow.delta_l[j][k]).abs() < 1e-7);
                assert!((fast.kappa[j][k] - slow.kappa[j][k]).abs() < 1e-7);
            }
        }
    }
}

#[test]
fn extreme_priors_make_the_multi_state_bound_vanish() {
    let mut r = rng(5);
    let states: Vec<_> = (0..4).map(|_| random_pure(&mut r, 2).to_density()).collect();
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let priors = vec![1.0 - 3.0 * eps, eps, eps, eps];
        let sc = CloningScenario::new(states.clone(), priors, None, 1, 2).unwrap();
        let b = multi_state_bound(&sc).unwrap();
        assert!(b < last);
        last = b;
    }
    assert!(last < 1e-2, "{last}");
}

#[test]
fn joint_program_sharpens_the_pairwise_sum() {
    let mut r = rng(9);
    for m in 3..=5 {
        let states: Vec<_> = (0..m).map(|_| random_pure(&mut r, 2).to_density()).collect();
        let raw: Vec<f64> = (0..m).map(|_| r.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let sc = CloningScenario::new(states, raw.iter().map(|p| p / total).collect(), None, 1, 3).unwrap();
        let pairwise = multi_state_bound(&sc).unwrap();
        let joint = simplex_bound(&sc).unwrap().value;
        assert!(joint >= pairwise - 1e-12, "m = {m}: {joint} < {pairwise}");
    }
}
