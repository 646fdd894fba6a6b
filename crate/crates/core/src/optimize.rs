//! Minimisation of weighted sine sums `sum_j w_j sin x_j` over the polytope
//! `{x_j + x_k >= a_jk, 0 <= x_j <= pi/2}`.
//!
//! The objective is concave and nondecreasing in every coordinate on the box,
//! so its minimum sits at a vertex. Two variables admit a closed form
//! ([`lemma4_min`]); up to [`MAX_VERTEX_STATES`] variables are handled by exact
//! vertex enumeration ([`simplex_min`]); [`grid_oracle`] is an independent
//! brute-force check for small programs.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Tolerances};

/// Largest program [`simplex_min`] accepts.
pub const MAX_VERTEX_STATES: usize = 8;
/// Largest program [`grid_oracle`] accepts.
pub const MAX_GRID_STATES: usize = 4;

const ANGLE_SLACK: f64 = 1e-12;
const VALUE_TIE: f64 = 1e-12;

/// Minimiser of `p sin x + q sin y` on the square cut by `x + y >= a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Min {
    pub value: f64,
    pub point: (f64, f64),
}

/// Closed-form minimum `min(p, q) sin a`. The whole deviation goes to the
/// lower-weight coordinate; on a tie it goes to `y`.
pub fn lemma4_min(p: f64, q: f64, a: f64) -> Result<Lemma4Min> {
    let tol = Tolerances::default().probability_sum;
    if !(p > 0.0 && q > 0.0 && (p + q - 1.0).abs() <= tol) {
        return Err(Error::BadProbabilities(format!(
            "need p, q > 0 with p + q = 1, got p = {p}, q = {q}"
        )));
    }
    if !(0.0..=FRAC_PI_2).contains(&a) {
        return Err(Error::AngleOutOfRange { value: a, min: 0.0, max: FRAC_PI_2 });
    }
    let point = if p < q { (a, 0.0) } else { (0.0, a) };
    Ok(Lemma4Min {
        value: p.min(q) * a.sin(),
        point,
    })
}

/// Stationary value of the objective along the cut edge `x + y = a`.
pub fn segment_extreme(p: f64, q: f64, a: f64) -> f64 {
    (p * p - 2.0 * p * q * a.cos() + q * q).max(0.0).sqrt()
}

/// One constraint `x_j + x_k >= bound`. Serialised as `[j, k, bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct PairBound {
    pub j: usize,
    pub k: usize,
    pub bound: f64,
}

impl From<(usize, usize, f64)> for PairBound {
    fn from((j, k, bound): (usize, usize, f64)) -> Self {
        Self { j, k, bound }
    }
}

impl From<PairBound> for (usize, usize, f64) {
    fn from(p: PairBound) -> Self {
        (p.j, p.k, p.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProgram")]
pub struct SimplexProgram {
    pub m: usize,
    pub pair_bounds: Vec<PairBound>,
    pub weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawProgram {
    m: usize,
    pair_bounds: Vec<PairBound>,
    weights: Vec<f64>,
}

impl TryFrom<RawProgram> for SimplexProgram {
    type Error = Error;

    fn try_from(raw: RawProgram) -> Result<Self> {
        SimplexProgram::new(raw.m, raw.pair_bounds, raw.weights)
    }
}

impl SimplexProgram {
    /// Validates indices (`j != k`, both `< m`; stored with `j < k`), bounds in
    /// `[0, pi/2]` and nonnegative weights. Pairs may be omitted (bound 0).
    pub fn new(m: usize, pair_bounds: Vec<PairBound>, weights: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidProgram(format!("need m >= 2, got {m}")));
        }
        if weights.len() != m {
            return Err(Error::InvalidProgram(format!(
                "expected {m} weights, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidProgram(format!("weight {w} is not a finite nonnegative number")));
        }
        let mut normalized = Vec::with_capacity(pair_bounds.len());
        for pb in pair_bounds {
            if pb.j == pb.k || pb.j >= m || pb.k >= m {
                return Err(Error::InvalidProgram(format!("bad pair ({}, {}) for m = {m}", pb.j, pb.k)));
            }
            if !(pb.bound >= -ANGLE_SLACK && pb.bound <= FRAC_PI_2 + ANGLE_SLACK) {
                return Err(Error::AngleOutOfRange { value: pb.bound, min: 0.0, max: FRAC_PI_2 });
            }
            normalized.push(PairBound {
                j: pb.j.min(pb.k),
                k: pb.j.max(pb.k),
                bound: pb.bound.clamp(0.0, FRAC_PI_2),
            });
        }
        Ok(Self { m, pair_bounds: normalized, weights })
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, x)| w * x.sin()).sum()
    }

    /// Membership test with slack `tol` on every constraint.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.m
            && x.iter().all(|&v| v >= -tol && v <= FRAC_PI_2 + tol)
            && self
                .pair_bounds
                .iter()
                .all(|pb| x[pb.j] + x[pb.k] >= pb.bound - tol)
    }

    /// Pair constraints that can be active at a vertex: positive bounds only,
    /// duplicates merged by their maximum.
    fn effective_pairs(&self) -> Vec<PairBound> {
        let mut best = vec![vec![0.0f64; self.m]; self.m];
        for pb in &self.pair_bounds {
            best[pb.j][pb.k] = best[pb.j][pb.k].max(pb.bound);
        }
        let mut out = Vec::new();
        for j in 0..self.m {
            for k in j + 1..self.m {
                if best[j][k] > 0.0 {
                    out.push(PairBound { j, k, bound: best[j][k] });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexMin {
    pub value: f64,
    pub point: Vec<f64>,
}

/// A linear constraint `coeffs . x >= rhs` in the active-set search.
#[derive(Clone, Copy)]
struct Row {
    coeffs: [f64; MAX_VERTEX_STATES],
    rhs: f64,
}

fn vertex_rows(prog: &SimplexProgram) -> Vec<Row> {
    let mut rows: Vec<Row> = (0..prog.m)
        .map(|j| {
            let mut coeffs = [0.0; MAX_VERTEX_STATES];
            coeffs[j] = 1.0;
            Row { coeffs, rhs: 0.0 }
        })
        .collect();
    rows.extend(prog.effective_pairs().into_iter().map(|pb| {
        let mut coeffs = [0.0; MAX_VERTEX_STATES];
        coeffs[pb.j] = 1.0;
        coeffs[pb.k] = 1.0;
        Row { coeffs, rhs: pb.bound }
    }));
    rows
}

/// Active-set search state. `basis[..depth]` is an orthonormal basis of the
/// chosen rows, each carrying the correspondingly transformed right-hand side,
/// so a full-rank active set yields its vertex as `sum_i rhs_i basis_i`.
struct ActiveSetSearch<'a> {
    rows: &'a [Row],
    m: usize,
    basis: [Row; MAX_VERTEX_STATES],
    depth: usize,
}

impl ActiveSetSearch<'_> {
    /// Adds `row` to the basis unless it is (numerically) dependent.
    fn push(&mut self, row: &Row) -> bool {
        let m = self.m;
        let mut r = *row;
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for b in &self.basis[..self.depth] {
                let dot: f64 = (0..m).map(|i| r.coeffs[i] * b.coeffs[i]).sum();
                for i in 0..m {
                    r.coeffs[i] -= dot * b.coeffs[i];
                }
                r.rhs -= dot * b.rhs;
            }
        }
        let norm = (0..m).map(|i| r.coeffs[i] * r.coeffs[i]).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return false;
        }
        for i in 0..m {
            r.coeffs[i] /= norm;
        }
        r.rhs /= norm;
        self.basis[self.depth] = r;
        self.depth += 1;
        true
    }

    fn vertex(&self) -> Vec<f64> {
        (0..self.m)
            .map(|i| self.basis[..self.m].iter().map(|b| b.rhs * b.coeffs[i]).sum())
            .collect()
    }

    fn run(&mut self, start: usize, visit: &mut dyn FnMut(Vec<f64>)) {
        if self.depth == self.m {
            visit(self.vertex());
            return;
        }
        let needed = self.m - self.depth;
        for idx in start..self.rows.len() {
            if self.rows.len() - idx < needed {
                break;
            }
            if self.push(&self.rows[idx]) {
                self.run(idx + 1, visit);
                self.depth -= 1;
            }
        }
    }
}

/// Calls `fold` on every feasible vertex (with duplicates from degenerate
/// active sets). The search is split across threads by the first active row.
fn for_each_vertex<T: Send>(
    prog: &SimplexProgram,
    tol: f64,
    init: impl Fn() -> T + Sync,
    fold: impl Fn(&mut T, Vec<f64>) + Sync,
) -> Vec<T> {
    let rows = vertex_rows(prog);
    let empty = Row { coeffs: [0.0; MAX_VERTEX_STATES], rhs: 0.0 };
    (0..rows.len())
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut search = ActiveSetSearch {
                rows: &rows,
                m: prog.m,
                basis: [empty; MAX_VERTEX_STATES],
                depth: 0,
            };
            if search.push(&rows[first]) {
                search.run(first + 1, &mut |mut x| {
                    if prog.is_feasible(&x, tol) {
                        x.iter_mut().for_each(|v| *v = v.clamp(0.0, FRAC_PI_2));
                        fold(&mut acc, x);
                    }
                });
            }
            acc
        })
        .collect()
}

fn check_size(m: usize, max: usize) -> Result<()> {
    if m > max {
        Err(Error::TooManyStates { got: m, max })
    } else {
        Ok(())
    }
}

/// All distinct vertices of the feasible region, sorted lexicographically.
///
/// Upper box faces are never needed: each coordinate of a vertex of
/// `{x >= 0, x_j + x_k >= a_jk}` is 0 or at most some `a_jk <= pi/2`, so these
/// vertices already lie in the box, and a nondecreasing concave objective
/// attains its minimum over the box-constrained region at one of them.
pub fn polytope_vertices(prog: &SimplexProgram) -> Result<Vec<Vec<f64>>> {
    check_size(prog.m, MAX_VERTEX_STATES)?;
    let tol = Tolerances::default().vertex_dedup;
    let parts = for_each_vertex(prog, tol, Vec::new, |acc: &mut Vec<Vec<f64>>, x| acc.push(x));
    let mut seen = HashSet::new();
    let mut out: Vec<Vec<f64>> = parts
        .into_iter()
        .flatten()
        .filter(|x| seen.insert(x.iter().map(|v| (v / tol).round() as i64).collect::<Vec<_>>()))
        .collect();
    out.sort_by(|a, b| lex_cmp(a, b, 0.0));
    Ok(out)
}

fn lex_cmp(a: &[f64], b: &[f64], tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

fn better(candidate: &SimplexMin, incumbent: &SimplexMin, tol: f64) -> bool {
    if candidate.value < incumbent.value - VALUE_TIE {
        return true;
    }
    (candidate.value - incumbent.value).abs() <= VALUE_TIE
        && lex_cmp(&candidate.point, &incumbent.point, tol) == Ordering::Less
}

/// Exact minimum by vertex enumeration; ties go to the lexicographically
/// smallest vertex.
pub fn simplex_min(prog: &SimplexProgram) -> Result<SimplexMin> {
    check_size(prog.m, MAX_VERTEX_STATES)?;
    let tol = Tolerances::default().vertex_dedup;
    let parts = for_each_vertex(
        prog,
        tol,
        || None::<SimplexMin>,
        |best, x| {
            let candidate = SimplexMin { value: prog.objective(&x), point: x };
            if best.as_ref().is_none_or(|b| better(&candidate, b, tol)) {
                *best = Some(candidate);
            }
        },
    );
    parts
        .into_iter()
        .flatten()
        .reduce(|a, b| if better(&b, &a, tol) { b } else { a })
        .ok_or_else(|| Error::InvalidProgram("no feasible vertex found".into()))
}

/// Minimum of the objective over the feasible points of the grid
/// `{0, step, 2 step, ...} U {pi/2}` in every coordinate.
///
/// The last coordinate is not scanned: for fixed leading coordinates the
/// objective is nondecreasing in it, so the smallest feasible grid value is
/// the best one on that line. The result is the exhaustive grid minimum and
/// exceeds the true minimum by at most `step * sum(weights)`.
pub fn grid_oracle(prog: &SimplexProgram, step: f64) -> Result<f64> {
    check_size(prog.m, MAX_GRID_STATES)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidProgram(format!("grid step must be positive, got {step}")));
    }
    let m = prog.m;
    let mut grid: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&x| x < FRAC_PI_2)
        .collect();
    grid.push(FRAC_PI_2);
    let sines: Vec<f64> = grid.iter().map(|x| x.sin()).collect();

    let last = m - 1;
    let mut bounds = vec![vec![0.0f64; m]; m];
    for pb in &prog.pair_bounds {
        bounds[pb.j][pb.k] = bounds[pb.j][pb.k].max(pb.bound);
        bounds[pb.k][pb.j] = bounds[pb.j][pb.k];
    }
    let smallest_at_least = |need: f64| -> Option<usize> {
        if need <= 0.0 {
            return Some(0);
        }
        let idx = ((need - ANGLE_SLACK) / step).ceil().max(0.0) as usize;
        let idx = idx.min(grid.len() - 1);
        (grid[idx] >= need - ANGLE_SLACK).then_some(idx)
    };

    let mut best = f64::INFINITY;
    let mut counter = vec![0usize; last];
    'outer: loop {
        let feasible_prefix = (0..last).all(|j| {
            (j + 1..last).all(|k| grid[counter[j]] + grid[counter[k]] >= bounds[j][k] - ANGLE_SLACK)
        });
        if feasible_prefix {
            let need = (0..last)
                .map(|j| bounds[j][last] - grid[counter[j]])
                .fold(0.0f64, f64::max);
            if let Some(idx) = smallest_at_least(need) {
                let value: f64 = (0..last)
                    .map(|j| prog.weights[j] * sines[counter[j]])
                    .sum::<f64>()
                    + prog.weights[last] * sines[idx];
                best = best.min(value);
            }
        }
        for c in counter.iter_mut() {
            *c += 1;
            if *c < grid.len() {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    Ok(best)
}
