//! Rank-2 nonnegative matrix factorization by alternating NNLS.
//!
//! The factorization minimizes the Frobenius residual of `A - WH` with
//! `W >= 0` (terms x 2) and `H >= 0` (2 x documents). With only two basis
//! columns the nonnegative least-squares subproblem has a closed form: solve
//! the 2x2 unconstrained normal equations, and when that solution leaves the
//! nonnegative orthant, fall back to the better of the two single-column
//! projections. Each half-step is therefore an exact block minimizer, which
//! makes the outer residual sequence non-increasing.
//!
//! `A` is only ever traversed through its sparse entries; the residual is
//! tracked with the identity
//! `||A - WH||^2 = ||A||^2 - 2<A, WH> + <WᵀW, HHᵀ>`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::TermDocMatrix;

/// Default cap on outer iterations.
pub const DEFAULT_MAX_ITERS: usize = 50;
/// Default relative-change stopping tolerance.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Result of a rank-2 factorization. `w[i]` holds the two basis weights of
/// term row `i`; `h[j]` the two coefficients of document column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub w: Vec<[f64; 2]>,
    pub h: Vec<[f64; 2]>,
    /// Frobenius residual after each outer iteration; non-increasing within
    /// 1e-10. Basis columns are unit-norm on return, with the scale moved
    /// into `h`.
    pub residual_history: Vec<f64>,
}

impl FactorPair {
    /// Final residual divided by `||A||_F`.
    pub fn relative_residual(&self, a: &TermDocMatrix) -> f64 {
        let frob = a.frob_sq().sqrt();
        if frob == 0.0 {
            return 0.0;
        }
        self.residual_history.last().copied().unwrap_or(frob) / frob
    }
}

/// Symmetric 2x2 Gram matrix stored as `[g11, g12, g22]`.
type Gram = [f64; 3];

fn gram(v: &[[f64; 2]]) -> Gram {
    let mut g = [0.0; 3];
    for row in v {
        g[0] += row[0] * row[0];
        g[1] += row[0] * row[1];
        g[2] += row[1] * row[1];
    }
    g
}

/// Conditioning margin below which the 2x2 normal equations are treated as
/// rank deficient. Cramer applied to a nearly-parallel basis multiplies
/// rounding noise by the squared condition number, so a solution computed
/// past this gate can be arbitrarily wrong while looking feasible.
const DET_GATE: f64 = 1e-8;

/// Exact solution of `min_{x >= 0} ||B x - y||` given `G = BᵀB` and `c = Bᵀy`.
///
/// If the unconstrained normal-equation solution is nonnegative it is
/// optimal. Otherwise the optimum has an active constraint, so the candidates
/// are the two clamped single-column projections; ties go to the lower column
/// index. Candidate residuals are compared through `xᵀGx - 2 xᵀc`, which
/// differs from the true squared residual by the constant `||y||^2`.
pub(crate) fn solve_gram(g: Gram, c: [f64; 2]) -> [f64; 2] {
    let [g11, g12, g22] = g;
    let det = g11 * g22 - g12 * g12;
    if det > DET_GATE * g11 * g22 {
        let x1 = (g22 * c[0] - g12 * c[1]) / det;
        let x2 = (g11 * c[1] - g12 * c[0]) / det;
        if x1 >= 0.0 && x2 >= 0.0 {
            return [x1, x2];
        }
    }
    let (x1, r1) = single_column(g11, c[0]);
    let (x2, r2) = single_column(g22, c[1]);
    if r2 < r1 {
        [0.0, x2]
    } else {
        [x1, 0.0]
    }
}

/// In-iteration variant: returns the incumbent when the fresh solution does
/// not improve the column objective `xᵀGx - 2 xᵀc`. Each half-step therefore
/// never worsens the factorization, keeping the residual sequence
/// non-increasing even when a subproblem turns numerically degenerate.
fn solve_gram_guarded(g: Gram, c: [f64; 2], prev: [f64; 2]) -> [f64; 2] {
    let cand = solve_gram(g, c);
    let value = |x: [f64; 2]| quad(g, x) - 2.0 * (x[0] * c[0] + x[1] * c[1]);
    if value(cand) <= value(prev) {
        cand
    } else {
        prev
    }
}

/// Clamped one-column solution and its comparison value `x²g - 2xc`.
fn single_column(g: f64, c: f64) -> (f64, f64) {
    if g <= 0.0 {
        return (0.0, 0.0);
    }
    let x = (c / g).max(0.0);
    (x, x * x * g - 2.0 * x * c)
}

fn quad(g: Gram, x: [f64; 2]) -> f64 {
    g[0] * x[0] * x[0] + 2.0 * g[1] * x[0] * x[1] + g[2] * x[1] * x[1]
}

/// Exact nonnegative least squares against a two-column basis:
/// `argmin_{h >= 0} ||W h - a||`. Errors when both basis columns are zero.
pub fn nnls_rank2(w: &[[f64; 2]], a: &[f64]) -> Result<[f64; 2]> {
    assert_eq!(w.len(), a.len(), "basis and target lengths differ");
    let g = gram(w);
    if g[0] == 0.0 && g[2] == 0.0 {
        return Err(Error::DegenerateBasis);
    }
    let mut c = [0.0; 2];
    for (wi, &ai) in w.iter().zip(a) {
        c[0] += wi[0] * ai;
        c[1] += wi[1] * ai;
    }
    Ok(solve_gram(g, c))
}

/// `Wᵀ a_j` for one sparse column.
fn column_c(col: &[(u32, f64)], w: &[[f64; 2]]) -> [f64; 2] {
    let mut c = [0.0; 2];
    for &(row, v) in col {
        let wr = w[row as usize];
        c[0] += v * wr[0];
        c[1] += v * wr[1];
    }
    c
}

/// Rank-2 NMF of a weighted matrix. `W` starts from seeded uniform [0,1)
/// entries and `H` is solved first; the alternation stops when the residual
/// change relative to the first recorded residual drops below `tol`, or
/// after `max_iters` outer iterations. Deterministic for a fixed
/// `(a, seed, max_iters, tol)`.
///
/// If a basis column collapses to all zeros it is re-seeded once from the
/// document column with the largest current residual (the column's mixing
/// row is zeroed so the tracked residual is unaffected); afterwards the
/// alternation simply proceeds.
pub fn nmf_rank2(
    a: &TermDocMatrix,
    seed: u64,
    max_iters: usize,
    tol: f64,
) -> Result<FactorPair> {
    if !a.is_weighted() {
        return Err(Error::NotWeighted);
    }
    let (m, n) = (a.term_count(), a.doc_count());
    if m < 2 || n < 2 {
        return Err(Error::MatrixTooSmall { rows: m, cols: n });
    }
    let frob_sq = a.frob_sq();
    if frob_sq == 0.0 {
        return Err(Error::ZeroMatrix);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<[f64; 2]> = (0..m)
        .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let mut h: Vec<[f64; 2]> = vec![[0.0; 2]; n];
    let mut residual_history = Vec::new();
    let mut rescued = false;

    for iter in 0..max_iters {
        solve_h(a, &w, &mut h);
        solve_w(a, &h, &mut w);

        if !rescued {
            for col in 0..2 {
                if w.iter().all(|row| row[col] == 0.0) {
                    rescue_column(a, &mut w, &mut h, col);
                    rescued = true;
                    break;
                }
            }
        }

        let residual = residual_from_parts(a, frob_sq, &w, &h);
        residual_history.push(residual);
        if iter >= 1 {
            let r0 = residual_history[0].max(f64::MIN_POSITIVE);
            let delta = (residual_history[iter - 1] - residual).abs();
            if delta / r0 < tol {
                break;
            }
        } else if residual == 0.0 {
            break;
        }
    }

    finalize(&mut w, &mut h);
    Ok(FactorPair {
        w,
        h,
        residual_history,
    })
}

/// Solves every column of `H` against the fixed basis `W`. Columns are
/// independent, so the loop runs in parallel without affecting the result.
fn solve_h(a: &TermDocMatrix, w: &[[f64; 2]], h: &mut [[f64; 2]]) {
    let g = gram(w);
    h.par_iter_mut().enumerate().for_each(|(j, hj)| {
        *hj = solve_gram_guarded(g, column_c(a.column(j), w), *hj);
    });
}

/// Solves every row of `W` against fixed `H` (the transposed subproblem).
/// The right-hand sides are gathered with one sequential pass over the
/// nonzeros so the accumulation order is fixed.
fn solve_w(a: &TermDocMatrix, h: &[[f64; 2]], w: &mut [[f64; 2]]) {
    let g = gram(h);
    let mut c: Vec<[f64; 2]> = vec![[0.0; 2]; w.len()];
    for (j, hj) in h.iter().enumerate() {
        for &(row, v) in a.column(j) {
            let cr = &mut c[row as usize];
            cr[0] += v * hj[0];
            cr[1] += v * hj[1];
        }
    }
    w.par_iter_mut().zip(c.par_iter()).for_each(|(wi, ci)| {
        *wi = solve_gram_guarded(g, *ci, *wi);
    });
}

/// Frobenius residual via the sparse identity; clamped at zero before the
/// square root to absorb cancellation noise near exact factorizations.
fn residual_from_parts(a: &TermDocMatrix, frob_sq: f64, w: &[[f64; 2]], h: &[[f64; 2]]) -> f64 {
    let mut inner = 0.0;
    for (j, hj) in h.iter().enumerate() {
        let mut acc = 0.0;
        for &(row, v) in a.column(j) {
            let wr = w[row as usize];
            acc += v * (wr[0] * hj[0] + wr[1] * hj[1]);
        }
        inner += acc;
    }
    let gw = gram(w);
    let gh = gram(h);
    let cross = gw[0] * gh[0] + 2.0 * gw[1] * gh[1] + gw[2] * gh[2];
    (frob_sq - 2.0 * inner + cross).max(0.0).sqrt()
}

/// Re-seeds a collapsed basis column from the document column with the
/// largest residual under the current factors. The column's coefficient row
/// is zeroed, so the approximation `WH` (and with it the residual sequence)
/// is unchanged until the next half-step improves it.
fn rescue_column(a: &TermDocMatrix, w: &mut [[f64; 2]], h: &mut [[f64; 2]], col: usize) {
    let gw = gram(w);
    let mut best_j = 0;
    let mut best_r = f64::NEG_INFINITY;
    for (j, &hj) in h.iter().enumerate() {
        let aj_sq: f64 = a.column(j).iter().map(|&(_, v)| v * v).sum();
        let cj = column_c(a.column(j), w);
        let r = aj_sq - 2.0 * (hj[0] * cj[0] + hj[1] * cj[1]) + quad(gw, hj);
        if r > best_r {
            best_r = r;
            best_j = j;
        }
    }
    for row in w.iter_mut() {
        row[col] = 0.0;
    }
    for &(row, v) in a.column(best_j) {
        w[row as usize][col] = v;
    }
    for hj in h.iter_mut() {
        hj[col] = 0.0;
    }
}

/// Scales basis columns to unit norm, moving the scale into `h`.
fn finalize(w: &mut [[f64; 2]], h: &mut [[f64; 2]]) {
    for col in 0..2 {
        let norm = w.iter().map(|r| r[col] * r[col]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for r in w.iter_mut() {
                r[col] /= norm;
            }
            for hj in h.iter_mut() {
                hj[col] *= norm;
            }
        }
    }
}
