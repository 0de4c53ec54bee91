//! Smith and Hermite normal forms over the integers, plus the left kernel.
//!
//! All three are deterministic: pivot selection uses minimal absolute value
//! with lowest index as tie-break, so repeated runs on the same input give
//! identical transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular and `D`
/// diagonal, each diagonal entry nonnegative and dividing the next.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...` including any trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Nonzero diagonal entries strictly greater than 1 — the invariant
    /// factors of the cokernel's torsion part.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form of `a`.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let steps = a.rows().min(a.cols());

    for k in 0..steps {
        loop {
            // Smallest nonzero |entry| in the trailing block becomes the pivot.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..d.rows() {
                for j in k..d.cols() {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[(i, j)].abs() < d[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                // Trailing block is zero; done.
                return finish_snf(u, d, v, k);
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // Kill the rest of column k and row k by Euclidean steps.
            let mut dirty = false;
            for i in (k + 1)..d.rows() {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, k)] / &d[(k, k)]);
                d.add_row_mul(i, k, &q);
                u.add_row_mul(i, k, &q);
                if !d[(i, k)].is_zero() {
                    dirty = true; // remainder survives; pivot will shrink next pass
                }
            }
            for j in (k + 1)..d.cols() {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(k, j)] / &d[(k, k)]);
                d.add_col_mul(j, k, &q);
                v.add_col_mul(j, k, &q);
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Row and column are clear. Enforce divisibility into the rest of
            // the block: if some entry resists the pivot, fold its row in and
            // restart this step with a smaller pivot ahead.
            let mut fixed = true;
            'scan: for i in (k + 1)..d.rows() {
                for j in (k + 1)..d.cols() {
                    if !d[(i, j)].is_multiple_of(&d[(k, k)]) {
                        d.add_row_mul(k, i, &BigInt::one());
                        u.add_row_mul(k, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish_snf(u, d, v, steps)
}

fn finish_snf(u: IntMatrix, d: IntMatrix, v: IntMatrix, _done: usize) -> SnfDecomposition {
    debug_assert!(snf_shape_ok(&d), "SNF postcondition failed: {d:?}");
    SnfDecomposition { u, d, v }
}

fn snf_shape_ok(d: &IntMatrix) -> bool {
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && !d[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let diag: Vec<_> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
    for w in diag.windows(2) {
        if w[0].is_negative() || w[1].is_negative() {
            return false;
        }
        if !w[0].is_zero() && !w[1].is_zero() && !w[1].is_multiple_of(&w[0]) {
            return false;
        }
        if w[0].is_zero() && !w[1].is_zero() {
            return false;
        }
    }
    true
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `a`.
///
/// The result is in row echelon form with positive pivots, entries above
/// each pivot reduced into `[0, pivot)`, and zero rows dropped — so it is a
/// canonical basis of the row lattice, with as many rows as the rank of `a`.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();

    for col in 0..n {
        if pivot_row == m {
            break;
        }
        // Euclidean elimination below the pivot until one nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => h[(i, col)].abs() < h[(b, col)].abs(),
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            let mut any_left = false;
            for i in (pivot_row + 1)..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, col)] / &h[(pivot_row, col)]);
                h.add_row_mul(i, pivot_row, &q);
                if !h[(i, col)].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
        }
        pivot_cols.push((pivot_row, col));
        pivot_row += 1;
    }

    // Reduce entries above each pivot into [0, pivot).
    for &(r, c) in pivot_cols.iter() {
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_mul(i, r, &q);
        }
    }

    h.take_rows(0..pivot_row)
}

/// Basis for the left kernel `{ x : x * a = 0 }`, returned as the rows of a
/// matrix in Hermite normal form (so the basis is canonical and the row
/// lattice is saturated). The matrix has `rows() == 0` when the kernel is
/// trivial.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let dec = snf(a);
    let r = dec.rank();
    if r == a.rows() {
        return IntMatrix::zero(0, a.rows());
    }
    // Rows r.. of U satisfy row * A = 0 and span the kernel saturated,
    // since U is unimodular. HNF canonicalizes the spanning set.
    hnf(&dec.u.take_rows(r..a.rows()))
}

/// Express `x` as an integer combination of the rows of `h`, which must be
/// in Hermite normal form. Returns the coefficient vector, or `None` when
/// `x` is outside the row lattice.
pub fn hnf_membership(h: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(h.cols(), x.len(), "membership shape mismatch");
    // Pivot column of each row (echelon: strictly increasing).
    let pivots: Vec<usize> = (0..h.rows())
        .map(|i| (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).expect("zero row in HNF"))
        .collect();
    let mut residual = x.to_vec();
    let mut coeffs = vec![BigInt::zero(); h.rows()];
    for j in 0..h.cols() {
        if residual[j].is_zero() {
            continue;
        }
        let row = pivots.iter().position(|&p| p == j)?;
        let (q, r) = residual[j].div_rem(&h[(row, j)]);
        if !r.is_zero() {
            return None;
        }
        for c in j..h.cols() {
            let t = &q * &h[(row, c)];
            residual[c] -= t;
        }
        coeffs[row] = q;
    }
    debug_assert!(residual.iter().all(Zero::is_zero));
    Some(coeffs)
}
