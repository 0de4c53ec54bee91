//! Exact determinants and linear solving.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntMatrix, RatMatrix, RatVec};
use crate::error::{Error, Result};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// The 0x0 determinant is 1, matching the empty product convention used for
/// rank-0 lattices.
pub fn det_exact(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                // Bareiss guarantees exact division by the previous pivot.
                debug_assert!(num.clone() % &prev == BigInt::zero());
                m[(i, j)] = num / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * m[(n - 1, n - 1)].clone())
}

/// Solve `a * x = b` over the rationals by Gaussian elimination with exact
/// arithmetic. Requires `a` square and nonsingular.
pub fn solve_exact(a: &RatMatrix, b: &[BigRational]) -> Result<RatVec> {
    if !a.is_square() {
        return Err(Error::Dimension("solve with non-square matrix".into()));
    }
    if a.rows() != b.len() {
        return Err(Error::Dimension("solve shape mismatch".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[(i, k)].is_zero()).ok_or(Error::Singular)?;
        m.swap_rows(k, pivot);
        rhs.swap(k, pivot);
        for i in (k + 1)..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &m[(k, k)];
            for j in k..n {
                let t = &f * &m[(k, j)];
                m[(i, j)] -= t;
            }
            let t = &f * &rhs[k];
            rhs[i] -= t;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in (k + 1)..n {
            acc -= &m[(k, j)] * &x[j];
        }
        x[k] = acc / &m[(k, k)];
    }
    Ok(x)
}

/// Solve `a * x = b` exactly where `a` is integral and nonsingular.
pub fn solve_unique(a: &IntMatrix, b: &[BigInt]) -> Result<RatVec> {
    let rhs: RatVec = b.iter().map(|x| BigRational::from(x.clone())).collect();
    solve_exact(&a.to_rat(), &rhs)
}

/// Cofactor-expansion determinant. Exponential time; only for cross-checking
/// `det_exact` on small matrices.
pub fn det_cofactor(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant of non-square matrix".into()));
    }
    fn go(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
        if rows.is_empty() {
            return BigInt::one();
        }
        let r = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        let mut acc = BigInt::zero();
        let mut sign = BigInt::one();
        for (k, &c) in cols.iter().enumerate() {
            if !a[(r, c)].is_zero() {
                let sub: Vec<usize> = cols
                    .iter()
                    .copied()
                    .filter(|&cc| cc != c)
                    .collect();
                acc += &sign * &a[(r, c)] * go(a, &rest, &sub);
            }
            let _ = k;
            sign = -sign;
        }
        acc
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(go(a, &idx, &idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn det_hyperbolic_plane() {
        let u = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_exact(&u).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn det_empty_is_one() {
        assert_eq!(det_exact(&IntMatrix::zero(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn det_singular() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_exact(&a).unwrap(), BigInt::zero());
    }

    #[test]
    fn det_matches_cofactor_on_fixed_cases() {
        let cases = [
            IntMatrix::from_i64(&[&[3]]),
            IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]),
            IntMatrix::from_i64(&[&[0, 0, -1], &[0, 4, 0], &[-1, 0, 0]]),
            IntMatrix::from_i64(&[&[1, 2, 3, 4], &[0, -1, 2, 0], &[5, 0, 0, 1], &[2, 2, 2, 2]]),
        ];
        for a in &cases {
            assert_eq!(det_exact(a).unwrap(), det_cofactor(a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn solve_rank_one_dual() {
        // <-2> x = 1  =>  x = -1/2 (dual generator of a (-2)-class).
        let a = IntMatrix::from_i64(&[&[-2]]);
        let x = solve_unique(&a, &[BigInt::one()]).unwrap();
        assert_eq!(x, vec![BigRational::from_f64(-0.5).unwrap()]);
    }

    #[test]
    fn solve_needs_pivot_swap() {
        let a = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let x = solve_unique(&a, &[BigInt::from(3), BigInt::from(5)]).unwrap();
        assert_eq!(
            x,
            vec![
                BigRational::from(BigInt::from(5)),
                BigRational::from(BigInt::from(3))
            ]
        );
    }

    #[test]
    fn solve_singular_errors() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            solve_unique(&a, &[BigInt::one(), BigInt::zero()]),
            Err(Error::Singular)
        ));
    }
}
