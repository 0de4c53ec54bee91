//! The standard lattices of K3 geometry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Hyperbolic plane `U`: Gram `[[0,1],[1,0]]`, determinant -1.
pub fn hyperbolic_u() -> Lattice {
    Lattice::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]))
        .expect("U is valid")
        .with_label("U")
}

/// Positive definite `E8` via its Cartan matrix (Bourbaki node order:
/// node 2 is the branch, attached to node 4). Determinant 1.
pub fn e8() -> Lattice {
    let mut g = IntMatrix::zero(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(2);
    }
    // Dynkin edges, 1-based Bourbaki labels.
    for &(a, b) in &[(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)] {
        g[(a - 1, b - 1)] = BigInt::from(-1);
        g[(b - 1, a - 1)] = BigInt::from(-1);
    }
    Lattice::new(g).expect("E8 is valid").with_label("E8")
}

/// Negative definite `E8(-1)`.
pub fn e8_minus() -> Lattice {
    e8().negated().with_label("E8(-1)")
}

/// Rank-one lattice `<m>`; `m` must be even and nonzero.
pub fn rank_one(m: &BigInt) -> Result<Lattice> {
    if m.is_zero() {
        return Err(Error::Parameter("rank-one lattice needs m != 0".into()));
    }
    if m.is_odd() {
        return Err(Error::Parameter(format!(
            "rank-one lattice <{m}> is odd; even lattices need even m"
        )));
    }
    Ok(Lattice::new(IntMatrix::from_rows(vec![vec![m.clone()]])?)?.with_label(format!("<{m}>")))
}

/// The K3 lattice `E8(-1)^2 (+) U^3`: rank 22, determinant -1, unimodular.
pub fn k3_lattice() -> Lattice {
    let e = e8_minus();
    let u = hyperbolic_u();
    e.direct_sum(&e)
        .direct_sum(&u)
        .direct_sum(&u)
        .direct_sum(&u)
        .with_label("K3")
}

/// The Mukai lattice `E8(-1)^2 (+) U^4`: rank 24, determinant 1, unimodular.
pub fn mukai_lattice() -> Lattice {
    k3_lattice().direct_sum(&hyperbolic_u()).with_label("Mukai")
}

/// Second cohomology of a hyper-Kaehler manifold of K3^[n] type:
/// `E8(-1)^2 (+) U^3 (+) <2-2n>`, rank 23, determinant 2n-2. Needs `n >= 2`.
pub fn k3n_lattice(n: u64) -> Result<Lattice> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "K3^[n] lattice needs n >= 2, got {n}"
        )));
    }
    let tail = rank_one(&BigInt::from(2 - 2 * i128::from(n)))?;
    Ok(k3_lattice()
        .direct_sum(&tail)
        .with_label(format!("K3^[{n}]")))
}
