//! Even nondegenerate integral lattices and their vectors.
//!
//! A lattice is stored as a Gram matrix with respect to a fixed basis;
//! vectors are coordinate tuples in that basis. Construction validates the
//! three structural requirements once — symmetry, even diagonal, nonzero
//! determinant — so every downstream routine may assume them.

mod discriminant;
mod standard;
mod sublattice;

pub use discriminant::{DiscElement, DiscriminantGroup};
pub use standard::{
    e8, e8_minus, hyperbolic_u, k3_lattice, k3n_lattice, mukai_lattice, rank_one,
};
pub use sublattice::{LatticeIndex, Sublattice};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_exact, gcd_all, gram_pair_int, IntMatrix, IntVec, RatMatrix};

/// An even integral lattice of finite rank with nondegenerate bilinear form.
#[derive(Clone, Debug)]
pub struct Lattice {
    gram: IntMatrix,
    det: BigInt,
    label: Option<String>,
}

impl Lattice {
    /// Validate a Gram matrix: square and symmetric, every diagonal entry
    /// even, determinant nonzero. Rank 0 is allowed (determinant 1).
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Dimension(format!(
                "Gram matrix must be square, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(Error::OddDiagonal(i));
            }
        }
        let det = det_exact(&gram)?;
        if det.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Lattice { gram, det, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Order of the discriminant group: `|det|`.
    pub fn disc(&self) -> BigInt {
        self.det.abs()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    /// Bilinear pairing `x . y` of two coordinate vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        gram_pair_int(&self.gram, x, y)
    }

    /// Self-pairing `x . x`, always even.
    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.pair(x, x)
    }

    /// Divisibility of a nonzero vector: the positive generator of the
    /// pairing ideal `{ x . y : y in L }`, i.e. the gcd of the entries of
    /// `G x`.
    pub fn divisibility(&self, x: &[BigInt]) -> Result<BigInt> {
        if x.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "vector length {} in rank-{} lattice",
                x.len(),
                self.rank()
            )));
        }
        let pairings = self.gram.mul_vec(x);
        let g = gcd_all(&pairings);
        if g.is_zero() {
            // Nondegeneracy means only the zero vector pairs to zero with
            // everything.
            return Err(Error::ZeroVector);
        }
        Ok(g)
    }

    /// A vector is primitive when it is not a proper multiple of a lattice
    /// vector, i.e. its coordinates are coprime.
    pub fn is_primitive_vector(&self, x: &[BigInt]) -> bool {
        x.len() == self.rank() && gcd_all(x).is_one()
    }

    /// Rescale the form: `L(m)` has Gram `m * G`. Requires `m != 0`; even
    /// diagonals stay even for any integer `m`.
    pub fn rescaled(&self, m: &BigInt) -> Result<Lattice> {
        if m.is_zero() {
            return Err(Error::Parameter("rescaling factor must be nonzero".into()));
        }
        let mut g = self.gram.clone();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let v = m * &self.gram[(i, j)];
                g[(i, j)] = v;
            }
        }
        let lat = Lattice::new(g)?;
        Ok(match &self.label {
            Some(l) => lat.with_label(format!("{l}({m})")),
            None => lat,
        })
    }

    /// Sign-flipped form `L(-1)`.
    pub fn negated(&self) -> Lattice {
        self.rescaled(&BigInt::from(-1))
            .expect("negation preserves validity")
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let gram = self.gram.block_diag(&other.gram);
        let det = &self.det * &other.det;
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a} (+) {b}")),
            _ => None,
        };
        Lattice { gram, det, label }
    }

    /// Coordinates of the dual basis as the rows of `G^{-1}`; row `i` is the
    /// dual vector pairing to 1 with basis vector `i` and 0 with the rest.
    pub fn dual_basis(&self) -> RatMatrix {
        self.gram
            .to_rat()
            .inverse()
            .expect("nondegenerate Gram matrix is invertible")
    }

    /// The discriminant group `L*/L` with its torsion quadratic form.
    pub fn discriminant_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::new(self)
    }

    /// View the whole lattice as a sublattice of itself (standard basis).
    pub fn full_sublattice(&self) -> Sublattice {
        Sublattice::spanning_all(self)
    }

    /// Sublattice spanned by the given coordinate rows.
    pub fn span(&self, basis: IntMatrix) -> Result<Sublattice> {
        Sublattice::new(self.clone(), basis)
    }

    /// Sublattice spanned by one vector.
    pub fn span_vector(&self, v: &[BigInt]) -> Result<Sublattice> {
        self.span(IntMatrix::from_rows(vec![v.to_vec()])?)
    }
}

/// Parse a comma-separated integer vector, e.g. `0,1,-2`.
pub fn parse_vector(s: &str) -> Result<IntVec> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parameter(format!("bad integer `{}` in vector", part.trim())))
        })
        .collect()
}
