//! Sublattices: saturation, primitivity, orthogonal complements, indices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{
    det_exact, hnf, hnf_membership, left_kernel, snf, IntMatrix, RatMatrix,
};

/// Index of one sublattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

/// A sublattice of an ambient lattice, given by basis rows in ambient
/// coordinates. Rows are required to be linearly independent, so the basis
/// is honest; the zero sublattice is the 0-row case.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::Dimension(format!(
                "basis rows have length {}, ambient rank is {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if snf(&basis).rank() != basis.rows() {
            return Err(Error::DependentBasis);
        }
        Ok(Sublattice { ambient, basis })
    }

    pub(crate) fn spanning_all(ambient: &Lattice) -> Self {
        Sublattice {
            basis: IntMatrix::identity(ambient.rank()),
            ambient: ambient.clone(),
        }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Gram matrix of the restricted form: `B G B^T`. May be singular (for
    /// example on an isotropic line).
    pub fn induced_gram(&self) -> IntMatrix {
        self.basis
            .mul(self.ambient.gram())
            .mul(&self.basis.transpose())
    }

    /// Package the restricted form as a lattice in its own right. Errors if
    /// the restriction is degenerate.
    pub fn as_lattice(&self) -> Result<Lattice> {
        match Lattice::new(self.induced_gram()) {
            Err(Error::Degenerate) => Err(Error::DegenerateSublattice),
            other => other,
        }
    }

    /// A sublattice is primitive when the ambient quotient by it is
    /// torsion-free, i.e. the basis extends to a basis of the ambient
    /// lattice; equivalently all invariant factors of the basis matrix are 1.
    pub fn is_primitive(&self) -> bool {
        snf(&self.basis).nonunit_factors().is_empty()
    }

    /// Smallest primitive sublattice containing this one: intersect the
    /// rational span with the ambient lattice. Computed as a double
    /// standard-orthogonal kernel, which lands on a saturated row lattice.
    pub fn saturation(&self) -> Sublattice {
        let perp = left_kernel(&self.basis.transpose());
        let sat = left_kernel(&perp.transpose());
        debug_assert_eq!(sat.rows(), self.rank());
        Sublattice {
            ambient: self.ambient.clone(),
            basis: sat,
        }
    }

    /// Orthogonal complement inside the ambient lattice with respect to the
    /// ambient form. Always saturated.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let pairing = self.ambient.gram().mul(&self.basis.transpose());
        Sublattice {
            basis: left_kernel(&pairing),
            ambient: self.ambient.clone(),
        }
    }

    /// Does this sublattice contain `other` (same ambient rank assumed)?
    pub fn contains(&self, other: &Sublattice) -> Result<bool> {
        if self.ambient.rank() != other.ambient.rank() {
            return Err(Error::AmbientMismatch);
        }
        let h = hnf(&self.basis);
        Ok(other
            .basis
            .rows_iter()
            .all(|row| hnf_membership(&h, row).is_some()))
    }

    /// Index `[other : self]` of this sublattice inside `other`.
    ///
    /// Errors with [`Error::NotContained`] when `self` is not a sublattice
    /// of `other`; returns [`LatticeIndex::Infinite`] when the ranks differ.
    pub fn index_in(&self, other: &Sublattice) -> Result<LatticeIndex> {
        if self.ambient.rank() != other.ambient.rank() {
            return Err(Error::AmbientMismatch);
        }
        let h = hnf(&other.basis);
        let mut coeff_rows = Vec::with_capacity(self.rank());
        for row in self.basis.rows_iter() {
            let Some(c) = hnf_membership(&h, row) else {
                return Err(Error::NotContained);
            };
            coeff_rows.push(c);
        }
        if self.rank() < other.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        // Equal ranks: the coefficient matrix is square and its determinant
        // magnitude is the index.
        let c = IntMatrix::from_rows(coeff_rows)?;
        let d = det_exact(&c)?;
        if d.is_zero() {
            return Err(Error::Internal(
                "independent rows produced singular change of basis".into(),
            ));
        }
        Ok(LatticeIndex::Finite(d.abs()))
    }

    /// Index in the full ambient lattice.
    pub fn index_in_ambient(&self) -> Result<LatticeIndex> {
        self.index_in(&Sublattice::spanning_all(&self.ambient))
    }

    /// Rational coordinates of an element of the subspace spanned by this
    /// sublattice, expressed in the sub-basis; errors if `x` is outside the
    /// rational span.
    pub fn rational_coords(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.ambient.rank() {
            return Err(Error::Dimension("coordinate length mismatch".into()));
        }
        // Solve c * B = x by Gaussian elimination on B^T augmented with x.
        let bt = self.basis.transpose().to_rat();
        let k = self.rank();
        let n = self.ambient.rank();
        let mut m = RatMatrix::zero(n, k + 1);
        for i in 0..n {
            for j in 0..k {
                m[(i, j)] = bt[(i, j)].clone();
            }
            m[(i, k)] = x[i].clone();
        }
        // Forward elimination with partial (first nonzero) pivoting.
        let mut row = 0;
        let mut pivots = Vec::new();
        for col in 0..k {
            let Some(p) = (row..n).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            for i in (row + 1)..n {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let f = &m[(i, col)] / &m[(row, col)];
                for j in col..=k {
                    let t = &f * &m[(row, j)];
                    m[(i, j)] -= t;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // Rows below the pivots must have zero RHS or the system is
        // inconsistent (x outside the span).
        for i in row..n {
            if !m[(i, k)].is_zero() {
                return Err(Error::NotContained);
            }
        }
        let mut coeffs = vec![BigRational::zero(); k];
        for &(r, c) in pivots.iter().rev() {
            let mut acc = m[(r, k)].clone();
            for j in (c + 1)..k {
                acc -= &m[(r, j)] * &coeffs[j];
            }
            coeffs[c] = acc / &m[(r, c)];
        }
        Ok(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::lattice::{hyperbolic_u, k3_lattice};

    fn u2() -> Lattice {
        hyperbolic_u().direct_sum(&hyperbolic_u())
    }

    #[test]
    fn rejects_dependent_rows() {
        let l = u2();
        let b = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[2, 0, 2, 0]]);
        assert!(matches!(l.span(b), Err(Error::DependentBasis)));
    }

    #[test]
    fn saturation_divides_out_content() {
        let l = u2();
        let s = l.span(IntMatrix::from_i64(&[&[2, 0, 2, 0]])).unwrap();
        assert!(!s.is_primitive());
        let sat = s.saturation();
        assert!(sat.is_primitive());
        assert_eq!(sat.basis(), &IntMatrix::from_i64(&[&[1, 0, 1, 0]]));
        // Index-2 inside its saturation.
        assert_eq!(
            s.index_in(&sat).unwrap(),
            LatticeIndex::Finite(BigInt::from(2))
        );
    }

    #[test]
    fn saturation_catches_non_obvious_imprimitivity() {
        // (1,1) and (1,-1) are each primitive but together span an index-2
        // sublattice of Z^2.
        let l = hyperbolic_u();
        let s = l
            .span(IntMatrix::from_i64(&[&[1, 1], &[1, -1]]))
            .unwrap();
        assert!(!s.is_primitive());
        assert_eq!(
            s.index_in_ambient().unwrap(),
            LatticeIndex::Finite(BigInt::from(2))
        );
        let sat = s.saturation();
        assert_eq!(sat.basis(), &IntMatrix::identity(2));
    }

    #[test]
    fn complement_of_hyperbolic_vector() {
        let l = u2();
        // e1 + e2 in the first U: complement contains e1 - e2 and second U.
        let s = l.span(IntMatrix::from_i64(&[&[1, 1, 0, 0]])).unwrap();
        let c = s.orthogonal_complement();
        assert_eq!(c.rank(), 3);
        assert!(c.is_primitive());
        // Every complement row pairs to zero with the generator.
        let gen: Vec<BigInt> = s.basis().row_vec(0);
        for row in c.basis().rows_iter() {
            assert!(l.pair(&gen, row).is_zero());
        }
        // Induced form on the complement: <-2> (+) U up to basis, det 2.
        let det = det_exact(&c.induced_gram()).unwrap();
        assert_eq!(det, BigInt::from(2));
    }

    #[test]
    fn complement_rank_deficit_on_isotropic_vector() {
        let l = hyperbolic_u();
        let s = l.span(IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        // e1 is isotropic: it lies inside its own complement.
        let c = s.orthogonal_complement();
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&s).unwrap());
        assert!(matches!(s.as_lattice(), Err(Error::DegenerateSublattice)));
    }

    #[test]
    fn index_of_full_rank_sublattice() {
        let l = hyperbolic_u();
        let s = l
            .span(IntMatrix::from_i64(&[&[1, 1], &[0, 3]]))
            .unwrap();
        assert_eq!(
            s.index_in_ambient().unwrap(),
            LatticeIndex::Finite(BigInt::from(3))
        );
        // det scales by the square of the index.
        let d = det_exact(&s.induced_gram()).unwrap();
        assert_eq!(d, l.det() * BigInt::from(9));
    }

    #[test]
    fn index_infinite_and_not_contained() {
        let l = u2();
        let line = l.span(IntMatrix::from_i64(&[&[1, 0, 0, 0]])).unwrap();
        let plane = l
            .span(IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]))
            .unwrap();
        assert_eq!(line.index_in(&plane).unwrap(), LatticeIndex::Infinite);
        assert!(matches!(
            plane.index_in(&line),
            Err(Error::NotContained)
        ));
    }

    #[test]
    fn primitive_vector_complement_in_k3() {
        let k3 = k3_lattice();
        let mut v = vec![BigInt::zero(); 22];
        v[16] = BigInt::one(); // first basis vector of the first U factor
        v[17] = BigInt::from(-1);
        let s = k3.span_vector(&v).unwrap();
        assert!(s.is_primitive());
        let c = s.orthogonal_complement();
        assert_eq!(c.rank(), 21);
        // disc of <2>-type vector complement in a unimodular lattice is 2.
        assert_eq!(det_exact(&c.induced_gram()).unwrap().abs(), BigInt::from(2));
    }

    #[test]
    fn double_complement_is_saturation() {
        let l = u2();
        for rows in [
            vec![vec![2i64, 0, 2, 0]],
            vec![vec![1, 2, 3, 4], vec![0, 2, 0, 2]],
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 3, 3]],
        ] {
            let data: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let s = l.span(IntMatrix::from_rows(data).unwrap()).unwrap();
            let double = s.orthogonal_complement().orthogonal_complement();
            // Both sides are saturated lattices in canonical HNF bases.
            assert_eq!(double.basis(), s.saturation().basis());
        }
    }

    #[test]
    fn rational_coords_solves_and_rejects() {
        let l = u2();
        let s = l
            .span(IntMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]))
            .unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let x = vec![
            half.clone(),
            half.clone(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        let c = s.rational_coords(&x).unwrap();
        assert_eq!(c, vec![half, BigRational::zero()]);
        let outside = vec![
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        assert!(matches!(
            s.rational_coords(&outside),
            Err(Error::NotContained)
        ));
    }
}
