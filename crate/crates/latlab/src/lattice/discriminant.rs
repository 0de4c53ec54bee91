//! Discriminant groups `A_L = L*/L` with their torsion forms.
//!
//! With `L = Z^n` carrying the form `G`, the pairing identifies `L*` with
//! `G^{-1} Z^n`, so `A_L` is isomorphic to `Z^n / G Z^n`. A Smith
//! decomposition `U G V = D` turns that cokernel into the explicit product
//! of cyclic groups `prod Z/d_i`; we keep only the factors with `d_i > 1`.
//! Elements are coordinate tuples in that product, always stored reduced
//! into `[0, d_i)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{gram_pair_rat, snf, IntMatrix, RatVec, SnfDecomposition};

/// Element of a discriminant group: one coordinate per nonunit invariant
/// factor, reduced mod that factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscElement {
    coords: Vec<BigInt>,
}

impl DiscElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// The finite quadratic form `(A_L, q)` of an even nondegenerate lattice.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    gram: IntMatrix,
    snf: SnfDecomposition,
    factors: Vec<BigInt>,
    factor_pos: Vec<usize>,
    gens: Vec<RatVec>,
    order: BigInt,
}

impl DiscriminantGroup {
    pub fn new(lattice: &Lattice) -> Self {
        let gram = lattice.gram().clone();
        let dec = snf(&gram);
        let diag = dec.diagonal();
        let mut factors = Vec::new();
        let mut factor_pos = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_one() {
                factors.push(d.clone());
                factor_pos.push(i);
            }
        }
        // Generator for factor i: column `pos` of V divided by d, a vector
        // in L* whose pairing row is U^{-1} e_pos.
        let gens = factor_pos
            .iter()
            .zip(&factors)
            .map(|(&pos, d)| {
                (0..gram.rows())
                    .map(|r| BigRational::new(dec.v[(r, pos)].clone(), d.clone()))
                    .collect()
            })
            .collect();
        let order = factors.iter().product();
        debug_assert_eq!(order, lattice.disc(), "group order must equal |det|");
        DiscriminantGroup {
            gram,
            snf: dec,
            factors,
            factor_pos,
            gens,
            order,
        }
    }

    /// Nonunit invariant factors `d_1 | d_2 | ...`, ascending.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Number of cyclic factors (minimal generator count).
    pub fn cyclic_rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement {
            coords: vec![BigInt::zero(); self.factors.len()],
        }
    }

    /// Build an element from raw cyclic coordinates (reduced internally).
    pub fn element(&self, coords: &[BigInt]) -> Result<DiscElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::Dimension(format!(
                "element needs {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        Ok(DiscElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, d)| c.mod_floor(d))
                .collect(),
        })
    }

    pub fn add(&self, a: &DiscElement, b: &DiscElement) -> DiscElement {
        DiscElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((x, y), d)| (x + y).mod_floor(d))
                .collect(),
        }
    }

    pub fn neg(&self, a: &DiscElement) -> DiscElement {
        DiscElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(x, d)| (-x).mod_floor(d))
                .collect(),
        }
    }

    /// Class of a dual vector presented by its integer pairing row
    /// `a_i = <y, e_i>`; every integer row arises from exactly one dual
    /// class, so this is total.
    pub fn class_from_pairings(&self, pairings: &[BigInt]) -> Result<DiscElement> {
        if pairings.len() != self.gram.rows() {
            return Err(Error::Dimension("pairing row length mismatch".into()));
        }
        let c = self.snf.u.mul_vec(pairings);
        Ok(DiscElement {
            coords: self
                .factor_pos
                .iter()
                .zip(&self.factors)
                .map(|(&pos, d)| c[pos].mod_floor(d))
                .collect(),
        })
    }

    /// Class of a rational vector, which must lie in `L*` (all pairings with
    /// the basis integral).
    pub fn class_of_dual(&self, y: &[BigRational]) -> Result<DiscElement> {
        if y.len() != self.gram.rows() {
            return Err(Error::Dimension("dual vector length mismatch".into()));
        }
        let mut pairings = Vec::with_capacity(y.len());
        for i in 0..self.gram.rows() {
            let mut acc = BigRational::zero();
            for (j, yj) in y.iter().enumerate() {
                acc += BigRational::from(self.gram[(i, j)].clone()) * yj;
            }
            if !acc.is_integer() {
                return Err(Error::Precondition(
                    "vector is not in the dual lattice".into(),
                ));
            }
            pairings.push(acc.to_integer());
        }
        self.class_from_pairings(&pairings)
    }

    /// A dual-vector representative of the class.
    pub fn dual_rep(&self, e: &DiscElement) -> RatVec {
        let n = self.gram.rows();
        let mut y = vec![BigRational::zero(); n];
        for (c, g) in e.coords.iter().zip(&self.gens) {
            if c.is_zero() {
                continue;
            }
            let cr = BigRational::from(c.clone());
            for (yi, gi) in y.iter_mut().zip(g) {
                *yi += &cr * gi;
            }
        }
        y
    }

    /// Quadratic form value `q(e) = <y, y> mod 2Z`, normalized into `[0, 2)`.
    pub fn q(&self, e: &DiscElement) -> BigRational {
        let y = self.dual_rep(e);
        let raw = gram_pair_rat(&self.gram, &y, &y);
        mod_shift(&raw, 2)
    }

    /// Bilinear form value `<e1, e2> mod Z`, normalized into `[0, 1)`.
    pub fn bilinear(&self, a: &DiscElement, b: &DiscElement) -> BigRational {
        let x = self.dual_rep(a);
        let y = self.dual_rep(b);
        let raw = gram_pair_rat(&self.gram, &x, &y);
        mod_shift(&raw, 1)
    }

    /// Enumerate every element. Errors when the order exceeds `budget`.
    pub fn elements(&self, budget: u64) -> Result<Vec<DiscElement>> {
        if self.order > BigInt::from(budget) {
            return Err(Error::Budget(format!(
                "discriminant group of order {} exceeds enumeration budget {}",
                self.order, budget
            )));
        }
        let mut out = vec![self.zero()];
        for (i, d) in self.factors.iter().enumerate() {
            let mut next = Vec::new();
            let mut c = BigInt::zero();
            while &c < d {
                for e in &out {
                    let mut coords = e.coords.clone();
                    coords[i] = c.clone();
                    next.push(DiscElement { coords });
                }
                c += 1;
            }
            out = next;
        }
        Ok(out)
    }
}

/// Reduce a rational into `[0, modulus)`.
fn mod_shift(r: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from(BigInt::from(modulus));
    let q = (r / &m).floor();
    r - q * m
}
