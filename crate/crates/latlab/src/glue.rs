//! Gluing theory for primitive orthogonal decompositions.
//!
//! For a primitive nondegenerate sublattice `N` of an even lattice `H`, with
//! orthogonal complement `T`, the finite group `G = H / (N (+) T)` measures
//! how `H` is glued from the two pieces. Projection to either factor embeds
//! `G` into the discriminant group of that factor, the two images carry
//! opposite quadratic forms, and the discriminants obey
//! `disc N * disc T = |G|^2 * disc H`. The reverse construction — building
//! an overlattice of `N (+) T` from a graph of discriminant classes — is
//! [`overlattice_from_glue`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DiscElement, DiscriminantGroup, Lattice, Sublattice};
use crate::linalg::{
    hnf, snf, solve_unique, IntMatrix, IntVec, RatMatrix, RatVec, SnfDecomposition,
};

/// Largest glue group any enumeration-based check will walk.
pub const GLUE_ENUM_BUDGET: u64 = 1 << 20;

/// The glue data of a primitive nondegenerate sublattice inside an even
/// lattice: the quotient `G = H/(N (+) T)` together with its two
/// discriminant embeddings.
pub struct Gluing {
    ambient: Lattice,
    n_part: Sublattice,
    t_part: Sublattice,
    n_lattice: Lattice,
    t_lattice: Lattice,
    a_n: DiscriminantGroup,
    a_t: DiscriminantGroup,
    /// SNF of the stacked basis of `N (+) T`.
    stacked: SnfDecomposition,
    v_inv: IntMatrix,
    order: BigInt,
    factors: Vec<BigInt>,
    factor_pos: Vec<usize>,
}

impl Gluing {
    /// Build the glue data for `n_part` inside its ambient lattice.
    ///
    /// Errors: [`Error::NotPrimitive`] when the sublattice is not saturated,
    /// [`Error::DegenerateSublattice`] when the restricted form on it is
    /// singular.
    pub fn new(n_part: &Sublattice) -> Result<Self> {
        if !n_part.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let ambient = n_part.ambient().clone();
        let n_lattice = n_part.as_lattice()?;
        let t_part = n_part.orthogonal_complement();
        let t_lattice = t_part.as_lattice()?;
        debug_assert_eq!(n_part.rank() + t_part.rank(), ambient.rank());

        let a_n = n_lattice.discriminant_group();
        let a_t = t_lattice.discriminant_group();

        let stacked_basis = n_part.basis().vstack(t_part.basis());
        let stacked = snf(&stacked_basis);
        let diag = stacked.diagonal();
        debug_assert!(
            diag.iter().all(|d| !d.is_zero()),
            "N (+) T must have full rank"
        );
        let mut factors = Vec::new();
        let mut factor_pos = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_one() {
                factors.push(d.clone());
                factor_pos.push(i);
            }
        }
        let order: BigInt = factors.iter().product();
        let v_inv = stacked
            .v
            .to_rat()
            .inverse()
            .expect("unimodular matrix is invertible")
            .to_int()
            .expect("inverse of unimodular integer matrix is integral");

        Ok(Gluing {
            ambient,
            n_part: n_part.clone(),
            t_part,
            n_lattice,
            t_lattice,
            a_n,
            a_t,
            stacked,
            v_inv,
            order,
            factors,
            factor_pos,
        })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn n_part(&self) -> &Sublattice {
        &self.n_part
    }

    pub fn t_part(&self) -> &Sublattice {
        &self.t_part
    }

    pub fn n_lattice(&self) -> &Lattice {
        &self.n_lattice
    }

    pub fn t_lattice(&self) -> &Lattice {
        &self.t_lattice
    }

    pub fn n_discriminant(&self) -> &DiscriminantGroup {
        &self.a_n
    }

    pub fn t_discriminant(&self) -> &DiscriminantGroup {
        &self.a_t
    }

    /// `|G|`, the index of `N (+) T` in the ambient lattice.
    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Invariant factors of `G`, ascending, each dividing the next.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// `disc N * disc T == |G|^2 * disc H`, checked exactly.
    pub fn identity_holds(&self) -> bool {
        self.n_lattice.disc() * self.t_lattice.disc()
            == &self.order * &self.order * self.ambient.disc()
    }

    /// Cyclic coordinates of the class of an ambient vector in `G`.
    pub fn class_coords(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.ambient.rank() {
            return Err(Error::Dimension("ambient vector length mismatch".into()));
        }
        let moved = self.stacked.v.vec_mul(x);
        Ok(self
            .factor_pos
            .iter()
            .zip(&self.factors)
            .map(|(&pos, d)| moved[pos].mod_floor(d))
            .collect())
    }

    /// One ambient representative per element of `G`. Errors when `|G|`
    /// exceeds `budget`.
    pub fn coset_reps(&self, budget: u64) -> Result<Vec<IntVec>> {
        if self.order > BigInt::from(budget) {
            return Err(Error::Budget(format!(
                "glue group of order {} exceeds enumeration budget {}",
                self.order, budget
            )));
        }
        let n = self.ambient.rank();
        let mut coord_sets = vec![vec![BigInt::zero()]];
        for d in &self.factors {
            let mut range = Vec::new();
            let mut c = BigInt::zero();
            while &c < d {
                range.push(c.clone());
                c += 1;
            }
            coord_sets.push(range);
        }
        // Cartesian product over the nonunit positions, zero elsewhere.
        let mut reps = Vec::new();
        let mut idx = vec![0usize; self.factors.len()];
        loop {
            let mut full = vec![BigInt::zero(); n];
            for (k, &pos) in self.factor_pos.iter().enumerate() {
                full[pos] = coord_sets[k + 1][idx[k]].clone();
            }
            reps.push(self.v_inv.vec_mul(&full));
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(reps);
                }
                idx[k] += 1;
                if idx[k] < coord_sets[k + 1].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Rational coordinates (in the `N` basis) of the orthogonal projection
    /// of an ambient vector onto `N (x) Q`.
    pub fn project_n(&self, x: &[BigInt]) -> Result<RatVec> {
        project_coords(&self.n_part, x)
    }

    /// Rational coordinates (in the `T` basis) of the projection onto
    /// `T (x) Q`.
    pub fn project_t(&self, x: &[BigInt]) -> Result<RatVec> {
        project_coords(&self.t_part, x)
    }

    /// Class in `A_N` of the `N`-projection of an ambient vector.
    pub fn n_class(&self, x: &[BigInt]) -> Result<DiscElement> {
        let pairings = self
            .n_part
            .basis()
            .mul_vec(&self.ambient.gram().mul_vec(x));
        self.a_n.class_from_pairings(&pairings)
    }

    /// Class in `A_T` of the `T`-projection of an ambient vector.
    pub fn t_class(&self, x: &[BigInt]) -> Result<DiscElement> {
        let pairings = self
            .t_part
            .basis()
            .mul_vec(&self.ambient.gram().mul_vec(x));
        self.a_t.class_from_pairings(&pairings)
    }

    /// The graph of the glue correspondence: `(class in A_N, class in A_T)`
    /// for every element of `G`.
    pub fn graph_pairs(&self, budget: u64) -> Result<Vec<(DiscElement, DiscElement)>> {
        self.coset_reps(budget)?
            .iter()
            .map(|r| Ok((self.n_class(r)?, self.t_class(r)?)))
            .collect()
    }

    /// Both projections of `G` into the discriminant groups are injective.
    pub fn injectivity_holds(&self, budget: u64) -> Result<bool> {
        use std::collections::HashSet;
        let pairs = self.graph_pairs(budget)?;
        let n_side: HashSet<_> = pairs.iter().map(|(a, _)| a.clone()).collect();
        let t_side: HashSet<_> = pairs.iter().map(|(_, b)| b.clone()).collect();
        Ok(n_side.len() == pairs.len() && t_side.len() == pairs.len())
    }

    /// For a unimodular ambient lattice the glue projections are bijections
    /// onto the full discriminant groups; verify that. Errors with
    /// [`Error::NotUnimodular`] when the ambient lattice is not unimodular.
    pub fn unimodular_iso_holds(&self, budget: u64) -> Result<bool> {
        if !self.ambient.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        Ok(self.injectivity_holds(budget)?
            && self.order == *self.a_n.order()
            && self.order == *self.a_t.order())
    }

    /// The glue correspondence reverses the quadratic form:
    /// `q_N(pi_N x) + q_T(pi_T x) = 0 mod 2Z` for every class.
    pub fn anti_isometry_holds(&self, budget: u64) -> Result<bool> {
        for (a, b) in self.graph_pairs(budget)? {
            let total = self.a_n.q(&a) + self.a_t.q(&b);
            if !is_integral_multiple_of_two(&total) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of the ambient basis inside `N* (+) T*`: row `i` is the
    /// pair of projections of the `i`-th ambient basis vector, written in
    /// the `N` and `T` bases.
    pub fn embedding_in_duals(&self) -> Result<RatMatrix> {
        let n = self.ambient.rank();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            let mut row = self.project_n(&e)?;
            row.extend(self.project_t(&e)?);
            rows.push(row);
        }
        RatMatrix::from_rows(rows)
    }
}

fn project_coords(part: &Sublattice, x: &[BigInt]) -> Result<RatVec> {
    if part.rank() == 0 {
        return Ok(Vec::new());
    }
    let pairings = part.basis().mul_vec(&part.ambient().gram().mul_vec(x));
    solve_unique(&part.induced_gram(), &pairings)
}

fn is_integral_multiple_of_two(r: &BigRational) -> bool {
    r.is_integer() && r.to_integer().is_even()
}

/// An even overlattice assembled from two pieces and glue data.
pub struct Overlattice {
    lattice: Lattice,
    /// Rows: basis of the overlattice in `N (+) T` rational coordinates.
    embedding: RatMatrix,
    glue_order: BigInt,
}

impl Overlattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn embedding(&self) -> &RatMatrix {
        &self.embedding
    }

    pub fn glue_order(&self) -> &BigInt {
        &self.glue_order
    }
}

/// Build the even overlattice of `N (+) T` determined by glue pairs.
///
/// Each pair `(a, b)` declares that the discriminant classes `a` (of `N`)
/// and `b` (of `T`) are identified in the overlattice. The subgroup the
/// pairs generate inside `A_N x A_T` must be the graph of an injective
/// correspondence in both directions and isotropic for `q_N (+) q_T`;
/// violations surface as [`Error::BadGlue`].
pub fn overlattice_from_glue(
    n: &Lattice,
    t: &Lattice,
    pairs: &[(DiscElement, DiscElement)],
    budget: u64,
) -> Result<Overlattice> {
    use std::collections::{HashMap, HashSet, VecDeque};

    let a_n = n.discriminant_group();
    let a_t = t.discriminant_group();

    // Close the pairs under addition and validate as we go.
    let zero = (a_n.zero(), a_t.zero());
    let mut group: HashSet<(DiscElement, DiscElement)> = HashSet::new();
    group.insert(zero.clone());
    let mut queue: VecDeque<(DiscElement, DiscElement)> = VecDeque::new();
    queue.push_back(zero);
    for (a, b) in pairs {
        if a.coords().len() != a_n.cyclic_rank() || b.coords().len() != a_t.cyclic_rank() {
            return Err(Error::BadGlue("glue class has wrong coordinate shape".into()));
        }
        let p = (a.clone(), b.clone());
        if group.insert(p.clone()) {
            queue.push_back(p);
        }
    }
    while let Some(cur) = queue.pop_front() {
        if group.len() as u64 > budget {
            return Err(Error::Budget(format!(
                "glue closure exceeds budget {budget}"
            )));
        }
        for (a, b) in pairs {
            let next = (a_n.add(&cur.0, a), a_t.add(&cur.1, b));
            if group.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }

    // Graph: each side determines the other.
    let mut left: HashMap<DiscElement, DiscElement> = HashMap::new();
    let mut right: HashMap<DiscElement, DiscElement> = HashMap::new();
    for (a, b) in &group {
        if let Some(prev) = left.insert(a.clone(), b.clone()) {
            if &prev != b {
                return Err(Error::BadGlue(
                    "projection to the first discriminant group is not injective".into(),
                ));
            }
        }
        if let Some(prev) = right.insert(b.clone(), a.clone()) {
            if &prev != a {
                return Err(Error::BadGlue(
                    "projection to the second discriminant group is not injective".into(),
                ));
            }
        }
    }

    // Isotropy: the summed quadratic form vanishes on the whole group.
    for (a, b) in &group {
        let total = a_n.q(a) + a_t.q(b);
        if !is_integral_multiple_of_two(&total) {
            return Err(Error::BadGlue(format!(
                "glue classes are not isotropic: q_N + q_T = {total}"
            )));
        }
    }

    // Assemble the overlattice inside (N (+) T) (x) Q: spanned by N (+) T
    // and one dual lift per glue pair.
    let rank = n.rank() + t.rank();
    let mut gen_rows: Vec<RatVec> = Vec::new();
    for i in 0..rank {
        let mut row = vec![BigRational::zero(); rank];
        row[i] = BigRational::one();
        gen_rows.push(row);
    }
    for (a, b) in &group {
        let mut row = a_n.dual_rep(a);
        row.extend(a_t.dual_rep(b));
        gen_rows.push(row);
    }
    let gens = RatMatrix::from_rows(gen_rows)?;
    let scale = gens.denominator_lcm();
    let scaled = gens.scaled_int(&scale)?;
    let reduced = hnf(&scaled);
    if reduced.rows() != rank {
        return Err(Error::Internal("overlattice lost rank".into()));
    }
    let mut emb_rows = Vec::with_capacity(rank);
    for i in 0..rank {
        emb_rows.push(
            reduced
                .row(i)
                .iter()
                .map(|x| BigRational::new(x.clone(), scale.clone()))
                .collect::<RatVec>(),
        );
    }
    let embedding = RatMatrix::from_rows(emb_rows)?;

    // Gram of the overlattice; glue validity makes it integral and even.
    let ambient_gram = n.gram().block_diag(t.gram()).to_rat();
    let gram_rat = embedding.mul(&ambient_gram).mul(&embedding.transpose());
    let gram = gram_rat
        .to_int()
        .map_err(|_| Error::Internal("glued form is not integral".into()))?;
    let lattice = match Lattice::new(gram) {
        Ok(l) => l,
        Err(e) => return Err(Error::Internal(format!("glued form is not an even lattice: {e}"))),
    };

    Ok(Overlattice {
        lattice,
        embedding,
        glue_order: BigInt::from(group.len() as u64),
    })
}

/// If two full-rank row bases written in the same rational coordinates span
/// the same lattice, return the unimodular change of basis `M` with
/// `M * r2 = r1`; otherwise `None`.
pub fn basis_change_witness(r1: &RatMatrix, r2: &RatMatrix) -> Result<Option<IntMatrix>> {
    if r1.rows() != r2.rows() || r1.cols() != r2.cols() {
        return Ok(None);
    }
    let m = r1.mul(&r2.inverse()?);
    if !m.is_integral() {
        return Ok(None);
    }
    let mi = m.to_int()?;
    if crate::linalg::det_exact(&mi)?.abs().is_one() {
        Ok(Some(mi))
    } else {
        Ok(None)
    }
}
