//! Finitely generated abelian groups and their subgroups.
//!
//! A group is presented as `Z^n / L` with `L` spanned by the columns of the
//! relation matrix. A subgroup `H` is stored through its full preimage
//! lattice `H~ = span(generators) + L` in `Z^n`, kept in canonical Hermite
//! form, so subgroup equality is span equality and never generator-list
//! equality. Every lattice question (membership, index, intersection,
//! kernels) reduces to integer Hermite and Smith computations on these
//! preimage lattices.

pub mod hermite;
pub mod smith;

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::matrix::Matrix;
use crate::{Int, IntMatrix};

pub use hermite::{column_hermite, integer_kernel, lattice_basis, solve_integer, ColumnHermite};
pub use smith::{smith_normal_form, SmithForm};

/// An element of `Z^n` standing for its class in a group.
pub type Vector = Vec<Int>;

pub fn int_vector(v: &[i64]) -> Vector {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn int_matrix(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
    Matrix::new(rows, cols, int_vector(v))
}

/// Index of a subgroup: a natural number or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(Int),
    Infinite,
}

impl Index {
    pub fn is_finite(&self) -> bool {
        matches!(self, Index::Finite(_))
    }

    pub fn finite(&self) -> Option<&Int> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "INFINITE"),
        }
    }
}

struct GroupData {
    rank: usize,
    relations: IntMatrix,
    lattice: IntMatrix,
    free_rank: usize,
    divisors: Vec<Int>,
}

/// `Z^rank / (column span of relations)`. Cheap to clone.
#[derive(Clone)]
pub struct FGGroup(Arc<GroupData>);

impl FGGroup {
    pub fn new(rank: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != rank {
            return Err(AlgebraError::ShapeMismatch(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                rank
            )));
        }
        let lattice = lattice_basis(&relations);
        let snf = smith_normal_form(&lattice);
        let divs = snf.divisors();
        let divisors: Vec<Int> = divs.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
        let free_rank = rank - lattice.cols();
        Ok(FGGroup(Arc::new(GroupData {
            rank,
            relations,
            lattice,
            free_rank,
            divisors,
        })))
    }

    pub fn free(rank: usize) -> Self {
        FGGroup::new(rank, Matrix::zeros(rank, 0)).expect("free group")
    }

    /// Direct sum of cyclic groups; an order of 0 gives a copy of `Z`.
    pub fn cyclic(orders: &[i64]) -> Self {
        let n = orders.len();
        let cols: Vec<Vector> = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| {
                let mut v = vec![Int::zero(); n];
                v[i] = Int::from(o);
                v
            })
            .collect();
        FGGroup::new(n, Matrix::from_columns(n, &cols)).expect("cyclic group")
    }

    pub fn zero() -> Self {
        FGGroup::free(0)
    }

    pub fn ambient_rank(&self) -> usize {
        self.0.rank
    }

    /// Relations exactly as supplied.
    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// Canonical basis of the relation lattice.
    pub fn relation_lattice(&self) -> &IntMatrix {
        &self.0.lattice
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    /// Invariant factors `d_1 | d_2 | ...` of the torsion part (units dropped).
    pub fn torsion_divisors(&self) -> &[Int] {
        &self.0.divisors
    }

    pub fn is_finite(&self) -> bool {
        self.0.free_rank == 0
    }

    pub fn is_trivial_group(&self) -> bool {
        self.is_finite() && self.0.divisors.is_empty()
    }

    pub fn order(&self) -> Option<Int> {
        self.is_finite()
            .then(|| self.0.divisors.iter().fold(Int::one(), |a, d| a * d))
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> Int {
        self.0.divisors.last().cloned().unwrap_or_else(Int::one)
    }

    pub fn check_element(&self, x: &[Int]) -> Result<()> {
        if x.len() != self.0.rank {
            return Err(AlgebraError::InvalidElement(format!(
                "element has {} coordinates, group has {} generators",
                x.len(),
                self.0.rank
            )));
        }
        Ok(())
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        self.canonical(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[Int], y: &[Int]) -> bool {
        let d: Vector = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// Unique representative of `x + L`.
    pub fn canonical(&self, x: &[Int]) -> Vector {
        hermite::reduce_mod_lattice(&self.0.lattice, x)
    }

    pub fn unit(&self, i: usize) -> Vector {
        let mut v = vec![Int::zero(); self.0.rank];
        v[i] = Int::one();
        v
    }

    pub fn zero_element(&self) -> Vector {
        vec![Int::zero(); self.0.rank]
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new(self, Matrix::identity(self.0.rank)).expect("whole group")
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::new(self, Matrix::zeros(self.0.rank, 0)).expect("trivial subgroup")
    }

    pub fn subgroup(&self, generators: IntMatrix) -> Result<Subgroup> {
        Subgroup::new(self, generators)
    }

    pub fn subgroup_of(&self, generators: &[Vector]) -> Result<Subgroup> {
        for g in generators {
            self.check_element(g)?;
        }
        Subgroup::new(self, Matrix::from_columns(self.0.rank, generators))
    }

    /// The torsion subgroup.
    pub fn torsion(&self) -> Subgroup {
        saturation(&self.trivial())
    }

    /// Rank of the free part (= dimension after tensoring with Q).
    #[allow(clippy::misnamed_getters)]
    pub fn rank(&self) -> usize {
        self.0.free_rank
    }
}

impl PartialEq for FGGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.rank == other.0.rank && self.0.lattice == other.0.lattice)
    }
}

impl Eq for FGGroup {}

impl fmt::Debug for FGGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGGroup(Z^{}", self.0.free_rank)?;
        for d in &self.0.divisors {
            write!(f, " + Z/{d}")?;
        }
        write!(f, "; {} generators)", self.0.rank)
    }
}

/// A subgroup of an [`FGGroup`].
#[derive(Clone)]
pub struct Subgroup {
    ambient: FGGroup,
    generators: IntMatrix,
    lattice: IntMatrix,
}

impl Subgroup {
    pub fn new(ambient: &FGGroup, generators: IntMatrix) -> Result<Self> {
        if generators.rows() != ambient.ambient_rank() {
            return Err(AlgebraError::InvalidElement(format!(
                "generators have {} coordinates, group has {} generators",
                generators.rows(),
                ambient.ambient_rank()
            )));
        }
        let lattice = lattice_basis(&generators.hcat(ambient.relation_lattice()));
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators,
            lattice,
        })
    }

    fn from_lattice(ambient: &FGGroup, lattice: IntMatrix) -> Self {
        let lattice = lattice_basis(&lattice.hcat(ambient.relation_lattice()));
        Subgroup {
            ambient: ambient.clone(),
            generators: lattice.clone(),
            lattice,
        }
    }

    pub fn ambient(&self) -> &FGGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn generator_columns(&self) -> Vec<Vector> {
        self.generators.columns()
    }

    /// Canonical basis of the preimage lattice in `Z^n`.
    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    /// Rank of the subgroup (its dimension after tensoring with Q).
    pub fn rank(&self) -> usize {
        self.lattice.cols() - self.ambient.relation_lattice().cols()
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.lattice == *self.ambient.relation_lattice()
    }

    pub fn is_whole(&self) -> bool {
        self.lattice == Matrix::<Int>::identity(self.ambient.ambient_rank())
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(AlgebraError::AmbientMismatch(
                "subgroups live in different groups".into(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        solve_integer(&self.lattice, x).is_some()
    }

    /// True if `other` is a subgroup of `self`.
    pub fn contains_subgroup(&self, other: &Subgroup) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(other.lattice.columns().iter().all(|c| self.contains(c)))
    }

    /// Coefficients `c` with `generators * c = x` modulo relations.
    pub fn coordinates(&self, x: &[Int]) -> Option<Vector> {
        let k = self.generators.cols();
        let m = self.generators.hcat(self.ambient.relation_lattice());
        solve_integer(&m, x).map(|z| z[..k].to_vec())
    }

    /// `|G : H|` for the ambient group `G`.
    pub fn index_in_ambient(&self) -> Index {
        let n = self.ambient.ambient_rank();
        if self.lattice.cols() < n {
            return Index::Infinite;
        }
        Index::Finite((0..n).fold(Int::one(), |acc, j| acc * &self.lattice[(j, j)]))
    }

    /// `|self : sub|`; errors unless `sub` is contained in `self`.
    pub fn index_of(&self, sub: &Subgroup) -> Result<Index> {
        if !self.contains_subgroup(sub)? {
            return Err(AlgebraError::AmbientMismatch(
                "index requested for a non-contained subgroup".into(),
            ));
        }
        if sub.lattice.cols() < self.lattice.cols() {
            return Ok(Index::Infinite);
        }
        Ok(Index::Finite(lattice_content(&sub.lattice) / lattice_content(&self.lattice)))
    }

    /// Canonical presentation of the subgroup as a group in its own right,
    /// together with the inclusion into the ambient group.
    pub fn as_group(&self) -> Embedding {
        Embedding::new(self)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.lattice == other.lattice
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(rank {}, lattice {:?})", self.rank(), self.lattice)
    }
}

/// Product of the nonzero Smith invariants of a basis matrix: the index of
/// the lattice inside its saturation.
fn lattice_content(basis: &IntMatrix) -> Int {
    smith_normal_form(basis)
        .divisors()
        .into_iter()
        .filter(|d| !d.is_zero())
        .fold(Int::one(), |a, d| a * d)
}

pub fn index(g: &FGGroup, h: &Subgroup) -> Result<Index> {
    if h.ambient() != g {
        return Err(AlgebraError::AmbientMismatch("subgroup of another group".into()));
    }
    Ok(h.index_in_ambient())
}

/// Preimage in `G` of the torsion subgroup of `G/H`.
pub fn saturation(h: &Subgroup) -> Subgroup {
    let n = h.ambient.ambient_rank();
    let left = integer_kernel(&h.lattice.transpose());
    let sat = if left.cols() == 0 {
        Matrix::identity(n)
    } else {
        integer_kernel(&left.transpose())
    };
    Subgroup::from_lattice(&h.ambient, sat)
}

pub fn intersect(h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    h.same_ambient(k)?;
    let r = h.lattice.cols();
    let neg_k = -&k.lattice;
    let ker = integer_kernel(&h.lattice.hcat(&neg_k));
    let ys = ker.select_rows(&(0..r).collect::<Vec<_>>());
    Ok(Subgroup::from_lattice(&h.ambient, h.lattice.matmul(&ys)))
}

pub fn sum(h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    h.same_ambient(k)?;
    Ok(Subgroup::from_lattice(&h.ambient, h.lattice.hcat(&k.lattice)))
}

pub fn is_member(x: &[Int], h: &Subgroup) -> bool {
    h.contains(x)
}

pub fn torsion(g: &FGGroup) -> Subgroup {
    g.torsion()
}

/// A homomorphism of presented groups, given on source generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FGGroup,
    target: FGGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: &FGGroup, target: &FGGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank(),
                source.ambient_rank()
            )));
        }
        for rel in source.relation_lattice().columns() {
            let img = matrix.mul_vec(&rel);
            if !target.is_zero_element(&img) {
                return Err(AlgebraError::IllDefined(format!(
                    "relator {rel:?} maps to nonzero {img:?}"
                )));
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    pub fn identity(g: &FGGroup) -> Self {
        GroupHom::new(g, g, Matrix::identity(g.ambient_rank())).expect("identity")
    }

    pub fn zero(source: &FGGroup, target: &FGGroup) -> Self {
        GroupHom::new(
            source,
            target,
            Matrix::zeros(target.ambient_rank(), source.ambient_rank()),
        )
        .expect("zero map")
    }

    pub fn source(&self) -> &FGGroup {
        &self.source
    }

    pub fn target(&self) -> &FGGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vector {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(AlgebraError::ShapeMismatch("maps are not composable".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.matmul(&self.matrix),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        kernel(self)
    }

    pub fn image(&self) -> Subgroup {
        image(self)
    }

    pub fn image_of(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.ambient() != &self.source {
            return Err(AlgebraError::AmbientMismatch("subgroup not in the source".into()));
        }
        self.target.subgroup(self.matrix.matmul(h.generators()))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    /// Some `x` with `self(x) = y`, if one exists.
    pub fn solve(&self, y: &[Int]) -> Option<Vector> {
        let n = self.source.ambient_rank();
        let m = self.matrix.hcat(self.target.relation_lattice());
        solve_integer(&m, y).map(|z| z[..n].to_vec())
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?})", self.matrix)
    }
}

pub fn kernel(f: &GroupHom) -> Subgroup {
    let n = f.source.ambient_rank();
    let ker = integer_kernel(&f.matrix.hcat(f.target.relation_lattice()));
    let xs = ker.select_rows(&(0..n).collect::<Vec<_>>());
    Subgroup::from_lattice(&f.source, xs)
}

pub fn image(f: &GroupHom) -> Subgroup {
    Subgroup::new(&f.target, f.matrix.clone()).expect("image")
}

pub fn preimage(f: &GroupHom, w: &Subgroup) -> Result<Subgroup> {
    if w.ambient() != &f.target {
        return Err(AlgebraError::AmbientMismatch("subgroup not in the target".into()));
    }
    let n = f.source.ambient_rank();
    let ker = integer_kernel(&f.matrix.hcat(&w.lattice));
    let xs = ker.select_rows(&(0..n).collect::<Vec<_>>());
    Ok(Subgroup::from_lattice(&f.source, xs))
}

/// Reduced presentation of `Z^rank / span(relations)` obtained from the
/// Smith form: coordinates with unit invariant factor are dropped.
///
/// Returns the group, the projection `Z^rank -> new coordinates` and a
/// section (new generators written in old coordinates).
pub fn reduced_presentation(rank: usize, relations: &IntMatrix) -> (FGGroup, IntMatrix, IntMatrix) {
    assert_eq!(relations.rows(), rank);
    let snf = smith_normal_form(relations);
    let divs = snf.divisors();
    let r = divs.iter().filter(|d| !d.is_zero()).count();
    let kept: Vec<usize> = (0..rank).filter(|&i| i >= r || !divs[i].is_one()).collect();
    let proj = snf.left.select_rows(&kept);
    let section = snf.left_inverse.select_columns(&kept);
    let orders: Vec<Vector> = kept
        .iter()
        .enumerate()
        .filter(|(_, &i)| i < r)
        .map(|(new, &i)| {
            let mut v = vec![Int::zero(); kept.len()];
            v[new] = divs[i].abs();
            v
        })
        .collect();
    let group = FGGroup::new(kept.len(), Matrix::from_columns(kept.len(), &orders))
        .expect("reduced presentation");
    (group, proj, section)
}

/// `G/H` with its projection and a set-theoretic section of generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FGGroup,
    pub projection: GroupHom,
    /// Column `j` is a lift to `G` of generator `j` of the quotient.
    pub section: IntMatrix,
}

pub fn quotient(g: &FGGroup, h: &Subgroup) -> Result<Quotient> {
    if h.ambient() != g {
        return Err(AlgebraError::AmbientMismatch("subgroup of another group".into()));
    }
    let (group, proj, section) = reduced_presentation(g.ambient_rank(), h.lattice());
    let projection = GroupHom::new(g, &group, proj)?;
    Ok(Quotient {
        group,
        projection,
        section,
    })
}

/// A subgroup presented as a group, with inclusion and coordinate maps.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub group: FGGroup,
    pub inclusion: GroupHom,
    subgroup: Subgroup,
    basis_form: ColumnHermite<Int>,
    projection: IntMatrix,
}

impl Embedding {
    fn new(h: &Subgroup) -> Self {
        let basis = h.lattice().clone();
        let hf = column_hermite(&basis);
        let rels = h.ambient().relation_lattice();
        let coords: Vec<Vector> = rels
            .columns()
            .iter()
            .map(|c| hermite::solve_with(&hf, c).expect("relations lie in the subgroup lattice"))
            .collect();
        let c = Matrix::from_columns(basis.cols(), &coords);
        let (group, projection, section) = reduced_presentation(basis.cols(), &c);
        let inclusion = GroupHom::new(&group, h.ambient(), basis.matmul(&section))
            .expect("inclusion is well defined");
        Embedding {
            group,
            inclusion,
            subgroup: h.clone(),
            basis_form: hf,
            projection,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Coordinates in the embedded group of an ambient element of the
    /// subgroup.
    pub fn coordinates(&self, x: &[Int]) -> Option<Vector> {
        hermite::solve_with(&self.basis_form, x).map(|c| self.projection.mul_vec(&c))
    }
}

/// `|x|` as a u64 when small; used in reports.
pub fn small(x: &Int) -> Option<u64> {
    use num_traits::ToPrimitive;
    x.to_u64()
}

/// gcd of a list of integers (0 for an empty list).
pub fn gcd_all(xs: &[Int]) -> Int {
    xs.iter().fold(Int::zero(), |a, b| a.gcd(b))
}
