//! Partial homomorphisms (homomorphisms defined on a finite-index
//! subgroup), the finite-image equivalence, and the class group.
//!
//! For finitely generated groups a difference has finite image exactly
//! when it vanishes after tensoring with `Q`, so each class is represented
//! by a unique rational matrix from `source ⊗ Q` to `target ⊗ Q` (target
//! torsion is invisible there), written in the rational frames of the two
//! groups.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::fgab::{integer_kernel, intersect, FGGroup, GroupHom, Index, Subgroup, Vector};
use crate::frame::{rational_frame, Frame, Rationals};
use crate::linalg::solve_right;
use crate::liering::LieModule;
use crate::matrix::Matrix;
use crate::{Int, IntMatrix, QMatrix, Rational};

#[derive(Clone, Debug)]
pub struct PartialHom {
    source: FGGroup,
    target: FGGroup,
    domain: Subgroup,
    index: Int,
    /// Column `j` is the value on domain generator `j`.
    values: IntMatrix,
}

impl PartialHom {
    pub fn new(domain: &Subgroup, target: &FGGroup, values: IntMatrix) -> Result<Self> {
        let source = domain.ambient().clone();
        let index = match domain.index_in_ambient() {
            Index::Finite(n) => n,
            Index::Infinite => return Err(AlgebraError::InfiniteIndexDomain),
        };
        let gens = domain.generators();
        if values.rows() != target.ambient_rank() || values.cols() != gens.cols() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "values must be {}x{}",
                target.ambient_rank(),
                gens.cols()
            )));
        }
        // relations among generators: kernel of [gens | source relations]
        let rels = integer_kernel(&gens.hcat(source.relation_lattice()));
        for col in rels.columns() {
            let coeffs = &col[..gens.cols()];
            let img = values.mul_vec(coeffs);
            if !target.is_zero_element(&img) {
                return Err(AlgebraError::IllDefined(format!(
                    "relation {coeffs:?} among domain generators maps to {img:?}"
                )));
            }
        }
        let values = Matrix::from_columns(
            target.ambient_rank(),
            &values.columns().iter().map(|v| target.canonical(v)).collect::<Vec<_>>(),
        );
        Ok(PartialHom {
            source,
            target: target.clone(),
            domain: domain.clone(),
            index,
            values,
        })
    }

    /// The full-domain partial homomorphism of a group homomorphism.
    pub fn from_hom(f: &GroupHom) -> Self {
        PartialHom::new(&f.source().whole(), f.target(), f.matrix().clone())
            .expect("homomorphisms are well defined")
    }

    pub fn zero(source: &FGGroup, target: &FGGroup) -> Self {
        PartialHom::from_hom(&GroupHom::zero(source, target))
    }

    pub fn source(&self) -> &FGGroup {
        &self.source
    }

    pub fn target(&self) -> &FGGroup {
        &self.target
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// `|source : domain|`.
    pub fn domain_index(&self) -> &Int {
        &self.index
    }

    pub fn values(&self) -> &IntMatrix {
        &self.values
    }

    pub fn eval(&self, x: &[Int]) -> Result<Vector> {
        let c = self.domain.coordinates(x).ok_or(AlgebraError::NotInDomain)?;
        Ok(self.target.canonical(&self.values.mul_vec(&c)))
    }

    fn check_shape(&self, other: &PartialHom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::ShapeMismatch(
                "partial homomorphisms between different groups".into(),
            ));
        }
        Ok(())
    }

    /// Restriction to a subgroup of the domain (which must have finite
    /// index in the source).
    pub fn restrict(&self, sub: &Subgroup) -> Result<PartialHom> {
        if !self.domain.contains_subgroup(sub)? {
            return Err(AlgebraError::NotInDomain);
        }
        let cols: Vec<Vector> = sub
            .generator_columns()
            .iter()
            .map(|g| self.eval(g))
            .collect::<Result<_>>()?;
        PartialHom::new(sub, &self.target, Matrix::from_columns(self.target.ambient_rank(), &cols))
    }

    /// Pointwise sum on the intersection of the domains.
    pub fn add(&self, other: &PartialHom) -> Result<PartialHom> {
        self.check_shape(other)?;
        let d = intersect(&self.domain, &other.domain)?;
        let cols: Vec<Vector> = d
            .generator_columns()
            .iter()
            .map(|g| {
                let a = self.eval(g)?;
                let b = other.eval(g)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
            })
            .collect::<Result<_>>()?;
        PartialHom::new(&d, &self.target, Matrix::from_columns(self.target.ambient_rank(), &cols))
    }

    pub fn negate(&self) -> PartialHom {
        PartialHom::new(&self.domain, &self.target, -&self.values).expect("negation is well defined")
    }

    pub fn sub(&self, other: &PartialHom) -> Result<PartialHom> {
        self.add(&other.negate())
    }

    /// Subgroup of the target generated by the values.
    pub fn image(&self) -> Subgroup {
        self.target.subgroup(self.values.clone()).expect("values are target elements")
    }

    /// `{x ∈ Dom(f) : f(x) = 0}`.
    pub fn kernel(&self) -> Subgroup {
        let s = self.values.cols();
        let k = integer_kernel(&self.values.hcat(self.target.relation_lattice()));
        let coeffs: Vec<usize> = (0..s).collect();
        let c = k.select_rows(&coeffs);
        self.source
            .subgroup(self.domain.generators().matmul(&c))
            .expect("kernel lies in the domain")
    }

    /// Same domain and same values on it.
    pub fn same_map(&self, other: &PartialHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.domain == other.domain
            && self
                .domain
                .generator_columns()
                .iter()
                .all(|g| self.eval(g).ok() == other.eval(g).ok())
    }
}

/// `f ∼ f₁`: the difference has finite image on the common domain.
pub fn equivalent(f: &PartialHom, f1: &PartialHom) -> Result<bool> {
    Ok(f.sub(f1)?.image().is_finite())
}

/// A class in `𝒫-Hom(G, A)/∼`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PHomClass {
    source: FGGroup,
    target: FGGroup,
    matrix: QMatrix,
}

impl PHomClass {
    pub fn from_matrix(source: &FGGroup, target: &FGGroup, matrix: QMatrix) -> Result<Self> {
        if matrix.rows() != target.free_rank() || matrix.cols() != source.free_rank() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "class matrix must be {}x{}",
                target.free_rank(),
                source.free_rank()
            )));
        }
        Ok(PHomClass {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    pub fn zero(source: &FGGroup, target: &FGGroup) -> Self {
        PHomClass {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.free_rank(), source.free_rank()),
        }
    }

    pub fn source(&self) -> &FGGroup {
        &self.source
    }

    pub fn target(&self) -> &FGGroup {
        &self.target
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn check_shape(&self, other: &PHomClass) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::ShapeMismatch("classes between different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &PHomClass) -> Result<PHomClass> {
        self.check_shape(other)?;
        Ok(PHomClass {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> PHomClass {
        PHomClass {
            matrix: -&self.matrix,
            ..self.clone()
        }
    }

    /// Class of `f ∘ φ` for a homomorphism `φ: G' -> G`.
    pub fn precompose(&self, phi: &GroupHom) -> Result<PHomClass> {
        if phi.target() != &self.source {
            return Err(AlgebraError::ShapeMismatch("map does not land in the source".into()));
        }
        let m = rational_matrix_of(phi);
        Ok(PHomClass {
            source: phi.source().clone(),
            target: self.target.clone(),
            matrix: self.matrix.matmul(&m),
        })
    }

    /// Class of `ψ ∘ f` for a homomorphism `ψ: A -> B`.
    pub fn postcompose(&self, psi: &GroupHom) -> Result<PHomClass> {
        if psi.source() != &self.target {
            return Err(AlgebraError::ShapeMismatch("map does not start at the target".into()));
        }
        let m = rational_matrix_of(psi);
        Ok(PHomClass {
            source: self.source.clone(),
            target: psi.target().clone(),
            matrix: m.matmul(&self.matrix),
        })
    }

    /// Value of the rational extension on a source element, in target
    /// frame coordinates.
    pub fn apply(&self, x: &[Int]) -> Vec<Rational> {
        let f = rational_frame(&self.source);
        self.matrix.mul_vec(&f.project(&Rationals, x))
    }
}

/// `P_target · φ · S_source`: a homomorphism on rational frames.
pub fn rational_matrix_of(phi: &GroupHom) -> QMatrix {
    let fs = rational_frame(phi.source());
    let ft = rational_frame(phi.target());
    let img = phi.matrix().matmul(&fs.section());
    ft.projection().matmul(&crate::linalg::to_rational(&img))
}

fn frame_image(fr: &Frame<Rational>, m: &IntMatrix) -> QMatrix {
    fr.projection().matmul(&crate::linalg::to_rational(m))
}

/// The canonical class: the unique rational extension modulo torsion.
pub fn class_of(f: &PartialHom) -> PHomClass {
    let fs = rational_frame(&f.source);
    let ft = rational_frame(&f.target);
    let x = frame_image(&fs, f.domain.generators());
    let y = frame_image(&ft, &f.values);
    let matrix = if fs.dim() == 0 {
        Matrix::zeros(ft.dim(), 0)
    } else {
        solve_right(&x, &y).expect("a finite-index domain spans the rationalisation")
    };
    PHomClass {
        source: f.source.clone(),
        target: f.target.clone(),
        matrix,
    }
}

pub fn class_add(a: &PHomClass, b: &PHomClass) -> Result<PHomClass> {
    a.add(b)
}

pub fn class_neg(a: &PHomClass) -> PHomClass {
    a.neg()
}

pub fn class_zero(source: &FGGroup, target: &FGGroup) -> PHomClass {
    PHomClass::zero(source, target)
}

/// A partial homomorphism on `N·G` realising the given class, where `N`
/// clears the denominators of the class matrix.
pub fn realize(c: &PHomClass) -> PartialHom {
    let fs = rational_frame(&c.source);
    let ft = rational_frame(&c.target);
    let n = c
        .matrix
        .entries()
        .iter()
        .fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    let src = &c.source;
    let k = src.ambient_rank();
    let gens: Vec<Vector> = (0..k)
        .map(|j| {
            let mut v = vec![Int::zero(); k];
            v[j] = n.clone();
            v
        })
        .collect();
    let domain = src.subgroup_of(&gens).expect("scaled generators");
    let section = ft.section();
    let nq = Rational::from_integer(n.clone());
    let values: Vec<Vector> = (0..k)
        .map(|j| {
            let coords = c.matrix.mul_vec(&fs.project(&Rationals, &src.unit(j)));
            let ints: Vector = coords
                .iter()
                .map(|q| {
                    let v = q.clone() * nq.clone();
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect();
            section.mul_vec(&ints)
        })
        .collect();
    PartialHom::new(
        &domain,
        &c.target,
        Matrix::from_columns(c.target.ambient_rank(), &values),
    )
    .expect("scaled realisation is well defined")
}

/// `d(a)`: the full-domain map `g ↦ g·a`.
pub fn differential(m: &LieModule, a: &[Int]) -> Result<PartialHom> {
    m.carrier().check_element(a)?;
    let ring = m.ring();
    let cols: Vec<Vector> = (0..ring.generator_count())
        .map(|i| m.act(&ring.carrier().unit(i), a))
        .collect();
    PartialHom::new(
        &ring.whole(),
        m.carrier(),
        Matrix::from_columns(m.carrier().ambient_rank(), &cols),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{int_matrix, int_vector};
    use crate::liering::{adjoint_module, LieRing};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    fn slope(a: i64, b: i64) -> PartialHom {
        let z = FGGroup::free(1);
        let dom = z.subgroup_of(&[int_vector(&[a])]).unwrap();
        PartialHom::new(&dom, &z, int_matrix(1, 1, &[b])).unwrap()
    }

    #[test]
    fn construction_errors() {
        let z2 = FGGroup::free(2);
        let line = z2.subgroup_of(&[int_vector(&[1, 0])]).unwrap();
        assert!(matches!(
            PartialHom::new(&line, &z2, int_matrix(2, 1, &[0, 0])),
            Err(AlgebraError::InfiniteIndexDomain)
        ));
        let z4 = FGGroup::cyclic(&[4]);
        let z3 = FGGroup::cyclic(&[3]);
        assert!(matches!(
            PartialHom::new(&z4.whole(), &z3, int_matrix(1, 1, &[1])),
            Err(AlgebraError::IllDefined(_))
        ));
    }

    #[test]
    fn sums_shrink_domains() {
        let f = slope(2, 3);
        let g = slope(3, 4);
        let s = f.add(&g).unwrap();
        assert_eq!(*s.domain_index(), Int::from(6));
        assert_eq!(s.eval(&int_vector(&[6])).unwrap(), int_vector(&[17]));
        assert!(!equivalent(&f, &g).unwrap());

        let z = f.add(&f.negate()).unwrap();
        assert!(!z.same_map(&PartialHom::zero(f.source(), f.target())));
        assert!(class_of(&z).is_zero());
    }

    #[test]
    fn classes_are_slopes() {
        let c = class_of(&slope(2, 3));
        assert_eq!(c.matrix()[(0, 0)], q(3, 2));
        let f = slope(2, 3);
        let r = f.restrict(&f.source().subgroup_of(&[int_vector(&[20])]).unwrap()).unwrap();
        assert!(equivalent(&f, &r).unwrap());
        assert_eq!(class_of(&realize(&c)), c);
    }

    #[test]
    fn finite_targets_have_one_class() {
        let z = FGGroup::free(1);
        let z6 = FGGroup::cyclic(&[6]);
        let f = PartialHom::new(&z.whole(), &z6, int_matrix(1, 1, &[1])).unwrap();
        assert!(class_of(&f).is_zero());
        assert!(equivalent(&f, &PartialHom::zero(&z, &z6)).unwrap());
    }

    #[test]
    fn differentials() {
        let r = LieRing::from_pairs(&FGGroup::free(3), &[(0, 1, int_vector(&[0, 0, 1]))]).unwrap();
        let adj = adjoint_module(&r).unwrap();
        let d = differential(&adj, &int_vector(&[1, 0, 0])).unwrap();
        assert_eq!(d.eval(&int_vector(&[0, 1, 0])).unwrap(), int_vector(&[0, 0, -1]));
        assert_eq!(d.eval(&int_vector(&[0, 0, 1])).unwrap(), int_vector(&[0, 0, 0]));
    }
}
