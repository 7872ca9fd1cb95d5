//! Coordinates on `G ⊗ F` for a presented group `G` and a coefficient
//! field `F` (the rationals, or `Z/p` for groups of exponent `p`).
//!
//! A frame is the reduced echelon basis `P` of the functionals on `Z^n`
//! that vanish on the relation lattice, so `x ↦ P x` is the projection
//! `G -> G ⊗ F`. Its pivot columns give an integral section: the unit
//! vectors `e_pivot` satisfy `P e_pivot = e_i`.

use crate::error::{AlgebraError, Result};
use crate::fgab::FGGroup;
use crate::linalg::{kernel, rref};
use crate::matrix::Matrix;
use crate::scalar::{Field, Fp};
use crate::{Int, IntMatrix, Rational};

/// A coefficient field together with the canonical map from the integers.
pub trait Coefficients: Clone + std::fmt::Debug {
    type F: Field;
    fn embed(&self, x: &Int) -> Self::F;
    /// Characteristic: 0 for `Q`.
    fn characteristic(&self) -> u64;

    fn embed_matrix(&self, m: &IntMatrix) -> Matrix<Self::F> {
        m.map(|x| self.embed(x))
    }

    fn embed_vec(&self, v: &[Int]) -> Vec<Self::F> {
        v.iter().map(|x| self.embed(x)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Coefficients for Rationals {
    type F = Rational;
    fn embed(&self, x: &Int) -> Rational {
        Rational::from_integer(x.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField(pub u64);

impl Coefficients for PrimeField {
    type F = Fp;
    fn embed(&self, x: &Int) -> Fp {
        Fp::from_bigint(x, self.0)
    }
    fn characteristic(&self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct Frame<F: Field> {
    proj: Matrix<F>,
    pivots: Vec<usize>,
    ambient: usize,
}

impl<F: Field> Frame<F> {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// `dim x ambient` projection matrix.
    pub fn projection(&self) -> &Matrix<F> {
        &self.proj
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient representative of frame basis vector `i`.
    pub fn basis_element(&self, i: usize) -> Vec<Int> {
        let mut v = vec![Int::from(0); self.ambient];
        v[self.pivots[i]] = Int::from(1);
        v
    }

    /// `ambient x dim` integral section.
    pub fn section(&self) -> IntMatrix {
        Matrix::from_fn(self.ambient, self.dim(), |i, j| {
            Int::from(i64::from(i == self.pivots[j]))
        })
    }

    pub fn project<C: Coefficients<F = F>>(&self, c: &C, x: &[Int]) -> Vec<F> {
        self.proj.mul_vec(&c.embed_vec(x))
    }
}

/// Frame of `G ⊗ Q`; always defined.
pub fn rational_frame(g: &FGGroup) -> Frame<Rational> {
    build(&Rationals, g)
}

/// Frame of `G` as an `F_p`-vector space; requires exponent `p` (or `G = 0`).
pub fn prime_frame(g: &FGGroup, p: u64) -> Result<Frame<Fp>> {
    frame(&PrimeField(p), g)
}

/// Frame for a coefficient field. Over `Q` every group qualifies; over
/// `Z/p` the group must have exponent `p`.
pub fn frame<C: Coefficients>(c: &C, g: &FGGroup) -> Result<Frame<C::F>> {
    let p = c.characteristic();
    if p != 0 {
        let p_int = Int::from(p);
        let ok = g.is_finite() && g.torsion_divisors().iter().all(|d| *d == p_int);
        if !ok {
            return Err(AlgebraError::UnsupportedCarrier(format!(
                "carrier {g:?} is not an F_{p}-vector space"
            )));
        }
    }
    Ok(build(c, g))
}

fn build<C: Coefficients>(c: &C, g: &FGGroup) -> Frame<C::F> {
    let n = g.ambient_rank();
    let rel = c.embed_matrix(g.relation_lattice());
    // functionals vanishing on the relations: kernel of rel^T
    let ann = kernel(&rel.transpose());
    let (r, pivots) = rref(&ann.transpose());
    let idx: Vec<usize> = (0..pivots.len()).collect();
    Frame {
        proj: r.select_rows(&idx),
        pivots,
        ambient: n,
    }
}
