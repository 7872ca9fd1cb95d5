//! Almost cohomology in degrees 0 and 1, and the classical
//! Chevalley-Eilenberg complex over a field.
//!
//! Classes of partial homomorphisms are rational matrices (see [`phom`]),
//! so the almost-derivation identity becomes a homogeneous linear system on
//! `k' x n'` matrices. Its solution space has dimension `r`; the inner
//! classes `d(a)` span a `t`-dimensional subspace and generate the lattice
//! `Λ` that the integral H̃¹ is taken modulo.
//!
//! [`phom`]: crate::phom

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::almost::almost_centraliser_module;
use crate::error::{AlgebraError, Result};
use crate::fgab::{integer_kernel, intersect, preimage, solve_integer, Subgroup, Vector};
use crate::frame::{Coefficients, Rationals};
use crate::linalg::{kernel, rank, Subspace};
use crate::liering::{linearize_module, LinearModule};
use crate::matrix::Matrix;
use crate::phom::{class_of, differential, PHomClass, PartialHom};
use crate::scalar::Field;
use crate::{Int, IntMatrix, QMatrix, Rational};

/// `H̃⁰(𝔤, A) = C̃_A(𝔤)` and whether it is finite.
pub fn h0(m: &crate::liering::LieModule) -> Result<(Subgroup, bool)> {
    let c = almost_centraliser_module(m, &m.ring().whole(), &m.carrier().trivial())?;
    let finite = c.rank() == 0;
    Ok((c, finite))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum H1Verdict {
    Trivial,
    RationallyTrivial,
    Positive(usize),
}

impl std::fmt::Display for H1Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            H1Verdict::Trivial => write!(f, "TRIVIAL"),
            H1Verdict::RationallyTrivial => write!(f, "RATIONALLY_TRIVIAL"),
            H1Verdict::Positive(d) => write!(f, "POSITIVE({d})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Descriptor {
    pub r: usize,
    pub t: usize,
    pub rational_dim: usize,
    pub verdict: H1Verdict,
}

impl H1Descriptor {
    pub fn from_counts(r: usize, t: usize) -> Self {
        assert!(t <= r, "inner span exceeds the derivation space");
        let verdict = if r == 0 {
            H1Verdict::Trivial
        } else if r == t {
            H1Verdict::RationallyTrivial
        } else {
            H1Verdict::Positive(r - t)
        };
        H1Descriptor {
            r,
            t,
            rational_dim: r - t,
            verdict,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DerivationBasis {
    pub basis: Vec<QMatrix>,
    /// `d(a_k)` for every carrier generator `a_k`.
    pub inner_generators: Vec<QMatrix>,
}

impl DerivationBasis {
    pub fn r(&self) -> usize {
        self.basis.len()
    }

    pub fn t(&self) -> usize {
        let vs: Vec<Vec<Rational>> = self.inner_generators.iter().map(|m| m.entries().to_vec()).collect();
        match vs.first() {
            None => 0,
            Some(v) => Subspace::span(v.len(), &vs).dim(),
        }
    }
}

/// Equations `D c̄[m][l] − ρ̂_m D e_l + ρ̂_l D e_m = 0` for `m < l`, in the
/// unknowns `D[r][c]` at index `r·n' + c`.
pub fn derivation_system<F: Field>(lm: &LinearModule<F>) -> Matrix<F> {
    let n = lm.ring.dim;
    let k = lm.dim;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for m in 0..n {
        for l in m + 1..n {
            let c = &lm.ring.consts[m][l];
            for r in 0..k {
                let mut row = vec![F::zero(); k * n];
                for (col, cv) in c.iter().enumerate() {
                    row[r * n + col] = row[r * n + col].clone() + cv.clone();
                }
                for s in 0..k {
                    let a = &lm.action[m][(r, s)];
                    row[s * n + l] = row[s * n + l].clone() - a.clone();
                    let b = &lm.action[l][(r, s)];
                    row[s * n + m] = row[s * n + m].clone() + b.clone();
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(k * n, &rows)
}

/// `d(a)` in frame coordinates: column `m` is `ρ̂_m â`.
fn inner_matrix<F: Field>(lm: &LinearModule<F>, a: &[F]) -> Matrix<F> {
    let cols: Vec<Vec<F>> = (0..lm.ring.dim).map(|m| lm.action[m].mul_vec(a)).collect();
    Matrix::from_columns(lm.dim, &cols)
}

pub fn derivation_space(m: &crate::liering::LieModule) -> Result<DerivationBasis> {
    let lm = linearize_module(&Rationals, m)?;
    let (k, n) = (lm.dim, lm.ring.dim);
    let sys = derivation_system(&lm);
    let basis = if k * n == 0 {
        Vec::new()
    } else {
        kernel(&sys)
            .columns()
            .into_iter()
            .map(|v| Matrix::new(k, n, v))
            .collect()
    };
    let inner_generators = (0..m.carrier().ambient_rank())
        .map(|j| inner_matrix(&lm, &lm.frame.project(&Rationals, &m.carrier().unit(j))))
        .collect();
    Ok(DerivationBasis {
        basis,
        inner_generators,
    })
}

pub fn h1(m: &crate::liering::LieModule) -> Result<H1Descriptor> {
    let d = derivation_space(m)?;
    Ok(H1Descriptor::from_counts(d.r(), d.t()))
}

/// Rational defect `Q[x,y] − x·Qy + y·Qx` of a class at frame vectors.
pub fn defect<F: Field>(lm: &LinearModule<F>, q: &Matrix<F>, x: &[F], y: &[F]) -> Vec<F> {
    let a = q.mul_vec(&lm.ring.bracket(x, y));
    let b = lm.rho(x).mul_vec(&q.mul_vec(y));
    let c = lm.rho(y).mul_vec(&q.mul_vec(x));
    a.iter()
        .zip(&b)
        .zip(&c)
        .map(|((a, b), c)| a.clone() - b.clone() + c.clone())
        .collect()
}

fn check_class(m: &crate::liering::LieModule, c: &PHomClass) -> Result<()> {
    if c.source() != m.ring().carrier() || c.target() != m.carrier() {
        return Err(AlgebraError::ShapeMismatch(
            "class is not a map from the ring to the module".into(),
        ));
    }
    Ok(())
}

/// Whether a class satisfies the derivation identity rationally.
pub fn is_derivation_class(m: &crate::liering::LieModule, c: &PHomClass) -> Result<bool> {
    check_class(m, c)?;
    let lm = linearize_module(&Rationals, m)?;
    let sys = derivation_system(&lm);
    Ok(sys.mul_vec(c.matrix().entries()).iter().all(Zero::is_zero))
}

pub fn is_almost_derivation(m: &crate::liering::LieModule, f: &PartialHom) -> Result<bool> {
    is_derivation_class(m, &class_of(f))
}

/// `D^f_g`: the `g'` in `Dom(f) ∩ ad_g⁻¹(Dom(f))` where the derivation
/// identity holds exactly.
pub fn derivation_witness(m: &crate::liering::LieModule, f: &PartialHom, g: &[Int]) -> Result<Subgroup> {
    check_class(m, &class_of(f))?;
    let fg = f.eval(g)?;
    let ring = m.ring();
    let e = intersect(f.domain(), &preimage(&ring.ad_hom(g), f.domain())?)?;
    let values: Vec<Vector> = e
        .generator_columns()
        .iter()
        .map(|h| {
            let a = f.eval(&ring.bracket(g, h))?;
            let b = m.act(g, &f.eval(h)?);
            let c = m.act(h, &fg);
            Ok(a.iter().zip(&b).zip(&c).map(|((a, b), c)| a - b + c).collect())
        })
        .collect::<Result<_>>()?;
    let defect = PartialHom::new(&e, m.carrier(), Matrix::from_columns(m.carrier().ambient_rank(), &values))?;
    Ok(defect.kernel())
}

/// `D^f = {g ∈ Dom(f) : D^f_g ∼ 𝔤}`. Finite index of `D^f_g` is equivalent
/// to the rational defect `Δ(g, ·)` vanishing, which is linear in `g`.
pub fn derivation_domain(m: &crate::liering::LieModule, f: &PartialHom) -> Result<Subgroup> {
    let c = class_of(f);
    check_class(m, &c)?;
    let lm = linearize_module(&Rationals, m)?;
    let gens = f.domain().generator_columns();
    let n = lm.ring.dim;
    let per_gen: Vec<Vec<Rational>> = gens
        .iter()
        .map(|h| {
            let x = lm.ring.frame.project(&Rationals, h);
            (0..n)
                .flat_map(|l| defect(&lm, c.matrix(), &x, &crate::liering::unit(n, l)))
                .collect()
        })
        .collect();
    let rows = per_gen.first().map_or(0, Vec::len);
    let q = Matrix::from_columns(rows, &per_gen);
    let coeffs = integer_kernel(&clear_rows(&q));
    let ambient = m.ring().carrier();
    let cols: IntMatrix = f.domain().generators().matmul(&coeffs);
    ambient.subgroup(cols)
}

/// Scales each row by the lcm of its denominators.
pub fn clear_rows(q: &QMatrix) -> IntMatrix {
    let mut out = Matrix::zeros(q.rows(), q.cols());
    for i in 0..q.rows() {
        let l = q.row(i).iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let lq = Rational::from_integer(l);
        for j in 0..q.cols() {
            out[(i, j)] = (q[(i, j)].clone() * lq.clone()).to_integer();
        }
    }
    out
}

/// `(g·f)(g') = g·f(g') − f([g,g'])` on `Dom(f) ∩ ad_g⁻¹(Dom(f))`.
pub fn act_on_partial(m: &crate::liering::LieModule, g: &[Int], f: &PartialHom) -> Result<PartialHom> {
    m.ring().carrier().check_element(g)?;
    let ring = m.ring();
    let e = intersect(f.domain(), &preimage(&ring.ad_hom(g), f.domain())?)?;
    let values: Vec<Vector> = e
        .generator_columns()
        .iter()
        .map(|h| {
            let a = m.act(g, &f.eval(h)?);
            let b = f.eval(&ring.bracket(g, h))?;
            Ok(a.iter().zip(&b).map(|(a, b)| a - b).collect())
        })
        .collect::<Result<_>>()?;
    PartialHom::new(&e, m.carrier(), Matrix::from_columns(m.carrier().ambient_rank(), &values))
}

/// Class of `g·f`: `ρ̂(g) Q − Q ad̂(g)`.
pub fn act_on_class(g: &[Int], c: &PHomClass, m: &crate::liering::LieModule) -> Result<PHomClass> {
    check_class(m, c)?;
    m.ring().carrier().check_element(g)?;
    let lm = linearize_module(&Rationals, m)?;
    let x = lm.ring.frame.project(&Rationals, g);
    let q = c.matrix();
    let mat = &lm.rho(&x).matmul(q) - &q.matmul(&lm.ring.ad(&x));
    PHomClass::from_matrix(c.source(), c.target(), mat)
}

pub fn inner_class(m: &crate::liering::LieModule, a: &[Int]) -> Result<PHomClass> {
    Ok(class_of(&differential(m, a)?))
}

/// Whether the class lies in the rational span of the inner classes.
pub fn is_rationally_inner(m: &crate::liering::LieModule, c: &PHomClass) -> Result<bool> {
    check_class(m, c)?;
    let d = derivation_space(m)?;
    let len = c.matrix().entries().len();
    let vs: Vec<Vec<Rational>> = d.inner_generators.iter().map(|q| q.entries().to_vec()).collect();
    Ok(Subspace::span(len, &vs).contains(c.matrix().entries()))
}

/// Whether the class lies in `Λ`, the subgroup generated by the classes
/// `d(a)`; this is the zero test in the integral H̃¹.
pub fn is_inner_class(m: &crate::liering::LieModule, c: &PHomClass) -> Result<bool> {
    check_class(m, c)?;
    let d = derivation_space(m)?;
    Ok(in_integer_span(&d.inner_generators, c.matrix()))
}

/// Membership of a rational matrix in the `Z`-span of others.
pub fn in_integer_span(gens: &[QMatrix], x: &QMatrix) -> bool {
    let len = x.entries().len();
    let mut cols: Vec<Vec<Rational>> = gens.iter().map(|g| g.entries().to_vec()).collect();
    cols.push(x.entries().to_vec());
    let n = cols
        .iter()
        .flatten()
        .fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    let nq = Rational::from_integer(n);
    let mut ints: Vec<Vector> = cols
        .iter()
        .map(|c| c.iter().map(|q| (q.clone() * nq.clone()).to_integer()).collect())
        .collect();
    let b = ints.pop().expect("target column");
    if len == 0 {
        return true;
    }
    solve_integer(&Matrix::from_columns(len, &ints), &b).is_some()
}

// ---------------------------------------------------------------------
// classical complex

/// Alternating cochains on the frame basis of `𝔤 ⊗ F` with values in
/// `A ⊗ F`; a cochain of degree `i` is its list of values on increasing
/// `i`-tuples of basis indices.
#[derive(Clone, Debug)]
pub struct ClassicalComplex<F: Field> {
    module: LinearModule<F>,
    tuples: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

fn combinations(n: usize, i: usize) -> Vec<Vec<usize>> {
    if i == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in combinations(n, i - 1) {
        let start = rest.last().map_or(0, |&x| x + 1);
        for x in start..n {
            let mut t = rest.clone();
            t.push(x);
            out.push(t);
        }
    }
    out
}

/// Sorts a list of basis indices; `None` when an index repeats.
fn sort_with_sign(list: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = list.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

fn sign<F: Field>(negative: bool) -> F {
    if negative {
        -F::one()
    } else {
        F::one()
    }
}

impl<F: Field> ClassicalComplex<F> {
    pub fn new(module: LinearModule<F>) -> Self {
        ClassicalComplex {
            module,
            tuples: Vec::new(),
            lookup: Vec::new(),
        }
    }

    fn ensure(&mut self, i: usize) {
        let n = self.module.ring.dim;
        while self.tuples.len() <= i {
            let d = self.tuples.len();
            let ts = combinations(n, d);
            self.lookup.push(ts.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect());
            self.tuples.push(ts);
        }
    }

    /// Dimension of the cochain space of degree `i`.
    pub fn cochain_dim(&mut self, i: usize) -> usize {
        self.ensure(i);
        self.tuples[i].len() * self.module.dim
    }

    /// Matrix of `dⁱ`, implementing
    /// `Σ_{s<t} (−1)^{s+t−1} f([g_s,g_t], …) + Σ_j (−1)^j g_j f(…ĝ_j…)`
    /// with 1-based positions.
    pub fn differential(&mut self, i: usize) -> Matrix<F> {
        self.ensure(i + 1);
        let k = self.module.dim;
        let rows = self.tuples[i + 1].len() * k;
        let cols = self.tuples[i].len() * k;
        let mut d: Matrix<F> = Matrix::zeros(rows, cols);
        for (ti, t) in self.tuples[i + 1].iter().enumerate() {
            let len = t.len();
            for s in 0..len {
                for u in s + 1..len {
                    // (−1)^{(s+1)+(u+1)−1}
                    let neg = (s + u + 1) % 2 == 1;
                    let rest: Vec<usize> = t
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != s && p != u)
                        .map(|(_, &x)| x)
                        .collect();
                    for (c, cv) in self.module.ring.consts[t[s]][t[u]].iter().enumerate() {
                        if cv.is_zero() {
                            continue;
                        }
                        let mut list = vec![c];
                        list.extend(&rest);
                        let Some((sorted, odd)) = sort_with_sign(&list) else {
                            continue;
                        };
                        let si = self.lookup[i][&sorted];
                        let coeff = sign::<F>(neg != odd) * cv.clone();
                        for r in 0..k {
                            let (a, b) = (ti * k + r, si * k + r);
                            d[(a, b)] = d[(a, b)].clone() + coeff.clone();
                        }
                    }
                }
            }
            for j in 0..len {
                // (−1)^{j+1}
                let neg = j % 2 == 0;
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != j)
                    .map(|(_, &x)| x)
                    .collect();
                let si = self.lookup[i][&rest];
                let act = &self.module.action[t[j]];
                for r in 0..k {
                    for r2 in 0..k {
                        let v = &act[(r, r2)];
                        if v.is_zero() {
                            continue;
                        }
                        let (a, b) = (ti * k + r, si * k + r2);
                        d[(a, b)] = d[(a, b)].clone() + sign::<F>(neg) * v.clone();
                    }
                }
            }
        }
        d
    }

    pub fn apply(&mut self, i: usize, f: &[F]) -> Result<Vec<F>> {
        if f.len() != self.cochain_dim(i) {
            return Err(AlgebraError::ShapeMismatch(format!(
                "a degree-{i} cochain has {} coordinates",
                self.cochain_dim(i)
            )));
        }
        Ok(self.differential(i).mul_vec(f))
    }

    /// `dim ker dⁱ − rank dⁱ⁻¹`.
    pub fn h(&mut self, i: usize) -> usize {
        let di = self.differential(i);
        let ker = self.cochain_dim(i) - rank(&di);
        let im = if i == 0 { 0 } else { rank(&self.differential(i - 1)) };
        ker - im
    }
}

pub fn classical_complex<C: Coefficients>(c: &C, m: &crate::liering::LieModule) -> Result<ClassicalComplex<C::F>> {
    Ok(ClassicalComplex::new(linearize_module(c, m)?))
}

pub fn classical_cochain_d<C: Coefficients>(
    c: &C,
    m: &crate::liering::LieModule,
    i: usize,
    f: &[C::F],
) -> Result<Vec<C::F>> {
    classical_complex(c, m)?.apply(i, f)
}

pub fn classical_h<C: Coefficients>(c: &C, m: &crate::liering::LieModule, i: usize) -> Result<usize> {
    Ok(classical_complex(c, m)?.h(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{int_matrix, int_vector, FGGroup};
    use crate::frame::PrimeField;
    use crate::liering::{adjoint_module, LieModule, LieRing};

    fn h3() -> LieRing {
        LieRing::from_pairs(&FGGroup::free(3), &[(0, 1, int_vector(&[0, 0, 1]))]).unwrap()
    }

    fn rotation() -> LieModule {
        let r = LieRing::abelian(&FGGroup::free(1));
        LieModule::from_matrices(&r, &FGGroup::free(2), &[int_matrix(2, 2, &[0, 1, -1, 0])]).unwrap()
    }

    #[test]
    fn h0_examples() {
        let adj = adjoint_module(&h3()).unwrap();
        let (c, fin) = h0(&adj).unwrap();
        assert_eq!(c, adj.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap());
        assert!(!fin);
        assert!(h0(&rotation()).unwrap().1);
    }

    #[test]
    fn h1_examples() {
        let adj = adjoint_module(&h3()).unwrap();
        let d = h1(&adj).unwrap();
        assert_eq!((d.r, d.t, d.verdict.clone()), (6, 2, H1Verdict::Positive(4)));
        let rot = h1(&rotation()).unwrap();
        assert_eq!(rot.verdict, H1Verdict::RationallyTrivial);
        let r = LieRing::abelian(&FGGroup::free(2));
        let fin = LieModule::trivial(&r, &FGGroup::cyclic(&[6]));
        assert_eq!(h1(&fin).unwrap().verdict, H1Verdict::Trivial);
    }

    #[test]
    fn almost_derivation_examples() {
        let r = h3();
        let adj = adjoint_module(&r).unwrap();
        let d = differential(&adj, &int_vector(&[1, 0, 0])).unwrap();
        assert!(is_almost_derivation(&adj, &d).unwrap());
        let f = PartialHom::new(&r.whole(), adj.carrier(), int_matrix(3, 3, &[1, 0, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert!(!is_almost_derivation(&adj, &f).unwrap());
        let df = derivation_domain(&adj, &f).unwrap();
        assert!(!df.index_in_ambient().is_finite());
    }

    #[test]
    fn action_example() {
        let r = h3();
        let adj = adjoint_module(&r).unwrap();
        let f = PartialHom::new(&r.whole(), adj.carrier(), int_matrix(3, 3, &[0, 0, 0, 0, 1, 0, 0, 0, 0])).unwrap();
        let e1 = int_vector(&[1, 0, 0]);
        let gf = act_on_partial(&adj, &e1, &f).unwrap();
        assert_eq!(gf.eval(&int_vector(&[0, 1, 0])).unwrap(), int_vector(&[0, 0, 1]));
        assert_eq!(act_on_class(&e1, &class_of(&f), &adj).unwrap(), class_of(&gf));
    }

    #[test]
    fn action_is_almost_trivial_on_inner_witnesses() {
        let r = h3();
        let adj = adjoint_module(&r).unwrap();
        let f = differential(&adj, &int_vector(&[0, 1, 0])).unwrap();
        let df = derivation_domain(&adj, &f).unwrap();
        assert!(df.is_whole());
        for g in df.generator_columns() {
            let lhs = class_of(&act_on_partial(&adj, &g, &f).unwrap());
            let rhs = inner_class(&adj, &f.eval(&g).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(derivation_witness(&adj, &f, &g).unwrap().is_whole());
        }
    }

    #[test]
    fn classical_complex_squares_to_zero() {
        let adj = adjoint_module(&h3()).unwrap();
        let mut cx = classical_complex(&Rationals, &adj).unwrap();
        for i in 0..2 {
            let prod = cx.differential(i + 1).matmul(&cx.differential(i));
            assert!(prod.is_zero(), "d{}∘d{} ≠ 0", i + 1, i);
        }
        assert_eq!(cx.h(1), 4);
        let fin = LieModule::trivial(&LieRing::abelian(&FGGroup::cyclic(&[5])), &FGGroup::cyclic(&[5]));
        assert_eq!(classical_h(&PrimeField(5), &fin, 1).unwrap(), 1);
        let mixed = LieModule::trivial(&LieRing::abelian(&FGGroup::cyclic(&[5])), &FGGroup::cyclic(&[25]));
        assert!(classical_h(&PrimeField(5), &mixed, 1).is_err());
    }

    #[test]
    fn integral_inner_lattice() {
        let rot = rotation();
        let d = derivation_space(&rot).unwrap();
        let half = d.inner_generators[0].scale(&Rational::new(Int::from(1), Int::from(2)));
        assert!(!in_integer_span(&d.inner_generators, &half));
        assert!(in_integer_span(&d.inner_generators, &d.inner_generators[1]));
        let c = PHomClass::from_matrix(rot.ring().carrier(), rot.carrier(), half).unwrap();
        assert!(is_rationally_inner(&rot, &c).unwrap());
        assert!(!is_inner_class(&rot, &c).unwrap());
    }
}
