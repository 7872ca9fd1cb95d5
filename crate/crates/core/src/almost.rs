//! Almost containment, commensurability and almost centralisers.
//!
//! For finitely generated groups, `H ∩ K` has finite index in `H` exactly
//! when `rank(H ∩ K) = rank(H)`, i.e. when `span_Q H ⊆ span_Q K`. Almost
//! centralisers are therefore integer kernels of the conditions
//! "`g·b` lies in `span_Q A`", which are saturated and contain all torsion.

use crate::error::{AlgebraError, Result};
use crate::fgab::{integer_kernel, intersect, FGGroup, Index, Subgroup, Vector};
use crate::liering::{adjoint_module, is_rationally_nilpotent, is_subring, LieModule, LieRing};
use crate::matrix::Matrix;
use crate::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlmostWitness {
    /// `H ∩ K` and its (finite) index in `H`.
    FiniteIndex { intersection: Subgroup, index: Int },
    /// An element of `H` none of whose nonzero multiples lies in `K`.
    RankDeficit { element: Vector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostVerdict {
    pub holds: bool,
    pub witness: AlmostWitness,
}

/// `H ⪅ K`: `H ∩ K` has finite index in `H`.
pub fn almost_contained(h: &Subgroup, k: &Subgroup) -> Result<AlmostVerdict> {
    let hk = intersect(h, k)?;
    if hk.rank() == h.rank() {
        let index = match h.index_of(&hk)? {
            Index::Finite(n) => n,
            Index::Infinite => unreachable!("equal ranks give finite index"),
        };
        return Ok(AlmostVerdict {
            holds: true,
            witness: AlmostWitness::FiniteIndex {
                intersection: hk,
                index,
            },
        });
    }
    // a generator of H outside span_Q(K)
    let ann = left_annihilator(k.lattice());
    let element = h
        .generator_columns()
        .into_iter()
        .find(|g| !ann.mul_vec(g).iter().all(num_traits::Zero::is_zero))
        .expect("rank deficit has a witness generator");
    Ok(AlmostVerdict {
        holds: false,
        witness: AlmostWitness::RankDeficit { element },
    })
}

/// `H ∼ K`: mutual almost containment.
pub fn commensurable(h: &Subgroup, k: &Subgroup) -> Result<bool> {
    Ok(almost_contained(h, k)?.holds && almost_contained(k, h)?.holds)
}

/// Largest `|H_i : H_i ∩ H_j|` over the family, or infinite.
pub fn uniform_bound(family: &[Subgroup]) -> Result<Index> {
    if family.is_empty() {
        return Err(AlgebraError::EmptyFamily);
    }
    let mut best = Int::from(1);
    for a in family {
        for b in family {
            let ab = intersect(a, b)?;
            match a.index_of(&ab)? {
                Index::Infinite => return Ok(Index::Infinite),
                Index::Finite(n) => {
                    if n > best {
                        best = n;
                    }
                }
            }
        }
    }
    Ok(Index::Finite(best))
}

/// Rows spanning the integer functionals vanishing on the columns of `m`.
fn left_annihilator(m: &IntMatrix) -> IntMatrix {
    integer_kernel(&m.transpose()).transpose()
}

fn check_ambient(s: &Subgroup, g: &FGGroup, what: &str) -> Result<()> {
    if s.ambient() != g {
        return Err(AlgebraError::AmbientMismatch(format!("{what} is not in the expected carrier")));
    }
    Ok(())
}

/// `C̃_𝔤(B/A) = {g : g·B ⪅ A}`.
pub fn almost_centraliser_ring(m: &LieModule, b: &Subgroup, a: &Subgroup) -> Result<Subgroup> {
    check_ambient(b, m.carrier(), "B")?;
    check_ambient(a, m.carrier(), "A")?;
    let ann = left_annihilator(a.lattice());
    let ring = m.ring();
    let n = ring.generator_count();
    // row block per generator of B: ann * rho_i * b as a function of i
    let mut rows: Vec<Vector> = Vec::new();
    for bgen in b.generator_columns() {
        let images: Vec<Vector> = (0..n)
            .map(|i| ann.mul_vec(&m.act(&ring.carrier().unit(i), &bgen)))
            .collect();
        for r in 0..ann.rows() {
            rows.push(images.iter().map(|v| v[r].clone()).collect());
        }
    }
    kernel_subgroup(ring.carrier(), n, &rows)
}

/// `C̃_V(H/A) = {v : H·v ⪅ A}`.
pub fn almost_centraliser_module(m: &LieModule, h: &Subgroup, a: &Subgroup) -> Result<Subgroup> {
    check_ambient(h, m.ring().carrier(), "H")?;
    check_ambient(a, m.carrier(), "A")?;
    let ann = left_annihilator(a.lattice());
    let k = m.carrier().ambient_rank();
    let mut rows: Vec<Vector> = Vec::new();
    for g in h.generator_columns() {
        let cond = ann.matmul(&m.rho(&g));
        for r in 0..cond.rows() {
            rows.push(cond.row_vec(r));
        }
    }
    kernel_subgroup(m.carrier(), k, &rows)
}

fn kernel_subgroup(g: &FGGroup, n: usize, rows: &[Vector]) -> Result<Subgroup> {
    if rows.is_empty() {
        return Ok(g.whole());
    }
    let cond = Matrix::from_rows(n, rows);
    g.subgroup(integer_kernel(&cond))
}

/// `Ñ_𝔤(H) = {g : [g, H] ⪅ H}`.
pub fn almost_normaliser(r: &LieRing, h: &Subgroup) -> Result<Subgroup> {
    let adj = adjoint_module(r)?;
    almost_centraliser_ring(&adj, h, h)
}

/// `{g : g·W ⪅ W}`.
pub fn almost_stabiliser(m: &LieModule, w: &Subgroup) -> Result<Subgroup> {
    almost_centraliser_ring(m, w, w)
}

/// `Z̃(𝔤)`: the almost centraliser of the adjoint module over zero.
pub fn almost_center(r: &LieRing) -> Result<Subgroup> {
    let adj = adjoint_module(r)?;
    almost_centraliser_ring(&adj, &r.whole(), &r.zero())
}

#[derive(Clone, Debug)]
pub struct AlmostChain {
    /// `C̃^1 ⊆ C̃^2 ⊆ ...`
    pub terms: Vec<Subgroup>,
    /// First `n` with `C̃^n = C̃^{n+1}`, if reached within the limit.
    pub stable_at: Option<usize>,
}

/// `C̃^1 = C̃_A(𝔤)`, `C̃^{i+1}` = preimage of `C̃_{A/C̃^i}(𝔤)`.
pub fn iterated_almost_centraliser(m: &LieModule, limit: usize) -> Result<AlmostChain> {
    let whole = m.ring().whole();
    let mut terms = Vec::new();
    let mut prev = m.carrier().trivial();
    for step in 1..=limit.max(1) {
        let next = almost_centraliser_module(m, &whole, &prev)?;
        if step > 1 && next == prev {
            return Ok(AlmostChain {
                terms,
                stable_at: Some(step - 1),
            });
        }
        terms.push(next.clone());
        prev = next;
    }
    // one extra probe to tell whether the last computed term is stable
    let probe = almost_centraliser_module(m, &whole, &prev)?;
    let stable_at = (probe == prev).then_some(terms.len());
    Ok(AlmostChain { terms, stable_at })
}

/// Almost Cartan: rationally nilpotent and of finite index in its almost
/// normaliser.
pub fn is_almost_cartan(r: &LieRing, h: &Subgroup) -> Result<bool> {
    if !is_subring(r, h)? {
        return Err(AlgebraError::NotASubring(format!("{h:?}")));
    }
    if !is_rationally_nilpotent(r, h)? {
        return Ok(false);
    }
    let n = almost_normaliser(r, h)?;
    Ok(n.rank() == h.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::int_vector;

    fn h3() -> LieRing {
        LieRing::from_pairs(&FGGroup::free(3), &[(0, 1, int_vector(&[0, 0, 1]))]).unwrap()
    }

    fn nilpotent_matrix_module() -> LieModule {
        let r = LieRing::abelian(&FGGroup::free(1));
        LieModule::from_matrices(&r, &FGGroup::free(2), &[Matrix::new(2, 2, int_vector(&[0, 1, 0, 0]))]).unwrap()
    }

    #[test]
    fn containment_examples() {
        let z = FGGroup::free(1);
        let two = z.subgroup_of(&[int_vector(&[2])]).unwrap();
        let three = z.subgroup_of(&[int_vector(&[3])]).unwrap();
        let v = almost_contained(&two, &three).unwrap();
        assert!(v.holds);
        match v.witness {
            AlmostWitness::FiniteIndex { intersection, index } => {
                assert_eq!(intersection, z.subgroup_of(&[int_vector(&[6])]).unwrap());
                assert_eq!(index, Int::from(3));
            }
            other => panic!("{other:?}"),
        }
        let z2 = FGGroup::free(2);
        let x = z2.subgroup_of(&[int_vector(&[1, 0])]).unwrap();
        let y = z2.subgroup_of(&[int_vector(&[0, 1])]).unwrap();
        assert!(!almost_contained(&x, &y).unwrap().holds);
        assert!(!commensurable(&x, &z2.whole()).unwrap());
        let t = FGGroup::cyclic(&[0, 5]);
        let fin = t.subgroup_of(&[int_vector(&[0, 1])]).unwrap();
        assert!(almost_contained(&fin, &t.trivial()).unwrap().holds);
    }

    #[test]
    fn uniform_bound_of_multiples() {
        let z = FGGroup::free(1);
        let fam: Vec<Subgroup> = (1..=5).map(|k| z.subgroup_of(&[int_vector(&[k])]).unwrap()).collect();
        assert_eq!(uniform_bound(&fam).unwrap(), Index::Finite(Int::from(5)));
        assert!(uniform_bound(&[]).is_err());
    }

    #[test]
    fn almost_centralisers() {
        let r = h3();
        let adj = adjoint_module(&r).unwrap();
        let e3 = r.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap();
        assert_eq!(almost_centraliser_ring(&adj, &r.whole(), &r.zero()).unwrap(), e3);
        assert!(almost_centraliser_module(&adj, &e3, &r.zero()).unwrap().is_whole());

        let m = nilpotent_matrix_module();
        let all = m.carrier().whole();
        assert!(almost_centraliser_ring(&m, &all, &m.carrier().trivial()).unwrap().is_trivial());
        assert_eq!(
            almost_centraliser_module(&m, &m.ring().whole(), &m.carrier().trivial()).unwrap(),
            m.carrier().subgroup_of(&[int_vector(&[1, 0])]).unwrap()
        );
    }

    #[test]
    fn almost_normaliser_examples() {
        let r = h3();
        let e1 = r.carrier().subgroup_of(&[int_vector(&[1, 0, 0])]).unwrap();
        let e13 = r
            .carrier()
            .subgroup_of(&[int_vector(&[1, 0, 0]), int_vector(&[0, 0, 1])])
            .unwrap();
        assert_eq!(almost_normaliser(&r, &e1).unwrap(), e13);
        assert!(almost_normaliser(&r, &e13).unwrap().is_whole());
        assert!(!is_almost_cartan(&r, &e13).unwrap());
        assert!(is_almost_cartan(&r, &r.whole()).unwrap());
    }

    #[test]
    fn iterated_chain_of_nilpotent_block() {
        let r = LieRing::abelian(&FGGroup::free(1));
        let n = Matrix::new(3, 3, int_vector(&[0, 1, 0, 0, 0, 1, 0, 0, 0]));
        let m = LieModule::from_matrices(&r, &FGGroup::free(3), &[n]).unwrap();
        let chain = iterated_almost_centraliser(&m, 10).unwrap();
        let ranks: Vec<usize> = chain.terms.iter().map(Subgroup::rank).collect();
        assert_eq!(ranks, vec![1, 2, 3]);
        assert_eq!(chain.stable_at, Some(3));
    }
}
