use alr_core::almost::{almost_centraliser_module, almost_centraliser_ring, almost_contained, commensurable};
use alr_core::catalog;
use alr_core::fgab::{index, intersect, saturation, smith_normal_form, sum, FGGroup, Index, Subgroup, Vector};
use alr_core::matrix::Matrix;
use alr_core::oracle::{self, Claim};
use alr_core::phom::{class_of, equivalent, PartialHom};
use alr_core::Int;
use num_traits::Zero;
use proptest::prelude::*;

fn group(orders: &[i64]) -> FGGroup {
    FGGroup::cyclic(orders)
}

fn subgroup(g: &FGGroup, gens: &[Vec<i64>]) -> Subgroup {
    let n = g.ambient_rank();
    let vs: Vec<Vector> = gens.iter().map(|v| v.iter().take(n).map(|&x| Int::from(x)).collect()).collect();
    g.subgroup_of(&vs).unwrap()
}

fn orders() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![Just(0i64), Just(0i64), 2i64..6], 1..=3)
}

fn vectors(k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..=k)
}

fn partial(src: usize, tgt: &FGGroup, diag: &[i64], vals: &[Vec<i64>]) -> PartialHom {
    let g = FGGroup::free(src);
    let gens: Vec<Vector> = (0..src)
        .map(|i| (0..src).map(|j| Int::from(if i == j { diag[i] } else { 0 })).collect())
        .collect();
    let dom = g.subgroup_of(&gens).unwrap();
    let k = tgt.ambient_rank();
    let cols: Vec<Vector> = (0..src)
        .map(|i| (0..k).map(|j| Int::from(vals[i][j % vals[i].len()])).collect())
        .collect();
    PartialHom::new(&dom, tgt, Matrix::from_columns(k, &cols)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn almost_containment_is_rank_comparison(o in orders(), a in vectors(3), b in vectors(3)) {
        let g = group(&o);
        let (h, k) = (subgroup(&g, &a), subgroup(&g, &b));
        let v = almost_contained(&h, &k).unwrap();
        prop_assert_eq!(v.holds, intersect(&h, &k).unwrap().rank() == h.rank());
        prop_assert!(almost_contained(&h, &sum(&h, &k).unwrap()).unwrap().holds);
        prop_assert!(commensurable(&h, &h).unwrap());
    }

    #[test]
    fn sampler_never_contradicts(o in orders(), a in vectors(2), b in vectors(3), seed in any::<u64>()) {
        let g = group(&o);
        let claim = Claim::AlmostContained { h: subgroup(&g, &a), k: subgroup(&g, &b) };
        let rep = oracle::falsification_sampler(&claim, 8, seed).unwrap();
        prop_assert_eq!(rep.counterexamples, 0);
    }

    #[test]
    fn index_is_multiplicative(o in orders(), a in vectors(3), scale in 1i64..4) {
        let g = group(&o);
        let n = g.ambient_rank();
        let mut gens: Vec<Vec<i64>> = (0..n).map(|i| (0..3).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
        gens.extend(a);
        let h = subgroup(&g, &gens);
        let kg: Vec<Vector> = h.generator_columns().iter().map(|x| x.iter().map(|y| y * scale).collect()).collect();
        let k = g.subgroup_of(&kg).unwrap();
        match (index(&g, &h).unwrap(), h.index_of(&k).unwrap(), index(&g, &k).unwrap()) {
            (Index::Finite(x), Index::Finite(y), Index::Finite(z)) => prop_assert_eq!(x * y, z),
            other => prop_assert!(false, "{:?}", other),
        }
        let s = saturation(&h);
        prop_assert_eq!(saturation(&s), s);
    }

    #[test]
    fn smith_diagonal_divides(rows in 1usize..4, cols in 1usize..4, entries in prop::collection::vec(-20i64..=20, 16)) {
        let m = Matrix::new(rows, cols, entries.iter().take(rows * cols).map(|&x| Int::from(x)).collect());
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.matmul(&m).matmul(&s.right), s.diagonal.clone());
        let d = s.divisors();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn classes_form_a_group(
        o in orders(),
        d1 in prop::collection::vec(1i64..4, 2), d2 in prop::collection::vec(1i64..4, 2),
        v1 in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 2),
        v2 in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 2),
    ) {
        let t = group(&o);
        let f = partial(2, &t, &d1, &v1);
        let g = partial(2, &t, &d2, &v2);
        let fg = f.add(&g).unwrap();
        prop_assert_eq!(class_of(&fg), class_of(&f).add(&class_of(&g)).unwrap());
        prop_assert_eq!(class_of(&fg), class_of(&g.add(&f).unwrap()));
        prop_assert!(class_of(&f.add(&f.negate()).unwrap()).is_zero());
        prop_assert!(equivalent(&f.add(&g).unwrap().sub(&g).unwrap(), &f).unwrap());
    }

    #[test]
    fn almost_centraliser_symmetry(pick in 0usize..100, h in vectors(2), a in vectors(2), n in vectors(2)) {
        let mods = catalog::modules();
        let m = &mods[pick % mods.len()].1;
        let hs = subgroup(m.ring().carrier(), &pad(&h, m.ring().generator_count()));
        let as_ = subgroup(m.carrier(), &pad(&a, m.carrier().ambient_rank()));
        let ns = subgroup(m.carrier(), &pad(&n, m.carrier().ambient_rank()));
        let left = almost_contained(&hs, &almost_centraliser_ring(m, &as_, &ns).unwrap()).unwrap().holds;
        let right = almost_contained(&as_, &almost_centraliser_module(m, &hs, &ns).unwrap()).unwrap().holds;
        prop_assert_eq!(left, right);
    }
}

/// Extends short vectors with a repeating pattern so they fit `n` slots.
fn pad(vs: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    vs.iter().map(|v| (0..n).map(|i| v[i % v.len()]).collect()).collect()
}
