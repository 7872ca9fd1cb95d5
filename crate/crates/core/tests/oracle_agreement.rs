use alr_core::catalog;
use alr_core::cohom::{derivation_space, h1};
use alr_core::fgab::{int_vector, FGGroup};
use alr_core::liering::{center, LieModule};
use alr_core::oracle::{self, Claim, Query, QueryResult};

fn all_modules() -> Vec<(String, LieModule)> {
    let mut out = catalog::modules();
    out.extend(catalog::finite_modules());
    for inst in catalog::submodule_instances().unwrap() {
        let (q, _) = inst.module.quotient_module(&inst.submodule).unwrap();
        out.push((format!("{} quotient", inst.name), q));
    }
    out
}

#[test]
fn derivation_counts_agree() {
    for (name, m) in all_modules() {
        let main = derivation_space(&m).unwrap();
        let o = oracle::oracle_derivations(&m);
        assert_eq!((main.r(), main.t()), (o.r, o.t), "{name}");
        let d = h1(&m).unwrap();
        assert_eq!(d.rational_dim, o.r - o.t, "{name}");
    }
}

#[test]
fn derivation_spans_agree_on_free_carriers() {
    for (name, m) in all_modules() {
        let free = |g: &FGGroup| g.free_rank() == g.ambient_rank();
        if !free(m.carrier()) || !free(m.ring().carrier()) {
            continue;
        }
        let main = derivation_space(&m).unwrap();
        let o = oracle::oracle_derivations(&m);
        for b in &main.basis {
            assert!(oracle::in_rational_span(&o.solutions, b.entries()), "{name}: main basis outside oracle span");
        }
        for g in &main.inner_generators {
            assert!(oracle::in_rational_span(&o.inner, g.entries()), "{name}: inner generator");
        }
    }
}

#[test]
fn heisenberg_mod_three_queries() {
    let r = catalog::reduce_ring(&catalog::heisenberg(), 3).unwrap();
    let res = oracle::enumerate_and_check(&r, &Query::Center, oracle::DEFAULT_BOUND).unwrap();
    let QueryResult::Elements(els) = res else { panic!("{res:?}") };
    assert_eq!(els.len(), 3);
    assert!(oracle::same_elements(&els, &center(&r), oracle::DEFAULT_BOUND).unwrap());
}

#[test]
fn sampler_reports_are_reproducible() {
    let g = FGGroup::cyclic(&[0, 0, 6]);
    let h = g.subgroup_of(&[int_vector(&[2, 1, 0]), int_vector(&[0, 3, 1])]).unwrap();
    let k = g.subgroup_of(&[int_vector(&[4, 2, 0]), int_vector(&[0, 6, 0]), int_vector(&[0, 0, 1])]).unwrap();
    for claim in [
        Claim::AlmostContained { h: h.clone(), k: k.clone() },
        Claim::AlmostContained { h: k.clone(), k: h.clone() },
        Claim::Commensurable { h: h.clone(), k: k.clone() },
    ] {
        let a = oracle::falsification_sampler(&claim, 40, 99).unwrap();
        let b = oracle::falsification_sampler(&claim, 40, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.consistent(), "{a:?}");
        assert!(a.verdict);
    }
}
