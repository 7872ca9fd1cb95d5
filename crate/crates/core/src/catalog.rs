//! Small named rings, modules and sequences used by tests, the acceptance
//! suite and the CLI.

use crate::error::Result;
use crate::fgab::{int_matrix, int_vector, FGGroup, Subgroup, Vector};
use crate::liering::{adjoint_module, direct_sum, LieModule, LieRing};
use crate::IntMatrix;

/// `⟨e₁,e₂,e₃ | [e₁,e₂] = e₃⟩`.
pub fn heisenberg() -> LieRing {
    LieRing::from_pairs(&FGGroup::free(3), &[(0, 1, int_vector(&[0, 0, 1]))]).expect("h3")
}

pub fn abelian(n: usize) -> LieRing {
    LieRing::abelian(&FGGroup::free(n))
}

/// Filiform ring of rank 4: `[e₁,e₂] = e₃`, `[e₁,e₃] = e₄`.
pub fn filiform4() -> LieRing {
    LieRing::from_pairs(
        &FGGroup::free(4),
        &[(0, 1, int_vector(&[0, 0, 1, 0])), (0, 2, int_vector(&[0, 0, 0, 1]))],
    )
    .expect("filiform")
}

/// Upper-triangular 3x3 matrices spanned by `d = diag(1,0,-1)`, `E12`,
/// `E23`, `E13`.
pub fn upper_triangular4() -> LieRing {
    LieRing::from_pairs(
        &FGGroup::free(4),
        &[
            (0, 1, int_vector(&[0, 1, 0, 0])),
            (0, 2, int_vector(&[0, 0, 1, 0])),
            (0, 3, int_vector(&[0, 0, 0, 2])),
            (1, 2, int_vector(&[0, 0, 0, 1])),
        ],
    )
    .expect("upper triangular")
}

/// `⟨a,b | [a,b] = 2b⟩`, not nilpotent.
pub fn two_b() -> LieRing {
    LieRing::from_pairs(&FGGroup::free(2), &[(0, 1, int_vector(&[0, 2]))]).expect("two_b")
}

/// Same structure constants on `(ℤ/p)^n`.
pub fn reduce_ring(r: &LieRing, p: i64) -> Result<LieRing> {
    let n = r.generator_count();
    LieRing::new(&FGGroup::cyclic(&vec![p; n]), r.bracket_tensor().clone())
}

/// Same action on `(ℤ/p)^k`, over the same ring.
pub fn reduce_module(m: &LieModule, p: i64) -> Result<LieModule> {
    let k = m.carrier().ambient_rank();
    LieModule::new(m.ring(), &FGGroup::cyclic(&vec![p; k]), m.action_tensor().clone())
}

fn matrices_module(ring: &LieRing, k: usize, ms: &[IntMatrix]) -> LieModule {
    LieModule::from_matrices(ring, &FGGroup::free(k), ms).expect("catalog module")
}

/// `ℤ` acting on `ℤ²` by a quarter turn.
pub fn rotation() -> LieModule {
    matrices_module(&abelian(1), 2, &[int_matrix(2, 2, &[0, 1, -1, 0])])
}

/// `ℤ` acting on `ℤ²` by a nilpotent Jordan block.
pub fn nilpotent_matrix() -> LieModule {
    matrices_module(&abelian(1), 2, &[int_matrix(2, 2, &[0, 1, 0, 0])])
}

/// `ℤ²` acting on `ℤ²` by the commuting pair `R` and `R + 1`.
pub fn commuting_pair() -> LieModule {
    matrices_module(
        &abelian(2),
        2,
        &[int_matrix(2, 2, &[0, 1, -1, 0]), int_matrix(2, 2, &[1, 1, -1, 1])],
    )
}

/// Strictly upper-triangular 3x3 matrices acting on column vectors.
pub fn heisenberg_natural() -> LieModule {
    matrices_module(
        &heisenberg(),
        3,
        &[
            int_matrix(3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0]),
            int_matrix(3, 3, &[0, 0, 0, 0, 0, 1, 0, 0, 0]),
            int_matrix(3, 3, &[0, 0, 1, 0, 0, 0, 0, 0, 0]),
        ],
    )
}

pub fn upper_triangular_natural() -> LieModule {
    matrices_module(
        &upper_triangular4(),
        3,
        &[
            int_matrix(3, 3, &[1, 0, 0, 0, 0, 0, 0, 0, -1]),
            int_matrix(3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0]),
            int_matrix(3, 3, &[0, 0, 0, 0, 0, 1, 0, 0, 0]),
            int_matrix(3, 3, &[0, 0, 1, 0, 0, 0, 0, 0, 0]),
        ],
    )
}

pub fn adjoint(r: &LieRing) -> LieModule {
    adjoint_module(r).expect("adjoint")
}

/// The infinite rings of the catalog.
pub fn rings() -> Vec<(String, LieRing)> {
    vec![
        ("h3".into(), heisenberg()),
        ("abelian1".into(), abelian(1)),
        ("abelian2".into(), abelian(2)),
        ("filiform4".into(), filiform4()),
        ("upper4".into(), upper_triangular4()),
        ("two_b".into(), two_b()),
    ]
}

/// Finite rings of at most `3⁵` elements.
pub fn finite_rings() -> Vec<(String, LieRing)> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        out.push((format!("h3 mod {p}"), reduce_ring(&heisenberg(), p).expect("h3 mod p")));
    }
    for p in [2, 3] {
        out.push((format!("filiform4 mod {p}"), reduce_ring(&filiform4(), p).expect("filiform mod p")));
    }
    out.push(("upper4 mod 3".into(), reduce_ring(&upper_triangular4(), 3).expect("upper mod 3")));
    for p in [3, 5, 7] {
        out.push((format!("two_b mod {p}"), reduce_ring(&two_b(), p).expect("two_b mod p")));
    }
    out.push(("abelian (Z/2)^2".into(), LieRing::abelian(&FGGroup::cyclic(&[2, 2]))));
    out.push(("abelian (Z/3)^3".into(), LieRing::abelian(&FGGroup::cyclic(&[3, 3, 3]))));
    out.push(("abelian Z/4+Z/2".into(), LieRing::abelian(&FGGroup::cyclic(&[4, 2]))));
    out.push(("abelian Z/9".into(), LieRing::abelian(&FGGroup::cyclic(&[9]))));
    out
}

/// Finite modules of order at most `10³` over every catalog ring.
pub fn finite_modules() -> Vec<(String, LieModule)> {
    let mut out = Vec::new();
    let trivial_carriers: [&[i64]; 4] = [&[2], &[6], &[3, 3], &[4, 10]];
    for (name, r) in rings().into_iter().chain(finite_rings()) {
        for c in trivial_carriers {
            out.push((format!("{name} trivial {c:?}"), LieModule::trivial(&r, &FGGroup::cyclic(c))));
        }
        let n = r.generator_count() as u32;
        if r.carrier().is_finite() {
            if r.carrier().order().map(|o| o <= crate::Int::from(1000)).unwrap_or(false) {
                out.push((format!("{name} adjoint"), adjoint(&r)));
            }
            continue;
        }
        let adj = adjoint(&r);
        for p in [2i64, 3, 5, 7, 11, 31] {
            if p.pow(n) <= 1000 {
                out.push((format!("{name} adjoint mod {p}"), reduce_module(&adj, p).expect("adjoint mod p")));
            }
        }
    }
    for (name, m) in [("rotation", rotation()), ("nilpotent", nilpotent_matrix()), ("pair", commuting_pair())] {
        for p in [2, 3, 5, 31] {
            out.push((format!("{name} mod {p}"), reduce_module(&m, p).expect("module mod p")));
        }
    }
    for p in [2, 3, 7] {
        out.push((format!("h3 natural mod {p}"), reduce_module(&heisenberg_natural(), p).expect("natural mod p")));
    }
    out
}

/// Infinite modules over rationally nilpotent or arbitrary catalog rings.
pub fn modules() -> Vec<(String, LieModule)> {
    let a1 = abelian(1);
    let a2 = abelian(2);
    let m = |r: &LieRing, k: usize, v: &[&[i64]]| {
        let ms: Vec<IntMatrix> = v.iter().map(|e| int_matrix(k, k, e)).collect();
        matrices_module(r, k, &ms)
    };
    let shift3: &[i64] = &[0, 1, 0, 0, 0, 1, 0, 0, 0];
    let shift3_sq: &[i64] = &[0, 0, 1, 0, 0, 0, 0, 0, 0];
    let mut out = vec![
        ("rotation".to_string(), rotation()),
        ("nilpotent".into(), nilpotent_matrix()),
        ("pair".into(), commuting_pair()),
        ("unipotent".into(), m(&a1, 2, &[&[1, 1, 0, 1]])),
        ("diag12".into(), m(&a1, 2, &[&[1, 0, 0, 2]])),
        ("shift3".into(), m(&a1, 3, &[shift3])),
        ("jordan3".into(), m(&a1, 3, &[&[2, 1, 0, 0, 2, 0, 0, 0, 3]])),
        ("shift3 pair".into(), m(&a2, 3, &[shift3, shift3_sq])),
        ("diag pair".into(), m(&a2, 3, &[&[1, 0, 0, 0, 2, 0, 0, 0, 3], &[2, 0, 0, 0, 0, 0, 0, 0, 1]])),
        ("trivial Z2 over abelian1".into(), LieModule::trivial(&a1, &FGGroup::free(2))),
        ("h3 adjoint".into(), adjoint(&heisenberg())),
        ("h3 natural".into(), heisenberg_natural()),
        ("upper4 adjoint".into(), adjoint(&upper_triangular4())),
        ("upper4 natural".into(), upper_triangular_natural()),
        ("filiform4 adjoint".into(), adjoint(&filiform4())),
        ("two_b adjoint".into(), adjoint(&two_b())),
    ];
    let h3 = adjoint(&heisenberg());
    let center = heisenberg().carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).expect("center");
    out.push(("h3 adjoint / center".into(), h3.quotient_module(&center).expect("quotient").0));
    out.push((
        "rotation + nilpotent".into(),
        direct_sum(&rotation(), &nilpotent_matrix()).expect("sum"),
    ));
    out.push(("h3 adjoint + natural".into(), direct_sum(&h3, &heisenberg_natural()).expect("sum")));
    out.push((
        "shift3 + trivial".into(),
        direct_sum(&m(&a1, 3, &[shift3]), &LieModule::trivial(&a1, &FGGroup::free(1))).expect("sum"),
    ));
    out.push(("h3 adjoint mod 3".into(), reduce_module(&h3, 3).expect("h3 mod 3")));
    out
}

/// Smallest submodule containing the given elements.
pub fn closure(m: &LieModule, seeds: &[Vector]) -> Result<Subgroup> {
    let n = m.ring().generator_count();
    let mut gens: Vec<Vector> = seeds.to_vec();
    let mut current = m.carrier().subgroup_of(&gens)?;
    loop {
        let mut next_gens = gens.clone();
        for g in &gens {
            for i in 0..n {
                next_gens.push(m.act(&m.ring().carrier().unit(i), g));
            }
        }
        let next = m.carrier().subgroup_of(&next_gens)?;
        if next == current {
            return Ok(current);
        }
        gens = next.generator_columns();
        current = next;
    }
}

#[derive(Clone, Debug)]
pub struct SubmoduleInstance {
    pub name: String,
    pub module: LieModule,
    pub submodule: Subgroup,
}

/// Proper nonzero submodules generated by small seed vectors (and their
/// doubles), over every module of [`modules`].
pub fn submodule_instances() -> Result<Vec<SubmoduleInstance>> {
    let mut out = Vec::new();
    for (name, m) in modules() {
        let k = m.carrier().ambient_rank();
        let mut seeds: Vec<Vector> = (0..k).map(|i| m.carrier().unit(i)).collect();
        seeds.push(vec![crate::Int::from(1); k]);
        seeds.push((1..=k as i64).map(crate::Int::from).collect());
        let mut seen: Vec<Subgroup> = Vec::new();
        for s in &seeds {
            for scale in [1, 2] {
                let v: Vector = s.iter().map(|x| x * scale).collect();
                let w = closure(&m, &[v])?;
                if w.is_trivial() || w.is_whole() || seen.contains(&w) {
                    continue;
                }
                seen.push(w.clone());
                out.push(SubmoduleInstance {
                    name: format!("{name} <{}>", fmt_vec(s, scale)),
                    module: m.clone(),
                    submodule: w,
                });
            }
        }
    }
    Ok(out)
}

fn fmt_vec(v: &[crate::Int], scale: i64) -> String {
    let body: Vec<String> = v.iter().map(|x| (x * scale).to_string()).collect();
    body.join(",")
}
