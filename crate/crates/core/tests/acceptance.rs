//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//!
//! Lines are written straight to stdout so they show up without
//! `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use alr_core::almost::{almost_centraliser_module, almost_centraliser_ring, almost_contained};
use alr_core::catalog;
use alr_core::cohom::{classical_h, h0, h1, H1Verdict};
use alr_core::error::AlgebraError;
use alr_core::fgab::{index, int_vector, saturation, smith_normal_form, FGGroup, Index, Subgroup, Vector};
use alr_core::frame::{PrimeField, Rationals};
use alr_core::liering::{
    center, centraliser_over, is_rationally_nilpotent, is_subring, lower_central_series, normaliser,
    LieModule, LieRing,
};
use alr_core::matrix::Matrix;
use alr_core::oracle::{self, Query, QueryResult};
use alr_core::phom::{class_of, PartialHom};
use alr_core::seq::{
    delta1_properties, delta1_with_preimage, five_term, nested_quotient_centralisers, res_image_central,
    res_injective, six_term, verify_exactness, ShortExactSeq,
};
use alr_core::{Int, IntMatrix};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: alr_core::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Vector {
    (0..n).map(|_| Int::from(rng.gen_range(-b..=b))).collect()
}

fn random_subgroup(rng: &mut ChaCha8Rng, g: &FGGroup, max_gens: usize, b: i64) -> Subgroup {
    let k = rng.gen_range(0..=max_gens);
    let gens: Vec<Vector> = (0..k).map(|_| random_vector(rng, g.ambient_rank(), b)).collect();
    g.subgroup_of(&gens).unwrap()
}

// ---------------------------------------------------------------------
// 1. class-group laws

fn random_carrier(rng: &mut ChaCha8Rng, max_rank: usize) -> FGGroup {
    let n = rng.gen_range(1..=max_rank);
    let orders: Vec<i64> = (0..n)
        .map(|_| if rng.gen_bool(0.7) { 0 } else { rng.gen_range(2..=6) })
        .collect();
    FGGroup::cyclic(&orders)
}

/// A partial homomorphism from a free source with a random finite-index
/// lower-triangular domain.
fn random_partial(rng: &mut ChaCha8Rng, src: &FGGroup, tgt: &FGGroup) -> PartialHom {
    let n = src.ambient_rank();
    let mut gens = Vec::new();
    for i in 0..n {
        let mut v = vec![Int::zero(); n];
        v[i] = Int::from(rng.gen_range(1..=4));
        for x in v.iter_mut().skip(i + 1) {
            *x = Int::from(rng.gen_range(-2..=2));
        }
        gens.push(v);
    }
    let dom = src.subgroup_of(&gens).unwrap();
    let k = tgt.ambient_rank();
    let vals: Vec<Vector> = dom.generator_columns().iter().map(|_| random_vector(rng, k, 5)).collect();
    PartialHom::new(&dom, tgt, Matrix::from_columns(k, &vals)).unwrap()
}

fn class_group_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1A55);
    let mut shrinkage = 0;
    let triples = 240;
    for t in 0..triples {
        let src = FGGroup::free(rng.gen_range(1..=3));
        let tgt = random_carrier(&mut rng, 4);
        let f = random_partial(&mut rng, &src, &tgt);
        let g = random_partial(&mut rng, &src, &tgt);
        let h = random_partial(&mut rng, &src, &tgt);
        let zero = PartialHom::zero(&src, &tgt);
        let add = |a: &PartialHom, b: &PartialHom| a.add(b).map_err(|e| format!("triple {t}: {e}"));
        let (cf, cg, ch) = (class_of(&f), class_of(&g), class_of(&h));
        ensure(class_of(&add(&add(&f, &g)?, &h)?) == class_of(&add(&f, &add(&g, &h)?)?), || {
            format!("triple {t}: associativity")
        })?;
        ensure(class_of(&add(&f, &g)?) == class_of(&add(&g, &f)?), || format!("triple {t}: commutativity"))?;
        ensure(class_of(&add(&f, &zero)?) == cf, || format!("triple {t}: identity"))?;
        let cancel = add(&f, &f.negate())?;
        ensure(class_of(&cancel).is_zero(), || format!("triple {t}: inverse"))?;
        ensure(class_of(&add(&f, &g)?) == ok(cf.add(&cg), "class add")?, || {
            format!("triple {t}: class of a sum")
        })?;
        ensure(ok(ok(cf.add(&cg), "add")?.add(&ch), "add")? == ok(cf.add(&ok(cg.add(&ch), "add")?), "add")?, || {
            format!("triple {t}: class associativity")
        })?;
        ensure(ok(alr_core::phom::equivalent(&f, &f), "equivalent")?, || format!("triple {t}: reflexivity"))?;
        if !f.domain().is_whole() {
            ensure(!cancel.same_map(&zero), || format!("triple {t}: f+(-f) equals the zero map"))?;
            shrinkage += 1;
        }
    }
    ensure(shrinkage > 0, || "no domain shrinkage observed".into())?;
    Ok(format!("{triples} triples, {shrinkage} with f+(-f) != 0 as maps"))
}

// ---------------------------------------------------------------------
// 2. Heisenberg pipeline

fn heisenberg_pipeline() -> Outcome {
    let adj = catalog::adjoint(&catalog::heisenberg());
    let d = ok(h1(&adj), "h1")?;
    ensure((d.r, d.t, d.rational_dim) == (6, 2, 4), || format!("h1 gave {d:?}"))?;
    ensure(d.verdict == H1Verdict::Positive(4), || format!("verdict {}", d.verdict))?;
    let o = oracle::oracle_derivations(&adj);
    ensure((o.r, o.t) == (6, 2), || format!("oracle gave ({}, {})", o.r, o.t))?;
    let classical = ok(classical_h(&Rationals, &adj, 1), "classical_h")?;
    ensure(classical == 4, || format!("classical h1 = {classical}"))?;
    let (z, _) = ok(h0(&adj), "h0")?;
    let e3 = adj.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap();
    ensure(z == e3 && z.rank() == 1, || format!("h0 = {z:?}"))?;
    Ok("(r, t) = (6, 2), rational_dim 4, oracle nullity 6, classical h1 = 4, H0 = <e3>".into())
}

// ---------------------------------------------------------------------
// 3. finite coefficients

fn finite_triviality() -> Outcome {
    let mods = catalog::finite_modules();
    for (name, m) in &mods {
        let d = ok(h1(m), name)?;
        ensure(d.verdict == H1Verdict::Trivial, || format!("{name}: {}", d.verdict))?;
    }
    Ok(format!("{} finite modules, all TRIVIAL", mods.len()))
}

// ---------------------------------------------------------------------
// 4. six-term exactness

fn six_term_exactness() -> Outcome {
    let instances = ok(catalog::submodule_instances(), "catalog")?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E7);
    let mut resolves = 0;
    for inst in &instances {
        let name = &inst.name;
        let s = ok(ShortExactSeq::from_submodule(&inst.module, &inst.submodule), name)?;
        let t = ok(six_term(&s), name)?;
        let rep = ok(verify_exactness(&t), name)?;
        ensure(rep.junctions.len() == 5 && rep.all_exact(), || format!("{name}: {rep:?}"))?;
        let d = ok(delta1_properties(&t), name)?;
        ensure(d.all(), || format!("{name}: {d:?}"))?;
        let left = s.left().carrier().ambient_rank();
        for (a2, img) in t.delta_sources.iter().zip(&t.delta_images) {
            let base = s.p().hom().solve(a2).ok_or_else(|| format!("{name}: no preimage"))?;
            for _ in 0..10 {
                let shift = s.i().apply(&random_vector(&mut rng, left, 50));
                let a: Vector = base.iter().zip(&shift).map(|(x, y)| x + y).collect();
                let alt = ok(delta1_with_preimage(&s, a2, &a), name)?;
                ensure(t.spaces[0].in_lattice(&(alt.matrix() - img.matrix())), || {
                    format!("{name}: delta1 depends on the preimage")
                })?;
                resolves += 1;
            }
        }
    }
    ensure(instances.len() >= 50, || format!("only {} instances", instances.len()))?;
    Ok(format!("{} instances, 5 junctions each, {resolves} preimage re-solves", instances.len()))
}

// ---------------------------------------------------------------------
// 5. nilpotent vanishing shadow

fn nilpotent_vanishing() -> Outcome {
    let instances = ok(catalog::submodule_instances(), "catalog")?;
    let mut checked = Vec::new();
    let mut pairs = 0;
    let mut candidates: Vec<(String, LieModule)> = catalog::modules();
    for inst in &instances {
        let (q, _) = ok(inst.module.quotient_module(&inst.submodule), &inst.name)?;
        candidates.push((format!("{} quotient", inst.name), q));
    }
    for (name, m) in &candidates {
        let ring = m.ring();
        if !ok(is_rationally_nilpotent(ring, &ring.whole()), name)? || ok(h0(m), name)?.0.rank() != 0 {
            continue;
        }
        let d = ok(h1(m), name)?;
        ensure(d.rational_dim == 0, || format!("{name}: rational_dim {}", d.rational_dim))?;
        checked.push(name.clone());
        let mut subs = vec![m.carrier().trivial(), m.carrier().whole()];
        subs.extend(instances.iter().filter(|i| i.name.starts_with(&format!("{name} <"))).map(|i| i.submodule.clone()));
        for u in &subs {
            for v in &subs {
                if !u.contains_subgroup(v).unwrap() {
                    continue;
                }
                let (module_side, _) = ok(nested_quotient_centralisers(m, u, v), name)?;
                ensure(module_side == 0, || format!("{name}: H0 of U/V has rank {module_side}"))?;
                pairs += 1;
            }
        }
    }
    for needed in ["rotation", "pair"] {
        ensure(checked.iter().any(|n| n == needed), || format!("{needed} not covered"))?;
    }
    Ok(format!("{} modules with rational_dim 0, {pairs} nested pairs", checked.len()))
}

// ---------------------------------------------------------------------
// 6. restriction and inflation

fn finite_index_subrings(r: &LieRing) -> Vec<Subgroup> {
    let n = r.generator_count();
    let g = r.carrier();
    let mut out = Vec::new();
    for k in 2..=12i64 {
        // k g
        if k.pow(n as u32) <= 12 {
            out.push(g.subgroup_of(&(0..n).map(|i| scaled_unit(g, i, k)).collect::<Vec<_>>()).unwrap());
        }
        // k e_i plus the other generators
        for i in 0..n {
            let gens: Vec<Vector> = (0..n).map(|j| if j == i { scaled_unit(g, j, k) } else { g.unit(j) }).collect();
            let h = g.subgroup_of(&gens).unwrap();
            if is_subring(r, &h).unwrap() {
                out.push(h);
            }
        }
    }
    out.dedup();
    out
}

fn scaled_unit(g: &FGGroup, i: usize, k: i64) -> Vector {
    g.unit(i).iter().map(|x| x * k).collect()
}

fn restriction_inflation() -> Outcome {
    let (mut res_checks, mut exact, mut violated) = (0, 0, 0);
    for (name, m) in catalog::modules() {
        if m.carrier().free_rank() != m.carrier().ambient_rank() || m.ring().generator_count() > 4 {
            continue;
        }
        for h in finite_index_subrings(m.ring()) {
            let idx = match index(m.ring().carrier(), &h).unwrap() {
                Index::Finite(i) => i,
                Index::Infinite => return Err(format!("{name}: infinite index")),
            };
            ensure(idx <= Int::from(12), || format!("{name}: index {idx}"))?;
            let inj = ok(res_injective(&m, &h), &name)?;
            ensure(inj.passed(), || format!("{name}: res not injective {inj:?}"))?;
            let cen = ok(res_image_central(&m, &h), &name)?;
            ensure(cen.passed(), || format!("{name}: res image not central {cen:?}"))?;
            res_checks += 1;
            match five_term(&m, &h) {
                Ok(rep) => {
                    ensure(rep.exact(), || format!("{name}: five-term not exact {rep:?}"))?;
                    exact += 1;
                }
                Err(AlgebraError::HypothesisViolated(_)) => violated += 1,
                Err(e) => return Err(format!("{name}: five-term {e}")),
            }
        }
    }
    ensure(exact > 0 && violated > 0, || format!("exact {exact}, violated {violated}"))?;
    Ok(format!(
        "{res_checks} (module, subring) pairs; five-term EXACT {exact}, HYPOTHESIS_VIOLATED {violated}"
    ))
}

// ---------------------------------------------------------------------
// 7. oracle equivalence

fn elements(r: alr_core::Result<QueryResult>) -> Result<Vec<Vector>, String> {
    match ok(r, "oracle")? {
        QueryResult::Elements(v) => Ok(v),
        other => Err(format!("unexpected {other:?}")),
    }
}

fn oracle_equivalence() -> Outcome {
    let bound = oracle::DEFAULT_BOUND;
    let (mut queries, mut cohomology, mut skipped) = (0, 0, 0);
    for (name, r) in catalog::finite_rings() {
        let g = r.carrier();
        let n = r.generator_count();
        let same = |els: &[Vector], s: &Subgroup| ok(oracle::same_elements(els, s, bound), "compare");
        let c = elements(oracle::enumerate_and_check(&r, &Query::Center, bound))?;
        ensure(same(&c, &center(&r))?, || format!("{name}: center"))?;
        queries += 1;
        for i in 0..n {
            let ei = g.subgroup_of(&[g.unit(i)]).unwrap();
            let last = g.subgroup_of(&[g.unit(n - 1)]).unwrap();
            for (x, hh) in [(&ei, &g.trivial()), (&g.whole(), &last), (&ei, &last)] {
                let q = Query::Centraliser {
                    x: x.generator_columns(),
                    h: hh.generator_columns(),
                };
                let o = elements(oracle::enumerate_and_check(&r, &q, bound))?;
                let main = match centraliser_over(&r, x, hh) {
                    Ok(s) => s,
                    Err(AlgebraError::NotASubring(_)) => continue,
                    Err(e) => return Err(format!("{name}: {e}")),
                };
                ensure(same(&o, &main)?, || format!("{name}: centraliser of e{i}"))?;
                queries += 1;
            }
            let q = Query::Normaliser { h: ei.generator_columns() };
            let o = elements(oracle::enumerate_and_check(&r, &q, bound))?;
            ensure(same(&o, &ok(normaliser(&r, &ei), "normaliser")?)?, || format!("{name}: normaliser of e{i}"))?;
            queries += 1;
        }
        let nil = match ok(oracle::enumerate_and_check(&r, &Query::Nilpotent, bound), "oracle")? {
            QueryResult::Nilpotency(v) => v,
            other => return Err(format!("unexpected {other:?}")),
        };
        ensure(nil == lower_central_series(&r).verdict, || format!("{name}: nilpotency {nil:?}"))?;
        queries += 1;

        // classical cohomology over Z/p when the carrier is elementary abelian
        let divs = g.torsion_divisors();
        let Some(p) = divs.first().and_then(|d| u64::try_from(d).ok()) else { continue };
        if divs.len() != n || divs.iter().any(|d| *d != Int::from(p)) {
            continue;
        }
        let pi = p as i64;
        let mut mods = vec![
            LieModule::trivial(&r, &FGGroup::cyclic(&[pi])),
            LieModule::trivial(&r, &FGGroup::cyclic(&[pi, pi])),
            catalog::adjoint(&r),
        ];
        if name.starts_with("h3") {
            let nat = catalog::heisenberg_natural();
            mods.push(LieModule::new(&r, &FGGroup::cyclic(&[pi; 3]), nat.action_tensor().clone()).unwrap());
        }
        for m in &mods {
            match oracle::classical_counts(m, p, bound, oracle::DEFAULT_COCHAIN_BOUND) {
                Ok(counts) => {
                    let main0 = ok(classical_h(&PrimeField(p), m, 0), "classical_h")?;
                    let main1 = ok(classical_h(&PrimeField(p), m, 1), "classical_h")?;
                    ensure((main0, main1) == (counts.h0, counts.h1), || {
                        format!("{name}: classical ({main0}, {main1}) vs enumeration {counts:?}")
                    })?;
                    cohomology += 1;
                }
                Err(AlgebraError::SizeBoundExceeded { .. }) => skipped += 1,
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
    }
    Ok(format!(
        "{queries} ring queries, {cohomology} classical H0/H1 pairs ({skipped} modules above the cochain bound)"
    ))
}

// ---------------------------------------------------------------------
// 8. symmetry of almost centralisers

fn symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5133);
    let mods = catalog::modules();
    let (mut yes, mut no) = (0, 0);
    let triples = 600;
    for t in 0..triples {
        let (name, m) = &mods[rng.gen_range(0..mods.len())];
        let g = m.ring().carrier();
        let v = m.carrier();
        let h = random_subgroup(&mut rng, g, 2, 3);
        let a = random_subgroup(&mut rng, v, 2, 3);
        let n = match t % 3 {
            0 => random_subgroup(&mut rng, v, 2, 3),
            _ => {
                // H·A, sometimes with a generator dropped
                let mut gens: Vec<Vector> = Vec::new();
                for x in h.generator_columns() {
                    for y in a.generator_columns() {
                        gens.push(m.act(&x, &y));
                    }
                }
                if t % 3 == 2 && !gens.is_empty() {
                    gens.remove(rng.gen_range(0..gens.len()));
                }
                v.subgroup_of(&gens).unwrap()
            }
        };
        let left = ok(almost_contained(&h, &ok(almost_centraliser_ring(m, &a, &n), name)?), name)?.holds;
        let right = ok(almost_contained(&a, &ok(almost_centraliser_module(m, &h, &n), name)?), name)?.holds;
        ensure(left == right, || format!("{name}: triple {t} gives {left} vs {right}"))?;
        if left {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("{triples} triples ({yes} holding, {no} failing)"))
}

// ---------------------------------------------------------------------
// 9. field derivations

fn field_derivations() -> Outcome {
    let mut cases = 0;
    for p in 2u64..=4096 {
        if !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            continue;
        }
        let mut n = 1;
        while p.pow(n as u32) <= 4096 {
            let d = ok(oracle::field_derivations(p, n), "field_derivations")?;
            ensure(d == 0, || format!("F_{p}^{n}: {d} derivations"))?;
            cases += 1;
            n += 1;
        }
    }
    Ok(format!("{cases} fields of order at most 2^12, no derivations"))
}

// ---------------------------------------------------------------------
// 10. fgab foundation

/// Determinant by cofactor expansion; the matrices here are at most 4x4.
fn det(m: &IntMatrix) -> Int {
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut total = Int::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = m.select_rows(&rows).select_columns(&cols);
        let term = &m[(0, j)] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn fgab_foundation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF6AB);
    let count = 1200;
    for t in 0..count {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = Matrix::new(r, c, random_vector(&mut rng, r * c, 9));
        let s = smith_normal_form(&m);
        ensure(s.left.matmul(&m).matmul(&s.right) == s.diagonal, || format!("matrix {t}: U M V != D"))?;
        ensure(s.left_inverse.matmul(&s.left) == Matrix::identity(r), || format!("matrix {t}: left inverse"))?;
        ensure(det(&s.left).abs().is_one() && det(&s.right).abs().is_one(), || {
            format!("matrix {t}: transforms not unimodular")
        })?;
        let d = s.divisors();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if i != j {
                    ensure(s.diagonal[(i, j)].is_zero(), || format!("matrix {t}: off-diagonal entry"))?;
                }
            }
            ensure(!d[i].is_negative(), || format!("matrix {t}: negative divisor"))?;
            if i + 1 < d.len() && !d[i].is_zero() {
                ensure((&d[i + 1] % &d[i]).is_zero(), || format!("matrix {t}: {} does not divide {}", d[i], d[i + 1]))?;
            }
            if d[i].is_zero() {
                ensure(d[i..].iter().all(Zero::is_zero), || format!("matrix {t}: zero before nonzero"))?;
            }
        }

        // tower K <= H <= G of finite index
        let g = random_carrier(&mut rng, 3);
        let n = g.ambient_rank();
        let mut hgens: Vec<Vector> = (0..n).map(|i| scaled_unit(&g, i, rng.gen_range(1..=3))).collect();
        for _ in 0..rng.gen_range(0..=2) {
            hgens.push(random_vector(&mut rng, n, 4));
        }
        let h = g.subgroup_of(&hgens).unwrap();
        let kgens: Vec<Vector> = h
            .generator_columns()
            .iter()
            .map(|x| {
                let c = rng.gen_range(1..=3);
                x.iter().map(|y| y * c).collect()
            })
            .collect();
        let k = g.subgroup_of(&kgens).unwrap();
        let (gh, hk, gk) = (index(&g, &h).unwrap(), h.index_of(&k).map_err(|e| format!("tower {t}: {e}"))?, index(&g, &k).unwrap());
        match (gh, hk, gk) {
            (Index::Finite(a), Index::Finite(b), Index::Finite(c)) => {
                ensure(a * b == c, || format!("tower {t}: index not multiplicative"))?
            }
            other => return Err(format!("tower {t}: {other:?}")),
        }
        let sat = saturation(&h);
        ensure(saturation(&sat) == sat, || format!("tower {t}: saturation not idempotent"))?;
        let sub = random_subgroup(&mut rng, &g, 2, 5);
        let ss = saturation(&sub);
        ensure(saturation(&ss) == ss && ss.contains_subgroup(&sub).unwrap(), || {
            format!("subgroup {t}: saturation")
        })?;
    }
    Ok(format!("{count} SNF checks, {count} index towers, {} saturations", 2 * count))
}

// ---------------------------------------------------------------------

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { number: 1, name: "class-group laws", limit: Duration::from_secs(5), run: class_group_laws },
        Criterion { number: 2, name: "heisenberg pipeline", limit: Duration::from_secs(1), run: heisenberg_pipeline },
        Criterion { number: 3, name: "finite-coefficient triviality", limit: Duration::from_secs(10), run: finite_triviality },
        Criterion { number: 4, name: "six-term exactness", limit: Duration::from_secs(60), run: six_term_exactness },
        Criterion { number: 5, name: "nilpotent vanishing shadow", limit: Duration::from_secs(30), run: nilpotent_vanishing },
        Criterion { number: 6, name: "restriction and inflation", limit: Duration::from_secs(30), run: restriction_inflation },
        Criterion { number: 7, name: "oracle equivalence", limit: Duration::from_secs(60), run: oracle_equivalence },
        Criterion { number: 8, name: "almost-centraliser symmetry", limit: Duration::from_secs(10), run: symmetry },
        Criterion { number: 9, name: "field derivations", limit: Duration::from_secs(10), run: field_derivations },
        Criterion { number: 10, name: "fgab foundation", limit: Duration::from_secs(10), run: fgab_foundation },
    ];
    let total = Instant::now();
    let mut failures = Vec::new();
    let mut out = std::io::stdout().lock();
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:?} limit", c.limit)),
            Err(e) => ("FAIL", e),
        };
        writeln!(
            out,
            "{status} [{:>2}] {} ({:.2}s / {}s): {detail}",
            c.number,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        )
        .unwrap();
        if status == "FAIL" {
            failures.push(c.number);
        }
    }
    let wall = total.elapsed();
    writeln!(out, "acceptance wall clock {:.2}s", wall.as_secs_f64()).unwrap();
    drop(out);
    assert!(wall <= Duration::from_secs(240), "suite exceeded 4 minutes");
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
