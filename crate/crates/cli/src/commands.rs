//! Command dispatch. Every command returns one [`Report`].

use alr_core::almost::{
    almost_center, almost_centraliser_module, almost_centraliser_ring, almost_contained, almost_normaliser,
    almost_stabiliser, commensurable, is_almost_cartan, iterated_almost_centraliser, uniform_bound,
    AlmostWitness,
};
use alr_core::cohom::{classical_h, h0, h1, H1Descriptor};
use alr_core::fgab::{FGGroup, Subgroup};
use alr_core::frame::{PrimeField, Rationals};
use alr_core::liering::{
    center, centraliser_over, characteristic, is_cartan, is_subring, iterated_center, lower_central_series,
    normaliser, Characteristic, LieModule, LieRing, Nilpotency,
};
use alr_core::oracle::{self, Claim, Query, QueryResult};
use alr_core::seq::{
    cartan_supplement, delta1_properties, finite_index_isogeny, finite_quotient_embedding, five_term,
    nested_quotient_centralisers, quo_almost_central, res_image_central, res_injective, six_term,
    verify_exactness, CheckReport, CheckVerdict, ShortExactSeq,
};
use alr_core::AlgebraError;
use serde_json::{json, Map, Value};

use crate::report::{class, int, ints, subgroup, Report, Status};
use crate::workspace::{Object, Workspace};

/// Upper bound on iterated series; every series in the f.g. universe
/// stabilises well before this on desk-scale inputs.
pub const SERIES_LIMIT: usize = 64;

pub const SAMPLE_TRIALS: usize = 64;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub oracle_bound: u64,
}

/// A failure that already carries its report.
type Step<T> = std::result::Result<T, Box<Report>>;

struct Ctx<'a> {
    ws: &'a Workspace,
    command: String,
    object: Option<String>,
}

impl<'a> Ctx<'a> {
    fn usage(&self, msg: impl Into<String>) -> Box<Report> {
        Box::new(Report::usage(&self.command, self.object.as_deref(), msg))
    }

    fn algebra(&self, e: AlgebraError) -> Box<Report> {
        Box::new(Report::algebra(&self.command, self.object.as_deref(), &e))
    }

    fn lift<T>(&self, r: alr_core::Result<T>) -> Step<T> {
        r.map_err(|e| self.algebra(e))
    }

    fn report(&self, status: Status, result: Value) -> Report {
        Report::with_status(&self.command, self.object.as_deref(), status, result)
    }

    fn get(&self, name: &str) -> Step<&'a Object> {
        self.ws.get(name).ok_or_else(|| self.usage(format!("unknown object '{name}'")))
    }

    fn ring(&self, name: &str) -> Step<LieRing> {
        match self.get(name)? {
            Object::Ring(r) => Ok(r.clone()),
            Object::Module(m) => Ok(m.ring().clone()),
            o => Err(self.usage(format!("'{name}' is a {}, not a ring", o.kind()))),
        }
    }

    fn module(&self, name: &str) -> Step<LieModule> {
        match self.get(name)? {
            Object::Module(m) => Ok(m.clone()),
            o => Err(self.usage(format!("'{name}' is a {}, not a module", o.kind()))),
        }
    }

    fn sequence(&self, name: &str) -> Step<ShortExactSeq> {
        match self.get(name)? {
            Object::Sequence(s) => Ok(s.clone()),
            o => Err(self.usage(format!("'{name}' is a {}, not a sequence", o.kind()))),
        }
    }

    /// A named subgroup; the name of a group, ring or module stands for
    /// its whole carrier and `NAME:0` for the zero subgroup.
    fn subgroup(&self, name: &str) -> Step<Subgroup> {
        let (base, zero) = match name.strip_suffix(":0") {
            Some(b) => (b, true),
            None => (name, false),
        };
        let carrier: FGGroup = match self.get(base)? {
            Object::Subgroup { subgroup, .. } if !zero => return Ok(subgroup.clone()),
            Object::Group(g) => g.clone(),
            Object::Ring(r) => r.carrier().clone(),
            Object::Module(m) => m.carrier().clone(),
            o => return Err(self.usage(format!("'{base}' is a {}, not a subgroup", o.kind()))),
        };
        Ok(if zero { carrier.trivial() } else { carrier.whole() })
    }
}

fn arity(ctx: &Ctx, args: &[String], names: &[&str]) -> Step<()> {
    if args.len() != names.len() {
        return Err(ctx.usage(format!("expected arguments: {}", names.join(" "))));
    }
    Ok(())
}

fn nilpotency(n: &Nilpotency) -> Value {
    match n {
        Nilpotency::Nilpotent(c) => json!(format!("NILPOTENT({c})")),
        Nilpotency::NotNilpotent => json!("NOT_NILPOTENT"),
    }
}

fn descriptor(d: &H1Descriptor) -> Value {
    json!({ "r": d.r, "t": d.t, "rational_dim": d.rational_dim, "verdict": d.verdict.to_string() })
}

fn carrier(g: &FGGroup, names: &[String]) -> Value {
    json!({
        "generators": names,
        "free_rank": g.free_rank(),
        "torsion": ints(g.torsion_divisors()),
    })
}

/// Prime `p` when the carrier is an elementary abelian `p`-group.
fn elementary_prime(g: &FGGroup) -> Option<u64> {
    let divs = g.torsion_divisors();
    if g.free_rank() > 0 || divs.is_empty() || divs.iter().any(|d| *d != divs[0]) {
        return None;
    }
    use num_traits::ToPrimitive;
    divs[0].to_u64().filter(|&p| alr_core::scalar::is_prime(p))
}

const H1_NOTE: &str = "H~1 is the quotient of an r-dimensional rational space by the lattice of inner \
classes; it is finite exactly when r = 0. RATIONALLY_TRIVIAL means every almost derivation is \
rationally inner, the strongest triviality statement available over finitely generated carriers.";

pub fn validate(ws: &Workspace) -> Report {
    let mut counts = Map::new();
    for kind in ["group", "ring", "module", "subgroup", "map", "sequence"] {
        counts.insert(format!("{kind}s"), json!(ws.names_of_kind(kind)));
    }
    Report::ok("validate", None, json!({ "valid": true, "objects": counts }))
}

pub fn invariants(ws: &Workspace, name: &str) -> Report {
    let ctx = Ctx { ws, command: "invariants".into(), object: Some(name.into()) };
    run(&ctx, |ctx| {
        let r = ctx.ring(name)?;
        let lcs = lower_central_series(&r);
        let mut upper = Vec::new();
        let mut last: Option<Subgroup> = None;
        for n in 1..=SERIES_LIMIT {
            let z = ctx.lift(iterated_center(&r, n))?;
            let done = last.as_ref() == Some(&z);
            if !done {
                upper.push(subgroup(&z));
            }
            last = Some(z);
            if done {
                break;
            }
        }
        let mut cartan = Vec::new();
        for s in &ws.document.subgroups {
            let Object::Subgroup { subgroup: h, .. } = ctx.get(&s.name)? else { continue };
            if h.ambient() != r.carrier() {
                continue;
            }
            let sub = ctx.lift(is_subring(&r, h))?;
            cartan.push(json!({
                "subgroup": s.name,
                "subring": sub,
                "cartan": if sub { json!(ctx.lift(is_cartan(&r, h))?) } else { Value::Null },
                "almost_cartan": if sub { json!(ctx.lift(is_almost_cartan(&r, h))?) } else { Value::Null },
            }));
        }
        let names = match ws.get(name) {
            Some(Object::Ring(_)) => ws.generator_names(name).to_vec(),
            _ => Vec::new(),
        };
        Ok(ctx.report(
            Status::Ok,
            json!({
                "carrier": carrier(r.carrier(), &names),
                "characteristic": characteristic(&r).to_string(),
                "lower_central_series": {
                    "terms": lcs.terms.iter().map(subgroup).collect::<Vec<_>>(),
                    "stabilized": lcs.stabilized,
                    "rational_limit_rank": lcs.rational_limit_rank,
                    "nilpotency": nilpotency(&lcs.verdict),
                },
                "center": subgroup(&center(&r)),
                "upper_central_series": upper,
                "almost_center": subgroup(&ctx.lift(almost_center(&r))?),
                "cartan": cartan,
            }),
        ))
    })
}

pub fn almost(ws: &Workspace, query: &str, args: &[String]) -> Report {
    let ctx = Ctx { ws, command: format!("almost {query}"), object: args.first().cloned() };
    run(&ctx, |ctx| {
        let result = match query {
            "contained" => {
                arity(ctx, args, &["H", "K"])?;
                let (h, k) = (ctx.subgroup(&args[0])?, ctx.subgroup(&args[1])?);
                let v = ctx.lift(almost_contained(&h, &k))?;
                let witness = match &v.witness {
                    AlmostWitness::FiniteIndex { intersection, index } => {
                        json!({ "intersection": subgroup(intersection), "index": int(index) })
                    }
                    AlmostWitness::RankDeficit { element } => json!({ "rank_deficit": ints(element) }),
                };
                json!({ "holds": v.holds, "witness": witness })
            }
            "commensurable" => {
                arity(ctx, args, &["H", "K"])?;
                let (h, k) = (ctx.subgroup(&args[0])?, ctx.subgroup(&args[1])?);
                json!({ "holds": ctx.lift(commensurable(&h, &k))? })
            }
            "centraliser" => {
                arity(ctx, args, &["MODULE", "B", "A"])?;
                let m = ctx.module(&args[0])?;
                let (b, a) = (ctx.subgroup(&args[1])?, ctx.subgroup(&args[2])?);
                json!({ "centraliser": subgroup(&ctx.lift(almost_centraliser_ring(&m, &b, &a))?) })
            }
            "module-centraliser" => {
                arity(ctx, args, &["MODULE", "H", "A"])?;
                let m = ctx.module(&args[0])?;
                let (h, a) = (ctx.subgroup(&args[1])?, ctx.subgroup(&args[2])?);
                json!({ "centraliser": subgroup(&ctx.lift(almost_centraliser_module(&m, &h, &a))?) })
            }
            "normaliser" => {
                arity(ctx, args, &["RING", "H"])?;
                let r = ctx.ring(&args[0])?;
                let h = ctx.subgroup(&args[1])?;
                json!({ "normaliser": subgroup(&ctx.lift(almost_normaliser(&r, &h))?) })
            }
            "stabiliser" => {
                arity(ctx, args, &["MODULE", "W"])?;
                let m = ctx.module(&args[0])?;
                let w = ctx.subgroup(&args[1])?;
                json!({ "stabiliser": subgroup(&ctx.lift(almost_stabiliser(&m, &w))?) })
            }
            "center" => {
                arity(ctx, args, &["RING"])?;
                let r = ctx.ring(&args[0])?;
                json!({ "center": subgroup(&ctx.lift(almost_center(&r))?) })
            }
            "chain" => {
                arity(ctx, args, &["MODULE"])?;
                let m = ctx.module(&args[0])?;
                let c = ctx.lift(iterated_almost_centraliser(&m, SERIES_LIMIT))?;
                json!({
                    "terms": c.terms.iter().map(subgroup).collect::<Vec<_>>(),
                    "stable_at": c.stable_at,
                })
            }
            "cartan" => {
                arity(ctx, args, &["RING", "H"])?;
                let r = ctx.ring(&args[0])?;
                let h = ctx.subgroup(&args[1])?;
                json!({ "almost_cartan": ctx.lift(is_almost_cartan(&r, &h))? })
            }
            "bound" => {
                if args.is_empty() {
                    return Err(ctx.usage("expected at least one subgroup"));
                }
                let family = args.iter().map(|a| ctx.subgroup(a)).collect::<Step<Vec<_>>>()?;
                json!({ "bound": crate::report::index(&ctx.lift(uniform_bound(&family))?) })
            }
            other => return Err(ctx.usage(format!("unknown almost query '{other}'"))),
        };
        Ok(ctx.report(Status::Ok, result))
    })
}

pub fn cohomology(ws: &Workspace, name: &str) -> Report {
    let ctx = Ctx { ws, command: "cohomology".into(), object: Some(name.into()) };
    run(&ctx, |ctx| {
        let m = ctx.module(name)?;
        let (z, finite) = ctx.lift(h0(&m))?;
        let d = ctx.lift(h1(&m))?;
        let rational = json!({
            "h0": ctx.lift(classical_h(&Rationals, &m, 0))?,
            "h1": ctx.lift(classical_h(&Rationals, &m, 1))?,
        });
        let prime = match (characteristic(m.ring()), elementary_prime(m.carrier())) {
            (Characteristic::Prime(p), Some(q)) if p == q => json!({
                "p": p,
                "h0": ctx.lift(classical_h(&PrimeField(p), &m, 0))?,
                "h1": ctx.lift(classical_h(&PrimeField(p), &m, 1))?,
            }),
            _ => json!({ "skipped": "ring and module are not both elementary abelian of the same prime exponent" }),
        };
        let mut h1v = descriptor(&d);
        h1v["note"] = json!(H1_NOTE);
        Ok(ctx.report(
            Status::Ok,
            json!({
                "h0": { "subgroup": subgroup(&z), "finite": finite },
                "h1": h1v,
                "classical": { "rational": rational, "prime": prime },
            }),
        ))
    })
}

pub fn sequence(ws: &Workspace, name: &str) -> Report {
    let ctx = Ctx { ws, command: "sequence".into(), object: Some(name.into()) };
    run(&ctx, |ctx| {
        let s = ctx.sequence(name)?;
        let t = ctx.lift(six_term(&s))?;
        let ex = ctx.lift(verify_exactness(&t))?;
        let props = ctx.lift(delta1_properties(&t))?;
        let junctions: Vec<Value> = ex
            .junctions
            .iter()
            .map(|j| {
                json!({
                    "name": j.name,
                    "level": j.level.to_string(),
                    "verdict": if j.exact { "EXACT" } else { "NOT_EXACT" },
                    "sides": [j.sides.0, j.sides.1],
                    "witness": j.witness,
                })
            })
            .collect();
        let delta: Vec<Value> = t
            .delta_sources
            .iter()
            .zip(&t.delta_images)
            .map(|(a, c)| json!({ "source": ints(a), "image": class(c) }))
            .collect();
        let status = if ex.all_exact() { Status::Ok } else { Status::Fail };
        Ok(ctx.report(
            status,
            json!({
                "h0": t.h0.iter().map(subgroup).collect::<Vec<_>>(),
                "h1": t.h1.iter().map(descriptor).collect::<Vec<_>>(),
                "junctions": junctions,
                "all_exact": ex.all_exact(),
                "delta1": delta,
                "delta1_properties": {
                    "matches_pullback": props.matches_pullback,
                    "lands_in_derivations": props.lands_in_derivations,
                    "choice_independent": props.choice_independent,
                    "additive": props.additive,
                    "equivariant": props.equivariant,
                },
            }),
        ))
    })
}

fn check_report(ctx: &Ctx, rep: CheckReport) -> Report {
    let status = match rep.verdict {
        CheckVerdict::Pass => Status::Ok,
        CheckVerdict::Fail => Status::Fail,
        CheckVerdict::HypothesisViolated => Status::HypothesisViolated,
    };
    let mut facts = Map::new();
    for (k, v) in &rep.facts {
        facts.insert(k.clone(), json!(v));
    }
    ctx.report(
        status,
        json!({
            "check": rep.name,
            "verdict": rep.verdict.to_string(),
            "hypotheses": rep.hypotheses.iter().map(|(h, ok)| json!({ "statement": h, "holds": ok })).collect::<Vec<_>>(),
            "facts": facts,
            "notes": rep.notes,
        }),
    )
}

pub fn check(ws: &Workspace, check: &str, args: &[String]) -> Report {
    let ctx = Ctx { ws, command: format!("check {check}"), object: args.first().cloned() };
    run(&ctx, |ctx| {
        let module_and = |what: &str| -> Step<(LieModule, Subgroup)> {
            arity(ctx, args, &["MODULE", what])?;
            Ok((ctx.module(&args[0])?, ctx.subgroup(&args[1])?))
        };
        let rep = match check {
            "finite-index-isogeny" => {
                let (m, a) = module_and("A1")?;
                finite_index_isogeny(&m, &a)
            }
            "finite-quotient-embedding" => {
                let (m, a) = module_and("A2")?;
                finite_quotient_embedding(&m, &a)
            }
            "quo-almost-central" => {
                let (m, h) = module_and("H")?;
                quo_almost_central(&m, &h)
            }
            "res-injective" => {
                let (m, h) = module_and("H")?;
                res_injective(&m, &h)
            }
            "res-image-central" => {
                let (m, h) = module_and("H")?;
                res_image_central(&m, &h)
            }
            "cartan-supplement" => {
                arity(ctx, args, &["RING", "I", "C"])?;
                let r = ctx.ring(&args[0])?;
                cartan_supplement(&r, &ctx.subgroup(&args[1])?, &ctx.subgroup(&args[2])?)
            }
            "five-term" => {
                let (m, h) = module_and("H")?;
                let f = ctx.lift(five_term(&m, &h))?;
                let status = if f.exact() { Status::Ok } else { Status::Fail };
                return Ok(ctx.report(
                    status,
                    json!({
                        "check": "five_term",
                        "verdict": if f.exact() { "EXACT" } else { "NOT_EXACT" },
                        "h_one": subgroup(&f.h_one),
                        "centraliser": subgroup(&f.centraliser),
                        "quotient_h1": descriptor(&f.quotient_h1),
                        "h1": descriptor(&f.h1),
                        "ker_res_dim": f.ker_res_dim,
                        "inf_lands_in_derivations": f.inf_lands_in_derivations,
                        "inf_injective": f.inf_injective,
                        "im_inf_is_ker_res": f.im_inf_is_ker_res,
                    }),
                ));
            }
            "nested-quotient" => {
                arity(ctx, args, &["MODULE", "U", "V"])?;
                let m = ctx.module(&args[0])?;
                let (u, v) = (ctx.subgroup(&args[1])?, ctx.subgroup(&args[2])?);
                let (module_side, ring_side) = ctx.lift(nested_quotient_centralisers(&m, &u, &v))?;
                return Ok(ctx.report(
                    Status::Ok,
                    json!({
                        "check": "nested_quotient",
                        "module_side_rank": module_side,
                        "module_side_finite": module_side == 0,
                        "ring_side_rank": ring_side,
                        "notes": ["both the module-side and the ring-side centraliser of U/V are reported"],
                    }),
                ));
            }
            other => return Err(ctx.usage(format!("unknown check '{other}'"))),
        };
        Ok(check_report(ctx, ctx.lift(rep)?))
    })
}

fn agreement(ctx: &Ctx, agree: bool, mut result: Value) -> Report {
    result["agree"] = json!(agree);
    ctx.report(if agree { Status::Ok } else { Status::Fail }, result)
}

fn number<T: std::str::FromStr>(ctx: &Ctx, s: &str) -> Step<T> {
    s.parse().map_err(|_| ctx.usage(format!("'{s}' is not a number")))
}

pub fn oracle(ws: &Workspace, query: &str, args: &[String], opts: &Options) -> Report {
    let object = match query {
        "sample" => args.get(1).cloned(),
        "field" => None,
        _ => args.first().cloned(),
    };
    let ctx = Ctx { ws, command: format!("oracle {query}"), object };
    run(&ctx, |ctx| {
        let bound = opts.oracle_bound;
        let gens = |s: &Subgroup| s.generator_columns();
        match query {
            "enumerate" => {
                if args.len() < 2 {
                    return Err(ctx.usage("expected arguments: RING center|nilpotent|normaliser H|centraliser X H"));
                }
                let r = ctx.ring(&args[0])?;
                let (q, main) = match (args[1].as_str(), &args[2..]) {
                    ("center", []) => (Query::Center, Ok(center(&r))),
                    ("nilpotent", []) => (Query::Nilpotent, Err(lower_central_series(&r).verdict)),
                    ("normaliser", [h]) => {
                        let h = ctx.subgroup(h)?;
                        let n = ctx.lift(normaliser(&r, &h))?;
                        (Query::Normaliser { h: gens(&h) }, Ok(n))
                    }
                    ("centraliser", [x, h]) => {
                        let (x, h) = (ctx.subgroup(x)?, ctx.subgroup(h)?);
                        let c = ctx.lift(centraliser_over(&r, &x, &h))?;
                        (Query::Centraliser { x: gens(&x), h: gens(&h) }, Ok(c))
                    }
                    _ => return Err(ctx.usage("expected center, nilpotent, normaliser H or centraliser X H")),
                };
                let found = ctx.lift(oracle::enumerate_and_check(&r, &q, bound))?;
                let (agree, res) = match (found, main) {
                    (QueryResult::Elements(els), Ok(s)) => {
                        let same = ctx.lift(oracle::same_elements(&els, &s, bound))?;
                        (same, json!({ "elements": els.len(), "main": subgroup(&s) }))
                    }
                    (QueryResult::Nilpotency(n), Err(v)) => {
                        (n == v, json!({ "oracle": nilpotency(&n), "main": nilpotency(&v) }))
                    }
                    _ => return Err(ctx.algebra(AlgebraError::IllDefined("query result shape".into()))),
                };
                let mut res = res;
                res["query"] = json!(args[1]);
                res["bound"] = json!(bound);
                Ok(agreement(ctx, agree, res))
            }
            "solve" => {
                arity(ctx, args, &["MODULE"])?;
                let m = ctx.module(&args[0])?;
                let o = oracle::oracle_derivations(&m);
                let d = ctx.lift(h1(&m))?;
                let res = json!({
                    "equations": o.system.len(),
                    "unknowns": o.rows * o.cols,
                    "oracle": { "r": o.r, "t": o.t },
                    "main": descriptor(&d),
                });
                Ok(agreement(ctx, (o.r, o.t) == (d.r, d.t), res))
            }
            "classical" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(ctx.usage("expected arguments: MODULE [P]"));
                }
                let m = ctx.module(&args[0])?;
                let p = match args.get(1) {
                    Some(p) => number::<u64>(ctx, p)?,
                    None => match characteristic(m.ring()) {
                        Characteristic::Prime(p) => p,
                        _ => return Err(ctx.usage("the ring has no prime characteristic; give P")),
                    },
                };
                let c = ctx.lift(oracle::classical_counts(&m, p, bound, oracle::DEFAULT_COCHAIN_BOUND))?;
                let (h0m, h1m) = (
                    ctx.lift(classical_h(&PrimeField(p), &m, 0))?,
                    ctx.lift(classical_h(&PrimeField(p), &m, 1))?,
                );
                let res = json!({
                    "p": p,
                    "oracle": { "h0": c.h0, "h1": c.h1 },
                    "main": { "h0": h0m, "h1": h1m },
                });
                Ok(agreement(ctx, (c.h0, c.h1) == (h0m, h1m), res))
            }
            "field" => {
                if args.len() < 2 {
                    return Err(ctx.usage("expected arguments: P N [MODULUS COEFFICIENTS...]"));
                }
                let p = number::<u64>(ctx, &args[0])?;
                let n = number::<usize>(ctx, &args[1])?;
                let modulus = args[2..].iter().map(|a| number::<u64>(ctx, a)).collect::<Step<Vec<_>>>()?;
                let modulus = if modulus.is_empty() { None } else { Some(modulus.as_slice()) };
                let count = ctx.lift(oracle::field_derivations_with(p, n, modulus, bound))?;
                let res = json!({ "p": p, "n": n, "derivations": count });
                Ok(agreement(ctx, count == 0, res))
            }
            "sample" => {
                if args.len() < 3 || args.len() > 4 {
                    return Err(ctx.usage("expected arguments: contained|commensurable H K [TRIALS]"));
                }
                let (h, k) = (ctx.subgroup(&args[1])?, ctx.subgroup(&args[2])?);
                let trials = match args.get(3) {
                    Some(t) => number::<usize>(ctx, t)?,
                    None => SAMPLE_TRIALS,
                };
                let claim = match args[0].as_str() {
                    "contained" => Claim::AlmostContained { h, k },
                    "commensurable" => Claim::Commensurable { h, k },
                    other => return Err(ctx.usage(format!("unknown claim '{other}'"))),
                };
                let s = ctx.lift(oracle::falsification_sampler(&claim, trials, opts.seed))?;
                let res = json!({
                    "claim": s.claim,
                    "verdict": s.verdict,
                    "trials": s.trials,
                    "seed": s.seed,
                    "coefficient_bound": s.coefficient_bound,
                    "confirmations": s.confirmations,
                    "counterexamples": s.counterexamples,
                });
                Ok(agreement(ctx, s.consistent(), res))
            }
            other => Err(ctx.usage(format!("unknown oracle query '{other}'"))),
        }
    })
}

fn run(ctx: &Ctx, f: impl FnOnce(&Ctx) -> Step<Report>) -> Report {
    f(ctx).unwrap_or_else(|r| *r)
}

