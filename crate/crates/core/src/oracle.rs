//! Independent checkers.
//!
//! Exhaustive enumeration on finite rings, a fraction-free rational
//! solver, derivations of finite fields and a random falsification
//! sampler. Everything here reads raw structure constants and does its own
//! elimination; nothing calls the lattice or linear algebra code used by
//! the solvers it is meant to check.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::almost::{almost_contained, AlmostWitness};
use crate::error::{AlgebraError, Result};
use crate::fgab::{FGGroup, Subgroup};
use crate::liering::{LieModule, LieRing, Nilpotency};
use crate::phom::{equivalent, PartialHom};
use crate::Int;

/// Default cap on carrier sizes for enumeration.
pub const DEFAULT_BOUND: u64 = 10_000;
/// Default cap on the number of 1-cochains enumerated for `H¹`.
pub const DEFAULT_COCHAIN_BOUND: u64 = 1 << 20;
/// Bracket and addition tables are stored up to this many elements.
const TABLE_LIMIT: usize = 1024;

fn small(x: &Int) -> i128 {
    x.to_i128().expect("oracle inputs fit in i128")
}

// ---------------------------------------------------------------------
// finite carriers

/// `ℤ^n / L` as a product of cyclic groups, via a diagonal form `U R V`
/// found by naive row and column reduction.
#[derive(Clone, Debug)]
struct Cyclic {
    n: usize,
    moduli: Vec<i128>,
    rows: Vec<usize>,
    u: Vec<Vec<i128>>,
    uinv: Vec<Vec<i128>>,
}

impl Cyclic {
    /// `None` when the group is infinite.
    fn of(g: &FGGroup) -> Option<Cyclic> {
        let n = g.ambient_rank();
        let rel = g.relations();
        let m = rel.cols();
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..m).map(|j| small(&rel[(i, j)])).collect()).collect();
        let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        let mut uinv = u.clone();
        let mut diag = vec![0i128; n];
        for t in 0..n.min(m) {
            loop {
                // smallest nonzero entry of the remaining block
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..m {
                        if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                a.swap(t, bi);
                u.swap(t, bi);
                for row in uinv.iter_mut() {
                    row.swap(t, bi);
                }
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                let piv = a[t][t];
                let mut clean = true;
                for i in t + 1..n {
                    let q = a[i][t] / piv;
                    if q != 0 {
                        for j in 0..m {
                            a[i][j] -= q * a[t][j];
                        }
                        for j in 0..n {
                            u[i][j] -= q * u[t][j];
                        }
                        for row in uinv.iter_mut() {
                            row[t] += q * row[i];
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..m {
                    let q = a[t][j] / piv;
                    if q != 0 {
                        for row in a.iter_mut() {
                            row[j] -= q * row[t];
                        }
                    }
                    clean &= a[t][j] == 0;
                }
                if clean {
                    break;
                }
            }
            diag[t] = a[t][t].abs();
        }
        if diag.contains(&0) {
            return None;
        }
        let rows: Vec<usize> = (0..n).filter(|&i| diag[i] > 1).collect();
        Some(Cyclic {
            n,
            moduli: rows.iter().map(|&i| diag[i]).collect(),
            rows,
            u,
            uinv,
        })
    }

    fn size(&self) -> u128 {
        self.moduli.iter().map(|&d| d as u128).product()
    }

    fn encode(&self, x: &[i128]) -> Vec<i128> {
        self.rows
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &d)| {
                let y: i128 = self.u[r].iter().zip(x).map(|(a, b)| a * b).sum();
                y.rem_euclid(d)
            })
            .collect()
    }

    fn decode(&self, t: &[i128]) -> Vec<i128> {
        let mut y = vec![0i128; self.n];
        for (&r, &v) in self.rows.iter().zip(t) {
            y[r] = v;
        }
        (0..self.n)
            .map(|i| self.uinv[i].iter().zip(&y).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn index(&self, t: &[i128]) -> usize {
        t.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&v, &d)| acc * d as usize + v as usize)
    }

    fn tuple(&self, mut idx: usize) -> Vec<i128> {
        let mut t = vec![0i128; self.moduli.len()];
        for (slot, &d) in t.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % d as usize) as i128;
            idx /= d as usize;
        }
        t
    }
}

fn bilinear(t: &[Vec<Vec<Int>>], x: &[i128], y: &[i128], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj == 0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&t[i][j]) {
                *o += xi * yj * small(c);
            }
        }
    }
    out
}

/// The elements of a finite Lie ring with its addition and bracket.
#[derive(Clone, Debug)]
pub struct FiniteRingTable {
    cyclic: Cyclic,
    tensor: Vec<Vec<Vec<Int>>>,
    size: usize,
    add: Vec<u32>,
    bracket: Vec<u32>,
}

impl FiniteRingTable {
    pub fn new(r: &LieRing, bound: u64) -> Result<Self> {
        let cyclic = carrier_of(r.carrier(), bound)?;
        let size = cyclic.size() as usize;
        let mut t = FiniteRingTable {
            cyclic,
            tensor: r.bracket_tensor().clone(),
            size,
            add: Vec::new(),
            bracket: Vec::new(),
        };
        if size <= TABLE_LIMIT {
            let mut add = Vec::with_capacity(size * size);
            let mut br = Vec::with_capacity(size * size);
            for x in 0..size {
                for y in 0..size {
                    add.push(t.add_direct(x, y) as u32);
                    br.push(t.bracket_direct(x, y) as u32);
                }
            }
            t.add = add;
            t.bracket = br;
        }
        Ok(t)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn moduli(&self) -> Vec<i128> {
        self.cyclic.moduli.clone()
    }

    /// Index of the element represented by an ambient vector.
    pub fn element(&self, x: &[Int]) -> usize {
        let v: Vec<i128> = x.iter().map(small).collect();
        self.cyclic.index(&self.cyclic.encode(&v))
    }

    /// An ambient representative of an element.
    pub fn ambient(&self, idx: usize) -> Vec<Int> {
        self.cyclic.decode(&self.cyclic.tuple(idx)).into_iter().map(Int::from).collect()
    }

    fn add_direct(&self, x: usize, y: usize) -> usize {
        let a = self.cyclic.tuple(x);
        let b = self.cyclic.tuple(y);
        let s: Vec<i128> = a
            .iter()
            .zip(&b)
            .zip(&self.cyclic.moduli)
            .map(|((p, q), d)| (p + q) % d)
            .collect();
        self.cyclic.index(&s)
    }

    fn bracket_direct(&self, x: usize, y: usize) -> usize {
        let a = self.cyclic.decode(&self.cyclic.tuple(x));
        let b = self.cyclic.decode(&self.cyclic.tuple(y));
        let c = bilinear(&self.tensor, &a, &b, self.cyclic.n);
        self.cyclic.index(&self.cyclic.encode(&c))
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        if self.add.is_empty() {
            self.add_direct(x, y)
        } else {
            self.add[x * self.size + y] as usize
        }
    }

    pub fn bracket(&self, x: usize, y: usize) -> usize {
        if self.bracket.is_empty() {
            self.bracket_direct(x, y)
        } else {
            self.bracket[x * self.size + y] as usize
        }
    }

    /// All elements of the subgroup generated by the given elements.
    pub fn span(&self, gens: &[usize]) -> HashSet<usize> {
        let mut seen: HashSet<usize> = HashSet::from([0]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    /// `{g : [g, g'] = 0 for all g'}`.
    pub fn center(&self) -> HashSet<usize> {
        (0..self.size)
            .filter(|&g| (0..self.size).all(|h| self.bracket(g, h) == 0))
            .collect()
    }

    /// `{g : [x, g] ∈ H for all x ∈ X}`.
    pub fn centraliser(&self, x: &[usize], h: &[usize]) -> HashSet<usize> {
        let xs = self.span(x);
        let hs = self.span(h);
        (0..self.size)
            .filter(|&g| xs.iter().all(|&a| hs.contains(&self.bracket(a, g))))
            .collect()
    }

    /// `{g : [g, H] ⊆ H}`.
    pub fn normaliser(&self, h: &[usize]) -> HashSet<usize> {
        let hs = self.span(h);
        (0..self.size)
            .filter(|&g| hs.iter().all(|&a| hs.contains(&self.bracket(g, a))))
            .collect()
    }

    /// Lower central series by bracket chains; the class is the number of
    /// nonzero terms.
    pub fn nilpotency(&self) -> Nilpotency {
        let mut term: HashSet<usize> = (0..self.size).collect();
        let mut class = 0;
        loop {
            if term.len() == 1 {
                return Nilpotency::Nilpotent(class);
            }
            class += 1;
            let mut gens: Vec<usize> = Vec::new();
            for x in 0..self.size {
                for &t in &term {
                    let b = self.bracket(x, t);
                    if b != 0 {
                        gens.push(b);
                    }
                }
            }
            gens.sort_unstable();
            gens.dedup();
            let next = self.span(&gens);
            if next == term {
                return Nilpotency::NotNilpotent;
            }
            term = next;
        }
    }
}

fn carrier_of(g: &FGGroup, bound: u64) -> Result<Cyclic> {
    let c = Cyclic::of(g).ok_or_else(|| AlgebraError::SizeBoundExceeded {
        size: "infinite".into(),
        bound,
    })?;
    if c.size() > bound as u128 {
        return Err(AlgebraError::SizeBoundExceeded {
            size: c.size().to_string(),
            bound,
        });
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub enum Query {
    Center,
    Centraliser { x: Vec<Vec<Int>>, h: Vec<Vec<Int>> },
    Normaliser { h: Vec<Vec<Int>> },
    Nilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryResult {
    Elements(Vec<Vec<Int>>),
    Nilpotency(Nilpotency),
}

/// Answers a query by exhaustive search over the finite carrier of `r`.
/// Element answers are listed by canonical ambient representatives.
pub fn enumerate_and_check(r: &LieRing, query: &Query, bound: u64) -> Result<QueryResult> {
    let t = FiniteRingTable::new(r, bound)?;
    let idx = |vs: &[Vec<Int>]| vs.iter().map(|v| t.element(v)).collect::<Vec<_>>();
    let set = match query {
        Query::Center => t.center(),
        Query::Centraliser { x, h } => t.centraliser(&idx(x), &idx(h)),
        Query::Normaliser { h } => t.normaliser(&idx(h)),
        Query::Nilpotent => return Ok(QueryResult::Nilpotency(t.nilpotency())),
    };
    let mut ids: Vec<usize> = set.into_iter().collect();
    ids.sort_unstable();
    Ok(QueryResult::Elements(ids.iter().map(|&i| t.ambient(i)).collect()))
}

/// Whether the element list is exactly the subgroup `s`.
pub fn same_elements(elements: &[Vec<Int>], s: &Subgroup, bound: u64) -> Result<bool> {
    let c = carrier_of(s.ambient(), bound)?;
    let key = |v: &[Int]| c.index(&c.encode(&v.iter().map(small).collect::<Vec<_>>()));
    let set: HashSet<usize> = elements.iter().map(|v| key(v)).collect();
    if !elements.iter().all(|v| s.contains(v)) {
        return Ok(false);
    }
    // the list is closed under addition, so containing the generators of
    // `s` makes it all of `s`
    Ok(s.generator_columns().iter().all(|g| set.contains(&key(g))))
}

/// `dim H⁰` and `dim H¹` of a module over `ℤ/p`, counted by enumerating
/// invariants, 1-cocycles and 1-coboundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalCounts {
    pub h0: usize,
    pub h1: usize,
}

pub fn classical_counts(m: &LieModule, p: u64, bound: u64, cochain_bound: u64) -> Result<ClassicalCounts> {
    let g = carrier_of(m.ring().carrier(), bound)?;
    let a = carrier_of(m.carrier(), bound)?;
    let pi = p as i128;
    if g.moduli.iter().chain(&a.moduli).any(|&d| d != pi) {
        return Err(AlgebraError::UnsupportedCarrier(format!("carriers must be elementary abelian of exponent {p}")));
    }
    let tensor = m.action_tensor();
    let na = a.size() as usize;
    let ng = g.size() as usize;
    let act = |gi: &[i128], ai: &[i128]| -> Vec<i128> {
        let x = bilinear(tensor, &g.decode(gi), &a.decode(ai), a.n);
        a.encode(&x)
    };
    let h0 = (0..na)
        .filter(|&x| {
            let ax = a.tuple(x);
            (0..ng).all(|y| act(&g.tuple(y), &ax).iter().all(|&c| c == 0))
        })
        .count();

    let dim_g = g.moduli.len();
    let basis: Vec<Vec<i128>> = (0..dim_g)
        .map(|i| (0..dim_g).map(|j| i128::from(i == j)).collect())
        .collect();
    let cochains = (na as u128).checked_pow(dim_g as u32).unwrap_or(u128::MAX);
    if cochains > cochain_bound as u128 {
        return Err(AlgebraError::SizeBoundExceeded {
            size: cochains.to_string(),
            bound: cochain_bound,
        });
    }
    // bracket of basis elements in basis coordinates
    let br: Vec<Vec<Vec<i128>>> = basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| g.encode(&bilinear(m.ring().bracket_tensor(), &g.decode(x), &g.decode(y), g.n)))
                .collect()
        })
        .collect();
    // action of each basis element on each element of A, as indices
    let acts: Vec<Vec<Vec<i128>>> = basis.iter().map(|x| (0..na).map(|v| act(x, &a.tuple(v))).collect()).collect();
    let addv = |x: &[i128], y: &[i128], s: i128| -> Vec<i128> {
        x.iter().zip(y).map(|(u, v)| (u + s * v).rem_euclid(pi)).collect()
    };
    let mut cocycles: u64 = 0;
    let mut values = vec![0usize; dim_g];
    let tuples: Vec<Vec<i128>> = (0..na).map(|v| a.tuple(v)).collect();
    for code in 0..cochains as usize {
        let mut c = code;
        for slot in values.iter_mut().rev() {
            *slot = c % na;
            c /= na;
        }
        let mut ok = true;
        'pairs: for i in 0..dim_g {
            for j in i + 1..dim_g {
                // f([b_i, b_j]) = b_i f(b_j) - b_j f(b_i)
                let mut lhs = vec![0i128; a.moduli.len()];
                for (k, &c) in br[i][j].iter().enumerate() {
                    lhs = addv(&lhs, &tuples[values[k]], c);
                }
                let rhs = addv(&acts[i][values[j]], &acts[j][values[i]], -1);
                if lhs != rhs {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            cocycles += 1;
        }
    }
    let boundaries: HashSet<Vec<Vec<i128>>> = (0..na)
        .map(|v| (0..dim_g).map(|i| acts[i][v].clone()).collect())
        .collect();
    let log_p = |mut x: u64| {
        let mut d = 0;
        while x > 1 {
            x /= p;
            d += 1;
        }
        d
    };
    Ok(ClassicalCounts {
        h0: log_p(h0 as u64),
        h1: log_p(cocycles / boundaries.len() as u64),
    })
}

// ---------------------------------------------------------------------
// fraction-free elimination

/// Row echelon form by Bareiss elimination; returns the pivot columns.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            for j in c + 1..cols {
                let v = (&rows[r][c] * &rows[i][j] - &rows[i][c] * &rows[r][j]) / &prev;
                rows[i][j] = v;
            }
            rows[i][c] = BigInt::zero();
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn integer_rows(system: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    system
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Basis of the solution space of the homogeneous system `rows · x = 0`
/// in `cols` unknowns.
pub fn independent_solve(system: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut rows = integer_rows(system);
    let pivots = bareiss(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate().rev() {
                let mut s = BigRational::zero();
                for j in p + 1..cols {
                    if !rows[i][j].is_zero() {
                        s += BigRational::from_integer(rows[i][j].clone()) * &x[j];
                    }
                }
                x[p] = -s / BigRational::from_integer(rows[i][p].clone());
            }
            x
        })
        .collect()
}

pub fn independent_rank(system: &[Vec<BigRational>], cols: usize) -> usize {
    let mut rows = integer_rows(system);
    bareiss(&mut rows, cols).len()
}

/// Whether `v` lies in the rational span of `basis`.
pub fn in_rational_span(basis: &[Vec<BigRational>], v: &[BigRational]) -> bool {
    let n = v.len();
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    independent_rank(basis, n) == independent_rank(&with, n)
}

/// Coordinates of `ℚ^n / span(relations)`: the free columns of an echelon
/// form of the relations, after eliminating the pivot columns.
struct QuotientCoords {
    echelon: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl QuotientCoords {
    fn of(g: &FGGroup) -> Self {
        let n = g.ambient_rank();
        let rel = g.relations();
        let mut rows: Vec<Vec<BigInt>> = (0..rel.cols()).map(|j| (0..n).map(|i| rel[(i, j)].clone()).collect()).collect();
        let pivots = bareiss(&mut rows, n);
        rows.truncate(pivots.len());
        QuotientCoords {
            echelon: rows,
            free: (0..n).filter(|c| !pivots.contains(c)).collect(),
            pivots,
        }
    }

    fn dim(&self) -> usize {
        self.free.len()
    }

    fn project(&self, x: &[BigRational]) -> Vec<BigRational> {
        let mut x = x.to_vec();
        for (row, &p) in self.echelon.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let f = &x[p] / BigRational::from_integer(row[p].clone());
            for (xj, rj) in x.iter_mut().zip(row) {
                *xj -= &f * BigRational::from_integer(rj.clone());
            }
        }
        self.free.iter().map(|&c| x[c].clone()).collect()
    }

    fn lift(&self, i: usize, n: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); n];
        v[self.free[i]] = BigRational::one();
        v
    }
}

fn qbilinear(t: &[Vec<Vec<Int>>], x: &[BigRational], y: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&t[i][j]) {
                if !c.is_zero() {
                    *o += xi * yj * BigRational::from_integer(c.clone());
                }
            }
        }
    }
    out
}

/// The rational derivation system of a module, built from every ordered
/// pair of ring basis elements, with its solution space and the span of
/// inner derivations.
///
/// Unknowns are the entries `D[r][c]` of a `k × n` matrix, stored row by
/// row; `r`, `t` are the dimensions of derivations and inner derivations.
#[derive(Clone, Debug)]
pub struct OracleDerivations {
    pub rows: usize,
    pub cols: usize,
    pub system: Vec<Vec<BigRational>>,
    pub solutions: Vec<Vec<BigRational>>,
    pub inner: Vec<Vec<BigRational>>,
    pub r: usize,
    pub t: usize,
}

pub fn oracle_derivations(m: &LieModule) -> OracleDerivations {
    let ring = m.ring();
    let gq = QuotientCoords::of(ring.carrier());
    let aq = QuotientCoords::of(m.carrier());
    let (gn, an) = (ring.generator_count(), m.carrier().ambient_rank());
    let (n, k) = (gq.dim(), aq.dim());
    let bt = ring.bracket_tensor();
    let at = m.action_tensor();
    let glift: Vec<Vec<BigRational>> = (0..n).map(|i| gq.lift(i, gn)).collect();
    let alift: Vec<Vec<BigRational>> = (0..k).map(|i| aq.lift(i, an)).collect();
    // b_i · lift(a_r) in A-coordinates
    let acts: Vec<Vec<Vec<BigRational>>> = glift
        .iter()
        .map(|b| alift.iter().map(|a| aq.project(&qbilinear(at, b, a, an))).collect())
        .collect();
    let unknowns = k * n;
    let mut system = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let bij = gq.project(&qbilinear(bt, &glift[i], &glift[j], gn));
            // residual component `out` for D = E_{r c}
            for out in 0..k {
                let mut row = vec![BigRational::zero(); unknowns];
                for r in 0..k {
                    for c in 0..n {
                        let mut v = BigRational::zero();
                        if r == out {
                            v += &bij[c];
                        }
                        if c == j {
                            v -= &acts[i][r][out];
                        }
                        if c == i {
                            v += &acts[j][r][out];
                        }
                        row[r * n + c] = v;
                    }
                }
                system.push(row);
            }
        }
    }
    let solutions = independent_solve(&system, unknowns);
    let inner: Vec<Vec<BigRational>> = (0..an)
        .map(|e| {
            let mut unit = vec![BigRational::zero(); an];
            unit[e] = BigRational::one();
            let mut d = vec![BigRational::zero(); unknowns];
            for (c, b) in glift.iter().enumerate() {
                let col = aq.project(&qbilinear(at, b, &unit, an));
                for (r, v) in col.into_iter().enumerate() {
                    d[r * n + c] = v;
                }
            }
            d
        })
        .collect();
    let t = independent_rank(&inner, unknowns);
    OracleDerivations {
        rows: k,
        cols: n,
        r: solutions.len(),
        t,
        system,
        solutions,
        inner,
    }
}

// ---------------------------------------------------------------------
// derivations of finite fields

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Remainder of `a` modulo the monic polynomial `f`, coefficients low to high.
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - df;
        for (i, &c) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - (lead * c) % p) % p;
        }
        r.pop();
    }
    r
}

fn monic_of_degree(d: usize, code: u64, p: u64) -> Vec<u64> {
    let mut c = code;
    let mut f: Vec<u64> = (0..d)
        .map(|_| {
            let v = c % p;
            c /= p;
            v
        })
        .collect();
    f.push(1);
    f
}

/// Trial division by every monic polynomial of degree at most half.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for code in 0..p.pow(d as u32) {
            let g = monic_of_degree(d, code, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `n` in the order of
/// [`monic_of_degree`] codes.
pub fn find_irreducible(p: u64, n: usize) -> Vec<u64> {
    (0..p.pow(n as u32))
        .map(|code| monic_of_degree(n, code, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rank_mod(rows: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Dimension of the space of additive derivations of `𝔽_{p^n}`, using the
/// given modulus or the first irreducible one found.
pub fn field_derivations_with(p: u64, n: usize, modulus: Option<&[u64]>, bound: u64) -> Result<usize> {
    if !is_prime(p) || n == 0 {
        return Err(AlgebraError::InvalidElement(format!("no field of order {p}^{n}")));
    }
    let order = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if order > bound as u128 {
        return Err(AlgebraError::SizeBoundExceeded {
            size: order.to_string(),
            bound,
        });
    }
    let f = match modulus {
        Some(f) => {
            if f.len() != n + 1 || f[n] % p != 1 || !is_irreducible(f, p) {
                return Err(AlgebraError::ReduciblePolynomial(p));
            }
            f.iter().map(|c| c % p).collect()
        }
        None => find_irreducible(p, n),
    };
    Ok(algebra_derivations(&f, p))
}

/// Derivations of `𝔽_p[x]/(f)` for any monic `f`.
fn algebra_derivations(f: &[u64], p: u64) -> usize {
    let n = f.len() - 1;
    // products of basis monomials x^i x^j
    let powers: Vec<Vec<u64>> = (0..2 * n - 1)
        .map(|k| {
            let mut mono = vec![0u64; k + 1];
            mono[k] = 1;
            let mut r = poly_rem(&mono, f, p);
            r.resize(n, 0);
            r
        })
        .collect();
    // unknown s[r][k]: coefficient of x^r in σ(x^k)
    let var = |r: usize, k: usize| r * n + k;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for out in 0..n {
                let mut row = vec![0u64; n * n];
                // σ(x^i x^j)
                for (k, &c) in powers[i + j].iter().enumerate() {
                    row[var(out, k)] = (row[var(out, k)] + c) % p;
                }
                // - x^i σ(x^j) - x^j σ(x^i)
                for t in 0..n {
                    let c = powers[i + t][out];
                    row[var(t, j)] = (row[var(t, j)] + p - c) % p;
                    let c = powers[j + t][out];
                    row[var(t, i)] = (row[var(t, i)] + p - c) % p;
                }
                rows.push(row);
            }
        }
    }
    n * n - rank_mod(&mut rows, n * n, p)
}

pub fn field_derivations(p: u64, n: usize) -> Result<usize> {
    field_derivations_with(p, n, None, DEFAULT_BOUND)
}

// ---------------------------------------------------------------------
// falsification sampling

pub const SAMPLE_COEFFICIENT: i64 = 1000;
/// Multiples tried when confirming a negative almost-containment verdict.
pub const MULTIPLE_LIMIT: i64 = 64;

#[derive(Clone, Debug)]
pub enum Claim {
    AlmostContained { h: Subgroup, k: Subgroup },
    Commensurable { h: Subgroup, k: Subgroup },
    EquivalentPhom { f: PartialHom, f1: PartialHom },
}

impl Claim {
    pub fn name(&self) -> &'static str {
        match self {
            Claim::AlmostContained { .. } => "ALMOST_CONTAINED",
            Claim::Commensurable { .. } => "COMMENSURABLE",
            Claim::EquivalentPhom { .. } => "EQUIVALENT_PHOM",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerReport {
    pub claim: String,
    pub verdict: bool,
    pub trials: usize,
    pub seed: u64,
    pub coefficient_bound: i64,
    /// Trials whose outcome the verdict predicts and that were observed.
    pub confirmations: usize,
    /// Trials contradicting the verdict.
    pub counterexamples: usize,
}

impl SamplerReport {
    pub fn consistent(&self) -> bool {
        self.counterexamples == 0 && (self.verdict || self.confirmations > 0 || self.trials == 0)
    }
}

/// An integer echelon basis of a lattice, with each row's coordinates in
/// the original generators.
struct Lattice {
    rows: Vec<(Vec<BigInt>, Vec<BigInt>)>,
    pivots: Vec<usize>,
    gens: usize,
}

impl Lattice {
    fn new(gens: &[Vec<BigInt>], dim: usize) -> Self {
        let g = gens.len();
        let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = gens
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut tag = vec![BigInt::zero(); g];
                tag[i] = BigInt::one();
                (v.clone(), tag)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            loop {
                let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i].0[c].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                let best = *nz.iter().min_by_key(|&&i| rows[i].0[c].abs()).unwrap();
                rows.swap(r, best);
                if nz.len() == 1 && nz[0] == best {
                    break;
                }
                for i in r + 1..rows.len() {
                    if rows[i].0[c].is_zero() {
                        continue;
                    }
                    let q = rows[i].0[c].div_floor(&rows[r].0[c]);
                    let (pv, pt) = rows[r].clone();
                    for (x, y) in rows[i].0.iter_mut().zip(&pv) {
                        *x -= &q * y;
                    }
                    for (x, y) in rows[i].1.iter_mut().zip(&pt) {
                        *x -= &q * y;
                    }
                }
                if (r + 1..rows.len()).all(|i| rows[i].0[c].is_zero()) {
                    break;
                }
            }
            if r < rows.len() && !rows[r].0[c].is_zero() {
                pivots.push(c);
                r += 1;
            }
        }
        rows.truncate(r);
        Lattice { rows, pivots, gens: g }
    }

    /// Coefficients expressing `x` in the generators, if it is a member.
    fn solve(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut x = x.to_vec();
        let mut coeff = vec![BigInt::zero(); self.gens];
        for ((v, tag), &p) in self.rows.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let (q, rem) = x[p].div_rem(&v[p]);
            if !rem.is_zero() {
                return None;
            }
            for (a, b) in x.iter_mut().zip(v) {
                *a -= &q * b;
            }
            for (a, b) in coeff.iter_mut().zip(tag) {
                *a += &q * b;
            }
        }
        x.iter().all(Zero::is_zero).then_some(coeff)
    }
}

fn columns(m: &crate::IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].clone()).collect()).collect()
}

/// Generators of a subgroup together with the relations of its ambient group.
fn full_lattice(s: &Subgroup) -> Lattice {
    let mut gens = columns(s.generators());
    gens.extend(columns(s.ambient().relations()));
    Lattice::new(&gens, s.ambient().ambient_rank())
}

fn sample_combination(rng: &mut ChaCha8Rng, gens: &[Vec<BigInt>], dim: usize) -> Vec<BigInt> {
    let mut x = vec![BigInt::zero(); dim];
    for g in gens {
        let c = BigInt::from(rng.gen_range(-SAMPLE_COEFFICIENT..=SAMPLE_COEFFICIENT));
        for (a, b) in x.iter_mut().zip(g) {
            *a += &c * b;
        }
    }
    x
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Outcome of one almost-containment trial: `Some(true)` confirms the
/// verdict, `Some(false)` contradicts it, `None` is inconclusive.
fn almost_trial(h: &Subgroup, k: &Lattice, index: Option<&Int>, rng: &mut ChaCha8Rng) -> Option<bool> {
    let dim = h.ambient().ambient_rank();
    let x = sample_combination(rng, &columns(h.generators()), dim);
    match index {
        Some(m) => {
            let mx: Vec<BigInt> = x.iter().map(|v| v * m).collect();
            Some(k.solve(&mx).is_some())
        }
        None => {
            let bounded = (1..=MULTIPLE_LIMIT).any(|j| {
                let jx: Vec<BigInt> = x.iter().map(|v| v * j).collect();
                k.solve(&jx).is_some()
            });
            (!bounded).then_some(true)
        }
    }
}

fn rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn eval_partial(f: &PartialHom, x: &[BigInt]) -> Vec<BigInt> {
    let src = f.source();
    let mut gens = columns(f.domain().generators());
    let ndom = gens.len();
    gens.extend(columns(src.relations()));
    let coeff = Lattice::new(&gens, src.ambient_rank())
        .solve(x)
        .expect("sample lies in the domain");
    let vals = columns(f.values());
    let mut out = vec![BigInt::zero(); f.target().ambient_rank()];
    for (c, v) in coeff.iter().take(ndom).zip(&vals) {
        for (o, e) in out.iter_mut().zip(v) {
            *o += c * e;
        }
    }
    out
}

/// Tests the verdict of the rational decision procedure for `claim` on
/// `trials` random samples. The report depends only on the inputs and the
/// seed.
pub fn falsification_sampler(claim: &Claim, trials: usize, seed: u64) -> Result<SamplerReport> {
    let mut confirmations = 0;
    let mut counterexamples = 0;
    let mut tally = |o: Option<bool>| match o {
        Some(true) => confirmations += 1,
        Some(false) => counterexamples += 1,
        None => {}
    };
    let verdict;
    match claim {
        Claim::AlmostContained { h, k } => {
            let v = almost_contained(h, k)?;
            verdict = v.holds;
            let index = match &v.witness {
                AlmostWitness::FiniteIndex { index, .. } => Some(index.clone()),
                AlmostWitness::RankDeficit { .. } => None,
            };
            let kl = full_lattice(k);
            for t in 0..trials {
                tally(almost_trial(h, &kl, index.as_ref(), &mut trial_rng(seed, t)));
            }
        }
        Claim::Commensurable { h, k } => {
            let hk = almost_contained(h, k)?;
            let kh = almost_contained(k, h)?;
            verdict = hk.holds && kh.holds;
            let index_of = |w: &AlmostWitness| match w {
                AlmostWitness::FiniteIndex { index, .. } => Some(index.clone()),
                AlmostWitness::RankDeficit { .. } => None,
            };
            let (hl, kl) = (full_lattice(h), full_lattice(k));
            for t in 0..trials {
                let mut rng = trial_rng(seed, t);
                let a = almost_trial(h, &kl, index_of(&hk.witness).as_ref(), &mut rng);
                let b = almost_trial(k, &hl, index_of(&kh.witness).as_ref(), &mut rng);
                let outcome = if verdict {
                    match (a, b) {
                        (Some(true), Some(true)) => Some(true),
                        _ => Some(false),
                    }
                } else {
                    // a failing direction is confirmed by growth there
                    let fa = if hk.holds { None } else { a };
                    let fb = if kh.holds { None } else { b };
                    fa.or(fb)
                };
                tally(outcome);
            }
        }
        Claim::EquivalentPhom { f, f1 } => {
            verdict = equivalent(f, f1)?;
            let src = f.source();
            let n = src.ambient_rank();
            let scale = f.domain_index() * f1.domain_index();
            let tor: Vec<Vec<BigRational>> = columns(f.target().relations()).iter().map(|v| rational(v)).collect();
            let units: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(i32::from(i == j))).collect())
                .collect();
            for t in 0..trials {
                let mut rng = trial_rng(seed, t);
                let y = sample_combination(&mut rng, &units, n);
                let x: Vec<BigInt> = y.iter().map(|v| v * &scale).collect();
                let d: Vec<BigInt> = eval_partial(f, &x)
                    .iter()
                    .zip(eval_partial(f1, &x))
                    .map(|(a, b)| a - b)
                    .collect();
                let torsion = in_rational_span(&tor, &rational(&d));
                tally(if verdict { Some(torsion) } else { (!torsion).then_some(true) });
            }
        }
    }
    Ok(SamplerReport {
        claim: claim.name().to_string(),
        verdict,
        trials,
        seed,
        coefficient_bound: SAMPLE_COEFFICIENT,
        confirmations,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fgab::int_vector;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn heisenberg_mod_three() {
        let r = catalog::reduce_ring(&catalog::heisenberg(), 3).unwrap();
        let t = FiniteRingTable::new(&r, DEFAULT_BOUND).unwrap();
        assert_eq!(t.size(), 27);
        assert_eq!(t.center().len(), 3);
        assert_eq!(t.nilpotency(), Nilpotency::Nilpotent(2));
        let ab = LieRing::abelian(&FGGroup::cyclic(&[2, 2]));
        let t = FiniteRingTable::new(&ab, DEFAULT_BOUND).unwrap();
        assert_eq!(t.center().len(), 4);
    }

    #[test]
    fn size_bound() {
        let r = catalog::reduce_ring(&catalog::heisenberg(), 5).unwrap();
        assert!(matches!(
            FiniteRingTable::new(&r, 100),
            Err(AlgebraError::SizeBoundExceeded { .. })
        ));
        assert!(FiniteRingTable::new(&catalog::heisenberg(), 100).is_err());
    }

    #[test]
    fn mixed_presentation() {
        // Z^2 / <(2,4),(0,6)> has 12 elements
        let g = FGGroup::new(2, crate::fgab::int_matrix(2, 2, &[2, 0, 4, 6])).unwrap();
        let t = FiniteRingTable::new(&LieRing::abelian(&g), DEFAULT_BOUND).unwrap();
        assert_eq!(t.size(), 12);
        assert_eq!(t.element(&int_vector(&[2, 4])), 0);
        assert_ne!(t.element(&int_vector(&[1, 0])), 0);
        for i in 0..t.size() {
            assert_eq!(t.element(&t.ambient(i)), i);
        }
    }

    #[test]
    fn solve_examples() {
        let h3 = oracle_derivations(&catalog::adjoint(&catalog::heisenberg()));
        assert_eq!(h3.system.len(), 27);
        assert_eq!((h3.r, h3.t), (6, 2));
        let rot = oracle_derivations(&catalog::rotation());
        assert_eq!((rot.r, rot.t), (2, 2));
        assert_eq!(independent_solve(&[], 3).len(), 3);
        let sys = vec![q(&[1, 2, 3]), q(&[2, 4, 6])];
        let ker = independent_solve(&sys, 3);
        assert_eq!(ker.len(), 2);
        assert!(in_rational_span(&ker, &q(&[1, 1, -1])));
        assert!(!in_rational_span(&ker, &q(&[1, 0, 0])));
    }

    #[test]
    fn field_examples() {
        assert_eq!(field_derivations(2, 1).unwrap(), 0);
        assert_eq!(field_derivations_with(3, 2, Some(&[1, 0, 1]), DEFAULT_BOUND).unwrap(), 0);
        assert_eq!(field_derivations_with(2, 4, Some(&[1, 1, 0, 0, 1]), DEFAULT_BOUND).unwrap(), 0);
        assert_eq!(
            field_derivations_with(2, 2, Some(&[1, 0, 1]), DEFAULT_BOUND),
            Err(AlgebraError::ReduciblePolynomial(2))
        );
        assert!(is_irreducible(&find_irreducible(2, 8), 2));
        // dual numbers do have derivations
        assert_eq!(algebra_derivations(&[0, 0, 1], 3), 1);
        assert_eq!(algebra_derivations(&[0, 0, 1], 2), 2);
    }

    #[test]
    fn sampler_examples() {
        let z = FGGroup::free(1);
        let two = z.subgroup_of(&[int_vector(&[2])]).unwrap();
        let three = z.subgroup_of(&[int_vector(&[3])]).unwrap();
        let claim = Claim::AlmostContained { h: two, k: three };
        let rep = falsification_sampler(&claim, 50, 7).unwrap();
        assert!(rep.verdict && rep.consistent());
        assert_eq!(rep.confirmations, 50);
        assert_eq!(rep, falsification_sampler(&claim, 50, 7).unwrap());

        let z2 = FGGroup::free(2);
        let x = z2.subgroup_of(&[int_vector(&[1, 0])]).unwrap();
        let y = z2.subgroup_of(&[int_vector(&[0, 1])]).unwrap();
        let rep = falsification_sampler(&Claim::AlmostContained { h: x, k: y }, 20, 1).unwrap();
        assert!(!rep.verdict && rep.consistent());
        assert!(rep.confirmations > 0);
    }

    #[test]
    fn sampler_on_partial_homs() {
        let z = FGGroup::free(1);
        let q = FGGroup::cyclic(&[0, 4]);
        let f = PartialHom::from_hom(&crate::fgab::GroupHom::new(&z, &q, crate::fgab::int_matrix(2, 1, &[1, 1])).unwrap());
        let f1 = PartialHom::from_hom(&crate::fgab::GroupHom::new(&z, &q, crate::fgab::int_matrix(2, 1, &[1, 3])).unwrap());
        let f2 = PartialHom::from_hom(&crate::fgab::GroupHom::new(&z, &q, crate::fgab::int_matrix(2, 1, &[2, 0])).unwrap());
        let rep = falsification_sampler(&Claim::EquivalentPhom { f: f.clone(), f1 }, 30, 3).unwrap();
        assert!(rep.verdict && rep.consistent());
        let rep = falsification_sampler(&Claim::EquivalentPhom { f, f1: f2 }, 30, 3).unwrap();
        assert!(!rep.verdict && rep.consistent());
    }
}
