//! Lie rings and Lie ring modules given by structure constants on a
//! presented abelian group, with the classical structure theory: lower
//! central series, iterated centers, centralisers, normalisers, Cartan
//! subrings and quotients.

use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::error::{AlgebraError, Result};
use crate::fgab::{
    intersect, preimage, quotient, Embedding, FGGroup, GroupHom, Quotient, Subgroup, Vector,
};
use crate::frame::{frame, Coefficients, Frame, Rationals};
use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::{Int, IntMatrix};

/// `t[i][j]` is an element of some carrier, one for each generator pair.
pub type Tensor = Vec<Vec<Vector>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    fn record(&mut self, axiom: &str, witness: Option<String>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(AlgebraError::AxiomViolated {
                axiom: c.axiom.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }
}

fn gen_name(i: usize) -> String {
    format!("e{}", i + 1)
}

fn add_into(acc: &mut [Int], v: &[Int], c: &Int) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

/// Bilinear evaluation `sum x_i y_j t[i][j]`.
fn bilinear(t: &Tensor, x: &[Int], y: &[Int], out_len: usize) -> Vector {
    let mut acc = vec![Int::zero(); out_len];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            add_into(&mut acc, &t[i][j], &(xi * yj));
        }
    }
    acc
}

fn check_tensor_shape(t: &Tensor, rows: usize, cols: usize, len: usize) -> Result<()> {
    let ok = t.len() == rows && t.iter().all(|r| r.len() == cols && r.iter().all(|v| v.len() == len));
    if ok {
        Ok(())
    } else {
        Err(AlgebraError::ShapeMismatch(format!(
            "expected a {rows}x{cols} tensor of vectors of length {len}"
        )))
    }
}

/// Checks the Lie ring axioms on raw structure constants.
pub fn check_ring(carrier: &FGGroup, bracket: &Tensor) -> Result<ValidationReport> {
    let n = carrier.ambient_rank();
    check_tensor_shape(bracket, n, n, n)?;
    let br = |x: &[Int], y: &[Int]| bilinear(bracket, x, y, n);
    let mut report = ValidationReport::default();

    let alt = (0..n).find(|&i| !carrier.is_zero_element(&bracket[i][i]));
    report.record(
        "alternating",
        alt.map(|i| format!("[{0},{0}] = {1:?}", gen_name(i), bracket[i][i])),
    );

    let mut anti = None;
    'a: for i in 0..n {
        for j in (i + 1)..n {
            let s: Vector = bracket[i][j].iter().zip(&bracket[j][i]).map(|(a, b)| a + b).collect();
            if !carrier.is_zero_element(&s) {
                anti = Some(format!("[{},{}] + [{},{}] = {:?}", gen_name(i), gen_name(j), gen_name(j), gen_name(i), s));
                break 'a;
            }
        }
    }
    report.record("antisymmetry", anti);

    let mut jac = None;
    'j: for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (ei, ej, ek) = (carrier.unit(i), carrier.unit(j), carrier.unit(k));
                let a = br(&ei, &br(&ej, &ek));
                let b = br(&ej, &br(&ek, &ei));
                let c = br(&ek, &br(&ei, &ej));
                let s: Vector = (0..n).map(|t| &a[t] + &b[t] + &c[t]).collect();
                if !carrier.is_zero_element(&s) {
                    jac = Some(format!(
                        "({}, {}, {}): Jacobi sum {:?}",
                        gen_name(i),
                        gen_name(j),
                        gen_name(k),
                        s
                    ));
                    break 'j;
                }
            }
        }
    }
    report.record("jacobi", jac);

    let mut wd = None;
    'w: for rel in carrier.relation_lattice().columns() {
        for j in 0..n {
            let v = br(&rel, &carrier.unit(j));
            if !carrier.is_zero_element(&v) {
                wd = Some(format!("[relator {rel:?}, {}] = {v:?}", gen_name(j)));
                break 'w;
            }
        }
    }
    report.record("well-definedness", wd);
    Ok(report)
}

struct RingData {
    carrier: FGGroup,
    bracket: Tensor,
}

/// A Lie ring on a presented abelian group. Validated on construction.
#[derive(Clone)]
pub struct LieRing(Arc<RingData>);

impl LieRing {
    pub fn new(carrier: &FGGroup, bracket: Tensor) -> Result<Self> {
        check_ring(carrier, &bracket)?.into_result()?;
        let bracket = bracket
            .iter()
            .map(|row| row.iter().map(|v| carrier.canonical(v)).collect())
            .collect();
        Ok(LieRing(Arc::new(RingData {
            carrier: carrier.clone(),
            bracket,
        })))
    }

    /// Builds the bracket from the listed generator pairs `[e_i, e_j] = v`;
    /// `[e_j, e_i] = -v` is implied and unlisted pairs bracket to zero.
    pub fn from_pairs(carrier: &FGGroup, pairs: &[(usize, usize, Vector)]) -> Result<Self> {
        let n = carrier.ambient_rank();
        let mut t: Tensor = vec![vec![vec![Int::zero(); n]; n]; n];
        for (i, j, v) in pairs {
            if *i >= n || *j >= n || v.len() != n {
                return Err(AlgebraError::ShapeMismatch(format!("bracket entry ({i},{j}) out of range")));
            }
            t[*i][*j] = v.clone();
            t[*j][*i] = v.iter().map(|x| -x).collect();
        }
        LieRing::new(carrier, t)
    }

    pub fn abelian(carrier: &FGGroup) -> Self {
        let n = carrier.ambient_rank();
        LieRing::new(carrier, vec![vec![vec![Int::zero(); n]; n]; n]).expect("zero bracket")
    }

    pub fn carrier(&self) -> &FGGroup {
        &self.0.carrier
    }

    pub fn bracket_tensor(&self) -> &Tensor {
        &self.0.bracket
    }

    pub fn generator_count(&self) -> usize {
        self.0.carrier.ambient_rank()
    }

    pub fn bracket(&self, x: &[Int], y: &[Int]) -> Vector {
        self.0
            .carrier
            .canonical(&bilinear(&self.0.bracket, x, y, self.generator_count()))
    }

    /// Matrix of `ad_x = [x, -]`.
    pub fn ad(&self, x: &[Int]) -> IntMatrix {
        let n = self.generator_count();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket(x, &self.0.carrier.unit(j))).collect();
        Matrix::from_columns(n, &cols)
    }

    pub fn ad_hom(&self, x: &[Int]) -> GroupHom {
        GroupHom::new(self.carrier(), self.carrier(), self.ad(x)).expect("ad is well defined")
    }

    pub fn is_abelian(&self) -> bool {
        self.0
            .bracket
            .iter()
            .all(|r| r.iter().all(|v| v.iter().all(Zero::is_zero)))
    }

    pub fn whole(&self) -> Subgroup {
        self.carrier().whole()
    }

    pub fn zero(&self) -> Subgroup {
        self.carrier().trivial()
    }
}

impl PartialEq for LieRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.carrier == other.0.carrier && self.0.bracket == other.0.bracket)
    }
}

impl Eq for LieRing {}

impl fmt::Debug for LieRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieRing({:?})", self.0.carrier)
    }
}

pub fn validate_lie_ring(r: &LieRing) -> ValidationReport {
    check_ring(r.carrier(), r.bracket_tensor()).expect("stored shapes are consistent")
}

/// Checks the module axioms on raw action constants `a[i][k] = g_i · v_k`.
pub fn check_module(ring: &LieRing, carrier: &FGGroup, action: &Tensor) -> Result<ValidationReport> {
    let n = ring.generator_count();
    let m = carrier.ambient_rank();
    check_tensor_shape(action, n, m, m)?;
    let act = |x: &[Int], v: &[Int]| bilinear(action, x, v, m);
    let mut report = ValidationReport::default();

    let mut wd = None;
    'r: for rel in ring.carrier().relation_lattice().columns() {
        for k in 0..m {
            let v = act(&rel, &carrier.unit(k));
            if !carrier.is_zero_element(&v) {
                wd = Some(format!("ring relator {rel:?} acts on v{} as {v:?}", k + 1));
                break 'r;
            }
        }
    }
    if wd.is_none() {
        'm: for rel in carrier.relation_lattice().columns() {
            for i in 0..n {
                let v = act(&ring.carrier().unit(i), &rel);
                if !carrier.is_zero_element(&v) {
                    wd = Some(format!("{} maps module relator {rel:?} to {v:?}", gen_name(i)));
                    break 'm;
                }
            }
        }
    }
    report.record("well-definedness", wd);

    let mut rep = None;
    'p: for i in 0..n {
        for j in (i + 1)..n {
            let (gi, gj) = (ring.carrier().unit(i), ring.carrier().unit(j));
            let gij = ring.bracket(&gi, &gj);
            for k in 0..m {
                let v = carrier.unit(k);
                let a = act(&gi, &act(&gj, &v));
                let b = act(&gj, &act(&gi, &v));
                let c = act(&gij, &v);
                let d: Vector = (0..m).map(|t| &a[t] - &b[t] - &c[t]).collect();
                if !carrier.is_zero_element(&d) {
                    rep = Some(format!(
                        "({}, {}, v{}): defect {d:?}",
                        gen_name(i),
                        gen_name(j),
                        k + 1
                    ));
                    break 'p;
                }
            }
        }
    }
    report.record("representation", rep);
    Ok(report)
}

struct ModuleData {
    ring: LieRing,
    carrier: FGGroup,
    action: Tensor,
}

/// A module over a Lie ring. Validated on construction.
#[derive(Clone)]
pub struct LieModule(Arc<ModuleData>);

impl LieModule {
    pub fn new(ring: &LieRing, carrier: &FGGroup, action: Tensor) -> Result<Self> {
        check_module(ring, carrier, &action)?.into_result()?;
        let action = action
            .iter()
            .map(|row| row.iter().map(|v| carrier.canonical(v)).collect())
            .collect();
        Ok(LieModule(Arc::new(ModuleData {
            ring: ring.clone(),
            carrier: carrier.clone(),
            action,
        })))
    }

    /// Module whose `i`-th ring generator acts by the integer matrix
    /// `matrices[i]` (columns are images of carrier generators).
    pub fn from_matrices(ring: &LieRing, carrier: &FGGroup, matrices: &[IntMatrix]) -> Result<Self> {
        let m = carrier.ambient_rank();
        if matrices.len() != ring.generator_count()
            || matrices.iter().any(|a| a.rows() != m || a.cols() != m)
        {
            return Err(AlgebraError::ShapeMismatch("one m x m matrix per ring generator".into()));
        }
        let action = matrices.iter().map(|a| a.columns()).collect();
        LieModule::new(ring, carrier, action)
    }

    pub fn trivial(ring: &LieRing, carrier: &FGGroup) -> Self {
        let m = carrier.ambient_rank();
        let action = vec![vec![vec![Int::zero(); m]; m]; ring.generator_count()];
        LieModule::new(ring, carrier, action).expect("trivial action")
    }

    pub fn ring(&self) -> &LieRing {
        &self.0.ring
    }

    pub fn carrier(&self) -> &FGGroup {
        &self.0.carrier
    }

    pub fn action_tensor(&self) -> &Tensor {
        &self.0.action
    }

    pub fn act(&self, g: &[Int], v: &[Int]) -> Vector {
        let m = self.carrier().ambient_rank();
        self.carrier().canonical(&bilinear(&self.0.action, g, v, m))
    }

    /// Matrix of `v ↦ g·v` on carrier coordinates.
    pub fn rho(&self, g: &[Int]) -> IntMatrix {
        let m = self.carrier().ambient_rank();
        let cols: Vec<Vector> = (0..m).map(|k| self.act(g, &self.carrier().unit(k))).collect();
        Matrix::from_columns(m, &cols)
    }

    pub fn rho_hom(&self, g: &[Int]) -> GroupHom {
        GroupHom::new(self.carrier(), self.carrier(), self.rho(g)).expect("action is well defined")
    }

    pub fn is_trivial_action(&self) -> bool {
        self.0
            .action
            .iter()
            .all(|r| r.iter().all(|v| v.iter().all(Zero::is_zero)))
    }

    /// `g·W ⊆ W` for all ring generators.
    pub fn is_submodule(&self, w: &Subgroup) -> Result<bool> {
        if w.ambient() != self.carrier() {
            return Err(AlgebraError::AmbientMismatch("subgroup of another carrier".into()));
        }
        let n = self.ring().generator_count();
        Ok((0..n).all(|i| {
            let gi = self.ring().carrier().unit(i);
            w.generator_columns().iter().all(|v| w.contains(&self.act(&gi, v)))
        }))
    }

    /// The submodule `W` as a module in its own right.
    pub fn submodule(&self, w: &Subgroup) -> Result<(LieModule, Embedding)> {
        if !self.is_submodule(w)? {
            return Err(AlgebraError::NotASubmodule(format!("{w:?}")));
        }
        let e = w.as_group();
        let cols = e.inclusion.matrix().columns();
        let action: Tensor = (0..self.ring().generator_count())
            .map(|i| {
                let gi = self.ring().carrier().unit(i);
                cols.iter()
                    .map(|c| e.coordinates(&self.act(&gi, c)).expect("submodule is invariant"))
                    .collect()
            })
            .collect();
        Ok((LieModule::new(self.ring(), &e.group, action)?, e))
    }

    /// `A/W` for a submodule `W`.
    pub fn quotient_module(&self, w: &Subgroup) -> Result<(LieModule, Quotient)> {
        if !self.is_submodule(w)? {
            return Err(AlgebraError::NotASubmodule(format!("{w:?}")));
        }
        let q = quotient(self.carrier(), w)?;
        let lifts = q.section.columns();
        let action: Tensor = (0..self.ring().generator_count())
            .map(|i| {
                let gi = self.ring().carrier().unit(i);
                lifts.iter().map(|c| q.projection.apply(&self.act(&gi, c))).collect()
            })
            .collect();
        Ok((LieModule::new(self.ring(), &q.group, action)?, q))
    }

    /// Restriction along a ring homomorphism `phi: sub -> ring`, typically a
    /// subring inclusion.
    pub fn restrict(&self, sub: &LieRing, phi: &GroupHom) -> Result<LieModule> {
        if phi.target() != self.ring().carrier() || phi.source() != sub.carrier() {
            return Err(AlgebraError::AmbientMismatch("restriction map does not fit".into()));
        }
        let m = self.carrier().ambient_rank();
        let action: Tensor = phi
            .matrix()
            .columns()
            .iter()
            .map(|g| (0..m).map(|k| self.act(g, &self.carrier().unit(k))).collect())
            .collect();
        LieModule::new(sub, self.carrier(), action)
    }

    /// The same carrier viewed over `ring/I`, where `I` acts trivially.
    pub fn descend(&self, quotient_ring: &LieRing, q: &Quotient) -> Result<LieModule> {
        let m = self.carrier().ambient_rank();
        let action: Tensor = q
            .section
            .columns()
            .iter()
            .map(|g| (0..m).map(|k| self.act(g, &self.carrier().unit(k))).collect())
            .collect();
        let kernel = q.projection.kernel();
        for h in kernel.generator_columns() {
            if !self.rho(&h).is_zero() {
                return Err(AlgebraError::IllDefined(format!(
                    "ideal element {h:?} acts nontrivially"
                )));
            }
        }
        LieModule::new(quotient_ring, self.carrier(), action)
    }
}

impl PartialEq for LieModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring
                && self.0.carrier == other.0.carrier
                && self.0.action == other.0.action)
    }
}

impl Eq for LieModule {}

impl fmt::Debug for LieModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieModule({:?} on {:?})", self.0.ring, self.0.carrier)
    }
}

pub fn adjoint_module(r: &LieRing) -> Result<LieModule> {
    validate_lie_ring(r).into_result()?;
    LieModule::new(r, r.carrier(), r.bracket_tensor().clone())
}

/// Direct sum of two modules over the same ring.
pub fn direct_sum(a: &LieModule, b: &LieModule) -> Result<LieModule> {
    if a.ring() != b.ring() {
        return Err(AlgebraError::AmbientMismatch("modules over different rings".into()));
    }
    let (ma, mb) = (a.carrier().ambient_rank(), b.carrier().ambient_rank());
    let ra = a.carrier().relation_lattice();
    let rb = b.carrier().relation_lattice();
    let rel = Matrix::from_fn(ma + mb, ra.cols() + rb.cols(), |i, j| {
        if i < ma && j < ra.cols() {
            ra[(i, j)].clone()
        } else if i >= ma && j >= ra.cols() {
            rb[(i - ma, j - ra.cols())].clone()
        } else {
            Int::zero()
        }
    });
    let carrier = FGGroup::new(ma + mb, rel)?;
    let action: Tensor = (0..a.ring().generator_count())
        .map(|i| {
            let row_a = &a.action_tensor()[i];
            let row_b = &b.action_tensor()[i];
            let mut row: Vec<Vector> = row_a
                .iter()
                .map(|v| v.iter().cloned().chain(std::iter::repeat_n(Int::zero(), mb)).collect())
                .collect();
            row.extend(
                row_b
                    .iter()
                    .map(|v| std::iter::repeat_n(Int::zero(), ma).chain(v.iter().cloned()).collect()),
            );
            row
        })
        .collect();
    LieModule::new(a.ring(), &carrier, action)
}

// ---------------------------------------------------------------------
// subrings, ideals, quotients

fn same_carrier(r: &LieRing, h: &Subgroup) -> Result<()> {
    if h.ambient() != r.carrier() {
        return Err(AlgebraError::AmbientMismatch("subgroup of another carrier".into()));
    }
    Ok(())
}

pub fn is_subring(r: &LieRing, h: &Subgroup) -> Result<bool> {
    same_carrier(r, h)?;
    let gens = h.generator_columns();
    Ok(gens
        .iter()
        .enumerate()
        .all(|(a, x)| gens[a + 1..].iter().all(|y| h.contains(&r.bracket(x, y)))))
}

pub fn is_ideal(r: &LieRing, h: &Subgroup) -> Result<bool> {
    same_carrier(r, h)?;
    let n = r.generator_count();
    Ok((0..n).all(|i| {
        let ei = r.carrier().unit(i);
        h.generator_columns().iter().all(|x| h.contains(&r.bracket(&ei, x)))
    }))
}

/// `H` as a Lie ring, with its inclusion.
pub fn subring(r: &LieRing, h: &Subgroup) -> Result<(LieRing, Embedding)> {
    if !is_subring(r, h)? {
        return Err(AlgebraError::NotASubring(format!("{h:?}")));
    }
    let e = h.as_group();
    let cols = e.inclusion.matrix().columns();
    let bracket: Tensor = cols
        .iter()
        .map(|x| {
            cols.iter()
                .map(|y| e.coordinates(&r.bracket(x, y)).expect("subring is closed"))
                .collect()
        })
        .collect();
    Ok((LieRing::new(&e.group, bracket)?, e))
}

/// `R/I` for an ideal `I`, with the projection data.
pub fn quotient_ring(r: &LieRing, i: &Subgroup) -> Result<(LieRing, Quotient)> {
    if !is_ideal(r, i)? {
        return Err(AlgebraError::NotAnIdeal(format!("{i:?}")));
    }
    let q = quotient(r.carrier(), i)?;
    let lifts = q.section.columns();
    let bracket: Tensor = lifts
        .iter()
        .map(|x| lifts.iter().map(|y| q.projection.apply(&r.bracket(x, y))).collect())
        .collect();
    Ok((LieRing::new(&q.group, bracket)?, q))
}

/// `{g : [x, g] ∈ H for all x ∈ X}`.
pub fn centraliser_over(r: &LieRing, x: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    same_carrier(r, x)?;
    same_carrier(r, h)?;
    let mut out = r.whole();
    for gen in x.generator_columns() {
        let pre = preimage(&r.ad_hom(&gen), h)?;
        out = intersect(&out, &pre)?;
    }
    if is_ideal(r, h)? && !is_subring(r, &out)? {
        return Err(AlgebraError::NotASubring("centraliser over an ideal is not closed".into()));
    }
    Ok(out)
}

pub fn center(r: &LieRing) -> Subgroup {
    centraliser_over(r, &r.whole(), &r.zero()).expect("same carrier")
}

/// `{g : [g, H] ⊆ H}`.
pub fn normaliser(r: &LieRing, h: &Subgroup) -> Result<Subgroup> {
    centraliser_over(r, h, h)
}

/// `Z_n`: `Z_0 = 0`, `Z_{k+1} = C(𝔤 / Z_k)`.
pub fn iterated_center(r: &LieRing, n: usize) -> Result<Subgroup> {
    let mut z = r.zero();
    for _ in 0..n {
        let next = centraliser_over(r, &r.whole(), &z)?;
        if !is_ideal(r, &next)? {
            return Err(AlgebraError::NotAnIdeal("iterated center term".into()));
        }
        if next == z {
            break;
        }
        z = next;
    }
    Ok(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent(usize),
    NotNilpotent,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub terms: Vec<Subgroup>,
    /// Whether the integral terms reached a fixed point.
    pub stabilized: bool,
    /// Rank at which the rational series stops.
    pub rational_limit_rank: usize,
    pub verdict: Nilpotency,
}

impl SeriesReport {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self.verdict, Nilpotency::Nilpotent(_))
    }
}

fn bracket_with(r: &LieRing, gens: &[Vector], term: &Subgroup) -> Subgroup {
    let mut cols = Vec::new();
    for g in gens {
        for t in term.lattice().columns() {
            cols.push(r.bracket(g, &t));
        }
    }
    r.carrier()
        .subgroup_of(&cols)
        .expect("brackets are carrier elements")
}

/// Lower central series of the subring `H` (of `R` itself when `H = R`).
///
/// Two phases: while the terms have positive rank, a repeated rank means
/// the rational series has stabilised at a nonzero subspace, so the ring
/// is not nilpotent. Once the rank is zero the terms are finite and the
/// integral iteration must reach a fixed point.
pub fn subring_series(r: &LieRing, h: &Subgroup) -> Result<SeriesReport> {
    if !is_subring(r, h)? {
        return Err(AlgebraError::NotASubring(format!("{h:?}")));
    }
    let gens = h.generator_columns();
    let mut terms = vec![h.clone()];
    loop {
        let last = terms.last().unwrap().clone();
        if last.is_trivial() {
            let class = terms.len() - 1;
            return Ok(SeriesReport {
                terms,
                stabilized: true,
                rational_limit_rank: 0,
                verdict: Nilpotency::Nilpotent(class),
            });
        }
        let next = bracket_with(r, &gens, &last);
        if next == last {
            let rank = last.rank();
            terms.push(next);
            return Ok(SeriesReport {
                terms,
                stabilized: true,
                rational_limit_rank: rank,
                verdict: Nilpotency::NotNilpotent,
            });
        }
        if last.rank() > 0 && next.rank() == last.rank() {
            let rank = next.rank();
            terms.push(next);
            return Ok(SeriesReport {
                terms,
                stabilized: false,
                rational_limit_rank: rank,
                verdict: Nilpotency::NotNilpotent,
            });
        }
        terms.push(next);
    }
}

pub fn lower_central_series(r: &LieRing) -> SeriesReport {
    subring_series(r, &r.whole()).expect("whole ring is a subring")
}

/// Cartan: nilpotent and self-normalising.
pub fn is_cartan(r: &LieRing, h: &Subgroup) -> Result<bool> {
    let nilpotent = subring_series(r, h)?.is_nilpotent();
    Ok(nilpotent && normaliser(r, h)? == *h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    Zero,
    Prime(u64),
    /// Mixed torsion, or a torsion exponent that is not prime.
    Undefined,
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(f, "0"),
            Characteristic::Prime(p) => write!(f, "{p}"),
            Characteristic::Undefined => write!(f, "NONE"),
        }
    }
}

pub fn characteristic(r: &LieRing) -> Characteristic {
    let g = r.carrier();
    let divs = g.torsion_divisors();
    if divs.is_empty() {
        return Characteristic::Zero;
    }
    if g.free_rank() > 0 {
        return Characteristic::Undefined;
    }
    let e = g.torsion_exponent();
    match e.to_u64() {
        Some(p) if crate::scalar::is_prime(p) && divs.iter().all(|d| *d == e) => {
            Characteristic::Prime(p)
        }
        _ => Characteristic::Undefined,
    }
}

// ---------------------------------------------------------------------
// linearisations

/// Structure constants of `R ⊗ F` in frame coordinates.
#[derive(Clone, Debug)]
pub struct LinearRing<F: Field> {
    pub dim: usize,
    /// `consts[m][l]` is `[b_m, b_l]` in frame coordinates.
    pub consts: Vec<Vec<Vec<F>>>,
    pub frame: Frame<F>,
}

impl<F: Field> LinearRing<F> {
    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (m, xm) in x.iter().enumerate() {
            if xm.is_zero() {
                continue;
            }
            for (l, yl) in y.iter().enumerate() {
                if yl.is_zero() {
                    continue;
                }
                let c = xm.clone() * yl.clone();
                for (o, v) in out.iter_mut().zip(&self.consts[m][l]) {
                    *o = o.clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    /// Matrix of `ad_x` on `F^dim`.
    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim).map(|l| self.bracket(x, &unit(self.dim, l))).collect();
        Matrix::from_columns(self.dim, &cols)
    }
}

/// `M ⊗ F`: ring constants plus one action matrix per frame basis vector
/// of the ring.
#[derive(Clone, Debug)]
pub struct LinearModule<F: Field> {
    pub ring: LinearRing<F>,
    pub dim: usize,
    pub action: Vec<Matrix<F>>,
    pub frame: Frame<F>,
}

impl<F: Field> LinearModule<F> {
    /// Action matrix of a ring element given in frame coordinates.
    pub fn rho(&self, x: &[F]) -> Matrix<F> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (m, xm) in x.iter().enumerate() {
            if !xm.is_zero() {
                out = &out + &self.action[m].scale(xm);
            }
        }
        out
    }
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn linearize_ring<C: Coefficients>(c: &C, r: &LieRing) -> Result<LinearRing<C::F>> {
    let fr = frame(c, r.carrier())?;
    let n = fr.dim();
    let consts = (0..n)
        .map(|m| {
            (0..n)
                .map(|l| fr.project(c, &r.bracket(&fr.basis_element(m), &fr.basis_element(l))))
                .collect()
        })
        .collect();
    Ok(LinearRing {
        dim: n,
        consts,
        frame: fr,
    })
}

pub fn linearize_module<C: Coefficients>(c: &C, m: &LieModule) -> Result<LinearModule<C::F>> {
    let ring = linearize_ring(c, m.ring())?;
    let fa = frame(c, m.carrier())?;
    let k = fa.dim();
    let action = (0..ring.dim)
        .map(|i| {
            let g = ring.frame.basis_element(i);
            let cols: Vec<Vec<C::F>> = (0..k)
                .map(|j| fa.project(c, &m.act(&g, &fa.basis_element(j))))
                .collect();
            Matrix::from_columns(k, &cols)
        })
        .collect();
    Ok(LinearModule {
        ring,
        dim: k,
        action,
        frame: fa,
    })
}

/// Whether `span_Q(H)` is a nilpotent Lie algebra.
pub fn is_rationally_nilpotent(r: &LieRing, h: &Subgroup) -> Result<bool> {
    same_carrier(r, h)?;
    let lr = linearize_ring(&Rationals, r)?;
    let gens: Vec<Vec<_>> = h
        .generator_columns()
        .iter()
        .map(|g| lr.frame.project(&Rationals, g))
        .collect();
    let mut term = Subspace::span(lr.dim, &gens);
    loop {
        if term.dim() == 0 {
            return Ok(true);
        }
        let mut vs = Vec::new();
        for g in &gens {
            for t in term.basis_vectors() {
                vs.push(lr.bracket(g, &t));
            }
        }
        let next = Subspace::span(lr.dim, &vs);
        if next.dim() == term.dim() {
            return Ok(false);
        }
        term = next;
    }
}

/// Ring generator `i` as a carrier element.
pub fn generator(r: &LieRing, i: usize) -> Vector {
    r.carrier().unit(i)
}

/// Integer scalar multiple of a vector.
pub fn scale(v: &[Int], c: i64) -> Vector {
    let c = Int::from(c);
    v.iter().map(|x| x * &c).collect()
}

/// Sum of two vectors.
pub fn vadd(a: &[Int], b: &[Int]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::int_vector;

    fn h3() -> LieRing {
        LieRing::from_pairs(&FGGroup::free(3), &[(0, 1, int_vector(&[0, 0, 1]))]).unwrap()
    }

    #[test]
    fn heisenberg_validates() {
        let r = h3();
        assert!(validate_lie_ring(&r).passed());
        assert_eq!(r.bracket(&int_vector(&[0, 1, 0]), &int_vector(&[1, 0, 0])), int_vector(&[0, 0, -1]));
    }

    #[test]
    fn jacobi_failure_witness() {
        let g = FGGroup::free(3);
        let pairs = [
            (0, 1, int_vector(&[1, 0, 0])),
            (1, 2, int_vector(&[0, 1, 0])),
            (2, 0, int_vector(&[0, 0, 1])),
        ];
        let err = LieRing::from_pairs(&g, &pairs).unwrap_err();
        match err {
            AlgebraError::AxiomViolated { axiom, witness } => {
                assert_eq!(axiom, "jacobi");
                assert_eq!(witness, "(e1, e2, e3): Jacobi sum [1, 1, 1]");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alternation_is_stricter_than_antisymmetry() {
        // in Z/2, [e1,e1] = e1 is antisymmetric but not alternating
        let g = FGGroup::cyclic(&[2]);
        let err = LieRing::new(&g, vec![vec![int_vector(&[1])]]).unwrap_err();
        assert!(matches!(err, AlgebraError::AxiomViolated { ref axiom, .. } if axiom == "alternating"));
    }

    #[test]
    fn heisenberg_series_and_centers() {
        let r = h3();
        let s = lower_central_series(&r);
        assert_eq!(s.verdict, Nilpotency::Nilpotent(2));
        assert_eq!(s.terms.len(), 3);
        let e3 = r.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap();
        assert_eq!(s.terms[1], e3);
        assert_eq!(iterated_center(&r, 1).unwrap(), e3);
        assert!(iterated_center(&r, 2).unwrap().is_whole());
    }

    #[test]
    fn non_nilpotent_two_dimensional() {
        let r = LieRing::from_pairs(&FGGroup::free(2), &[(0, 1, int_vector(&[0, 2]))]).unwrap();
        let s = lower_central_series(&r);
        assert_eq!(s.verdict, Nilpotency::NotNilpotent);
        assert_eq!(s.rational_limit_rank, 1);
        assert!(!s.stabilized);
    }

    #[test]
    fn centralisers_and_normalisers() {
        let r = h3();
        let e1 = r.carrier().subgroup_of(&[int_vector(&[1, 0, 0])]).unwrap();
        let e13 = r
            .carrier()
            .subgroup_of(&[int_vector(&[1, 0, 0]), int_vector(&[0, 0, 1])])
            .unwrap();
        let e3 = r.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap();
        assert_eq!(centraliser_over(&r, &e1, &r.zero()).unwrap(), e13);
        assert!(centraliser_over(&r, &r.whole(), &e3).unwrap().is_whole());
        assert!(centraliser_over(&r, &r.whole(), &r.whole()).unwrap().is_whole());
        assert!(normaliser(&r, &e13).unwrap().is_whole());
        assert!(!is_cartan(&r, &e13).unwrap());
    }

    #[test]
    fn characteristics() {
        assert_eq!(characteristic(&h3()), Characteristic::Zero);
        let g = FGGroup::cyclic(&[5, 5, 5]);
        assert_eq!(characteristic(&LieRing::abelian(&g)), Characteristic::Prime(5));
        let mixed = FGGroup::cyclic(&[0, 2]);
        assert_eq!(characteristic(&LieRing::abelian(&mixed)), Characteristic::Undefined);
        assert_eq!(characteristic(&LieRing::abelian(&FGGroup::cyclic(&[4]))), Characteristic::Undefined);
    }

    #[test]
    fn quotient_ring_of_heisenberg_is_abelian() {
        let r = h3();
        let e3 = r.carrier().subgroup_of(&[int_vector(&[0, 0, 1])]).unwrap();
        let (q, _) = quotient_ring(&r, &e3).unwrap();
        assert!(q.is_abelian());
        let e1 = r.carrier().subgroup_of(&[int_vector(&[1, 0, 0])]).unwrap();
        assert!(matches!(quotient_ring(&r, &e1), Err(AlgebraError::NotAnIdeal(_))));
    }

    #[test]
    fn adjoint_action_reads_bracket() {
        let r = h3();
        let m = adjoint_module(&r).unwrap();
        assert_eq!(m.act(&int_vector(&[1, 0, 0]), &int_vector(&[0, 1, 0])), int_vector(&[0, 0, 1]));
        assert_eq!(m.act(&int_vector(&[1, 0, 0]), &int_vector(&[0, 0, 1])), int_vector(&[0, 0, 0]));
        assert!(adjoint_module(&LieRing::abelian(&FGGroup::free(2))).unwrap().is_trivial_action());
    }

    #[test]
    fn representation_condition_enforced() {
        // Z^2 abelian acting on Z^2 by two non-commuting matrices
        let r = LieRing::abelian(&FGGroup::free(2));
        let a = Matrix::new(2, 2, int_vector(&[0, 1, 0, 0]));
        let b = Matrix::new(2, 2, int_vector(&[0, 0, 1, 0]));
        let err = LieModule::from_matrices(&r, &FGGroup::free(2), &[a, b]).unwrap_err();
        assert!(matches!(err, AlgebraError::AxiomViolated { ref axiom, .. } if axiom == "representation"));
    }
}
