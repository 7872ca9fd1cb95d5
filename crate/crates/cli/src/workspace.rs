//! Input documents: parsing, validation into core objects, printing.

use std::collections::BTreeMap;

use alr_core::fgab::{FGGroup, GroupHom, Subgroup, Vector};
use alr_core::liering::{adjoint_module, LieModule, LieRing, Tensor};
use alr_core::matrix::Matrix;
use alr_core::seq::{ModuleMap, ShortExactSeq};
use alr_core::{AlgebraError, Int};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

fn version() -> String {
    SCHEMA_VERSION.to_string()
}

fn is_empty<T>(v: &[T]) -> bool {
    v.is_empty()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default = "version")]
    pub schema_version: String,
    #[serde(default)]
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub rings: Vec<RingSpec>,
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub subgroups: Vec<SubgroupSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub sequences: Vec<SequenceSpec>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub name: String,
    /// Either inline generators (and relations) or a named group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub relations: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub bracket: Vec<BracketEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<i64>,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    #[default]
    Explicit,
    Adjoint,
    Trivial,
}

fn is_explicit(k: &ModuleKind) -> bool {
    *k == ModuleKind::Explicit
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub name: String,
    pub ring: String,
    #[serde(default, skip_serializing_if = "is_explicit")]
    pub kind: ModuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub relations: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "is_empty")]
    pub action: Vec<ActionEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    /// Ring generator.
    pub ring: String,
    /// Module generator.
    pub element: String,
    pub value: Vec<i64>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub name: String,
    /// A group, ring or module.
    pub of: String,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    /// Image of each source generator.
    pub images: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub name: String,
    /// `A' -> A` and `A -> A''`, or
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<[String; 2]>,
    /// a module with a named submodule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submodule: Option<String>,
}

/// One located problem in a document.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug)]
pub enum Object {
    Group(FGGroup),
    Ring(LieRing),
    Module(LieModule),
    Subgroup { owner: String, subgroup: Subgroup },
    Map(ModuleMap),
    Sequence(ShortExactSeq),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Ring(_) => "ring",
            Object::Module(_) => "module",
            Object::Subgroup { .. } => "subgroup",
            Object::Map(_) => "map",
            Object::Sequence(_) => "sequence",
        }
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub document: Document,
    objects: BTreeMap<String, Object>,
    names: BTreeMap<String, Vec<String>>,
}

struct Builder<'a> {
    source: &'a str,
    ws: Workspace,
    errors: Vec<InputError>,
    /// Every name seen so far, valid or not, with its definition count.
    claimed: BTreeMap<String, usize>,
    /// Lines of `"name": "..."` occurrences, by name.
    definitions: BTreeMap<String, Vec<usize>>,
}

fn line_of(source: &str, name: &str) -> Option<usize> {
    let needle = format!("\"{name}\"");
    source.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// Lines on which each `"name": "X"` definition appears, in order.
fn definition_lines(source: &str) -> BTreeMap<String, Vec<usize>> {
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, line) in source.lines().enumerate() {
        let mut rest = line;
        while let Some(p) = rest.find("\"name\"") {
            rest = rest[p + 6..].trim_start();
            let Some(r) = rest.strip_prefix(':') else { continue };
            let r = r.trim_start();
            let Some(r) = r.strip_prefix('"') else { continue };
            if let Some(end) = r.find('"') {
                out.entry(r[..end].to_string()).or_default().push(i + 1);
                rest = &r[end..];
            }
        }
    }
    out
}

fn int_vec(v: &[i64]) -> Vector {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Replaces positional tokens `e3` (ring generator) and `v2` (module
/// generator) in a core witness by the declared generator names.
fn rename_witness(w: &str, ring: &[String], module: &[String]) -> String {
    let chars: Vec<char> = w.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let boundary = i == 0 || !chars[i - 1].is_alphanumeric();
        let names = match c {
            'e' => ring,
            'v' => module,
            _ => &[][..],
        };
        let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
        let end = i + 1 + digits.len();
        let word_ends = end >= chars.len() || !chars[end].is_alphanumeric();
        if boundary && word_ends && !digits.is_empty() && !names.is_empty() {
            if let Some(n) = digits.parse::<usize>().ok().and_then(|k| k.checked_sub(1)).and_then(|k| names.get(k)) {
                out.push_str(n);
                i = end;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    out
}

impl<'a> Builder<'a> {
    /// Line of the most recent definition of `object`.
    fn line(&self, object: &str) -> Option<usize> {
        let k = self.claimed.get(object).copied().unwrap_or(1).max(1);
        self.definitions
            .get(object)
            .and_then(|ls| ls.get(k - 1).or(ls.last()).copied())
            .or_else(|| line_of(self.source, object))
    }

    fn error(&mut self, kind: &'static str, object: &str, message: String) {
        self.errors.push(InputError {
            kind,
            line: self.line(object),
            object: Some(object.to_string()),
            axiom: None,
            witness: None,
            message,
        });
    }

    fn algebra_error(&mut self, object: &str, e: AlgebraError) {
        self.named_error(object, e, &[], &[]);
    }

    fn named_error(&mut self, object: &str, e: AlgebraError, ring: &[String], module: &[String]) {
        let (axiom, witness) = match &e {
            AlgebraError::AxiomViolated { axiom, witness } => {
                (Some(axiom.clone()), Some(rename_witness(witness, ring, module)))
            }
            _ => (None, None),
        };
        self.errors.push(InputError {
            kind: "validation",
            line: self.line(object),
            object: Some(object.to_string()),
            axiom,
            witness,
            message: e.to_string(),
        });
    }

    fn claim(&mut self, name: &str) -> bool {
        let seen = self.claimed.entry(name.to_string()).or_insert(0);
        *seen += 1;
        if *seen > 1 {
            self.error("duplicate", name, format!("name '{name}' is defined twice"));
            return false;
        }
        true
    }

    fn insert(&mut self, name: &str, obj: Object, generators: Vec<String>) {
        self.ws.objects.insert(name.to_string(), obj);
        self.ws.names.insert(name.to_string(), generators);
    }

    fn group(&mut self, owner: &str, generators: &[String], relations: &[Vec<i64>]) -> Option<FGGroup> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                self.error("duplicate", owner, format!("generator '{g}' repeated"));
                return None;
            }
        }
        if let Some(r) = relations.iter().find(|r| r.len() != n) {
            self.error("validation", owner, format!("relation {r:?} does not have {n} coefficients"));
            return None;
        }
        let cols: Vec<Vector> = relations.iter().map(|r| int_vec(r)).collect();
        match FGGroup::new(n, Matrix::from_columns(n, &cols)) {
            Ok(g) => Some(g),
            Err(e) => {
                self.algebra_error(owner, e);
                None
            }
        }
    }

    /// Carrier and generator names, inline or from a named group.
    fn carrier(
        &mut self,
        owner: &str,
        named: &Option<String>,
        generators: &[String],
        relations: &[Vec<i64>],
    ) -> Option<(FGGroup, Vec<String>)> {
        match named {
            Some(g) => match self.ws.objects.get(g) {
                Some(Object::Group(grp)) => Some((grp.clone(), self.ws.names[g].clone())),
                _ => {
                    self.error("reference", owner, format!("'{g}' is not a group"));
                    None
                }
            },
            None => Some((self.group(owner, generators, relations)?, generators.to_vec())),
        }
    }

    fn position(&mut self, owner: &str, names: &[String], g: &str) -> Option<usize> {
        let p = names.iter().position(|n| n == g);
        if p.is_none() {
            self.error("reference", owner, format!("unknown generator '{g}'"));
        }
        p
    }

    fn vector(&mut self, owner: &str, v: &[i64], len: usize) -> Option<Vector> {
        if v.len() != len {
            self.error("validation", owner, format!("{v:?} does not have {len} coefficients"));
            return None;
        }
        Some(int_vec(v))
    }

    fn ring(&mut self, spec: &RingSpec) -> Option<()> {
        let (carrier, names) = self.carrier(&spec.name, &spec.carrier, &spec.generators, &spec.relations)?;
        let n = names.len();
        let mut tensor: Tensor = vec![vec![vec![Int::from(0); n]; n]; n];
        for e in &spec.bracket {
            let i = self.position(&spec.name, &names, &e.left)?;
            let j = self.position(&spec.name, &names, &e.right)?;
            let v = self.vector(&spec.name, &e.value, n)?;
            if i == j {
                self.error("validation", &spec.name, format!("bracket of '{}' with itself", e.left));
                return None;
            }
            let neg: Vector = v.iter().map(|x| -x).collect();
            tensor[i][j] = v;
            tensor[j][i] = neg;
        }
        match LieRing::new(&carrier, tensor) {
            Ok(r) => {
                self.insert(&spec.name, Object::Ring(r), names);
                Some(())
            }
            Err(e) => {
                self.named_error(&spec.name, e, &names, &[]);
                None
            }
        }
    }

    fn module(&mut self, spec: &ModuleSpec) -> Option<()> {
        let ring = match self.ws.objects.get(&spec.ring) {
            Some(Object::Ring(r)) => r.clone(),
            _ => {
                self.error("reference", &spec.name, format!("'{}' is not a ring", spec.ring));
                return None;
            }
        };
        let ring_names = self.ws.names[&spec.ring].clone();
        let mut declared = Vec::new();
        let built = match spec.kind {
            ModuleKind::Adjoint => adjoint_module(&ring).map(|m| (m, ring_names.clone())),
            ModuleKind::Trivial => {
                let (carrier, names) = self.carrier(&spec.name, &spec.carrier, &spec.generators, &spec.relations)?;
                Ok((LieModule::trivial(&ring, &carrier), names))
            }
            ModuleKind::Explicit => {
                let (carrier, names) = self.carrier(&spec.name, &spec.carrier, &spec.generators, &spec.relations)?;
                declared = names.clone();
                let k = names.len();
                let n = ring.generator_count();
                let mut tensor: Tensor = vec![vec![vec![Int::from(0); k]; k]; n];
                for e in &spec.action {
                    let i = self.position(&spec.name, &ring_names, &e.ring)?;
                    let j = self.position(&spec.name, &names, &e.element)?;
                    tensor[i][j] = self.vector(&spec.name, &e.value, k)?;
                }
                LieModule::new(&ring, &carrier, tensor).map(|m| (m, names))
            }
        };
        match built {
            Ok((m, names)) => {
                self.insert(&spec.name, Object::Module(m), names);
                Some(())
            }
            Err(e) => {
                self.named_error(&spec.name, e, &ring_names, &declared);
                None
            }
        }
    }

    fn subgroup(&mut self, spec: &SubgroupSpec) -> Option<()> {
        let ambient = match self.ws.objects.get(&spec.of) {
            Some(Object::Group(g)) => g.clone(),
            Some(Object::Ring(r)) => r.carrier().clone(),
            Some(Object::Module(m)) => m.carrier().clone(),
            _ => {
                self.error("reference", &spec.name, format!("'{}' is not a group, ring or module", spec.of));
                return None;
            }
        };
        let n = ambient.ambient_rank();
        let mut gens = Vec::new();
        for g in &spec.generators {
            gens.push(self.vector(&spec.name, g, n)?);
        }
        match ambient.subgroup_of(&gens) {
            Ok(s) => {
                self.insert(
                    &spec.name,
                    Object::Subgroup {
                        owner: spec.of.clone(),
                        subgroup: s,
                    },
                    Vec::new(),
                );
                Some(())
            }
            Err(e) => {
                self.algebra_error(&spec.name, e);
                None
            }
        }
    }

    fn module_ref(&mut self, owner: &str, name: &str) -> Option<LieModule> {
        match self.ws.objects.get(name) {
            Some(Object::Module(m)) => Some(m.clone()),
            _ => {
                self.error("reference", owner, format!("'{name}' is not a module"));
                None
            }
        }
    }

    fn map(&mut self, spec: &MapSpec) -> Option<()> {
        let source = self.module_ref(&spec.name, &spec.source)?;
        let target = self.module_ref(&spec.name, &spec.target)?;
        let k = target.carrier().ambient_rank();
        if spec.images.len() != source.carrier().ambient_rank() {
            self.error("validation", &spec.name, "one image per source generator is required".into());
            return None;
        }
        let mut cols = Vec::new();
        for v in &spec.images {
            cols.push(self.vector(&spec.name, v, k)?);
        }
        let built = GroupHom::new(source.carrier(), target.carrier(), Matrix::from_columns(k, &cols))
            .and_then(|h| ModuleMap::new(&source, &target, h));
        match built {
            Ok(m) => {
                self.insert(&spec.name, Object::Map(m), Vec::new());
                Some(())
            }
            Err(e) => {
                self.algebra_error(&spec.name, e);
                None
            }
        }
    }

    fn sequence(&mut self, spec: &SequenceSpec) -> Option<()> {
        let built = match (&spec.maps, &spec.module, &spec.submodule) {
            (Some([i, p]), None, None) => {
                let get = |b: &mut Self, n: &str| match b.ws.objects.get(n) {
                    Some(Object::Map(m)) => Some(m.clone()),
                    _ => {
                        b.error("reference", &spec.name, format!("'{n}' is not a map"));
                        None
                    }
                };
                let i = get(self, i)?;
                let p = get(self, p)?;
                ShortExactSeq::new(i, p)
            }
            (None, Some(m), Some(w)) => {
                let module = self.module_ref(&spec.name, m)?;
                let sub = match self.ws.objects.get(w) {
                    Some(Object::Subgroup { owner, subgroup }) if owner == m => subgroup.clone(),
                    _ => {
                        self.error("reference", &spec.name, format!("'{w}' is not a subgroup of '{m}'"));
                        return None;
                    }
                };
                ShortExactSeq::from_submodule(&module, &sub)
            }
            _ => {
                self.error("validation", &spec.name, "give either maps or module and submodule".into());
                return None;
            }
        };
        match built {
            Ok(s) => {
                self.insert(&spec.name, Object::Sequence(s), Vec::new());
                Some(())
            }
            Err(e) => {
                self.algebra_error(&spec.name, e);
                None
            }
        }
    }
}

impl Workspace {
    /// Parses and validates a document, collecting every located error.
    pub fn parse(source: &str) -> Result<Workspace, Vec<InputError>> {
        let document: Document = serde_json::from_str(source).map_err(|e| {
            vec![InputError {
                kind: "syntax",
                line: Some(e.line()),
                object: None,
                axiom: None,
                witness: None,
                message: e.to_string(),
            }]
        })?;
        Workspace::from_document(document, source)
    }

    pub fn from_document(document: Document, source: &str) -> Result<Workspace, Vec<InputError>> {
        let mut b = Builder {
            source,
            ws: Workspace {
                document: document.clone(),
                objects: BTreeMap::new(),
                names: BTreeMap::new(),
            },
            errors: Vec::new(),
            claimed: BTreeMap::new(),
            definitions: definition_lines(source),
        };
        if document.schema_version != SCHEMA_VERSION {
            b.errors.push(InputError {
                kind: "validation",
                line: line_of(source, "schema_version"),
                object: None,
                axiom: None,
                witness: None,
                message: format!("unsupported schema version '{}'", document.schema_version),
            });
            return Err(b.errors);
        }
        for g in &document.groups {
            if b.claim(&g.name) {
                if let Some(grp) = b.group(&g.name, &g.generators, &g.relations) {
                    b.insert(&g.name, Object::Group(grp), g.generators.clone());
                }
            }
        }
        for r in &document.rings {
            if b.claim(&r.name) {
                b.ring(r);
            }
        }
        for m in &document.modules {
            if b.claim(&m.name) {
                b.module(m);
            }
        }
        for s in &document.subgroups {
            if b.claim(&s.name) {
                b.subgroup(s);
            }
        }
        for m in &document.maps {
            if b.claim(&m.name) {
                b.map(m);
            }
        }
        for s in &document.sequences {
            if b.claim(&s.name) {
                b.sequence(s);
            }
        }
        if b.errors.is_empty() {
            Ok(b.ws)
        } else {
            Err(b.errors)
        }
    }

    /// The document in canonical form: current schema version, zero
    /// bracket and action entries dropped.
    pub fn canonical_document(&self) -> Document {
        let mut d = self.document.clone();
        d.schema_version = SCHEMA_VERSION.to_string();
        for r in &mut d.rings {
            r.bracket.retain(|e| e.value.iter().any(|&x| x != 0));
        }
        for m in &mut d.modules {
            m.action.retain(|e| e.value.iter().any(|&x| x != 0));
        }
        d
    }

    pub fn print(&self) -> String {
        serde_json::to_string_pretty(&self.canonical_document()).expect("documents serialise")
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    pub fn generator_names(&self, name: &str) -> &[String] {
        self.names.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, kind: &str) -> usize {
        self.objects.values().filter(|o| o.kind() == kind).count()
    }

    pub fn names_of_kind(&self, kind: &str) -> Vec<String> {
        self.objects
            .iter()
            .filter(|(_, o)| o.kind() == kind)
            .map(|(n, _)| n.clone())
            .collect()
    }
}
