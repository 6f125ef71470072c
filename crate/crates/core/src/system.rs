//! Systems of isometries `S = (F, A)`, symbols of `A^{±1}`, words and their composition.

use std::cmp::Ordering;

use crate::error::SystemError;
use crate::forest::{Forest, Loc, Subtree, TreeId};
use crate::graph::GraphGamma;
use crate::isometry::{AnchorFault, PartialIsometry};
use crate::scalar::{Field, Scalar};
use crate::tree::Point;

/// A letter of `A^{±1}`: `index` into the letter list, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub index: usize,
    pub inverse: bool,
}

impl Sym {
    pub fn pos(index: usize) -> Sym {
        Sym { index, inverse: false }
    }

    pub fn neg(index: usize) -> Sym {
        Sym { index, inverse: true }
    }

    pub fn inv(self) -> Sym {
        Sym { index: self.index, inverse: !self.inverse }
    }

    /// Dense id: `2 * index + inverse`.
    pub fn id(self) -> usize {
        2 * self.index + usize::from(self.inverse)
    }

    pub fn from_id(id: usize) -> Sym {
        Sym { index: id / 2, inverse: id % 2 == 1 }
    }
}

/// A finite word over `A^{±1}`, ordered length-first then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Sym>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_cancellation(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[1] == w[0].inv())
    }

    pub fn is_reduced(&self) -> bool {
        self.first_cancellation().is_none()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inv()).collect())
    }

    pub fn contains_factor(&self, w: &Word) -> bool {
        w.is_empty() || self.0.windows(w.len()).any(|x| x == w.0.as_slice())
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Sym> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Word(out)
    }

    pub fn display(&self, sys: &SystemOfIsometries) -> String {
        if self.is_empty() {
            return "()".to_string();
        }
        self.0.iter().map(|&s| sys.sym_name(s)).collect::<Vec<_>>().join(" ")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A letter as given in a document: a name and anchor pairs across the forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterSpec {
    pub name: String,
    pub anchors: Vec<(Loc, Loc)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub map: PartialIsometry,
}

/// An unvalidated system, as read from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub field: Field,
    pub forest: Forest,
    pub letters: Vec<LetterSpec>,
    pub rank_hint: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemOfIsometries {
    pub field: Field,
    pub forest: Forest,
    pub letters: Vec<Letter>,
    pub rank_hint: Option<usize>,
    sym_maps: Vec<PartialIsometry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterFault {
    /// Domain or image generators span several components.
    ContainmentViolation(String),
    IsometryViolation(String),
    FieldViolation(String),
    DuplicateName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterCheck {
    pub name: String,
    pub faults: Vec<LetterFault>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub field: Field,
    pub letters: Vec<LetterCheck>,
    pub forest_field_ok: bool,
    pub gamma_connected: Option<bool>,
    pub betti: Option<usize>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.forest_field_ok && self.letters.iter().all(|l| l.faults.is_empty())
    }

    pub fn first_failure(&self) -> Option<String> {
        if !self.forest_field_ok {
            return Some("edge length outside the declared field".into());
        }
        self.letters.iter().find(|l| !l.faults.is_empty()).map(|l| format!("letter {}: {:?}", l.name, l.faults[0]))
    }
}

fn point_in_field(field: Field, p: &Point) -> bool {
    match p {
        Point::Vertex(_) => true,
        Point::Edge(_, t) => field.contains(t),
    }
}

fn check_letter(spec: &SystemSpec, l: &LetterSpec) -> Result<PartialIsometry, LetterFault> {
    let Some((d0, i0)) = l.anchors.first() else {
        return Err(LetterFault::ContainmentViolation("no anchors".into()));
    };
    let (dt, it) = (d0.tree, i0.tree);
    for (d, i) in &l.anchors {
        if d.tree != dt {
            return Err(LetterFault::ContainmentViolation("domain spans several components".into()));
        }
        if i.tree != it {
            return Err(LetterFault::ContainmentViolation("image spans several components".into()));
        }
        if !spec.forest.contains(d) || !spec.forest.contains(i) {
            return Err(LetterFault::ContainmentViolation("anchor outside the forest".into()));
        }
        if !point_in_field(spec.field, &d.point) || !point_in_field(spec.field, &i.point) {
            return Err(LetterFault::FieldViolation("anchor offset outside the field".into()));
        }
    }
    let pairs: Vec<(Point, Point)> = l.anchors.iter().map(|(d, i)| (d.point.clone(), i.point.clone())).collect();
    PartialIsometry::from_pairs(&spec.forest, dt, it, &pairs).map_err(|f| match f {
        AnchorFault::DistanceMismatch { a, b } => LetterFault::IsometryViolation(format!(
            "distance between {} and {} not preserved",
            spec.forest.tree(dt).describe_point(&a),
            spec.forest.tree(dt).describe_point(&b)
        )),
        AnchorFault::NotDetermined(p) => LetterFault::IsometryViolation(format!(
            "image of {} not determined",
            spec.forest.tree(dt).describe_point(&p)
        )),
        other => LetterFault::ContainmentViolation(format!("{other:?}")),
    })
}

/// Checks every letter (containment, field, isometry) and reports Γ data when all pass.
pub fn validate_system(spec: &SystemSpec) -> ValidationReport {
    let forest_field_ok = spec
        .forest
        .trees()
        .iter()
        .all(|t| t.edges().iter().all(|e| spec.field.contains(&e.length)));
    let mut names = std::collections::BTreeSet::new();
    let mut letters = Vec::new();
    let mut maps = Vec::new();
    for l in &spec.letters {
        let mut faults = Vec::new();
        if !names.insert(l.name.as_str()) {
            faults.push(LetterFault::DuplicateName);
        }
        match check_letter(spec, l) {
            Ok(m) => maps.push(m),
            Err(f) => faults.push(f),
        }
        letters.push(LetterCheck { name: l.name.clone(), faults });
    }
    let mut report = ValidationReport { field: spec.field, letters, forest_field_ok, gamma_connected: None, betti: None };
    if report.pass() && maps.len() == spec.letters.len() {
        let edges: Vec<(TreeId, TreeId)> = maps.iter().map(|m| (m.domain.tree, m.image.tree)).collect();
        let g = GraphGamma::from_edges(
            spec.forest.trees().iter().map(|t| t.name().to_string()).collect(),
            spec.letters.iter().map(|l| l.name.clone()).collect(),
            edges,
        );
        report.gamma_connected = Some(g.is_connected());
        report.betti = Some(g.betti());
    }
    report
}

impl SystemSpec {
    pub fn build(&self) -> Result<SystemOfIsometries, SystemError> {
        let report = validate_system(self);
        if !report.pass() {
            return Err(SystemError::InvalidSystem(report.first_failure().unwrap_or_default()));
        }
        let letters = self
            .letters
            .iter()
            .map(|l| Letter { name: l.name.clone(), map: check_letter(self, l).expect("validated") })
            .collect();
        Ok(SystemOfIsometries::from_letters(self.field, self.forest.clone(), letters, self.rank_hint))
    }
}

impl SystemOfIsometries {
    /// Assembles a system from already-valid letters.
    pub fn from_letters(field: Field, forest: Forest, letters: Vec<Letter>, rank_hint: Option<usize>) -> Self {
        let sym_maps = letters.iter().flat_map(|l| [l.map.clone(), l.map.inverse()]).collect();
        SystemOfIsometries { field, forest, letters, rank_hint, sym_maps }
    }

    pub fn to_spec(&self) -> SystemSpec {
        SystemSpec {
            field: self.field,
            forest: self.forest.clone(),
            letters: self
                .letters
                .iter()
                .map(|l| LetterSpec {
                    name: l.name.clone(),
                    anchors: l
                        .map
                        .anchors
                        .iter()
                        .map(|(p, q)| (Loc::new(l.map.domain.tree, p.clone()), Loc::new(l.map.image.tree, q.clone())))
                        .collect(),
                })
                .collect(),
            rank_hint: self.rank_hint,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_system(&self.to_spec())
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    /// All symbols in canonical order: `a, a^-1, b, b^-1, ...`.
    pub fn syms(&self) -> Vec<Sym> {
        (0..2 * self.letters.len()).map(Sym::from_id).collect()
    }

    pub fn map(&self, s: Sym) -> &PartialIsometry {
        &self.sym_maps[s.id()]
    }

    pub fn dom(&self, s: Sym) -> &Subtree {
        &self.sym_maps[s.id()].domain
    }

    pub fn sym_name(&self, s: Sym) -> String {
        let n = &self.letters[s.index].name;
        if s.inverse {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    pub fn letter_by_name(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    pub fn parse_sym(&self, tok: &str) -> Result<Sym, SystemError> {
        let (name, inverse) = match tok.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let index = self.letter_by_name(name).ok_or_else(|| SystemError::UnknownLetter(tok.to_string()))?;
        Ok(Sym { index, inverse })
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SystemError> {
        let t = text.trim();
        if t.is_empty() || t == "()" {
            return Ok(Word::empty());
        }
        t.split_whitespace().map(|tok| self.parse_sym(tok)).collect::<Result<Vec<_>, _>>().map(Word)
    }

    /// Syms defined at `x`.
    pub fn syms_at(&self, x: &Loc) -> Vec<Sym> {
        self.syms().into_iter().filter(|&s| self.dom(s).contains(x)).collect()
    }

    pub fn apply(&self, s: Sym, x: &Loc) -> Option<Loc> {
        self.map(s).apply(&self.forest, x)
    }

    /// Associated graph Γ: one vertex per component, one edge per letter.
    pub fn graph(&self) -> GraphGamma {
        GraphGamma::from_edges(
            self.forest.trees().iter().map(|t| t.name().to_string()).collect(),
            self.letters.iter().map(|l| l.name.clone()).collect(),
            self.letters.iter().map(|l| (l.map.domain.tree, l.map.image.tree)).collect(),
        )
    }

    pub fn max_component_diameter(&self) -> Scalar {
        self.forest.max_diameter()
    }

    /// A letter name not used by the system, derived from `root`.
    pub fn fresh_name(&self, root: &str, taken: &std::collections::BTreeSet<String>) -> String {
        let base = root.split('_').next().unwrap_or(root);
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| self.letter_by_name(n).is_none() && !taken.contains(n))
            .expect("unbounded supply")
    }
}

pub fn associated_graph(s: &SystemOfIsometries) -> GraphGamma {
    s.graph()
}

/// Result of composing a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composition {
    /// The empty word: identity on every component.
    Identity,
    Map(PartialIsometry),
    Empty,
}

impl Composition {
    pub fn map(&self) -> Option<&PartialIsometry> {
        match self {
            Composition::Map(m) => Some(m),
            _ => None,
        }
    }
}

/// The maximal partial isometry `x -> x.w` of a reduced word.
pub fn compose_path(s: &SystemOfIsometries, w: &Word) -> Result<Composition, SystemError> {
    if let Some(i) = w.first_cancellation() {
        return Err(SystemError::UnreducedWord(i));
    }
    let Some((&first, rest)) = w.0.split_first() else {
        return Ok(Composition::Identity);
    };
    let mut cur = s.map(first).clone();
    for &sym in rest {
        match cur.then(&s.forest, s.map(sym)) {
            Some(next) => cur = next,
            None => return Ok(Composition::Empty),
        }
    }
    Ok(Composition::Map(cur))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::forest::{build_forest, TreeSpec};

    pub(crate) fn segment_forest(len: Scalar) -> Forest {
        build_forest(&[TreeSpec {
            name: "I".into(),
            vertices: vec!["l".into(), "r".into()],
            edges: vec![("e".into(), "l".into(), "r".into(), len)],
        }])
        .unwrap()
    }

    pub(crate) fn at(f: &Forest, x: Scalar) -> Loc {
        Loc::new(0, f.tree(0).point_on_edge(0, x).unwrap())
    }

    pub(crate) fn shift_system() -> SystemOfIsometries {
        let f = segment_forest(Scalar::int(3));
        let a = LetterSpec {
            name: "a".into(),
            anchors: vec![(at(&f, Scalar::int(0)), at(&f, Scalar::int(1))), (at(&f, Scalar::int(2)), at(&f, Scalar::int(3)))],
        };
        SystemSpec { field: Field::Rational, forest: f, letters: vec![a], rank_hint: None }.build().unwrap()
    }

    #[test]
    fn translation_validates_and_composes() {
        let s = shift_system();
        assert!(s.validate().pass());
        let w = s.parse_word("a a").unwrap();
        let m = compose_path(&s, &w).unwrap();
        let m = m.map().unwrap();
        let f = &s.forest;
        assert_eq!(m.apply(f, &at(f, Scalar::int(0))), Some(at(f, Scalar::int(2))));
        assert!(m.domain.region.contains(&at(f, Scalar::int(1)).point));
        assert!(!m.domain.region.contains(&at(f, Scalar::frac(3, 2)).point));
        assert_eq!(compose_path(&s, &Word::empty()).unwrap(), Composition::Identity);
        let bad = s.parse_word("a a^-1").unwrap();
        assert_eq!(compose_path(&s, &bad), Err(SystemError::UnreducedWord(0)));
        let aaa = compose_path(&s, &s.parse_word("a a a").unwrap()).unwrap();
        assert!(aaa.map().unwrap().is_degenerate());
        assert_eq!(compose_path(&s, &s.parse_word("a a a a").unwrap()).unwrap(), Composition::Empty);
    }

    #[test]
    fn isometry_and_containment_violations() {
        let f = segment_forest(Scalar::int(3));
        let squash = LetterSpec {
            name: "a".into(),
            anchors: vec![(at(&f, Scalar::int(0)), at(&f, Scalar::int(0))), (at(&f, Scalar::int(2)), at(&f, Scalar::int(1)))],
        };
        let spec = SystemSpec { field: Field::Rational, forest: f.clone(), letters: vec![squash], rank_hint: None };
        let r = validate_system(&spec);
        assert!(matches!(r.letters[0].faults[0], LetterFault::IsometryViolation(_)));
        let two = build_forest(&[
            TreeSpec { name: "A".into(), vertices: vec!["p".into(), "q".into()], edges: vec![("e".into(), "p".into(), "q".into(), Scalar::one())] },
            TreeSpec { name: "B".into(), vertices: vec!["p".into(), "q".into()], edges: vec![("e".into(), "p".into(), "q".into(), Scalar::one())] },
        ])
        .unwrap();
        let span = LetterSpec {
            name: "a".into(),
            anchors: vec![
                (Loc::new(0, Point::Vertex(0)), Loc::new(0, Point::Vertex(0))),
                (Loc::new(1, Point::Vertex(1)), Loc::new(0, Point::Vertex(1))),
            ],
        };
        let spec = SystemSpec { field: Field::Rational, forest: two, letters: vec![span], rank_hint: None };
        let r = validate_system(&spec);
        assert!(matches!(r.letters[0].faults[0], LetterFault::ContainmentViolation(_)));
        assert!(!r.pass());
    }

    #[test]
    fn word_order_is_length_first() {
        let a = Word(vec![Sym::pos(1)]);
        let b = Word(vec![Sym::pos(0), Sym::pos(0)]);
        assert!(a < b);
        assert_eq!(b.inverse(), Word(vec![Sym::neg(0), Sym::neg(0)]));
        assert_eq!(Word(vec![Sym::pos(0), Sym::neg(0), Sym::pos(1)]).reduced(), Word(vec![Sym::pos(1)]));
    }
}
