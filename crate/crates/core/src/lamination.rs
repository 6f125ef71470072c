//! Finite-depth lamination diagnostics: regular words, legal turns, Whitehead
//! graphs, carried subgraphs, diagonal closure and recurrence.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{LaminationError, SystemError};
use crate::forest::Loc;
use crate::graph::GraphGamma;
use crate::language::{enumerate, Enumeration};
use crate::par::Exec;
use crate::system::{SystemOfIsometries, Sym, Word};
use crate::tree::UnionFind;

/// Default legality depth.
pub const DEFAULT_LEGALITY_DEPTH: usize = 8;

/// Admissible words of length `n` with nondegenerate domain.
pub fn regular_words(s: &SystemOfIsometries, n: usize) -> Result<BTreeSet<Word>, SystemError> {
    regular_words_with(s, n, Exec::default())
}

pub fn regular_words_with(s: &SystemOfIsometries, n: usize, exec: Exec) -> Result<BTreeSet<Word>, SystemError> {
    Ok(enumerate(s, Enumeration::regular(n).with_exec(exec))?.regular(n))
}

/// An unordered pair of distinct directed edges leaving `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn {
    pub vertex: usize,
    pub pair: (Sym, Sym),
}

impl Turn {
    pub fn new(vertex: usize, e: Sym, f: Sym) -> Turn {
        Turn { vertex, pair: if e <= f { (e, f) } else { (f, e) } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainTrack {
    pub graph: GraphGamma,
    pub legal: BTreeSet<Turn>,
    pub depth: usize,
}

impl TrainTrack {
    pub fn is_legal(&self, t: &Turn) -> bool {
        self.legal.contains(t)
    }

    /// All turns of the graph.
    pub fn turns(&self) -> Vec<Turn> {
        let mut out = Vec::new();
        for v in 0..self.graph.vertex_count() {
            let outs = self.graph.outgoing(v);
            for (i, &e) in outs.iter().enumerate() {
                for &f in &outs[i + 1..] {
                    out.push(Turn::new(v, e, f));
                }
            }
        }
        out
    }
}

/// A turn `{e, e'}` is legal when some regular word `u ē e' v` with `|u| = |v| = L` exists.
pub fn legal_turns(s: &SystemOfIsometries, depth: usize) -> Result<TrainTrack, SystemError> {
    legal_turns_with(s, depth, Exec::default())
}

pub fn legal_turns_with(s: &SystemOfIsometries, depth: usize, exec: Exec) -> Result<TrainTrack, SystemError> {
    let graph = s.graph();
    let words = regular_words_with(s, 2 * depth + 2, exec)?;
    let legal = words
        .iter()
        .map(|w| {
            let e = w.0[depth].inv();
            Turn::new(graph.source(e), e, w.0[depth + 1])
        })
        .collect();
    Ok(TrainTrack { graph, legal, depth })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub vertex: usize,
    /// `I(v)`.
    pub nodes: Vec<Sym>,
    pub links: Vec<(Sym, Sym)>,
    /// Connected components of the link graph, each sorted.
    pub components: Vec<Vec<Sym>>,
}

impl WhiteheadGraph {
    pub fn connected(&self) -> bool {
        self.components.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadReport {
    pub depth: usize,
    pub graphs: Vec<WhiteheadGraph>,
}

impl WhiteheadReport {
    pub fn all_connected(&self) -> bool {
        self.graphs.iter().all(WhiteheadGraph::connected)
    }
}

pub fn whitehead_graph(tt: &TrainTrack, v: usize) -> WhiteheadGraph {
    let nodes = tt.graph.outgoing(v);
    let links: Vec<(Sym, Sym)> = tt.legal.iter().filter(|t| t.vertex == v).map(|t| t.pair).collect();
    let pos: BTreeMap<Sym, usize> = nodes.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut uf = UnionFind::new(nodes.len());
    for (a, b) in &links {
        uf.union(pos[a], pos[b]);
    }
    let mut classes: BTreeMap<usize, Vec<Sym>> = BTreeMap::new();
    for (i, &s) in nodes.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().push(s);
    }
    let mut components: Vec<Vec<Sym>> = classes.into_values().collect();
    components.sort();
    WhiteheadGraph { vertex: v, nodes, links, components }
}

pub fn whitehead_report(tt: &TrainTrack) -> WhiteheadReport {
    WhiteheadReport { depth: tt.depth, graphs: (0..tt.graph.vertex_count()).map(|v| whitehead_graph(tt, v)).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarriedSubgraph {
    pub edges: BTreeSet<usize>,
    pub vertices: BTreeSet<usize>,
    pub betti: usize,
    /// Proper subgraph of smaller rank.
    pub proper_free_factor: bool,
}

/// The smallest subgraph of Γ containing every edge crossed by `words`.
pub fn carried_subgraph(s: &SystemOfIsometries, words: &BTreeSet<Word>) -> CarriedSubgraph {
    let g = s.graph();
    let edges: BTreeSet<usize> = words.iter().flat_map(|w| w.0.iter().map(|x| x.index)).collect();
    let vertices: BTreeSet<usize> = edges.iter().flat_map(|&e| [g.edges[e].0, g.edges[e].1]).collect();
    let betti = g.sub_betti(&edges);
    let proper = edges.len() < g.edge_count() || vertices.len() < g.vertex_count();
    CarriedSubgraph { edges, vertices, betti, proper_free_factor: proper && betti < g.betti() }
}

/// A one-sided leaf through the basepoint, truncated to a finite word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfLeaf {
    pub basepoint: Loc,
    pub word: Word,
}

impl HalfLeaf {
    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

/// Two-sided leaves through one basepoint, as ordered pairs of half-leaf indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSet {
    pub basepoint: Loc,
    pub halves: Vec<HalfLeaf>,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl LeafSet {
    pub fn new(basepoint: Loc) -> LeafSet {
        LeafSet { basepoint, halves: Vec::new(), pairs: BTreeSet::new() }
    }

    /// Index of the half with this word, adding it if new.
    pub fn half(&mut self, word: Word) -> usize {
        if let Some(i) = self.halves.iter().position(|h| h.word == word) {
            return i;
        }
        self.halves.push(HalfLeaf { basepoint: self.basepoint.clone(), word });
        self.halves.len() - 1
    }

    pub fn add_pair(&mut self, x: Word, y: Word) {
        let i = self.half(x);
        let j = self.half(y);
        self.pairs.insert((i, j));
    }

    pub fn is_flip_invariant(&self) -> bool {
        self.pairs.iter().all(|&(i, j)| self.pairs.contains(&(j, i)))
    }
}

/// Closure under chaining `(X1, X2), (X2, X3) => (X1, X3)` and the flip.
pub fn diagonal_closure(ls: &LeafSet) -> Result<LeafSet, LaminationError> {
    if ls.halves.iter().any(|h| h.basepoint != ls.basepoint) {
        return Err(LaminationError::BasepointMismatch);
    }
    let n = ls.halves.len();
    if let Some(&(i, j)) = ls.pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
        return Err(LaminationError::UnknownHalf(i.max(j)));
    }
    let mut uf = UnionFind::new(n);
    for &(i, j) in &ls.pairs {
        uf.union(i, j);
    }
    let mut pairs = ls.pairs.clone();
    let touched: BTreeSet<usize> = ls.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    for &i in &touched {
        for &j in &touched {
            if i != j && uf.find(i) == uf.find(j) {
                pairs.insert((i, j));
            }
        }
    }
    Ok(LeafSet { basepoint: ls.basepoint.clone(), halves: ls.halves.clone(), pairs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalityVerdict {
    /// Every regular word of length `R` contains every regular word of length `n`
    /// (or its inverse).
    Pass,
    Fail { long: Word, short: Word },
    /// The enumeration budget ran out.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub n: usize,
    pub r: usize,
    pub verdict: MinimalityVerdict,
    /// Number of regular words of each length `1..=R`.
    pub complexity: Vec<usize>,
    /// The complexity stops growing somewhere in `[n, R]`.
    pub eventually_periodic: bool,
}

/// Uniform-recurrence test of the regular language at lengths `n <= R`.
pub fn minimality_diagnostic(
    s: &SystemOfIsometries,
    n: usize,
    r: usize,
    max_words: Option<usize>,
) -> Result<MinimalityReport, SystemError> {
    assert!(1 <= n && n <= r, "need 1 <= n <= R");
    let lang = match enumerate(s, Enumeration::regular(r).with_cap(max_words)) {
        Ok(l) => l,
        Err(SystemError::BudgetExceeded(_)) => {
            return Ok(MinimalityReport {
                n,
                r,
                verdict: MinimalityVerdict::Inconclusive,
                complexity: Vec::new(),
                eventually_periodic: false,
            })
        }
        Err(e) => return Err(e),
    };
    let complexity: Vec<usize> = (1..=r).map(|m| lang.level(m).len()).collect();
    let eventually_periodic = (n..r).any(|m| complexity[m] <= complexity[m - 1]);
    let short = lang.regular(n);
    let long = lang.regular(r);
    let mut verdict = MinimalityVerdict::Pass;
    'outer: for w in &long {
        for u in &short {
            if !w.contains_factor(u) && !w.contains_factor(&u.inverse()) {
                verdict = MinimalityVerdict::Fail { long: w.clone(), short: u.clone() };
                break 'outer;
            }
        }
    }
    Ok(MinimalityReport { n, r, verdict, complexity, eventually_periodic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::build_forest;
    use crate::forest::TreeSpec;
    use crate::scalar::{Field, Scalar};
    use crate::system::tests::at;
    use crate::system::{LetterSpec, SystemSpec};

    /// Two reflections on disjoint unit segments of `[0, 3]`.
    fn reflections() -> SystemOfIsometries {
        let f = build_forest(&[TreeSpec {
            name: "F".into(),
            vertices: vec!["l".into(), "r".into()],
            edges: vec![("e".into(), "l".into(), "r".into(), Scalar::int(3))],
        }])
        .unwrap();
        let x = |n: i64| at(&f, Scalar::int(n));
        let a = LetterSpec { name: "a".into(), anchors: vec![(x(0), x(1)), (x(1), x(0))] };
        let b = LetterSpec { name: "b".into(), anchors: vec![(x(2), x(3)), (x(3), x(2))] };
        SystemSpec { field: Field::Rational, forest: f, letters: vec![a, b], rank_hint: None }.build().unwrap()
    }

    #[test]
    fn reflections_split_the_whitehead_graph() {
        let s = reflections();
        let tt = legal_turns(&s, 3).unwrap();
        let wh = whitehead_report(&tt);
        assert!(!wh.all_connected());
        let comps = &wh.graphs[0].components;
        assert_eq!(comps, &vec![vec![Sym::pos(0), Sym::neg(0)], vec![Sym::pos(1), Sym::neg(1)]]);
    }

    #[test]
    fn carried_single_petal() {
        let s = reflections();
        let words: BTreeSet<Word> = [s.parse_word("a a").unwrap()].into();
        let c = carried_subgraph(&s, &words);
        assert_eq!(c.betti, 1);
        assert!(c.proper_free_factor);
        assert!(carried_subgraph(&s, &BTreeSet::new()).proper_free_factor);
        let all: BTreeSet<Word> = [s.parse_word("a b").unwrap()].into();
        assert!(!carried_subgraph(&s, &all).proper_free_factor);
    }

    #[test]
    fn chaining_adds_the_diagonal() {
        let s = reflections();
        let base = at(&s.forest, Scalar::zero());
        let mut ls = LeafSet::new(base);
        let w = |t: &str| s.parse_word(t).unwrap();
        ls.add_pair(w("a"), w("a a"));
        ls.add_pair(w("a a"), w("a a a"));
        let c = diagonal_closure(&ls).unwrap();
        assert!(c.pairs.contains(&(0, 2)));
        assert!(c.is_flip_invariant());
        assert_eq!(c.pairs.len(), 6);
        assert_eq!(diagonal_closure(&c).unwrap(), c);
    }

    #[test]
    fn mismatched_basepoint_is_rejected() {
        let s = reflections();
        let mut ls = LeafSet::new(at(&s.forest, Scalar::zero()));
        ls.halves.push(HalfLeaf { basepoint: at(&s.forest, Scalar::one()), word: Word::empty() });
        assert_eq!(diagonal_closure(&ls).unwrap_err(), LaminationError::BasepointMismatch);
        let mut ls = LeafSet::new(at(&s.forest, Scalar::zero()));
        ls.pairs.insert((0, 1));
        assert_eq!(diagonal_closure(&ls).unwrap_err(), LaminationError::UnknownHalf(1));
    }

    #[test]
    fn reflections_are_not_recurrent() {
        let r = minimality_diagnostic(&reflections(), 1, 4, None).unwrap();
        assert!(matches!(r.verdict, MinimalityVerdict::Fail { .. }));
        assert!(r.eventually_periodic);
    }
}
