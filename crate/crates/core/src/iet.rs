//! Interval exchanges, classical Rauzy-Veech induction, and the comparison with
//! generalized splitting on the associated system of isometries.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{IetError, InductionError};
use crate::forest::{build_forest, Loc, Subtree, TreeSpec};
use crate::induction::{run_induction, Budget, SplitPolicy, StepKind, Zip};
use crate::scalar::{Field, Scalar};
use crate::system::{LetterSpec, SystemOfIsometries, SystemSpec, Sym, Word};
use crate::tree::{MetricTree, Point};

/// An interval exchange on `[0, Σ λ)`. Letter `j` has length `lengths[j]`;
/// `top` lists the letters in the order of their intervals and `bottom` in the
/// order of their images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalExchange {
    lengths: Vec<Scalar>,
    top: Vec<usize>,
    bottom: Vec<usize>,
    irreducible: bool,
}

fn is_permutation(p: &[usize], r: usize) -> bool {
    let mut seen = vec![false; r];
    p.len() == r && p.iter().all(|&i| i < r && !std::mem::replace(&mut seen[i], true))
}

impl IntervalExchange {
    /// `permutation[j]` is the (1-based) position of the image of the `j`-th interval.
    pub fn new(lengths: Vec<Scalar>, permutation: &[usize]) -> Result<Self, IetError> {
        let r = lengths.len();
        if permutation.len() != r || permutation.iter().any(|&p| p == 0 || p > r) {
            return Err(IetError::InvalidIet(format!("{permutation:?} is not a permutation of 1..{r}")));
        }
        let mut bottom = vec![usize::MAX; r];
        for (j, &p) in permutation.iter().enumerate() {
            bottom[p - 1] = j;
        }
        IntervalExchange::labeled(lengths, (0..r).collect(), bottom)
    }

    pub fn labeled(lengths: Vec<Scalar>, top: Vec<usize>, bottom: Vec<usize>) -> Result<Self, IetError> {
        let r = lengths.len();
        if r == 0 {
            return Err(IetError::InvalidIet("no intervals".into()));
        }
        if !is_permutation(&top, r) || !is_permutation(&bottom, r) {
            return Err(IetError::InvalidIet("orders are not permutations of the letters".into()));
        }
        if let Some(l) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(IetError::InvalidIet(format!("non-positive length {l}")));
        }
        let roots: std::collections::BTreeSet<u32> = lengths.iter().map(|l| l.root()).filter(|&d| d != 0).collect();
        if roots.len() > 1 {
            return Err(IetError::InvalidIet("lengths mix different square roots".into()));
        }
        let irreducible = (1..r).all(|k| {
            let mut a = top[..k].to_vec();
            let mut b = bottom[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a != b
        });
        Ok(IntervalExchange { lengths, top, bottom, irreducible })
    }

    /// The swap `(λ0, λ1) -> (λ1, λ0)`.
    pub fn two(l0: Scalar, l1: Scalar) -> Result<Self, IetError> {
        IntervalExchange::new(vec![l0, l1], &[2, 1])
    }

    /// The 2-interval exchange with lengths `(1, φ)`.
    pub fn golden() -> Self {
        IntervalExchange::two(Scalar::one(), Scalar::golden()).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn lengths(&self) -> &[Scalar] {
        &self.lengths
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    /// Position of each letter's image, in the order of the top intervals (1-based).
    pub fn permutation(&self) -> Vec<usize> {
        self.top.iter().map(|j| self.bottom.iter().position(|b| b == j).expect("bijection") + 1).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn field(&self) -> Field {
        self.lengths.iter().map(|l| l.root()).find(|&d| d != 0).map_or(Field::Rational, Field::Quadratic)
    }

    pub fn total(&self) -> Scalar {
        self.lengths.iter().fold(Scalar::zero(), |acc, l| &acc + l)
    }

    fn start(&self, order: &[usize], j: usize) -> Scalar {
        order.iter().take_while(|&&i| i != j).fold(Scalar::zero(), |acc, &i| &acc + &self.lengths[i])
    }

    /// `[start, end]` of letter `j`'s interval.
    pub fn top_interval(&self, j: usize) -> (Scalar, Scalar) {
        let s = self.start(&self.top, j);
        let e = &s + &self.lengths[j];
        (s, e)
    }

    /// `[start, end]` of letter `j`'s image.
    pub fn bottom_interval(&self, j: usize) -> (Scalar, Scalar) {
        let s = self.start(&self.bottom, j);
        let e = &s + &self.lengths[j];
        (s, e)
    }

    /// Interior endpoints of the top intervals, where the exchange is discontinuous.
    pub fn discontinuities(&self) -> Vec<Scalar> {
        self.top[1..].iter().map(|&j| self.top_interval(j).0).collect()
    }

    /// The exchange map with intervals closed on the left. `None` outside `[0, Σ λ)`.
    pub fn apply(&self, x: &Scalar) -> Option<Scalar> {
        let j = self.letter_at(x)?;
        let (ts, _) = self.top_interval(j);
        let (bs, _) = self.bottom_interval(j);
        Some(&(x - &ts) + &bs)
    }

    /// The letter whose half-open interval contains `x`.
    pub fn letter_at(&self, x: &Scalar) -> Option<usize> {
        if x.is_negative() {
            return None;
        }
        let mut acc = Scalar::zero();
        for &j in &self.top {
            acc = &acc + &self.lengths[j];
            if x < &acc {
                return Some(j);
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RauzyKind {
    /// The rightmost top interval is longer.
    Top,
    Bottom,
}

impl fmt::Display for RauzyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RauzyKind::Top => "Top",
            RauzyKind::Bottom => "Bottom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RauzyStep {
    pub kind: RauzyKind,
    pub winner: usize,
    pub loser: usize,
    pub input: IntervalExchange,
    pub output: IntervalExchange,
}

impl RauzyStep {
    /// Image of each letter under the induced graph fold, as a path of old letters.
    pub fn fold(&self) -> Vec<Word> {
        let t = *self.input.top.last().expect("nonempty");
        let b = *self.input.bottom.last().expect("nonempty");
        (0..self.input.len())
            .map(|j| if j == self.loser { Word(vec![Sym::pos(b), Sym::pos(t)]) } else { Word(vec![Sym::pos(j)]) })
            .collect()
    }
}

/// One step of right Rauzy-Veech induction.
pub fn rauzy_step(e: &IntervalExchange) -> Result<RauzyStep, IetError> {
    if !e.irreducible {
        return Err(IetError::Reducible);
    }
    let t = *e.top.last().expect("nonempty");
    let b = *e.bottom.last().expect("nonempty");
    let (kind, winner, loser) = match e.lengths[t].cmp(&e.lengths[b]) {
        std::cmp::Ordering::Equal => return Err(IetError::KeaneViolation { step: 0 }),
        std::cmp::Ordering::Greater => (RauzyKind::Top, t, b),
        std::cmp::Ordering::Less => (RauzyKind::Bottom, b, t),
    };
    let mut lengths = e.lengths.clone();
    lengths[winner] = &lengths[winner] - &lengths[loser];
    let mut top = e.top.clone();
    let mut bottom = e.bottom.clone();
    let (order, anchor) = match kind {
        RauzyKind::Top => (&mut bottom, t),
        RauzyKind::Bottom => (&mut top, b),
    };
    order.pop();
    let at = order.iter().position(|&i| i == anchor).expect("winner present") + 1;
    order.insert(at, loser);
    let output = IntervalExchange::labeled(lengths, top, bottom)?;
    Ok(RauzyStep { kind, winner, loser, input: e.clone(), output })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RauzySequence {
    pub steps: Vec<RauzyStep>,
    /// Step index at which the rightmost lengths were equal.
    pub violation: Option<usize>,
}

impl RauzySequence {
    pub fn kinds(&self) -> Vec<RauzyKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    pub fn last(&self) -> Option<&IntervalExchange> {
        self.steps.last().map(|s| &s.output)
    }
}

/// Up to `k` steps of induction; stops early at a Keane violation.
pub fn rauzy_sequence(e: &IntervalExchange, k: usize) -> Result<RauzySequence, IetError> {
    let mut steps: Vec<RauzyStep> = Vec::new();
    let mut cur = e.clone();
    for i in 0..k {
        match rauzy_step(&cur) {
            Ok(s) => {
                cur = s.output.clone();
                steps.push(s);
            }
            Err(IetError::KeaneViolation { .. }) => return Ok(RauzySequence { steps, violation: Some(i) }),
            Err(err) => return Err(err),
        }
    }
    Ok(RauzySequence { steps, violation: None })
}

/// No discontinuity reaches a discontinuity within `depth` iterates.
pub fn keane_check(e: &IntervalExchange, depth: usize) -> bool {
    let disc = e.discontinuities();
    disc.iter().all(|x| {
        let mut y = x.clone();
        for _ in 0..depth {
            y = e.apply(&y).expect("orbit stays in the interval");
            if disc.contains(&y) {
                return false;
            }
        }
        true
    })
}

/// Letter names `a, b, ..., z, a1, b1, ...`.
pub fn letter_name(j: usize) -> String {
    let c = (b'a' + (j % 26) as u8) as char;
    if j < 26 {
        c.to_string()
    } else {
        format!("{c}{}", j / 26)
    }
}

/// The segment `[0, Σ λ]` with one translation per interval.
pub fn iet_to_system(e: &IntervalExchange) -> Result<SystemOfIsometries, IetError> {
    let forest = build_forest(&[TreeSpec {
        name: "T0".into(),
        vertices: vec!["v0".into(), "v1".into()],
        edges: vec![("e0".into(), "v0".into(), "v1".into(), e.total())],
    }])
    .map_err(|err| IetError::InvalidIet(err.to_string()))?;
    let at = |x: &Scalar| Loc::new(0, forest.tree(0).point_on_edge(0, x.clone()).expect("inside the segment"));
    let letters = (0..e.len())
        .map(|j| {
            let (t0, t1) = e.top_interval(j);
            let (b0, b1) = e.bottom_interval(j);
            LetterSpec { name: letter_name(j), anchors: vec![(at(&t0), at(&b0)), (at(&t1), at(&b1))] }
        })
        .collect();
    let spec = SystemSpec { field: e.field(), forest: forest.clone(), letters, rank_hint: Some(e.len()) };
    spec.build().map_err(|err| IetError::Induction(InductionError::System(err)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepComparison {
    /// 1-based.
    pub step: usize,
    pub classical: RauzyKind,
    pub split: Option<RauzyKind>,
    /// Sorted lengths on each side.
    pub lengths: (Vec<Scalar>, Vec<Scalar>),
    pub lengths_match: bool,
    pub intervals_match: bool,
    pub fold_match: bool,
    pub note: Option<String>,
}

impl StepComparison {
    pub fn ok(&self) -> bool {
        self.split == Some(self.classical) && self.lengths_match && self.intervals_match && self.fold_match
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub k: usize,
    pub policy: SplitPolicy,
    pub steps: Vec<StepComparison>,
    pub verdict: Verdict,
    pub first_divergence: Option<usize>,
}

type IntervalPair = ((Scalar, Scalar), (Scalar, Scalar));

/// `[start, end]` of a base in the coordinates of the original segment `orig`.
fn interval_of(s: &SystemOfIsometries, zip: &Zip, base: &Subtree, orig: &MetricTree) -> (Scalar, Scalar) {
    let tree = s.forest.tree(base.tree);
    let mut xs: Vec<Scalar> = base
        .region
        .extremal_points(tree)
        .into_iter()
        .map(|p| orig.dist(&Point::Vertex(0), &zip.to_old(&Loc::new(base.tree, p)).point))
        .collect();
    xs.sort();
    (xs[0].clone(), xs[xs.len() - 1].clone())
}

fn split_intervals(s: &SystemOfIsometries, zip: &Zip, orig: &MetricTree) -> Vec<IntervalPair> {
    s.letters
        .iter()
        .map(|l| (interval_of(s, zip, &l.map.domain, orig), interval_of(s, zip, &l.map.image, orig)))
        .collect()
}

fn classical_intervals(e: &IntervalExchange) -> Vec<IntervalPair> {
    (0..e.len()).map(|j| (e.top_interval(j), e.bottom_interval(j))).collect()
}

/// Runs `k` splitting steps of `policy` on the system of `e` and `k` classical
/// induction steps, comparing intervals (in original coordinates), lengths and folds.
pub fn compare_with_policy(e: &IntervalExchange, k: usize, policy: SplitPolicy) -> Result<ComparisonReport, IetError> {
    if !e.is_irreducible() {
        return Err(IetError::Reducible);
    }
    let classical = rauzy_sequence(e, k)?;
    if let Some(step) = classical.violation {
        return Err(IetError::KeaneViolation { step });
    }
    let sys = iet_to_system(e)?;
    let budget = Budget { max_rips_steps: 1, max_split_steps: k, max_components: None, policy };
    let hist = run_induction(&sys, budget)?;
    let mut zip = Zip::identity(&sys.forest);
    // split letter index -> classical letter, for the current input system
    let mut labels: Vec<usize> = (0..e.len()).collect();
    let mut steps = Vec::new();
    let splits: Vec<_> = hist.steps.iter().filter(|s| s.kind == StepKind::Split).collect();
    for (i, cs) in classical.steps.iter().enumerate() {
        let Some(st) = splits.get(i) else {
            steps.push(StepComparison {
                step: i + 1,
                classical: cs.kind,
                split: None,
                lengths: (Vec::new(), Vec::new()),
                lengths_match: false,
                intervals_match: false,
                fold_match: false,
                note: Some("splitting stopped early".into()),
            });
            break;
        };
        zip = st.zip.then(&zip);
        let kind = st.split_data.first().map(|p| if p.a0.inverse { RauzyKind::Top } else { RauzyKind::Bottom });
        let out = &st.output;
        let mut split_lengths: Vec<Scalar> = out.letters.iter().map(|l| l.map.domain.region.measure()).collect();
        let mut class_lengths = cs.output.lengths().to_vec();
        split_lengths.sort();
        class_lengths.sort();
        let lengths_match = split_lengths == class_lengths;
        let mut note = None;
        let (intervals_match, new_labels) = if out.forest.len() != 1 {
            note = Some(format!("{} components after splitting", out.forest.len()));
            (false, None)
        } else {
            let ours = split_intervals(out, &zip, sys.forest.tree(0));
            let theirs = classical_intervals(&cs.output);
            let index: BTreeMap<&IntervalPair, usize> = theirs.iter().enumerate().map(|(j, p)| (p, j)).collect();
            let mapped: Option<Vec<usize>> = ours.iter().map(|p| index.get(p).copied()).collect();
            let mut a = ours.clone();
            let mut b = theirs.clone();
            a.sort();
            b.sort();
            (a == b, mapped.filter(|m| m.len() == theirs.len()))
        };
        let fold_match = match &new_labels {
            Some(nl) => {
                let expected = cs.fold();
                st.fold_map.edge_images.iter().enumerate().all(|(idx, w)| {
                    let translated = Word(w.0.iter().map(|s| Sym { index: labels[s.index], inverse: s.inverse }).collect());
                    translated == expected[nl[idx]]
                })
            }
            None => false,
        };
        if let Some(nl) = new_labels {
            labels = nl;
        }
        steps.push(StepComparison {
            step: i + 1,
            classical: cs.kind,
            split: kind,
            lengths: (split_lengths, class_lengths),
            lengths_match,
            intervals_match,
            fold_match,
            note,
        });
    }
    let first_divergence = steps.iter().find(|s| !s.ok()).map(|s| s.step);
    let verdict = if first_divergence.is_none() && steps.len() == k { Verdict::Match } else { Verdict::Mismatch };
    Ok(ComparisonReport { k, policy, steps, verdict, first_divergence })
}

/// [`compare_with_policy`] with the rightmost policy, which realizes right induction.
pub fn compare_inductions(e: &IntervalExchange, k: usize) -> Result<ComparisonReport, IetError> {
    compare_with_policy(e, k, SplitPolicy::Rightmost)
}
