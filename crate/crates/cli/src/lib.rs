//! The `treesplit` command line: argument parsing, command dispatch and artifact output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use treesplit::document::{emit_system, parse_document, parse_location, Document};
use treesplit::dot::{direction_dot, gamma_dot, orbit_dot, whitehead_dot};
use treesplit::iet::{compare_with_policy, rauzy_sequence, IntervalExchange};
use treesplit::indices::{index_bound_report, orbit_graphs, singular_candidates, StabilizerPolicy};
use treesplit::induction::{
    find_splitting_points, rips_step, run_induction, split_with_policy, Budget, SplitPolicy, StepKind,
};
use treesplit::lamination::{
    diagonal_closure, legal_turns, minimality_diagnostic, whitehead_report, LeafSet, MinimalityVerdict, Turn,
};
use treesplit::report::Report;
use treesplit::system::validate_system;
use treesplit::{Field, SystemOfIsometries};

#[derive(Parser, Debug)]
#[command(name = "treesplit", version, about = "Systems of isometries on metric forests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// System document.
    pub input: PathBuf,
    /// Required scalar field: `rational` or `quad:<d>`.
    #[arg(long, value_parser = parse_field)]
    pub field: Option<Field>,
    /// Directory receiving the report and graph exports.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum PolicyArg {
    All,
    Rightmost,
    Leftmost,
}

impl From<PolicyArg> for SplitPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::All => SplitPolicy::All,
            PolicyArg::Rightmost => SplitPolicy::Rightmost,
            PolicyArg::Leftmost => SplitPolicy::Leftmost,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a document and its partial isometries.
    Validate(Common),
    /// Export the associated graph.
    Gamma(Common),
    /// Rips machine steps.
    Rips {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        max_steps: usize,
    },
    /// List splitting points, or apply splitting steps.
    Split {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::All)]
        policy: PolicyArg,
        /// Only list the splitting points.
        #[arg(long)]
        find: bool,
    },
    /// Rips machine until it halts, then splitting.
    Induct {
        #[command(flatten)]
        common: Common,
        /// Rips step budget.
        #[arg(long, default_value_t = 50)]
        max_steps: usize,
        #[arg(long, default_value_t = 10)]
        max_split_steps: usize,
        #[arg(long, default_value_t = 10_000)]
        max_components: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::All)]
        policy: PolicyArg,
    },
    /// Legal turns at a legality depth.
    Turns {
        #[command(flatten)]
        common: Common,
        #[arg(long = "legality-L", visible_alias = "depth", default_value_t = 8)]
        legality: usize,
    },
    /// Whitehead graphs at every vertex of the associated graph.
    Whitehead {
        #[command(flatten)]
        common: Common,
        #[arg(long = "legality-L", visible_alias = "depth", default_value_t = 8)]
        legality: usize,
    },
    /// Uniform recurrence of the regular language.
    Minimality {
        #[command(flatten)]
        common: Common,
        #[arg(long = "depth-n", default_value_t = 3)]
        depth: usize,
        #[arg(long = "recurrence-R", default_value_t = 20)]
        recurrence: usize,
        #[arg(long)]
        max_words: Option<usize>,
    },
    /// Diagonal closure of a leaf file.
    Diagonal {
        #[command(flatten)]
        common: Common,
        /// Lines `basepoint TREE:POINT` and `pair WORD | WORD`.
        leaves: PathBuf,
    },
    /// Geometric index and q-estimates at singular points.
    Index {
        #[command(flatten)]
        common: Common,
        #[arg(long = "radius-r", default_value_t = 6)]
        radius: usize,
        /// Points to examine; defaults to the singular candidates.
        #[arg(long)]
        point: Vec<String>,
        /// Report point stabilizers as cycles instead of failing.
        #[arg(long)]
        allow_stabilizer: bool,
        /// Free rank N; defaults to the document's rank.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Interval exchanges.
    #[command(subcommand)]
    Iet(IetCommand),
}

#[derive(Subcommand, Debug)]
pub enum IetCommand {
    /// Print the system of isometries of an interval exchange.
    Import(Common),
    /// Classical Rauzy-Veech induction.
    Rauzy {
        #[command(flatten)]
        common: Common,
        #[arg(long, visible_alias = "k", default_value_t = 10)]
        max_steps: usize,
    },
    /// Splitting against classical induction, step by step.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, visible_alias = "k", default_value_t = 10)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Rightmost)]
        policy: PolicyArg,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    if s == "rational" {
        return Ok(Field::Rational);
    }
    let d = s.strip_prefix("quad:").ok_or_else(|| format!("expected rational or quad:<d>, got {s:?}"))?;
    let d: u32 = d.parse().map_err(|_| format!("bad root {d:?}"))?;
    Field::quadratic(d).map_err(|e| e.to_string())
}

/// A command's outcome: a report, files to write under `--out`, and the exit code.
struct Outcome {
    report: Report,
    artifacts: Vec<(String, String)>,
    code: i32,
    /// Printed after the report instead of it when set.
    stdout: Option<String>,
}

impl Outcome {
    fn new(report: Report, code: i32) -> Self {
        Outcome { report, artifacts: Vec::new(), code, stdout: None }
    }
}

fn read_document(c: &Common) -> Result<Document> {
    let text = fs::read_to_string(&c.input).with_context(|| format!("reading {}", c.input.display()))?;
    let doc = parse_document(&text).map_err(|e| anyhow!("{}: {e}", c.input.display()))?;
    let field = match &doc {
        Document::System(spec) => spec.field,
        Document::Iet(e) => e.field(),
    };
    if let Some(want) = c.field {
        if want != field {
            bail!("document field is {field}, --field asks for {want}");
        }
    }
    Ok(doc)
}

fn read_system(c: &Common) -> Result<SystemOfIsometries> {
    read_document(c)?.into_system().map_err(|e| anyhow!("{}: {e}", c.input.display()))
}

fn read_iet(c: &Common) -> Result<IntervalExchange> {
    match read_document(c)? {
        Document::Iet(e) => Ok(e),
        Document::System(_) => bail!("{}: expected an iet block", c.input.display()),
    }
}

fn turn_label(s: &SystemOfIsometries, t: &Turn) -> String {
    let g = s.graph();
    format!("{}:{},{}", g.vertex_names[t.vertex], g.edge_label(t.pair.0), g.edge_label(t.pair.1))
}

fn validate(c: &Common) -> Result<Outcome> {
    let report = match read_document(c)? {
        Document::System(spec) => validate_system(&spec),
        Document::Iet(e) => {
            let s = Document::Iet(e).into_system().map_err(|e| anyhow!("{e}"))?;
            s.validate()
        }
    };
    let mut r = Report::new("validate");
    r.push("field", report.field);
    r.push("letters", report.letters.len());
    r.push("forest_field_ok", report.forest_field_ok);
    if let Some(b) = report.gamma_connected {
        r.push("gamma_connected", b);
    }
    if let Some(b) = report.betti {
        r.push("betti", b);
    }
    let pass = report.pass();
    if let Some(f) = report.first_failure() {
        r.push("witness", f);
    }
    r.push("verdict", if pass { "PASS" } else { "FAIL" });
    Ok(Outcome::new(r, if pass { 0 } else { 1 }))
}

fn gamma(c: &Common) -> Result<Outcome> {
    let s = read_system(c)?;
    let g = s.graph();
    let mut r = Report::new("gamma");
    r.push("vertices", g.vertex_count())
        .push("edges", g.edge_count())
        .push("connected", g.is_connected())
        .push("betti", g.betti())
        .push("min_valence", g.min_valence().map_or("none".into(), |v| v.to_string()))
        .push("valence_ge_3", g.count_valence_at_least(3))
        .push("rose", g.is_rose());
    let mut o = Outcome::new(r, 0);
    o.artifacts.push(("gamma.dot".into(), gamma_dot(&g)));
    Ok(o)
}

fn rips(c: &Common, max_steps: usize) -> Result<Outcome> {
    let mut s = read_system(c)?;
    let mut r = Report::new("rips");
    r.push("max_steps", max_steps);
    let mut artifacts = Vec::new();
    let mut steps = 0;
    let mut halted = false;
    let mut empty = false;
    for i in 1..=max_steps {
        let out = match rips_step(&s) {
            Ok(o) => o,
            Err(treesplit::InductionError::EmptyOutput) => {
                empty = true;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        if out.halted {
            halted = true;
            break;
        }
        steps = i;
        s = out.system;
        r.push(format!("step.{i}.components"), s.forest.len());
        r.push(format!("step.{i}.max_diameter"), s.max_component_diameter());
        r.push(format!("step.{i}.letters"), s.letter_count());
        if !out.dropped.is_empty() {
            r.push(format!("step.{i}.dropped"), out.dropped.join(","));
        }
        artifacts.push((format!("rips_{i}.sys"), emit_system(&s)));
        artifacts.push((format!("rips_{i}_gamma.dot"), gamma_dot(&s.graph())));
    }
    r.push("steps", steps).push("halted", halted).push("empty_output", empty);
    let mut o = Outcome::new(r, 0);
    o.artifacts = artifacts;
    Ok(o)
}

fn split(c: &Common, max_steps: usize, policy: SplitPolicy, find: bool) -> Result<Outcome> {
    let mut s = read_system(c)?;
    let mut r = Report::new("split");
    if find {
        let points = find_splitting_points(&s);
        r.push("splitting_points", points.len());
        for (i, p) in points.iter().enumerate() {
            r.push(format!("point.{}", i + 1), p.describe(&s));
        }
        return Ok(Outcome::new(r, 0));
    }
    r.push("max_steps", max_steps).push("policy", format!("{policy:?}"));
    let mut artifacts = Vec::new();
    let mut steps = 0;
    for i in 1..=max_steps {
        if find_splitting_points(&s).is_empty() {
            break;
        }
        let out = split_with_policy(&s, policy)?;
        for p in &out.split {
            r.push(format!("step.{i}.split"), p.describe(&s));
        }
        for (name, a, b) in &out.folds {
            r.push(format!("step.{i}.fold"), format!("{name}={a}.{b}"));
        }
        r.push(format!("step.{i}.interference"), out.interference.len());
        s = out.system;
        let g = s.graph();
        r.push(format!("step.{i}.components"), s.forest.len());
        r.push(format!("step.{i}.betti"), g.betti());
        r.push(format!("step.{i}.min_valence"), g.min_valence().unwrap_or(0));
        artifacts.push((format!("split_{i}.sys"), emit_system(&s)));
        artifacts.push((format!("split_{i}_gamma.dot"), gamma_dot(&g)));
        steps = i;
    }
    r.push("steps", steps);
    let mut o = Outcome::new(r, 0);
    o.artifacts = artifacts;
    Ok(o)
}

fn induct(c: &Common, budget: Budget) -> Result<Outcome> {
    let s = read_system(c)?;
    let h = run_induction(&s, budget)?;
    let mut r = Report::new("induct");
    r.push("max_steps", budget.max_rips_steps)
        .push("max_split_steps", budget.max_split_steps)
        .push("max_components", budget.max_components.map_or("none".into(), |c| c.to_string()))
        .push("policy", format!("{:?}", budget.policy));
    let mut artifacts = Vec::new();
    for (i, step) in h.steps.iter().enumerate() {
        let g = step.output.graph();
        let kind = match step.kind {
            StepKind::Rips => "rips",
            StepKind::Split => "split",
        };
        r.push(
            format!("step.{}", i + 1),
            format!(
                "{kind} components={} letters={} betti={} min_valence={} max_diameter={}",
                step.output.forest.len(),
                step.output.letter_count(),
                g.betti(),
                g.min_valence().unwrap_or(0),
                step.output.max_component_diameter()
            ),
        );
        artifacts.push((format!("induct_{}_gamma.dot", i + 1), gamma_dot(&g)));
    }
    r.push("halted_at", h.halted_at.map_or("none".into(), |k| k.to_string()))
        .push("stop", format!("{:?}", h.stop))
        .push("budget_exhausted", h.budget_exhausted)
        .push("classification", format!("{:?}", h.classification));
    artifacts.push(("final.sys".into(), emit_system(h.last())));
    let mut o = Outcome::new(r, 0);
    o.artifacts = artifacts;
    Ok(o)
}

fn turns(c: &Common, depth: usize) -> Result<Outcome> {
    let s = read_system(c)?;
    let tt = legal_turns(&s, depth)?;
    let all = tt.turns();
    let mut r = Report::new("turns");
    r.push("legality_L", depth).push("turns", all.len()).push("legal", tt.legal.len());
    for t in &all {
        r.push(format!("turn.{}", turn_label(&s, t)), if tt.is_legal(t) { "legal" } else { "illegal" });
    }
    Ok(Outcome::new(r, 0))
}

fn whitehead(c: &Common, depth: usize) -> Result<Outcome> {
    let s = read_system(c)?;
    let tt = legal_turns(&s, depth)?;
    let wr = whitehead_report(&tt);
    let g = &tt.graph;
    let mut r = Report::new("whitehead");
    r.push("legality_L", depth);
    let mut artifacts = Vec::new();
    for wh in &wr.graphs {
        let name = &g.vertex_names[wh.vertex];
        let comps: Vec<String> = wh
            .components
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|&x| g.edge_label(x)).collect::<Vec<_>>().join(",")))
            .collect();
        r.push(format!("vertex.{name}.components"), comps.len());
        r.push(format!("vertex.{name}.connected"), wh.connected());
        if !wh.connected() {
            r.push(format!("vertex.{name}.witness"), comps.join(" "));
        }
        artifacts.push((format!("whitehead_{name}.dot"), whitehead_dot(&tt, wh)));
    }
    let ok = wr.all_connected();
    r.push("verdict", if ok { "PASS" } else { "FAIL" });
    let mut o = Outcome::new(r, if ok { 0 } else { 1 });
    o.artifacts = artifacts;
    Ok(o)
}

fn minimality(c: &Common, n: usize, big_r: usize, max_words: Option<usize>) -> Result<Outcome> {
    if n == 0 || n > big_r {
        bail!("need 1 <= depth-n <= recurrence-R");
    }
    let s = read_system(c)?;
    let m = minimality_diagnostic(&s, n, big_r, max_words)?;
    let mut r = Report::new("minimality");
    r.push("depth_n", n)
        .push("recurrence_R", big_r)
        .push("max_words", max_words.map_or("none".into(), |x| x.to_string()))
        .push("complexity", m.complexity.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .push("eventually_periodic", m.eventually_periodic);
    let code = match &m.verdict {
        MinimalityVerdict::Pass => {
            r.push("verdict", "PASS");
            0
        }
        MinimalityVerdict::Fail { long, short } => {
            r.push("verdict", "FAIL");
            r.push("witness", format!("{} avoids {}", long.display(&s), short.display(&s)));
            1
        }
        MinimalityVerdict::Inconclusive => {
            r.push("verdict", "INCONCLUSIVE");
            0
        }
    };
    Ok(Outcome::new(r, code))
}

fn read_leaves(s: &SystemOfIsometries, path: &Path) -> Result<LeafSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut set: Option<LeafSet> = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), i + 1);
        if let Some(loc) = line.strip_prefix("basepoint") {
            let loc = parse_location(&s.forest, loc).map_err(|e| anyhow!("{}: {}", at(), e.message))?;
            set = Some(LeafSet::new(loc));
        } else if let Some(pair) = line.strip_prefix("pair") {
            let ls = set.as_mut().ok_or_else(|| anyhow!("{}: pair before basepoint", at()))?;
            let (x, y) = pair.split_once('|').ok_or_else(|| anyhow!("{}: expected WORD | WORD", at()))?;
            let x = s.parse_word(x.trim()).map_err(|e| anyhow!("{}: {e}", at()))?;
            let y = s.parse_word(y.trim()).map_err(|e| anyhow!("{}: {e}", at()))?;
            ls.add_pair(x, y);
        } else {
            bail!("{}: unknown line {line:?}", at());
        }
    }
    set.ok_or_else(|| anyhow!("{}: no basepoint", path.display()))
}

fn diagonal(c: &Common, leaves: &Path) -> Result<Outcome> {
    let s = read_system(c)?;
    let ls = read_leaves(&s, leaves)?;
    let closed = diagonal_closure(&ls)?;
    let mut r = Report::new("diagonal");
    r.push("basepoint", s.forest.describe(&ls.basepoint))
        .push("halves", ls.halves.len())
        .push("pairs_in", ls.pairs.len())
        .push("pairs_out", closed.pairs.len())
        .push("flip_invariant", closed.is_flip_invariant());
    for &(i, j) in &closed.pairs {
        let tag = if ls.pairs.contains(&(i, j)) { "given" } else { "added" };
        r.push(
            format!("pair.{tag}"),
            format!("{} | {}", closed.halves[i].word.display(&s), closed.halves[j].word.display(&s)),
        );
    }
    Ok(Outcome::new(r, 0))
}

fn index(c: &Common, radius: usize, points: &[String], allow: bool, rank: Option<usize>) -> Result<Outcome> {
    let s = read_system(c)?;
    let policy = if allow { StabilizerPolicy::AllowStabilizer } else { StabilizerPolicy::Strict };
    let pts = if points.is_empty() {
        singular_candidates(&s)
    } else {
        points
            .iter()
            .map(|p| parse_location(&s.forest, p).map_err(|e| anyhow!("--point {p}: {}", e.message)))
            .collect::<Result<_>>()?
    };
    let rank = rank.or(s.rank_hint).unwrap_or_else(|| s.graph().betti());
    let rep = index_bound_report(&s, rank, &pts, radius, policy)?;
    let mut r = Report::new("index");
    r.push("radius_r", radius).push("rank", rank).push("policy", format!("{policy:?}"));
    let mut artifacts = Vec::new();
    for (i, e) in rep.entries.iter().enumerate() {
        let k = i + 1;
        r.push(format!("point.{k}"), s.forest.describe(&e.point));
        r.push(
            format!("point.{k}.geometric"),
            format!(
                "{} components={} rank={} stable={}",
                e.geometric.value, e.geometric.components, e.geometric.stabilizer_rank, e.geometric.stable
            ),
        );
        r.push(format!("point.{k}.q"), format!("{} hypothesis={}", e.q.value, e.q.hypothesis));
        let (g, d) = orbit_graphs(&s, &e.point, radius, policy)?;
        artifacts.push((format!("orbit_{k}.dot"), orbit_dot(&s, &g)));
        artifacts.push((format!("directions_{k}.dot"), direction_dot(&s, &d)));
    }
    for m in &rep.merged {
        r.push("merged", s.forest.describe(m));
    }
    r.push("geometric_sum", rep.geometric_sum).push("q_sum", rep.q_sum).push("bound", rep.bound);
    let bad = rep.bound_violation() || !rep.q_exceeds_geometric().is_empty();
    r.push("verdict", if bad { "FAIL" } else { "PASS" });
    let mut o = Outcome::new(r, if bad { 1 } else { 0 });
    o.artifacts = artifacts;
    Ok(o)
}

fn iet_import(c: &Common) -> Result<Outcome> {
    let e = read_iet(c)?;
    let s = Document::Iet(e).into_system().map_err(|e| anyhow!("{e}"))?;
    let doc = emit_system(&s);
    let mut r = Report::new("iet import");
    r.push("letters", s.letter_count()).push("field", s.field);
    let mut o = Outcome::new(r, 0);
    o.artifacts.push(("system.sys".into(), doc.clone()));
    o.stdout = Some(doc);
    Ok(o)
}

fn iet_rauzy(c: &Common, k: usize) -> Result<Outcome> {
    let e = read_iet(c)?;
    let seq = rauzy_sequence(&e, k)?;
    let mut r = Report::new("iet rauzy");
    r.push("max_steps", k);
    for (i, st) in seq.steps.iter().enumerate() {
        let lengths: Vec<String> = st.output.lengths().iter().map(|l| l.to_string()).collect();
        r.push(format!("step.{}", i + 1), format!("{} lengths=[{}]", st.kind, lengths.join(", ")));
    }
    r.push("kinds", seq.kinds().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
    let code = match seq.violation {
        Some(at) => {
            r.push("keane_violation", at);
            1
        }
        None => 0,
    };
    r.push("verdict", if code == 0 { "PASS" } else { "FAIL" });
    Ok(Outcome::new(r, code))
}

fn iet_compare(c: &Common, k: usize, policy: SplitPolicy) -> Result<Outcome> {
    let e = read_iet(c)?;
    let rep = compare_with_policy(&e, k, policy)?;
    let mut r = Report::new("iet compare");
    r.push("k", k).push("policy", format!("{policy:?}"));
    for st in &rep.steps {
        r.push(
            format!("step.{}", st.step),
            format!(
                "classical={} split={} lengths={} intervals={} folds={}",
                st.classical,
                st.split.map_or("none".into(), |x| x.to_string()),
                st.lengths_match,
                st.intervals_match,
                st.fold_match
            ),
        );
        if let Some(n) = &st.note {
            r.push(format!("step.{}.note", st.step), n);
        }
    }
    if let Some(d) = rep.first_divergence {
        r.push("first_divergence", d);
    }
    r.push("verdict", rep.verdict);
    Ok(Outcome::new(r, if rep.verdict == treesplit::iet::Verdict::Match { 0 } else { 1 }))
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Validate(c) | Command::Gamma(c) => c,
        Command::Rips { common, .. }
        | Command::Split { common, .. }
        | Command::Induct { common, .. }
        | Command::Turns { common, .. }
        | Command::Whitehead { common, .. }
        | Command::Minimality { common, .. }
        | Command::Diagonal { common, .. }
        | Command::Index { common, .. } => common,
        Command::Iet(IetCommand::Import(c)) => c,
        Command::Iet(IetCommand::Rauzy { common, .. } | IetCommand::Compare { common, .. }) => common,
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate(c) => validate(c),
        Command::Gamma(c) => gamma(c),
        Command::Rips { common, max_steps } => rips(common, *max_steps),
        Command::Split { common, max_steps, policy, find } => split(common, *max_steps, (*policy).into(), *find),
        Command::Induct { common, max_steps, max_split_steps, max_components, policy } => induct(
            common,
            Budget {
                max_rips_steps: *max_steps,
                max_split_steps: *max_split_steps,
                max_components: Some(*max_components),
                policy: (*policy).into(),
            },
        ),
        Command::Turns { common, legality } => turns(common, *legality),
        Command::Whitehead { common, legality } => whitehead(common, *legality),
        Command::Minimality { common, depth, recurrence, max_words } => {
            minimality(common, *depth, *recurrence, *max_words)
        }
        Command::Diagonal { common, leaves } => diagonal(common, leaves),
        Command::Index { common, radius, point, allow_stabilizer, rank } => {
            index(common, *radius, point, *allow_stabilizer, *rank)
        }
        Command::Iet(IetCommand::Import(c)) => iet_import(c),
        Command::Iet(IetCommand::Rauzy { common, max_steps }) => iet_rauzy(common, *max_steps),
        Command::Iet(IetCommand::Compare { common, max_steps, policy }) => {
            iet_compare(common, *max_steps, (*policy).into())
        }
    }
}

fn check_depths(cmd: &Command) -> Result<()> {
    let bad = match cmd {
        Command::Turns { legality, .. } | Command::Whitehead { legality, .. } => *legality == 0,
        Command::Minimality { depth, recurrence, .. } => *depth == 0 || *recurrence == 0,
        Command::Index { radius, .. } => *radius < 2,
        _ => false,
    };
    if bad {
        bail!("depths must be at least 1 and the index radius at least 2");
    }
    Ok(())
}

fn write_artifacts(dir: &Path, command: &str, o: &Outcome) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let report_name = format!("{}.report", command.replace(' ', "_"));
    fs::write(dir.join(report_name), o.report.to_string())?;
    for (name, body) in &o.artifacts {
        fs::write(dir.join(name), body).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

/// Runs one invocation, writing the report to `out` and errors to `err`.
/// Returns 0 on success, 1 on a negative verdict and 2 when the command could not run.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = check_depths(&cli.command).and_then(|()| dispatch(&cli.command)).and_then(|o| {
        if let Some(dir) = &common(&cli.command).out {
            let name = o.report.get("command").unwrap_or("report").to_string();
            write_artifacts(dir, &name, &o)?;
        }
        Ok(o)
    });
    match result {
        Ok(o) => {
            let text = o.stdout.clone().unwrap_or_else(|| o.report.to_string());
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
