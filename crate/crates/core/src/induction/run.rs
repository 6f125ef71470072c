use crate::error::InductionError;
use crate::graph::GraphMap;
use crate::scalar::Scalar;
use crate::system::SystemOfIsometries;

use super::{rips_step, split_with_policy, SplitPolicy, SplittingPoint, Zip};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Rips,
    Split,
}

#[derive(Clone, Debug)]
pub struct InductionStep {
    pub kind: StepKind,
    pub input: SystemOfIsometries,
    pub output: SystemOfIsometries,
    /// `Γ_out -> Γ_in`.
    pub fold_map: GraphMap,
    pub zip: Zip,
    pub split_data: Vec<SplittingPoint>,
    pub folds: Vec<(String, String, String)>,
    pub interference: usize,
    pub dropped: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Surface,
    LevittEvidence,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// All step budgets were spent.
    Budget,
    /// The forest exceeded the component cap.
    Components,
    /// The Rips machine produced an empty forest.
    EmptyOutput,
    /// No splitting point was left.
    NoSplittingPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_rips_steps: usize,
    pub max_split_steps: usize,
    pub max_components: Option<usize>,
    pub policy: SplitPolicy,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rips_steps: 50, max_split_steps: 10, max_components: Some(10_000), policy: SplitPolicy::All }
    }
}

#[derive(Clone, Debug)]
pub struct InductionHistory {
    pub initial: SystemOfIsometries,
    pub steps: Vec<InductionStep>,
    pub classification: Classification,
    /// Number of Rips steps performed before the machine halted.
    pub halted_at: Option<usize>,
    pub stop: StopReason,
    pub budget: Budget,
    pub budget_exhausted: bool,
}

impl InductionHistory {
    pub fn last(&self) -> &SystemOfIsometries {
        self.steps.last().map(|s| &s.output).unwrap_or(&self.initial)
    }

    pub fn systems(&self) -> Vec<&SystemOfIsometries> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.output)).collect()
    }

    /// Component count and max component diameter after each Rips step, starting with the input.
    pub fn rips_metrics(&self) -> Vec<(usize, Scalar)> {
        std::iter::once(&self.initial)
            .chain(self.steps.iter().filter(|s| s.kind == StepKind::Rips).map(|s| &s.output))
            .map(|s| (s.forest.len(), s.max_component_diameter()))
            .collect()
    }
}

/// Component count strictly grows in at least 90% of the last ten steps and the
/// maximal diameter shrank by a factor of at least two over the run.
fn levitt_evidence(metrics: &[(usize, Scalar)]) -> bool {
    if metrics.len() < 11 {
        return false;
    }
    let tail = &metrics[metrics.len() - 11..];
    let grew = tail.windows(2).filter(|w| w[1].0 > w[0].0).count();
    let first = &metrics[0].1;
    let last = &metrics[metrics.len() - 1].1;
    grew >= 9 && &(last * &Scalar::int(2)) <= first
}

/// Runs the Rips machine until it halts, then splits, within `budget`.
pub fn run_induction(s: &SystemOfIsometries, budget: Budget) -> Result<InductionHistory, InductionError> {
    let mut steps = Vec::new();
    let mut cur = s.clone();
    let mut halted_at = None;
    let mut stop = StopReason::Budget;
    let over_cap = |sys: &SystemOfIsometries| budget.max_components.is_some_and(|c| sys.forest.len() > c);
    let mut capped = false;
    for i in 0..budget.max_rips_steps {
        let out = match rips_step(&cur) {
            Ok(o) => o,
            Err(InductionError::EmptyOutput) => {
                stop = StopReason::EmptyOutput;
                break;
            }
            Err(e) => return Err(e),
        };
        if out.halted {
            halted_at = Some(i);
            break;
        }
        steps.push(InductionStep {
            kind: StepKind::Rips,
            input: cur.clone(),
            output: out.system.clone(),
            fold_map: out.map,
            zip: out.zip,
            split_data: Vec::new(),
            folds: Vec::new(),
            interference: 0,
            dropped: out.dropped,
        });
        cur = out.system;
        if over_cap(&cur) {
            stop = StopReason::Components;
            capped = true;
            break;
        }
    }
    if halted_at.is_some() {
        for _ in 0..budget.max_split_steps {
            let out = split_with_policy(&cur, budget.policy)?;
            if out.split.is_empty() {
                stop = StopReason::NoSplittingPoint;
                break;
            }
            steps.push(InductionStep {
                kind: StepKind::Split,
                input: cur.clone(),
                output: out.system.clone(),
                fold_map: out.map,
                zip: out.zip,
                split_data: out.split,
                folds: out.folds,
                interference: out.interference.len(),
                dropped: Vec::new(),
            });
            cur = out.system;
            if over_cap(&cur) {
                stop = StopReason::Components;
                capped = true;
                break;
            }
        }
    }
    let classification = if halted_at.is_some() {
        Classification::Surface
    } else {
        let hist_metrics: Vec<(usize, Scalar)> = std::iter::once(s)
            .chain(steps.iter().map(|st| &st.output))
            .map(|x| (x.forest.len(), x.max_component_diameter()))
            .collect();
        if levitt_evidence(&hist_metrics) {
            Classification::LevittEvidence
        } else {
            Classification::Unknown
        }
    };
    let budget_exhausted = capped || stop == StopReason::Budget;
    Ok(InductionHistory { initial: s.clone(), steps, classification, halted_at, stop, budget, budget_exhausted })
}
