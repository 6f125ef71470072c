//! Finite-depth admissible and regular languages.

use std::collections::BTreeSet;

use crate::error::SystemError;
use crate::isometry::PartialIsometry;
use crate::par::Exec;
use crate::system::{SystemOfIsometries, Sym, Word};

/// An admissible word with its composed partial isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LangEntry {
    pub word: Word,
    pub map: PartialIsometry,
}

impl LangEntry {
    /// Domain has more than one point.
    pub fn nondegenerate(&self) -> bool {
        !self.map.is_degenerate()
    }
}

/// Admissible words of lengths `1..=depth`; `levels[k]` holds the words of length `k + 1`
/// in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    pub depth: usize,
    pub regular_only: bool,
    pub levels: Vec<Vec<LangEntry>>,
}

impl Language {
    pub fn level(&self, len: usize) -> &[LangEntry] {
        if len == 0 || len > self.levels.len() {
            &[]
        } else {
            &self.levels[len - 1]
        }
    }

    pub fn words(&self, len: usize) -> BTreeSet<Word> {
        self.level(len).iter().map(|e| e.word.clone()).collect()
    }

    pub fn all_words(&self) -> BTreeSet<Word> {
        self.levels.iter().flatten().map(|e| e.word.clone()).collect()
    }

    pub fn regular(&self, len: usize) -> BTreeSet<Word> {
        self.level(len).iter().filter(|e| e.nondegenerate()).map(|e| e.word.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Enumeration settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub depth: usize,
    /// Cap on the total number of words.
    pub max_words: Option<usize>,
    /// Keep only words with nondegenerate domain (and prune their extensions).
    pub regular_only: bool,
    pub exec: Exec,
}

impl Enumeration {
    pub fn admissible(depth: usize) -> Self {
        Enumeration { depth, max_words: None, regular_only: false, exec: Exec::default() }
    }

    pub fn regular(depth: usize) -> Self {
        Enumeration { depth, max_words: None, regular_only: true, exec: Exec::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.max_words = cap;
        self
    }
}

fn extensions(s: &SystemOfIsometries, e: &LangEntry, syms: &[Sym], regular_only: bool) -> Vec<LangEntry> {
    let last = *e.word.0.last().expect("nonempty word");
    let mut out = Vec::new();
    for &sym in syms {
        if sym == last.inv() {
            continue;
        }
        if let Some(map) = e.map.then(&s.forest, s.map(sym)) {
            if regular_only && map.is_degenerate() {
                continue;
            }
            let mut w = e.word.0.clone();
            w.push(sym);
            out.push(LangEntry { word: Word(w), map });
        }
    }
    out
}

/// Level-by-level enumeration of admissible reduced words, deterministic in every mode.
pub fn enumerate(s: &SystemOfIsometries, cfg: Enumeration) -> Result<Language, SystemError> {
    let syms = s.syms();
    let mut levels: Vec<Vec<LangEntry>> = Vec::new();
    let mut total = 0usize;
    if cfg.depth == 0 {
        return Ok(Language { depth: 0, regular_only: cfg.regular_only, levels });
    }
    let first: Vec<LangEntry> = syms
        .iter()
        .map(|&sym| LangEntry { word: Word(vec![sym]), map: s.map(sym).clone() })
        .filter(|e| !cfg.regular_only || e.nondegenerate())
        .collect();
    total += first.len();
    if let Some(cap) = cfg.max_words {
        if total > cap {
            return Err(SystemError::BudgetExceeded(cap));
        }
    }
    levels.push(first);
    for _ in 1..cfg.depth {
        let prev = levels.last().expect("one level");
        let next: Vec<LangEntry> = cfg
            .exec
            .map(prev, |e| extensions(s, e, &syms, cfg.regular_only))
            .into_iter()
            .flatten()
            .collect();
        total += next.len();
        if let Some(cap) = cfg.max_words {
            if total > cap {
                return Err(SystemError::BudgetExceeded(cap));
            }
        }
        let done = next.is_empty();
        levels.push(next);
        if done {
            while levels.len() < cfg.depth {
                levels.push(Vec::new());
            }
            break;
        }
    }
    Ok(Language { depth: cfg.depth, regular_only: cfg.regular_only, levels })
}

/// All admissible reduced words of length `1..=n` with their domains.
pub fn admissible_language(s: &SystemOfIsometries, n: usize) -> Result<Language, SystemError> {
    enumerate(s, Enumeration::admissible(n))
}
