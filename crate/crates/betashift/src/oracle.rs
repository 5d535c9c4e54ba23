//! Brute-force truncated follower/predecessor/extender counting.
//!
//! Any shift space presented by a factor-closed legality predicate can be
//! interrogated here: for each legal word of length n we materialize the set
//! of legal continuations up to a context depth m, canonicalize it, and count
//! distinct sets. Truncation only ever merges classes, so every count is a
//! certified lower bound for the true set count; depth escalation with a
//! stabilization flag is the reporting heuristic, never a proof.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kneading::KneadingSequence;
use crate::language::is_admissible;
use crate::report::{CountReport, Provenance, ReportParams, Status};
use crate::word::{Digit, Word};
use crate::{Error, Result};

/// Default cap on legality tests per oracle call.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

/// Which truncated set to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Follower,
    Predecessor,
    Extender,
}

impl SetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SetKind::Follower => "follower",
            SetKind::Predecessor => "predecessor",
            SetKind::Extender => "extender",
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "follower" => Ok(SetKind::Follower),
            "predecessor" => Ok(SetKind::Predecessor),
            "extender" => Ok(SetKind::Extender),
            other => Err(Error::InvalidInput(format!(
                "unknown set kind `{other}` (expected follower, predecessor, or extender)"
            ))),
        }
    }
}

type TestFn = dyn Fn(&[Digit]) -> Result<bool> + Send + Sync;

/// A factorial language given by a total membership test.
#[derive(Clone)]
pub struct LegalityPredicate {
    pub name: String,
    pub alphabet_max: Digit,
    test: Arc<TestFn>,
}

impl fmt::Debug for LegalityPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LegalityPredicate")
            .field("name", &self.name)
            .field("alphabet_max", &self.alphabet_max)
            .finish()
    }
}

impl LegalityPredicate {
    pub fn new(
        name: impl Into<String>,
        alphabet_max: Digit,
        test: impl Fn(&[Digit]) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        LegalityPredicate {
            name: name.into(),
            alphabet_max,
            test: Arc::new(test),
        }
    }

    pub fn test(&self, w: &[Digit]) -> Result<bool> {
        (self.test)(w)
    }
}

/// Wrap a kneading sequence's admissibility criterion as a predicate.
/// Prefix-mode sequences reject queries beyond their horizon loudly.
pub fn predicate_from_kneading(d: &KneadingSequence) -> LegalityPredicate {
    let owned = d.clone();
    let name = format!("kneading({owned:?})");
    let k = d.alphabet_max();
    LegalityPredicate::new(name, k, move |w| {
        is_admissible(&Word::from(w), &owned)
    })
}

fn has_odd_zero_run_between_ones(w: &[Digit]) -> bool {
    let mut last_one: Option<usize> = None;
    for (i, &c) in w.iter().enumerate() {
        match c {
            1 => {
                if let Some(j) = last_one {
                    let zeros = i - j - 1;
                    if w[j + 1..i].iter().all(|&z| z == 0) && zeros % 2 == 1 {
                        return true;
                    }
                }
                last_one = Some(i);
            }
            0 => {}
            _ => last_one = None,
        }
    }
    false
}

/// Built-in predicates, by name:
/// * `full(k)` — everything over the alphabet {0, ..., k};
/// * `even_shift` — binary words with no factor 1 0^odd 1;
/// * `forbidden(w1,w2,...)` — words avoiding every listed factor.
pub fn builtin_predicate(name: &str) -> Result<LegalityPredicate> {
    let name = name.trim();
    if name == "even_shift" {
        return Ok(LegalityPredicate::new("even_shift", 1, |w| {
            Ok(!has_odd_zero_run_between_ones(w))
        }));
    }
    if let Some(arg) = name.strip_prefix("full(").and_then(|r| r.strip_suffix(')')) {
        let k: Digit = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad alphabet size in `{name}`")))?;
        if k == 0 {
            return Err(Error::InvalidInput("full shift needs k >= 1".into()));
        }
        return Ok(LegalityPredicate::new(format!("full({k})"), k, |_| Ok(true)));
    }
    if let Some(arg) = name
        .strip_prefix("forbidden(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let words = arg
            .split(',')
            .map(|p| Word::from_str(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidInput("empty forbidden word".into()));
        }
        let k = words
            .iter()
            .flat_map(|w| w.iter().copied())
            .max()
            .unwrap_or(1)
            .max(1);
        let label = format!("forbidden({arg})");
        return Ok(LegalityPredicate::new(label, k, move |w| {
            Ok(!words.iter().any(|f| {
                w.windows(f.len()).any(|window| window == &f[..])
            }))
        }));
    }
    Err(Error::InvalidInput(format!(
        "unknown predicate `{name}` (expected full(k), even_shift, or forbidden(...))"
    )))
}

/// A truncated-set count at a fixed context depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSetCount {
    pub kind: SetKind,
    pub n: usize,
    pub depth: usize,
    pub value: u64,
    pub stabilized: bool,
}

impl TruncatedSetCount {
    pub fn to_report(&self) -> CountReport {
        CountReport {
            n: self.n,
            value: self.value,
            status: Status::LowerBound,
            provenance: Provenance::Oracle,
            params: ReportParams {
                depth: Some(self.depth),
                stabilized: Some(self.stabilized),
                ..Default::default()
            },
        }
    }
}

struct Budget {
    used: AtomicU64,
    cap: u64,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            cap,
        }
    }

    fn charge(&self) -> Result<()> {
        let prev = self.used.fetch_add(1, Ordering::Relaxed);
        if prev >= self.cap {
            return Err(Error::WorkBudgetExceeded(self.cap));
        }
        Ok(())
    }
}

fn tested(pred: &LegalityPredicate, w: &[Digit], budget: &Budget) -> Result<bool> {
    budget.charge()?;
    pred.test(w)
}

/// All legal words of length exactly `n`, found by depth-first search over
/// legal prefixes (factor-closed languages are prefix-closed).
fn legal_words_exact(
    pred: &LegalityPredicate,
    n: usize,
    budget: &Budget,
) -> Result<Vec<Vec<Digit>>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == n {
            out.push(w);
            continue;
        }
        // push in reverse so words come out in lexicographic order
        for a in (0..=pred.alphabet_max).rev() {
            let mut next = w.clone();
            next.push(a);
            if tested(pred, &next, budget)? {
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// All legal words of length at most `m`, including the empty word.
fn legal_words_upto(
    pred: &LegalityPredicate,
    m: usize,
    budget: &Budget,
) -> Result<Vec<Vec<Digit>>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..m {
        let mut next_frontier = Vec::new();
        for w in &frontier {
            for a in 0..=pred.alphabet_max {
                let mut next = w.clone();
                next.push(a);
                if tested(pred, &next, budget)? {
                    next_frontier.push(next);
                }
            }
        }
        out.extend(next_frontier.iter().cloned());
        frontier = next_frontier;
    }
    Ok(out)
}

fn concat(a: &[Digit], b: &[Digit]) -> Vec<Digit> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// The canonical truncated set of `w`: a sorted list of the contexts (or
/// context pairs) that extend it legally. Equal true sets have equal
/// truncations, so distinct truncations certify distinct sets.
fn truncated_set(
    pred: &LegalityPredicate,
    kind: SetKind,
    w: &[Digit],
    contexts: &[Vec<Digit>],
    budget: &Budget,
) -> Result<Vec<Vec<Digit>>> {
    let mut out = Vec::new();
    match kind {
        SetKind::Follower => {
            for u in contexts {
                if tested(pred, &concat(w, u), budget)? {
                    out.push(u.clone());
                }
            }
        }
        SetKind::Predecessor => {
            for s in contexts {
                if tested(pred, &concat(s, w), budget)? {
                    out.push(s.clone());
                }
            }
        }
        SetKind::Extender => {
            for s in contexts {
                let sw = concat(s, w);
                if !tested(pred, &sw, budget)? {
                    continue;
                }
                for u in contexts {
                    if tested(pred, &concat(&sw, u), budget)? {
                        // encode the pair (s, u) unambiguously: len(s), s, u
                        let mut pair = Vec::with_capacity(s.len() + u.len() + 1);
                        pair.push(s.len() as Digit);
                        pair.extend_from_slice(s);
                        pair.extend_from_slice(u);
                        out.push(pair);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn count_at_depth(
    pred: &LegalityPredicate,
    kind: SetKind,
    words: &[Vec<Digit>],
    m: usize,
    budget: &Budget,
) -> Result<u64> {
    let contexts = legal_words_upto(pred, m, budget)?;
    let sets: Vec<Vec<Vec<Digit>>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            words
                .par_iter()
                .map(|w| truncated_set(pred, kind, w, &contexts, budget))
                .collect::<Result<Vec<_>>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            words
                .iter()
                .map(|w| truncated_set(pred, kind, w, &contexts, budget))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let distinct: BTreeSet<&Vec<Vec<Digit>>> = sets.iter().collect();
    Ok(distinct.len() as u64)
}

/// Count distinct depth-`m` truncated sets over all legal words of length
/// `n`. A lower bound for the true set count.
pub fn truncated_set_count(
    pred: &LegalityPredicate,
    kind: SetKind,
    n: usize,
    m: usize,
    work_budget: u64,
) -> Result<TruncatedSetCount> {
    let budget = Budget::new(work_budget);
    let words = legal_words_exact(pred, n, &budget)?;
    let value = count_at_depth(pred, kind, &words, m, &budget)?;
    Ok(TruncatedSetCount {
        kind,
        n,
        depth: m,
        value,
        stabilized: false,
    })
}

/// Sequential reference path for [`truncated_set_count`].
#[doc(hidden)]
pub fn truncated_set_count_seq(
    pred: &LegalityPredicate,
    kind: SetKind,
    n: usize,
    m: usize,
    work_budget: u64,
) -> Result<TruncatedSetCount> {
    let budget = Budget::new(work_budget);
    let words = legal_words_exact(pred, n, &budget)?;
    let contexts = legal_words_upto(pred, m, &budget)?;
    let mut distinct = BTreeSet::new();
    for w in &words {
        distinct.insert(truncated_set(pred, kind, w, &contexts, &budget)?);
    }
    Ok(TruncatedSetCount {
        kind,
        n,
        depth: m,
        value: distinct.len() as u64,
        stabilized: false,
    })
}

/// Escalate the context depth from 1 to `m_max`; the result carries
/// `stabilized = true` when the last two depths agree. A reported heuristic,
/// not a proof of exactness.
pub fn stabilized_count(
    pred: &LegalityPredicate,
    kind: SetKind,
    n: usize,
    m_max: usize,
    work_budget: u64,
) -> Result<TruncatedSetCount> {
    let budget = Budget::new(work_budget);
    let words = legal_words_exact(pred, n, &budget)?;
    let mut prev: Option<u64> = None;
    let mut last = 0u64;
    for m in 1..=m_max {
        let value = count_at_depth(pred, kind, &words, m, &budget)?;
        prev = (m > 1).then_some(last);
        last = value;
    }
    Ok(TruncatedSetCount {
        kind,
        n,
        depth: m_max,
        value: last,
        stabilized: prev == Some(last),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_pred() -> LegalityPredicate {
        predicate_from_kneading(&KneadingSequence::periodic(vec![1, 0]))
    }

    #[test]
    fn even_shift_membership() {
        let p = builtin_predicate("even_shift").unwrap();
        assert!(!p.test(&[1, 0, 1]).unwrap());
        assert!(p.test(&[1, 0, 0, 1]).unwrap());
        assert!(p.test(&[1, 1]).unwrap());
        assert!(p.test(&[0, 0, 0]).unwrap());
        assert!(!p.test(&[1, 1, 0, 1]).unwrap());
    }

    #[test]
    fn forbidden_matches_golden() {
        let f = builtin_predicate("forbidden(11)").unwrap();
        let g = golden_pred();
        let mut stack: Vec<Vec<Digit>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            assert_eq!(f.test(&w).unwrap(), g.test(&w).unwrap(), "w={w:?}");
            if w.len() < 8 {
                for a in 0..=1 {
                    let mut next = w.clone();
                    next.push(a);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn full_shift_collapses_to_one() {
        for k in 1..=2 {
            let p = builtin_predicate(&format!("full({k})")).unwrap();
            for kind in [SetKind::Follower, SetKind::Predecessor, SetKind::Extender] {
                let r = truncated_set_count(&p, kind, 3, 2, DEFAULT_WORK_BUDGET).unwrap();
                assert_eq!(r.value, 1, "k={k} kind={kind}");
            }
        }
    }

    #[test]
    fn even_shift_follower_sequence() {
        let p = builtin_predicate("even_shift").unwrap();
        let values: Vec<u64> = (1..=6)
            .map(|n| {
                stabilized_count(&p, SetKind::Follower, n, 6, DEFAULT_WORK_BUDGET)
                    .unwrap()
                    .value
            })
            .collect();
        assert_eq!(values, vec![2, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn golden_follower_stabilizes_at_two() {
        let r = stabilized_count(&golden_pred(), SetKind::Follower, 3, 6, DEFAULT_WORK_BUDGET)
            .unwrap();
        assert_eq!((r.value, r.stabilized), (2, true));
    }

    #[test]
    fn golden_extender_merges_000_and_010() {
        // 000 and 010 share an extender set, so the count stays below the
        // number of legal words
        let p = golden_pred();
        let budget = Budget::new(DEFAULT_WORK_BUDGET);
        let contexts = legal_words_upto(&p, 4, &budget).unwrap();
        let a = truncated_set(&p, SetKind::Extender, &[0, 0, 0], &contexts, &budget).unwrap();
        let b = truncated_set(&p, SetKind::Extender, &[0, 1, 0], &contexts, &budget).unwrap();
        assert_eq!(a, b);
        let c = truncated_set(&p, SetKind::Extender, &[0, 0, 1], &contexts, &budget).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn depth_monotonicity() {
        let p = golden_pred();
        for kind in [SetKind::Follower, SetKind::Predecessor, SetKind::Extender] {
            let mut prev = 0;
            for m in 1..=5 {
                let v = truncated_set_count(&p, kind, 3, m, DEFAULT_WORK_BUDGET)
                    .unwrap()
                    .value;
                assert!(v >= prev, "kind={kind} m={m}");
                prev = v;
            }
        }
    }

    #[test]
    fn budget_guard_trips() {
        let p = builtin_predicate("full(2)").unwrap();
        assert!(matches!(
            truncated_set_count(&p, SetKind::Extender, 4, 5, 1000),
            Err(Error::WorkBudgetExceeded(1000))
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let p = golden_pred();
        for kind in [SetKind::Follower, SetKind::Extender] {
            let a = truncated_set_count(&p, kind, 3, 4, DEFAULT_WORK_BUDGET).unwrap();
            let b = truncated_set_count_seq(&p, kind, 3, 4, DEFAULT_WORK_BUDGET).unwrap();
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn prefix_predicate_respects_horizon() {
        let d = KneadingSequence::prefix(vec![1, 1, 0, 1], false);
        let p = predicate_from_kneading(&d);
        assert!(p.test(&[1, 1, 0]).unwrap());
        assert!(matches!(
            p.test(&[0, 0, 0, 0, 0]),
            Err(Error::HorizonExceeded { .. })
        ));
    }
}
