//! Closed-form follower, predecessor, and extender counts.
//!
//! * Follower sets: at most n + 1 of each length, collapsing to a constant p
//!   (the first shift recurrence) exactly when the kneading sequence is
//!   eventually periodic.
//! * Predecessor sets: counted by the subword complexity of the kneading
//!   sequence; predecessor-set equality is decided by a single rank statistic
//!   (how many kneading windows dominate the word), since the underlying
//!   "condition k" predicates are nested.
//! * Extender sets: complexity plus a correction sum over kneading windows,
//!   where the correction term eta(w, k) records whether some other word in
//!   suffix class k shares w's predecessor set. For eventually periodic
//!   kneading sequences this formula is only an upper bound.

use std::collections::BTreeMap;

use crate::kneading::{normalize, shift_equal, KneadingSequence, ShiftEqual};
use crate::language::{enumerate_language, subword_complexity, suffix_class, windows_of, WindowSet};
use crate::report::{CountReport, Provenance, ReportParams, Status};
use crate::word::Word;
use crate::{Error, Result};

/// First shift recurrence of an eventually periodic kneading sequence: the
/// minimal j >= 1 such that sigma^j(d) equals sigma^k(d) for some k < j.
/// This is the eventual follower-set count.
pub fn sofic_parameter_p(d: &KneadingSequence) -> Result<usize> {
    if !d.is_exact() {
        return Err(Error::SoficInput);
    }
    let bound = match normalize(d)? {
        KneadingSequence::Exact { preperiod, period } => preperiod.len() + period.len(),
        KneadingSequence::Prefix { .. } => unreachable!("normalize preserves mode"),
    };
    for j in 1..=bound {
        for k in 0..j {
            if shift_equal(d, k, j)? == ShiftEqual::Equal {
                return Ok(j);
            }
        }
    }
    Err(Error::Verification(
        "no shift recurrence within preperiod + period".into(),
    ))
}

/// Group the shifts sigma^0, ..., sigma^n into classes. `Equal` merges;
/// `Unknown` (prefix mode beyond the horizon) also merges, which makes the
/// class count a lower bound there. Returns (class count, all pairs Distinct).
fn shift_classes(d: &KneadingSequence, n: usize) -> Result<(usize, bool)> {
    let mut reps: Vec<usize> = Vec::new();
    let mut all_distinct = true;
    for j in 0..=n {
        let mut merged = false;
        for &r in &reps {
            match shift_equal(d, r, j)? {
                ShiftEqual::Distinct => {}
                ShiftEqual::Equal => {
                    merged = true;
                    all_distinct = false;
                    break;
                }
                ShiftEqual::Unknown => {
                    merged = true;
                    all_distinct = false;
                    break;
                }
            }
        }
        if !merged {
            reps.push(j);
        }
    }
    Ok((reps.len(), all_distinct))
}

/// Number of distinct follower sets of length-n words.
///
/// Exact mode gives min(n + 1, p) exactly; prefix mode counts shifts that are
/// pairwise distinct within the horizon, which is exact under an aperiodicity
/// assertion when every comparison resolves, and a lower bound otherwise.
pub fn follower_count(d: &KneadingSequence, n: usize) -> Result<CountReport> {
    if n == 0 {
        return Err(Error::InvalidInput("follower count needs n >= 1".into()));
    }
    match d {
        KneadingSequence::Exact { .. } => {
            let p = sofic_parameter_p(d)?;
            let value = (n + 1).min(p);
            let (classes, _) = shift_classes(d, n)?;
            if classes != value {
                return Err(Error::Verification(format!(
                    "shift-class count {classes} disagrees with min(n+1, p) = {value}"
                )));
            }
            Ok(CountReport {
                n,
                value: value as u64,
                status: Status::Exact,
                provenance: Provenance::Formula,
                params: ReportParams::default(),
            })
        }
        KneadingSequence::Prefix { digits, .. } => {
            if digits.len() < 2 * n {
                return Err(Error::HorizonExceeded {
                    needed: 2 * n,
                    available: digits.len(),
                });
            }
            let (classes, all_distinct) = shift_classes(d, n)?;
            let status = if d.assert_aperiodic() && all_distinct {
                Status::Exact
            } else {
                Status::LowerBound
            };
            Ok(CountReport {
                n,
                value: classes as u64,
                status,
                provenance: Provenance::Formula,
                params: ReportParams {
                    horizon: d.horizon(),
                    aperiodicity_assumed: Some(d.assert_aperiodic()),
                    ..Default::default()
                },
            })
        }
    }
}

/// Number of distinct predecessor sets of length-n words: the subword
/// complexity of the kneading sequence.
pub fn predecessor_count(d: &KneadingSequence, n: usize) -> Result<CountReport> {
    if n == 0 {
        return Err(Error::InvalidInput("predecessor count needs n >= 1".into()));
    }
    let mut report = subword_complexity(d, n)?;
    if report.status == Status::LowerBound && d.assert_aperiodic() {
        report.params.aperiodicity_assumed = Some(true);
    }
    Ok(report)
}

/// Rank of an admissible word: the number of distinct |w|-windows of the
/// kneading sequence that dominate w. Two admissible words of the same
/// length have equal predecessor sets iff their ranks agree.
pub fn predecessor_rank(w: &Word, d: &KneadingSequence) -> Result<u64> {
    if !crate::language::is_admissible(w, d)? {
        return Err(Error::InadmissibleWord);
    }
    let ws = windows_of(d, w.len())?;
    Ok(ws.dominating_count(w))
}

/// Precomputed (suffix class, rank) statistics over the full language at
/// length n, used to evaluate the extender correction term.
#[derive(Clone, Debug)]
pub struct ClassRankTable {
    pub n: usize,
    pub windows: WindowSet,
    /// (word, suffix class, rank), in lexicographic word order.
    pub entries: Vec<(Word, usize, u64)>,
    /// (class, rank) -> number of words with that signature.
    incidence: BTreeMap<(usize, u64), u64>,
}

impl ClassRankTable {
    pub fn rank_of(&self, w: &Word) -> u64 {
        self.windows.dominating_count(w)
    }

    pub fn incidence(&self, class: usize, rank: u64) -> u64 {
        self.incidence.get(&(class, rank)).copied().unwrap_or(0)
    }
}

/// Build the class/rank table from the full admissible language at length n.
pub fn class_rank_table(d: &KneadingSequence, n: usize) -> Result<ClassRankTable> {
    let words = enumerate_language(d, n)?;
    let windows = windows_of(d, n)?;
    let stats = |w: &Word| -> Result<(usize, u64)> {
        Ok((suffix_class(w, d)?, windows.dominating_count(w)))
    };
    let annotated: Vec<(usize, u64)> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            words
                .par_iter()
                .map(stats)
                .collect::<Result<Vec<_>>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            words.iter().map(stats).collect::<Result<Vec<_>>>()?
        }
    };
    let mut incidence = BTreeMap::new();
    let mut entries = Vec::with_capacity(words.len());
    for (w, (class, rank)) in words.into_iter().zip(annotated) {
        *incidence.entry((class, rank)).or_insert(0u64) += 1;
        entries.push((w, class, rank));
    }
    Ok(ClassRankTable {
        n,
        windows,
        entries,
        incidence,
    })
}

/// The extender correction term: 1 iff some word v != w in suffix class k
/// has the same predecessor rank as w.
pub fn eta(w: &Word, k: usize, d: &KneadingSequence, table: &ClassRankTable) -> Result<u8> {
    debug_assert_eq!(w.len(), table.n);
    let rank = table.rank_of(w);
    let class = suffix_class(w, d)?;
    let mut count = table.incidence(k, rank);
    if class == k {
        // w itself is in S_k with this rank; it does not witness eta.
        count = count.saturating_sub(1);
    }
    Ok(u8::from(count > 0))
}

/// Number of distinct extender sets of length-n words, by the closed-form
/// expression: complexity plus the eta-sum over kneading windows.
///
/// Status: exact for asserted-aperiodic prefix input with every shift
/// comparison resolved; upper bound for eventually periodic (sofic) input;
/// lower bound otherwise.
pub fn extender_count_formula(d: &KneadingSequence, n: usize) -> Result<CountReport> {
    if n == 0 {
        return Err(Error::InvalidInput("extender count needs n >= 1".into()));
    }
    if let KneadingSequence::Prefix { digits, .. } = d {
        if digits.len() < 2 * n {
            return Err(Error::HorizonExceeded {
                needed: 2 * n,
                available: digits.len(),
            });
        }
    }
    let table = class_rank_table(d, n)?;
    let phi = table.windows.windows.len() as u64;
    let mut correction = 0u64;
    for w in &table.windows.windows {
        for k in 0..=n {
            correction += u64::from(eta(w, k, d, &table)?);
        }
    }
    let status = match d {
        KneadingSequence::Exact { .. } => Status::UpperBound,
        KneadingSequence::Prefix { .. } => {
            let (_, all_distinct) = shift_classes(d, n)?;
            if d.assert_aperiodic() && all_distinct {
                Status::Exact
            } else {
                Status::LowerBound
            }
        }
    };
    Ok(CountReport {
        n,
        value: phi + correction,
        status,
        provenance: Provenance::Formula,
        params: ReportParams {
            horizon: d.horizon(),
            aperiodicity_assumed: d
                .horizon()
                .is_some()
                .then(|| d.assert_aperiodic()),
            ..Default::default()
        },
    })
}

/// Complexity sandwich for the extender count of a non-eventually-periodic
/// shift: Phi_n <= |E(n)| <= (n+1) Phi_n.
pub fn extender_bounds(d: &KneadingSequence, n: usize) -> Result<(u64, u64)> {
    if d.is_exact() {
        return Err(Error::SoficInput);
    }
    let phi = subword_complexity(d, n)?.value;
    Ok((phi, (n as u64 + 1) * phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn golden() -> KneadingSequence {
        KneadingSequence::periodic(vec![1, 0])
    }

    fn full(k: u8) -> KneadingSequence {
        KneadingSequence::periodic(vec![k])
    }

    fn shifted_golden() -> KneadingSequence {
        KneadingSequence::exact(vec![2], vec![1, 0])
    }

    fn w(s: &str) -> Word {
        Word::from_str(s).unwrap()
    }

    #[test]
    fn sofic_parameter_examples() {
        assert_eq!(sofic_parameter_p(&golden()).unwrap(), 2);
        assert_eq!(sofic_parameter_p(&full(1)).unwrap(), 1);
        assert_eq!(sofic_parameter_p(&shifted_golden()).unwrap(), 3);
        assert!(matches!(
            sofic_parameter_p(&KneadingSequence::prefix(vec![1, 0], false)),
            Err(Error::SoficInput)
        ));
    }

    #[test]
    fn follower_examples() {
        let r = follower_count(&golden(), 5).unwrap();
        assert_eq!((r.value, r.status), (2, Status::Exact));
        let r = follower_count(&golden(), 1).unwrap();
        assert_eq!((r.value, r.status), (2, Status::Exact));
        for n in 1..=6 {
            let r = follower_count(&shifted_golden(), n).unwrap();
            assert_eq!(r.value, (n as u64 + 1).min(3));
        }
    }

    #[test]
    fn follower_prefix_modes() {
        // a 12-digit aperiodic-looking prefix where all shifts differ in-horizon
        let d = KneadingSequence::prefix(vec![1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0], true);
        let r = follower_count(&d, 3).unwrap();
        assert_eq!((r.value, r.status), (4, Status::Exact));
        let unasserted = d.clone().with_aperiodicity(false);
        let r = follower_count(&unasserted, 3).unwrap();
        assert_eq!((r.value, r.status), (4, Status::LowerBound));
        assert!(matches!(
            follower_count(&d, 7),
            Err(Error::HorizonExceeded { needed: 14, available: 12 })
        ));
    }

    #[test]
    fn follower_never_exceeds_n_plus_one() {
        for d in [golden(), full(1), full(2), shifted_golden()] {
            for n in 1..=10 {
                assert!(follower_count(&d, n).unwrap().value <= n as u64 + 1);
            }
        }
    }

    #[test]
    fn predecessor_examples() {
        for n in 1..=6 {
            assert_eq!(predecessor_count(&golden(), n).unwrap().value, 2);
        }
        assert_eq!(predecessor_count(&full(1), 4).unwrap().value, 1);
    }

    #[test]
    fn predecessor_rank_examples() {
        assert_eq!(predecessor_rank(&w("00"), &golden()).unwrap(), 2);
        assert_eq!(predecessor_rank(&w("10"), &golden()).unwrap(), 1);
        // the kneading prefix itself is the lexicographic maximum
        assert_eq!(predecessor_rank(&w("1010"), &golden()).unwrap(), 1);
        assert!(matches!(
            predecessor_rank(&w("11"), &golden()),
            Err(Error::InadmissibleWord)
        ));
    }

    #[test]
    fn rank_is_monotone() {
        for d in [golden(), shifted_golden()] {
            for n in 1..=6 {
                let lang = enumerate_language(&d, n).unwrap();
                for pair in lang.windows(2) {
                    let rv = predecessor_rank(&pair[0], &d).unwrap();
                    let rw = predecessor_rank(&pair[1], &d).unwrap();
                    assert!(rv >= rw, "ranks must be antitone in lex order");
                }
            }
        }
    }

    #[test]
    fn predecessor_count_matches_distinct_ranks() {
        for d in [golden(), full(1), full(2), shifted_golden()] {
            for n in 1..=8 {
                let lang = enumerate_language(&d, n).unwrap();
                let mut ranks: Vec<u64> = lang
                    .iter()
                    .map(|x| predecessor_rank(x, &d).unwrap())
                    .collect();
                ranks.sort_unstable();
                ranks.dedup();
                assert_eq!(
                    ranks.len() as u64,
                    predecessor_count(&d, n).unwrap().value,
                    "d={d:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn eta_examples() {
        let d = golden();
        let table = class_rank_table(&d, 2).unwrap();
        assert_eq!(eta(&w("10"), 2, &d, &table).unwrap(), 0);
        assert_eq!(eta(&w("01"), 0, &d, &table).unwrap(), 1);
        assert_eq!(eta(&w("10"), 0, &d, &table).unwrap(), 0);
    }

    #[test]
    fn eta_matches_brute_force() {
        for d in [golden(), full(1), shifted_golden()] {
            for n in 1..=6 {
                let table = class_rank_table(&d, n).unwrap();
                for (word, _, rank) in &table.entries {
                    for k in 0..=n {
                        let brute = table.entries.iter().any(|(v, vc, vr)| {
                            v != word && *vc == k && vr == rank
                        });
                        assert_eq!(
                            eta(word, k, &d, &table).unwrap() == 1,
                            brute,
                            "d={d:?} n={n} w={word} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn extender_formula_examples() {
        let r = extender_count_formula(&golden(), 2).unwrap();
        assert_eq!((r.value, r.status), (3, Status::UpperBound));
        let r = extender_count_formula(&full(1), 2).unwrap();
        assert_eq!((r.value, r.status), (3, Status::UpperBound));
    }

    #[test]
    fn extender_dominates_other_counts() {
        for d in [golden(), full(1), full(2), shifted_golden()] {
            for n in 1..=6 {
                let e = extender_count_formula(&d, n).unwrap().value;
                assert!(e >= predecessor_count(&d, n).unwrap().value);
                assert!(e >= follower_count(&d, n).unwrap().value);
            }
        }
    }

    #[test]
    fn extender_bounds_gate() {
        assert!(matches!(
            extender_bounds(&golden(), 2),
            Err(Error::SoficInput)
        ));
        let d = KneadingSequence::prefix(vec![1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0], true);
        let (lo, hi) = extender_bounds(&d, 2).unwrap();
        assert!(lo >= 1 && hi == 3 * lo);
        let e = extender_count_formula(&d, 2).unwrap();
        assert!(lo <= e.value && e.value <= hi);
    }

    #[test]
    fn sofic_dichotomy() {
        // eventually periodic members drop to |F(n)| <= n at some n <= 10
        for d in [golden(), full(1), full(2), shifted_golden()] {
            assert!((1..=10).any(|n| follower_count(&d, n).unwrap().value <= n as u64));
        }
    }
}
