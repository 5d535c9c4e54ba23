//! The language of a beta-shift: admissibility, enumeration, factor
//! counting, and suffix classification.
//!
//! Everything is driven by the lexicographic criterion: a word is admissible
//! when every suffix is dominated by the matching prefix of the kneading
//! sequence. Admissibility is suffix-hereditary, which is what makes the
//! pruned prefix-tree enumeration sound.

use std::collections::BTreeSet;

use crate::kneading::KneadingSequence;
use crate::report::{CountReport, Provenance, ReportParams, Status};
use crate::word::{Digit, Word};
use crate::{Error, Result};

/// Parry criterion on a finite word: every suffix of `w` is lexicographically
/// less than or equal to the equal-length prefix of `d`.
pub fn is_admissible(w: &Word, d: &KneadingSequence) -> Result<bool> {
    let n = w.len();
    let pref = d.digits_prefix(n)?;
    Ok(admissible_against(w, &pref))
}

fn admissible_against(w: &[Digit], pref: &[Digit]) -> bool {
    let n = w.len();
    for i in 0..n {
        let suffix = &w[i..];
        if suffix > &pref[..n - i] {
            return false;
        }
    }
    true
}

/// Tight-suffix bookkeeping for the prefix-tree search: `tights` holds the
/// lengths t for which the last t letters of the current word equal the
/// first t digits of `d` (always including t = 0). A new digit is legal iff
/// it does not exceed `pref[t]` for every tight t.
fn extend_tights(tights: &[usize], digit: Digit, pref: &[Digit]) -> Option<Vec<usize>> {
    for &t in tights {
        if digit > pref[t] {
            return None;
        }
    }
    let mut next = Vec::with_capacity(tights.len() + 1);
    next.push(0);
    for &t in tights {
        if digit == pref[t] {
            next.push(t + 1);
        }
    }
    Some(next)
}

fn dfs_words(
    pref: &[Digit],
    alphabet_max: Digit,
    n: usize,
    word: &mut Vec<Digit>,
    tights: &[usize],
    out: &mut Vec<Word>,
) {
    if word.len() == n {
        out.push(Word::new(word.clone()));
        return;
    }
    for digit in 0..=alphabet_max {
        if let Some(next) = extend_tights(tights, digit, pref) {
            word.push(digit);
            dfs_words(pref, alphabet_max, n, word, &next, out);
            word.pop();
        }
    }
}

/// All admissible words of length `n`, in lexicographic order. Sequential
/// reference path; `enumerate_language` is the default entry point.
#[doc(hidden)]
pub fn enumerate_language_seq(d: &KneadingSequence, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Ok(vec![Word::empty()]);
    }
    let pref = d.digits_prefix(n)?;
    let k = d.alphabet_max();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    dfs_words(&pref, k, n, &mut word, &[0], &mut out);
    Ok(out)
}

/// All admissible words of length `n`, in lexicographic order.
///
/// With the `parallel` feature the top-level branches of the prefix tree are
/// explored concurrently and merged back in digit order, so the output is
/// identical to the sequential path.
pub fn enumerate_language(d: &KneadingSequence, n: usize) -> Result<Vec<Word>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if n < 2 {
            return enumerate_language_seq(d, n);
        }
        let pref = d.digits_prefix(n)?;
        let k = d.alphabet_max();
        let branches: Vec<(Digit, Vec<usize>)> = (0..=k)
            .filter_map(|digit| extend_tights(&[0], digit, &pref).map(|t| (digit, t)))
            .collect();
        let chunks: Vec<Vec<Word>> = branches
            .into_par_iter()
            .map(|(digit, tights)| {
                let mut out = Vec::new();
                let mut word = vec![digit];
                dfs_words(&pref, k, n, &mut word, &tights, &mut out);
                out
            })
            .collect();
        Ok(chunks.into_iter().flatten().collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        enumerate_language_seq(d, n)
    }
}

/// The distinct length-`n` factors of the kneading sequence itself, sorted.
#[derive(Clone, Debug)]
pub struct WindowSet {
    pub n: usize,
    pub windows: Vec<Word>,
    pub status: Status,
}

impl WindowSet {
    /// Number of distinct windows `u` with `w` lexicographically <= `u`.
    pub fn dominating_count(&self, w: &Word) -> u64 {
        let below = self.windows.partition_point(|u| u < w);
        (self.windows.len() - below) as u64
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.windows.binary_search(w).is_ok()
    }
}

/// Collect the distinct `n`-windows of `d`. Exact mode scans one preperiod
/// plus one period worth of start positions, which covers every window of an
/// eventually periodic sequence; prefix mode scans the stored horizon and is
/// only a lower bound.
pub fn windows_of(d: &KneadingSequence, n: usize) -> Result<WindowSet> {
    if n == 0 {
        return Ok(WindowSet {
            n,
            windows: vec![Word::empty()],
            status: Status::Exact,
        });
    }
    let mut set = BTreeSet::new();
    let status;
    match d {
        KneadingSequence::Exact { preperiod, period } => {
            let starts = preperiod.len() + period.len();
            let digits = d.digits_prefix(starts + n)?;
            for i in 0..starts {
                set.insert(digits[i..i + n].to_vec());
            }
            status = Status::Exact;
        }
        KneadingSequence::Prefix { digits, .. } => {
            if n > digits.len() {
                return Err(Error::HorizonExceeded {
                    needed: n,
                    available: digits.len(),
                });
            }
            for i in 0..=digits.len() - n {
                set.insert(digits[i..i + n].to_vec());
            }
            status = Status::LowerBound;
        }
    }
    Ok(WindowSet {
        n,
        windows: set.into_iter().map(Word::new).collect(),
        status,
    })
}

/// Distinct `n`-windows of a plain finite digit string.
pub fn window_count(digits: &[Digit], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    if n > digits.len() {
        return 0;
    }
    let mut set = BTreeSet::new();
    for i in 0..=digits.len() - n {
        set.insert(&digits[i..i + n]);
    }
    set.len()
}

/// Subword complexity of the kneading sequence at length `n`.
pub fn subword_complexity(d: &KneadingSequence, n: usize) -> Result<CountReport> {
    let ws = windows_of(d, n)?;
    Ok(CountReport {
        n,
        value: ws.windows.len() as u64,
        status: ws.status,
        provenance: Provenance::Formula,
        params: ReportParams {
            horizon: d.horizon(),
            ..Default::default()
        },
    })
}

fn kmp_failure(pat: &[Digit]) -> Vec<usize> {
    let mut fail = vec![0; pat.len()];
    let mut k = 0;
    for i in 1..pat.len() {
        while k > 0 && pat[k] != pat[i] {
            k = fail[k - 1];
        }
        if pat[k] == pat[i] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// The class index of `w`: the length of the longest prefix of `d` occurring
/// as a suffix of `w`. Linear in `|w|` via the failure automaton of the
/// pattern `(d)_{|w|}`.
pub fn suffix_class(w: &Word, d: &KneadingSequence) -> Result<usize> {
    let n = w.len();
    if n == 0 {
        return Ok(0);
    }
    let pat = d.digits_prefix(n)?;
    let fail = kmp_failure(&pat);
    let mut q = 0;
    for &c in w.iter() {
        while q > 0 && pat.get(q) != Some(&c) {
            q = fail[q - 1];
        }
        if pat.get(q) == Some(&c) {
            q += 1;
        }
    }
    Ok(q)
}
