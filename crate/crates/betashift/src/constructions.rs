//! Builders for example sequences: the classic eventually periodic kneading
//! sequences, certified rational-beta prefixes, and the prepend/lift
//! constructions that realize prescribed complexity sequences.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kneading::{kneading_from_beta, validate_kneading, BetaSpec, KneadingSequence};
use crate::word::Digit;
use crate::{Error, Result};

/// A named, parameterized sequence construction together with its output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceRecipe {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub output: KneadingSequence,
}

/// Increment every digit by one. Preserves length and the complexity
/// sequence, and removes any zero tail.
pub fn lift_digits(digits: &[Digit]) -> Vec<Digit> {
    digits.iter().map(|&d| d + 1).collect()
}

/// Prepend a symbol strictly larger than every digit of `d`, yielding a valid
/// kneading prefix whose complexity is one above that of `d` at every fully
/// covered length.
///
/// The input must not be all zeros: a lone leading symbol over a zero tail is
/// not a kneading sequence (apply [`lift_digits`] first).
pub fn prepend_symbol(digits: &[Digit]) -> Result<KneadingSequence> {
    if digits.iter().all(|&d| d == 0) {
        return Err(Error::ZeroTail);
    }
    let k = digits.iter().copied().max().unwrap();
    let mut out = Vec::with_capacity(digits.len() + 1);
    out.push(k + 1);
    out.extend_from_slice(digits);
    let d = KneadingSequence::prefix(out, false);
    let report = validate_kneading(&d);
    if !report.valid {
        return Err(Error::InvalidKneading(format!(
            "prepend construction failed validation: {:?}",
            report.violations
        )));
    }
    Ok(d)
}

/// Concatenation of all binary words ordered by length then lexicographically,
/// through length `max_block`. Contains every binary word of length at most
/// `max_block` as a factor, so its orbit closure is dense in the full shift.
pub fn champernowne(max_block: usize) -> Vec<Digit> {
    let mut out = Vec::new();
    for len in 1..=max_block {
        for v in 0..(1u64 << len) {
            for bit in (0..len).rev() {
                out.push(((v >> bit) & 1) as Digit);
            }
        }
    }
    out
}

/// The prepended Champernowne prefix: an asserted-aperiodic kneading sequence
/// with complexity 2^n + 1 at every fully covered length.
pub fn champernowne_tilde(max_block: usize) -> Result<KneadingSequence> {
    Ok(prepend_symbol(&champernowne(max_block))?.with_aperiodicity(true))
}

/// Named constructions addressable from the command line:
/// `golden_mean`, `full_shift(k)`, `beta_1_8_prefix(L)`,
/// `champernowne_tilde(max_block)`.
pub fn named_example(name: &str) -> Result<SequenceRecipe> {
    let name = name.trim();
    let mut parameters = BTreeMap::new();
    if name == "golden_mean" {
        return Ok(SequenceRecipe {
            name: name.into(),
            parameters,
            output: KneadingSequence::periodic(vec![1, 0]),
        });
    }
    if let Some(arg) = name
        .strip_prefix("full_shift(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let k: Digit = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad alphabet size in `{name}`")))?;
        if k == 0 {
            return Err(Error::InvalidInput("full shift needs k >= 1".into()));
        }
        parameters.insert("k".into(), k.to_string());
        return Ok(SequenceRecipe {
            name: "full_shift".into(),
            parameters,
            output: KneadingSequence::periodic(vec![k]),
        });
    }
    if let Some(arg) = name
        .strip_prefix("beta_1_8_prefix(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let horizon: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad horizon in `{name}`")))?;
        parameters.insert("horizon".into(), horizon.to_string());
        let beta = BetaSpec::rational_str("1.8")?;
        return Ok(SequenceRecipe {
            name: "beta_1_8_prefix".into(),
            parameters,
            output: kneading_from_beta(&beta, horizon)?,
        });
    }
    if let Some(arg) = name
        .strip_prefix("champernowne_tilde(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let max_block: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad block length in `{name}`")))?;
        if max_block == 0 {
            return Err(Error::InvalidInput("block length must be >= 1".into()));
        }
        parameters.insert("max_block".into(), max_block.to_string());
        return Ok(SequenceRecipe {
            name: "champernowne_tilde".into(),
            parameters,
            output: champernowne_tilde(max_block)?,
        });
    }
    Err(Error::InvalidInput(format!(
        "unknown construction `{name}` (expected golden_mean, full_shift(k), \
         beta_1_8_prefix(L), or champernowne_tilde(b))"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{subword_complexity, window_count};
    use rand::{Rng, SeedableRng};

    #[test]
    fn lift_examples() {
        assert_eq!(lift_digits(&[0, 1, 0, 0]), vec![1, 2, 1, 1]);
        assert!(lift_digits(&[0, 0, 0]).iter().all(|&d| d >= 1));
    }

    #[test]
    fn lift_preserves_complexity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let digits: Vec<Digit> = (0..24).map(|_| rng.gen_range(0..=1)).collect();
            let lifted = lift_digits(&digits);
            for n in 1..=5 {
                assert_eq!(window_count(&digits, n), window_count(&lifted, n));
            }
        }
    }

    #[test]
    fn champernowne_first_blocks() {
        assert_eq!(champernowne(2), vec![0, 1, 0, 0, 0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn champernowne_contains_all_short_words() {
        let d = champernowne(5);
        for len in 1..=4usize {
            for v in 0..(1u64 << len) {
                let w: Vec<Digit> = (0..len)
                    .rev()
                    .map(|b| ((v >> b) & 1) as Digit)
                    .collect();
                assert!(
                    d.windows(len).any(|x| x == &w[..]),
                    "missing factor {w:?}"
                );
            }
        }
    }

    #[test]
    fn prepend_basics() {
        let d = prepend_symbol(&champernowne(2)).unwrap();
        let digits = d.digits_prefix(3).unwrap();
        assert_eq!(digits, vec![2, 0, 1]);
        assert!(matches!(prepend_symbol(&[0, 0, 0]), Err(Error::ZeroTail)));
        // first digit strictly dominates the rest
        let all = d.digits_prefix(d.horizon().unwrap()).unwrap();
        assert!(all[1..].iter().all(|&x| x < all[0]));
    }

    #[test]
    fn prepend_adds_one_to_complexity() {
        let base = champernowne(3);
        let d = prepend_symbol(&base).unwrap();
        for n in 1..=5 {
            assert_eq!(
                subword_complexity(&d, n).unwrap().value,
                window_count(&base, n) as u64 + 1,
                "n={n}"
            );
        }
    }

    #[test]
    fn prepend_random_prefixes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 20 {
            let digits: Vec<Digit> = (0..30).map(|_| rng.gen_range(0..=1)).collect();
            if digits.iter().all(|&d| d == 0) {
                continue;
            }
            let d = prepend_symbol(&digits).unwrap();
            for n in 1..=5 {
                assert_eq!(
                    subword_complexity(&d, n).unwrap().value,
                    window_count(&digits, n) as u64 + 1
                );
            }
            done += 1;
        }
    }

    #[test]
    fn champernowne_tilde_complexity() {
        let d = champernowne_tilde(5).unwrap();
        assert!(d.assert_aperiodic());
        for n in 1..=4usize {
            assert_eq!(
                subword_complexity(&d, n).unwrap().value,
                (1u64 << n) + 1,
                "n={n}"
            );
        }
    }

    #[test]
    fn named_examples() {
        let g = named_example("golden_mean").unwrap();
        assert_eq!(g.output, KneadingSequence::periodic(vec![1, 0]));
        let f = named_example("full_shift(2)").unwrap();
        assert_eq!(f.output, KneadingSequence::periodic(vec![2]));
        let b = named_example("beta_1_8_prefix(20)").unwrap();
        assert_eq!(b.output.digits_prefix(4).unwrap(), vec![1, 1, 0, 1]);
        assert!(named_example("mystery").is_err());
    }

    #[test]
    fn recipes_validate() {
        for name in [
            "golden_mean",
            "full_shift(1)",
            "full_shift(2)",
            "beta_1_8_prefix(40)",
            "champernowne_tilde(5)",
        ] {
            let recipe = named_example(name).unwrap();
            let report = validate_kneading(&recipe.output);
            assert!(report.valid, "{name}: {:?}", report.violations);
        }
    }
}
