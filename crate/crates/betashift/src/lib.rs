//! Beta-expansions, kneading sequences, and the combinatorics of beta-shifts.
//!
//! The crate revolves around the kneading sequence d*(1) of a beta-shift:
//!
//! * [`kneading`] — certified greedy expansions over exact arithmetic,
//!   validation and normalization of kneading sequences, and solving the
//!   kneading equation back for beta;
//! * [`language`] — the lexicographic admissibility criterion, pruned
//!   language enumeration, subword complexity, and suffix classification;
//! * [`theorems`] — closed-form follower, predecessor, and extender set
//!   counts with explicit exact/bound status;
//! * [`oracle`] — brute-force truncated-set counting for arbitrary
//!   factor-closed languages, the ground truth every formula is checked
//!   against;
//! * [`constructions`] — builders for the standard example sequences.
//!
//! The `parallel` feature (on by default) runs enumeration and oracle loops
//! on a rayon pool; the `*_seq` twins are always compiled for comparison and
//! produce byte-identical results.

pub mod constructions;
pub mod error;
pub mod kneading;
pub mod language;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod theorems;
pub mod word;

pub use error::{Error, Result};
pub use kneading::{BetaSpec, KneadingSequence};
pub use report::{CountReport, Provenance, Status};
pub use word::{Digit, Word};
