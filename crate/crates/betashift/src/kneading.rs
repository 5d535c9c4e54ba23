//! Kneading sequences and beta specifications.
//!
//! A kneading sequence is the lexicographic maximum of a beta-shift: the
//! sequence that dominates all of its own shifts. It is stored either in
//! exact eventually-periodic form or as a finite certified prefix with an
//! explicit horizon. All conversions between beta and its kneading sequence
//! go through arbitrary-precision rational arithmetic; a digit is emitted
//! only when its floor is certain over the whole enclosure of beta.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{
    bisection_iters, eval_poly_int, eval_poly_interval, eval_poly_rat, floor_int, parse_decimal,
    poly_gcd, pow2_neg, sign, to_decimal_string, Interval,
};
use crate::word::Digit;
use crate::{Error, Result};

/// Refinement cap for digit certification, in bits of interval width.
pub const DEFAULT_PRECISION_BITS: u32 = 4096;

/// The kneading sequence d*(1) of a beta-shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KneadingSequence {
    /// Eventually periodic: `preperiod` followed by `period` repeated forever.
    Exact {
        #[serde(default)]
        preperiod: Vec<Digit>,
        period: Vec<Digit>,
    },
    /// The first `digits.len()` digits only; nothing is known beyond them
    /// unless the caller asserts aperiodicity.
    Prefix {
        digits: Vec<Digit>,
        #[serde(default)]
        assert_aperiodic: bool,
    },
}

impl KneadingSequence {
    pub fn exact(preperiod: Vec<Digit>, period: Vec<Digit>) -> Self {
        KneadingSequence::Exact { preperiod, period }
    }

    pub fn periodic(period: Vec<Digit>) -> Self {
        KneadingSequence::Exact {
            preperiod: Vec::new(),
            period,
        }
    }

    pub fn prefix(digits: Vec<Digit>, assert_aperiodic: bool) -> Self {
        KneadingSequence::Prefix {
            digits,
            assert_aperiodic,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, KneadingSequence::Exact { .. })
    }

    /// Largest digit of the alphabet; by shift-dominance this is the first
    /// digit of the sequence.
    pub fn alphabet_max(&self) -> Digit {
        self.digit(0).unwrap_or(0)
    }

    /// `None` means the sequence extends forever (exact mode).
    pub fn horizon(&self) -> Option<usize> {
        match self {
            KneadingSequence::Exact { .. } => None,
            KneadingSequence::Prefix { digits, .. } => Some(digits.len()),
        }
    }

    pub fn assert_aperiodic(&self) -> bool {
        match self {
            KneadingSequence::Exact { .. } => false,
            KneadingSequence::Prefix {
                assert_aperiodic, ..
            } => *assert_aperiodic,
        }
    }

    pub fn with_aperiodicity(self, flag: bool) -> Self {
        match self {
            KneadingSequence::Prefix { digits, .. } => KneadingSequence::Prefix {
                digits,
                assert_aperiodic: flag,
            },
            exact => exact,
        }
    }

    pub fn digit(&self, i: usize) -> Option<Digit> {
        match self {
            KneadingSequence::Exact { preperiod, period } => {
                if i < preperiod.len() {
                    Some(preperiod[i])
                } else if period.is_empty() {
                    None
                } else {
                    Some(period[(i - preperiod.len()) % period.len()])
                }
            }
            KneadingSequence::Prefix { digits, .. } => digits.get(i).copied(),
        }
    }

    /// The first `n` digits, or `HorizonExceeded` if they are not stored.
    pub fn digits_prefix(&self, n: usize) -> Result<Vec<Digit>> {
        match self {
            KneadingSequence::Exact { .. } => Ok((0..n).map(|i| self.digit(i).unwrap()).collect()),
            KneadingSequence::Prefix { digits, .. } => {
                if n > digits.len() {
                    Err(Error::HorizonExceeded {
                        needed: n,
                        available: digits.len(),
                    })
                } else {
                    Ok(digits[..n].to_vec())
                }
            }
        }
    }
}

/// Outcome of a shift-dominance / well-formedness check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub checked_horizon: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub shift: usize,
    pub description: String,
}

/// Check the defining properties of a kneading sequence: the first digit is
/// the alphabet maximum, every shift is lexicographically dominated, and in
/// exact mode the period is not all zeros.
pub fn validate_kneading(d: &KneadingSequence) -> ValidationReport {
    let mut violations = Vec::new();
    let checked_horizon;
    match d {
        KneadingSequence::Exact { preperiod, period } => {
            let window = preperiod.len() + 2 * period.len().max(1);
            checked_horizon = window;
            if period.is_empty() {
                violations.push(Violation {
                    shift: 0,
                    description: "period is empty".into(),
                });
            } else if period.iter().all(|&x| x == 0) {
                violations.push(Violation {
                    shift: preperiod.len(),
                    description: "period is all zeros (zero tail)".into(),
                });
            }
            if !period.is_empty() {
                let d0 = d.digit(0).unwrap();
                if d0 == 0 {
                    violations.push(Violation {
                        shift: 0,
                        description: "first digit is 0; alphabet max must be >= 1".into(),
                    });
                }
                for i in 0..window {
                    if d.digit(i).unwrap() > d0 {
                        violations.push(Violation {
                            shift: i,
                            description: format!("digit at {i} exceeds the first digit {d0}"),
                        });
                    }
                }
                // comparing over preperiod + 2 periods decides dominance for
                // every shift of an eventually periodic sequence
                for i in 1..=window {
                    if let Some(j) = (0..window)
                        .find(|&j| d.digit(i + j).unwrap() != d.digit(j).unwrap())
                    {
                        if d.digit(i + j).unwrap() > d.digit(j).unwrap() {
                            violations.push(Violation {
                                shift: i,
                                description: format!(
                                    "shift {i} is lexicographically greater (position {j})"
                                ),
                            });
                        }
                    }
                }
            }
        }
        KneadingSequence::Prefix { digits, .. } => {
            let len = digits.len();
            checked_horizon = len;
            if len < 2 {
                violations.push(Violation {
                    shift: 0,
                    description: "prefix horizon must be at least 2".into(),
                });
            }
            if let Some(&d0) = digits.first() {
                if d0 == 0 {
                    violations.push(Violation {
                        shift: 0,
                        description: "first digit is 0; alphabet max must be >= 1".into(),
                    });
                }
                for (i, &x) in digits.iter().enumerate() {
                    if x > d0 {
                        violations.push(Violation {
                            shift: i,
                            description: format!("digit at {i} exceeds the first digit {d0}"),
                        });
                    }
                }
                for i in 1..len {
                    if let Some(j) = (0..len - i).find(|&j| digits[i + j] != digits[j]) {
                        if digits[i + j] > digits[j] {
                            violations.push(Violation {
                                shift: i,
                                description: format!(
                                    "shift {i} is lexicographically greater (position {j})"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
        checked_horizon,
    }
}

fn require_valid(d: &KneadingSequence) -> Result<()> {
    let rep = validate_kneading(d);
    if rep.valid {
        Ok(())
    } else {
        let desc = rep
            .violations
            .iter()
            .map(|v| v.description.clone())
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidKneading(desc))
    }
}

/// Canonical form of an exact kneading sequence: minimal period length, then
/// minimal preperiod length. Idempotent; the infinite sequence is unchanged.
pub fn normalize(d: &KneadingSequence) -> Result<KneadingSequence> {
    let (preperiod, period) = match d {
        KneadingSequence::Exact { preperiod, period } => (preperiod.clone(), period.clone()),
        KneadingSequence::Prefix { .. } => {
            return Err(Error::InvalidInput(
                "normalize requires an exact kneading sequence".into(),
            ))
        }
    };
    if period.is_empty() {
        return Err(Error::InvalidKneading("period is empty".into()));
    }
    let mut per = period;
    for q in 1..per.len() {
        if per.len() % q == 0 && (0..per.len()).all(|i| per[i] == per[i % q]) {
            per.truncate(q);
            break;
        }
    }
    let mut pre = preperiod;
    while let Some(&last) = pre.last() {
        if last == *per.last().unwrap() {
            pre.pop();
            per.rotate_right(1);
        } else {
            break;
        }
    }
    Ok(KneadingSequence::Exact {
        preperiod: pre,
        period: per,
    })
}

/// Outcome of comparing two shifts of a kneading sequence for equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftEqual {
    Equal,
    Distinct,
    /// Prefix mode only: the shifts agree on every stored digit.
    Unknown,
}

/// Decide whether the j-th and k-th shifts of `d` are the same sequence.
/// Exact mode always decides; prefix mode reports `Unknown` when the stored
/// overlap does not separate them.
pub fn shift_equal(d: &KneadingSequence, j: usize, k: usize) -> Result<ShiftEqual> {
    match d {
        KneadingSequence::Exact { preperiod, period } => {
            if j == k {
                return Ok(ShiftEqual::Equal);
            }
            // agreement over preperiod + 2 periods pins down two eventually
            // periodic tails with the same period length
            let window = preperiod.len() + 2 * period.len();
            let equal = (0..window).all(|i| d.digit(j + i) == d.digit(k + i));
            Ok(if equal {
                ShiftEqual::Equal
            } else {
                ShiftEqual::Distinct
            })
        }
        KneadingSequence::Prefix { digits, .. } => {
            let len = digits.len();
            if j >= len || k >= len {
                return Err(Error::IndexBeyondHorizon(j.max(k)));
            }
            if j == k {
                return Ok(ShiftEqual::Equal);
            }
            let overlap = len - j.max(k);
            let distinct = (0..overlap).any(|i| digits[j + i] != digits[k + i]);
            Ok(if distinct {
                ShiftEqual::Distinct
            } else {
                ShiftEqual::Unknown
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Beta specifications
// ---------------------------------------------------------------------------

/// A real number beta > 1, given as an exact enclosure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BetaSpecRepr", into = "BetaSpecRepr")]
pub enum BetaSpec {
    /// A fixed rational interval; a point when `lo == hi`.
    Interval { lo: BigRational, hi: BigRational },
    /// The unique root of an integer polynomial (ascending coefficients)
    /// inside an isolating interval.
    Polynomial {
        coeffs: Vec<i64>,
        lo: BigRational,
        hi: BigRational,
    },
    /// Beta defined implicitly as the solution of the kneading equation.
    FromKneading(KneadingSequence),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum BetaSpecRepr {
    Interval {
        lo: String,
        hi: String,
    },
    Polynomial {
        coeffs: Vec<i64>,
        lo: String,
        hi: String,
    },
    FromKneading {
        kneading: KneadingSequence,
    },
}

impl TryFrom<BetaSpecRepr> for BetaSpec {
    type Error = Error;

    fn try_from(repr: BetaSpecRepr) -> Result<Self> {
        Ok(match repr {
            BetaSpecRepr::Interval { lo, hi } => BetaSpec::Interval {
                lo: parse_decimal(&lo)?,
                hi: parse_decimal(&hi)?,
            },
            BetaSpecRepr::Polynomial { coeffs, lo, hi } => BetaSpec::Polynomial {
                coeffs,
                lo: parse_decimal(&lo)?,
                hi: parse_decimal(&hi)?,
            },
            BetaSpecRepr::FromKneading { kneading } => BetaSpec::FromKneading(kneading),
        })
    }
}

impl From<BetaSpec> for BetaSpecRepr {
    fn from(spec: BetaSpec) -> Self {
        match spec {
            BetaSpec::Interval { lo, hi } => BetaSpecRepr::Interval {
                lo: to_decimal_string(&lo),
                hi: to_decimal_string(&hi),
            },
            BetaSpec::Polynomial { coeffs, lo, hi } => BetaSpecRepr::Polynomial {
                coeffs,
                lo: to_decimal_string(&lo),
                hi: to_decimal_string(&hi),
            },
            BetaSpec::FromKneading(kneading) => BetaSpecRepr::FromKneading { kneading },
        }
    }
}

impl BetaSpec {
    pub fn rational(value: BigRational) -> Self {
        BetaSpec::Interval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn rational_str(s: &str) -> Result<Self> {
        Ok(Self::rational(parse_decimal(s)?))
    }

    /// x^2 - x - 1 on [1.6, 1.7]: the golden ratio.
    pub fn golden_mean() -> Self {
        BetaSpec::Polynomial {
            coeffs: vec![-1, -1, 1],
            lo: parse_decimal("1.6").unwrap(),
            hi: parse_decimal("1.7").unwrap(),
        }
    }

    fn value(&self, bits: u32) -> Result<BetaValue> {
        match self {
            BetaSpec::Interval { lo, hi } => {
                if lo > hi || *lo <= BigRational::one() {
                    return Err(Error::InvalidBeta);
                }
                if lo == hi {
                    Ok(BetaValue::Rational(lo.clone()))
                } else {
                    Ok(BetaValue::Fixed(Interval::new(lo.clone(), hi.clone())))
                }
            }
            BetaSpec::Polynomial { coeffs, lo, hi } => {
                if lo > hi || *hi <= BigRational::one() || lo.is_negative() {
                    return Err(Error::InvalidBeta);
                }
                let poly: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
                algebraic_or_rational(poly, lo.clone(), hi.clone(), bits)
            }
            BetaSpec::FromKneading(d) => {
                require_valid(d)?;
                match d {
                    KneadingSequence::Exact { .. } => {
                        // minimal representation keeps the derived polynomial
                        // as small (and as close to irreducible) as possible
                        let d = normalize(d)?;
                        let (lo, hi) = solve_beta(&d, &pow2_neg(24))?;
                        if lo == hi {
                            if lo <= BigRational::one() {
                                return Err(Error::InvalidBeta);
                            }
                            return Ok(BetaValue::Rational(lo));
                        }
                        let poly = beta_polynomial(&d)?;
                        algebraic_or_rational(poly, lo, hi, bits)
                    }
                    KneadingSequence::Prefix { digits, .. } => {
                        let (lo, hi) = prefix_enclosure(digits, 128);
                        if lo == hi {
                            Ok(BetaValue::Rational(lo))
                        } else {
                            Ok(BetaValue::Fixed(Interval::new(lo, hi)))
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Certified greedy expansion
// ---------------------------------------------------------------------------

enum BetaValue {
    Rational(BigRational),
    Fixed(Interval),
    Algebraic(AlgebraicRoot),
}

struct AlgebraicRoot {
    poly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    sign_hi: i8,
}

impl AlgebraicRoot {
    fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// Halve the isolating interval. Returns the root itself if the midpoint
    /// lands on it exactly.
    fn refine(&mut self) -> Option<BigRational> {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let s = sign(&eval_poly_int(&self.poly, &mid));
        if s == 0 {
            Some(mid)
        } else if s == self.sign_hi {
            self.hi = mid;
            None
        } else {
            self.lo = mid;
            None
        }
    }
}

/// Build an algebraic root from an isolating interval, collapsing to a
/// rational when an endpoint (or a bisection point) is an exact root.
fn algebraic_or_rational(
    poly: Vec<BigInt>,
    mut lo: BigRational,
    hi: BigRational,
    bits: u32,
) -> Result<BetaValue> {
    let one = BigRational::one();
    let sign_hi = sign(&eval_poly_int(&poly, &hi));
    if sign_hi == 0 {
        if hi <= one {
            return Err(Error::InvalidBeta);
        }
        return Ok(BetaValue::Rational(hi));
    }
    let mut sign_lo = sign(&eval_poly_int(&poly, &lo));
    if sign_lo == 0 {
        // Either lo is the root, or it is a spurious root of a cleared
        // denominator (e.g. beta = 1 for a derived kneading polynomial).
        // Probe inward until the sign resolves.
        let mut probe_hi = hi.clone();
        let cap = pow2_neg(bits);
        loop {
            if &probe_hi - &lo < cap {
                return Err(Error::PrecisionExhausted(bits));
            }
            let mid = (&lo + &probe_hi) / BigRational::from_integer(2.into());
            let s = sign(&eval_poly_int(&poly, &mid));
            if s == 0 {
                if mid <= one {
                    return Err(Error::InvalidBeta);
                }
                return Ok(BetaValue::Rational(mid));
            }
            if s == sign_hi {
                probe_hi = mid;
            } else {
                lo = mid;
                sign_lo = s;
                break;
            }
        }
    }
    if sign_lo == sign_hi {
        return Err(Error::InvalidInput(
            "polynomial has no sign change over the isolating interval".into(),
        ));
    }
    Ok(BetaValue::Algebraic(AlgebraicRoot {
        poly,
        lo,
        hi,
        sign_hi,
    }))
}

enum Remainder {
    Rational(BigRational),
    Fixed(Interval),
    /// Value of a rational polynomial at the algebraic beta, reduced modulo
    /// the defining polynomial.
    Poly(Vec<BigRational>),
}

/// Streaming greedy expansion of 1 in base beta with per-digit certification.
pub struct Expander {
    beta: BetaValue,
    rem: Remainder,
    bits: u32,
}

fn trim_poly(mut q: Vec<BigRational>) -> Vec<BigRational> {
    while q.last().is_some_and(|c| c.is_zero()) {
        q.pop();
    }
    q
}

/// Multiply by x and reduce modulo the integer polynomial `p`.
fn mul_x_mod(q: &[BigRational], p: &[BigInt]) -> Vec<BigRational> {
    let mut r = Vec::with_capacity(q.len() + 1);
    r.push(BigRational::zero());
    r.extend_from_slice(q);
    let d = p.len() - 1;
    if r.len() == p.len() && !r[d].is_zero() {
        let factor = &r[d] / BigRational::from(p[d].clone());
        for (ri, pi) in r.iter_mut().zip(p.iter()) {
            *ri -= &factor * BigRational::from(pi.clone());
        }
        debug_assert!(r[d].is_zero());
    }
    trim_poly(r)
}

enum StepOutcome {
    Digit(Digit),
    SwitchRational(BigRational),
}

impl Expander {
    pub fn new(spec: &BetaSpec, bits: u32) -> Result<Self> {
        let beta = spec.value(bits)?;
        let rem = match &beta {
            BetaValue::Rational(_) => Remainder::Rational(BigRational::one()),
            BetaValue::Fixed(_) => Remainder::Fixed(Interval::point(BigRational::one())),
            BetaValue::Algebraic(_) => Remainder::Poly(vec![BigRational::one()]),
        };
        Ok(Expander { beta, rem, bits })
    }

    pub fn beta_enclosure(&self) -> Interval {
        match &self.beta {
            BetaValue::Rational(r) => Interval::point(r.clone()),
            BetaValue::Fixed(iv) => iv.clone(),
            BetaValue::Algebraic(a) => a.interval(),
        }
    }

    /// True once the expansion of 1 has terminated exactly (all later digits
    /// are zero). Never true for a fixed-width interval beta.
    pub fn remainder_is_zero(&self) -> bool {
        match &self.rem {
            Remainder::Rational(r) => r.is_zero(),
            Remainder::Fixed(_) => false,
            Remainder::Poly(q) => q.is_empty(),
        }
    }

    pub fn step(&mut self) -> Result<Digit> {
        let outcome = self.step_inner()?;
        match outcome {
            StepOutcome::Digit(d) => Ok(d),
            StepOutcome::SwitchRational(root) => {
                // midpoint refinement hit the root exactly: beta is rational
                let q = match &self.rem {
                    Remainder::Poly(q) => q.clone(),
                    _ => unreachable!(),
                };
                let rem = eval_poly_rat(&q, &root);
                self.beta = BetaValue::Rational(root);
                self.rem = Remainder::Rational(rem);
                match self.step_inner()? {
                    StepOutcome::Digit(d) => Ok(d),
                    StepOutcome::SwitchRational(_) => unreachable!(),
                }
            }
        }
    }

    fn step_inner(&mut self) -> Result<StepOutcome> {
        match (&mut self.beta, &mut self.rem) {
            (BetaValue::Rational(b), Remainder::Rational(r)) => {
                let v = &*b * &*r;
                let f = floor_int(&v);
                let digit = digit_from_int(&f)?;
                *r = v - BigRational::from(f);
                Ok(StepOutcome::Digit(digit))
            }
            (BetaValue::Fixed(biv), Remainder::Fixed(riv)) => {
                let v = biv.mul(riv);
                let f = v
                    .floor_certain()
                    .ok_or(Error::PrecisionExhausted(self.bits))?;
                let digit = digit_from_int(&f)?;
                *riv = v.add_scalar(&-BigRational::from(f));
                Ok(StepOutcome::Digit(digit))
            }
            (BetaValue::Algebraic(a), Remainder::Poly(q)) => {
                let mut q2 = mul_x_mod(q, &a.poly);
                let cap = pow2_neg(self.bits);
                let mut tried_exact = false;
                loop {
                    let iv = eval_poly_interval(&q2, &a.interval());
                    if let Some(f) = iv.floor_certain() {
                        let digit = digit_from_int(&f)?;
                        if !f.is_zero() {
                            if q2.is_empty() {
                                q2.push(BigRational::zero());
                            }
                            q2[0] -= BigRational::from(f);
                        }
                        *q = trim_poly(q2);
                        return Ok(StepOutcome::Digit(digit));
                    }
                    // When the defining polynomial is reducible, a remainder
                    // that is exactly the straddled integer can have a
                    // non-constant representation, and the floor would never
                    // certify by refinement alone. Test that case
                    // symbolically: the remainder minus the integer vanishes
                    // at beta iff it shares a factor with the defining
                    // polynomial that changes sign over the isolating
                    // interval.
                    if !tried_exact && iv.width() < pow2_neg(32) {
                        tried_exact = true;
                        let f = floor_int(&iv.hi);
                        let mut h = q2.clone();
                        if h.is_empty() {
                            h.push(BigRational::zero());
                        }
                        h[0] -= BigRational::from(f.clone());
                        let h = trim_poly(h);
                        if !h.is_empty() {
                            let p_rat: Vec<BigRational> = a
                                .poly
                                .iter()
                                .map(|c| BigRational::from(c.clone()))
                                .collect();
                            let g = poly_gcd(&h, &p_rat);
                            if g.len() >= 2
                                && sign(&eval_poly_rat(&g, &a.lo))
                                    * sign(&eval_poly_rat(&g, &a.hi))
                                    < 0
                            {
                                // the remainder is exactly f; the expansion
                                // terminates here
                                let digit = digit_from_int(&f)?;
                                *q = Vec::new();
                                return Ok(StepOutcome::Digit(digit));
                            }
                        }
                    }
                    if a.interval().width() < cap {
                        return Err(Error::PrecisionExhausted(self.bits));
                    }
                    if let Some(root) = a.refine() {
                        *q = q2;
                        return Ok(StepOutcome::SwitchRational(root));
                    }
                }
            }
            _ => unreachable!("beta and remainder representations always match"),
        }
    }
}

fn digit_from_int(f: &BigInt) -> Result<Digit> {
    if f.is_negative() {
        return Err(Error::Verification(format!("negative digit {f}")));
    }
    f.to_u8()
        .ok_or_else(|| Error::Verification(format!("digit {f} exceeds the supported alphabet")))
}

/// First `count` digits of the greedy expansion of 1 in base beta, each digit
/// certified against the enclosure of beta.
pub fn greedy_expansion(beta: &BetaSpec, count: usize) -> Result<Vec<Digit>> {
    greedy_expansion_with(beta, count, DEFAULT_PRECISION_BITS)
}

pub fn greedy_expansion_with(beta: &BetaSpec, count: usize, bits: u32) -> Result<Vec<Digit>> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    let mut ex = Expander::new(beta, bits)?;
    (0..count).map(|_| ex.step()).collect()
}

/// The kneading sequence d*(1) for beta.
///
/// If the expansion of 1 terminates within the horizon (certified exact zero
/// remainder after digit m), the shift is of finite type and d* is the
/// periodic sequence obtained by decrementing the last expansion digit.
/// Otherwise the certified prefix of the expansion is returned.
pub fn kneading_from_beta(beta: &BetaSpec, horizon: usize) -> Result<KneadingSequence> {
    kneading_from_beta_with(beta, horizon, DEFAULT_PRECISION_BITS)
}

pub fn kneading_from_beta_with(
    beta: &BetaSpec,
    horizon: usize,
    bits: u32,
) -> Result<KneadingSequence> {
    if horizon < 2 {
        return Err(Error::HorizonTooSmall);
    }
    let mut ex = Expander::new(beta, bits)?;
    let mut digits = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        digits.push(ex.step()?);
        if ex.remainder_is_zero() {
            let mut period = digits;
            {
                let last = period.last_mut().unwrap();
                if *last == 0 {
                    return Err(Error::Verification(
                        "terminating expansion ends in a zero digit".into(),
                    ));
                }
                *last -= 1;
            }
            let d = KneadingSequence::periodic(period);
            // the periodic construction is re-derived, not trusted: it must
            // validate and its kneading equation must point back at beta
            require_valid(&d).map_err(|e| Error::Verification(e.to_string()))?;
            let (lo, hi) = solve_beta(&d, &pow2_neg(48))?;
            if !Interval::new(lo, hi).intersects(&ex.beta_enclosure()) {
                return Err(Error::Verification(
                    "periodic kneading sequence does not solve back to beta".into(),
                ));
            }
            return Ok(d);
        }
    }
    let d = KneadingSequence::prefix(digits, false);
    require_valid(&d).map_err(|e| Error::Verification(e.to_string()))?;
    Ok(d)
}

// ---------------------------------------------------------------------------
// Solving the kneading equation 1 = sum d_i beta^-(i+1)
// ---------------------------------------------------------------------------

/// Value of the kneading series at a rational beta > 1, in closed form.
fn series_sum_exact(preperiod: &[Digit], period: &[Digit], beta: &BigRational) -> BigRational {
    let binv = beta.recip();
    let mut pw = binv.clone();
    let mut sum = BigRational::zero();
    for &d in preperiod {
        sum += BigRational::from(BigInt::from(d)) * &pw;
        pw *= &binv;
    }
    let mut psum = BigRational::zero();
    for &d in period {
        psum += BigRational::from(BigInt::from(d)) * &pw;
        pw *= &binv;
    }
    let mut binv_p = BigRational::one();
    for _ in 0..period.len() {
        binv_p *= &binv;
    }
    sum + psum / (BigRational::one() - binv_p)
}

/// Truncated kneading series for a prefix.
fn series_sum_prefix(digits: &[Digit], beta: &BigRational) -> BigRational {
    let binv = beta.recip();
    let mut pw = binv.clone();
    let mut sum = BigRational::zero();
    for &d in digits {
        sum += BigRational::from(BigInt::from(d)) * &pw;
        pw *= &binv;
    }
    sum
}

/// Certified enclosure of the solution of the kneading equation.
///
/// The root always lies in (k, k+1] where k is the alphabet maximum. Exact
/// mode bisects the closed-form series; prefix mode brackets the root between
/// the truncated series and the truncated series plus the worst-case tail.
pub fn solve_beta(
    d: &KneadingSequence,
    tolerance: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if !tolerance.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    require_valid(d)?;
    match d {
        KneadingSequence::Exact { preperiod, period } => {
            let k = d.alphabet_max();
            let one = BigRational::one();
            let two = BigRational::from_integer(2.into());
            let kp1 = BigRational::from_integer(BigInt::from(k) + 1);
            if series_sum_exact(preperiod, period, &kp1) == one {
                return Ok((kp1.clone(), kp1));
            }
            let mut lo = BigRational::from_integer(BigInt::from(k));
            let mut hi = kp1;
            let iters = bisection_iters(tolerance);
            for _ in 0..iters {
                if &hi - &lo <= *tolerance {
                    break;
                }
                let mid = (&lo + &hi) / &two;
                let s = series_sum_exact(preperiod, period, &mid);
                if s == one {
                    return Ok((mid.clone(), mid));
                }
                if s > one {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((lo, hi))
        }
        KneadingSequence::Prefix { digits, .. } => {
            let iters = bisection_iters(tolerance).max(8);
            let (lo, hi) = prefix_enclosure(digits, iters);
            if &hi - &lo > *tolerance {
                return Err(Error::ToleranceUnreachable(format!(
                    "best certified width is {}",
                    to_decimal_string(&(&hi - &lo))
                )));
            }
            Ok((lo, hi))
        }
    }
}

/// Best enclosure of beta derivable from a stored prefix: the truncated
/// series under-approximates, the truncated series plus the geometric tail
/// bound k / (beta^L (beta - 1)) over-approximates.
fn prefix_enclosure(digits: &[Digit], iters: u32) -> (BigRational, BigRational) {
    let k = digits[0];
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let k_rat = BigRational::from_integer(BigInt::from(k));
    let kp1 = BigRational::from_integer(BigInt::from(k) + 1);
    let tail = |b: &BigRational| -> BigRational {
        let mut bl = BigRational::one();
        for _ in 0..digits.len() {
            bl *= b;
        }
        &k_rat / (bl * (b - &one))
    };
    // lower bound: any point where the truncated series is still >= 1
    let mut lo = k_rat.clone();
    let mut t_hi = kp1.clone();
    for _ in 0..iters {
        let mid = (&lo + &t_hi) / &two;
        if series_sum_prefix(digits, &mid) >= one {
            lo = mid;
        } else {
            t_hi = mid;
        }
    }
    // upper bound: any point where series + tail bound is <= 1; if the
    // prefix is too short for that within (k, k+1], k+1 itself is an upper
    // bound by the alphabet argument
    let upper_ok = |b: &BigRational| series_sum_prefix(digits, b) + tail(b) <= one;
    let hi = if upper_ok(&kp1) {
        let mut a = k_rat.clone();
        let mut b = kp1;
        for _ in 0..iters {
            let mid = (&a + &b) / &two;
            if upper_ok(&mid) {
                b = mid;
            } else {
                a = mid;
            }
        }
        b
    } else {
        kp1
    };
    (lo, hi)
}

/// Integer polynomial (ascending coefficients) whose root in (k, k+1] solves
/// the kneading equation of an exact sequence. Obtained by clearing
/// denominators: A(x)(x^p - 1) + B(x) = x^P (x^p - 1).
pub fn beta_polynomial(d: &KneadingSequence) -> Result<Vec<BigInt>> {
    let (preperiod, period) = match d {
        KneadingSequence::Exact { preperiod, period } => (preperiod, period),
        KneadingSequence::Prefix { .. } => {
            return Err(Error::InvalidInput(
                "beta polynomial requires an exact kneading sequence".into(),
            ))
        }
    };
    let big_p = preperiod.len();
    let p = period.len();
    let mut coeffs = vec![BigInt::zero(); big_p + p + 1];
    coeffs[big_p + p] += BigInt::one();
    coeffs[big_p] -= BigInt::one();
    for (i, &digit) in preperiod.iter().enumerate() {
        let a = BigInt::from(digit);
        // A(x) has coefficient pre_i at exponent P-1-i
        coeffs[p + big_p - 1 - i] -= &a;
        coeffs[big_p - 1 - i] += &a;
    }
    for (j, &digit) in period.iter().enumerate() {
        coeffs[p - 1 - j] -= BigInt::from(digit);
    }
    Ok(coeffs)
}
