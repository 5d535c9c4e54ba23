//! Exact rational helpers: decimal parsing and printing, interval
//! arithmetic, and polynomial evaluation.
//!
//! Everything here is arbitrary-precision; there is no floating-point path.
//! Digit certification in [`crate::kneading`] rests on `Interval::floor_certain`
//! returning a floor only when the whole enclosure agrees on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Parse a decimal string ("1.8", "-2e-3", "7") or a fraction ("9/5").
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty number".into()));
    }
    if let Some((a, b)) = s.split_once('/') {
        let num = parse_decimal(a)?;
        let den = parse_decimal(b)?;
        if den.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
        }
        return Ok(num / den);
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad exponent in `{s}`")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all = format!("{int_part}{frac_part}");
    if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidInput(format!("bad decimal `{s}`")));
    }
    let mut num: BigInt = all.parse().expect("digit string");
    if neg {
        num = -num;
    }
    let e10 = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if e10 >= 0 {
        BigRational::from(num * ten.pow(e10 as u32))
    } else {
        BigRational::new(num, ten.pow((-e10) as u32))
    };
    Ok(value)
}

/// Exact decimal rendering when the denominator is of the form 2^a 5^b,
/// otherwise a `num/den` fraction string.
pub fn to_decimal_string(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let k = twos.max(fives);
    let scaled = r.numer() * two.pow(k - twos) * five.pow(k - fives);
    let neg = scaled.is_negative();
    let mut digits = scaled.abs().to_string();
    let k = k as usize;
    if digits.len() <= k {
        digits = format!("{}{}", "0".repeat(k - digits.len() + 1), digits);
    }
    let point = digits.len() - k;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..point]);
    out.push('.');
    out.push_str(&digits[point..]);
    out
}

pub fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(r: BigRational) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn add_scalar(&self, r: &BigRational) -> Interval {
        Interval::new(&self.lo + r, &self.hi + r)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// The common floor of every point in the interval, if there is one.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let f_lo = floor_int(&self.lo);
        let f_hi = floor_int(&self.hi);
        (f_lo == f_hi).then_some(f_lo)
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Horner evaluation of an integer-coefficient polynomial (ascending coeffs).
pub fn eval_poly_int(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

/// Horner evaluation of a rational-coefficient polynomial (ascending coeffs).
pub fn eval_poly_rat(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Interval Horner evaluation of a rational-coefficient polynomial.
pub fn eval_poly_interval(coeffs: &[BigRational], x: &Interval) -> Interval {
    let mut acc = Interval::point(BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add_scalar(c);
    }
    acc
}

fn trim_trailing_zeros(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Euclidean remainder of rational polynomials (ascending coeffs); `b` must
/// be nonzero.
fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let factor = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let sub = &factor * &b[i];
            r[shift + i] -= sub;
        }
        debug_assert!(r.last().unwrap().is_zero());
        r = trim_trailing_zeros(r);
    }
    r
}

/// Monic gcd of two rational polynomials (ascending coeffs). The zero
/// polynomial is the empty vector.
pub fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = trim_trailing_zeros(a.to_vec());
    let mut b = trim_trailing_zeros(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c /= &lead;
        }
    }
    a
}

pub fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `2^-bits` as a rational, for precision-cap width checks.
pub fn pow2_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2).pow(bits))
}

/// Number of bisection halvings needed to get an interval of width one below
/// `target`.
pub fn bisection_iters(target: &BigRational) -> u32 {
    debug_assert!(target.is_positive());
    // ceil(log2(1/target)) + 2, via the bit length of ceil(1/target)
    let c = target.recip().ceil().to_integer();
    (c.bits() as u32).saturating_add(2).min(10_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(rat("1.8"), BigRational::new(9.into(), 5.into()));
        assert_eq!(rat("9/5"), BigRational::new(9.into(), 5.into()));
        assert_eq!(rat("2"), BigRational::from(BigInt::from(2)));
        assert_eq!(rat("1e-3"), BigRational::new(1.into(), 1000.into()));
        assert_eq!(rat("-0.25"), BigRational::new((-1).into(), 4.into()));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("1/0").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat("1.8")), "1.8");
        assert_eq!(to_decimal_string(&rat("2")), "2");
        assert_eq!(to_decimal_string(&rat("-0.125")), "-0.125");
        assert_eq!(to_decimal_string(&BigRational::new(1.into(), 3.into())), "1/3");
    }

    #[test]
    fn interval_floor_certification() {
        let iv = Interval::new(rat("1.2"), rat("1.9"));
        assert_eq!(iv.floor_certain(), Some(BigInt::from(1)));
        let straddle = Interval::new(rat("0.9"), rat("1.1"));
        assert_eq!(straddle.floor_certain(), None);
        let neg = Interval::new(rat("-0.1"), rat("0.1"));
        assert_eq!(neg.floor_certain(), None);
    }

    #[test]
    fn interval_mul_signs() {
        let a = Interval::new(rat("-2"), rat("3"));
        let b = Interval::new(rat("-1"), rat("4"));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat("-8"));
        assert_eq!(p.hi, rat("12"));
    }

    #[test]
    fn poly_gcd_shared_factor() {
        // (x^2 - x - 1)(x^2 + 1) and (x^2 - x - 1)(x - 3)
        let f: Vec<BigRational> = [-1, -1, 0, -1, 1].iter().map(|&c| rat(&c.to_string())).collect();
        let g: Vec<BigRational> = [3, 2, -4, 1].iter().map(|&c| rat(&c.to_string())).collect();
        let gcd = poly_gcd(&f, &g);
        let monic: Vec<BigRational> = [-1, -1, 1].iter().map(|&c| rat(&c.to_string())).collect();
        assert_eq!(gcd, monic);
        // coprime pair reduces to a constant
        let h: Vec<BigRational> = [1, 1].iter().map(|&c| rat(&c.to_string())).collect();
        let k: Vec<BigRational> = [2, 1].iter().map(|&c| rat(&c.to_string())).collect();
        assert_eq!(poly_gcd(&h, &k).len(), 1);
    }

    #[test]
    fn poly_eval() {
        // x^2 - x - 1 at phi-ish points
        let p: Vec<BigInt> = vec![(-1).into(), (-1).into(), 1.into()];
        assert!(eval_poly_int(&p, &rat("1.6")).is_negative());
        assert!(eval_poly_int(&p, &rat("1.7")).is_positive());
    }
}
