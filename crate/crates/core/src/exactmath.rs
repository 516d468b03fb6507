//! Exact rationals, negative continued fractions, Farey slopes and the
//! I-invariant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"n"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Human-readable form: integers print without a denominator.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Schema form: always `"p/q"`, so `-1` is `"-1/1"`.
pub fn format_fraction(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub(crate) fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Domain(format!("{what} does not fit in 64 bits")))
}

pub(crate) fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub(crate) fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Negative continued fraction `[a0, a1, ..., ak]` with value
/// `a0 - 1/(a1 - 1/(... - 1/ak))`, stored with positive entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegCF {
    coeffs: Vec<i64>,
}

impl NegCF {
    /// Accepts a head `a0 >= 1` and a tail with every entry `>= 2`.
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        match coeffs.split_first() {
            None => domain("empty continued fraction"),
            Some((&a0, tail)) => {
                if a0 < 1 {
                    return domain(format!("head coefficient {a0} < 1"));
                }
                if let Some(a) = tail.iter().find(|&&a| a < 2) {
                    return domain(format!("tail coefficient {a} < 2"));
                }
                Ok(NegCF { coeffs })
            }
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All entries `>= 2`; a head of 1 is only allowed for surgery chains.
    pub fn is_canonical(&self) -> bool {
        self.coeffs[0] >= 2
    }

    /// The entries with their signs flipped, i.e. plumbing weights.
    pub fn signed(&self) -> Vec<i64> {
        self.coeffs.iter().map(|a| -a).collect()
    }

    pub fn eval(&self) -> Rational {
        cf_eval(&self.coeffs).expect("valid negative continued fractions never divide by zero")
    }

    pub fn reversed(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }
}

impl fmt::Display for NegCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn expand_tail(mut x: Rational, out: &mut Vec<i64>) -> Result<()> {
    loop {
        let a = ceil(&x);
        out.push(to_i64(&a, "continued fraction entry")?);
        let rest = Rational::from_integer(a) - &x;
        if rest.is_zero() {
            return Ok(());
        }
        x = rest.recip();
    }
}

/// Canonical expansion of `x > 1`; every entry is at least 2.
pub fn cf_expand(x: &Rational) -> Result<NegCF> {
    if *x <= Rational::one() {
        return domain(format!("cf_expand needs x > 1, got {}", format_rational(x)));
    }
    let mut out = Vec::new();
    expand_tail(x.clone(), &mut out)?;
    Ok(NegCF { coeffs: out })
}

/// Expansion of any `x > 0` whose head may be 1, as used for surgery chains:
/// `1 = [1]`, `1/2 = [1,2]`, `3/2 = [2,2]`.
pub fn cf_expand_head(x: &Rational) -> Result<NegCF> {
    if !x.is_positive() {
        return domain(format!("expansion needs x > 0, got {}", format_rational(x)));
    }
    let mut out = Vec::new();
    expand_tail(x.clone(), &mut out)?;
    Ok(NegCF { coeffs: out })
}

/// Evaluates a coefficient sequence of any signs.
pub fn cf_eval(coeffs: &[i64]) -> Result<Rational> {
    let (last, init) = coeffs
        .split_last()
        .ok_or_else(|| Error::Domain("empty continued fraction".into()))?;
    let mut x = int(*last);
    for &a in init.iter().rev() {
        if x.is_zero() {
            return domain("zero denominator while evaluating continued fraction");
        }
        x = int(a) - x.recip();
    }
    Ok(x)
}

pub fn i_invariant(x: &Rational) -> Result<i64> {
    Ok(cf_expand(x)?.coeffs.iter().map(|a| a - 3).sum())
}

/// The inverse `q*` of `q` modulo `p`, normalized to `0 < q* < p` (`1` when `p = 1`).
pub fn mod_inverse(q: i64, p: i64) -> Result<i64> {
    if p < 1 {
        return domain(format!("modulus {p} must be positive"));
    }
    let e = q.extended_gcd(&p);
    if e.gcd != 1 {
        return domain(format!("gcd({q}, {p}) = {} is not 1", e.gcd));
    }
    let inv = e.x.rem_euclid(p);
    Ok(if inv == 0 { p.min(1) } else { inv })
}

/// A slope `num/den` in Q ∪ {∞}; `den >= 0`, coprime, ∞ is `1/0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareySlope {
    num: BigInt,
    den: BigInt,
}

impl FareySlope {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if num.is_zero() && den.is_zero() {
            return domain("0/0 is not a slope");
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: BigInt, mut den: BigInt) -> Self {
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
        if den.is_negative() || (den.is_zero() && num.is_negative()) {
            num = -num;
            den = -den;
        }
        FareySlope { num, den }
    }

    pub fn infinity() -> Self {
        FareySlope { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn from_rational(x: &Rational) -> Self {
        FareySlope { num: x.numer().clone(), den: x.denom().clone() }
    }

    pub fn from_int(n: i64) -> Self {
        FareySlope { num: BigInt::from(n), den: BigInt::one() }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinite()).then(|| Rational::new(self.num.clone(), self.den.clone()))
    }

    /// `"b/a"`, with ∞ written `1/0`.
    pub fn as_fraction(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }

    /// Compares two finite slopes, placing ∞ above everything.
    pub fn cmp_line(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl fmt::Display for FareySlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for FareySlope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "1/0" => Ok(Self::infinity()),
            t => Ok(Self::from_rational(&parse_rational(t)?)),
        }
    }
}

/// Mediant `(b+d)/(a+c)` of `b/a` and `d/c`.
pub fn farey_sum(s: &FareySlope, t: &FareySlope) -> FareySlope {
    FareySlope::normalized(&s.num + &t.num, &s.den + &t.den)
}

pub fn has_edge(s: &FareySlope, t: &FareySlope) -> bool {
    (&s.den * &t.num - &s.num * &t.den).abs().is_one()
}
