//! Seifert invariants, plumbing diagrams and their intersection forms.

mod diagram;
pub mod linalg;
pub mod text;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exactmath::{
    cf_expand, floor, format_rational, int, mod_inverse, parse_rational, rat, to_i64, Rational,
};

pub use diagram::{
    lens_chain, prism_graph, shifted_lens_chain, torus_surgery_chain, IntersectionData,
    StabilizedDiagram, Vertex,
};
pub(crate) use diagram::{check_pair, check_torus};

/// Normalized invariants `Y(e0; r1, r2, r3)` with each `ri` in `(0, 1)`,
/// kept in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertData {
    e0: i64,
    r: [Rational; 3],
}

impl SeifertData {
    pub fn new(e0: i64, r: [Rational; 3]) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(x) = r.iter().find(|x| **x <= zero || **x >= one) {
            return domain(format!("Seifert invariant {} is not in (0, 1)", format_rational(x)));
        }
        let mut r = r;
        r.sort_by(|a, b| b.cmp(a));
        Ok(SeifertData { e0, r })
    }

    pub fn e0(&self) -> i64 {
        self.e0
    }

    pub fn r(&self) -> &[Rational; 3] {
        &self.r
    }

    /// Parses `"e0;r1,r2,r3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (e, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected 'e0;r1,r2,r3', got '{s}'")))?;
        let e0: i64 = e.trim().parse().map_err(|_| Error::Parse(format!("bad e0 '{e}'")))?;
        let r: Vec<Rational> = rest.split(',').map(parse_rational).collect::<Result<_>>()?;
        let r: [Rational; 3] = r
            .try_into()
            .map_err(|_| Error::Parse(format!("expected three invariants in '{s}'")))?;
        Self::new(e0, r)
    }

    /// Multiplicities `αi`, the denominators of the `ri`.
    pub fn multiplicities(&self) -> [BigInt; 3] {
        self.r.clone().map(|x| x.denom().clone())
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.r;
        write!(
            f,
            "Y({}; {}, {}, {})",
            self.e0,
            format_rational(a),
            format_rational(b),
            format_rational(c)
        )
    }
}

/// Rolfsen-twists every slot into `(0, 1)`, absorbing integer slots into `e0`.
pub fn normalize_seifert(e: i64, slots: &[Rational]) -> Result<SeifertData> {
    let mut e0 = BigInt::from(e);
    let mut r = Vec::new();
    for x in slots {
        let f = floor(x);
        let frac = x - Rational::from_integer(f.clone());
        e0 += f;
        if !frac.is_zero() {
            r.push(frac);
        }
    }
    let e0 = to_i64(&e0, "e0")?;
    let r: [Rational; 3] = r.try_into().map_err(|r: Vec<Rational>| {
        Error::NotThreeFibers(format!("{} non-integer slots remain after normalizing", r.len()))
    })?;
    SeifertData::new(e0, r)
}

/// `-Y(e0; r1, r2, r3) = Y(-e0-3; 1-r3, 1-r2, 1-r1)`.
pub fn orientation_reverse(s: &SeifertData) -> SeifertData {
    let slots: Vec<Rational> = s.r.iter().map(|x| -x).collect();
    normalize_seifert(-s.e0, &slots).expect("reversal keeps three exceptional fibers")
}

/// `e0 + r1 + r2 + r3`; nonzero exactly for rational homology spheres.
pub fn euler_sum(s: &SeifertData) -> Rational {
    s.r.iter().fold(int(s.e0), |acc, x| acc + x)
}

/// The rational Euler number `e(Y)`, which is `-(e0 + r1 + r2 + r3)`.
pub fn rational_euler_number(s: &SeifertData) -> Rational {
    -euler_sum(s)
}

/// `|H_1(Y)| = |e0 + Σ ri| α1 α2 α3` (0 when `Y` is not a rational homology sphere).
pub fn h1_order(s: &SeifertData) -> BigInt {
    let alpha: BigInt = s.multiplicities().iter().product();
    (euler_sum(s) * Rational::from_integer(alpha)).abs().to_integer()
}

/// The star-shaped plumbing of `s`, legs from `-1/ri = [-a0, ..., -an]`.
pub fn seifert_to_plumbing(s: &SeifertData) -> StabilizedDiagram {
    let legs: Vec<Vec<i64>> = s
        .r
        .iter()
        .map(|x| cf_expand(&x.recip()).expect("1/r > 1 for r in (0,1)").signed())
        .collect();
    StabilizedDiagram::plumbing_star(s.e0, &legs).expect("three nonempty legs form a tree")
}

/// `r`-surgery on the positive `(p, q)` torus knot:
/// `Y(-1; (p-q*)/p, (q-p*)/q, 1/(pq-r))`.
pub fn torus_surgery_seifert(p: i64, q: i64, r: &Rational) -> Result<SeifertData> {
    check_torus(p, q)?;
    if !r.is_negative() {
        return domain("torus-knot surgery coefficient must be negative");
    }
    let qs = mod_inverse(q % p, p)?;
    let ps = mod_inverse(p % q, q)?;
    let third = (int(p * q) - r).recip();
    SeifertData::new(-1, [rat(p - qs, p), rat(q - ps, q), third])
}

/// The torus knot type `(q, -q')` of a regular fiber for `x = q/p`, where
/// `p'q - q'p = 1` and `0 < p' < p`.
pub fn fiber_knot_type(x: &Rational) -> Result<(i64, i64)> {
    if !x.is_positive() || *x >= Rational::one() {
        return domain(format!("{} is not in (0, 1)", format_rational(x)));
    }
    let q = to_i64(x.numer(), "numerator")?;
    let p = to_i64(x.denom(), "denominator")?;
    let pp = mod_inverse(q, p)?;
    let qp = (pp * q - 1) / p;
    Ok((q, -qp))
}
