//! Tight contact structures as rotation vectors, Gompf's θ, and the
//! closed-form θ values for lens, prism and torus-surgery families.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exactmath::{cf_eval, cf_expand, format_fraction, i_invariant, int, mod_inverse, rat, Rational};
use crate::plumbing::{check_pair, check_torus, StabilizedDiagram};

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RotationVector(pub Vec<i64>);

impl RotationVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn negated(&self) -> RotationVector {
        RotationVector(self.0.iter().map(|x| -x).collect())
    }

    /// `|r_v| <= cap_v` and `r_v ≡ cap_v (mod 2)` at every vertex.
    pub fn fits(&self, d: &StabilizedDiagram) -> bool {
        self.0.len() == d.len()
            && self.0.iter().zip(d.capacities()).all(|(&r, c)| {
                let c = c as i64;
                r.abs() <= c && (r - c) % 2 == 0
            })
    }
}

impl fmt::Display for RotationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsistencyClass {
    Consistent,
    #[serde(rename = "mostly")]
    MostlyConsistent,
    Inconsistent,
}

impl ConsistencyClass {
    pub fn label(self) -> &'static str {
        match self {
            ConsistencyClass::Consistent => "consistent",
            ConsistencyClass::MostlyConsistent => "mostly",
            ConsistencyClass::Inconsistent => "inconsistent",
        }
    }
}

/// All rotation vectors of a diagram in lexicographic order, with the total
/// known before anything is produced.
#[derive(Debug, Clone)]
pub struct Enumeration {
    caps: Vec<u64>,
    count: BigUint,
}

pub fn enumerate_structures(d: &StabilizedDiagram) -> Enumeration {
    let caps = d.capacities();
    let count = caps.iter().map(|&c| BigUint::from(c + 1)).product();
    Enumeration { caps, count }
}

impl Enumeration {
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn count_u64(&self) -> Option<u64> {
        self.count.to_u64()
    }

    /// The vector at position `index`, or `None` past the end.
    pub fn nth(&self, index: &BigUint) -> Option<RotationVector> {
        if *index >= self.count {
            return None;
        }
        let mut rest = index.clone();
        let mut out = vec![0i64; self.caps.len()];
        for (i, &c) in self.caps.iter().enumerate().rev() {
            let base = BigUint::from(c + 1);
            let digit = (&rest % &base).to_u64().expect("digit below base");
            rest /= base;
            out[i] = 2 * digit as i64 - c as i64;
        }
        Some(RotationVector(out))
    }

    pub fn iter(&self) -> EnumIter<'_> {
        self.range_iter(BigUint::zero(), self.count.clone())
    }

    /// Positions `start..end`; disjoint ranges can be walked on separate threads.
    pub fn range_iter(&self, start: BigUint, end: BigUint) -> EnumIter<'_> {
        let end = end.min(self.count.clone());
        let current = self.nth(&start);
        let remaining = if start < end { end - start } else { BigUint::zero() };
        EnumIter { caps: &self.caps, current, remaining }
    }

    /// Materializes everything, refusing above `cap` vectors.
    pub fn collect_all(&self, cap: u64) -> Result<Vec<RotationVector>> {
        match self.count_u64() {
            Some(n) if n <= cap => Ok(self.iter().collect()),
            _ => Err(Error::CapExceeded { count: self.count.to_string(), cap }),
        }
    }
}

pub struct EnumIter<'a> {
    caps: &'a [u64],
    current: Option<RotationVector>,
    remaining: BigUint,
}

impl Iterator for EnumIter<'_> {
    type Item = RotationVector;

    fn next(&mut self) -> Option<RotationVector> {
        if self.remaining.is_zero() {
            return None;
        }
        self.remaining -= 1u32;
        let out = self.current.clone()?;
        let mut next = out.0.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            let c = self.caps[i] as i64;
            if next[i] < c {
                next[i] += 2;
                self.current = Some(RotationVector(next));
                break;
            }
            next[i] = -c;
        }
        Some(out)
    }
}

/// Every vertex stabilized positively as often as it allows.
pub fn canonical_rotation(d: &StabilizedDiagram) -> RotationVector {
    RotationVector(d.capacities().iter().map(|&c| c as i64).collect())
}

/// Precomputes `det Q` and the integral matrix `det(Q) Q^{-1}` so that θ of
/// many rotation vectors costs one integer quadratic form each.
#[derive(Debug, Clone)]
pub struct ThetaEvaluator {
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
    offset: Rational,
}

impl ThetaEvaluator {
    pub fn new(d: &StabilizedDiagram) -> Result<Self> {
        let data = d.intersection_data();
        if data.inertia.nullity > 0 {
            return Err(Error::Singular { nullity: data.inertia.nullity });
        }
        let det = data.det.clone();
        let inv = d.inverse()?;
        let scale = Rational::from_integer(det.clone());
        let adj = inv
            .iter()
            .map(|row| row.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect();
        let offset = int(-2 * data.chi - 3 * data.sigma);
        Ok(ThetaEvaluator { adj, det, offset })
    }

    pub fn c1_squared(&self, v: &[i64]) -> Rational {
        let mut total = BigInt::zero();
        for (i, row) in self.adj.iter().enumerate() {
            if v[i] == 0 {
                continue;
            }
            let mut acc = BigInt::zero();
            for (j, a) in row.iter().enumerate() {
                if v[j] != 0 {
                    acc += a * v[j];
                }
            }
            total += acc * v[i];
        }
        Rational::new(total, self.det.clone())
    }

    pub fn theta(&self, v: &RotationVector) -> Rational {
        self.c1_squared(&v.0) + &self.offset
    }
}

/// `θ = c1² - 2χ - 3σ` with `c1² = r^T Q^{-1} r`.
pub fn theta(d: &StabilizedDiagram, rot: &RotationVector) -> Result<Rational> {
    let data = d.intersection_data();
    if data.inertia.nullity > 0 {
        return Err(Error::Singular { nullity: data.inertia.nullity });
    }
    let c1 = d.quadratic_form(&rot.0)?;
    Ok(c1 - int(2 * data.chi + 3 * data.sigma))
}

fn block_signs(d: &StabilizedDiagram, rot: &RotationVector, block: &[usize]) -> Option<(bool, bool)> {
    let mut seen = (false, false);
    for &v in block {
        let c = d.vertices()[v].capacity as i64;
        if c == 0 {
            continue;
        }
        let r = rot.0[v];
        if r == c {
            seen.0 = true;
        } else if r == -c {
            seen.1 = true;
        } else {
            return None;
        }
    }
    (!(seen.0 && seen.1)).then_some(seen)
}

/// Consistent when one sign works everywhere, mostly consistent when each
/// leg (and the center) is uniform on its own; capacity-zero vertices are
/// ignored.
pub fn classify_consistency(d: &StabilizedDiagram, rot: &RotationVector) -> Result<ConsistencyClass> {
    let c = d.center().ok_or(Error::NotStar)?;
    if rot.0.len() != d.len() {
        return domain("rotation vector length does not match the diagram");
    }
    let mut parts = d.legs()?;
    parts.push(vec![c]);
    let mut any = (false, false);
    for part in &parts {
        match block_signs(d, rot, part) {
            None => return Ok(ConsistencyClass::Inconsistent),
            Some(s) => {
                any.0 |= s.0;
                any.1 |= s.1;
            }
        }
    }
    Ok(if any.0 && any.1 {
        ConsistencyClass::MostlyConsistent
    } else {
        ConsistencyClass::Consistent
    })
}

/// Chains have a single leg: consistent or not.
pub fn classify_chain(d: &StabilizedDiagram, rot: &RotationVector) -> ConsistencyClass {
    let all: Vec<usize> = (0..d.len()).collect();
    match block_signs(d, rot, &all) {
        Some(_) => ConsistencyClass::Consistent,
        None => ConsistencyClass::Inconsistent,
    }
}

/// `-(I(p/q) + (2 + q + q*)/p)`.
pub fn theta_lens_closed(p: i64, q: i64) -> Result<Rational> {
    check_pair(p, q)?;
    let i = i_invariant(&rat(p, q))?;
    let qs = mod_inverse(q, p)?;
    Ok(-(int(i) + rat(2 + q + qs, p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrismTheta {
    pub theta: Rational,
    pub c1_squared: Rational,
}

/// `θ = 1 - I(p/q) - 1/[ak, ..., a1, a0-1]` and
/// `c1² = 2k + 3 - Σ ai - 1/[ak, ..., a1, a0-1]` for `p/q = [a0, ..., ak]`, `k >= 1`.
pub fn theta_prism_closed(p: i64, q: i64) -> Result<PrismTheta> {
    check_pair(p, q)?;
    let cf = cf_expand(&rat(p, q))?;
    let a = cf.coeffs();
    if a.len() < 2 {
        return domain(format!("{p}/{q} has a one-term expansion; that is a lens space"));
    }
    let k = a.len() as i64 - 1;
    let mut rev = cf.reversed();
    *rev.last_mut().expect("nonempty") -= 1;
    let tail = cf_eval(&rev)?.recip();
    let i = i_invariant(&rat(p, q))?;
    Ok(PrismTheta {
        theta: int(1 - i) - &tail,
        c1_squared: int(2 * k + 3 - a.iter().sum::<i64>()) - tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SurgeryCase {
    /// `-1/n` surgery.
    ReciprocalSurgery,
    /// `-n` surgery.
    IntegerSurgery,
}

impl SurgeryCase {
    pub fn coefficient(self, n: i64) -> Rational {
        match self {
            SurgeryCase::ReciprocalSurgery => rat(-1, n),
            SurgeryCase::IntegerSurgery => int(-n),
        }
    }
}

/// Canonical θ for `-1/n` surgery, `-n(pq-p-q)² + n - 2`, or for `-n`
/// surgery, `-(pq-p-q+n-1)²/n - 1`.
pub fn theta_torus_closed(p: i64, q: i64, n: i64, case: SurgeryCase) -> Result<Rational> {
    check_torus(p, q)?;
    if n < 1 {
        return domain(format!("n = {n} must be positive"));
    }
    let g = p * q - p - q;
    Ok(match case {
        SurgeryCase::ReciprocalSurgery => int(-n * g * g + n - 2),
        SurgeryCase::IntegerSurgery => {
            let s = g + n - 1;
            -rat(s * s, n) - Rational::one()
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub rotation: RotationVector,
    pub theta: Option<Rational>,
    pub class: Option<ConsistencyClass>,
}

impl StructureReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rotation": self.rotation.0,
            "theta": self.theta.as_ref().map(format_fraction),
            "class": self.class.map(|c| c.label()),
        })
    }
}

/// Evaluates `f` on every index in `0..count`, splitting the range into
/// contiguous chunks over `threads` workers; results stay in index order.
pub fn par_map_indices<T, F>(count: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(count.max(1));
    if threads == 1 {
        return (0..count).map(&f).collect();
    }
    let chunk = count.div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let f = &f;
                s.spawn(move || (t * chunk..((t + 1) * chunk).min(count)).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Every structure on `d` with θ (when `Q` is nondegenerate) and consistency
/// class (star diagrams only).
pub fn structure_reports(d: &StabilizedDiagram, cap: u64, threads: usize) -> Result<Vec<StructureReport>> {
    let all = enumerate_structures(d).collect_all(cap)?;
    let eval = ThetaEvaluator::new(d).ok();
    let star = d.center().is_some() && d.legs().is_ok();
    Ok(par_map_indices(all.len(), threads, |i| {
        let rotation = all[i].clone();
        StructureReport {
            theta: eval.as_ref().map(|e| e.theta(&rotation)),
            class: if star {
                classify_consistency(d, &rotation).ok()
            } else {
                Some(classify_chain(d, &rotation))
            },
            rotation,
        }
    }))
}
