//! Fillability decisions: the 𝒪 family of lens spaces, the QHB plumbing
//! families, L-space tests, per-structure verdicts and a generator of
//! fillable examples.

mod qhb;
mod spherical;
mod verdict;

use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactmath::{int, rat, Rational};
use crate::plumbing::{
    check_pair, euler_sum, fiber_knot_type, h1_order, normalize_seifert, seifert_to_plumbing, SeifertData,
    StabilizedDiagram,
};

pub use qhb::{qhb_match, Param, QhbMatch, QhbPattern, QhbTemplates, Token};
pub use spherical::{spherical_graph, SphericalKind};
pub use verdict::{
    filling_verdict, Filling, Rule, Status, StructureVerdict, Verdict, VerdictInput, VerdictOptions, VerdictReport,
};

/// `(m, h)` with `p = m²`, `q = mh - 1`, `0 < h < m` and `gcd(m, h) = 1`.
pub fn o_membership(p: i64, q: i64) -> Result<Option<(i64, i64)>> {
    check_pair(p, q)?;
    let m = p.sqrt();
    if m * m != p || (q + 1) % m != 0 {
        return Ok(None);
    }
    let h = (q + 1) / m;
    Ok((0 < h && h < m && m.gcd(&h) == 1).then_some((m, h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OMembership {
    pub q_star: i64,
    pub direct: Option<(i64, i64)>,
    /// Whether `p/q*` would pass instead.
    pub dual: Option<(i64, i64)>,
}

pub fn o_report(p: i64, q: i64) -> Result<OMembership> {
    let direct = o_membership(p, q)?;
    let q_star = crate::exactmath::mod_inverse(q, p)?;
    let dual = o_membership(p, q_star)?;
    Ok(OMembership { q_star, direct, dual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LSpaceStatus {
    LSpace,
    NotLSpace,
    Unknown,
}

/// For `e0 = -1`: an L-space when `Σ ri >= 3/2` or `r1 + r2 >= 1`, not one
/// when `Σ ri < 1`, undecided in between.
pub fn lspace_status(s: &SeifertData) -> Result<LSpaceStatus> {
    if s.e0() != -1 {
        return domain(format!("lspace_status needs e0 = -1, got {}", s.e0()));
    }
    let [r1, r2, r3] = s.r();
    let total = r1 + r2 + r3;
    Ok(if total >= rat(3, 2) || r1 + r2 >= Rational::one() {
        LSpaceStatus::LSpace
    } else if total < Rational::one() {
        LSpaceStatus::NotLSpace
    } else {
        LSpaceStatus::Unknown
    })
}

/// Laufer's test on a negative-definite tree of spheres: grow `Z = Σ E_v` by
/// any `E_v` with `Z·E_v = 1`; the graph is rational iff `Z·E_v >= 2` never
/// occurs before every `Z·E_v <= 0`.
pub fn is_rational_graph(d: &StabilizedDiagram) -> Result<bool> {
    if !d.intersection_data().is_negative_definite() {
        return domain("rationality test needs a negative-definite graph");
    }
    let w = d.weights();
    let mut z = vec![1i64; d.len()];
    loop {
        let mut grew = false;
        for v in 0..d.len() {
            let dot = z[v] * w[v] + d.neighbors(v).iter().map(|&u| z[u]).sum::<i64>();
            if dot >= 2 {
                return Ok(false);
            }
            if dot == 1 {
                z[v] += 1;
                grew = true;
            }
        }
        if !grew {
            return Ok(true);
        }
    }
}

/// L-space status for any `e0`, using the rationality test when `e0 = -2`.
pub fn lspace_status_general(s: &SeifertData) -> LSpaceStatus {
    match s.e0() {
        -1 => lspace_status(s).expect("e0 = -1"),
        -2 => {
            let e = euler_sum(s);
            if !e.is_negative() {
                LSpaceStatus::NotLSpace
            } else if is_rational_graph(&seifert_to_plumbing(s)).expect("negative definite") {
                LSpaceStatus::LSpace
            } else {
                LSpaceStatus::NotLSpace
            }
        }
        _ => LSpaceStatus::LSpace,
    }
}

/// `Σ(p, q, pqn + 1)` is `-1/n` surgery on the `(p, q)` torus knot.
pub fn brieskorn(p: i64, q: i64, n: i64) -> Result<VerdictInput> {
    if n < 1 {
        return domain(format!("n = {n} must be positive"));
    }
    crate::plumbing::torus_surgery_seifert(p, q, &rat(-1, n))?;
    Ok(VerdictInput::Brieskorn(p, q, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HandleCounts {
    pub zero: u32,
    pub one: u32,
    pub two: u32,
}

/// How the filling of a generated example is built: a Legendrian `(m, -h)`
/// cable of a regular fiber, stabilized `k` times, with a single 1-handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub companion: (i64, i64),
    pub cable: (i64, i64),
    pub stabilizations: i64,
    /// `-(k m² + m h + 1)`, the integral slope on the cable.
    pub cable_surgery: i64,
    /// `cable_surgery / m²`, the slope seen on the companion.
    pub surgery_coefficient: Rational,
    pub handles: HandleCounts,
    pub b2: u32,
}

impl Construction {
    pub fn euler_characteristic(&self) -> i64 {
        self.handles.zero as i64 - self.handles.one as i64 + self.handles.two as i64
    }

    pub fn signature(&self) -> i64 {
        0
    }

    pub fn c1_squared(&self) -> Rational {
        Rational::zero()
    }

    pub fn theta(&self) -> Rational {
        self.c1_squared() - int(2 * self.euler_characteristic() + 3 * self.signature())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "companion": [self.companion.0, self.companion.1],
            "cable": [self.cable.0, self.cable.1],
            "stabilizations": self.stabilizations,
            "cable_surgery": self.cable_surgery,
            "surgery_coefficient": crate::exactmath::format_fraction(&self.surgery_coefficient),
            "handles": self.handles,
            "b2": self.b2,
            "theta": crate::exactmath::format_fraction(&self.theta()),
        })
    }
}

/// Slope `n` on the `(m, h')` cable of a knot, `|n - m h'| = 1`, becomes
/// slope `n / m²` on the companion.
pub fn gordon_cable_slope(m: i64, h_prime: i64, n: i64) -> Result<Rational> {
    if m < 2 || (n - m * h_prime).abs() != 1 {
        return domain(format!("slope {n} is not adjacent to the cabling slope {}", m * h_prime));
    }
    Ok(rat(n, m * m))
}

/// `S(p/q, -p/q, m²/(k m² + m h + 1))` normalized, for `x = q/p`.
pub fn generate_fillable(x: &Rational, m: i64, h: i64, k: i64) -> Result<(SeifertData, Construction)> {
    let companion = fiber_knot_type(x)?;
    if x.numer().is_one() {
        return domain(format!("{x} is of the form 1/n; the result is a lens space"));
    }
    if !(0 < h && h < m) || m.gcd(&h) != 1 {
        return domain(format!("need coprime 0 < h < m, got m = {m}, h = {h}"));
    }
    if k < 0 {
        return domain(format!("k = {k} must be nonnegative"));
    }
    let inv = x.recip();
    let denom = k * m * m + m * h + 1;
    let s = normalize_seifert(0, &[inv.clone(), -inv, rat(m * m, denom)])?;
    let cable_surgery = -denom;
    let surgery_coefficient = gordon_cable_slope(m, -h - k * m, cable_surgery)?;
    let order = h1_order(&s);
    let root = order.sqrt();
    if order.is_zero() || &root * &root != order {
        return domain(format!("|H1| = {order} is not a nonzero square"));
    }
    let c = Construction {
        companion,
        cable: (m, -h),
        stabilizations: k,
        cable_surgery,
        surgery_coefficient,
        handles: HandleCounts { zero: 1, one: 1, two: 1 },
        b2: 0,
    };
    Ok((s, c))
}
