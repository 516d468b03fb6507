use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::plumbing::{prism_graph, StabilizedDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SphericalKind {
    T3,
    T27,
    I49,
    Prism(i64, i64),
}

impl fmt::Display for SphericalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalKind::T3 => write!(f, "T3"),
            SphericalKind::T27 => write!(f, "T27"),
            SphericalKind::I49 => write!(f, "I49"),
            SphericalKind::Prism(p, q) => write!(f, "D:{p}/{q}"),
        }
    }
}

impl FromStr for SphericalKind {
    type Err = Error;

    /// `T3`, `T27`, `I49` or `D:p/q`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "T3" => Ok(SphericalKind::T3),
            "T27" => Ok(SphericalKind::T27),
            "I49" => Ok(SphericalKind::I49),
            other => {
                let bad = || Error::Parse(format!("expected T3, T27, I49 or D:p/q, got '{other}'"));
                let rest = other.strip_prefix("D:").ok_or_else(bad)?;
                let (p, q) = rest.split_once('/').ok_or_else(bad)?;
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                Ok(SphericalKind::Prism(p, q))
            }
        }
    }
}

pub fn spherical_graph(kind: SphericalKind) -> Result<StabilizedDiagram> {
    let legs = |last: i64| [vec![-2, -2], vec![-2], vec![last]];
    match kind {
        SphericalKind::T3 => StabilizedDiagram::plumbing_star(-2, &legs(-3)),
        SphericalKind::T27 => StabilizedDiagram::plumbing_star(-6, &legs(-3)),
        SphericalKind::I49 => StabilizedDiagram::plumbing_star(-3, &legs(-5)),
        SphericalKind::Prism(p, q) => prism_graph(p, q),
    }
}
