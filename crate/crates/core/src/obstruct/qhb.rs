//! The ten plumbing families whose canonical structures bound rational
//! homology balls, read from a JSON template file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plumbing::StabilizedDiagram;

const BUILTIN: &str = include_str!("../../data/qhb_templates.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    P,
    Q,
    R,
}

impl Param {
    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['p', 'q', 'r'][self.slot()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Token {
    Weight { w: i64 },
    /// Weight `-(x + offset)`.
    Param { param: Param, offset: i64 },
    /// `x` consecutive `-2` vertices.
    Run2 { run2: Param },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhbPattern {
    pub id: String,
    pub center: Token,
    pub legs: Vec<Vec<Token>>,
}

type Bindings = [Option<i64>; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QhbMatch {
    pub id: String,
    /// Only the parameters the family actually uses.
    pub params: BTreeMap<Param, i64>,
}

impl fmt::Display for QhbMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{}={v}", k.name())).collect();
        if ps.is_empty() {
            write!(f, "{}", self.id)
        } else {
            write!(f, "{}({})", self.id, ps.join(", "))
        }
    }
}

impl QhbMatch {
    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> =
            self.params.iter().map(|(k, v)| (k.name().to_string(), (*v).into())).collect();
        serde_json::json!({ "family": self.id, "params": params })
    }
}

fn token_weights(t: &Token, vals: &[i64; 3]) -> Result<Vec<i64>> {
    Ok(match *t {
        Token::Weight { w } => vec![w],
        Token::Param { param, offset } => vec![-(vals[param.slot()] + offset)],
        Token::Run2 { run2 } => vec![-2; vals[run2.slot()] as usize],
    })
}

/// All ways `tokens` can spell exactly `ws`, extending `b`.
fn match_seq(tokens: &[Token], ws: &[i64], b: Bindings) -> Vec<Bindings> {
    let Some((first, rest)) = tokens.split_first() else {
        return if ws.is_empty() { vec![b] } else { Vec::new() };
    };
    match *first {
        Token::Weight { w } => match ws.split_first() {
            Some((&x, tail)) if x == w => match_seq(rest, tail, b),
            _ => Vec::new(),
        },
        Token::Param { param, offset } => {
            let Some((&x, tail)) = ws.split_first() else {
                return Vec::new();
            };
            let val = -x - offset;
            match b[param.slot()] {
                Some(v) if v != val => Vec::new(),
                _ if val < 0 => Vec::new(),
                _ => {
                    let mut nb = b;
                    nb[param.slot()] = Some(val);
                    match_seq(rest, tail, nb)
                }
            }
        }
        Token::Run2 { run2 } => {
            let avail = ws.iter().take_while(|&&x| x == -2).count();
            let lengths: Vec<usize> = match b[run2.slot()] {
                Some(v) if (v as usize) <= avail => vec![v as usize],
                Some(_) => Vec::new(),
                None => (0..=avail).collect(),
            };
            lengths
                .into_iter()
                .flat_map(|len| {
                    let mut nb = b;
                    nb[run2.slot()] = Some(len as i64);
                    match_seq(rest, &ws[len..], nb)
                })
                .collect()
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn used_params(p: &QhbPattern) -> Vec<Param> {
    let mut used: Vec<Param> = std::iter::once(&p.center)
        .chain(p.legs.iter().flatten())
        .filter_map(|t| match *t {
            Token::Weight { .. } => None,
            Token::Param { param, .. } => Some(param),
            Token::Run2 { run2 } => Some(run2),
        })
        .collect();
    used.sort();
    used.dedup();
    used
}

impl QhbPattern {
    pub fn params(&self) -> Vec<Param> {
        used_params(self)
    }

    /// The star diagram for parameter values `[p, q, r]`.
    pub fn instantiate(&self, vals: [i64; 3]) -> Result<StabilizedDiagram> {
        if vals.iter().any(|&v| v < 0) {
            return Err(Error::Domain("family parameters must be nonnegative".into()));
        }
        let center = token_weights(&self.center, &vals)?;
        let [c] = center[..] else {
            return Err(Error::Template(format!("{}: center must be a single weight", self.id)));
        };
        let legs = self
            .legs
            .iter()
            .map(|leg| {
                let ws: Vec<i64> = leg
                    .iter()
                    .map(|t| token_weights(t, &vals))
                    .collect::<Result<Vec<_>>>()?
                    .concat();
                Ok(ws)
            })
            .collect::<Result<Vec<_>>>()?;
        StabilizedDiagram::plumbing_star(c, &legs)
    }

    /// Every parameter assignment under which this family spells `d`.
    pub fn matches(&self, d: &StabilizedDiagram) -> Vec<QhbMatch> {
        let Ok((c, legs)) = d.star_weights() else {
            return Vec::new();
        };
        if legs.len() != self.legs.len() {
            return Vec::new();
        }
        let used = self.params();
        let mut out: Vec<QhbMatch> = Vec::new();
        for b0 in match_seq(std::slice::from_ref(&self.center), &[c], [None; 3]) {
            for perm in permutations(legs.len()) {
                let mut states = vec![b0];
                for (tokens, &li) in self.legs.iter().zip(&perm) {
                    states = states.into_iter().flat_map(|b| match_seq(tokens, &legs[li], b)).collect();
                }
                for b in states {
                    let params = used.iter().map(|&p| (p, b[p.slot()].expect("used parameter is bound"))).collect();
                    let m = QhbMatch { id: self.id.clone(), params };
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QhbTemplates {
    patterns: Vec<QhbPattern>,
}

impl QhbTemplates {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled templates parse")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let patterns: Vec<QhbPattern> =
            serde_json::from_str(src).map_err(|e| Error::Template(e.to_string()))?;
        for p in &patterns {
            if p.legs.is_empty() {
                return Err(Error::Template(format!("{}: no legs", p.id)));
            }
            p.instantiate([0, 0, 0])
                .map_err(|e| Error::Template(format!("{}: {e}", p.id)))?;
        }
        Ok(QhbTemplates { patterns })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Template(format!("{}: {e}", path.display())))?;
        Self::from_json(&src)
    }

    pub fn patterns(&self) -> &[QhbPattern] {
        &self.patterns
    }

    pub fn get(&self, id: &str) -> Option<&QhbPattern> {
        self.patterns.iter().find(|p| p.id == id)
    }

    /// The first family (in file order) matching `d`, up to leg permutation.
    pub fn match_diagram(&self, d: &StabilizedDiagram) -> Option<QhbMatch> {
        self.patterns.iter().find_map(|p| p.matches(d).into_iter().next())
    }

    pub fn match_all(&self, d: &StabilizedDiagram) -> Vec<QhbMatch> {
        self.patterns.iter().flat_map(|p| p.matches(d)).collect()
    }
}

/// Matches against the bundled families.
pub fn qhb_match(d: &StabilizedDiagram) -> Option<QhbMatch> {
    QhbTemplates::builtin().match_diagram(d)
}
