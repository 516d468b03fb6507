//! Plain-text plumbing graphs.
//!
//! ```text
//! # star form
//! center -2
//! leg -2 -2
//! leg -3
//! ```
//!
//! General trees use `vertex <id> <w>` and `edge <id> <id>` lines instead.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::diagram::{StabilizedDiagram, Vertex};

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.parse().map_err(|_| Error::Parse(format!("line {line}: '{tok}' is not an integer")))
}

pub fn parse_plumbing(src: &str) -> Result<StabilizedDiagram> {
    let mut center: Option<i64> = None;
    let mut legs: Vec<Vec<i64>> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        match toks[0] {
            "center" => {
                if toks.len() != 2 {
                    return Err(Error::Parse(format!("line {line}: expected 'center <w>'")));
                }
                if center.is_some() {
                    return Err(Error::Parse(format!("line {line}: second center")));
                }
                center = Some(parse_int(toks[1], line)?);
            }
            "leg" => {
                if toks.len() < 2 {
                    return Err(Error::Parse(format!("line {line}: empty leg")));
                }
                legs.push(toks[1..].iter().map(|t| parse_int(t, line)).collect::<Result<_>>()?);
            }
            "vertex" => {
                if toks.len() != 3 {
                    return Err(Error::Parse(format!("line {line}: expected 'vertex <id> <w>'")));
                }
                if ids.insert(toks[1].to_string(), vertices.len()).is_some() {
                    return Err(Error::Parse(format!("line {line}: duplicate vertex '{}'", toks[1])));
                }
                vertices.push(Vertex::plumbing(parse_int(toks[2], line)?));
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(Error::Parse(format!("line {line}: expected 'edge <id> <id>'")));
                }
                let look = |t: &str| {
                    ids.get(t)
                        .copied()
                        .ok_or_else(|| Error::Parse(format!("line {line}: unknown vertex '{t}'")))
                };
                edges.push((look(toks[1])?, look(toks[2])?));
            }
            other => return Err(Error::Parse(format!("line {line}: unknown directive '{other}'"))),
        }
    }

    let star = center.is_some() || !legs.is_empty();
    let tree = !vertices.is_empty() || !edges.is_empty();
    match (star, tree) {
        (true, true) => Err(Error::Parse("mixes star and vertex/edge forms".into())),
        (false, false) => Err(Error::Parse("no graph found".into())),
        (true, false) => {
            let c = center.ok_or_else(|| Error::Parse("star form needs a center line".into()))?;
            StabilizedDiagram::plumbing_star(c, &legs)
        }
        (false, true) => StabilizedDiagram::new(vertices, edges),
    }
}

/// Writes the star form when the diagram has a center, else vertex/edge lines.
pub fn write_plumbing(d: &StabilizedDiagram) -> String {
    let mut out = String::new();
    match d.star_weights() {
        Ok((c, legs)) => {
            out.push_str(&format!("center {c}\n"));
            for leg in legs {
                let ws: Vec<String> = leg.iter().map(|w| w.to_string()).collect();
                out.push_str(&format!("leg {}\n", ws.join(" ")));
            }
        }
        Err(_) => {
            for (i, v) in d.vertices().iter().enumerate() {
                out.push_str(&format!("vertex v{i} {}\n", v.weight));
            }
            for (a, b) in d.edges() {
                out.push_str(&format!("edge v{a} v{b}\n"));
            }
        }
    }
    out
}
