//! Farey paths for solid tori, continued fraction blocks and the sign
//! bookkeeping of decorated paths.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactmath::{cf_eval, has_edge, FareySlope};

type Vector = (BigInt, BigInt);

fn vadd(a: &Vector, b: &Vector) -> Vector {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn vsub(a: &Vector, b: &Vector) -> Vector {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn vscale(k: &BigInt, a: &Vector) -> Vector {
    (k * &a.0, k * &a.1)
}

fn slope(v: &Vector) -> FareySlope {
    FareySlope::new(v.0.clone(), v.1.clone()).expect("path vectors are nonzero")
}

/// A continued fraction block: vertices `start..=end`, each one step of
/// `target` further than the last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    #[serde(serialize_with = "ser_slope")]
    pub target: FareySlope,
}

impl Block {
    pub fn edges(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

fn ser_slope<S: serde::Serializer>(s: &FareySlope, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&s.as_fraction())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyPath {
    reps: Vec<Vector>,
    vertices: Vec<FareySlope>,
    blocks: Vec<Block>,
}

impl FareyPath {
    pub fn vertices(&self) -> &[FareySlope] {
        &self.vertices
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    fn block_of_edge(&self, e: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.edges().contains(&e))
            .expect("every edge lies in a block")
    }

    fn diff(&self, b: usize) -> Vector {
        let blk = &self.blocks[b];
        vsub(&self.reps[blk.start + 1], &self.reps[blk.start])
    }

    /// Every decoration with the final edge blank, one representative per
    /// in-block shuffle class.
    pub fn decorations(&self) -> Vec<DecoratedPath> {
        let last = self.edge_count() - 1;
        let mut out = vec![Vec::new()];
        for b in &self.blocks {
            let signed = b.edges().filter(|&e| e != last).count();
            let mut next = Vec::new();
            for prefix in &out {
                for plus in (0..=signed).rev() {
                    let mut s: Vec<Sign> = prefix.clone();
                    s.extend(std::iter::repeat(Sign::Plus).take(plus));
                    s.extend(std::iter::repeat(Sign::Minus).take(signed - plus));
                    next.push(s);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|mut signs| {
                signs.push(Sign::Blank);
                DecoratedPath { path: self.clone(), signs }
            })
            .collect()
    }
}

/// Minimal Farey path from 0 to the negative rational with signed
/// continued fraction `signed` (head `<= -1`, tail `<= -2`).
///
/// Each step jumps to the farthest neighbour of the current vertex that still
/// lies in `[r, 0]`; since Farey edges never cross, this is a shortest path.
pub fn standard_path(signed: &[i64]) -> Result<FareyPath> {
    let Some((&head, tail)) = signed.split_first() else {
        return domain("empty coefficient sequence");
    };
    if head > -1 || tail.iter().any(|&a| a > -2) {
        return domain("coefficients must be <= -1 (head) and <= -2 (tail)");
    }
    let r = cf_eval(signed)?;
    let (rn, rd) = (r.numer().clone(), r.denom().clone());
    let target: Vector = (rn.clone(), rd.clone());

    let mut v: Vector = (BigInt::zero(), BigInt::one());
    let mut u: Vector = (-BigInt::one(), BigInt::zero());
    let mut reps = vec![v.clone()];
    while v.0.clone() * &target.1 != target.0.clone() * &v.1 {
        let num = &rn * &u.1 - &u.0 * &rd;
        let den = &v.0 * &rd - &rn * &v.1;
        let k = num.div_ceil(&den).max(BigInt::one());
        let next = vadd(&u, &vscale(&k, &v));
        u = vadd(&u, &vscale(&(k - 1u32), &v));
        v = next;
        reps.push(v.clone());
    }

    let mut blocks: Vec<Block> = Vec::new();
    let mut prev: Option<Vector> = None;
    for i in 0..reps.len() - 1 {
        let d = vsub(&reps[i + 1], &reps[i]);
        match (&prev, blocks.last_mut()) {
            (Some(p), Some(b)) if *p == d => b.end = i + 1,
            _ => blocks.push(Block { start: i, end: i + 1, target: slope(&d) }),
        }
        prev = Some(d);
    }
    let vertices = reps.iter().map(slope).collect();
    Ok(FareyPath { reps, vertices, blocks })
}

/// `|a0 (a1+1) ... (an+1)|` for signed entries.
pub fn count_tight_solid_torus(signed: &[i64]) -> Result<BigUint> {
    let Some((&head, tail)) = signed.split_first() else {
        return domain("empty coefficient sequence");
    };
    if head > -1 || tail.iter().any(|&a| a > -2) {
        return domain("coefficients must be <= -1 (head) and <= -2 (tail)");
    }
    let prod = tail
        .iter()
        .fold(BigInt::from(head), |acc, &a| acc * BigInt::from(a + 1));
    Ok(prod.abs().to_biguint().expect("absolute value is nonnegative"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Blank,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Blank => '.',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedPath {
    pub path: FareyPath,
    pub signs: Vec<Sign>,
}

impl DecoratedPath {
    /// Only the first and last edges may be blank.
    pub fn new(path: FareyPath, signs: Vec<Sign>) -> Result<Self> {
        let n = path.edge_count();
        if signs.len() != n {
            return domain(format!("{} signs for {n} edges", signs.len()));
        }
        if signs
            .iter()
            .enumerate()
            .any(|(i, &s)| s == Sign::Blank && i != 0 && i + 1 != n)
        {
            return domain("only edges adjacent to a meridian may be blank");
        }
        Ok(DecoratedPath { path, signs })
    }

    /// Signs sorted within each block, `+` first.
    pub fn normalized(&self) -> DecoratedPath {
        let mut signs = self.signs.clone();
        for b in self.path.blocks() {
            let mut plus = b.edges().filter(|&e| signs[e] == Sign::Plus).count();
            for e in b.edges() {
                if signs[e] == Sign::Blank {
                    continue;
                }
                signs[e] = if plus > 0 {
                    plus -= 1;
                    Sign::Plus
                } else {
                    Sign::Minus
                };
            }
        }
        DecoratedPath { path: self.path.clone(), signs }
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.path.vertices().iter().map(|v| v.as_fraction()).collect::<Vec<_>>(),
            "blocks": self.path.blocks(),
            "signs": self.sign_string(),
        })
    }
}

impl fmt::Display for DecoratedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.path.vertices().iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", self.signs[i - 1].symbol())?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Slopes along which a mixed torus at path vertex `vertex` can be split.
///
/// A vertex inside a block gives that block's target (∞ for the first
/// block). At a junction `s'` between blocks with targets `t_A` and
/// `t_B = (l+1)s' + t_A`, the candidates are `j s' + t_A` for `1 <= j <= max(l, 1)`.
pub fn exceptional_slopes(d: &DecoratedPath, vertex: usize) -> Result<Vec<FareySlope>> {
    let path = &d.path;
    if vertex == 0 || vertex >= path.edge_count() {
        return domain(format!("vertex {vertex} is not interior to the path"));
    }
    let a = path.block_of_edge(vertex - 1);
    let b = path.block_of_edge(vertex);
    if a == b {
        return Ok(vec![path.blocks[a].target.clone()]);
    }
    let s = &path.reps[vertex];
    let ta = path.diff(a);
    let tb = path.diff(b);
    let gap = vsub(&tb, &ta);
    let l1 = if !s.0.is_zero() { &gap.0 / &s.0 } else { &gap.1 / &s.1 };
    if vscale(&l1, s) != gap || l1 < BigInt::one() {
        return domain("junction targets are not related by a Farey twist");
    }
    let top = (l1 - 1u32).max(BigInt::one());
    let mut out = Vec::new();
    let mut j = BigInt::one();
    while j <= top {
        out.push(slope(&vadd(&vscale(&j, s), &ta)));
        j += 1u32;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecorationReport {
    pub per_block_mixed: Vec<bool>,
    pub junction_mismatches: Vec<usize>,
    pub consistent: bool,
}

/// Flags blocks holding both signs and adjacent sign-uniform blocks of
/// opposite sign. Junction `j` sits between blocks `j` and `j+1`.
pub fn classify_decoration(d: &DecoratedPath) -> DecorationReport {
    let d = d.normalized();
    let blocks = d.path.blocks();
    let sign_sets: Vec<(bool, bool)> = blocks
        .iter()
        .map(|b| {
            let s = &d.signs[b.edges()];
            (s.contains(&Sign::Plus), s.contains(&Sign::Minus))
        })
        .collect();
    let per_block_mixed: Vec<bool> = sign_sets.iter().map(|&(p, m)| p && m).collect();
    let mut junction_mismatches = Vec::new();
    for j in 0..blocks.len().saturating_sub(1) {
        let (a, b) = (sign_sets[j], sign_sets[j + 1]);
        let uniform = |s: (bool, bool)| s.0 != s.1;
        if uniform(a) && uniform(b) && a != b {
            junction_mismatches.push(j);
        }
    }
    let consistent = !per_block_mixed.iter().any(|&m| m) && junction_mismatches.is_empty();
    DecorationReport { per_block_mixed, junction_mismatches, consistent }
}

/// Whether consecutive path vertices are Farey neighbours.
pub fn is_edge_path(vertices: &[FareySlope]) -> bool {
    vertices.windows(2).all(|w| has_edge(&w[0], &w[1]))
}
