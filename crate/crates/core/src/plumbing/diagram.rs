use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::exactmath::{cf_expand, cf_expand_head, rat, Rational};

use super::linalg::{Inertia, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub weight: i64,
    pub capacity: u64,
}

impl Vertex {
    /// A plumbing vertex stabilized `|w| - 2` times (never negative).
    pub fn plumbing(weight: i64) -> Self {
        Vertex { weight, capacity: (-weight - 2).max(0) as u64 }
    }
}

/// A weighted tree of Legendrian unknots together with the number of
/// stabilizations available at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizedDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    center: Option<usize>,
    irregular_center: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    pub matrix: SymMatrix,
    pub chi: i64,
    pub sigma: i64,
    pub inertia: Inertia,
    pub det: BigInt,
}

impl IntersectionData {
    pub fn is_negative_definite(&self) -> bool {
        self.inertia.negative == self.matrix.n()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "matrix": self.matrix.rows(),
            "chi": self.chi.to_string(),
            "sigma": self.sigma.to_string(),
            "nullity": self.inertia.nullity.to_string(),
            "det": self.det.to_string(),
        })
    }
}

/// `LDL^T` along a leaves-first order of the tree. Only built when every
/// pivot is nonzero.
struct TreeFactor {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    pivots: Vec<Rational>,
}

impl TreeFactor {
    fn forward(&self, b: &[Rational]) -> Vec<Rational> {
        let mut y: Vec<Rational> = b.to_vec();
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                if !y[v].is_zero() {
                    let t = &y[v] / &self.pivots[v];
                    y[p] -= t;
                }
            }
        }
        y
    }

    fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        let y = self.forward(b);
        let mut x = vec![Rational::zero(); b.len()];
        for &v in self.order.iter().rev() {
            let up = match self.parent[v] {
                Some(p) => &y[v] - &x[p],
                None => y[v].clone(),
            };
            x[v] = up / &self.pivots[v];
        }
        x
    }

    fn quadratic(&self, b: &[Rational]) -> Rational {
        let y = self.forward(b);
        self.order
            .iter()
            .filter(|&&v| !y[v].is_zero())
            .map(|&v| &y[v] * &y[v] / &self.pivots[v])
            .sum()
    }
}

impl StabilizedDiagram {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return domain("diagram has no vertices");
        }
        if edges.len() + 1 != n {
            return domain(format!("{} edges on {n} vertices is not a tree", edges.len()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return domain(format!("bad edge ({a}, {b})"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return domain("diagram is not connected");
        }
        let center = (0..n).find(|&v| adj[v].len() >= 3);
        Ok(StabilizedDiagram { vertices, edges, adj, center, irregular_center: false })
    }

    /// Star with the center at index 0 and each leg listed outward.
    pub fn star(center: Vertex, legs: &[Vec<Vertex>]) -> Result<Self> {
        let mut vertices = vec![center];
        let mut edges = Vec::new();
        for leg in legs {
            if leg.is_empty() {
                return domain("empty leg");
            }
            let mut prev = 0;
            for &v in leg {
                vertices.push(v);
                let id = vertices.len() - 1;
                edges.push((prev, id));
                prev = id;
            }
        }
        let mut d = Self::new(vertices, edges)?;
        d.center = Some(0);
        Ok(d)
    }

    /// Star of plumbing weights. The center is stabilized `|e0| - 2` times;
    /// when `e0 > -2` it gets no stabilizations and the diagram is flagged.
    pub fn plumbing_star(e0: i64, legs: &[Vec<i64>]) -> Result<Self> {
        let legs: Vec<Vec<Vertex>> =
            legs.iter().map(|l| l.iter().map(|&w| Vertex::plumbing(w)).collect()).collect();
        let mut d = Self::star(Vertex::plumbing(e0), &legs)?;
        d.irregular_center = e0 > -2;
        Ok(d)
    }

    pub fn chain(vertices: Vec<Vertex>) -> Result<Self> {
        let edges = (1..vertices.len()).map(|i| (i - 1, i)).collect();
        Self::new(vertices, edges)
    }

    pub fn plumbing_chain(weights: &[i64]) -> Result<Self> {
        Self::chain(weights.iter().map(|&w| Vertex::plumbing(w)).collect())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn capacities(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.capacity).collect()
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    /// The center's framing is above -2, so its stabilization count is only nominal.
    pub fn irregular_center(&self) -> bool {
        self.irregular_center
    }

    pub fn set_center(&mut self, v: usize) -> Result<()> {
        if v >= self.len() {
            return domain(format!("vertex {v} out of range"));
        }
        self.center = Some(v);
        Ok(())
    }

    pub fn set_capacity(&mut self, v: usize, capacity: u64) {
        self.vertices[v].capacity = capacity;
    }

    /// Legs as vertex indices from the center outward; each must be a path.
    pub fn legs(&self) -> Result<Vec<Vec<usize>>> {
        let c = self.center.ok_or(Error::NotStar)?;
        let mut legs = Vec::new();
        for &first in &self.adj[c] {
            let mut leg = vec![first];
            let (mut prev, mut cur) = (c, first);
            loop {
                let next: Vec<usize> = self.adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [w] => {
                        leg.push(*w);
                        prev = cur;
                        cur = *w;
                    }
                    _ => return Err(Error::NotStar),
                }
            }
            legs.push(leg);
        }
        Ok(legs)
    }

    /// Center weight and leg weight sequences read outward.
    pub fn star_weights(&self) -> Result<(i64, Vec<Vec<i64>>)> {
        let c = self.center.ok_or(Error::NotStar)?;
        let legs = self.legs()?;
        Ok((
            self.vertices[c].weight,
            legs.iter().map(|l| l.iter().map(|&v| self.vertices[v].weight).collect()).collect(),
        ))
    }

    pub fn matrix(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.len());
        for (i, v) in self.vertices.iter().enumerate() {
            m.set_sym(i, i, v.weight);
        }
        for &(a, b) in &self.edges {
            m.set_sym(a, b, 1);
        }
        m
    }

    fn tree_factor(&self) -> Option<TreeFactor> {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut bfs = vec![0];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut i = 0;
        while i < bfs.len() {
            let v = bfs[i];
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    bfs.push(w);
                }
            }
            i += 1;
        }
        let order: Vec<usize> = bfs.into_iter().rev().collect();
        let mut pivots: Vec<Rational> = self.vertices.iter().map(|v| rat(v.weight, 1)).collect();
        for &v in &order {
            if pivots[v].is_zero() {
                return None;
            }
            if let Some(p) = parent[v] {
                let t = pivots[v].recip();
                pivots[p] -= t;
            }
        }
        Some(TreeFactor { order, parent, pivots })
    }

    pub fn intersection_data(&self) -> IntersectionData {
        let matrix = self.matrix();
        let (inertia, det) = match self.tree_factor() {
            Some(f) => {
                let negative = f.pivots.iter().filter(|p| p.is_negative()).count();
                let det: Rational = f.pivots.iter().product();
                let inertia = Inertia { positive: self.len() - negative, negative, nullity: 0 };
                (inertia, det.to_integer())
            }
            None => (matrix.inertia(), matrix.det()),
        };
        IntersectionData {
            chi: self.len() as i64 + 1,
            sigma: inertia.signature(),
            inertia,
            det,
            matrix,
        }
    }

    pub fn det(&self) -> BigInt {
        match self.tree_factor() {
            Some(f) => f.pivots.iter().product::<Rational>().to_integer(),
            None => self.matrix().det(),
        }
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.len() {
            return domain(format!("vector of length {} on {} vertices", v.len(), self.len()));
        }
        Ok(())
    }

    /// `v^T Q^{-1} v`, exactly.
    pub fn quadratic_form(&self, v: &[i64]) -> Result<Rational> {
        self.check_len(v)?;
        let b: Vec<Rational> = v.iter().map(|&x| rat(x, 1)).collect();
        match self.tree_factor() {
            Some(f) => Ok(f.quadratic(&b)),
            None => {
                let x = self.matrix().solve(&b)?;
                Ok(b.iter().zip(&x).map(|(a, c)| a * c).sum())
            }
        }
    }

    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        if b.len() != self.len() {
            return domain("right-hand side has the wrong length");
        }
        match self.tree_factor() {
            Some(f) => Ok(f.solve(b)),
            None => self.matrix().solve(b),
        }
    }

    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>> {
        match self.tree_factor() {
            Some(f) => {
                let n = self.len();
                let mut cols = Vec::with_capacity(n);
                for j in 0..n {
                    let mut e = vec![Rational::zero(); n];
                    e[j] = Rational::one();
                    cols.push(f.solve(&e));
                }
                Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
            }
            None => self.matrix().inverse(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "weights": self.weights(),
            "capacities": self.capacities(),
            "edges": self.edges,
            "center": self.center,
        })
    }
}

/// Chain of `p/q = [a0, ..., ak]` with weights `-ai`; its boundary is `L(p, q)`.
pub fn lens_chain(p: i64, q: i64) -> Result<StabilizedDiagram> {
    check_pair(p, q)?;
    let cf = cf_expand(&rat(p, q))?;
    StabilizedDiagram::plumbing_chain(&cf.signed())
}

/// The D-type graph of `D(p, q)`: vertex order `[-2, -a0, ..., -ak, -2]`
/// with both `-2` vertices attached to `-a0`.
pub fn prism_graph(p: i64, q: i64) -> Result<StabilizedDiagram> {
    check_pair(p, q)?;
    let cf = cf_expand(&rat(p, q))?;
    let k = cf.len();
    let mut weights = vec![-2];
    weights.extend(cf.signed());
    weights.push(-2);
    let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
    edges.insert(0, (0, 1));
    edges.push((1, k + 1));
    let vertices = weights.iter().map(|&w| Vertex::plumbing(w)).collect();
    let mut d = StabilizedDiagram::new(vertices, edges)?;
    d.set_center(1)?;
    Ok(d)
}

/// Chain of the lens space `(p-q)/q` with weights `-(a0-1), -a1, ..., -ak`,
/// where `p/q = [a0, ..., ak]`.
pub fn shifted_lens_chain(p: i64, q: i64) -> Result<StabilizedDiagram> {
    check_pair(p, q)?;
    let cf = cf_expand(&rat(p, q))?;
    let mut w = cf.signed();
    w[0] += 1;
    StabilizedDiagram::plumbing_chain(&w)
}

/// Surgery chain for `r`-surgery on the positive `(p, q)` torus knot, `r < 0`.
pub fn torus_surgery_chain(p: i64, q: i64, r: &Rational) -> Result<StabilizedDiagram> {
    check_torus(p, q)?;
    if !r.is_negative() {
        return domain("torus-knot surgery coefficient must be negative");
    }
    let cf = cf_expand_head(&-r)?;
    let a = cf.coeffs();
    let head = p * q - p - q + a[0] - 1;
    let mut vertices = vec![Vertex { weight: -a[0], capacity: head as u64 }];
    vertices.extend(a[1..].iter().map(|&x| Vertex::plumbing(-x)));
    StabilizedDiagram::chain(vertices)
}

pub(crate) fn check_pair(p: i64, q: i64) -> Result<()> {
    if !(0 < q && q < p) {
        return domain(format!("need 0 < q < p, got p = {p}, q = {q}"));
    }
    if num_integer::gcd(p, q) != 1 {
        return domain(format!("p = {p} and q = {q} are not coprime"));
    }
    Ok(())
}

pub(crate) fn check_torus(p: i64, q: i64) -> Result<()> {
    if !(2 <= p && p < q) {
        return domain(format!("need 2 <= p < q, got p = {p}, q = {q}"));
    }
    if num_integer::gcd(p, q) != 1 {
        return domain(format!("p = {p} and q = {q} are not coprime"));
    }
    Ok(())
}
