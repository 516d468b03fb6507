//! Dense exact linear algebra on symmetric integer matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    n: usize,
    a: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, a: vec![0; n * n] }
    }

    /// Builds from rows; fails unless square and symmetric.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain("matrix is not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                m.a[i * n + j] = x;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Domain("matrix is not symmetric".into()));
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, x: i64) {
        self.a[i * self.n + j] = x;
        self.a[j * self.n + i] = x;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    fn rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| Rational::from_integer(self.get(i, j).into())).collect())
            .collect()
    }

    /// Fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Exact inertia by symmetric elimination. A zero diagonal with a nonzero
    /// partner is split off as a hyperbolic 2x2 block.
    pub fn inertia(&self) -> Inertia {
        let mut m = self.rational_rows();
        let mut active: Vec<usize> = (0..self.n).collect();
        let mut out = Inertia { positive: 0, negative: 0, nullity: 0 };
        while !active.is_empty() {
            if let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) {
                let p = active.remove(pos);
                let d = m[p][p].clone();
                if d.is_positive() {
                    out.positive += 1;
                } else {
                    out.negative += 1;
                }
                for &i in &active {
                    if m[i][p].is_zero() {
                        continue;
                    }
                    let f = &m[i][p] / &d;
                    for &j in &active {
                        if !m[p][j].is_zero() {
                            let v = &f * &m[p][j];
                            m[i][j] -= v;
                        }
                    }
                }
                continue;
            }
            let pair = active.iter().enumerate().find_map(|(x, &i)| {
                active[x + 1..].iter().find(|&&j| !m[i][j].is_zero()).map(|&j| (i, j))
            });
            let Some((i, j)) = pair else {
                out.nullity += active.len();
                break;
            };
            out.positive += 1;
            out.negative += 1;
            active.retain(|&k| k != i && k != j);
            let c = m[i][j].clone();
            for &k in &active {
                for &l in &active {
                    let v = (&m[k][i] * &m[j][l] + &m[k][j] * &m[i][l]) / &c;
                    if !v.is_zero() {
                        m[k][l] -= v;
                    }
                }
            }
        }
        out
    }

    /// Solves `M x = b` by Gaussian elimination over the rationals.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.n;
        let mut m = self.rational_rows();
        for (row, x) in m.iter_mut().zip(b) {
            row.push(x.clone());
        }
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Err(Error::Singular { nullity: self.inertia().nullity });
            };
            m.swap(k, p);
            let pivot_row = m[k].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = &row[k] / &pivot_row[k];
                for j in k..=n {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &f * &pivot_row[j];
                    }
                }
            }
        }
        Ok((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
    }

    /// Gauss-Jordan inverse over the rationals.
    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.n;
        let mut m = self.rational_rows();
        for (i, row) in m.iter_mut().enumerate() {
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        }
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Err(Error::Singular { nullity: self.inertia().nullity });
            };
            m.swap(k, p);
            let inv = m[k][k].recip();
            for x in m[k].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[k].clone();
            let nz: Vec<usize> = (0..2 * n).filter(|&j| !pivot_row[j].is_zero()).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for &j in &nz {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
    }
}
