//! Fraction-free sparse elimination.
//!
//! Rows are scaled to primitive integer vectors; a row is reduced against an
//! existing pivot row `p` by `r <- p_lead * r - r_lead * p` and then divided by
//! the gcd of its entries, so no rational arithmetic occurs during elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Q;
use super::sparse::SparseMatrix;

type IntRow = Vec<(usize, BigInt)>;

fn primitive(row: &[(usize, Q)]) -> IntRow {
    let mut l = BigInt::one();
    for (_, v) in row {
        l = l.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .map(|(j, v)| (*j, v.numer() * (&l / v.denom())))
        .collect();
    normalize(&mut out);
    out
}

fn normalize(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a * r - b * p` with both rows sorted by column.
fn combine(r: &IntRow, a: &BigInt, p: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut x, mut y) = (0, 0);
    while x < r.len() || y < p.len() {
        if y == p.len() || (x < r.len() && r[x].0 < p[y].0) {
            out.push((r[x].0, a * &r[x].1));
            x += 1;
        } else if x == r.len() || p[y].0 < r[x].0 {
            out.push((p[y].0, -(b * &p[y].1)));
            y += 1;
        } else {
            let v = a * &r[x].1 - b * &p[y].1;
            if !v.is_zero() {
                out.push((r[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    out
}

/// Row echelon basis keyed by leading column.
#[derive(Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; returns `true` if it was independent.
    pub fn insert(&mut self, row: &[(usize, Q)]) -> bool {
        if row.is_empty() {
            return false;
        }
        let mut r = primitive(row);
        loop {
            let lead = r[0].0;
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, r);
                    return true;
                }
                Some(p) => {
                    let (a, b) = (p[0].1.clone(), r[0].1.clone());
                    let g = a.gcd(&b);
                    r = combine(&r, &(&a / &g), p, &(&b / &g));
                    if r.is_empty() {
                        return false;
                    }
                    normalize(&mut r);
                }
            }
        }
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new();
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    e.rank()
}

/// Reduced row echelon basis of a span, with coordinates of members.
#[derive(Debug, Clone, Default)]
pub struct ReducedBasis {
    rows: Vec<Vec<(usize, Q)>>,
    pivots: Vec<usize>,
}

fn sub_scaled(r: &[(usize, Q)], s: &Q, p: &[(usize, Q)]) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut x, mut y) = (0, 0);
    while x < r.len() || y < p.len() {
        if y == p.len() || (x < r.len() && r[x].0 < p[y].0) {
            out.push(r[x].clone());
            x += 1;
        } else if x == r.len() || p[y].0 < r[x].0 {
            out.push((p[y].0, -(s * &p[y].1)));
            y += 1;
        } else {
            let v = &r[x].1 - s * &p[y].1;
            if !v.is_zero() {
                out.push((r[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    out
}

impl ReducedBasis {
    /// Spans the given sparse vectors (sorted by index, no zeros).
    pub fn span<I: IntoIterator<Item = Vec<(usize, Q)>>>(vectors: I) -> Self {
        let mut pivots: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for mut r in vectors {
            while let Some((lead, x)) = r.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => r = sub_scaled(&r, &x, p),
                    None => {
                        let inv = Q::one() / x;
                        for (_, v) in r.iter_mut() {
                            *v *= &inv;
                        }
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        let keys: Vec<usize> = pivots.keys().copied().collect();
        for &lead in keys.iter().rev() {
            let mut row = pivots[&lead].clone();
            let others: Vec<usize> = row[1..].iter().map(|(c, _)| *c).filter(|c| pivots.contains_key(c)).collect();
            for c in others {
                if let Some(x) = row.iter().find(|(j, _)| *j == c).map(|(_, v)| v.clone()) {
                    row = sub_scaled(&row, &x, &pivots[&c]);
                }
            }
            pivots.insert(lead, row);
        }
        let (pivots, rows): (Vec<usize>, Vec<_>) = pivots.into_iter().unzip();
        ReducedBasis { rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Q)>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coefficients of `v` in the basis rows, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[(usize, Q)]) -> Option<Vec<(usize, Q)>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::new();
        for (i, p) in self.pivots.iter().enumerate() {
            if let Some(x) = rest.iter().find(|(j, _)| j == p).map(|(_, x)| x.clone()) {
                rest = sub_scaled(&rest, &x, &self.rows[i]);
                coords.push((i, x));
            }
        }
        rest.is_empty().then_some(coords)
    }
}
