//! Characteristic polynomials and rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Q;

/// Coefficients `c_0, ..., c_n` of `det(λ I - a)` by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for (i, row) in next.iter_mut().enumerate() {
            for (l, ail) in a[i].iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (j, x) in row.iter_mut().enumerate() {
                    if !m[l][j].is_zero() {
                        *x += ail * &m[l][j];
                    }
                }
            }
            row[i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            for (l, ail) in ai.iter().enumerate() {
                tr += ail * &m[l][i];
            }
        }
        c[n - k] = -tr / Q::from_integer(BigInt::from(k));
    }
    c
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u128()?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

fn eval(c: &[Q], x: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, ci| acc * x + ci)
}

/// Distinct rational roots of `Σ c_i λ^i`, ascending.
///
/// Returns `None` when a coefficient is too large for exhaustive divisor search.
pub fn rational_roots(c: &[Q]) -> Option<Vec<Q>> {
    let mut c: Vec<Q> = c.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(Q::zero());
        while c[0].is_zero() {
            c.remove(0);
        }
    }
    if c.len() > 1 {
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().expect("nonempty"))?;
        let mut cands: Vec<Q> = Vec::new();
        for p in &ps {
            for q in &qs {
                let r = Q::new(p.clone(), q.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        roots.extend(cands.into_iter().filter(|r| eval(&c, r).is_zero()));
    }
    roots.sort();
    Some(roots)
}
