use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use num_bigint::BigInt;

use super::{LatticeError, Operator, ScaledOperator, StateSpace, Vector};
use crate::linalg::{as_count, fmt_q, SparseMatrix, Q};
use crate::report::Report;
use crate::surface::regularity_check;

/// How operator identities are compared.
///
/// An identity touching the factors `F` is checked on every basis vector of `⊗_F`
/// (other digits zero) when that space has at most `full_limit` vectors, and on
/// `samples` seeded random global basis vectors otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub full_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { full_limit: 4096, samples: 256, seed: 0 }
    }
}

fn basis(space: &StateSpace, support: &[usize], opts: &CheckOptions) -> (Vec<usize>, bool) {
    let layout = space.layout();
    let local: usize = support.iter().map(|&f| layout.dims()[f]).product();
    if local <= opts.full_limit {
        let vs = (0..local)
            .map(|mut l| {
                let mut idx = 0;
                for &f in support.iter().rev() {
                    let d = layout.dims()[f];
                    idx += (l % d) * layout.stride(f);
                    l /= d;
                }
                idx
            })
            .collect();
        (vs, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        ((0..opts.samples).map(|_| rng.gen_range(0..layout.total())).collect(), false)
    }
}

fn unit(i: usize) -> Vector {
    [(i, Q::one())].into_iter().collect()
}

fn chain(ops: &[&Operator], v: &Vector) -> Vector {
    ops.iter().fold(v.clone(), |acc, o| o.apply(&acc))
}

fn union(ops: &[&Operator]) -> Vec<usize> {
    let mut f: Vec<usize> = ops.iter().flat_map(|o| o.support()).collect();
    f.sort_unstable();
    f.dedup();
    f
}

fn describe(i: usize, a: &Vector, b: &Vector) -> String {
    let diff = a
        .iter()
        .map(|(k, x)| (*k, x.clone() - b.get(k).cloned().unwrap_or_else(Q::zero)))
        .chain(b.iter().filter(|(k, _)| !a.contains_key(k)).map(|(k, x)| (*k, -x.clone())))
        .find(|(_, d)| !d.is_zero());
    match diff {
        Some((k, d)) => format!("basis vector {i}: coordinate {k} differs by {}", fmt_q(&d)),
        None => format!("basis vector {i}"),
    }
}

/// A chain of operators, evaluated in machine integers when every piece scales.
struct Chain<'a> {
    ops: Vec<&'a Operator>,
    scaled: Option<(Vec<ScaledOperator>, Q)>,
}

impl<'a> Chain<'a> {
    fn new(ops: Vec<&'a Operator>) -> Self {
        let scaled = ops.iter().map(|o| ScaledOperator::new(o)).collect::<Option<Vec<_>>>().map(|s| {
            let total = s.iter().fold(BigInt::one(), |t, o| t * o.scale());
            (s, Q::from_integer(total))
        });
        Chain { ops, scaled }
    }

    fn apply(&self, i: usize) -> Vector {
        if let Some((ops, total)) = &self.scaled {
            let out = ops.iter().try_fold(vec![(i, 1i128)], |acc, o| if acc.is_empty() { Some(acc) } else { o.apply(&acc) });
            if let Some(v) = out {
                return v.into_iter().map(|(k, x)| (k, Q::from_integer(x.into()) / total)).collect();
            }
        }
        chain(&self.ops, &unit(i))
    }
}

/// First basis vector on which `lhs` and `Σ c · rhs` disagree (chains apply first to last).
fn compare(
    space: &StateSpace,
    lhs: &[&Operator],
    rhs: &[(Vec<&Operator>, Q)],
    opts: &CheckOptions,
) -> (Option<String>, bool) {
    let mut all: Vec<&Operator> = lhs.to_vec();
    for (ops, _) in rhs {
        all.extend(ops.iter().copied());
    }
    let (vs, exhaustive) = basis(space, &union(&all), opts);
    let left = Chain::new(lhs.to_vec());
    let right: Vec<(Chain, &Q)> = rhs.iter().map(|(ops, c)| (Chain::new(ops.clone()), c)).collect();
    let bad = vs.par_iter().find_map_first(|&i| {
        let a = left.apply(i);
        let mut b = Vector::new();
        for (ch, c) in &right {
            for (k, x) in ch.apply(i) {
                *b.entry(k).or_insert_with(Q::zero) += *c * x;
            }
        }
        b.retain(|_, x| !x.is_zero());
        (a != b).then(|| describe(i, &a, &b))
    });
    (bad, exhaustive)
}

fn record(r: &mut Report, name: String, outcome: (Option<String>, bool)) {
    let (bad, exhaustive) = outcome;
    if !exhaustive && bad.is_none() {
        r.warn(format!("{name}: checked on sampled basis vectors only"));
    }
    r.record(name, bad);
}

/// Idempotence of every `A_v` and `B_p` and their pairwise commutation.
///
/// Commutation is skipped with a warning on non-regular decompositions.
pub fn check_operators(space: &StateSpace, opts: &CheckOptions) -> Result<Report, LatticeError> {
    let set = space.operators()?;
    let labeled = set.labeled();
    let mut r = Report::new();
    for (name, op) in &labeled {
        record(&mut r, format!("{name} idempotent"), compare(space, &[op, op], &[(vec![op], Q::one())], opts));
    }
    let regular = regularity_check(&space.surface().cells);
    if !regular.all_passed() {
        let why: Vec<String> = regular.failures().filter_map(|c| c.detail.clone()).collect();
        r.warn(format!("commutation not checked on a non-regular decomposition: {}", why.join("; ")));
        return Ok(r);
    }
    for (i, (ni, oi)) in labeled.iter().enumerate() {
        for (nj, oj) in &labeled[i + 1..] {
            let outcome = compare(space, &[oi, oj], &[(vec![oj, oi], Q::one())], opts);
            record(&mut r, format!("{ni} {nj} commute"), outcome);
        }
    }
    Ok(r)
}

/// `B_p` does not depend on the site it is built from.
pub fn check_site_independence(space: &StateSpace, opts: &CheckOptions) -> Result<Report, LatticeError> {
    let mut r = Report::new();
    for p in space.surface().cells.internal_faces() {
        let base = space.default_base(p);
        let reference = space.plaquette_operator(p, base)?;
        for site in space.plaquette_sites(p) {
            let h = site.right_half_edge;
            if h == base || space.locate_site(h).is_none() {
                continue;
            }
            let other = space.plaquette_operator(p, h)?;
            let outcome = compare(space, &[&reference], &[(vec![&other], Q::one())], opts);
            record(&mut r, format!("B_{p} at half-edge {base} equals B_{p} at half-edge {h}"), outcome);
        }
    }
    Ok(r)
}

fn delta(i: usize) -> Vec<(usize, Q)> {
    vec![(i, Q::one())]
}

/// The straightening relation `k·f = Σ c f'·k'` of every `C_v` holds for the
/// left action on `Z_v` and, reversed, for the right action on the edges.
///
/// Sites whose plaquette meets the vertex at several corners are skipped with a
/// warning: their right action reaches edges that are not adjacent to the site.
pub fn check_straightening_representation(space: &StateSpace, opts: &CheckOptions) -> Result<Report, LatticeError> {
    let cells = &space.surface().cells;
    let mut r = Report::new();
    for v in 0..cells.n_vertices() {
        let cv = space.vertex_algebra(v);
        let z = space.vertex_module(v);
        let darts = space.vertex_darts(v).to_vec();
        let mut left_bad = None;
        let mut right_bad = None;
        for (i, _) in darts.iter().enumerate() {
            let right_k: Vec<Operator> = (0..cv.edge_algebra(i).dim())
                .map(|k| Operator::Product(vec![space.vertex_right(v, i, k)]))
                .collect();
            for &base in &darts {
                let Some((_, s)) = space.locate_site(base) else { continue };
                let p = cells.site_of(base).plaquette;
                let corners = cells.faces()[p].iter().filter(|&&d| cells.vertex_of(d) == v).count();
                if corners > 1 {
                    if i == 0 {
                        r.warn(format!("vertex {v} site {s}: plaquette {p} meets the vertex {corners} times, straightening not checked"));
                    }
                    continue;
                }
                let right_f: Vec<Operator> = (0..cv.site_algebra(s).dim())
                    .map(|f| space.plaquette_right(p, base, &delta(f)))
                    .collect::<Result<_, _>>()?;
                for (k, rk) in right_k.iter().enumerate() {
                    for (f, rf) in right_f.iter().enumerate() {
                        let terms = cv.straighten(i, k, s, f);
                        if left_bad.is_none() {
                            let lhs = z.edge_action(i, k).mul(z.site_action(s, f));
                            let rhs = terms.iter().fold(SparseMatrix::zeros(z.dim(), z.dim()), |acc, (f2, k2, c)| {
                                acc.add_scaled(&z.site_action(s, *f2).mul(z.edge_action(i, *k2)), c)
                            });
                            if lhs != rhs {
                                left_bad = Some(format!("half-edge {} basis {k}, site {s} basis {f}", darts[i]));
                            }
                        }
                        if right_bad.is_none() {
                            let rhs: Vec<(Vec<&Operator>, Q)> =
                                terms.iter().map(|(f2, k2, c)| (vec![&right_f[*f2], &right_k[*k2]], c.clone())).collect();
                            let (bad, _) = compare(space, &[rk, rf], &rhs, opts);
                            right_bad = bad.map(|d| format!("half-edge {} basis {k}, site {s} basis {f}: {d}", darts[i]));
                        }
                    }
                }
            }
        }
        r.record(format!("vertex {v} left straightening"), left_bad);
        r.record(format!("vertex {v} right straightening"), right_bad);
    }
    Ok(r)
}

/// `H = Σ_v (1 - A_v) + Σ_p (1 - B_p)` as a matrix.
pub fn hamiltonian(space: &StateSpace, limit: usize) -> Result<SparseMatrix, LatticeError> {
    let n = space.total_dim();
    if n > limit {
        return Err(LatticeError::Unsupported(format!("state space of dimension {n} exceeds {limit}")));
    }
    let set = space.operators()?;
    let labeled = set.labeled();
    let count = Q::from_integer((labeled.len() as i64).into());
    let mut h = SparseMatrix::identity(n).scale(&count);
    for (_, op) in labeled {
        h = h.sub(&op.to_matrix(n));
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroundMethod {
    /// `tr(Π A_v Π B_p)`.
    Trace,
    /// Kernel of the materialized Hamiltonian.
    Kernel,
    /// Both, required to agree.
    Both,
}

impl GroundMethod {
    pub fn name(self) -> &'static str {
        match self {
            GroundMethod::Trace => "trace",
            GroundMethod::Kernel => "kernel",
            GroundMethod::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundDimension {
    pub dimension: usize,
    pub method: GroundMethod,
}

fn dot<T: Copy + Default>(a: &[(usize, T)], b: &[(usize, T)], mut add: impl FnMut(T, T, T) -> Option<T>) -> Option<T> {
    let (mut x, mut y, mut s) = (0, 0, T::default());
    while x < a.len() && y < b.len() {
        match a[x].0.cmp(&b[y].0) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                s = add(s, a[x].1, b[y].1)?;
                x += 1;
                y += 1;
            }
        }
    }
    Some(s)
}

/// The trace in machine integers; `None` if some intermediate value overflows.
fn scaled_trace(n: usize, left: &[&Operator], right: &[&Operator]) -> Option<Q> {
    let scale = |ops: &[&Operator]| ops.iter().map(|o| ScaledOperator::new(o)).collect::<Option<Vec<_>>>();
    let (left, right) = (scale(left)?, scale(right)?);
    let run = |ops: &[ScaledOperator], j: usize| {
        ops.iter().try_fold(vec![(j, 1i128)], |acc, o| if acc.is_empty() { Some(acc) } else { o.apply(&acc) })
    };
    let sum = (0..n)
        .into_par_iter()
        .map(|j| {
            let a = run(&left, j)?;
            if a.is_empty() {
                return Some(0);
            }
            let b = run(&right, j)?;
            dot(&a, &b, |s, x, y| s.checked_add(x.checked_mul(y)?))
        })
        .try_reduce(|| 0i128, |a, b| a.checked_add(b))?;
    let total = left.iter().chain(&right).fold(BigInt::one(), |t, o| t * o.scale());
    Some(Q::new(sum.into(), total))
}

fn rational_trace(n: usize, left: &[&Operator], right: &[&Operator]) -> Q {
    (0..n)
        .into_par_iter()
        .map(|j| {
            let e = unit(j);
            let a = chain(left, &e);
            if a.is_empty() {
                return Q::zero();
            }
            let b = chain(right, &e);
            a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).fold(Q::zero(), |s, t| s + t)
        })
        .reduce(Q::zero, |a, b| a + b)
}

/// `tr(Π A_v Π B_p)`, summed as `Σ_j ⟨(Π A)ᵀ e_j, (Π B) e_j⟩`.
pub fn projector_trace(space: &StateSpace) -> Result<Q, LatticeError> {
    let n = space.total_dim();
    let set = space.operators()?;
    let left: Vec<Operator> = set.vertex_ops.iter().rev().map(Operator::transpose).collect();
    let left: Vec<&Operator> = left.iter().collect();
    let right: Vec<&Operator> = set.plaquette_ops.iter().map(|(_, _, o)| o).collect();
    Ok(scaled_trace(n, &left, &right).unwrap_or_else(|| rational_trace(n, &left, &right)))
}

/// Dimension of the ground space by the requested method.
///
/// The kernel method materializes the Hamiltonian and requires a state space of
/// at most `kernel_limit` vectors.
pub fn ground_space_dimension(
    space: &StateSpace,
    method: GroundMethod,
    kernel_limit: usize,
) -> Result<GroundDimension, LatticeError> {
    let trace = || -> Result<usize, LatticeError> {
        let t = projector_trace(space)?;
        as_count(&t).ok_or_else(|| LatticeError::NonIntegerTrace(fmt_q(&t)))
    };
    let kernel = || -> Result<usize, LatticeError> { Ok(hamiltonian(space, kernel_limit)?.kernel_dimension()) };
    let dimension = match method {
        GroundMethod::Trace => trace()?,
        GroundMethod::Kernel => kernel()?,
        GroundMethod::Both => {
            let (t, k) = (trace()?, kernel()?);
            if t != k {
                return Err(LatticeError::GroundMismatch { trace: t, kernel: k });
            }
            t
        }
    };
    Ok(GroundDimension { dimension, method })
}

/// Trace and kernel when the state space has at most `kernel_limit` vectors, trace alone otherwise.
pub fn ground_dimension_auto(space: &StateSpace, kernel_limit: usize) -> Result<GroundDimension, LatticeError> {
    let method = if space.total_dim() <= kernel_limit { GroundMethod::Both } else { GroundMethod::Trace };
    ground_space_dimension(space, method, kernel_limit)
}
