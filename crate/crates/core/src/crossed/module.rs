use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::vertex::{Element, VertexAlgebra};
use super::CrossedError;
use crate::hopf::{dual_hopf, haar_integral, SVec};
use crate::linalg::{Echelon, ReducedBasis, SparseMatrix, Q};
use crate::report::Report;

/// A finite-dimensional left `C_v`-module given by its factor generators.
///
/// `site_gens[s][f]` represents the basis element `f` of `H_s*`, `edge_gens[h][k]`
/// the basis element `k` of the half-edge factor `h`. Matrices act on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexModule {
    dim: usize,
    site_gens: Vec<Vec<SparseMatrix>>,
    edge_gens: Vec<Vec<SparseMatrix>>,
}

impl VertexModule {
    pub fn from_generators(
        cv: &VertexAlgebra,
        dim: usize,
        site_gens: Vec<Vec<SparseMatrix>>,
        edge_gens: Vec<Vec<SparseMatrix>>,
    ) -> Result<Self, CrossedError> {
        let ns = cv.n_sites();
        if site_gens.len() != ns || edge_gens.len() != cv.n_edges() {
            return Err(CrossedError::Malformed("generator count does not match the vertex algebra".into()));
        }
        for (f, gens) in site_gens.iter().chain(&edge_gens).enumerate() {
            if gens.len() != cv.factor_dims()[f] {
                return Err(CrossedError::Malformed(format!("factor {f} has {} generators", gens.len())));
            }
            if gens.iter().any(|m| m.rows() != dim || m.cols() != dim) {
                return Err(CrossedError::Malformed(format!("factor {f} has a generator of the wrong size")));
            }
        }
        Ok(VertexModule { dim, site_gens, edge_gens })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn site_action(&self, s: usize, f: usize) -> &SparseMatrix {
        &self.site_gens[s][f]
    }

    pub fn edge_action(&self, h: usize, k: usize) -> &SparseMatrix {
        &self.edge_gens[h][k]
    }

    fn combine(gens: &[SparseMatrix], dim: usize, x: &[(usize, Q)]) -> SparseMatrix {
        x.iter().fold(SparseMatrix::zeros(dim, dim), |acc, (i, c)| acc.add_scaled(&gens[*i], c))
    }

    /// Action of an element of `H_s*`.
    pub fn site_element(&self, s: usize, f: &[(usize, Q)]) -> SparseMatrix {
        Self::combine(&self.site_gens[s], self.dim, f)
    }

    /// Action of an element of the half-edge factor `h`.
    pub fn edge_element(&self, h: usize, k: &[(usize, Q)]) -> SparseMatrix {
        Self::combine(&self.edge_gens[h], self.dim, k)
    }

    /// Action of an element of `C_v`; `b = F ⊗ k` acts as `ρ(F) ρ(k)`.
    pub fn act(&self, cv: &VertexAlgebra, x: &Element) -> SparseMatrix {
        let ns = cv.n_sites();
        let mut out = SparseMatrix::zeros(self.dim, self.dim);
        for (i, c) in x {
            let d = cv.digits(*i);
            let mut m = SparseMatrix::identity(self.dim);
            for (s, f) in d[..ns].iter().enumerate() {
                m = m.mul(&self.site_gens[s][*f]);
            }
            for (h, k) in d[ns..].iter().enumerate() {
                m = m.mul(&self.edge_gens[h][*k]);
            }
            out = out.add_scaled(&m, c);
        }
        out
    }
}

fn factor_report(gens: &[SparseMatrix], alg: &crate::hopf::Algebra, dim: usize, tag: &str) -> (Option<String>, Option<String>) {
    let mut mult = None;
    'm: for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = gens[i].mul(&gens[j]);
            let rhs = VertexModule::combine(gens, dim, alg.mul_basis(i, j));
            if lhs != rhs {
                mult = Some(format!("{tag}: ρ({})ρ({}) ≠ ρ({0}{1})", alg.label(i), alg.label(j)));
                break 'm;
            }
        }
    }
    let unit: SVec = alg.unit().iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    let unital = (!VertexModule::combine(gens, dim, &unit).is_identity()).then(|| format!("{tag}: ρ(1) ≠ 1"));
    (mult, unital)
}

/// Checks that the generators define a `C_v`-module: each factor is represented,
/// distinct site factors commute, distinct edge factors commute, and every
/// straightening relation `k f = Σ f' k'` holds.
pub fn validate_vertex_module(cv: &VertexAlgebra, m: &VertexModule) -> Report {
    let mut r = Report::new();
    let ns = cv.n_sites();
    let mut mult = None;
    let mut unital = None;
    for s in 0..ns {
        let (a, b) = factor_report(&m.site_gens[s], cv.site_algebra(s), m.dim, &format!("site {s}"));
        mult = mult.or(a);
        unital = unital.or(b);
    }
    for h in 0..cv.n_edges() {
        let (a, b) = factor_report(&m.edge_gens[h], cv.edge_algebra(h), m.dim, &format!("half-edge {h}"));
        mult = mult.or(a);
        unital = unital.or(b);
    }
    r.record("factor multiplication", mult);
    r.record("factor unit", unital);

    let mut commute = None;
    let families: Vec<(&str, &Vec<Vec<SparseMatrix>>)> = vec![("site", &m.site_gens), ("half-edge", &m.edge_gens)];
    'c: for (tag, gens) in families {
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                for x in &gens[a] {
                    for y in &gens[b] {
                        if x.mul(y) != y.mul(x) {
                            commute = Some(format!("{tag} factors {a} and {b} do not commute"));
                            break 'c;
                        }
                    }
                }
            }
        }
    }
    r.record("factors commute", commute);

    let mut straight = None;
    's: for h in 0..cv.n_edges() {
        for k in 0..cv.factor_dims()[ns + h] {
            for s in 0..ns {
                for f in 0..cv.factor_dims()[s] {
                    let lhs = m.edge_gens[h][k].mul(&m.site_gens[s][f]);
                    let rhs = cv
                        .straighten(h, k, s, f)
                        .into_iter()
                        .fold(SparseMatrix::zeros(m.dim, m.dim), |acc, (g, k0, c)| {
                            acc.add_scaled(&m.site_gens[s][g].mul(&m.edge_gens[h][k0]), &c)
                        });
                    if lhs != rhs {
                        straight = Some(format!(
                            "half-edge {h} basis {} against site {s} basis {}",
                            cv.edge_algebra(h).label(k),
                            cv.site_algebra(s).label(f)
                        ));
                        break 's;
                    }
                }
            }
        }
    }
    r.record("straightening", straight);
    r
}

const CHARACTER_SEARCH_LIMIT: usize = 1 << 16;

/// A one-dimensional module from characters of every factor, if one exists.
///
/// Searches all combinations of factor characters exhaustively, trying site
/// characters that do not vanish on the Haar integral first.
pub fn vacuum_module(cv: &VertexAlgebra) -> Result<VertexModule, CrossedError> {
    let ns = cv.n_sites();
    let nf = ns + cv.n_edges();
    let mut chars: Vec<Vec<Vec<Q>>> = Vec::with_capacity(nf);
    for f in 0..nf {
        let alg = if f < ns { cv.site_algebra(f) } else { cv.edge_algebra(f - ns) };
        let mut c = alg
            .characters()
            .ok_or_else(|| CrossedError::Malformed(format!("character search failed on factor {f}")))?;
        if f < ns {
            let ell = haar_integral(&dual_hopf(cv.site(f).base()))?.element;
            c.sort_by_key(|chi| chi.iter().zip(&ell).map(|(x, y)| x * y).sum::<Q>().is_zero());
        }
        if c.is_empty() {
            return Err(CrossedError::NoCharacter);
        }
        chars.push(c);
    }
    let total = chars.iter().try_fold(1usize, |a, c| a.checked_mul(c.len()).filter(|&t| t <= CHARACTER_SEARCH_LIMIT));
    let total = total.ok_or_else(|| {
        CrossedError::Malformed(format!("more than {CHARACTER_SEARCH_LIMIT} character combinations"))
    })?;
    let pick = |n: usize| -> Vec<usize> {
        let mut rest = n;
        chars
            .iter()
            .map(|c| {
                let i = rest % c.len();
                rest /= c.len();
                i
            })
            .collect()
    };
    for n in 0..total {
        let sel = pick(n);
        let chi = |f: usize, i: usize| -> &Q { &chars[f][sel[f]][i] };
        let ok = (0..cv.n_edges()).all(|h| {
            (0..cv.factor_dims()[ns + h]).all(|k| {
                (0..ns).all(|s| {
                    (0..cv.factor_dims()[s]).all(|f| {
                        let lhs = chi(ns + h, k) * chi(s, f);
                        let rhs: Q = cv
                            .straighten(h, k, s, f)
                            .into_iter()
                            .map(|(g, k0, c)| c * chi(s, g) * chi(ns + h, k0))
                            .sum();
                        lhs == rhs
                    })
                })
            })
        });
        if ok {
            let one_by_one = |x: &Q| SparseMatrix::from_triplets(1, 1, [(0, 0, x.clone())]);
            let gens = |f: usize| -> Vec<SparseMatrix> { chars[f][sel[f]].iter().map(one_by_one).collect() };
            return VertexModule::from_generators(cv, 1, (0..ns).map(gens).collect(), (ns..nf).map(gens).collect());
        }
    }
    Err(CrossedError::NoCharacter)
}

fn to_sparse(x: &Element) -> Vec<(usize, Q)> {
    x.iter().map(|(i, v)| (*i, v.clone())).collect()
}

fn from_sparse(x: &[(usize, Q)]) -> Element {
    x.iter().cloned().collect()
}

/// Left regular module `C_v` on its own basis.
pub fn regular_module(cv: &VertexAlgebra) -> Result<VertexModule, CrossedError> {
    const LIMIT: usize = 4096;
    let n = cv.dim();
    if n > LIMIT {
        return Err(CrossedError::Malformed(format!("regular module of dimension {n} exceeds {LIMIT}")));
    }
    let ns = cv.n_sites();
    let basis = |j: usize| -> Element { [(j, Q::one())].into_iter().collect() };
    let site_gens = (0..ns)
        .map(|s| {
            (0..cv.factor_dims()[s])
                .map(|f| SparseMatrix::from_columns(n, (0..n).map(|j| to_sparse(&cv.left_mul_site(s, f, &basis(j)))).collect()))
                .collect()
        })
        .collect();
    let edge_gens = (0..cv.n_edges())
        .map(|h| {
            (0..cv.factor_dims()[ns + h])
                .map(|k| SparseMatrix::from_columns(n, (0..n).map(|j| to_sparse(&cv.left_mul_edge(h, k, &basis(j)))).collect()))
                .collect()
        })
        .collect();
    VertexModule::from_generators(cv, n, site_gens, edge_gens)
}

/// The left ideal `C_v x`, spanned by closing `x` under the factor generators.
///
/// Returns the module together with its basis (rows of a reduced echelon form).
pub fn ideal_module(cv: &VertexAlgebra, x: &Element) -> Result<(VertexModule, ReducedBasis), CrossedError> {
    let ns = cv.n_sites();
    let apply = |g: (bool, usize, usize), v: &Element| -> Element {
        match g {
            (true, s, f) => cv.left_mul_site(s, f, v),
            (false, h, k) => cv.left_mul_edge(h, k, v),
        }
    };
    let mut gens: Vec<(bool, usize, usize)> = Vec::new();
    for s in 0..ns {
        gens.extend((0..cv.factor_dims()[s]).map(|f| (true, s, f)));
    }
    for h in 0..cv.n_edges() {
        gens.extend((0..cv.factor_dims()[ns + h]).map(|k| (false, h, k)));
    }
    let mut ech = Echelon::new();
    let mut found: Vec<Element> = Vec::new();
    if ech.insert(&to_sparse(x)) {
        found.push(x.clone());
    }
    let mut next = 0;
    while next < found.len() {
        let v = found[next].clone();
        next += 1;
        for g in &gens {
            let w = apply(*g, &v);
            if ech.insert(&to_sparse(&w)) {
                found.push(w);
            }
        }
    }
    let basis = ReducedBasis::span(found.iter().map(to_sparse));
    let n = basis.dim();
    let matrix = |g: (bool, usize, usize)| -> Result<SparseMatrix, CrossedError> {
        let mut cols = Vec::with_capacity(n);
        for row in basis.rows() {
            let w = apply(g, &from_sparse(row));
            let c = basis
                .coordinates(&to_sparse(&w))
                .ok_or_else(|| CrossedError::ModuleInvalid("ideal is not closed under the generators".into()))?;
            cols.push(c);
        }
        Ok(SparseMatrix::from_columns(n, cols))
    };
    let site_gens = (0..ns)
        .map(|s| (0..cv.factor_dims()[s]).map(|f| matrix((true, s, f))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let edge_gens = (0..cv.n_edges())
        .map(|h| (0..cv.factor_dims()[ns + h]).map(|k| matrix((false, h, k))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok((VertexModule::from_generators(cv, n, site_gens, edge_gens)?, basis))
}

/// `e = E D` with `E = ⊗_s ℓ_s` the Haar integrals of the site algebras and `D`
/// the average of the basis tuples of the edge factors that coact by a single
/// term `k ↦ l ⊗ k ⊗ r` and commute with `E`.
pub fn unit_idempotent(cv: &VertexAlgebra) -> Result<Element, CrossedError> {
    let ns = cv.n_sites();
    let mut parts: Vec<SVec> = Vec::with_capacity(cv.factor_dims().len());
    for s in 0..ns {
        let ell = haar_integral(&dual_hopf(cv.site(s).base()))?;
        parts.push(ell.element.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
    }
    for h in 0..cv.n_edges() {
        parts.push(cv.edge_algebra(h).unit().iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect());
    }
    let big_e = cv.tensor(&parts);

    let candidates: Vec<Vec<usize>> = (0..cv.n_edges())
        .map(|h| {
            let label = &cv.edge(h).label;
            (0..label.dim())
                .filter(|&k| matches!(label.coaction_basis(k), [(_, k0, _, c)] if *k0 == k && c.is_one()))
                .collect()
        })
        .collect();
    let total: usize = candidates.iter().map(|c| c.len()).product();
    let mut commuting: BTreeSet<Vec<usize>> = BTreeSet::new();
    for n in 0..total {
        let mut rest = n;
        let mut tuple = Vec::with_capacity(candidates.len());
        for c in &candidates {
            tuple.push(c[rest % c.len()]);
            rest /= c.len();
        }
        let g = edge_tuple(cv, &tuple);
        if cv.mul(&g, &big_e) == cv.mul(&big_e, &g) {
            commuting.insert(tuple);
        }
    }
    let gamma = sign_free_subgroup(cv, &commuting);
    let e = if gamma.is_empty() {
        big_e
    } else {
        let mut d = Element::new();
        let w = Q::one() / Q::from_integer(gamma.len().into());
        for t in &gamma {
            for (i, c) in edge_tuple(cv, t) {
                *d.entry(i).or_insert_with(Q::zero) += c * &w;
            }
        }
        d.retain(|_, v| !v.is_zero());
        cv.mul(&big_e, &d)
    };
    if e.is_empty() {
        return Err(CrossedError::NotIdempotent("e = 0".into()));
    }
    if cv.mul(&e, &e) != e {
        return Err(CrossedError::NotIdempotent("e² ≠ e".into()));
    }
    Ok(e)
}

/// `1 ⊗ b_{k_1} ⊗ … ⊗ b_{k_n}`.
fn edge_tuple(cv: &VertexAlgebra, tuple: &[usize]) -> Element {
    let parts: Vec<SVec> = (0..cv.n_sites())
        .map(|s| site_unit(cv, s))
        .chain(tuple.iter().map(|&k| vec![(k, Q::one())]))
        .collect();
    cv.tensor(&parts)
}

/// Product of basis tuples, if it is again a basis tuple with coefficient one.
fn tuple_product(cv: &VertexAlgebra, a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(h, (x, y))| match cv.edge_algebra(h).mul_basis(*x, *y) {
            [(z, c)] if c.is_one() => Some(*z),
            _ => None,
        })
        .collect()
}

/// Greedy maximal subgroup of `allowed` containing the unit tuple on which the
/// product has no scalar factors. Empty if the unit is not a basis tuple.
fn sign_free_subgroup(cv: &VertexAlgebra, allowed: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let unit: Option<Vec<usize>> = (0..cv.n_edges())
        .map(|h| match cv.edge_algebra(h).unit().iter().enumerate().filter(|(_, v)| !v.is_zero()).collect::<Vec<_>>()[..] {
            [(i, c)] if c.is_one() => Some(i),
            _ => None,
        })
        .collect();
    let mut group = BTreeSet::new();
    let Some(unit) = unit.filter(|u| allowed.contains(u)) else {
        return group;
    };
    group.insert(unit);
    for g in allowed {
        if group.contains(g) {
            continue;
        }
        let mut trial = group.clone();
        trial.insert(g.clone());
        let closed = loop {
            let members: Vec<Vec<usize>> = trial.iter().cloned().collect();
            let mut grew = false;
            let mut ok = true;
            'p: for a in &members {
                for b in &members {
                    match tuple_product(cv, a, b) {
                        Some(p) if allowed.contains(&p) => grew |= trial.insert(p),
                        _ => {
                            ok = false;
                            break 'p;
                        }
                    }
                }
            }
            if !ok {
                break false;
            }
            if !grew {
                break true;
            }
        };
        if closed {
            group = trial;
        }
    }
    group
}

fn site_unit(cv: &VertexAlgebra, s: usize) -> SVec {
    cv.site_algebra(s).unit().iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect()
}

/// `C_v e` for the idempotent of [`unit_idempotent`].
pub fn unit_module(cv: &VertexAlgebra) -> Result<VertexModule, CrossedError> {
    let e = unit_idempotent(cv)?;
    Ok(ideal_module(cv, &e)?.0)
}
