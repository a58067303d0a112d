use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{BalancingAlgebra, CrossedError};
use crate::comodule::Bicomodule;
use crate::hopf::{signed, Algebra, Hopf, SVec};
use crate::linalg::{guarded_product, max_total_dimension, Q};

/// Element of a vertex algebra: flat basis index to coefficient.
pub type Element = BTreeMap<usize, Q>;

/// Plaquette label and the signs `ε' = ε(e'_p)`, `ε = ε(e_p)` of one site.
#[derive(Debug, Clone)]
pub struct SiteSpec {
    pub hopf: Arc<Hopf>,
    pub eps_left: i8,
    pub eps_right: i8,
}

/// A half-edge factor `K_e^{ε(e)}`.
///
/// The left coaction leg feeds the `H^ε` slot of `left_site`, the right leg the
/// `(H^{ε'})^{cop}` slot of `right_site`; `None` marks an external face, whose
/// leg must be trivial.
#[derive(Debug, Clone)]
pub struct EdgeFactor {
    pub label: Bicomodule,
    pub left_site: Option<usize>,
    pub right_site: Option<usize>,
}

/// `C_v = (⊗_p H_p*) ⋊ (⊗_e K_e^{ε(e)})`, kept factorized.
///
/// Basis indices are mixed-radix over the site factors followed by the edge
/// factors, first factor most significant. Multiplication is evaluated lazily
/// one generator at a time.
#[derive(Debug, Clone)]
pub struct VertexAlgebra {
    sites: Vec<BalancingAlgebra>,
    edges: Vec<EdgeFactor>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

fn hopf_mismatch(what: String) -> CrossedError {
    CrossedError::HopfMismatch(what)
}

impl VertexAlgebra {
    pub fn new(sites: Vec<SiteSpec>, edges: Vec<EdgeFactor>) -> Result<Self, CrossedError> {
        for (s, _) in sites.iter().enumerate() {
            let l = edges.iter().filter(|e| e.left_site == Some(s)).count();
            let r = edges.iter().filter(|e| e.right_site == Some(s)).count();
            if l != 1 || r != 1 {
                return Err(CrossedError::Malformed(format!(
                    "site {s} receives {l} left legs and {r} right legs, expected one of each"
                )));
            }
        }
        for (h, e) in edges.iter().enumerate() {
            match e.left_site {
                Some(s) => {
                    let site = sites.get(s).ok_or_else(|| CrossedError::Malformed(format!("no site {s}")))?;
                    if **e.label.left_hopf() != signed(&site.hopf, site.eps_right) {
                        return Err(hopf_mismatch(format!("left leg of half-edge {h} does not match site {s}")));
                    }
                }
                None if e.label.left_hopf().dim() != 1 => {
                    return Err(hopf_mismatch(format!("half-edge {h} has a nontrivial leg on an external face")));
                }
                None => {}
            }
            match e.right_site {
                Some(s) => {
                    let site = sites.get(s).ok_or_else(|| CrossedError::Malformed(format!("no site {s}")))?;
                    if **e.label.right_hopf() != signed(&site.hopf, site.eps_left) {
                        return Err(hopf_mismatch(format!("right leg of half-edge {h} does not match site {s}")));
                    }
                }
                None if e.label.right_hopf().dim() != 1 => {
                    return Err(hopf_mismatch(format!("half-edge {h} has a nontrivial leg on an external face")));
                }
                None => {}
            }
        }
        let balancing = sites
            .iter()
            .map(|s| BalancingAlgebra::new(s.hopf.clone(), s.eps_left, s.eps_right))
            .collect::<Result<Vec<_>, _>>()?;
        let dims: Vec<usize> = balancing
            .iter()
            .map(|b| b.dim())
            .chain(edges.iter().map(|e| e.label.dim()))
            .collect();
        let dim = guarded_product(&dims, max_total_dimension())?;
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Ok(VertexAlgebra { sites: balancing, edges, dims, strides, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn site(&self, s: usize) -> &BalancingAlgebra {
        &self.sites[s]
    }

    pub fn edge(&self, h: usize) -> &EdgeFactor {
        &self.edges[h]
    }

    /// The algebra `H_s*` of site `s`.
    pub fn site_algebra(&self, s: usize) -> &Algebra {
        self.sites[s].as_module_algebra().algebra()
    }

    pub fn edge_algebra(&self, h: usize) -> &Algebra {
        self.edges[h].label.algebra()
    }

    pub fn digits(&self, idx: usize) -> Vec<usize> {
        self.dims.iter().zip(&self.strides).map(|(d, s)| (idx / s) % d).collect()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    fn digit(&self, idx: usize, factor: usize) -> usize {
        (idx / self.strides[factor]) % self.dims[factor]
    }

    fn factor_unit(&self, factor: usize) -> SVec {
        let a = if factor < self.sites.len() {
            self.site_algebra(factor)
        } else {
            self.edge_algebra(factor - self.sites.len())
        };
        a.unit().iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Tensor product of per-factor sparse vectors.
    pub fn tensor(&self, parts: &[SVec]) -> Element {
        let mut acc: Vec<(usize, Q)> = vec![(0, Q::one())];
        for (f, part) in parts.iter().enumerate() {
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for (i, x) in &acc {
                for (j, y) in part {
                    next.push((i + j * self.strides[f], x * y));
                }
            }
            acc = next;
        }
        let mut out = Element::new();
        for (i, x) in acc {
            *out.entry(i).or_insert_with(Q::zero) += x;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn unit(&self) -> Element {
        let parts: Vec<SVec> = (0..self.dims.len()).map(|f| self.factor_unit(f)).collect();
        self.tensor(&parts)
    }

    /// `f ⊗ 1` with `f` in the site factor `s`.
    pub fn embed_site(&self, s: usize, f: &[(usize, Q)]) -> Element {
        let parts: Vec<SVec> =
            (0..self.dims.len()).map(|i| if i == s { f.to_vec() } else { self.factor_unit(i) }).collect();
        self.tensor(&parts)
    }

    /// `1 ⊗ k` with `k` in the half-edge factor `h`.
    pub fn embed_edge(&self, h: usize, k: &[(usize, Q)]) -> Element {
        let target = self.sites.len() + h;
        let parts: Vec<SVec> =
            (0..self.dims.len()).map(|i| if i == target { k.to_vec() } else { self.factor_unit(i) }).collect();
        self.tensor(&parts)
    }

    /// `(f ⊗ 1) · x` for a basis element `f` of site `s`.
    pub fn left_mul_site(&self, s: usize, f: usize, x: &Element) -> Element {
        let alg = self.site_algebra(s);
        let stride = self.strides[s];
        let mut out = Element::new();
        for (idx, c) in x {
            let cur = self.digit(*idx, s);
            let base = idx - cur * stride;
            for (z, w) in alg.mul_basis(f, cur) {
                *out.entry(base + z * stride).or_insert_with(Q::zero) += c * w;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// The site part of `(1 ⊗ k) · (f ⊗ 1)` for one coaction term with legs
    /// `l` (left) and `r` (right) at site `s`.
    fn leg_action(&self, h: usize, l: usize, r: usize, s: usize, f: usize) -> SVec {
        let e = &self.edges[h];
        let b = &self.sites[s];
        let mut v: SVec = vec![(f, Q::one())];
        if e.left_site == Some(s) {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (g, c) in &v {
                for (z, w) in b.act_right_slot(l, *g) {
                    *acc.entry(*z).or_insert_with(Q::zero) += c * w;
                }
            }
            v = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        if e.right_site == Some(s) {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (g, c) in &v {
                for (z, w) in b.act_left_slot(r, *g) {
                    *acc.entry(*z).or_insert_with(Q::zero) += c * w;
                }
            }
            v = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        v
    }

    /// Counit factor of the legs of a coaction term that do not land on a site.
    fn external_scalar(&self, h: usize, l: usize, r: usize) -> Q {
        let e = &self.edges[h];
        let mut s = Q::one();
        if e.left_site.is_none() {
            s *= &e.label.left_hopf().counit()[l];
        }
        if e.right_site.is_none() {
            s *= &e.label.right_hopf().counit()[r];
        }
        s
    }

    /// `(1 ⊗ k) · x` for a basis element `k` of half-edge `h`.
    pub fn left_mul_edge(&self, h: usize, k: usize, x: &Element) -> Element {
        let e = &self.edges[h];
        let ef = self.sites.len() + h;
        let kalg = e.label.algebra();
        let mut out = Element::new();
        for (idx, c) in x {
            let d = self.digits(*idx);
            for (l, k0, r, c1) in e.label.coaction_basis(k) {
                let scalar = self.external_scalar(h, *l, *r);
                if scalar.is_zero() {
                    continue;
                }
                let coeff = c * c1 * scalar;
                let mut parts: Vec<(usize, SVec)> = Vec::new();
                let mut touched: Vec<usize> = Vec::new();
                for s in [e.left_site, e.right_site].into_iter().flatten() {
                    if !touched.contains(&s) {
                        touched.push(s);
                        parts.push((s, self.leg_action(h, *l, *r, s, d[s])));
                    }
                }
                parts.push((ef, kalg.mul_basis(*k0, d[ef]).to_vec()));
                let mut base = *idx;
                for (f, _) in &parts {
                    base -= d[*f] * self.strides[*f];
                }
                let mut acc: Vec<(usize, Q)> = vec![(base, coeff)];
                for (f, part) in &parts {
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for (i, x) in &acc {
                        for (j, y) in part {
                            next.push((i + j * self.strides[*f], x * y));
                        }
                    }
                    acc = next;
                }
                for (i, x) in acc {
                    *out.entry(i).or_insert_with(Q::zero) += x;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `b_i · y` for a basis element `b_i = F ⊗ k`.
    pub fn mul_basis(&self, i: usize, y: &Element) -> Element {
        let d = self.digits(i);
        let ns = self.sites.len();
        let mut acc = y.clone();
        for h in 0..self.edges.len() {
            acc = self.left_mul_edge(h, d[ns + h], &acc);
        }
        for (s, &ds) in d[..ns].iter().enumerate() {
            acc = self.left_mul_site(s, ds, &acc);
        }
        acc
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::new();
        for (i, c) in x {
            for (j, v) in self.mul_basis(*i, y) {
                *out.entry(j).or_insert_with(Q::zero) += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `(1 ⊗ k) · (f ⊗ 1) = Σ c · f' ⊗ k'` with `k` in half-edge `h` and `f` at site `s`,
    /// returned as `(f', k', c)`.
    pub fn straighten(&self, h: usize, k: usize, s: usize, f: usize) -> Vec<(usize, usize, Q)> {
        let e = &self.edges[h];
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (l, k0, r, c) in e.label.coaction_basis(k) {
            let mut scalar = c * self.external_scalar(h, *l, *r);
            // Legs landing on other sites act on their unit through the counit.
            if e.left_site.is_some() && e.left_site != Some(s) {
                scalar *= &e.label.left_hopf().counit()[*l];
            }
            if e.right_site.is_some() && e.right_site != Some(s) {
                scalar *= &e.label.right_hopf().counit()[*r];
            }
            if scalar.is_zero() {
                continue;
            }
            for (g, w) in self.leg_action(h, *l, *r, s, f) {
                *acc.entry((g, *k0)).or_insert_with(Q::zero) += &scalar * w;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((g, k0), v)| (g, k0, v)).collect()
    }

    /// Structure constants of `C_v`; only for small algebras.
    pub fn materialize(&self) -> Result<Algebra, CrossedError> {
        const LIMIT: usize = 1024;
        if self.dim > LIMIT {
            return Err(CrossedError::Malformed(format!(
                "vertex algebra of dimension {} is too large to materialize (limit {LIMIT})",
                self.dim
            )));
        }
        let n = self.dim;
        let table = (0..n * n)
            .map(|ij| {
                let y: Element = [(ij % n, Q::one())].into_iter().collect();
                self.mul_basis(ij / n, &y).into_iter().collect()
            })
            .collect();
        let labels = (0..n).map(|i| self.label(i)).collect();
        let unit = {
            let u = self.unit();
            (0..n).map(|i| u.get(&i).cloned().unwrap_or_else(Q::zero)).collect()
        };
        Ok(Algebra::from_table(labels, table, unit))
    }

    pub fn label(&self, idx: usize) -> String {
        let d = self.digits(idx);
        let ns = self.sites.len();
        let mut parts = Vec::with_capacity(d.len());
        for (f, x) in d.iter().enumerate() {
            if f < ns {
                parts.push(self.site_algebra(f).label(*x).to_string());
            } else {
                parts.push(self.edge_algebra(f - ns).label(*x).to_string());
            }
        }
        parts.join("⊗")
    }
}
