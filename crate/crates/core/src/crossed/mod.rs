//! Module algebras, balancing algebras, crossed products and vertex algebras.
//!
//! A crossed product `A ⋊ K` of a left `L`-module algebra `A` and a left
//! `L`-comodule algebra `K` has basis `a ⊗ k` at index `a * dim K + k` and
//! product `(a ⊗ k)(a' ⊗ k') = a (k₍₋₁₎.a') ⊗ k₍₀₎ k'`.

mod module;
mod vertex;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::comodule::{regular_bicomodule, Bicomodule};
use crate::hopf::{basis_vector, cop, dual_hopf, normalize, signed, tensor_hopf, Algebra, Hopf, HopfError, SVec};
use crate::linalg::{LinalgError, Q};
use crate::report::Report;
use crate::separability::{symmetric_separability_idempotent, SeparabilityError};

pub use module::{
    ideal_module, regular_module, unit_idempotent, unit_module, vacuum_module, validate_vertex_module, VertexModule,
};
pub use vertex::{EdgeFactor, Element, SiteSpec, VertexAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrossedError {
    #[error("Hopf algebras do not match: {0}")]
    HopfMismatch(String),
    #[error("product is not associative at ({0}, {1}, {2})")]
    AssociativityFailure(String, String, String),
    #[error("no one-dimensional module: no character passes the straightening relations")]
    NoCharacter,
    #[error("element is not idempotent: {0}")]
    NotIdempotent(String),
    #[error("invalid module: {0}")]
    ModuleInvalid(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Separability(#[from] SeparabilityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn add_into(acc: &mut BTreeMap<usize, Q>, v: &[(usize, Q)], s: &Q) {
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(Q::zero);
        *e += s * x;
    }
}

fn finish(acc: BTreeMap<usize, Q>) -> SVec {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Left `L`-module algebra: `action[l * dim A + a] = b_l . b_a`.
#[derive(Debug, Clone)]
pub struct ModuleAlgebra {
    hopf: Arc<Hopf>,
    algebra: Algebra,
    action: Vec<SVec>,
}

impl ModuleAlgebra {
    pub fn from_parts(hopf: Arc<Hopf>, algebra: Algebra, action: Vec<SVec>) -> Result<Self, CrossedError> {
        let (dh, da) = (hopf.dim(), algebra.dim());
        if action.len() != dh * da || action.iter().flatten().any(|(i, _)| *i >= da) {
            return Err(CrossedError::Malformed("action table has the wrong shape".into()));
        }
        let action = action.into_iter().map(normalize).collect();
        Ok(ModuleAlgebra { hopf, algebra, action })
    }

    /// 𝕜 with `h.1 = ε(h) 1`.
    pub fn trivial(hopf: Arc<Hopf>) -> Self {
        let action = hopf.counit().iter().map(|c| normalize(vec![(0, c.clone())])).collect();
        ModuleAlgebra { hopf, algebra: Algebra::ground(), action }
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn act_basis(&self, l: usize, a: usize) -> &[(usize, Q)] {
        &self.action[l * self.algebra.dim() + a]
    }

    pub fn act(&self, l: &[(usize, Q)], a: &[(usize, Q)]) -> SVec {
        let mut acc = BTreeMap::new();
        for (i, x) in l {
            for (j, y) in a {
                add_into(&mut acc, self.act_basis(*i, *j), &(x * y));
            }
        }
        finish(acc)
    }
}

/// Checks the module and module-algebra axioms on basis elements.
pub fn validate_module_algebra(m: &ModuleAlgebra) -> Report {
    let (h, a) = (&m.hopf, &m.algebra);
    let (dh, da) = (h.dim(), a.dim());
    let hl = |i: usize| h.algebra().label(i).to_string();
    let al = |i: usize| a.label(i).to_string();
    let unit_h: SVec = normalize(h.unit().iter().cloned().enumerate().collect());
    let unit_a: SVec = normalize(a.unit().iter().cloned().enumerate().collect());
    let mut r = Report::new();

    let mut assoc = None;
    'assoc: for x in 0..dh {
        for y in 0..dh {
            for j in 0..da {
                let lhs = m.act(h.algebra().mul_basis(x, y), &[(j, Q::one())]);
                let rhs = m.act(&[(x, Q::one())], m.act_basis(y, j));
                if lhs != rhs {
                    assoc = Some(format!("(xy).a ≠ x.(y.a) at ({}, {}, {})", hl(x), hl(y), al(j)));
                    break 'assoc;
                }
            }
        }
    }
    r.record("action associative", assoc);
    let unital = (0..da).find(|&j| m.act(&unit_h, &[(j, Q::one())]) != vec![(j, Q::one())]);
    r.record("action unital", unital.map(|j| format!("1.a ≠ a at {}", al(j))));

    let mut measuring = None;
    'meas: for x in 0..dh {
        for i in 0..da {
            for j in 0..da {
                let lhs = m.act(&[(x, Q::one())], a.mul_basis(i, j));
                let mut acc = BTreeMap::new();
                for (x1, x2, c) in h.comult_basis(x) {
                    let u = m.act_basis(*x1, i);
                    let v = m.act_basis(*x2, j);
                    add_into(&mut acc, &a.mul_sparse(u, v), c);
                }
                if lhs != finish(acc) {
                    measuring = Some(format!("h.(ab) ≠ (h₁.a)(h₂.b) at ({}, {}, {})", hl(x), al(i), al(j)));
                    break 'meas;
                }
            }
        }
    }
    r.record("action measuring", measuring);
    let unit_fail = (0..dh).find(|&x| {
        let expect: SVec = normalize(unit_a.iter().map(|(i, u)| (*i, u * &h.counit()[x])).collect());
        m.act(&[(x, Q::one())], &unit_a) != expect
    });
    r.record("unit preserved", unit_fail.map(|x| format!("h.1 ≠ ε(h)1 at {}", hl(x))));
    r
}

/// `H*` with the action of `(H^{ε'})^{cop} ⊗ H^{ε}` given by
/// `(a' ⊗ a).f = f(⟨a'⟩^{-ε'} · ? · ⟨a⟩^{ε})`, where `⟨a⟩^{+1} = a` and `⟨a⟩^{-1} = S(a)`.
///
/// The acting Hopf algebra has basis index `a' * dim H + a`; products inside the
/// brackets are taken in `H`.
#[derive(Debug, Clone)]
pub struct BalancingAlgebra {
    base: Arc<Hopf>,
    eps_left: i8,
    eps_right: i8,
    module: ModuleAlgebra,
    left_only: Vec<SVec>,
    right_only: Vec<SVec>,
}

fn bracket(h: &Hopf, i: usize, eps: i8) -> SVec {
    if eps > 0 {
        vec![(i, Q::one())]
    } else {
        h.antipode_basis(i)
    }
}

impl BalancingAlgebra {
    pub fn new(base: Arc<Hopf>, eps_left: i8, eps_right: i8) -> Result<Self, CrossedError> {
        let d = base.dim();
        let acting = Arc::new(tensor_hopf(&cop(&signed(&base, eps_left))?, &signed(&base, eps_right)));
        let dual = dual_hopf(&base);
        let alg = base.algebra();
        let mut action = vec![Vec::new(); d * d * d];
        for ap in 0..d {
            let x = bracket(&base, ap, -eps_left);
            for a in 0..d {
                let y = bracket(&base, a, eps_right);
                for j in 0..d {
                    let xb = alg.mul_sparse(&x, &[(j, Q::one())]);
                    for (i, c) in alg.mul_sparse(&xb, &y) {
                        action[(ap * d + a) * d + i].push((j, c));
                    }
                }
            }
        }
        let module = ModuleAlgebra::from_parts(acting, dual.algebra().clone(), action)?;
        let unit: SVec = normalize(base.unit().iter().cloned().enumerate().collect());
        let left_only = (0..d * d)
            .map(|af| {
                let (a, f) = (af / d, af % d);
                let l: SVec = unit.iter().map(|(u, c)| (u * d + a, c.clone())).collect();
                module.act(&l, &[(f, Q::one())])
            })
            .collect();
        let right_only = (0..d * d)
            .map(|af| {
                let (ap, f) = (af / d, af % d);
                let l: SVec = unit.iter().map(|(u, c)| (ap * d + u, c.clone())).collect();
                module.act(&l, &[(f, Q::one())])
            })
            .collect();
        Ok(BalancingAlgebra { base, eps_left, eps_right, module, left_only, right_only })
    }

    pub fn base(&self) -> &Arc<Hopf> {
        &self.base
    }

    pub fn eps_left(&self) -> i8 {
        self.eps_left
    }

    pub fn eps_right(&self) -> i8 {
        self.eps_right
    }

    pub fn as_module_algebra(&self) -> &ModuleAlgebra {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `(1 ⊗ a).f` for basis `a`, `f`.
    pub fn act_right_slot(&self, a: usize, f: usize) -> &[(usize, Q)] {
        &self.left_only[a * self.dim() + f]
    }

    /// `(a' ⊗ 1).f` for basis `a'`, `f`.
    pub fn act_left_slot(&self, ap: usize, f: usize) -> &[(usize, Q)] {
        &self.right_only[ap * self.dim() + f]
    }
}

/// Left `L`-comodule algebra: `coaction[i]` lists `(l, k₀, c)` for `b_i ↦ Σ c b_l ⊗ b_{k₀}`.
#[derive(Debug, Clone)]
pub struct LeftComodule {
    hopf: Arc<Hopf>,
    algebra: Algebra,
    coaction: Vec<Vec<(usize, usize, Q)>>,
}

impl LeftComodule {
    pub fn from_parts(
        hopf: Arc<Hopf>,
        algebra: Algebra,
        coaction: Vec<Vec<(usize, usize, Q)>>,
    ) -> Result<Self, CrossedError> {
        if coaction.len() != algebra.dim()
            || coaction.iter().flatten().any(|(l, k, _)| *l >= hopf.dim() || *k >= algebra.dim())
        {
            return Err(CrossedError::Malformed("coaction table has the wrong shape".into()));
        }
        Ok(LeftComodule { hopf, algebra, coaction })
    }

    /// `K` over `H₂^{cop} ⊗ H₁` via `k ↦ (k₍₁₎ ⊗ k₍₋₁₎) ⊗ k₍₀₎`.
    pub fn from_bicomodule(k: &Bicomodule) -> Result<Self, CrossedError> {
        let hopf = Arc::new(tensor_hopf(&cop(k.right_hopf())?, k.left_hopf()));
        let dl = k.left_hopf().dim();
        let coaction = (0..k.dim())
            .map(|i| k.coaction_basis(i).iter().map(|(l, m, r, c)| (r * dl + l, *m, c.clone())).collect())
            .collect();
        LeftComodule::from_parts(hopf, k.algebra().clone(), coaction)
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn coaction_basis(&self, i: usize) -> &[(usize, usize, Q)] {
        &self.coaction[i]
    }
}

type Pairs = BTreeMap<(usize, usize), Q>;

fn pairs_push(m: &mut Pairs, key: (usize, usize), v: Q) {
    let e = m.entry(key).or_insert_with(Q::zero);
    *e += v;
}

fn pairs_clean(mut m: Pairs) -> Pairs {
    m.retain(|_, v| !v.is_zero());
    m
}

/// Comodule and comodule-algebra axioms of a left coaction.
pub fn validate_left_comodule(k: &LeftComodule) -> Report {
    let (h, a) = (&k.hopf, &k.algebra);
    let d = a.dim();
    let lab = |i: usize| a.label(i).to_string();
    let mut r = Report::new();
    let coassoc = (0..d).find(|&i| {
        let mut lhs: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
        let mut rhs: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
        for (l, m, c) in &k.coaction[i] {
            for (x, y, c1) in h.comult_basis(*l) {
                *lhs.entry((*x, *y, *m)).or_insert_with(Q::zero) += c * c1;
            }
            for (y, m2, c2) in &k.coaction[*m] {
                *rhs.entry((*l, *y, *m2)).or_insert_with(Q::zero) += c * c2;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        lhs != rhs
    });
    r.record("coassociativity", coassoc.map(|i| format!("fails at {}", lab(i))));
    let counit = (0..d).find(|&i| {
        let mut acc = BTreeMap::new();
        for (l, m, c) in &k.coaction[i] {
            add_into(&mut acc, &[(*m, h.counit()[*l].clone())], c);
        }
        finish(acc) != vec![(i, Q::one())]
    });
    r.record("counit", counit.map(|i| format!("fails at {}", lab(i))));
    let mut mult = None;
    'm: for i in 0..d {
        for j in 0..d {
            let mut lhs = Pairs::new();
            for (x, c) in a.mul_basis(i, j) {
                for (l, m, c1) in &k.coaction[*x] {
                    pairs_push(&mut lhs, (*l, *m), c * c1);
                }
            }
            let mut rhs = Pairs::new();
            for (l1, m1, c1) in &k.coaction[i] {
                for (l2, m2, c2) in &k.coaction[j] {
                    for (l, u) in h.algebra().mul_basis(*l1, *l2) {
                        for (m, w) in a.mul_basis(*m1, *m2) {
                            pairs_push(&mut rhs, (*l, *m), c1 * c2 * u * w);
                        }
                    }
                }
            }
            if pairs_clean(lhs) != pairs_clean(rhs) {
                mult = Some(format!("fails at ({}, {})", lab(i), lab(j)));
                break 'm;
            }
        }
    }
    r.record("coaction multiplicative", mult);
    let mut lu = Pairs::new();
    for (i, c) in a.unit().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (l, m, c1) in &k.coaction[i] {
            pairs_push(&mut lu, (*l, *m), c * c1);
        }
    }
    let mut ru = Pairs::new();
    for (l, x) in h.unit().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (m, y) in a.unit().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            pairs_push(&mut ru, (l, m), x * y);
        }
    }
    r.record("coaction unital", (pairs_clean(lu) != pairs_clean(ru)).then(|| "λ(1) ≠ 1 ⊗ 1".to_string()));
    r
}

/// Materialized crossed product `A ⋊ K`.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    module: ModuleAlgebra,
    comodule: LeftComodule,
    product: Algebra,
}

/// Builds `A ⋊ K` and verifies associativity on all basis triples.
pub fn crossed_product(a: &ModuleAlgebra, k: &LeftComodule) -> Result<CrossedProduct, CrossedError> {
    if *a.hopf != *k.hopf {
        return Err(CrossedError::HopfMismatch(format!(
            "module algebra over a Hopf algebra of dimension {}, comodule algebra over dimension {}",
            a.hopf.dim(),
            k.hopf.dim()
        )));
    }
    let (da, dk) = (a.algebra.dim(), k.dim());
    let n = da * dk;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (a1, k1) = (x / dk, x % dk);
        for y in 0..n {
            let (a2, k2) = (y / dk, y % dk);
            let mut acc = BTreeMap::new();
            for (l, k0, c) in &k.coaction[k1] {
                let moved = a.act_basis(*l, a2);
                let left = a.algebra.mul_sparse(&[(a1, Q::one())], moved);
                for (z, w) in k.algebra.mul_basis(*k0, k2) {
                    let v: SVec = left.iter().map(|(i, u)| (i * dk + z, u.clone())).collect();
                    add_into(&mut acc, &v, &(c * w));
                }
            }
            table.push(finish(acc));
        }
    }
    let mut labels = Vec::with_capacity(n);
    for i in 0..da {
        for j in 0..dk {
            labels.push(format!("{}⊗{}", a.algebra.label(i), k.algebra.label(j)));
        }
    }
    let unit = a
        .algebra
        .unit()
        .iter()
        .flat_map(|x| k.algebra.unit().iter().map(move |y| x * y))
        .collect();
    let product = Algebra::from_table(labels, table, unit);
    if let Some((i, j, l)) = product.associativity_failure() {
        let lab = |x: usize| product.label(x).to_string();
        return Err(CrossedError::AssociativityFailure(lab(i), lab(j), lab(l)));
    }
    Ok(CrossedProduct { module: a.clone(), comodule: k.clone(), product })
}

impl CrossedProduct {
    pub fn algebra(&self) -> &Algebra {
        &self.product
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn module_algebra(&self) -> &ModuleAlgebra {
        &self.module
    }

    pub fn comodule_algebra(&self) -> &LeftComodule {
        &self.comodule
    }

    /// `a ⊗ 1` as a dense vector.
    pub fn embed_module(&self, a: &[Q]) -> Vec<Q> {
        a.iter().flat_map(|x| self.comodule.algebra.unit().iter().map(move |y| x * y)).collect()
    }

    /// `1 ⊗ k` as a dense vector.
    pub fn embed_comodule(&self, k: &[Q]) -> Vec<Q> {
        self.module.algebra.unit().iter().flat_map(|x| k.iter().map(move |y| x * y)).collect()
    }
}

/// `D(H) = H*_{+,+} ⋊ H` with `H` regular over `H^{cop} ⊗ H`.
pub fn drinfeld_double(h: &Arc<Hopf>) -> Result<CrossedProduct, CrossedError> {
    let bal = BalancingAlgebra::new(h.clone(), 1, 1)?;
    let k = LeftComodule::from_bicomodule(&regular_bicomodule(h))?;
    crossed_product(bal.as_module_algebra(), &k)
}

/// Compares `k · f` in the crossed product of `bal` with `K` against
/// `f(⟨k₍₁₎⟩^{-ε'} · ? · ⟨k₍₋₁₎⟩^{ε}) k₍₀₎`, evaluated through `Δ²` of `H*`.
pub fn check_straightening(bal: &BalancingAlgebra, k: &Bicomodule, cp: &CrossedProduct) -> Report {
    let h = bal.base();
    let d = h.dim();
    let dk = k.dim();
    let dual = dual_hopf(h);
    let mut r = Report::new();
    let alg = cp.algebra();
    let mut failure = None;
    'outer: for kb in 0..dk {
        for f in 0..d {
            let lhs = alg.mul(&cp.embed_comodule(&basis_vector(dk, kb)), &cp.embed_module(&basis_vector(d, f)));
            let mut rhs = vec![Q::zero(); cp.dim()];
            for (l, k0, rr, c) in k.coaction_basis(kb) {
                let x = bracket(h, *rr, -bal.eps_left());
                let y = bracket(h, *l, bal.eps_right());
                // f(x ? y) = Σ f₁(x) f₂(?) f₃(y)
                for (f1, f23, c1) in dual.comult_basis(f) {
                    let fx: Q = x.iter().filter(|(i, _)| i == f1).map(|(_, v)| v.clone()).sum();
                    if fx.is_zero() {
                        continue;
                    }
                    for (f2, f3, c2) in dual.comult_basis(*f23) {
                        let fy: Q = y.iter().filter(|(i, _)| i == f3).map(|(_, v)| v.clone()).sum();
                        if fy.is_zero() {
                            continue;
                        }
                        rhs[f2 * dk + k0] += c * c1 * c2 * &fx * &fy;
                    }
                }
            }
            if lhs != rhs {
                failure = Some(format!(
                    "k·f mismatch at ({}, {})",
                    k.algebra().label(kb),
                    dual.algebra().label(f)
                ));
                break 'outer;
            }
        }
    }
    r.record("straightening", failure);
    r
}

/// `(1 ⊗ p¹) ⊗ (1 ⊗ p²)` and `(π¹ ⊗ 1) ⊗ (π² ⊗ 1)` commute in `C ⊗ C^op`, where
/// `p`, `π` are the separability idempotents of `K` and `A`.
pub fn check_idempotents_commute(cp: &CrossedProduct) -> Report {
    let mut r = Report::new();
    let (da, dk) = (cp.module.algebra.dim(), cp.comodule.dim());
    let (p, pi) = match (
        symmetric_separability_idempotent(&cp.comodule.algebra),
        symmetric_separability_idempotent(&cp.module.algebra),
    ) {
        (Ok(p), Ok(pi)) => (p, pi),
        (Err(e), _) | (_, Err(e)) => {
            r.fail("idempotents commute", e.to_string());
            return r;
        }
    };
    let c = cp.algebra();
    let n = c.dim();
    let lift = |terms: Vec<(usize, usize, Q)>, on_k: bool| -> Vec<(Vec<Q>, Vec<Q>, Q)> {
        terms
            .into_iter()
            .map(|(i, j, x)| {
                if on_k {
                    (cp.embed_comodule(&basis_vector(dk, i)), cp.embed_comodule(&basis_vector(dk, j)), x)
                } else {
                    (cp.embed_module(&basis_vector(da, i)), cp.embed_module(&basis_vector(da, j)), x)
                }
            })
            .collect()
    };
    let xs = lift(p.terms(), true);
    let ys = lift(pi.terms(), false);
    let product = |u: &[(Vec<Q>, Vec<Q>, Q)], v: &[(Vec<Q>, Vec<Q>, Q)]| -> Vec<Q> {
        let mut out = vec![Q::zero(); n * n];
        for (u1, u2, a) in u {
            for (v1, v2, b) in v {
                let first = c.mul(u1, v1);
                let second = c.mul(v2, u2);
                let s = a * b;
                for (i, x) in first.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in second.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        out[i * n + j] += &s * x * y;
                    }
                }
            }
        }
        out
    };
    let xy = product(&xs, &ys);
    let yx = product(&ys, &xs);
    let bad = (0..n * n).find(|&i| xy[i] != yx[i]);
    r.record(
        "idempotents commute",
        bad.map(|i| format!("differs at ({}, {})", c.label(i / n), c.label(i % n))),
    );
    r
}
