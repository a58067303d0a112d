//! Bicomodule algebras `K → H₁ ⊗ K ⊗ H₂`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::hopf::{basis_vector, group_algebra, op_cop, trivial_hopf, Algebra, GroupTable, Hopf};
use crate::linalg::{Tensor, Q};
use crate::report::Report;

/// One term `c · h ⊗ k ⊗ h'` of a combined coaction.
pub type CoactionTerm = (usize, usize, usize, Q);

type Triple = BTreeMap<(usize, usize, usize), Q>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComoduleError {
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("cocycle identity fails at ({u}, {v}, {w})")]
    NotCocycle { u: String, v: String, w: String },
    #[error("cocycle is not normalized at {0}")]
    NotNormalized(String),
    #[error("cocycle values must be ±1, got {0} at ({1}, {2})")]
    CocycleValue(i64, String, String),
    #[error("malformed bicomodule data: {0}")]
    Malformed(String),
}

/// Algebra `K` with a combined coaction `k ↦ k₍₋₁₎ ⊗ k₍₀₎ ⊗ k₍₁₎ ∈ H₁ ⊗ K ⊗ H₂`.
#[derive(Debug, Clone)]
pub struct Bicomodule {
    algebra: Algebra,
    left: Arc<Hopf>,
    right: Arc<Hopf>,
    coaction: Vec<Vec<CoactionTerm>>,
}

impl PartialEq for Bicomodule {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra
            && *self.left == *other.left
            && *self.right == *other.right
            && self.coaction == other.coaction
    }
}

impl Eq for Bicomodule {}

fn normalize_terms(v: Vec<CoactionTerm>) -> Vec<CoactionTerm> {
    let mut m: Triple = BTreeMap::new();
    for (a, k, b, c) in v {
        *m.entry((a, k, b)).or_insert_with(Q::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, k, b), c)| (a, k, b, c)).collect()
}

fn to_map(terms: &[CoactionTerm]) -> Triple {
    let mut m: Triple = BTreeMap::new();
    for (a, k, b, c) in terms {
        *m.entry((*a, *k, *b)).or_insert_with(Q::zero) += c;
    }
    m.retain(|_, c| !c.is_zero());
    m
}

impl Bicomodule {
    /// Assembles bicomodule data without checking axioms; see [`validate_bicomodule`].
    pub fn from_parts(
        algebra: Algebra,
        left: Arc<Hopf>,
        right: Arc<Hopf>,
        coaction: Vec<Vec<CoactionTerm>>,
    ) -> Result<Self, ComoduleError> {
        let d = algebra.dim();
        if coaction.len() != d {
            return Err(ComoduleError::Malformed("coaction length".into()));
        }
        if coaction
            .iter()
            .flatten()
            .any(|(a, k, b, _)| *a >= left.dim() || *k >= d || *b >= right.dim())
        {
            return Err(ComoduleError::Malformed("coaction index out of range".into()));
        }
        let coaction = coaction.into_iter().map(normalize_terms).collect();
        Ok(Bicomodule { algebra, left, right, coaction })
    }

    /// Assembles bicomodule data from a coaction tensor indexed `[k, h₁, k₀, h₂]`.
    pub fn from_tensor(
        algebra: Algebra,
        left: Arc<Hopf>,
        right: Arc<Hopf>,
        coaction: &Tensor,
    ) -> Result<Self, ComoduleError> {
        let d = algebra.dim();
        if coaction.dims() != [d, left.dim(), d, right.dim()] {
            return Err(ComoduleError::Malformed("coaction tensor shape".into()));
        }
        let mut c = vec![Vec::new(); d];
        for (idx, v) in coaction.iter() {
            c[idx[0]].push((idx[1], idx[2], idx[3], v.clone()));
        }
        Bicomodule::from_parts(algebra, left, right, c)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn left_hopf(&self) -> &Arc<Hopf> {
        &self.left
    }

    pub fn right_hopf(&self) -> &Arc<Hopf> {
        &self.right
    }

    pub fn coaction_basis(&self, i: usize) -> &[CoactionTerm] {
        &self.coaction[i]
    }

    /// The coaction as a tensor indexed `[k, h₁, k₀, h₂]`.
    pub fn coaction_tensor(&self) -> Tensor {
        let mut t = Tensor::new(vec![self.dim(), self.left.dim(), self.dim(), self.right.dim()]);
        for (i, terms) in self.coaction.iter().enumerate() {
            for (a, k, b, c) in terms {
                t.add(&[i, *a, *k, *b], c);
            }
        }
        t
    }

    /// Left coaction `k ↦ k₍₋₁₎ ⊗ k₍₀₎`: terms `(h, k₀, c)`.
    pub fn left_coaction(&self, i: usize) -> Vec<(usize, usize, Q)> {
        let eps = self.right.counit();
        let mut m: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, k, b, c) in &self.coaction[i] {
            if !eps[*b].is_zero() {
                *m.entry((*a, *k)).or_insert_with(Q::zero) += c * &eps[*b];
            }
        }
        m.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, k), c)| (a, k, c)).collect()
    }

    /// Right coaction `k ↦ k₍₀₎ ⊗ k₍₁₎`: terms `(k₀, h, c)`.
    pub fn right_coaction(&self, i: usize) -> Vec<(usize, usize, Q)> {
        let eps = self.left.counit();
        let mut m: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, k, b, c) in &self.coaction[i] {
            if !eps[*a].is_zero() {
                *m.entry((*k, *b)).or_insert_with(Q::zero) += c * &eps[*a];
            }
        }
        m.into_iter().filter(|(_, c)| !c.is_zero()).map(|((k, b), c)| (k, b, c)).collect()
    }

    /// Combined coaction of a dense element.
    fn coact(&self, x: &[Q]) -> Triple {
        let mut m: Triple = BTreeMap::new();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (a, k, b, c) in &self.coaction[i] {
                *m.entry((*a, *k, *b)).or_insert_with(Q::zero) += xi * c;
            }
        }
        m.retain(|_, c| !c.is_zero());
        m
    }
}

/// K = H with coaction `(Δ ⊗ id)Δ`: the transparent label.
pub fn regular_bicomodule(h: &Arc<Hopf>) -> Bicomodule {
    let d = h.dim();
    let coaction = (0..d)
        .map(|i| {
            let mut t = Vec::new();
            for (a, b, c) in h.comult_basis(i) {
                for (a1, a2, c1) in h.comult_basis(*a) {
                    t.push((*a1, *a2, *b, c * c1));
                }
            }
            t
        })
        .collect();
    Bicomodule::from_parts(h.algebra().clone(), h.clone(), h.clone(), coaction)
        .expect("regular coaction is well-formed")
}

/// The one-dimensional algebra 𝕜 with `1 ↦ 1 ⊗ 1 ⊗ 1`.
pub fn trivial_bicomodule(left: &Arc<Hopf>, right: &Arc<Hopf>) -> Bicomodule {
    let mut coaction = Vec::new();
    for (a, x) in left.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (b, y) in right.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            coaction.push((a, 0, b, x * y));
        }
    }
    Bicomodule::from_parts(Algebra::ground(), left.clone(), right.clone(), vec![coaction])
        .expect("trivial coaction is well-formed")
}

/// 𝕜 over the trivial Hopf algebra on both sides.
pub fn ground_bicomodule() -> Bicomodule {
    let k = Arc::new(trivial_hopf());
    trivial_bicomodule(&k, &k)
}

/// The standard sign cocycle on Z2 × Z2, `ζ(a, b) = (-1)^{a₁ b₂}`, in the element
/// numbering of [`GroupTable::klein`].
pub fn klein_sign_cocycle(a: usize, b: usize) -> i64 {
    if (a & 1) == 1 && (b & 2) == 2 {
        -1
    } else {
        1
    }
}

/// Twisted group algebra `kU_ζ` with `b_u b_v = ζ(u, v) b_{uv}` and the diagonal
/// coaction `b_u ↦ b_u ⊗ b_u ⊗ b_u` over kG on both sides.
///
/// The basis follows the order of `subgroup`; `zeta` is evaluated on group element indices.
pub fn twisted_subgroup_algebra(
    g: &GroupTable,
    subgroup: &[usize],
    zeta: impl Fn(usize, usize) -> i64,
) -> Result<Bicomodule, ComoduleError> {
    let lab = |x: usize| g.labels()[x].clone();
    let mut seen = subgroup.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != subgroup.len() || !g.is_subgroup(subgroup) {
        return Err(ComoduleError::NotSubgroup(format!("{subgroup:?}")));
    }
    for &u in subgroup {
        for &v in subgroup {
            let z = zeta(u, v);
            if z != 1 && z != -1 {
                return Err(ComoduleError::CocycleValue(z, lab(u), lab(v)));
            }
        }
    }
    let e = g.identity();
    if let Some(&u) = subgroup.iter().find(|&&u| zeta(e, u) != 1 || zeta(u, e) != 1) {
        return Err(ComoduleError::NotNormalized(lab(u)));
    }
    for &u in subgroup {
        for &v in subgroup {
            for &w in subgroup {
                if zeta(u, v) * zeta(g.mul(u, v), w) != zeta(v, w) * zeta(u, g.mul(v, w)) {
                    return Err(ComoduleError::NotCocycle { u: lab(u), v: lab(v), w: lab(w) });
                }
            }
        }
    }
    let n = subgroup.len();
    let pos = |x: usize| subgroup.iter().position(|&y| y == x).expect("closed");
    let table = (0..n * n)
        .map(|ij| {
            let (u, v) = (subgroup[ij / n], subgroup[ij % n]);
            vec![(pos(g.mul(u, v)), Q::from_integer(zeta(u, v).into()))]
        })
        .collect();
    let labels = subgroup.iter().map(|&u| lab(u)).collect();
    let algebra = Algebra::from_table(labels, table, basis_vector(n, pos(e)));
    let h = Arc::new(group_algebra(g));
    let coaction = subgroup
        .iter()
        .enumerate()
        .map(|(i, &u)| vec![(u, i, u, Q::one())])
        .collect();
    Bicomodule::from_parts(algebra, h.clone(), h, coaction)
}

/// `K^op` over `(H₂^{op cop}, H₁^{op cop})` with the coaction legs exchanged.
pub fn opposite_bicomodule(k: &Bicomodule) -> Bicomodule {
    let coaction = k
        .coaction
        .iter()
        .map(|t| t.iter().map(|(a, m, b, c)| (*b, *m, *a, c.clone())).collect())
        .collect();
    Bicomodule::from_parts(
        k.algebra.opposite(),
        Arc::new(op_cop(&k.right)),
        Arc::new(op_cop(&k.left)),
        coaction,
    )
    .expect("opposite of well-formed data")
}

/// `K^{+1} = K`, `K^{-1} = K^op` as in [`opposite_bicomodule`].
pub fn signed_bicomodule(k: &Bicomodule, eps: i8) -> Bicomodule {
    if eps > 0 {
        k.clone()
    } else {
        opposite_bicomodule(k)
    }
}

/// Checks algebra, comodule and algebra-morphism axioms of the coaction.
pub fn validate_bicomodule(k: &Bicomodule) -> Report {
    let d = k.dim();
    let (h1, h2) = (&k.left, &k.right);
    let lab = |i: usize| k.algebra.label(i).to_string();
    let mut r = Report::new();
    r.record(
        "algebra associativity",
        k.algebra
            .associativity_failure()
            .map(|(i, j, l)| format!("fails at ({}, {}, {})", lab(i), lab(j), lab(l))),
    );
    r.record("algebra unit", k.algebra.unit_failure().map(|i| format!("fails at {}", lab(i))));

    let first = |f: &dyn Fn(usize) -> bool| (0..d).find(|&i| f(i)).map(|i| format!("fails at {}", lab(i)));

    // (Δ ⊗ id)λ = (id ⊗ λ)λ
    r.record(
        "left coassociativity",
        first(&|i| {
            let mut a: Triple = BTreeMap::new();
            let mut b: Triple = BTreeMap::new();
            for (h, m, c) in k.left_coaction(i) {
                for (x, y, c1) in h1.comult_basis(h) {
                    *a.entry((*x, *y, m)).or_insert_with(Q::zero) += &c * c1;
                }
                for (y, m2, c2) in k.left_coaction(m) {
                    *b.entry((h, y, m2)).or_insert_with(Q::zero) += &c * &c2;
                }
            }
            a.retain(|_, v| !v.is_zero());
            b.retain(|_, v| !v.is_zero());
            a != b
        }),
    );
    r.record(
        "right coassociativity",
        first(&|i| {
            let mut a: Triple = BTreeMap::new();
            let mut b: Triple = BTreeMap::new();
            for (m, h, c) in k.right_coaction(i) {
                for (x, y, c1) in h2.comult_basis(h) {
                    *a.entry((m, *x, *y)).or_insert_with(Q::zero) += &c * c1;
                }
                for (m2, x, c2) in k.right_coaction(m) {
                    *b.entry((m2, x, h)).or_insert_with(Q::zero) += &c * &c2;
                }
            }
            a.retain(|_, v| !v.is_zero());
            b.retain(|_, v| !v.is_zero());
            a != b
        }),
    );
    r.record(
        "left counit",
        first(&|i| {
            let mut v = vec![Q::zero(); d];
            for (h, m, c) in k.left_coaction(i) {
                v[m] += c * &h1.counit()[h];
            }
            v != basis_vector(d, i)
        }),
    );
    r.record(
        "right counit",
        first(&|i| {
            let mut v = vec![Q::zero(); d];
            for (m, h, c) in k.right_coaction(i) {
                v[m] += c * &h2.counit()[h];
            }
            v != basis_vector(d, i)
        }),
    );
    // ρ = (id ⊗ r)λ = (λ ⊗ id)r: the one-sided coactions commute and compose to ρ.
    r.record(
        "combined coaction",
        first(&|i| {
            let rho = to_map(&k.coaction[i]);
            let mut a: Triple = BTreeMap::new();
            for (h, m, c) in k.left_coaction(i) {
                for (m2, x, c2) in k.right_coaction(m) {
                    *a.entry((h, m2, x)).or_insert_with(Q::zero) += &c * &c2;
                }
            }
            let mut b: Triple = BTreeMap::new();
            for (m, x, c) in k.right_coaction(i) {
                for (h, m2, c2) in k.left_coaction(m) {
                    *b.entry((h, m2, x)).or_insert_with(Q::zero) += &c * &c2;
                }
            }
            a.retain(|_, v| !v.is_zero());
            b.retain(|_, v| !v.is_zero());
            a != rho || b != rho
        }),
    );

    let mut mult = None;
    'outer: for i in 0..d {
        for j in 0..d {
            let lhs = k.coact(&k.algebra.mul(&basis_vector(d, i), &basis_vector(d, j)));
            let mut rhs: Triple = BTreeMap::new();
            for (a, m, b, c) in &k.coaction[i] {
                for (a2, m2, b2, c2) in &k.coaction[j] {
                    let cc = c * c2;
                    for (x, u) in h1.algebra().mul_basis(*a, *a2) {
                        for (y, w) in k.algebra.mul_basis(*m, *m2) {
                            for (z, t) in h2.algebra().mul_basis(*b, *b2) {
                                *rhs.entry((*x, *y, *z)).or_insert_with(Q::zero) += &cc * u * w * t;
                            }
                        }
                    }
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                mult = Some(format!("ρ(k k') ≠ ρ(k)ρ(k') at ({}, {})", lab(i), lab(j)));
                break 'outer;
            }
        }
    }
    r.record("coaction multiplicative", mult);

    let lhs = k.coact(k.algebra.unit());
    let mut rhs: Triple = BTreeMap::new();
    for (a, x) in h1.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (m, y) in k.algebra.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, z) in h2.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                rhs.insert((a, m, b), x * y * z);
            }
        }
    }
    r.record("coaction unital", (lhs != rhs).then(|| "ρ(1) ≠ 1 ⊗ 1 ⊗ 1".to_string()));
    r
}
