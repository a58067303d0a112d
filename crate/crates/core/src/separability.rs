//! Symmetric separability idempotents via the trace form.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::comodule::Bicomodule;
use crate::hopf::{basis_vector, haar_integral, Algebra, Hopf, HopfError};
use crate::linalg::{dense_rank, inverse, Tensor, Q};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparabilityError {
    #[error("trace form is degenerate: the algebra is not semisimple")]
    DegenerateTraceForm,
    #[error("constructed element fails a defining identity: {0}")]
    PropertyCheckFailed(String),
}

/// Element `Σ p¹ ⊗ p²` of `A ⊗ A`, stored as a `[dim, dim]` tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityIdempotent {
    element: Tensor,
}

impl SeparabilityIdempotent {
    pub fn from_tensor(element: Tensor) -> Self {
        assert_eq!(element.dims().len(), 2);
        SeparabilityIdempotent { element }
    }

    pub fn dim(&self) -> usize {
        self.element.dims()[0]
    }

    pub fn element(&self) -> &Tensor {
        &self.element
    }

    /// Nonzero terms `(i, j, c)` for `c · b_i ⊗ b_j`.
    pub fn terms(&self) -> Vec<(usize, usize, Q)> {
        self.element.iter().map(|(k, v)| (k[0], k[1], v.clone())).collect()
    }

    /// Dense coefficients with `(i, j)` at `i * dim + j`.
    pub fn to_dense(&self) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d * d];
        for (i, j, c) in self.terms() {
            out[i * d + j] = c;
        }
        out
    }

    fn from_dense(d: usize, v: &[Q]) -> Self {
        let mut t = Tensor::new(vec![d, d]);
        for (p, x) in v.iter().enumerate() {
            t.set(&[p / d, p % d], x.clone());
        }
        SeparabilityIdempotent { element: t }
    }
}

/// The unique `p` with `(x p¹) ⊗ p² = p¹ ⊗ (p² x)`, `p¹p² = 1` and `p¹ ⊗ p² = p² ⊗ p¹`.
///
/// `p = Σ_{i,k} (G⁻¹)_{ki} b_i ⊗ b_k` with `G` the Gram matrix of the trace form.
pub fn symmetric_separability_idempotent(a: &Algebra) -> Result<SeparabilityIdempotent, SeparabilityError> {
    let d = a.dim();
    let g = a.trace_form();
    let ginv = inverse(&g).ok_or(SeparabilityError::DegenerateTraceForm)?;
    let mut t = Tensor::new(vec![d, d]);
    for (k, row) in ginv.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            t.add(&[i, k], x);
        }
    }
    let p = SeparabilityIdempotent { element: t };
    let report = check_separability_identities(a, &p);
    if let Some(c) = report.failures().next() {
        return Err(SeparabilityError::PropertyCheckFailed(c.name.clone()));
    }
    Ok(p)
}

/// Σ over terms of `(x·p¹) ⊗ p²` minus `p¹ ⊗ (p²·x)`, as dense `d*d`.
fn invariance_defect(a: &Algebra, p: &[Q], x: usize) -> Vec<Q> {
    let d = a.dim();
    let mut out = vec![Q::zero(); d * d];
    for (pos, c) in p.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (i, j) = (pos / d, pos % d);
        for (k, u) in a.mul_basis(x, i) {
            out[k * d + j] += c * u;
        }
        for (k, u) in a.mul_basis(j, x) {
            out[i * d + k] -= c * u;
        }
    }
    out
}

/// Checks invariance, normalization and symmetry of `p` for `a`.
pub fn check_separability_identities(a: &Algebra, p: &SeparabilityIdempotent) -> Report {
    let d = a.dim();
    let dense = p.to_dense();
    let mut r = Report::new();
    let inv = (0..d).find(|&x| invariance_defect(a, &dense, x).iter().any(|v| !v.is_zero()));
    r.record("invariance", inv.map(|x| format!("fails for x = {}", a.label(x))));
    let mut prod = vec![Q::zero(); d];
    for (i, j, c) in p.terms() {
        for (k, u) in a.mul_basis(i, j) {
            prod[*k] += &c * u;
        }
    }
    r.record("normalization", (prod != a.unit()).then(|| "p¹p² ≠ 1".to_string()));
    let sym = (0..d * d).find(|&pos| dense[pos] != dense[(pos % d) * d + pos / d]);
    r.record(
        "symmetry",
        sym.map(|pos| format!("differs at ({}, {})", a.label(pos / d), a.label(pos % d))),
    );
    r
}

/// Dimension of the solution space of the homogeneous constraints
/// (invariance, symmetry and `p¹p² = 0`); zero means the idempotent is unique.
pub fn constraint_nullity(a: &Algebra) -> usize {
    let d = a.dim();
    let n = d * d;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for x in 0..d {
        // Column `pos` of the linear map p ↦ invariance_defect(p, x).
        let cols: Vec<Vec<Q>> = (0..n)
            .map(|pos| invariance_defect(a, &basis_vector(n, pos), x))
            .collect();
        for out in 0..n {
            let row: Vec<Q> = cols.iter().map(|c| c[out].clone()).collect();
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    for pos in 0..n {
        let swapped = (pos % d) * d + pos / d;
        if swapped > pos {
            let mut row = vec![Q::zero(); n];
            row[pos] = Q::one();
            row[swapped] = -Q::one();
            rows.push(row);
        }
    }
    for k in 0..d {
        let mut row = vec![Q::zero(); n];
        for (pos, slot) in row.iter_mut().enumerate() {
            if let Some((_, u)) = a.mul_basis(pos / d, pos % d).iter().find(|(kk, _)| *kk == k) {
                *slot = u.clone();
            }
        }
        rows.push(row);
    }
    n - dense_rank(&rows)
}

/// `ℓ₍₁₎ ⊗ S(ℓ₍₂₎)` for the Haar integral `ℓ`.
pub fn haar_separability_element(h: &Hopf) -> Result<SeparabilityIdempotent, HopfError> {
    let d = h.dim();
    let ell = haar_integral(h)?;
    let dl = h.comult(&ell.element);
    let mut out = vec![Q::zero(); d * d];
    for (pos, c) in dl.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (k, s) in h.antipode_basis(pos % d) {
            out[(pos / d) * d + k] += c * s;
        }
    }
    Ok(SeparabilityIdempotent::from_dense(d, &out))
}

/// Compares the trace-form idempotent of `H` with `ℓ₍₁₎ ⊗ S(ℓ₍₂₎)`.
pub fn check_haar_reduction(h: &Hopf) -> Report {
    let mut r = Report::new();
    let lab = |i: usize| h.algebra().label(i).to_string();
    match (symmetric_separability_idempotent(h.algebra()), haar_separability_element(h)) {
        (Ok(p), Ok(q)) => r.record(
            "Haar reduction",
            p.element.first_difference(&q.element).map(|idx| {
                format!(
                    "entry ({}, {}): trace form gives {}, Haar gives {}",
                    lab(idx[0]),
                    lab(idx[1]),
                    p.element.get(&idx),
                    q.element.get(&idx)
                )
            }),
        ),
        (Err(e), _) => r.fail("Haar reduction", e.to_string()),
        (_, Err(e)) => r.fail("Haar reduction", e.to_string()),
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

type Quad = BTreeMap<(usize, usize, usize), Q>;

fn push(m: &mut Quad, key: (usize, usize, usize), v: Q) {
    *m.entry(key).or_insert_with(Q::zero) += v;
}

fn clean(mut m: Quad) -> Quad {
    m.retain(|_, v| !v.is_zero());
    m
}

/// Coinvariance of the separability idempotent of `K` for one of its coactions.
///
/// Right: `p¹₍₀₎ ⊗ p²₍₀₎ ⊗ p¹₍₁₎p²₍₁₎ = p¹ ⊗ p² ⊗ 1` and
/// `p¹₍₀₎ ⊗ p¹₍₁₎ ⊗ p² = p¹ ⊗ S(p²₍₁₎) ⊗ p²₍₀₎`.
/// Left: `p¹₍₋₁₎p²₍₋₁₎ ⊗ p¹₍₀₎ ⊗ p²₍₀₎ = 1 ⊗ p¹ ⊗ p²` and
/// `p¹₍₀₎ ⊗ p¹₍₋₁₎ ⊗ p² = p¹ ⊗ S(p²₍₋₁₎) ⊗ p²₍₀₎`.
/// Keys of the compared maps are `(k, k', h)` in both cases.
pub fn check_coinvariance(k: &Bicomodule, side: Side) -> Report {
    let mut r = Report::new();
    let p = match symmetric_separability_idempotent(k.algebra()) {
        Ok(p) => p,
        Err(e) => {
            r.fail("coinvariance", e.to_string());
            r.fail("cyclic identity", e.to_string());
            return r;
        }
    };
    let h = match side {
        Side::Left => k.left_hopf(),
        Side::Right => k.right_hopf(),
    };
    let one_sided = |i: usize| -> Vec<(usize, usize, Q)> {
        match side {
            Side::Left => k.left_coaction(i).into_iter().map(|(hh, m, c)| (m, hh, c)).collect(),
            Side::Right => k.right_coaction(i),
        }
    };
    let terms = p.terms();
    let mut lhs = Quad::new();
    for (i, j, c) in &terms {
        for (m1, h1, c1) in one_sided(*i) {
            for (m2, h2, c2) in one_sided(*j) {
                for (x, u) in h.algebra().mul_basis(h1, h2) {
                    push(&mut lhs, (m1, m2, *x), c * &c1 * &c2 * u);
                }
            }
        }
    }
    let mut rhs = Quad::new();
    for (i, j, c) in &terms {
        for (x, u) in h.unit().iter().enumerate().filter(|(_, u)| !u.is_zero()) {
            push(&mut rhs, (*i, *j, x), c * u);
        }
    }
    let (lhs, rhs) = (clean(lhs), clean(rhs));
    r.record("coinvariance", first_mismatch(&lhs, &rhs));

    // Cyclic form, keys (p¹-slot, p²-slot, h).
    let mut cl = Quad::new();
    let mut cr = Quad::new();
    for (i, j, c) in &terms {
        for (m, hh, c1) in one_sided(*i) {
            push(&mut cl, (m, *j, hh), c * &c1);
        }
        for (m, hh, c2) in one_sided(*j) {
            for (s, u) in h.antipode_basis(hh) {
                push(&mut cr, (*i, m, s), c * &c2 * u);
            }
        }
    }
    r.record("cyclic identity", first_mismatch(&clean(cl), &clean(cr)));
    r
}

fn first_mismatch(a: &Quad, b: &Quad) -> Option<String> {
    let keys = a.keys().chain(b.keys());
    for key in keys {
        let (x, y) = (a.get(key).cloned().unwrap_or_else(Q::zero), b.get(key).cloned().unwrap_or_else(Q::zero));
        if x != y {
            return Some(format!("entry {key:?}: {x} vs {y}"));
        }
    }
    None
}

/// `(p¹ ⊗ q¹) ⊗ (p² ⊗ q²)` on `(A ⊗ B) ⊗ (A ⊗ B)` with basis index `i * dim_B + j`.
pub fn tensor_idempotent(p: &SeparabilityIdempotent, q: &SeparabilityIdempotent) -> SeparabilityIdempotent {
    let db = q.dim();
    let d = p.dim() * db;
    let mut t = Tensor::new(vec![d, d]);
    for (i1, i2, c) in p.terms() {
        for (j1, j2, e) in q.terms() {
            t.add(&[i1 * db + j1, i2 * db + j2], &(&c * &e));
        }
    }
    SeparabilityIdempotent { element: t }
}

/// `Σ p¹ᵢ p¹ⱼ ⊗ p²ⱼ p²ᵢ = p`: idempotence in `A ⊗ A^op`.
pub fn check_enveloping_idempotence(a: &Algebra, p: &SeparabilityIdempotent) -> Report {
    let d = a.dim();
    let terms = p.terms();
    let mut sq = vec![Q::zero(); d * d];
    for (i1, i2, c) in &terms {
        for (j1, j2, e) in &terms {
            let ce = c * e;
            for (x, u) in a.mul_basis(*i1, *j1) {
                for (y, w) in a.mul_basis(*j2, *i2) {
                    sq[x * d + y] += &ce * u * w;
                }
            }
        }
    }
    let mut r = Report::new();
    let dense = p.to_dense();
    let bad = (0..d * d).find(|&pos| sq[pos] != dense[pos]);
    r.record(
        "enveloping idempotence",
        bad.map(|pos| format!("differs at ({}, {})", a.label(pos / d), a.label(pos % d))),
    );
    r
}

/// The image of `x ↦ p¹ x p²` is exactly the center of `A`.
pub fn check_center_projection(a: &Algebra, p: &SeparabilityIdempotent) -> Report {
    let d = a.dim();
    let terms = p.terms();
    let image: Vec<Vec<Q>> = (0..d)
        .map(|x| {
            let mut v = vec![Q::zero(); d];
            for (i, j, c) in &terms {
                let left = a.mul(&basis_vector(d, *i), &basis_vector(d, x));
                let full = a.mul(&left, &basis_vector(d, *j));
                for (k, y) in full.into_iter().enumerate() {
                    v[k] += c * y;
                }
            }
            v
        })
        .collect();
    let center = a.center();
    let mut r = Report::new();
    let central = image.iter().all(|z| {
        (0..d).all(|i| {
            let bi = basis_vector(d, i);
            a.mul(&bi, z) == a.mul(z, &bi)
        })
    });
    r.record("image central", (!central).then(|| "some p¹ x p² is not central".to_string()));
    let rank = dense_rank(&image);
    r.record(
        "image is the center",
        (rank != center.len()).then(|| format!("image rank {rank}, center dimension {}", center.len())),
    );
    let fixes = center.iter().all(|z| {
        let mut v = vec![Q::zero(); d];
        for (i, j, c) in &terms {
            let full = a.mul(&a.mul(&basis_vector(d, *i), z), &basis_vector(d, *j));
            for (k, y) in full.into_iter().enumerate() {
                v[k] += c * y;
            }
        }
        &v == z
    });
    r.record("identity on the center", (!fixes).then(|| "p¹ z p² ≠ z for a central z".to_string()));
    r
}
