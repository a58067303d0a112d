//! Finite-dimensional Hopf algebras by structure constants.
//!
//! Elements of a Hopf algebra of dimension `d` are dense `Vec<Q>` in the
//! algebra basis; elements of `H ⊗ H` are dense of length `d * d` with the
//! pair `(i, j)` at `i * d + j`.

mod algebra;
mod group;

use num_traits::{One, Zero};

pub use algebra::{basis_vector, Algebra, SVec};
pub(crate) use algebra::normalize;
pub use group::GroupTable;

use crate::linalg::{inverse, solve, SparseMatrix, Tensor, Q};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("not a group: {axiom}")]
    NotAGroup { axiom: String },
    #[error("no Haar integral: the integral system has no solution with ε(ℓ) = 1")]
    NoHaarIntegral,
    #[error("antipode is not invertible")]
    SingularAntipode,
    #[error("malformed Hopf data: {0}")]
    Malformed(String),
}

/// Finite-dimensional Hopf algebra: algebra plus Δ, ε and S.
///
/// `comult[i]` lists `(a, b, c)` with `Δ(b_i) = Σ c · b_a ⊗ b_b`; the antipode
/// matrix has column `i` equal to `S(b_i)`.
#[derive(Debug, Clone)]
pub struct Hopf {
    algebra: Algebra,
    comult: Vec<Vec<(usize, usize, Q)>>,
    counit: Vec<Q>,
    antipode: SparseMatrix,
}

impl PartialEq for Hopf {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra
            && self.comult == other.comult
            && self.counit == other.counit
            && self.antipode == other.antipode
    }
}

impl Eq for Hopf {}

fn normalize_pairs(v: Vec<(usize, usize, Q)>) -> Vec<(usize, usize, Q)> {
    let mut v = v;
    v.sort_by_key(|(a, b, _)| (*a, *b));
    let mut out: Vec<(usize, usize, Q)> = Vec::with_capacity(v.len());
    for (a, b, x) in v {
        match out.last_mut() {
            Some((a2, b2, y)) if *a2 == a && *b2 == b => *y += x,
            _ => out.push((a, b, x)),
        }
    }
    out.retain(|(_, _, x)| !x.is_zero());
    out
}

impl Hopf {
    /// Assembles Hopf data without checking axioms; see [`validate_hopf`].
    pub fn from_parts(
        algebra: Algebra,
        comult: Vec<Vec<(usize, usize, Q)>>,
        counit: Vec<Q>,
        antipode: SparseMatrix,
    ) -> Result<Self, HopfError> {
        let d = algebra.dim();
        if comult.len() != d || counit.len() != d {
            return Err(HopfError::Malformed("comultiplication or counit length".into()));
        }
        if antipode.rows() != d || antipode.cols() != d {
            return Err(HopfError::Malformed("antipode shape".into()));
        }
        if comult.iter().flatten().any(|(a, b, _)| *a >= d || *b >= d) {
            return Err(HopfError::Malformed("comultiplication index out of range".into()));
        }
        let comult = comult.into_iter().map(normalize_pairs).collect();
        Ok(Hopf { algebra, comult, counit, antipode })
    }

    /// Assembles Hopf data from structure tensors `Δ[i][a][b]`.
    pub fn from_tensors(
        algebra: Algebra,
        comult: &Tensor,
        counit: Vec<Q>,
        antipode: SparseMatrix,
    ) -> Result<Self, HopfError> {
        let d = algebra.dim();
        if comult.dims() != [d, d, d] {
            return Err(HopfError::Malformed("comultiplication tensor shape".into()));
        }
        let mut c = vec![Vec::new(); d];
        for (idx, v) in comult.iter() {
            c[idx[0]].push((idx[1], idx[2], v.clone()));
        }
        Hopf::from_parts(algebra, c, counit, antipode)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn comult_basis(&self, i: usize) -> &[(usize, usize, Q)] {
        &self.comult[i]
    }

    pub fn comult_tensor(&self) -> Tensor {
        let d = self.dim();
        let mut t = Tensor::new(vec![d, d, d]);
        for (i, terms) in self.comult.iter().enumerate() {
            for (a, b, c) in terms {
                t.add(&[i, *a, *b], c);
            }
        }
        t
    }

    /// `Δ(x)` as a dense element of `H ⊗ H`.
    pub fn comult(&self, x: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d * d];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (a, b, c) in &self.comult[i] {
                out[a * d + b] += xi * c;
            }
        }
        out
    }

    pub fn counit(&self) -> &[Q] {
        &self.counit
    }

    pub fn counit_of(&self, x: &[Q]) -> Q {
        x.iter().zip(&self.counit).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn antipode_matrix(&self) -> &SparseMatrix {
        &self.antipode
    }

    pub fn antipode(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, row) in (0..self.dim()).map(|i| (i, self.antipode.row(i))) {
            for (j, s) in row {
                out[i] += s * &x[*j];
            }
        }
        out
    }

    /// `S(b_i)` as a sparse vector.
    pub fn antipode_basis(&self, i: usize) -> SVec {
        self.antipode.column(i)
    }

    pub fn unit(&self) -> &[Q] {
        self.algebra.unit()
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        self.algebra.mul(a, b)
    }

    /// Product in `H ⊗ H` of dense elements.
    pub fn mul2(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d * d];
        for (p, xv) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (r, yv) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xv * yv;
                for (k, u) in self.algebra.mul_basis(p / d, r / d) {
                    for (l, w) in self.algebra.mul_basis(p % d, r % d) {
                        out[k * d + l] += &c * u * w;
                    }
                }
            }
        }
        out
    }
}

fn comult_labels(h: &Hopf, f: impl Fn(&str) -> String) -> Vec<String> {
    h.algebra.labels().iter().map(|l| f(l)).collect()
}

/// Group algebra kG: `Δ(b_g) = b_g ⊗ b_g`, `ε(b_g) = 1`, `S(b_g) = b_{g⁻¹}`.
pub fn group_algebra(g: &GroupTable) -> Hopf {
    let n = g.order();
    let table = (0..n * n).map(|ij| vec![(g.mul(ij / n, ij % n), Q::one())]).collect();
    let algebra = Algebra::from_table(g.labels().to_vec(), table, basis_vector(n, g.identity()));
    let comult = (0..n).map(|i| vec![(i, i, Q::one())]).collect();
    let antipode = SparseMatrix::from_triplets(n, n, (0..n).map(|i| (g.inverse(i), i, Q::one())));
    Hopf::from_parts(algebra, comult, vec![Q::one(); n], antipode).expect("well-formed group algebra")
}

/// The trivial Hopf algebra 𝕜.
pub fn trivial_hopf() -> Hopf {
    let comult = vec![vec![(0, 0, Q::one())]];
    Hopf::from_parts(Algebra::ground(), comult, vec![Q::one()], SparseMatrix::identity(1))
        .expect("well-formed")
}

/// H* on the dual basis: structure maps are transposes of those of `h`.
pub fn dual_hopf(h: &Hopf) -> Hopf {
    let d = h.dim();
    let mut table = vec![Vec::new(); d * d];
    for (k, terms) in h.comult.iter().enumerate() {
        for (a, b, c) in terms {
            table[a * d + b].push((k, c.clone()));
        }
    }
    let labels = comult_labels(h, |l| format!("δ[{l}]"));
    let algebra = Algebra::from_table(labels, table, h.counit.clone());
    let mut comult = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            for (k, c) in h.algebra.mul_basis(i, j) {
                comult[*k].push((i, j, c.clone()));
            }
        }
    }
    Hopf::from_parts(algebra, comult, h.unit().to_vec(), h.antipode.transpose())
        .expect("dual of well-formed data")
}

fn swap_comult(c: &[Vec<(usize, usize, Q)>]) -> Vec<Vec<(usize, usize, Q)>> {
    c.iter().map(|t| t.iter().map(|(a, b, x)| (*b, *a, x.clone())).collect()).collect()
}

fn inverse_antipode(h: &Hopf) -> Result<SparseMatrix, HopfError> {
    let inv = inverse(&h.antipode.to_dense()).ok_or(HopfError::SingularAntipode)?;
    Ok(SparseMatrix::from_dense(&inv))
}

/// H^{op cop}: both multiplication and comultiplication reversed; S unchanged.
pub fn op_cop(h: &Hopf) -> Hopf {
    Hopf::from_parts(
        h.algebra.opposite(),
        swap_comult(&h.comult),
        h.counit.clone(),
        h.antipode.clone(),
    )
    .expect("well-formed")
}

/// H^{cop}: comultiplication reversed, antipode S⁻¹.
pub fn cop(h: &Hopf) -> Result<Hopf, HopfError> {
    Hopf::from_parts(h.algebra.clone(), swap_comult(&h.comult), h.counit.clone(), inverse_antipode(h)?)
}

/// H^{op}: multiplication reversed, antipode S⁻¹.
pub fn op(h: &Hopf) -> Result<Hopf, HopfError> {
    Hopf::from_parts(h.algebra.opposite(), h.comult.clone(), h.counit.clone(), inverse_antipode(h)?)
}

/// `H^{+1} = H`, `H^{-1} = H^{op cop}`.
pub fn signed(h: &Hopf, eps: i8) -> Hopf {
    if eps > 0 {
        h.clone()
    } else {
        op_cop(h)
    }
}

/// Tensor product Hopf algebra with basis index `i * b.dim() + j`.
pub fn tensor_hopf(a: &Hopf, b: &Hopf) -> Hopf {
    let (da, db) = (a.dim(), b.dim());
    let algebra = a.algebra.tensor(&b.algebra);
    let mut comult = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            let mut t = Vec::new();
            for (a1, a2, x) in &a.comult[i] {
                for (b1, b2, y) in &b.comult[j] {
                    t.push((a1 * db + b1, a2 * db + b2, x * y));
                }
            }
            comult.push(t);
        }
    }
    let counit = a.counit.iter().flat_map(|x| b.counit.iter().map(move |y| x * y)).collect();
    let antipode = a.antipode.kron(&b.antipode);
    Hopf::from_parts(algebra, comult, counit, antipode).expect("well-formed")
}

/// The normalized two-sided integral of a semisimple Hopf algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaarIntegral {
    pub element: Vec<Q>,
}

/// Solves `b_i ℓ = ε(b_i) ℓ` for all `i` together with `ε(ℓ) = 1`.
pub fn haar_integral(h: &Hopf) -> Result<HaarIntegral, HopfError> {
    let d = h.dim();
    let mut rows = Vec::with_capacity(d * d + 1);
    let mut rhs = Vec::with_capacity(d * d + 1);
    for i in 0..d {
        let mut l = h.algebra.left_mult_matrix(&basis_vector(d, i)).to_dense();
        for (r, row) in l.iter_mut().enumerate() {
            row[r] -= &h.counit[i];
        }
        rows.extend(l);
        rhs.extend(std::iter::repeat_n(Q::zero(), d));
    }
    rows.push(h.counit.clone());
    rhs.push(Q::one());
    let element = solve(&rows, &rhs).ok_or(HopfError::NoHaarIntegral)?;
    let ell = HaarIntegral { element };
    if !check_haar(h, &ell).all_passed() {
        return Err(HopfError::NoHaarIntegral);
    }
    Ok(ell)
}

/// Verifies the integral identities of `ell`, including cocommutativity.
pub fn check_haar(h: &Hopf, ell: &HaarIntegral) -> Report {
    let d = h.dim();
    let l = &ell.element;
    let mut r = Report::new();
    let left = (0..d).find(|&i| {
        let x = basis_vector(d, i);
        let scaled: Vec<Q> = l.iter().map(|v| v * &h.counit[i]).collect();
        h.mul(&x, l) != scaled
    });
    r.record("left invariance", left.map(|i| format!("fails for {}", h.algebra.label(i))));
    let right = (0..d).find(|&i| {
        let x = basis_vector(d, i);
        let scaled: Vec<Q> = l.iter().map(|v| v * &h.counit[i]).collect();
        h.mul(l, &x) != scaled
    });
    r.record("right invariance", right.map(|i| format!("fails for {}", h.algebra.label(i))));
    let norm = h.counit_of(l);
    r.record("normalization", (!norm.is_one()).then(|| format!("ε(ℓ) = {norm}")));
    let dl = h.comult(l);
    let asym = (0..d * d).find(|&p| dl[p] != dl[(p % d) * d + p / d]);
    r.record(
        "cocommutativity",
        asym.map(|p| format!("Δ(ℓ) differs at ({}, {})", h.algebra.label(p / d), h.algebra.label(p % d))),
    );
    r
}

/// Checks every Hopf axiom exactly; each failure names a basis counterexample.
pub fn validate_hopf(h: &Hopf) -> Report {
    let d = h.dim();
    let lab = |i: usize| h.algebra.label(i).to_string();
    let mut r = Report::new();

    r.record(
        "associativity",
        h.algebra
            .associativity_failure()
            .map(|(i, j, k)| format!("(b_i b_j) b_k ≠ b_i (b_j b_k) at ({}, {}, {})", lab(i), lab(j), lab(k))),
    );
    r.record("unit", h.algebra.unit_failure().map(|i| format!("fails at {}", lab(i))));

    // (Δ ⊗ id)Δ = (id ⊗ Δ)Δ
    let coassoc = (0..d).find(|&i| {
        let mut left = vec![Q::zero(); d * d * d];
        let mut right = vec![Q::zero(); d * d * d];
        for (a, b, c) in &h.comult[i] {
            for (a1, a2, c1) in &h.comult[*a] {
                left[(a1 * d + a2) * d + b] += c * c1;
            }
            for (b1, b2, c2) in &h.comult[*b] {
                right[(a * d + b1) * d + b2] += c * c2;
            }
        }
        left != right
    });
    r.record("coassociativity", coassoc.map(|i| format!("fails at {}", lab(i))));

    let counit_fail = (0..d).find(|&i| {
        let mut left = vec![Q::zero(); d];
        let mut right = vec![Q::zero(); d];
        for (a, b, c) in &h.comult[i] {
            left[*b] += c * &h.counit[*a];
            right[*a] += c * &h.counit[*b];
        }
        let e = basis_vector(d, i);
        left != e || right != e
    });
    r.record("counit", counit_fail.map(|i| format!("fails at {}", lab(i))));

    let mut delta_mult = None;
    'outer: for i in 0..d {
        for j in 0..d {
            let lhs = h.comult(&h.mul(&basis_vector(d, i), &basis_vector(d, j)));
            let rhs = h.mul2(&h.comult(&basis_vector(d, i)), &h.comult(&basis_vector(d, j)));
            if lhs != rhs {
                delta_mult = Some(format!("Δ(b_i b_j) ≠ Δ(b_i)Δ(b_j) at ({}, {})", lab(i), lab(j)));
                break 'outer;
            }
        }
    }
    r.record("comultiplication multiplicative", delta_mult);

    let du = h.comult(h.unit());
    let mut uu = vec![Q::zero(); d * d];
    for (a, x) in h.unit().iter().enumerate() {
        for (b, y) in h.unit().iter().enumerate() {
            uu[a * d + b] = x * y;
        }
    }
    r.record("comultiplication unital", (du != uu).then(|| "Δ(1) ≠ 1 ⊗ 1".to_string()));

    let mut eps_mult = None;
    'outer2: for i in 0..d {
        for j in 0..d {
            let lhs = h.counit_of(&h.mul(&basis_vector(d, i), &basis_vector(d, j)));
            if lhs != &h.counit[i] * &h.counit[j] {
                eps_mult = Some(format!("ε(b_i b_j) ≠ ε(b_i)ε(b_j) at ({}, {})", lab(i), lab(j)));
                break 'outer2;
            }
        }
    }
    r.record("counit multiplicative", eps_mult);
    let eu = h.counit_of(h.unit());
    r.record("counit unital", (!eu.is_one()).then(|| format!("ε(1) = {eu}")));

    let (mut s_left, mut s_right) = (Vec::new(), Vec::new());
    for i in 0..d {
        let mut left = vec![Q::zero(); d];
        let mut right = vec![Q::zero(); d];
        for (a, b, c) in &h.comult[i] {
            for (k, x) in h.algebra.mul_sparse(&h.antipode_basis(*a), &[(*b, c.clone())]) {
                left[k] += x;
            }
            for (k, x) in h.algebra.mul_sparse(&[(*a, c.clone())], &h.antipode_basis(*b)) {
                right[k] += x;
            }
        }
        let expect: Vec<Q> = h.unit().iter().map(|u| u * &h.counit[i]).collect();
        if left != expect {
            s_left.push(lab(i));
        }
        if right != expect {
            s_right.push(lab(i));
        }
    }
    let at = |v: Vec<String>| (!v.is_empty()).then(|| v.join(", "));
    r.record("antipode (left)", at(s_left).map(|l| format!("S(x₁)x₂ ≠ ε(x)1 at {l}")));
    r.record("antipode (right)", at(s_right).map(|l| format!("x₁S(x₂) ≠ ε(x)1 at {l}")));

    let s2 = h.antipode.mul(&h.antipode);
    let inv = (!s2.is_identity()).then(|| {
        let col = (0..d).find(|&i| s2.column(i) != vec![(i, Q::one())]).unwrap_or(0);
        format!("S² ≠ id at {}", lab(col))
    });
    r.record("antipode involutive", inv);
    r
}
