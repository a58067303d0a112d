use num_traits::{One, Zero};

use crate::linalg::{charpoly, dense_rank, nullspace, rational_roots, rref, solve, SparseMatrix, Tensor, Q};

/// Sparse vector as sorted `(index, value)` pairs without zeros.
pub type SVec = Vec<(usize, Q)>;

/// Finite-dimensional associative algebra given by structure constants.
///
/// `table[i * dim + j]` holds the expansion of `b_i · b_j`. Basis labels are
/// carried for diagnostics only and do not take part in equality.
#[derive(Debug, Clone)]
pub struct Algebra {
    labels: Vec<String>,
    table: Vec<SVec>,
    unit: Vec<Q>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.unit == other.unit
    }
}

impl Eq for Algebra {}

pub(crate) fn normalize(mut v: Vec<(usize, Q)>) -> SVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub(crate) fn dense_from_sparse(dim: usize, v: &[(usize, Q)]) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (i, x) in v {
        out[*i] += x;
    }
    out
}

pub(crate) fn sparse_from_dense(v: &[Q]) -> SVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// `e_i` as a dense vector.
pub fn basis_vector(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

impl Algebra {
    /// Builds an algebra from a product table; no axioms are checked.
    pub fn from_table(labels: Vec<String>, table: Vec<SVec>, unit: Vec<Q>) -> Self {
        let dim = labels.len();
        assert_eq!(table.len(), dim * dim, "product table has wrong size");
        assert_eq!(unit.len(), dim, "unit has wrong length");
        let table = table.into_iter().map(normalize).collect();
        Algebra { labels, table, unit }
    }

    /// Builds an algebra from the structure tensor `m[i][j][k]`.
    pub fn from_tensor(labels: Vec<String>, mult: &Tensor, unit: Vec<Q>) -> Self {
        let dim = labels.len();
        assert_eq!(mult.dims(), &[dim, dim, dim]);
        let mut table = vec![Vec::new(); dim * dim];
        for (idx, v) in mult.iter() {
            table[idx[0] * dim + idx[1]].push((idx[2], v.clone()));
        }
        Algebra::from_table(labels, table, unit)
    }

    /// The one-dimensional algebra 𝕜.
    pub fn ground() -> Self {
        Algebra::from_table(vec!["1".into()], vec![vec![(0, Q::one())]], vec![Q::one()])
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i * self.dim() + j]
    }

    pub fn mult_tensor(&self) -> Tensor {
        let d = self.dim();
        let mut t = Tensor::new(vec![d, d, d]);
        for i in 0..d {
            for j in 0..d {
                for (k, v) in self.mul_basis(i, j) {
                    t.add(&[i, j, *k], v);
                }
            }
        }
        t
    }

    /// Product of two dense elements.
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.mul_basis(i, j) {
                    out[*k] += &xy * c;
                }
            }
        }
        out
    }

    /// Product of two sparse elements.
    pub fn mul_sparse(&self, a: &[(usize, Q)], b: &[(usize, Q)]) -> SVec {
        let mut acc = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in self.mul_basis(*i, *j) {
                    acc.push((*k, &xy * c));
                }
            }
        }
        normalize(acc)
    }

    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let table = (0..d * d).map(|ij| self.table[(ij % d) * d + ij / d].clone()).collect();
        Algebra { labels: self.labels.clone(), table, unit: self.unit.clone() }
    }

    /// `self ⊗ other` with basis index `i * other.dim() + j`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let mut table = Vec::with_capacity(d * d);
        for x in 0..d {
            for y in 0..d {
                let (i1, j1) = (x / db, x % db);
                let (i2, j2) = (y / db, y % db);
                let mut entry = Vec::new();
                for (k, u) in self.mul_basis(i1, i2) {
                    for (l, w) in other.mul_basis(j1, j2) {
                        entry.push((k * db + l, u * w));
                    }
                }
                table.push(normalize(entry));
            }
        }
        let mut unit = vec![Q::zero(); d];
        for (i, u) in self.unit.iter().enumerate() {
            for (j, w) in other.unit.iter().enumerate() {
                unit[i * db + j] = u * w;
            }
        }
        Algebra { labels, table, unit }
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult_matrix(&self, x: &[Q]) -> SparseMatrix {
        let d = self.dim();
        let cols = (0..d).map(|j| sparse_from_dense(&self.mul(x, &basis_vector(d, j)))).collect();
        SparseMatrix::from_columns(d, cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult_matrix(&self, x: &[Q]) -> SparseMatrix {
        let d = self.dim();
        let cols = (0..d).map(|j| sparse_from_dense(&self.mul(&basis_vector(d, j), x))).collect();
        SparseMatrix::from_columns(d, cols)
    }

    /// `tr(L_x)`.
    pub fn left_trace(&self, x: &[Q]) -> Q {
        let d = self.dim();
        let mut t = Q::zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for j in 0..d {
                if let Some((_, c)) = self.mul_basis(i, j).iter().find(|(k, _)| *k == j) {
                    t += xi * c;
                }
            }
        }
        t
    }

    /// Gram matrix of the trace form `T(b_i, b_j) = tr(L_{b_i b_j})`.
    pub fn trace_form(&self) -> Vec<Vec<Q>> {
        let d = self.dim();
        let basis_traces: Vec<Q> = (0..d).map(|k| self.left_trace(&basis_vector(d, k))).collect();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        self.mul_basis(i, j)
                            .iter()
                            .fold(Q::zero(), |acc, (k, c)| acc + c * &basis_traces[*k])
                    })
                    .collect()
            })
            .collect()
    }

    /// Basis of the center, from the linear system `b_i z = z b_i`.
    pub fn center(&self) -> Vec<Vec<Q>> {
        let d = self.dim();
        let mut rows = Vec::with_capacity(d * d);
        for i in 0..d {
            let bi = basis_vector(d, i);
            let comm = self.left_mult_matrix(&bi).sub(&self.right_mult_matrix(&bi));
            rows.extend(comm.to_dense());
        }
        nullspace(&rows, d)
    }

    pub fn center_dimension(&self) -> usize {
        self.center().len()
    }

    /// Whether the trace form is nondegenerate.
    pub fn is_trace_form_nondegenerate(&self) -> bool {
        dense_rank(&self.trace_form()) == self.dim()
    }

    /// First basis triple violating associativity.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul_basis(i, j).to_vec();
                for k in 0..d {
                    let left = self.mul_sparse(&ij, &[(k, Q::one())]);
                    let right = self.mul_sparse(&[(i, Q::one())], self.mul_basis(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First basis element for which the unit laws fail.
    pub fn unit_failure(&self) -> Option<usize> {
        let d = self.dim();
        let u = sparse_from_dense(&self.unit);
        (0..d).find(|&i| {
            let e = vec![(i, Q::one())];
            self.mul_sparse(&u, &e) != e || self.mul_sparse(&e, &u) != e
        })
    }

    /// Basis of the two-sided ideal generated by all commutators.
    pub fn commutator_ideal(&self) -> Vec<Vec<Q>> {
        let d = self.dim();
        let mut gens: Vec<Vec<Q>> = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let mut c = dense_from_sparse(d, self.mul_basis(i, j));
                for (k, x) in self.mul_basis(j, i) {
                    c[*k] -= x;
                }
                gens.push(c);
            }
        }
        let mut basis = echelon_basis(gens);
        loop {
            let mut grown = basis.clone();
            for v in &basis {
                for k in 0..d {
                    let bk = basis_vector(d, k);
                    grown.push(self.mul(&bk, v));
                    grown.push(self.mul(v, &bk));
                }
            }
            let next = echelon_basis(grown);
            if next.len() == basis.len() {
                return basis;
            }
            basis = next;
        }
    }

    /// All algebra characters `t: A → ℚ`, as value vectors `t(b_i)`.
    ///
    /// Characters vanish on the commutator ideal `I`; on `I^⊥` the maps
    /// `t ↦ t(b_k ·)` commute, and each character is a joint eigenvector with
    /// rational eigenvalues. Returns `None` if a characteristic polynomial has
    /// coefficients too large for the rational root search.
    pub fn characters(&self) -> Option<Vec<Vec<Q>>> {
        let d = self.dim();
        let ideal = self.commutator_ideal();
        let perp = if ideal.is_empty() {
            (0..d).map(|i| basis_vector(d, i)).collect()
        } else {
            nullspace(&ideal, d)
        };
        let mut spaces: Vec<Vec<Vec<Q>>> = if perp.is_empty() { Vec::new() } else { vec![perp] };
        for k in 0..d {
            // (T_k t)_j = t(b_k b_j)
            let tk: Vec<Vec<Q>> = (0..d)
                .map(|j| dense_from_sparse(d, self.mul_basis(k, j)))
                .collect();
            let mut next = Vec::new();
            for space in spaces {
                let r = space.len();
                // Columns of `space` form B; solve B C = T_k B.
                let bmat: Vec<Vec<Q>> = (0..d).map(|i| space.iter().map(|v| v[i].clone()).collect()).collect();
                let mut cmat = vec![vec![Q::zero(); r]; r];
                for (col, v) in space.iter().enumerate() {
                    let image: Vec<Q> = tk.iter().map(|row| dot(row, v)).collect();
                    let c = solve(&bmat, &image)?;
                    for (row, x) in c.into_iter().enumerate() {
                        cmat[row][col] = x;
                    }
                }
                for lambda in rational_roots(&charpoly(&cmat))? {
                    let mut shifted = cmat.clone();
                    for (i, row) in shifted.iter_mut().enumerate() {
                        row[i] -= &lambda;
                    }
                    let eig: Vec<Vec<Q>> = nullspace(&shifted, r)
                        .into_iter()
                        .map(|y| {
                            (0..d)
                                .map(|i| y.iter().zip(&space).fold(Q::zero(), |a, (yc, v)| a + yc * &v[i]))
                                .collect()
                        })
                        .collect();
                    if !eig.is_empty() {
                        next.push(eig);
                    }
                }
            }
            spaces = next;
        }
        let mut out = Vec::new();
        for space in spaces {
            for v in space {
                let at_one = dot(&v, &self.unit);
                if at_one.is_zero() {
                    continue;
                }
                let t: Vec<Q> = v.iter().map(|x| x / &at_one).collect();
                if self.is_character(&t) && !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out.sort();
        Some(out)
    }

    /// Whether `t` is multiplicative and unital.
    pub fn is_character(&self, t: &[Q]) -> bool {
        let d = self.dim();
        if !dot(t, &self.unit).is_one() {
            return false;
        }
        (0..d).all(|i| {
            (0..d).all(|j| {
                let v = self.mul_basis(i, j).iter().fold(Q::zero(), |a, (k, c)| a + c * &t[*k]);
                v == &t[i] * &t[j]
            })
        })
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).filter(|(x, _)| !x.is_zero()).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Nonzero rows of the reduced echelon form of `rows`.
fn echelon_basis(rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut m = rows;
    let r = rref(&mut m).len();
    m.truncate(r);
    m
}
