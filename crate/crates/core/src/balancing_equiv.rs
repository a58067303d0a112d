//! Balancings on `K`-modules versus modules over `H*_{ε,ε'} ⋊ K`, as matrices.
//!
//! A balancing is written as `β_X : X ⊗ M → M ⊗ X`. Tensor factors are ordered
//! as written, first factor most significant.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::comodule::{Bicomodule, ComoduleError};
use crate::crossed::{crossed_product, BalancingAlgebra, CrossedError, LeftComodule, VertexAlgebra, VertexModule};
use crate::hopf::{basis_vector, Hopf, SVec};
use crate::linalg::{SparseMatrix, Q};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BalancingError {
    #[error("invalid module: {0}")]
    ModuleInvalid(String),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
}

/// A left `H`-module by the matrices of the basis elements of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct HModule {
    pub dim: usize,
    pub action: Vec<SparseMatrix>,
}

impl HModule {
    /// `H` acting on itself by left multiplication.
    pub fn regular(h: &Hopf) -> Self {
        let d = h.dim();
        let action = (0..d).map(|i| h.algebra().left_mult_matrix(&basis_vector(d, i))).collect();
        HModule { dim: d, action }
    }

    /// `𝕜` with `h.1 = ε(h)`.
    pub fn trivial(h: &Hopf) -> Self {
        let action = h.counit().iter().map(|c| SparseMatrix::identity(1).scale(c)).collect();
        HModule { dim: 1, action }
    }

    /// `X ⊗ Y` through the coproduct.
    pub fn tensor(h: &Hopf, x: &HModule, y: &HModule) -> Self {
        let n = x.dim * y.dim;
        let action = (0..h.dim())
            .map(|i| {
                h.comult_basis(i).iter().fold(SparseMatrix::zeros(n, n), |acc, (a, b, c)| {
                    acc.add_scaled(&x.action[*a].kron(&y.action[*b]), c)
                })
            })
            .collect();
        HModule { dim: n, action }
    }

    pub fn act(&self, h: &[(usize, Q)]) -> SparseMatrix {
        h.iter().fold(SparseMatrix::zeros(self.dim, self.dim), |acc, (i, c)| acc.add_scaled(&self.action[*i], c))
    }
}

/// `𝕜`, `H_reg` and `H_reg ⊗ H_reg`.
pub fn test_family(h: &Hopf) -> Vec<HModule> {
    let reg = HModule::regular(h);
    vec![HModule::trivial(h), reg.clone(), HModule::tensor(h, &reg, &reg)]
}

/// A module over `H*_{ε,ε'} ⋊ K`: `dual_action[f]` for the dual basis `e^f`, `k_action[k]` for `b_k`.
#[derive(Debug, Clone)]
pub struct CrossedModule {
    pub site: BalancingAlgebra,
    pub comodule: Bicomodule,
    pub dim: usize,
    pub dual_action: Vec<SparseMatrix>,
    pub k_action: Vec<SparseMatrix>,
}

impl CrossedModule {
    /// The crossed product acting on itself.
    pub fn regular(site: &BalancingAlgebra, k: &Bicomodule) -> Result<Self, BalancingError> {
        let cp = crossed_product(site.as_module_algebra(), &LeftComodule::from_bicomodule(k)?)?;
        let (dh, dk) = (site.dim(), k.dim());
        let left = |v: Vec<Q>| cp.algebra().left_mult_matrix(&v);
        let dual_action = (0..dh).map(|f| left(cp.embed_module(&basis_vector(dh, f)))).collect();
        let k_action = (0..dk).map(|j| left(cp.embed_comodule(&basis_vector(dk, j)))).collect();
        Ok(CrossedModule { site: site.clone(), comodule: k.clone(), dim: cp.dim(), dual_action, k_action })
    }

    /// Multiplication and unit of `H* ⋊ K` are represented, with `e^f ⊗ b_k ↦ ρ(e^f) ρ(b_k)`.
    pub fn validate(&self) -> Result<Report, BalancingError> {
        let mut r = Report::new();
        let (dh, dk) = (self.site.dim(), self.comodule.dim());
        if self.dual_action.len() != dh || self.k_action.len() != dk {
            r.fail("generator counts", format!("{} and {} generators for {dh} and {dk}", self.dual_action.len(), self.k_action.len()));
            return Ok(r);
        }
        if self.dual_action.iter().chain(&self.k_action).any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            r.fail("generator shapes", format!("generators must be {0}×{0}", self.dim));
            return Ok(r);
        }
        let cp = crossed_product(self.site.as_module_algebra(), &LeftComodule::from_bicomodule(&self.comodule)?)?;
        let n = cp.dim();
        let rep: Vec<SparseMatrix> = (0..n).map(|x| self.dual_action[x / dk].mul(&self.k_action[x % dk])).collect();
        let unit = cp.algebra().unit().iter().enumerate().fold(SparseMatrix::zeros(self.dim, self.dim), |acc, (x, c)| acc.add_scaled(&rep[x], c));
        r.record("unit", (!unit.is_identity()).then(|| "the unit does not act as the identity".to_string()));
        let bad = (0..n * n).into_par_iter().find_map_first(|xy| {
            let (x, y) = (xy / n, xy % n);
            let lhs = rep[x].mul(&rep[y]);
            let rhs = cp.algebra().mul_basis(x, y).iter().fold(SparseMatrix::zeros(self.dim, self.dim), |acc, (z, c)| acc.add_scaled(&rep[*z], c));
            (lhs != rhs).then(|| format!("{} · {}", cp.algebra().label(x), cp.algebra().label(y)))
        });
        r.record("multiplication", bad);
        Ok(r)
    }

    fn ensure_valid(&self) -> Result<(), BalancingError> {
        let r = self.validate()?;
        let failure = r.failures().next().map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()));
        failure.map_or(Ok(()), |f| Err(BalancingError::ModuleInvalid(f)))
    }
}

/// `X ⊗ M → M ⊗ X` for matrices `a` on `M` and `b` on `X`: `x ⊗ m ↦ a m ⊗ b x`.
fn swapped(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let (dm, dx) = (a.rows(), b.rows());
    let mut entries = Vec::new();
    for (mo, mi, u) in a.entries() {
        for (xo, xi, w) in b.entries() {
            entries.push((mo * dx + xo, xi * dm + mi, u * w));
        }
    }
    SparseMatrix::from_triplets(dm * dx, dx * dm, entries)
}

/// `β_X(x ⊗ m) = Σ_i e^i.m ⊗ e_i.x`.
pub fn balancing_from_module(m: &CrossedModule, x: &HModule) -> Result<SparseMatrix, BalancingError> {
    m.ensure_valid()?;
    Ok(beta(m, x))
}

fn beta(m: &CrossedModule, x: &HModule) -> SparseMatrix {
    let n = m.dim * x.dim;
    (0..m.site.dim()).fold(SparseMatrix::zeros(n, n), |acc, i| acc.add(&swapped(&m.dual_action[i], &x.action[i])))
}

type BetaFn = dyn Fn(&HModule) -> SparseMatrix + Send + Sync;

/// A `K`-module `M` with a family `β_X : X ⊗ M → M ⊗ X`.
#[derive(Clone)]
pub struct BalancingFamily {
    pub site: BalancingAlgebra,
    pub comodule: Bicomodule,
    pub dim: usize,
    pub k_action: Vec<SparseMatrix>,
    pub beta: Arc<BetaFn>,
}

impl fmt::Debug for BalancingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BalancingFamily")
            .field("eps_left", &self.site.eps_left())
            .field("eps_right", &self.site.eps_right())
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl BalancingFamily {
    pub fn beta(&self, x: &HModule) -> SparseMatrix {
        (self.beta)(x)
    }
}

/// The balancing of a validated module.
pub fn balancing_family(m: &CrossedModule) -> Result<BalancingFamily, BalancingError> {
    m.ensure_valid()?;
    let owned = m.clone();
    Ok(BalancingFamily {
        site: m.site.clone(),
        comodule: m.comodule.clone(),
        dim: m.dim,
        k_action: m.k_action.clone(),
        beta: Arc::new(move |x: &HModule| beta(&owned, x)),
    })
}

/// `ρ(f ⊗ m) = (id ⊗ f) β_{H_reg}(1_H ⊗ m)`, validated as a module over `H* ⋊ K`.
pub fn module_from_balancing(b: &BalancingFamily) -> Result<CrossedModule, BalancingError> {
    let h = b.site.base();
    let d = h.dim();
    let dm = b.dim;
    let beta = b.beta(&HModule::regular(h));
    if beta.rows() != dm * d || beta.cols() != d * dm {
        return Err(BalancingError::NotAModule(format!("β on H_reg has shape {}×{}", beta.rows(), beta.cols())));
    }
    let unit: SVec = h.unit().iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let mut entries: Vec<Vec<(usize, usize, Q)>> = vec![Vec::new(); d];
    for (row, col, v) in beta.entries() {
        let (mo, f) = (row / d, row % d);
        let (u, mi) = (col / dm, col % dm);
        if let Some((_, c)) = unit.iter().find(|(i, _)| *i == u) {
            entries[f].push((mo, mi, c * v));
        }
    }
    let dual_action = entries.into_iter().map(|e| SparseMatrix::from_triplets(dm, dm, e)).collect();
    let m = CrossedModule {
        site: b.site.clone(),
        comodule: b.comodule.clone(),
        dim: dm,
        dual_action,
        k_action: b.k_action.clone(),
    };
    let r = m.validate()?;
    let failure = r.failures().next().map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()));
    failure.map_or(Ok(m), |f| Err(BalancingError::NotAModule(f)))
}

fn bracket(h: &Hopf, i: usize, eps: i8) -> SVec {
    if eps > 0 {
        vec![(i, Q::one())]
    } else {
        h.antipode_basis(i)
    }
}

/// `K` acting on `X ⊗ M` by `⟨k₍₋₁₎⟩^ε.x ⊗ k₍₀₎.m` and on `M ⊗ X` by `k₍₀₎.m ⊗ ⟨k₍₁₎⟩^{ε'}.x`.
fn k_actions(b: &BalancingFamily, x: &HModule, k: usize) -> (SparseMatrix, SparseMatrix) {
    let h = b.site.base();
    let (eps, eps_p) = (b.site.eps_right(), b.site.eps_left());
    let n = x.dim * b.dim;
    let mut on_xm = SparseMatrix::zeros(n, n);
    let mut on_mx = SparseMatrix::zeros(n, n);
    for (l, k0, r, c) in b.comodule.coaction_basis(k) {
        let right_counit = &b.comodule.right_hopf().counit()[*r];
        if !right_counit.is_zero() {
            let s = c * right_counit;
            on_xm = on_xm.add_scaled(&x.act(&bracket(h, *l, eps)).kron(&b.k_action[*k0]), &s);
        }
        let left_counit = &b.comodule.left_hopf().counit()[*l];
        if !left_counit.is_zero() {
            let s = c * left_counit;
            on_mx = on_mx.add_scaled(&b.k_action[*k0].kron(&x.act(&bracket(h, *r, eps_p))), &s);
        }
    }
    (on_xm, on_mx)
}

/// `H`-module maps used for naturality: right multiplications and the counit and
/// coproduct of `H_reg`, and `h ↦ h.x` into each module of `family`.
fn naturality_maps(h: &Hopf, family: &[HModule]) -> Vec<(String, HModule, HModule, SparseMatrix)> {
    let d = h.dim();
    let reg = HModule::regular(h);
    let mut maps = Vec::new();
    for a in 0..d {
        maps.push((format!("right multiplication by b_{a}"), reg.clone(), reg.clone(), h.algebra().right_mult_matrix(&basis_vector(d, a))));
    }
    let counit = SparseMatrix::from_triplets(1, d, h.counit().iter().cloned().enumerate().map(|(j, c)| (0, j, c)));
    maps.push(("counit".into(), reg.clone(), HModule::trivial(h), counit));
    let coproduct = SparseMatrix::from_triplets(
        d * d,
        d,
        (0..d).flat_map(|j| h.comult_basis(j).iter().map(move |(a, b, c)| (a * d + b, j, c.clone())).collect::<Vec<_>>()),
    );
    maps.push(("coproduct".into(), reg.clone(), HModule::tensor(h, &reg, &reg), coproduct));
    for (t, x) in family.iter().enumerate() {
        for v in 0..x.dim {
            let columns = (0..d).map(|j| x.action[j].column(v)).collect();
            maps.push((format!("orbit map of basis vector {v} in test module {t}"), reg.clone(), x.clone(), SparseMatrix::from_columns(x.dim, columns)));
        }
    }
    maps
}

/// Invertibility, triangle, hexagon, naturality and `K`-linearity of `b` on `family`.
pub fn check_balancing(b: &BalancingFamily, family: &[HModule]) -> Report {
    let h = b.site.base();
    let mut r = Report::new();
    let id_m = SparseMatrix::identity(b.dim);
    let betas: Vec<SparseMatrix> = family.iter().map(|x| b.beta(x)).collect();
    let singular: Vec<usize> = betas.iter().enumerate().filter(|(_, m)| m.rank() != m.rows()).map(|(t, _)| t).collect();
    r.record("invertible", (!singular.is_empty()).then(|| format!("singular on test modules {singular:?}")));
    let triangle = b.beta(&HModule::trivial(h));
    r.record("triangle", (triangle != id_m).then(|| "β on 𝕜 is not the identity".to_string()));
    let mut hexagon = None;
    for (i, x) in family.iter().enumerate() {
        for (j, y) in family.iter().enumerate() {
            if x.dim * y.dim > 64 || hexagon.is_some() {
                continue;
            }
            let lhs = b.beta(&HModule::tensor(h, x, y));
            let rhs = betas[i].kron(&SparseMatrix::identity(y.dim)).mul(&SparseMatrix::identity(x.dim).kron(&betas[j]));
            if lhs != rhs {
                hexagon = Some(format!("test modules {i} and {j}"));
            }
        }
    }
    r.record("hexagon", hexagon);
    let natural = naturality_maps(h, family).into_iter().find_map(|(name, x, y, phi)| {
        let lhs = b.beta(&y).mul(&phi.kron(&id_m));
        let rhs = id_m.kron(&phi).mul(&b.beta(&x));
        (lhs != rhs).then_some(name)
    });
    r.record("naturality", natural);
    let linear = family.iter().enumerate().find_map(|(t, x)| {
        let bx = &betas[t];
        (0..b.comodule.dim()).find_map(|k| {
            let (on_xm, on_mx) = k_actions(b, x, k);
            (bx.mul(&on_xm) != on_mx.mul(bx)).then(|| format!("b_{k} on test module {t}"))
        })
    });
    r.record("K-linearity", linear);
    r
}

/// Module → balancing → module and balancing → module → balancing on the test family.
pub fn check_round_trips(m: &CrossedModule) -> Result<Report, BalancingError> {
    let mut r = Report::new();
    let fam = balancing_family(m)?;
    let back = module_from_balancing(&fam)?;
    let same = back.dual_action == m.dual_action && back.k_action == m.k_action;
    r.record("module round trip", (!same).then(|| "recovered action differs".to_string()));
    let again = balancing_family(&back)?;
    let bad = test_family(m.site.base()).iter().enumerate().find_map(|(t, x)| (again.beta(x) != fam.beta(x)).then(|| format!("test module {t}")));
    r.record("balancing round trip", bad);
    r.extend_prefixed("balancing", check_balancing(&fam, &test_family(m.site.base())));
    Ok(r)
}

/// `K_i ⊗ K_j` with the left leg of `K_i` and the right leg of `K_j`; the other
/// legs go through the counit.
fn site_comodule(cv: &VertexAlgebra, i: usize, j: usize) -> Result<Bicomodule, BalancingError> {
    let (ki, kj) = (&cv.edge(i).label, &cv.edge(j).label);
    if i == j {
        return Ok(ki.clone());
    }
    let dj = kj.dim();
    let mut coaction = Vec::with_capacity(ki.dim() * dj);
    for a in 0..ki.dim() {
        for b in 0..dj {
            let mut terms = Vec::new();
            for (l, a0, r1, c1) in ki.coaction_basis(a) {
                let e1 = &ki.right_hopf().counit()[*r1];
                if e1.is_zero() {
                    continue;
                }
                for (l2, b0, r, c2) in kj.coaction_basis(b) {
                    let e2 = &kj.left_hopf().counit()[*l2];
                    if !e2.is_zero() {
                        terms.push((*l, a0 * dj + b0, *r, c1 * c2 * e1 * e2));
                    }
                }
            }
            coaction.push(terms);
        }
    }
    Ok(Bicomodule::from_parts(ki.algebra().tensor(kj.algebra()), ki.left_hopf().clone(), kj.right_hopf().clone(), coaction)?)
}

/// For every site `s` of `C_v`, restricts `z` to `H_s* ⋊ (K_i ⊗ K_j)` with `i`, `j` the
/// half-edges whose left and right legs land on `s`, and runs the round trips.
pub fn verify_gluing_equivalence(cv: &VertexAlgebra, z: &VertexModule) -> Report {
    let mut r = Report::new();
    for s in 0..cv.n_sites() {
        let name = format!("site {s}");
        let left = (0..cv.n_edges()).find(|&i| cv.edge(i).left_site == Some(s));
        let right = (0..cv.n_edges()).find(|&j| cv.edge(j).right_site == Some(s));
        let (Some(i), Some(j)) = (left, right) else {
            r.fail(name, "site is missing an adjacent half-edge");
            continue;
        };
        let outcome = site_comodule(cv, i, j).and_then(|k| {
            let dj = cv.edge(j).label.dim();
            let k_action = (0..k.dim())
                .map(|x| if i == j { z.edge_action(i, x).clone() } else { z.edge_action(i, x / dj).mul(z.edge_action(j, x % dj)) })
                .collect();
            let dual_action = (0..cv.site(s).dim()).map(|f| z.site_action(s, f).clone()).collect();
            let m = CrossedModule { site: cv.site(s).clone(), comodule: k, dim: z.dim(), dual_action, k_action };
            check_round_trips(&m)
        });
        match outcome {
            Ok(rep) => {
                let failures: Vec<String> = rep.failures().map(|c| c.name.clone()).collect();
                r.record(name, (!failures.is_empty()).then(|| failures.join(", ")));
            }
            Err(e) => r.fail(name, e.to_string()),
        }
    }
    r
}
