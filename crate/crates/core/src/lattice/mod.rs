//! State space, vertex and plaquette actions, operators and ground spaces.
//!
//! The state space is `(⊗_e K_e*) ⊗ (⊗_v Z_v)` with edges first (ascending id),
//! then vertices. A functional `φ ∈ K_e*` is stored by its coordinates in the dual
//! basis, so an action `φ ↦ φ(a.−)` is the transpose of the matrix of `a.−`.

mod checks;
mod operator;

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::crossed::{CrossedError, VertexAlgebra, VertexModule};
use crate::hopf::{dual_hopf, haar_integral, Hopf, HopfError, SVec};
use crate::linalg::{guarded_product, max_total_dimension, LinalgError, SparseMatrix, Q};
use crate::separability::{symmetric_separability_idempotent, SeparabilityError};
use crate::surface::{dart_sign, vertex_algebra, vertex_module, LabeledSurface, Site, SurfaceError};

pub use checks::{
    check_operators, check_site_independence, check_straightening_representation, ground_space_dimension,
    ground_dimension_auto, hamiltonian, projector_trace, CheckOptions, GroundDimension, GroundMethod,
};
pub use operator::{ChannelOperator, IntVector, Layout, LocalMatrix, Operator, ScaledOperator, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("half-edge {dart} does not bound a site of plaquette {plaquette}")]
    NotASite { plaquette: usize, dart: usize },
    #[error("trace {0} is not a nonnegative integer")]
    NonIntegerTrace(String),
    #[error("projector trace {trace} differs from the Hamiltonian kernel dimension {kernel}")]
    GroundMismatch { trace: usize, kernel: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Separability(#[from] SeparabilityError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// Which sign rule the per-edge plaquette action follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeConvention {
    #[default]
    Standard,
    /// Uses `-ε_p(e)` in place of `ε_p(e)`; a negative control.
    Flipped,
}

#[derive(Debug, Clone)]
pub struct StateSpace {
    surface: LabeledSurface,
    algebras: Vec<VertexAlgebra>,
    modules: Vec<VertexModule>,
    /// Per vertex, the half-edges in the order of the factors of `C_v`.
    darts: Vec<Vec<usize>>,
    /// Per vertex, the site index in `C_v` of the site with `e_p = darts[v][i]`.
    site_index: Vec<Vec<Option<usize>>>,
    layout: Layout,
    convention: EdgeConvention,
}

impl StateSpace {
    pub fn build(s: &LabeledSurface) -> Result<Self, LatticeError> {
        Self::build_with(s, EdgeConvention::Standard)
    }

    pub fn build_with(s: &LabeledSurface, convention: EdgeConvention) -> Result<Self, LatticeError> {
        Self::build_limited(s, convention, max_total_dimension())
    }

    /// Fails with a guard error when the total dimension exceeds `limit`.
    pub fn build_limited(s: &LabeledSurface, convention: EdgeConvention, limit: usize) -> Result<Self, LatticeError> {
        let cells = &s.cells;
        for e in 0..cells.n_edges() {
            let k = &s.edge_labels[e];
            for (side, face, hopf) in [("left", cells.left_face(e), k.left_hopf()), ("right", cells.right_face(e), k.right_hopf())] {
                let ok = match &s.plaquette_labels[face] {
                    Some(h) => **hopf == **h,
                    None => hopf.dim() == 1,
                };
                if !ok {
                    return Err(LatticeError::InvalidLabeling(format!(
                        "edge {e}: {side} coaction does not match face {face}"
                    )));
                }
            }
        }
        let mut algebras = Vec::with_capacity(cells.n_vertices());
        let mut modules = Vec::with_capacity(cells.n_vertices());
        let mut darts = Vec::with_capacity(cells.n_vertices());
        let mut site_index = Vec::with_capacity(cells.n_vertices());
        for v in 0..cells.n_vertices() {
            let cv = vertex_algebra(s, v)?;
            modules.push(vertex_module(s, v, &cv)?);
            algebras.push(cv);
            let ds = cells.vertex_darts(v);
            let mut next = 0;
            let idx = ds
                .iter()
                .map(|&h| {
                    (!cells.is_external(cells.site_of(h).plaquette)).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect();
            darts.push(ds);
            site_index.push(idx);
        }
        let dims: Vec<usize> = s
            .edge_labels
            .iter()
            .map(|k| k.dim())
            .chain(modules.iter().map(|m| m.dim()))
            .collect();
        guarded_product(&dims, limit)?;
        Ok(StateSpace { surface: s.clone(), algebras, modules, darts, site_index, layout: Layout::new(dims), convention })
    }

    pub fn surface(&self) -> &LabeledSurface {
        &self.surface
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn total_dim(&self) -> usize {
        self.layout.total()
    }

    pub fn factor_dims(&self) -> &[usize] {
        self.layout.dims()
    }

    pub fn vertex_algebra(&self, v: usize) -> &VertexAlgebra {
        &self.algebras[v]
    }

    pub fn vertex_module(&self, v: usize) -> &VertexModule {
        &self.modules[v]
    }

    /// Factor holding `Z_v`.
    pub fn vertex_factor(&self, v: usize) -> usize {
        self.surface.cells.n_edges() + v
    }

    /// Half-edges at `v` in `C_v` order.
    pub fn vertex_darts(&self, v: usize) -> &[usize] {
        &self.darts[v]
    }

    /// `(vertex, index in C_v)` of the half-edge `h`.
    pub fn locate_dart(&self, h: usize) -> (usize, usize) {
        let v = self.surface.cells.vertex_of(h);
        let i = self.darts[v].iter().position(|&d| d == h).expect("every half-edge sits at its vertex");
        (v, i)
    }

    /// `(vertex, site index in C_v)` of the site with `e_p = h`.
    pub fn locate_site(&self, h: usize) -> Option<(usize, usize)> {
        let (v, i) = self.locate_dart(h);
        self.site_index[v][i].map(|s| (v, s))
    }

    fn local(&self, factors: Vec<usize>, m: &SparseMatrix) -> LocalMatrix {
        LocalMatrix::new(&self.layout, factors, m)
    }

    /// Left action of the basis element `k` of the `i`-th half-edge factor of `C_v` on `Z_v`.
    pub fn vertex_left(&self, v: usize, i: usize, k: usize) -> LocalMatrix {
        self.local(vec![self.vertex_factor(v)], self.modules[v].edge_action(i, k))
    }

    /// `φ ↦ φ(k.−)` on `K_e*` for the `i`-th half-edge of `v`, where `k` acts on
    /// `K_e` through `K_e^{ε}`: left multiplication for `ε = +1`, right for `ε = -1`.
    pub fn vertex_right(&self, v: usize, i: usize, k: usize) -> LocalMatrix {
        let h = self.darts[v][i];
        let alg = self.algebras[v].edge_algebra(i);
        let mut x = vec![Q::zero(); alg.dim()];
        x[k] = Q::one();
        self.local(vec![h / 2], &alg.left_mult_matrix(&x).transpose())
    }

    /// `Ã_v(x ⊗ y)` for pure tensors: `x[i]`, `y[i]` in the `i`-th half-edge factor.
    pub fn vertex_action(&self, v: usize, x: &[SVec], y: &[SVec]) -> Operator {
        let mut stages = Vec::new();
        for (i, (xi, yi)) in x.iter().zip(y).enumerate() {
            let n = self.algebras[v].edge_algebra(i).dim();
            let zdim = self.modules[v].dim();
            let left = xi
                .iter()
                .fold(SparseMatrix::zeros(zdim, zdim), |acc, (k, c)| acc.add_scaled(self.modules[v].edge_action(i, *k), c));
            let mut right = SparseMatrix::zeros(n, n);
            for (k, c) in yi {
                let mut e = vec![Q::zero(); n];
                e[*k] = Q::one();
                right = right.add_scaled(&self.algebras[v].edge_algebra(i).left_mult_matrix(&e).transpose(), c);
            }
            stages.push(self.local(vec![self.vertex_factor(v)], &left));
            stages.push(self.local(vec![self.darts[v][i] / 2], &right));
        }
        Operator::Product(stages)
    }

    /// `A_v = Ã_v(p¹ ⊗ p²)` with `p` the separability idempotent of `⊗_h K_h^{ε(h)}`,
    /// one stage per half-edge.
    pub fn vertex_operator(&self, v: usize) -> Result<Operator, LatticeError> {
        let cv = &self.algebras[v];
        let z = &self.modules[v];
        let mut stages = Vec::with_capacity(self.darts[v].len());
        for (i, &h) in self.darts[v].iter().enumerate() {
            let alg = cv.edge_algebra(i);
            let n = alg.dim();
            let p = symmetric_separability_idempotent(alg)?;
            let mut m = SparseMatrix::zeros(n * z.dim(), n * z.dim());
            for (a, b, c) in p.terms() {
                let mut e = vec![Q::zero(); n];
                e[b] = Q::one();
                let right = alg.left_mult_matrix(&e).transpose();
                m = m.add_scaled(&right.kron(z.edge_action(i, a)), &c);
            }
            stages.push(self.local(vec![h / 2, self.vertex_factor(v)], &m));
        }
        Ok(Operator::Product(stages))
    }

    fn check_base(&self, p: usize, base: usize) -> Result<(usize, usize), LatticeError> {
        let cells = &self.surface.cells;
        if base >= 2 * cells.n_edges() || cells.site_of(base).plaquette != p {
            return Err(LatticeError::NotASite { plaquette: p, dart: base });
        }
        self.locate_site(base).ok_or(LatticeError::NotASite { plaquette: p, dart: base })
    }

    /// The base site of `p` used by default: the corner after the first walk half-edge.
    pub fn default_base(&self, p: usize) -> usize {
        self.surface.cells.faces()[p][0] ^ 1
    }

    /// Sites of `p` other than `base` and edges of `p`, in clockwise order after `base`.
    fn plaquette_sequence(&self, p: usize, base: usize) -> Vec<Piece> {
        let walk = &self.surface.cells.faces()[p];
        let m = walk.len();
        let start = walk.iter().position(|&d| d ^ 1 == base).expect("base lies on the walk");
        let mut seq = Vec::with_capacity(2 * m - 1);
        for j in 1..=m {
            let d = walk[(start + j) % m];
            seq.push(Piece::Edge(d));
            if j < m {
                seq.push(Piece::Site(d ^ 1));
            }
        }
        seq
    }

    fn edge_piece(&self, hopf: &Hopf, d: usize, f: usize) -> LocalMatrix {
        let e = d / 2;
        let k = &self.surface.edge_labels[e];
        let n = k.dim();
        let sign = match self.convention {
            EdgeConvention::Standard => dart_sign(d),
            EdgeConvention::Flipped => -dart_sign(d),
        };
        // (δ^i·f)(b_j) = Σ c [k₀ = i] f(leg), leg = k₍₁₎ or S(k₍₋₁₎)
        let mut m = vec![Vec::new(); n];
        for (j, row) in m.iter_mut().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, Q> = std::collections::BTreeMap::new();
            for (l, k0, r, c) in k.coaction_basis(j) {
                let val = if sign > 0 {
                    if *r == f {
                        Q::one()
                    } else {
                        Q::zero()
                    }
                } else {
                    hopf.antipode_basis(*l).into_iter().find(|(i, _)| *i == f).map(|(_, x)| x).unwrap_or_else(Q::zero)
                };
                if !val.is_zero() {
                    *acc.entry(*k0).or_insert_with(Q::zero) += c * val;
                }
            }
            *row = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        // row j lists (i, coefficient of φ_i in the new φ_j)
        self.local(vec![e], &SparseMatrix::from_rows(n, n, m))
    }

    fn site_piece(&self, site_dart: usize, g: &[(usize, Q)]) -> LocalMatrix {
        let (v, s) = self.locate_site(site_dart).expect("internal site");
        self.local(vec![self.vertex_factor(v)], &self.modules[v].site_element(s, g))
    }

    /// `B̃_{(p, base)}(f ⊗ f')` for elements of `H_p*`.
    pub fn plaquette_action(&self, p: usize, base: usize, f: &[(usize, Q)], fp: &[(usize, Q)]) -> Result<Operator, LatticeError> {
        let (v, s) = self.check_base(p, base)?;
        let left = self.local(vec![self.vertex_factor(v)], &self.modules[v].site_element(s, f));
        Ok(Operator::Channel(self.channel(p, base, vec![(left, fp.to_vec())])?))
    }

    fn channel(&self, p: usize, base: usize, init: Vec<(LocalMatrix, SVec)>) -> Result<ChannelOperator, LatticeError> {
        let hopf = self.surface.plaquette_label(p)?.clone();
        let dual = dual_hopf(&hopf);
        let d = dual.dim();
        let sequence = self
            .plaquette_sequence(p, base)
            .into_iter()
            .map(|piece| match piece {
                Piece::Edge(h) => (0..d).map(|f| self.edge_piece(&hopf, h, f)).collect(),
                Piece::Site(h) => (0..d).map(|f| self.site_piece(h, &dual.antipode_basis(f))).collect(),
            })
            .collect();
        let comult = (0..d).map(|f| dual.comult_basis(f).to_vec()).collect();
        Ok(ChannelOperator::new(init, sequence, comult))
    }

    /// `B_p = B̃_{(p, base)}(λ₍₁₎ ⊗ S(λ₍₂₎))` with `λ` the Haar integral of `H_p*`.
    pub fn plaquette_operator(&self, p: usize, base: usize) -> Result<Operator, LatticeError> {
        let (v, s) = self.check_base(p, base)?;
        let hopf: Arc<Hopf> = self.surface.plaquette_label(p)?.clone();
        let dual = dual_hopf(&hopf);
        let lambda = haar_integral(&dual)?.element;
        let mut init = Vec::new();
        for (i, x) in lambda.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (a, b, c) in dual.comult_basis(i) {
                let coef = x * c;
                let left = self.local(vec![self.vertex_factor(v)], &self.modules[v].site_element(s, &[(*a, coef)]));
                init.push((left, dual.antipode_basis(*b)));
            }
        }
        Ok(Operator::Channel(self.channel(p, base, init)?))
    }

    /// Right action of `f ∈ H_p*` alone: `B̃_{(p, base)}(1 ⊗ f)`.
    pub fn plaquette_right(&self, p: usize, base: usize, f: &[(usize, Q)]) -> Result<Operator, LatticeError> {
        let (v, s) = self.check_base(p, base)?;
        let alg = self.algebras[v].site_algebra(s);
        let unit: SVec = alg.unit().iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        self.plaquette_action(p, base, &unit, f)
    }

    /// All `A_v` (ascending `v`) and `B_p` (ascending internal `p`, default base sites).
    pub fn operators(&self) -> Result<OperatorSet, LatticeError> {
        let cells = &self.surface.cells;
        let vertex_ops = (0..cells.n_vertices()).map(|v| self.vertex_operator(v)).collect::<Result<Vec<_>, _>>()?;
        let mut plaquette_ops = Vec::new();
        for p in cells.internal_faces() {
            let base = self.default_base(p);
            plaquette_ops.push((p, base, self.plaquette_operator(p, base)?));
        }
        Ok(OperatorSet { vertex_ops, plaquette_ops })
    }

    /// Sites of `p` as half-edges `e_p`.
    pub fn plaquette_sites(&self, p: usize) -> Vec<Site> {
        self.surface.cells.plaquette_sites(p)
    }
}

enum Piece {
    Edge(usize),
    /// A site, by its half-edge `e_p`.
    Site(usize),
}

#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub vertex_ops: Vec<Operator>,
    /// `(plaquette, base half-edge, B_p)`.
    pub plaquette_ops: Vec<(usize, usize, Operator)>,
}

impl OperatorSet {
    /// Every operator with a label, vertices first.
    pub fn labeled(&self) -> Vec<(String, &Operator)> {
        self.vertex_ops
            .iter()
            .enumerate()
            .map(|(v, o)| (format!("A_{v}"), o))
            .chain(self.plaquette_ops.iter().map(|(p, _, o)| (format!("B_{p}"), o)))
            .collect()
    }
}
