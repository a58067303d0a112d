use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::hopf::SVec;
use crate::linalg::{SparseMatrix, Q};

/// Sparse state vector over the global basis.
pub type Vector = BTreeMap<usize, Q>;

fn accumulate(out: &mut Vector, i: usize, v: Q) {
    match out.get_mut(&i) {
        Some(x) => *x += v,
        None => {
            out.insert(i, v);
        }
    }
}

fn clean(mut v: Vector) -> Vector {
    v.retain(|_, x| !x.is_zero());
    v
}

/// Mixed-radix layout of the state space, first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Layout {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total = dims.iter().product();
        Layout { dims, strides, total }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn stride(&self, f: usize) -> usize {
        self.strides[f]
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn digit(&self, idx: usize, f: usize) -> usize {
        (idx / self.strides[f]) % self.dims[f]
    }
}

/// A matrix on the tensor product of `factors`, identity elsewhere.
///
/// `columns[l]` is the image of the local basis vector `l`, whose digits follow
/// the order of `factors`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMatrix {
    factors: Vec<usize>,
    local_dims: Vec<usize>,
    strides: Vec<usize>,
    offsets: Vec<usize>,
    columns: Vec<SVec>,
}

impl LocalMatrix {
    /// `m` acts on column vectors of the local space.
    pub fn new(layout: &Layout, factors: Vec<usize>, m: &SparseMatrix) -> Self {
        let local_dims: Vec<usize> = factors.iter().map(|&f| layout.dims[f]).collect();
        let n: usize = local_dims.iter().product();
        assert_eq!((m.rows(), m.cols()), (n, n), "local matrix does not match its factors");
        let strides: Vec<usize> = factors.iter().map(|&f| layout.strides[f]).collect();
        let offsets = (0..n)
            .map(|mut l| {
                let mut off = 0;
                for (d, s) in local_dims.iter().zip(&strides).rev() {
                    off += (l % d) * s;
                    l /= d;
                }
                off
            })
            .collect();
        let t = m.transpose();
        let columns = (0..n).map(|j| t.row(j).to_vec()).collect();
        LocalMatrix { factors, local_dims, strides, offsets, columns }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn local_dim(&self) -> usize {
        self.columns.len()
    }

    fn split(&self, idx: usize) -> (usize, usize) {
        let mut local = 0;
        let mut rest = idx;
        for (d, s) in self.local_dims.iter().zip(&self.strides) {
            let digit = (idx / s) % d;
            local = local * d + digit;
            rest -= digit * s;
        }
        (local, rest)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (idx, c) in v {
            let (l, rest) = self.split(*idx);
            for (o, w) in &self.columns[l] {
                accumulate(&mut out, rest + self.offsets[*o], c * w);
            }
        }
        clean(out)
    }

    pub fn transpose(&self) -> LocalMatrix {
        let mut columns: Vec<SVec> = vec![Vec::new(); self.columns.len()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, w) in col {
                columns[*i].push((j, w.clone()));
            }
        }
        LocalMatrix { columns, ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1 == Q::from_integer(1.into()))
    }
}

/// `Σ_t L_t ∘ (X_{n}(f_n) ∘ … ∘ X_1(f_1))` where `f_1 ⊗ … ⊗ f_n` runs over the
/// iterated coproduct of the channel element `g_t`.
///
/// All pieces of one term act on distinct factors or commute, so the transpose
/// is the same stream over transposed pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOperator {
    init: Vec<(LocalMatrix, SVec)>,
    /// `sequence[i][b]` is the piece of position `i` for the basis element `b`.
    sequence: Vec<Vec<LocalMatrix>>,
    /// Coproduct of the channel algebra on basis elements.
    comult: Vec<Vec<(usize, usize, Q)>>,
}

impl ChannelOperator {
    pub fn new(init: Vec<(LocalMatrix, SVec)>, sequence: Vec<Vec<LocalMatrix>>, comult: Vec<Vec<(usize, usize, Q)>>) -> Self {
        assert!(!sequence.is_empty(), "a channel operator needs at least one position");
        ChannelOperator { init, sequence, comult }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        let last = self.sequence.len() - 1;
        for (left, g) in &self.init {
            let w = left.apply(v);
            if w.is_empty() {
                continue;
            }
            let mut channels: BTreeMap<usize, Vector> = BTreeMap::new();
            for (r, c) in g {
                let scaled: Vector = w.iter().map(|(i, x)| (*i, x * c)).collect();
                channels.insert(*r, scaled);
            }
            for pos in &self.sequence[..last] {
                let mut next: BTreeMap<usize, Vector> = BTreeMap::new();
                for (r, vec) in &channels {
                    let mut applied: BTreeMap<usize, Vector> = BTreeMap::new();
                    for (b, c, x) in &self.comult[*r] {
                        let moved = applied.entry(*b).or_insert_with(|| pos[*b].apply(vec));
                        let slot = next.entry(*c).or_default();
                        for (i, y) in moved.iter() {
                            accumulate(slot, *i, x * y);
                        }
                    }
                }
                channels = next.into_iter().map(|(r, v)| (r, clean(v))).filter(|(_, v)| !v.is_empty()).collect();
            }
            for (r, vec) in &channels {
                for (i, y) in self.sequence[last][*r].apply(vec) {
                    accumulate(&mut out, i, y);
                }
            }
        }
        clean(out)
    }

    pub fn transpose(&self) -> ChannelOperator {
        ChannelOperator {
            init: self.init.iter().map(|(l, g)| (l.transpose(), g.clone())).collect(),
            sequence: self.sequence.iter().map(|p| p.iter().map(LocalMatrix::transpose).collect()).collect(),
            comult: self.comult.clone(),
        }
    }

    fn factors(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self
            .init
            .iter()
            .flat_map(|(l, _)| l.factors.iter().copied())
            .chain(self.sequence.iter().flatten().flat_map(|l| l.factors.iter().copied()))
            .collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

/// A linear operator on the state space, kept in factorized form.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// Applied first to last.
    Product(Vec<LocalMatrix>),
    Channel(ChannelOperator),
}

impl Operator {
    pub fn apply(&self, v: &Vector) -> Vector {
        match self {
            Operator::Product(ms) => {
                let mut acc = v.clone();
                for m in ms {
                    acc = m.apply(&acc);
                }
                acc
            }
            Operator::Channel(c) => c.apply(v),
        }
    }

    pub fn transpose(&self) -> Operator {
        match self {
            Operator::Product(ms) => Operator::Product(ms.iter().rev().map(LocalMatrix::transpose).collect()),
            Operator::Channel(c) => Operator::Channel(c.transpose()),
        }
    }

    /// Factors on which the operator may differ from the identity.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Operator::Product(ms) => {
                let mut f: Vec<usize> = ms.iter().flat_map(|m| m.factors.iter().copied()).collect();
                f.sort_unstable();
                f.dedup();
                f
            }
            Operator::Channel(c) => c.factors(),
        }
    }

    /// Full matrix; the caller bounds the dimension.
    pub fn to_matrix(&self, dim: usize) -> SparseMatrix {
        use rayon::prelude::*;
        let columns: Vec<SVec> = (0..dim)
            .into_par_iter()
            .map(|j| {
                let e: Vector = [(j, Q::from_integer(1.into()))].into_iter().collect();
                self.apply(&e).into_iter().collect()
            })
            .collect();
        SparseMatrix::from_columns(dim, columns)
    }
}

/// Sparse integer vector, sorted by index with no zero entries.
pub type IntVector = Vec<(usize, i128)>;

fn normalize(mut v: Vec<(usize, i128)>) -> Option<IntVector> {
    v.sort_unstable_by_key(|(i, _)| *i);
    let mut out: IntVector = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = y.checked_add(x)?,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| *x != 0);
    Some(out)
}

fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scaled_entry(x: &Q, scale: &BigInt) -> Option<i128> {
    (x * Q::from_integer(scale.clone())).to_integer().to_i128()
}

/// [`LocalMatrix`] multiplied by the least common denominator of its entries.
#[derive(Debug, Clone)]
struct ScaledLocal {
    geometry: LocalMatrix,
    columns: Vec<Vec<(usize, i128)>>,
}

impl ScaledLocal {
    fn new(m: &LocalMatrix, scale: &BigInt) -> Option<Self> {
        let columns = m
            .columns
            .iter()
            .map(|c| c.iter().map(|(o, w)| Some((*o, scaled_entry(w, scale)?))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(ScaledLocal { geometry: LocalMatrix { columns: Vec::new(), ..m.clone() }, columns })
    }

    fn apply(&self, v: &[(usize, i128)]) -> Option<IntVector> {
        let mut out = Vec::with_capacity(v.len());
        for (idx, c) in v {
            let (l, rest) = self.geometry.split(*idx);
            for (o, w) in &self.columns[l] {
                out.push((rest + self.geometry.offsets[*o], c.checked_mul(*w)?));
            }
        }
        normalize(out)
    }
}

#[derive(Debug, Clone)]
enum ScaledKind {
    Product(Vec<ScaledLocal>),
    Channel {
        init: Vec<(ScaledLocal, Vec<(usize, i128)>)>,
        sequence: Vec<Vec<ScaledLocal>>,
        comult: Vec<Vec<(usize, usize, i128)>>,
    },
}

/// An [`Operator`] times a positive integer `scale`, with machine-integer entries.
///
/// Every application uses checked arithmetic and yields `None` on overflow.
#[derive(Debug, Clone)]
pub struct ScaledOperator {
    kind: ScaledKind,
    scale: BigInt,
}

impl ScaledOperator {
    /// `None` when a scaled entry does not fit in an `i128`.
    pub fn new(op: &Operator) -> Option<Self> {
        let local = |ms: &[&LocalMatrix]| {
            let d = denominator_lcm(ms.iter().flat_map(|m| m.columns.iter().flatten().map(|(_, w)| w)));
            let scaled = ms.iter().map(|m| ScaledLocal::new(m, &d)).collect::<Option<Vec<_>>>()?;
            Some((scaled, d))
        };
        match op {
            Operator::Product(ms) => {
                let mut scale = BigInt::one();
                let mut out = Vec::with_capacity(ms.len());
                for m in ms {
                    let (mut s, d) = local(&[m])?;
                    out.append(&mut s);
                    scale *= d;
                }
                Some(ScaledOperator { kind: ScaledKind::Product(out), scale })
            }
            Operator::Channel(c) => {
                let lefts: Vec<&LocalMatrix> = c.init.iter().map(|(l, _)| l).collect();
                let (lefts, d_left) = local(&lefts)?;
                let d_g = denominator_lcm(c.init.iter().flat_map(|(_, g)| g.iter().map(|(_, x)| x)));
                let init = lefts
                    .into_iter()
                    .zip(&c.init)
                    .map(|(l, (_, g))| Some((l, g.iter().map(|(r, x)| Some((*r, scaled_entry(x, &d_g)?))).collect::<Option<Vec<_>>>()?)))
                    .collect::<Option<Vec<_>>>()?;
                let d_c = denominator_lcm(c.comult.iter().flatten().map(|(_, _, x)| x));
                let comult = c
                    .comult
                    .iter()
                    .map(|t| t.iter().map(|(a, b, x)| Some((*a, *b, scaled_entry(x, &d_c)?))).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()?;
                let mut scale = d_left * d_g * num_traits::pow(d_c, c.sequence.len() - 1);
                let mut sequence = Vec::with_capacity(c.sequence.len());
                for pos in &c.sequence {
                    let refs: Vec<&LocalMatrix> = pos.iter().collect();
                    let (s, d) = local(&refs)?;
                    sequence.push(s);
                    scale *= d;
                }
                Some(ScaledOperator { kind: ScaledKind::Channel { init, sequence, comult }, scale })
            }
        }
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn apply(&self, v: &[(usize, i128)]) -> Option<IntVector> {
        match &self.kind {
            ScaledKind::Product(ms) => {
                let mut acc = v.to_vec();
                for m in ms {
                    acc = m.apply(&acc)?;
                }
                Some(acc)
            }
            ScaledKind::Channel { init, sequence, comult } => {
                let mut out = Vec::new();
                let last = sequence.len() - 1;
                for (left, g) in init {
                    let w = left.apply(v)?;
                    if w.is_empty() {
                        continue;
                    }
                    let mut channels: BTreeMap<usize, IntVector> = BTreeMap::new();
                    for (r, c) in g {
                        channels.insert(*r, w.iter().map(|(i, x)| Some((*i, x.checked_mul(*c)?))).collect::<Option<_>>()?);
                    }
                    for pos in &sequence[..last] {
                        let mut next: BTreeMap<usize, Vec<(usize, i128)>> = BTreeMap::new();
                        for (r, vec) in &channels {
                            let mut applied: BTreeMap<usize, IntVector> = BTreeMap::new();
                            for (b, c, x) in &comult[*r] {
                                if !applied.contains_key(b) {
                                    applied.insert(*b, pos[*b].apply(vec)?);
                                }
                                let slot = next.entry(*c).or_default();
                                for (i, y) in &applied[b] {
                                    slot.push((*i, x.checked_mul(*y)?));
                                }
                            }
                        }
                        channels = BTreeMap::new();
                        for (r, v) in next {
                            let v = normalize(v)?;
                            if !v.is_empty() {
                                channels.insert(r, v);
                            }
                        }
                    }
                    for (r, vec) in &channels {
                        out.extend(sequence[last][*r].apply(vec)?);
                    }
                }
                normalize(out)
            }
        }
    }
}
