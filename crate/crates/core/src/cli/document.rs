//! JSON model documents and their resolution into labeled surfaces.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Deserialize;

use crate::comodule::{
    klein_sign_cocycle, opposite_bicomodule, regular_bicomodule, trivial_bicomodule, twisted_subgroup_algebra,
    Bicomodule,
};
use crate::crossed::VertexModule;
use crate::hopf::{dual_hopf, group_algebra, op_cop, tensor_hopf, trivial_hopf, Algebra, GroupTable, Hopf};
use crate::linalg::{parse_q, SparseMatrix, Q};
use crate::surface::{
    digon_sphere, grid_torus, tetrahedron, two_vertex_torus, valence_one_sphere, vertex_algebra, CellDecomposition,
    LabeledSurface, VertexLabel,
};

/// A scalar written either as an integer or as a `"num/den"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<Q, String> {
        match self {
            Scalar::Int(n) => Ok(Q::from_integer((*n).into())),
            Scalar::Text(s) => parse_q(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default)]
    pub hopf: BTreeMap<String, HopfSpec>,
    #[serde(default)]
    pub bicomodules: BTreeMap<String, BicomoduleSpec>,
    pub surface: SurfaceSpec,
    pub labels: LabelSpec,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HopfSpec {
    /// Group algebra of a named group such as `Z3`, `S3`, `klein` or `Z2xZ3`.
    Group(String),
    Dual(String),
    OpCop(String),
    Tensor([String; 2]),
    Trivial,
    Explicit(ExplicitHopf),
}

/// Structure constants on the basis `labels`.
///
/// `mult` entries `[i, j, k, c]` mean `b_i b_j` has coefficient `c` on `b_k`;
/// `comult` entries `[i, a, b, c]` mean `Δ(b_i)` has coefficient `c` on `b_a ⊗ b_b`;
/// `antipode` entries `[i, j, c]` mean `S(b_j)` has coefficient `c` on `b_i`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitHopf {
    pub labels: Vec<String>,
    pub mult: Vec<(usize, usize, usize, Scalar)>,
    pub unit: Vec<Scalar>,
    pub comult: Vec<(usize, usize, usize, Scalar)>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<(usize, usize, Scalar)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BicomoduleSpec {
    Regular(String),
    /// The ground field over `[left, right]`.
    Trivial([String; 2]),
    Opposite(String),
    TwistedSubgroup {
        group: String,
        subgroup: Vec<usize>,
        #[serde(default)]
        cocycle: Cocycle,
    },
    Explicit(ExplicitBicomodule),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cocycle {
    #[default]
    Trivial,
    KleinSign,
    /// `table[a][b]` on group element indices.
    Table(Vec<Vec<i64>>),
}

/// `coaction` entries `[k, a, l, b, c]` mean `b_k ↦ c · h_a ⊗ b_l ⊗ h_b` is a term.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitBicomodule {
    pub labels: Vec<String>,
    pub mult: Vec<(usize, usize, usize, Scalar)>,
    pub unit: Vec<Scalar>,
    pub left: String,
    pub right: String,
    pub coaction: Vec<(usize, usize, usize, usize, Scalar)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    GridTorus {
        m: usize,
        n: usize,
    },
    Tetrahedron,
    DigonSphere,
    TwoVertexTorus,
    ValenceOneSphere,
    /// Half-edge `2e` is the source end of edge `e`, `2e + 1` its target end;
    /// rotations list half-edges counterclockwise.
    Explicit {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        rotations: Vec<Vec<usize>>,
        #[serde(default)]
        external_darts: Vec<usize>,
    },
}

/// A label for every cell: one value, a full list, or a default with overrides by index.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Assign<T> {
    One(T),
    Many(Vec<T>),
    /// Override keys are decimal cell indices.
    Patched { default: T, overrides: BTreeMap<String, T> },
}

impl<T: Clone> Assign<T> {
    fn expand(&self, n: usize, what: &str) -> Result<Vec<T>, String> {
        match self {
            Assign::One(x) => Ok(vec![x.clone(); n]),
            Assign::Many(v) if v.len() == n => Ok(v.clone()),
            Assign::Many(v) => Err(format!("{} {what} labels for {n} {what}s", v.len())),
            Assign::Patched { default, overrides } => {
                let mut v = vec![default.clone(); n];
                for (key, x) in overrides {
                    let i: usize = key.trim().parse().map_err(|_| format!("override key {key:?} is not a {what} index"))?;
                    *v.get_mut(i).ok_or_else(|| format!("override for {what} {i} out of range"))? = x.clone();
                }
                Ok(v)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSpec {
    /// External faces are unlabeled; a list gives `null` for them.
    pub plaquettes: Assign<Option<String>>,
    pub edges: Assign<String>,
    pub vertices: Assign<VertexChoice>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum VertexChoice {
    Vacuum,
    Regular,
    Unit,
    Explicit(ExplicitModule),
}

/// Generator matrices in the factor order of `C_v`: one list per site, then one
/// per half-edge, each holding one matrix per basis element as `[row, col, c]` entries.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModule {
    pub dim: usize,
    pub sites: Vec<Vec<Entries>>,
    pub edges: Vec<Vec<Entries>>,
}

/// Sparse matrix entries `[row, col, c]`.
pub type Entries = Vec<(usize, usize, Scalar)>;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub max_dim: Option<usize>,
    pub seed: Option<u64>,
    pub full_limit: Option<usize>,
    pub samples: Option<usize>,
    pub kernel_limit: Option<usize>,
}

/// Parses a group name: factors `Zn`, `S3` or `klein` joined by `x`.
pub fn parse_group(name: &str) -> Result<GroupTable, String> {
    let factor = |t: &str| -> Result<GroupTable, String> {
        match t {
            "S3" => Ok(GroupTable::symmetric3()),
            "klein" | "V4" => Ok(GroupTable::klein()),
            _ => match t.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n > 0 => Ok(GroupTable::cyclic(n)),
                _ => Err(format!("unknown group {t:?}")),
            },
        }
    };
    let mut parts = name.split('x');
    let first = factor(parts.next().unwrap_or_default().trim())?;
    parts.try_fold(first, |g, t| Ok(g.direct_product(&factor(t.trim())?)))
}

fn algebra_from(labels: &[String], mult: &[(usize, usize, usize, Scalar)], unit: &[Scalar]) -> Result<Algebra, String> {
    let d = labels.len();
    if unit.len() != d {
        return Err(format!("unit has {} entries for dimension {d}", unit.len()));
    }
    let mut table = vec![Vec::new(); d * d];
    for (i, j, k, c) in mult {
        if *i >= d || *j >= d || *k >= d {
            return Err(format!("product entry ({i}, {j}, {k}) out of range"));
        }
        table[i * d + j].push((*k, c.value()?));
    }
    let unit = unit.iter().map(Scalar::value).collect::<Result<_, _>>()?;
    Ok(Algebra::from_table(labels.to_vec(), table, unit))
}

fn explicit_hopf(x: &ExplicitHopf) -> Result<Hopf, String> {
    let d = x.labels.len();
    let algebra = algebra_from(&x.labels, &x.mult, &x.unit)?;
    let mut comult = vec![Vec::new(); d];
    for (i, a, b, c) in &x.comult {
        if *i >= d {
            return Err(format!("coproduct entry for basis element {i} out of range"));
        }
        comult[*i].push((*a, *b, c.value()?));
    }
    let counit = x.counit.iter().map(Scalar::value).collect::<Result<_, _>>()?;
    if x.antipode.iter().any(|(i, j, _)| *i >= d || *j >= d) {
        return Err("antipode entry out of range".into());
    }
    let antipode = SparseMatrix::from_triplets(
        d,
        d,
        x.antipode.iter().map(|(i, j, c)| Ok((*i, *j, c.value()?))).collect::<Result<Vec<_>, String>>()?,
    );
    Hopf::from_parts(algebra, comult, counit, antipode).map_err(|e| e.to_string())
}

/// Vertex module choice after resolution; explicit modules still need their `C_v`.
#[derive(Debug, Clone)]
pub enum VertexSpec {
    Vacuum,
    Regular,
    Unit,
    Explicit { dim: usize, sites: Vec<Vec<SparseMatrix>>, edges: Vec<Vec<SparseMatrix>> },
}

/// A document with every name resolved.
#[derive(Debug, Clone)]
pub struct Model {
    pub hopf: BTreeMap<String, Arc<Hopf>>,
    pub bicomodules: BTreeMap<String, Bicomodule>,
    pub cells: CellDecomposition,
    pub plaquettes: Vec<Option<Arc<Hopf>>>,
    pub edges: Vec<Bicomodule>,
    pub vertices: Vec<VertexSpec>,
    pub options: Options,
}

struct Resolver<'a> {
    doc: &'a ModelDocument,
    hopf: BTreeMap<String, Arc<Hopf>>,
    bicomodules: BTreeMap<String, Bicomodule>,
    active: BTreeSet<String>,
}

impl Resolver<'_> {
    fn hopf(&mut self, name: &str) -> Result<Arc<Hopf>, String> {
        if let Some(h) = self.hopf.get(name) {
            return Ok(h.clone());
        }
        let spec = self.doc.hopf.get(name).ok_or_else(|| format!("unknown Hopf algebra {name:?}"))?;
        if !self.active.insert(name.to_string()) {
            return Err(format!("Hopf algebra {name:?} refers to itself"));
        }
        let h = match spec {
            HopfSpec::Group(g) => group_algebra(&parse_group(g)?),
            HopfSpec::Dual(n) => dual_hopf(&*self.hopf(n)?),
            HopfSpec::OpCop(n) => op_cop(&*self.hopf(n)?),
            HopfSpec::Tensor([a, b]) => tensor_hopf(&*self.hopf(a)?, &*self.hopf(b)?),
            HopfSpec::Trivial => trivial_hopf(),
            HopfSpec::Explicit(x) => explicit_hopf(x).map_err(|e| format!("Hopf algebra {name:?}: {e}"))?,
        };
        self.active.remove(name);
        let h = Arc::new(h);
        self.hopf.insert(name.to_string(), h.clone());
        Ok(h)
    }

    fn bicomodule(&mut self, name: &str) -> Result<Bicomodule, String> {
        if let Some(k) = self.bicomodules.get(name) {
            return Ok(k.clone());
        }
        let spec = self.doc.bicomodules.get(name).ok_or_else(|| format!("unknown bicomodule algebra {name:?}"))?;
        if !self.active.insert(format!("bicomodule {name}")) {
            return Err(format!("bicomodule algebra {name:?} refers to itself"));
        }
        let k = match spec {
            BicomoduleSpec::Regular(h) => regular_bicomodule(&self.hopf(h)?),
            BicomoduleSpec::Trivial([l, r]) => trivial_bicomodule(&self.hopf(l)?, &self.hopf(r)?),
            BicomoduleSpec::Opposite(n) => opposite_bicomodule(&self.bicomodule(n)?),
            BicomoduleSpec::TwistedSubgroup { group, subgroup, cocycle } => {
                let g = parse_group(group)?;
                if let Some(u) = subgroup.iter().find(|&&u| u >= g.order()) {
                    return Err(format!("bicomodule algebra {name:?}: element {u} outside {group}"));
                }
                let built = match cocycle {
                    Cocycle::Trivial => twisted_subgroup_algebra(&g, subgroup, |_, _| 1),
                    Cocycle::KleinSign => twisted_subgroup_algebra(&g, subgroup, klein_sign_cocycle),
                    Cocycle::Table(t) => {
                        let n = g.order();
                        if t.len() != n || t.iter().any(|r| r.len() != n) {
                            return Err(format!("bicomodule algebra {name:?}: cocycle table must be {n}x{n}"));
                        }
                        twisted_subgroup_algebra(&g, subgroup, |a, b| t[a][b])
                    }
                };
                built.map_err(|e| format!("bicomodule algebra {name:?}: {e}"))?
            }
            BicomoduleSpec::Explicit(x) => {
                let algebra = algebra_from(&x.labels, &x.mult, &x.unit)?;
                let (left, right) = (self.hopf(&x.left)?, self.hopf(&x.right)?);
                let mut coaction = vec![Vec::new(); x.labels.len()];
                for (k, a, l, b, c) in &x.coaction {
                    let slot = coaction.get_mut(*k).ok_or_else(|| format!("coaction entry for basis element {k} out of range"))?;
                    slot.push((*a, *l, *b, c.value()?));
                }
                Bicomodule::from_parts(algebra, left, right, coaction).map_err(|e| format!("bicomodule algebra {name:?}: {e}"))?
            }
        };
        self.active.remove(&format!("bicomodule {name}"));
        self.bicomodules.insert(name.to_string(), k.clone());
        Ok(k)
    }
}

fn matrices(dim: usize, lists: &[Vec<Entries>]) -> Result<Vec<Vec<SparseMatrix>>, String> {
    lists
        .iter()
        .map(|gens| {
            gens.iter()
                .map(|entries| {
                    let t = entries
                        .iter()
                        .map(|(i, j, c)| {
                            if *i >= dim || *j >= dim {
                                return Err(format!("matrix entry ({i}, {j}) outside dimension {dim}"));
                            }
                            Ok((*i, *j, c.value()?))
                        })
                        .collect::<Result<Vec<_>, String>>()?;
                    Ok(SparseMatrix::from_triplets(dim, dim, t))
                })
                .collect()
        })
        .collect()
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Resolves every name; errors are input errors.
    pub fn resolve(&self) -> Result<Model, String> {
        let mut r = Resolver { doc: self, hopf: BTreeMap::new(), bicomodules: BTreeMap::new(), active: BTreeSet::new() };
        for name in self.hopf.keys() {
            r.hopf(name)?;
        }
        for name in self.bicomodules.keys() {
            r.bicomodule(name)?;
        }
        let cells = match &self.surface {
            SurfaceSpec::GridTorus { m, n } if *m > 0 && *n > 0 => grid_torus(*m, *n),
            SurfaceSpec::GridTorus { .. } => return Err("grid torus needs positive sides".into()),
            SurfaceSpec::Tetrahedron => tetrahedron(),
            SurfaceSpec::DigonSphere => digon_sphere(),
            SurfaceSpec::TwoVertexTorus => two_vertex_torus(),
            SurfaceSpec::ValenceOneSphere => valence_one_sphere(),
            SurfaceSpec::Explicit { vertices, edges, rotations, external_darts } => {
                CellDecomposition::new(*vertices, edges.clone(), rotations.clone(), external_darts).map_err(|e| e.to_string())?
            }
        };
        let plaquettes = self
            .labels
            .plaquettes
            .expand(cells.n_faces(), "face")?
            .into_iter()
            .enumerate()
            .map(|(p, name)| match (name, cells.is_external(p)) {
                (_, true) if !matches!(self.labels.plaquettes, Assign::Many(_)) => Ok(None),
                (Some(n), _) => r.hopf(&n).map(Some),
                (None, _) => Ok(None),
            })
            .collect::<Result<Vec<_>, String>>()?;
        let edges = self
            .labels
            .edges
            .expand(cells.n_edges(), "edge")?
            .iter()
            .map(|n| r.bicomodule(n))
            .collect::<Result<Vec<_>, String>>()?;
        let vertices = self
            .labels
            .vertices
            .expand(cells.n_vertices(), "vertex")?
            .into_iter()
            .map(|c| {
                Ok(match c {
                    VertexChoice::Vacuum => VertexSpec::Vacuum,
                    VertexChoice::Regular => VertexSpec::Regular,
                    VertexChoice::Unit => VertexSpec::Unit,
                    VertexChoice::Explicit(m) => VertexSpec::Explicit {
                        dim: m.dim,
                        sites: matrices(m.dim, &m.sites)?,
                        edges: matrices(m.dim, &m.edges)?,
                    },
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Model { hopf: r.hopf, bicomodules: r.bicomodules, cells, plaquettes, edges, vertices, options: self.options.clone() })
    }
}

impl Model {
    /// The labeled surface; explicit vertex modules are checked against their `C_v` here.
    ///
    /// Errors are mathematical violations, such as a module over the wrong algebra.
    pub fn labeled_surface(&self) -> Result<LabeledSurface, String> {
        let placeholder = self
            .vertices
            .iter()
            .map(|v| match v {
                VertexSpec::Vacuum | VertexSpec::Explicit { .. } => VertexLabel::Vacuum,
                VertexSpec::Regular => VertexLabel::Regular,
                VertexSpec::Unit => VertexLabel::Unit,
            })
            .collect();
        let mut s = LabeledSurface::new(self.cells.clone(), self.plaquettes.clone(), self.edges.clone(), placeholder)
            .map_err(|e| e.to_string())?;
        for (v, spec) in self.vertices.iter().enumerate() {
            if let VertexSpec::Explicit { dim, sites, edges } = spec {
                let cv = vertex_algebra(&s, v).map_err(|e| e.to_string())?;
                let m = VertexModule::from_generators(&cv, *dim, sites.clone(), edges.clone())
                    .map_err(|e| format!("vertex {v}: {e}"))?;
                s.vertex_labels[v] = VertexLabel::Explicit(m);
            }
        }
        Ok(s)
    }
}
