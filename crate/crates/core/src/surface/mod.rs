//! Oriented cell decompositions given as rotation systems.
//!
//! Edge `e` has half-edges `2e` (at its source) and `2e + 1` (at its target).
//! `α(h) = h ^ 1` is the opposite end and `σ(h)` the next half-edge
//! counterclockwise at the same vertex. Faces are the orbits of `h ↦ σ(α(h))`;
//! each orbit lists the half-edges at which the walk leaves a vertex, in
//! clockwise order around the face.

mod instances;

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::comodule::{signed_bicomodule, Bicomodule};
use crate::crossed::{
    regular_module, unit_module, vacuum_module, validate_vertex_module, CrossedError, EdgeFactor, SiteSpec,
    VertexAlgebra, VertexModule,
};
use crate::hopf::Hopf;
use crate::report::Report;

pub use instances::{
    digon_sphere, grid_torus, tetrahedron, two_vertex_torus, valence_one_sphere,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("edge {edge} is not incident to {cell}")]
    NotIncident { cell: String, edge: usize },
    #[error("edge {edge} meets {cell} more than once")]
    AmbiguousIncidence { cell: String, edge: usize },
    #[error("unlabeled cell: {0}")]
    UnlabeledCell(String),
    #[error("vertex {vertex}: {source}")]
    Vertex { vertex: usize, source: CrossedError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDecomposition {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    rotations: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    external: BTreeSet<usize>,
}

/// A corner of plaquette `plaquette` at `vertex`, between `e'_p = σ(e_p)` and `e_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub vertex: usize,
    pub plaquette: usize,
    pub left_half_edge: usize,
    pub right_half_edge: usize,
}

/// Clockwise boundary walk of a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaquetteWalk {
    pub plaquette: usize,
    /// Half-edges at which the walk leaves each corner.
    pub darts: Vec<usize>,
}

impl PlaquetteWalk {
    /// `(edge, ε_p(e))` in walk order.
    pub fn edges(&self) -> Vec<(usize, i8)> {
        self.darts.iter().map(|&h| (h / 2, dart_sign(h))).collect()
    }
}

/// `+1` for the source end of an edge, `-1` for the target end.
pub fn dart_sign(h: usize) -> i8 {
    if h.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl CellDecomposition {
    /// `rotations[v]` is the counterclockwise cyclic order of half-edges at `v`;
    /// `external_darts` mark the faces containing them as external.
    pub fn new(
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
        rotations: Vec<Vec<usize>>,
        external_darts: &[usize],
    ) -> Result<Self, SurfaceError> {
        let bad = |m: String| SurfaceError::MalformedRotation(m);
        let n_darts = 2 * edges.len();
        if rotations.len() != n_vertices {
            return Err(bad(format!("{} rotations for {n_vertices} vertices", rotations.len())));
        }
        if let Some((e, _)) = edges.iter().enumerate().find(|(_, (s, t))| *s >= n_vertices || *t >= n_vertices) {
            return Err(bad(format!("edge {e} has an endpoint out of range")));
        }
        let vertex_of = |h: usize| if h.is_multiple_of(2) { edges[h / 2].0 } else { edges[h / 2].1 };
        let mut sigma = vec![usize::MAX; n_darts];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= n_darts {
                    return Err(bad(format!("half-edge {h} at vertex {v} does not exist")));
                }
                if vertex_of(h) != v {
                    return Err(bad(format!("half-edge {h} listed at vertex {v} but attached to {}", vertex_of(h))));
                }
                if sigma[h] != usize::MAX {
                    return Err(bad(format!("half-edge {h} listed twice")));
                }
                sigma[h] = rot[(i + 1) % rot.len()];
            }
        }
        if let Some(h) = sigma.iter().position(|&s| s == usize::MAX) {
            return Err(bad(format!("half-edge {h} missing from the rotation at vertex {}", vertex_of(h))));
        }
        let mut sigma_inv = vec![0; n_darts];
        for (h, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = h;
        }
        let mut face_of = vec![usize::MAX; n_darts];
        let mut faces = Vec::new();
        for start in 0..n_darts {
            if face_of[start] != usize::MAX {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = start;
            while face_of[h] == usize::MAX {
                face_of[h] = faces.len();
                walk.push(h);
                h = sigma[h ^ 1];
            }
            faces.push(walk);
        }
        let external = external_darts
            .iter()
            .map(|&h| face_of.get(h).copied().ok_or_else(|| bad(format!("external half-edge {h} does not exist"))))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(CellDecomposition { n_vertices, edges, rotations, sigma, sigma_inv, faces, face_of, external })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn target(&self, e: usize) -> usize {
        self.edges[e].1
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        if h.is_multiple_of(2) {
            self.edges[h / 2].0
        } else {
            self.edges[h / 2].1
        }
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    pub fn sigma_inv(&self, h: usize) -> usize {
        self.sigma_inv[h]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn is_external(&self, f: usize) -> bool {
        self.external.contains(&f)
    }

    pub fn external_faces(&self) -> &BTreeSet<usize> {
        &self.external
    }

    pub fn internal_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|f| !self.external.contains(f)).collect()
    }

    /// Face on the left of `e` as oriented.
    pub fn left_face(&self, e: usize) -> usize {
        self.face_of[2 * e + 1]
    }

    pub fn right_face(&self, e: usize) -> usize {
        self.face_of[2 * e]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// The site with `e_p = h`.
    pub fn site_of(&self, h: usize) -> Site {
        Site {
            vertex: self.vertex_of(h),
            plaquette: self.face_of[h ^ 1],
            left_half_edge: self.sigma[h],
            right_half_edge: h,
        }
    }

    /// Half-edges at `v` in clockwise order starting from the lowest id.
    pub fn vertex_darts(&self, v: usize) -> Vec<usize> {
        let rot = &self.rotations[v];
        let Some(&start) = rot.iter().min() else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(rot.len());
        let mut h = start;
        loop {
            out.push(h);
            h = self.sigma_inv[h];
            if h == start {
                break;
            }
        }
        out
    }

    /// Sites at `v` with internal plaquettes, in the order of [`Self::vertex_darts`].
    pub fn vertex_sites(&self, v: usize) -> Vec<Site> {
        self.vertex_darts(v)
            .into_iter()
            .map(|h| self.site_of(h))
            .filter(|s| !self.is_external(s.plaquette))
            .collect()
    }

    /// Sites of plaquette `p` in clockwise order; the site after `darts[i]` has `e_p = α(darts[i])`.
    pub fn plaquette_sites(&self, p: usize) -> Vec<Site> {
        self.faces[p].iter().map(|&h| self.site_of(h ^ 1)).collect()
    }

    pub fn walk(&self, p: usize) -> PlaquetteWalk {
        PlaquetteWalk { plaquette: p, darts: self.faces[p].clone() }
    }

    /// The mirror surface: every edge reversed and every rotation reversed.
    pub fn mirror(&self) -> CellDecomposition {
        let edges = self.edges.iter().map(|&(s, t)| (t, s)).collect();
        let rotations = self.rotations.iter().map(|r| r.iter().rev().map(|h| h ^ 1).collect()).collect();
        let external: Vec<usize> = self.external.iter().map(|&f| self.faces[f][0]).collect();
        CellDecomposition::new(self.n_vertices, edges, rotations, &external).expect("mirror of a valid rotation system")
    }
}

/// All face walks.
pub fn trace_faces(cells: &CellDecomposition) -> Vec<PlaquetteWalk> {
    (0..cells.n_faces()).map(|p| cells.walk(p)).collect()
}

/// No looping edges, and no face meets an edge twice.
pub fn regularity_check(cells: &CellDecomposition) -> Report {
    let mut r = Report::new();
    let loops: Vec<usize> = (0..cells.n_edges()).filter(|&e| cells.source(e) == cells.target(e)).collect();
    r.record("no looping edges", (!loops.is_empty()).then(|| format!("looping edges {loops:?}")));
    let repeated: Vec<String> = cells
        .faces()
        .iter()
        .enumerate()
        .filter_map(|(p, walk)| {
            let mut seen = BTreeSet::new();
            let twice: BTreeSet<usize> = walk.iter().map(|h| h / 2).filter(|e| !seen.insert(*e)).collect();
            (!twice.is_empty()).then(|| format!("face {p} meets edges {twice:?} twice"))
        })
        .collect();
    r.record("no repeated plaquette edges", (!repeated.is_empty()).then(|| repeated.join("; ")));
    r
}

/// `ε(e)` at `v`: `+1` if `e` points away from `v`.
pub fn half_edge_sign(cells: &CellDecomposition, v: usize, e: usize) -> Result<i8, SurfaceError> {
    let cell = || format!("vertex {v}");
    if e >= cells.n_edges() {
        return Err(SurfaceError::NotIncident { cell: cell(), edge: e });
    }
    match (cells.source(e) == v, cells.target(e) == v) {
        (true, true) => Err(SurfaceError::AmbiguousIncidence { cell: cell(), edge: e }),
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Err(SurfaceError::NotIncident { cell: cell(), edge: e }),
    }
}

/// `ε_p(e)`: `+1` if `e` is oriented clockwise around `p`.
pub fn plaquette_edge_sign(cells: &CellDecomposition, p: usize, e: usize) -> Result<i8, SurfaceError> {
    let cell = || format!("plaquette {p}");
    if p >= cells.n_faces() {
        return Err(SurfaceError::NotIncident { cell: cell(), edge: e });
    }
    let walk = &cells.faces()[p];
    match (walk.contains(&(2 * e)), walk.contains(&(2 * e + 1))) {
        (true, true) => Err(SurfaceError::AmbiguousIncidence { cell: cell(), edge: e }),
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Err(SurfaceError::NotIncident { cell: cell(), edge: e }),
    }
}

/// Choice of `Z_v`.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexLabel {
    Vacuum,
    Regular,
    Unit,
    Explicit(VertexModule),
}

#[derive(Debug, Clone)]
pub struct LabeledSurface {
    pub cells: CellDecomposition,
    /// `None` exactly on external faces.
    pub plaquette_labels: Vec<Option<Arc<Hopf>>>,
    pub edge_labels: Vec<Bicomodule>,
    pub vertex_labels: Vec<VertexLabel>,
}

impl LabeledSurface {
    pub fn new(
        cells: CellDecomposition,
        plaquette_labels: Vec<Option<Arc<Hopf>>>,
        edge_labels: Vec<Bicomodule>,
        vertex_labels: Vec<VertexLabel>,
    ) -> Result<Self, SurfaceError> {
        if plaquette_labels.len() != cells.n_faces() {
            return Err(SurfaceError::UnlabeledCell(format!(
                "{} plaquette labels for {} faces",
                plaquette_labels.len(),
                cells.n_faces()
            )));
        }
        if edge_labels.len() != cells.n_edges() {
            return Err(SurfaceError::UnlabeledCell(format!(
                "{} edge labels for {} edges",
                edge_labels.len(),
                cells.n_edges()
            )));
        }
        if vertex_labels.len() != cells.n_vertices() {
            return Err(SurfaceError::UnlabeledCell(format!(
                "{} vertex labels for {} vertices",
                vertex_labels.len(),
                cells.n_vertices()
            )));
        }
        for (p, l) in plaquette_labels.iter().enumerate() {
            if l.is_none() != cells.is_external(p) {
                return Err(SurfaceError::UnlabeledCell(format!("face {p}")));
            }
        }
        Ok(LabeledSurface { cells, plaquette_labels, edge_labels, vertex_labels })
    }

    /// Labels every internal face by `h`, every edge by `k` and every vertex by `z`.
    pub fn uniform(cells: CellDecomposition, h: &Arc<Hopf>, k: &Bicomodule, z: VertexLabel) -> Self {
        let plaquettes = (0..cells.n_faces()).map(|p| (!cells.is_external(p)).then(|| h.clone())).collect();
        let edges = vec![k.clone(); cells.n_edges()];
        let vertices = vec![z; cells.n_vertices()];
        LabeledSurface::new(cells, plaquettes, edges, vertices).expect("uniform labeling has matching lengths")
    }

    pub fn plaquette_label(&self, p: usize) -> Result<&Arc<Hopf>, SurfaceError> {
        self.plaquette_labels[p].as_ref().ok_or_else(|| SurfaceError::UnlabeledCell(format!("face {p} is external")))
    }

    /// `K_e^{ε(h)}` for the half-edge `h`.
    pub fn half_edge_label(&self, h: usize) -> Bicomodule {
        signed_bicomodule(&self.edge_labels[h / 2], dart_sign(h))
    }
}

/// `C_v` with sites and half-edges in the order of [`CellDecomposition::vertex_darts`].
pub fn vertex_algebra(s: &LabeledSurface, v: usize) -> Result<VertexAlgebra, SurfaceError> {
    let cells = &s.cells;
    let darts = cells.vertex_darts(v);
    let mut site_index = vec![None; darts.len()];
    let mut sites = Vec::new();
    for (i, &h) in darts.iter().enumerate() {
        let site = cells.site_of(h);
        if cells.is_external(site.plaquette) {
            continue;
        }
        site_index[i] = Some(sites.len());
        sites.push(SiteSpec {
            hopf: s.plaquette_label(site.plaquette)?.clone(),
            eps_left: dart_sign(site.left_half_edge),
            eps_right: dart_sign(h),
        });
    }
    let n = darts.len();
    let edges = darts
        .iter()
        .enumerate()
        .map(|(i, &h)| EdgeFactor {
            label: s.half_edge_label(h),
            left_site: site_index[i],
            right_site: site_index[(i + 1) % n],
        })
        .collect();
    VertexAlgebra::new(sites, edges).map_err(|source| SurfaceError::Vertex { vertex: v, source })
}

/// Resolves the label of `v` into a module over `cv`.
pub fn vertex_module(s: &LabeledSurface, v: usize, cv: &VertexAlgebra) -> Result<VertexModule, SurfaceError> {
    let wrap = |source| SurfaceError::Vertex { vertex: v, source };
    match &s.vertex_labels[v] {
        VertexLabel::Vacuum => vacuum_module(cv).map_err(wrap),
        VertexLabel::Regular => regular_module(cv).map_err(wrap),
        VertexLabel::Unit => unit_module(cv).map_err(wrap),
        VertexLabel::Explicit(m) => Ok(m.clone()),
    }
}

/// Hopf sides of every edge label against its adjacent plaquettes, then every
/// vertex module against its assembled `C_v`.
pub fn validate_labeling(s: &LabeledSurface) -> Report {
    let cells = &s.cells;
    let mut r = Report::new();
    let mut sides = Vec::new();
    for e in 0..cells.n_edges() {
        let k = &s.edge_labels[e];
        for (side, face, hopf) in [("left", cells.left_face(e), k.left_hopf()), ("right", cells.right_face(e), k.right_hopf())] {
            let ok = match &s.plaquette_labels[face] {
                Some(h) => **hopf == **h,
                None => hopf.dim() == 1,
            };
            if !ok {
                sides.push(format!("edge {e}: {side} coaction does not match face {face}"));
            }
        }
    }
    r.record("edge Hopf sides", (!sides.is_empty()).then(|| sides.join("; ")));
    if !sides.is_empty() {
        return r;
    }
    for v in 0..cells.n_vertices() {
        let prefix = format!("vertex {v}");
        let cv = match vertex_algebra(s, v) {
            Ok(cv) => cv,
            Err(e) => {
                r.fail(format!("{prefix}: vertex algebra"), e.to_string());
                continue;
            }
        };
        match vertex_module(s, v, &cv) {
            Ok(m) => r.extend_prefixed(&prefix, validate_vertex_module(&cv, &m)),
            Err(e) => r.fail(format!("{prefix}: vertex module"), e.to_string()),
        }
    }
    r
}
