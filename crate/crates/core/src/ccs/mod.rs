//! Combinatorial model of cut cellular surfaces.
//!
//! A complex is a set of vertices, directed edges and faces, where each face
//! is a cyclic word of signed edge occurrences read anticlockwise. Boundary
//! circles consist of one loop edge anchored at one external vertex; in
//! circles are read forward and out circles backward in the face words.
//! The planar cut presentation itself is not stored: cut edges and internal
//! edges are both plain interior edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

mod builtin;
mod canon;
mod format;
mod moves;
mod ops;
mod validate;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use format::{dump_surface, parse_surface, ParseError, ParseErrorKind};
pub use moves::{
    legal_moves, move_i_merge, move_i_subdivide, move_ii_merge, move_ii_split, random_walk, Move,
    WalkStep,
};
pub use ops::{
    disjoint_union, glue, reflect, reverse_edge, rotate, rotate_face_word, shrink_disk_tail,
    shrink_disk_tail_at,
};
pub use validate::{Violation, ViolationKind};

macro_rules! cell_id {
    ($name:ident, $prefix:literal) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "#{}"), self.0)
            }
        }
    };
}

cell_id!(VertexId, "v");
cell_id!(EdgeId, "e");
cell_id!(FaceId, "f");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::In => "in",
            Side::Out => "out",
        })
    }
}

/// One boundary circle: its side and its left-to-right position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circle {
    pub side: Side,
    pub pos: usize,
}

impl Circle {
    pub fn input(pos: usize) -> Circle {
        Circle { side: Side::In, pos }
    }

    pub fn output(pos: usize) -> Circle {
        Circle { side: Side::Out, pos }
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.side, self.pos)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Internal,
    /// Anchor vertex of a boundary circle.
    External(Circle),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Interior,
    Boundary(Circle),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub label: String,
    pub src: VertexId,
    pub dst: VertexId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn is_interior(&self) -> bool {
        self.kind == EdgeKind::Interior
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// One traversal of an edge inside a face word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub edge: EdgeId,
    pub dir: Direction,
}

impl Occurrence {
    pub fn forward(edge: EdgeId) -> Occurrence {
        Occurrence { edge, dir: Direction::Forward }
    }

    pub fn backward(edge: EdgeId) -> Occurrence {
        Occurrence { edge, dir: Direction::Backward }
    }

    pub fn inverse(self) -> Occurrence {
        Occurrence { edge: self.edge, dir: self.dir.flip() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub label: String,
    pub word: Vec<Occurrence>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("edge `{0}` is a boundary edge")]
    BoundaryEdge(String),
    #[error("vertex `{0}` is not internal")]
    NotInternal(String),
    #[error("vertex `{label}` has degree {degree}, expected 2")]
    Degree { label: String, degree: usize },
    #[error("vertex `{0}` only meets a single loop edge")]
    SingleLoop(String),
    #[error("cut positions ({i}, {j}) out of range for face `{face}` of length {len}")]
    Position { face: String, i: usize, j: usize, len: usize },
    #[error("both occurrences of edge `{0}` lie in the same face")]
    SameFace(String),
    #[error("cannot glue {out_count} out circles onto {in_count} in circles")]
    BoundaryMismatch { out_count: usize, in_count: usize },
    #[error("gluing needs at least one shared circle")]
    NothingToGlue,
    #[error("unknown builtin surface `{0}`")]
    UnknownBuiltin(String),
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("result is not a valid complex: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A cut cellular surface, held as plain cell data. Values are immutable in
/// practice: every operation returns a new complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    name: String,
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    faces: BTreeMap<FaceId, Face>,
    next_id: u32,
}

impl CellComplex {
    /// The complex with no cells. Its matrix is the 1×1 identity.
    pub fn empty() -> CellComplex {
        CellComplex {
            name: "empty".into(),
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            faces: BTreeMap::new(),
            next_id: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> CellComplex {
        self.name = name.into();
        self
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.values()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn face(&self, id: FaceId) -> Option<&Face> {
        self.faces.get(&id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn in_count(&self) -> usize {
        self.boundary_count(Side::In)
    }

    pub fn out_count(&self) -> usize {
        self.boundary_count(Side::Out)
    }

    fn boundary_count(&self, side: Side) -> usize {
        self.edges
            .values()
            .filter(|e| matches!(e.kind, EdgeKind::Boundary(c) if c.side == side))
            .count()
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edges.values().filter(|e| e.is_interior()).count()
    }

    /// `v`: vertices that do not anchor a boundary circle.
    pub fn internal_vertex_count(&self) -> usize {
        self.vertices
            .values()
            .filter(|v| v.kind == VertexKind::Internal)
            .count()
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// The boundary edge of a circle, if present.
    pub fn boundary_edge(&self, circle: Circle) -> Option<&Edge> {
        self.edges
            .values()
            .find(|e| e.kind == EdgeKind::Boundary(circle))
    }

    /// Boundary edges of one side ordered by position.
    pub fn boundary_edges(&self, side: Side) -> Vec<&Edge> {
        let mut out: Vec<&Edge> = self
            .edges
            .values()
            .filter(|e| matches!(e.kind, EdgeKind::Boundary(c) if c.side == side))
            .collect();
        out.sort_by_key(|e| match e.kind {
            EdgeKind::Boundary(c) => c.pos,
            EdgeKind::Interior => usize::MAX,
        });
        out
    }

    /// All `(face, position)` pairs where `edge` occurs.
    pub fn occurrences_of(&self, edge: EdgeId) -> Vec<(FaceId, usize)> {
        self.faces
            .values()
            .flat_map(|f| {
                f.word
                    .iter()
                    .enumerate()
                    .filter(move |(_, o)| o.edge == edge)
                    .map(move |(k, _)| (f.id, k))
            })
            .collect()
    }

    /// Vertex an occurrence starts from.
    pub fn tail(&self, occ: Occurrence) -> VertexId {
        let e = &self.edges[&occ.edge];
        match occ.dir {
            Direction::Forward => e.src,
            Direction::Backward => e.dst,
        }
    }

    /// Vertex an occurrence arrives at.
    pub fn head(&self, occ: Occurrence) -> VertexId {
        self.tail(occ.inverse())
    }

    /// Number of edge ends at a vertex; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|e| (e.src == v) as usize + (e.dst == v) as usize)
            .sum()
    }

    pub fn edge_by_label(&self, label: &str) -> Option<&Edge> {
        self.edges.values().find(|e| e.label == label)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<&Vertex> {
        self.vertices.values().find(|v| v.label == label)
    }

    pub fn face_by_label(&self, label: &str) -> Option<&Face> {
        self.faces.values().find(|f| f.label == label)
    }

    /// Checks every structural invariant; see [`Violation`].
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate::validate(self)
    }

    /// Genus of a connected valid complex from `χ = 2 − 2g − (n+m)`.
    pub fn genus(&self) -> Option<u32> {
        let b = (self.in_count() + self.out_count()) as i64;
        let twice = 2 - b - self.euler_characteristic();
        (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u32)
    }

    fn fresh_id(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn fresh_vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = VertexId(self.fresh_id());
        let label = unique_label(format!("v{}", id.0), |l| self.vertex_by_label(l).is_some());
        self.vertices.insert(id, Vertex { id, label, kind });
        id
    }

    fn fresh_edge(&mut self, src: VertexId, dst: VertexId, kind: EdgeKind) -> EdgeId {
        let id = EdgeId(self.fresh_id());
        let label = unique_label(format!("e{}", id.0), |l| self.edge_by_label(l).is_some());
        self.edges.insert(id, Edge { id, label, src, dst, kind });
        id
    }

    fn fresh_face(&mut self, word: Vec<Occurrence>) -> FaceId {
        let id = FaceId(self.fresh_id());
        let label = unique_label(format!("f{}", id.0), |l| self.face_by_label(l).is_some());
        self.faces.insert(id, Face { id, label, word });
        id
    }

    fn checked(self) -> Result<CellComplex, ComplexError> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(ComplexError::Invalid(v)),
        }
    }
}

fn unique_label(mut label: String, taken: impl Fn(&str) -> bool) -> String {
    while taken(&label) {
        label.push('\'');
    }
    label
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate {kind} id `{label}`")]
    Duplicate { kind: &'static str, label: String },
    #[error("unknown {kind} `{label}`")]
    Dangling { kind: &'static str, label: String },
}

/// Assembles a complex from labelled cells. The result is not validated.
#[derive(Debug)]
pub struct ComplexBuilder {
    complex: CellComplex,
    vertex_ids: HashMap<String, VertexId>,
    edge_ids: HashMap<String, EdgeId>,
    face_labels: HashMap<String, FaceId>,
}

impl ComplexBuilder {
    pub fn new(name: impl Into<String>) -> ComplexBuilder {
        ComplexBuilder {
            complex: CellComplex::empty().with_name(name),
            vertex_ids: HashMap::new(),
            edge_ids: HashMap::new(),
            face_labels: HashMap::new(),
        }
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.complex.name = name.into();
    }

    pub fn vertex(&mut self, label: &str, kind: VertexKind) -> Result<VertexId, BuildError> {
        if self.vertex_ids.contains_key(label) {
            return Err(BuildError::Duplicate { kind: "vertex", label: label.into() });
        }
        let id = VertexId(self.complex.fresh_id());
        self.complex
            .vertices
            .insert(id, Vertex { id, label: label.into(), kind });
        self.vertex_ids.insert(label.into(), id);
        Ok(id)
    }

    pub fn edge(
        &mut self,
        label: &str,
        src: &str,
        dst: &str,
        kind: EdgeKind,
    ) -> Result<EdgeId, BuildError> {
        if self.edge_ids.contains_key(label) {
            return Err(BuildError::Duplicate { kind: "edge", label: label.into() });
        }
        let lookup = |l: &str| {
            self.vertex_ids.get(l).copied().ok_or(BuildError::Dangling {
                kind: "vertex",
                label: l.into(),
            })
        };
        let (src, dst) = (lookup(src)?, lookup(dst)?);
        let id = EdgeId(self.complex.fresh_id());
        self.complex.edges.insert(
            id,
            Edge { id, label: label.into(), src, dst, kind },
        );
        self.edge_ids.insert(label.into(), id);
        Ok(id)
    }

    /// Adds a face from occurrence tokens: `a` is forward, `~a` backward.
    pub fn face<S: AsRef<str>>(&mut self, label: &str, word: &[S]) -> Result<FaceId, BuildError> {
        if self.face_labels.contains_key(label) {
            return Err(BuildError::Duplicate { kind: "face", label: label.into() });
        }
        let word = word
            .iter()
            .map(|tok| {
                let tok = tok.as_ref();
                let (name, dir) = match tok.strip_prefix('~') {
                    Some(rest) => (rest, Direction::Backward),
                    None => (tok, Direction::Forward),
                };
                self.edge_ids
                    .get(name)
                    .map(|&edge| Occurrence { edge, dir })
                    .ok_or(BuildError::Dangling { kind: "edge", label: name.into() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let id = FaceId(self.complex.fresh_id());
        self.complex
            .faces
            .insert(id, Face { id, label: label.into(), word });
        self.face_labels.insert(label.into(), id);
        Ok(id)
    }

    pub fn build(self) -> CellComplex {
        self.complex
    }
}
