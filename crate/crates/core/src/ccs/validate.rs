use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{CellComplex, Direction, EdgeId, EdgeKind, Side, VertexId, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    UnknownCell,
    EmptyFace,
    Chaining,
    /// An interior edge does not occur exactly twice.
    OccurrenceCount,
    /// An interior edge occurs twice with the same direction.
    Orientation,
    BoundaryOccurrence,
    /// In circles must be read forward, out circles backward.
    BoundaryOrientation,
    BoundaryLoop,
    BoundaryPosition,
    Anchor,
    IsolatedVertex,
    /// The faces around a vertex do not close up into a single disc or half-disc.
    NonManifold,
    EulerCharacteristic,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::UnknownCell => "unknown-cell",
            ViolationKind::EmptyFace => "empty-face",
            ViolationKind::Chaining => "chaining",
            ViolationKind::OccurrenceCount => "occurrence-count",
            ViolationKind::Orientation => "orientation",
            ViolationKind::BoundaryOccurrence => "boundary-occurrence",
            ViolationKind::BoundaryOrientation => "boundary-orientation",
            ViolationKind::BoundaryLoop => "boundary-loop",
            ViolationKind::BoundaryPosition => "boundary-position",
            ViolationKind::Anchor => "anchor",
            ViolationKind::IsolatedVertex => "isolated-vertex",
            ViolationKind::NonManifold => "non-manifold",
            ViolationKind::EulerCharacteristic => "euler-characteristic",
        })
    }
}

/// One failed invariant, naming the offending cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub cell: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.kind, self.cell, self.detail)
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn push(&mut self, kind: ViolationKind, cell: String, detail: impl Into<String>) {
        self.0.push(Violation { kind, cell, detail: detail.into() });
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

pub(super) fn validate(m: &CellComplex) -> Result<(), Vec<Violation>> {
    let mut report = Report(Vec::new());
    check_references(m, &mut report);
    if !report.0.is_empty() {
        return Err(report.0);
    }
    check_faces(m, &mut report);
    check_occurrences(m, &mut report);
    check_boundary(m, &mut report);
    for v in m.vertices() {
        if m.degree(v.id) == 0 {
            report.push(
                ViolationKind::IsolatedVertex,
                format!("vertex `{}`", v.label),
                "not an endpoint of any edge",
            );
        }
    }
    if report.0.is_empty() {
        check_links(m, &mut report);
        check_euler(m, &mut report);
    }
    if report.0.is_empty() {
        Ok(())
    } else {
        Err(report.0)
    }
}

fn check_references(m: &CellComplex, report: &mut Report) {
    for e in m.edges() {
        for end in [e.src, e.dst] {
            if m.vertex(end).is_none() {
                report.push(
                    ViolationKind::UnknownCell,
                    format!("edge `{}`", e.label),
                    format!("endpoint {end} does not exist"),
                );
            }
        }
    }
    for f in m.faces() {
        for occ in &f.word {
            if m.edge(occ.edge).is_none() {
                report.push(
                    ViolationKind::UnknownCell,
                    format!("face `{}`", f.label),
                    format!("edge {} does not exist", occ.edge),
                );
            }
        }
    }
}

fn check_faces(m: &CellComplex, report: &mut Report) {
    for f in m.faces() {
        if f.word.is_empty() {
            report.push(ViolationKind::EmptyFace, format!("face `{}`", f.label), "empty word");
            continue;
        }
        let len = f.word.len();
        for k in 0..len {
            let here = f.word[k];
            let next = f.word[(k + 1) % len];
            if m.head(here) != m.tail(next) {
                report.push(
                    ViolationKind::Chaining,
                    format!("face `{}`", f.label),
                    format!("occurrence {k} does not end where occurrence {} starts", (k + 1) % len),
                );
            }
        }
    }
}

fn check_occurrences(m: &CellComplex, report: &mut Report) {
    let mut seen: HashMap<EdgeId, Vec<Direction>> = HashMap::new();
    for f in m.faces() {
        for occ in &f.word {
            seen.entry(occ.edge).or_default().push(occ.dir);
        }
    }
    for e in m.edges() {
        let dirs = seen.get(&e.id).map(Vec::as_slice).unwrap_or(&[]);
        let cell = format!("edge `{}`", e.label);
        match e.kind {
            EdgeKind::Interior => {
                if dirs.len() != 2 {
                    report.push(
                        ViolationKind::OccurrenceCount,
                        cell,
                        format!("interior edge occurs {} times, expected 2", dirs.len()),
                    );
                } else if dirs[0] == dirs[1] {
                    report.push(
                        ViolationKind::Orientation,
                        cell,
                        format!("both occurrences are {:?}", dirs[0]),
                    );
                }
            }
            EdgeKind::Boundary(circle) => {
                if dirs.len() != 1 {
                    report.push(
                        ViolationKind::BoundaryOccurrence,
                        cell,
                        format!("boundary edge occurs {} times, expected 1", dirs.len()),
                    );
                } else {
                    let expected = match circle.side {
                        Side::In => Direction::Forward,
                        Side::Out => Direction::Backward,
                    };
                    if dirs[0] != expected {
                        report.push(
                            ViolationKind::BoundaryOrientation,
                            cell,
                            format!("{} circle read {:?}", circle.side, dirs[0]),
                        );
                    }
                }
            }
        }
    }
}

fn check_boundary(m: &CellComplex, report: &mut Report) {
    for side in [Side::In, Side::Out] {
        let mut positions: BTreeMap<usize, usize> = BTreeMap::new();
        let mut count = 0;
        for e in m.edges() {
            if let EdgeKind::Boundary(c) = e.kind {
                if c.side == side {
                    *positions.entry(c.pos).or_default() += 1;
                    count += 1;
                }
            }
        }
        for (&pos, &times) in &positions {
            if times > 1 {
                report.push(
                    ViolationKind::BoundaryPosition,
                    format!("{side} boundary"),
                    format!("position {pos} used {times} times"),
                );
            }
        }
        for pos in 0..count {
            if !positions.contains_key(&pos) {
                report.push(
                    ViolationKind::BoundaryPosition,
                    format!("{side} boundary"),
                    format!("position {pos} missing"),
                );
            }
        }
    }
    for e in m.edges() {
        let EdgeKind::Boundary(circle) = e.kind else { continue };
        let cell = format!("edge `{}`", e.label);
        if !e.is_loop() {
            report.push(ViolationKind::BoundaryLoop, cell, "boundary edge is not a loop");
            continue;
        }
        if m.vertex(e.src).map(|v| v.kind) != Some(VertexKind::External(circle)) {
            report.push(
                ViolationKind::Anchor,
                cell,
                format!("loop vertex does not anchor circle {circle}"),
            );
        }
    }
    let mut anchored: BTreeSet<_> = BTreeSet::new();
    for v in m.vertices() {
        let VertexKind::External(circle) = v.kind else { continue };
        let cell = format!("vertex `{}`", v.label);
        if !anchored.insert(circle) {
            report.push(ViolationKind::Anchor, cell, format!("second anchor of circle {circle}"));
        } else if m.boundary_edge(circle).is_none() {
            report.push(ViolationKind::Anchor, cell, format!("circle {circle} has no edge"));
        }
    }
}

// Around each vertex, the face corners link the edge ends into a graph. On a
// surface this graph is one cycle at an interior point, or one path at a
// boundary anchor; given the occurrence checks above, it suffices that it is
// connected.
fn check_links(m: &CellComplex, report: &mut Report) {
    let mut end_index: HashMap<(EdgeId, bool), usize> = HashMap::new();
    for e in m.edges() {
        let n = end_index.len();
        end_index.insert((e.id, false), n);
        end_index.insert((e.id, true), n + 1);
    }
    let mut sets = DisjointSets::new(end_index.len());
    // the end of an occurrence at its head / tail; `true` marks the dst end
    let head_end = |o: super::Occurrence| (o.edge, o.dir == Direction::Forward);
    let tail_end = |o: super::Occurrence| (o.edge, o.dir == Direction::Backward);
    for f in m.faces() {
        let len = f.word.len();
        for k in 0..len {
            let before = f.word[(k + len - 1) % len];
            let after = f.word[k];
            sets.union(end_index[&head_end(before)], end_index[&tail_end(after)]);
        }
    }
    let mut root_of: HashMap<VertexId, usize> = HashMap::new();
    let mut flagged: BTreeSet<VertexId> = BTreeSet::new();
    for e in m.edges() {
        for (vertex, is_dst) in [(e.src, false), (e.dst, true)] {
            let root = sets.find(end_index[&(e.id, is_dst)]);
            match root_of.get(&vertex) {
                None => {
                    root_of.insert(vertex, root);
                }
                Some(&r) if r != root => {
                    flagged.insert(vertex);
                }
                Some(_) => {}
            }
        }
    }
    for v in flagged {
        report.push(
            ViolationKind::NonManifold,
            format!("vertex `{}`", m.vertices[&v].label),
            "faces around the vertex form more than one fan",
        );
    }
}

/// Connected components as vertex sets, with each component's χ and
/// boundary-circle count.
pub(crate) fn components(m: &CellComplex) -> Vec<(Vec<VertexId>, i64, usize)> {
    let ids: Vec<VertexId> = m.vertices.keys().copied().collect();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut sets = DisjointSets::new(ids.len());
    for e in m.edges() {
        sets.union(index[&e.src], index[&e.dst]);
    }
    let mut by_root: BTreeMap<usize, (Vec<VertexId>, i64, usize)> = BTreeMap::new();
    for (i, &v) in ids.iter().enumerate() {
        let entry = by_root.entry(sets.find(i)).or_default();
        entry.0.push(v);
        entry.1 += 1;
    }
    for e in m.edges() {
        let entry = by_root.get_mut(&sets.find(index[&e.src])).expect("component");
        entry.1 -= 1;
        if !e.is_interior() {
            entry.2 += 1;
        }
    }
    for f in m.faces() {
        if let Some(&first) = f.word.first() {
            let root = sets.find(index[&m.tail(first)]);
            by_root.get_mut(&root).expect("component").1 += 1;
        }
    }
    by_root.into_values().collect()
}

fn check_euler(m: &CellComplex, report: &mut Report) {
    for (vertices, chi, boundaries) in components(m) {
        let twice_genus = 2 - boundaries as i64 - chi;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            report.push(
                ViolationKind::EulerCharacteristic,
                format!("component of vertex `{}`", m.vertices[&vertices[0]].label),
                format!("χ = {chi} with {boundaries} boundary circles has no genus"),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::{builtin, ComplexBuilder, EdgeKind, VertexKind, BUILTIN_NAMES};

    fn kinds(m: &CellComplex) -> Vec<ViolationKind> {
        m.validate().unwrap_err().into_iter().map(|v| v.kind).collect()
    }

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            assert_eq!(m.validate(), Ok(()), "{name}");
        }
        let torus = builtin("torus").unwrap();
        assert_eq!(torus.genus(), Some(1));
        let pants = builtin("pants").unwrap();
        assert_eq!(pants.euler_characteristic(), -1);
        assert_eq!(
            (pants.vertex_count(), pants.edge_count(), pants.face_count()),
            (3, 5, 1)
        );
    }

    #[test]
    fn doubled_forward_edge_is_an_orientation_violation() {
        let mut b = ComplexBuilder::new("bad");
        b.vertex("w", VertexKind::Internal).unwrap();
        b.edge("a", "w", "w", EdgeKind::Interior).unwrap();
        b.edge("b", "w", "w", EdgeKind::Interior).unwrap();
        b.face("f", &["a", "b", "a", "~b"]).unwrap();
        assert!(kinds(&b.build()).contains(&ViolationKind::Orientation));
    }

    #[test]
    fn chaining_and_empty_faces() {
        let mut b = ComplexBuilder::new("bad");
        b.vertex("x", VertexKind::Internal).unwrap();
        b.vertex("y", VertexKind::Internal).unwrap();
        b.edge("a", "x", "y", EdgeKind::Interior).unwrap();
        b.face("f", &["a", "a"]).unwrap();
        b.face("g", &[] as &[&str]).unwrap();
        let k = kinds(&b.build());
        assert!(k.contains(&ViolationKind::Chaining));
        assert!(k.contains(&ViolationKind::EmptyFace));
    }

    #[test]
    fn isolated_vertex() {
        let m = {
            let mut b = ComplexBuilder::new("s");
            b.vertex("v1", VertexKind::Internal).unwrap();
            b.vertex("v2", VertexKind::Internal).unwrap();
            b.vertex("lonely", VertexKind::Internal).unwrap();
            b.edge("a", "v1", "v2", EdgeKind::Interior).unwrap();
            b.face("f", &["a", "~a"]).unwrap();
            b.build()
        };
        assert_eq!(kinds(&m), vec![ViolationKind::IsolatedVertex]);
    }

    #[test]
    fn boundary_rules() {
        use crate::ccs::Circle;
        // duplicate out position
        let mut b = ComplexBuilder::new("dup");
        b.vertex("p", VertexKind::External(Circle::output(0))).unwrap();
        b.vertex("q", VertexKind::External(Circle::output(0))).unwrap();
        b.edge("g", "p", "p", EdgeKind::Boundary(Circle::output(0))).unwrap();
        b.edge("h", "q", "q", EdgeKind::Boundary(Circle::output(0))).unwrap();
        b.edge("k", "p", "q", EdgeKind::Interior).unwrap();
        b.face("f", &["k", "~h", "~k", "~g"]).unwrap();
        let k = kinds(&b.build());
        assert!(k.contains(&ViolationKind::BoundaryPosition));
        assert!(k.contains(&ViolationKind::Anchor));

        // an in circle read backward
        let mut b = ComplexBuilder::new("flip");
        b.vertex("w", VertexKind::External(Circle::input(0))).unwrap();
        b.vertex("u", VertexKind::Internal).unwrap();
        b.edge("g", "w", "w", EdgeKind::Boundary(Circle::input(0))).unwrap();
        b.edge("k", "w", "u", EdgeKind::Interior).unwrap();
        b.face("f", &["~g", "k", "~k"]).unwrap();
        assert_eq!(kinds(&b.build()), vec![ViolationKind::BoundaryOrientation]);
    }

    #[test]
    fn pinched_vertex_is_not_a_manifold() {
        // two spheres sharing one vertex
        let mut b = ComplexBuilder::new("pinch");
        for v in ["c", "x", "y"] {
            b.vertex(v, VertexKind::Internal).unwrap();
        }
        b.edge("a", "c", "x", EdgeKind::Interior).unwrap();
        b.edge("b", "c", "y", EdgeKind::Interior).unwrap();
        b.face("f", &["a", "~a"]).unwrap();
        b.face("g", &["b", "~b"]).unwrap();
        let k = kinds(&b.build());
        assert!(k.contains(&ViolationKind::NonManifold));
    }

    #[test]
    fn empty_complex_is_valid() {
        assert_eq!(CellComplex::empty().validate(), Ok(()));
    }
}
