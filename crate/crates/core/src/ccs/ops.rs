use std::collections::HashMap;

use super::{
    unique_label, CellComplex, Circle, ComplexError, Edge, EdgeId, EdgeKind, Face, FaceId, Side,
    Vertex, VertexId, VertexKind,
};

/// Copies every cell of `other` into `target` under fresh ids, renaming labels
/// that collide. Circles are rewritten with `map_circle`.
fn absorb(
    target: &mut CellComplex,
    other: &CellComplex,
    map_circle: impl Fn(Circle) -> Circle,
) -> (HashMap<VertexId, VertexId>, HashMap<EdgeId, EdgeId>) {
    let mut vmap = HashMap::new();
    let mut emap = HashMap::new();
    for v in other.vertices() {
        let id = VertexId(target.fresh_id());
        let label = unique_label(v.label.clone(), |l| target.vertex_by_label(l).is_some());
        let kind = match v.kind {
            VertexKind::Internal => VertexKind::Internal,
            VertexKind::External(c) => VertexKind::External(map_circle(c)),
        };
        target.vertices.insert(id, Vertex { id, label, kind });
        vmap.insert(v.id, id);
    }
    for e in other.edges() {
        let id = EdgeId(target.fresh_id());
        let label = unique_label(e.label.clone(), |l| target.edge_by_label(l).is_some());
        let kind = match e.kind {
            EdgeKind::Interior => EdgeKind::Interior,
            EdgeKind::Boundary(c) => EdgeKind::Boundary(map_circle(c)),
        };
        target.edges.insert(
            id,
            Edge { id, label, src: vmap[&e.src], dst: vmap[&e.dst], kind },
        );
        emap.insert(e.id, id);
    }
    for f in other.faces() {
        let id = FaceId(target.fresh_id());
        let label = unique_label(f.label.clone(), |l| target.face_by_label(l).is_some());
        let word = f
            .word
            .iter()
            .map(|o| super::Occurrence { edge: emap[&o.edge], dir: o.dir })
            .collect();
        target.faces.insert(id, Face { id, label, word });
    }
    (vmap, emap)
}

/// Juxtaposition: `m1`'s circles keep their positions, `m2`'s are shifted
/// to the right of them.
pub fn disjoint_union(m1: &CellComplex, m2: &CellComplex) -> CellComplex {
    let (n1, o1) = (m1.in_count(), m1.out_count());
    let mut out = m1.clone();
    absorb(&mut out, m2, |c| match c.side {
        Side::In => Circle::input(c.pos + n1),
        Side::Out => Circle::output(c.pos + o1),
    });
    out.name = format!("union({},{})", m1.name, m2.name);
    out
}

/// `m2 ∘ m1`: the k-th out circle of `m1` is identified with the k-th in
/// circle of `m2`. Each glued pair becomes one interior edge and its two
/// anchors merge into one internal vertex.
pub fn glue(m1: &CellComplex, m2: &CellComplex) -> Result<CellComplex, ComplexError> {
    let shared = m1.out_count();
    if shared != m2.in_count() {
        return Err(ComplexError::BoundaryMismatch {
            out_count: shared,
            in_count: m2.in_count(),
        });
    }
    if shared == 0 {
        return Err(ComplexError::NothingToGlue);
    }
    let mut out = m1.clone();
    let (_, emap) = absorb(&mut out, m2, |c| c);
    let upper: Vec<EdgeId> = m1.boundary_edges(Side::Out).iter().map(|e| e.id).collect();
    let lower: Vec<EdgeId> = m2
        .boundary_edges(Side::In)
        .iter()
        .map(|e| emap[&e.id])
        .collect();
    for (&keep, &drop) in upper.iter().zip(&lower) {
        let keep_vertex = out.edges[&keep].src;
        let drop_vertex = out.edges[&drop].src;
        out.edges.remove(&drop);
        for f in out.faces.values_mut() {
            for occ in &mut f.word {
                if occ.edge == drop {
                    occ.edge = keep;
                }
            }
        }
        for e in out.edges.values_mut() {
            if e.src == drop_vertex {
                e.src = keep_vertex;
            }
            if e.dst == drop_vertex {
                e.dst = keep_vertex;
            }
        }
        out.vertices.remove(&drop_vertex);
        out.vertices.get_mut(&keep_vertex).expect("anchor").kind = VertexKind::Internal;
        out.edges.get_mut(&keep).expect("glued edge").kind = EdgeKind::Interior;
    }
    out.name = format!("glue({},{})", m1.name, m2.name);
    out.checked()
}

/// Reflection in a horizontal axis: face orientation reverses and in and out
/// circles swap, keeping their positions.
pub fn reflect(m: &CellComplex) -> CellComplex {
    let mut out = m.clone();
    for v in out.vertices.values_mut() {
        if let VertexKind::External(c) = &mut v.kind {
            c.side = c.side.opposite();
        }
    }
    for e in out.edges.values_mut() {
        if let EdgeKind::Boundary(c) = &mut e.kind {
            c.side = c.side.opposite();
        }
    }
    for f in out.faces.values_mut() {
        f.word.reverse();
        for occ in &mut f.word {
            *occ = occ.inverse();
        }
    }
    out.name = format!("reflect({})", m.name);
    out
}

/// Rotation by 180 degrees: in and out circles swap with their order
/// reversed, and every boundary circle is re-oriented.
pub fn rotate(m: &CellComplex) -> CellComplex {
    let (n, o) = (m.in_count(), m.out_count());
    let turn = |c: Circle| match c.side {
        Side::In => Circle::output(n - 1 - c.pos),
        Side::Out => Circle::input(o - 1 - c.pos),
    };
    let mut out = m.clone();
    for v in out.vertices.values_mut() {
        if let VertexKind::External(c) = v.kind {
            v.kind = VertexKind::External(turn(c));
        }
    }
    let mut boundary = Vec::new();
    for e in out.edges.values_mut() {
        if let EdgeKind::Boundary(c) = e.kind {
            e.kind = EdgeKind::Boundary(turn(c));
            boundary.push(e.id);
        }
    }
    for f in out.faces.values_mut() {
        for occ in &mut f.word {
            if boundary.contains(&occ.edge) {
                *occ = occ.inverse();
            }
        }
    }
    out.name = format!("rotate({})", m.name);
    out
}

/// Reverses the orientation of an interior edge.
pub fn reverse_edge(m: &CellComplex, edge: EdgeId) -> Result<CellComplex, ComplexError> {
    let e = m.edge(edge).ok_or(ComplexError::UnknownEdge(edge))?;
    if !e.is_interior() {
        return Err(ComplexError::BoundaryEdge(e.label.clone()));
    }
    let mut out = m.clone();
    let e = out.edges.get_mut(&edge).expect("edge");
    std::mem::swap(&mut e.src, &mut e.dst);
    for f in out.faces.values_mut() {
        for occ in &mut f.word {
            if occ.edge == edge {
                *occ = occ.inverse();
            }
        }
    }
    Ok(out)
}

/// Restarts a face word at position `start`.
pub fn rotate_face_word(
    m: &CellComplex,
    face: FaceId,
    start: usize,
) -> Result<CellComplex, ComplexError> {
    let f = m.face(face).ok_or(ComplexError::UnknownFace(face))?;
    if start >= f.word.len() {
        return Err(ComplexError::Position {
            face: f.label.clone(),
            i: start,
            j: start,
            len: f.word.len(),
        });
    }
    let mut out = m.clone();
    out.faces.get_mut(&face).expect("face").word.rotate_left(start);
    Ok(out)
}

/// Removes a dangling edge: `edge` runs out to an internal vertex touched by
/// nothing else and straight back, as `(α, α⁻¹)` inside one face. The edge
/// and its tip vertex disappear, which leaves the invariant unchanged.
pub fn shrink_disk_tail_at(m: &CellComplex, edge: EdgeId) -> Result<CellComplex, ComplexError> {
    let e = m.edge(edge).ok_or(ComplexError::UnknownEdge(edge))?;
    let refuse = |why: &str| Err(ComplexError::NotApplicable(format!("edge `{}` {why}", e.label)));
    if !e.is_interior() {
        return Err(ComplexError::BoundaryEdge(e.label.clone()));
    }
    if e.is_loop() {
        return refuse("is a loop");
    }
    let occ = m.occurrences_of(edge);
    let [(f1, p1), (f2, p2)] = occ[..] else {
        return refuse("does not occur twice");
    };
    if f1 != f2 {
        return refuse("lies in two faces");
    }
    let word = &m.faces[&f1].word;
    let len = word.len();
    let first = if (p1 + 1) % len == p2 {
        p1
    } else if (p2 + 1) % len == p1 {
        p2
    } else {
        return refuse("occurrences are not adjacent");
    };
    if len <= 2 {
        return refuse("would leave an empty face");
    }
    let tip = m.head(word[first]);
    if m.vertices[&tip].kind != VertexKind::Internal || m.degree(tip) != 1 {
        return refuse("does not end at a free internal vertex");
    }
    let mut out = m.clone();
    let w = &mut out.faces.get_mut(&f1).expect("face").word;
    w.rotate_left(first);
    w.drain(0..2);
    out.edges.remove(&edge);
    out.vertices.remove(&tip);
    out.checked()
}

/// Applies [`shrink_disk_tail_at`] to the first edge where it applies.
pub fn shrink_disk_tail(m: &CellComplex) -> Option<CellComplex> {
    m.edges().find_map(|e| shrink_disk_tail_at(m, e.id).ok())
}
