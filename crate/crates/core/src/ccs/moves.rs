//! Moves I and II in both directions, and seeded random sequences of them.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    CellComplex, ComplexError, Direction, EdgeId, EdgeKind, FaceId, Occurrence, VertexId,
    VertexKind,
};

/// Move I forward: puts a new internal vertex in the middle of an interior
/// edge. `a` becomes `a₁a₂`, and `a⁻¹` becomes `a₂⁻¹a₁⁻¹`.
pub fn move_i_subdivide(m: &CellComplex, edge: EdgeId) -> Result<CellComplex, ComplexError> {
    let e = m.edge(edge).ok_or(ComplexError::UnknownEdge(edge))?;
    if !e.is_interior() {
        return Err(ComplexError::BoundaryEdge(e.label.clone()));
    }
    let (src, dst) = (e.src, e.dst);
    let mut out = m.clone();
    let mid = out.fresh_vertex(VertexKind::Internal);
    let first = out.fresh_edge(src, mid, EdgeKind::Interior);
    let second = out.fresh_edge(mid, dst, EdgeKind::Interior);
    out.edges.remove(&edge);
    for f in out.faces.values_mut() {
        f.word = f
            .word
            .iter()
            .flat_map(|&o| match (o.edge == edge, o.dir) {
                (false, _) => vec![o],
                (true, Direction::Forward) => {
                    vec![Occurrence::forward(first), Occurrence::forward(second)]
                }
                (true, Direction::Backward) => {
                    vec![Occurrence::backward(second), Occurrence::backward(first)]
                }
            })
            .collect();
    }
    out.checked()
}

/// How a degree-two vertex joins its edges: entering along `incoming`,
/// leaving along `outgoing`.
struct VertexMerge {
    incoming: Occurrence,
    outgoing: Occurrence,
    from: VertexId,
    to: VertexId,
}

fn plan_vertex_merge(m: &CellComplex, v: VertexId) -> Result<VertexMerge, ComplexError> {
    let vertex = m.vertex(v).ok_or(ComplexError::UnknownVertex(v))?;
    if vertex.kind != VertexKind::Internal {
        return Err(ComplexError::NotInternal(vertex.label.clone()));
    }
    let ends: Vec<(EdgeId, bool)> = m
        .edges()
        .flat_map(|e| {
            let mut here = Vec::new();
            if e.src == v {
                here.push((e.id, false));
            }
            if e.dst == v {
                here.push((e.id, true));
            }
            here
        })
        .collect();
    if ends.len() != 2 {
        return Err(ComplexError::Degree { label: vertex.label.clone(), degree: ends.len() });
    }
    let [(e1, e1_ends_here), (e2, e2_ends_here)] = [ends[0], ends[1]];
    if e1 == e2 {
        return Err(ComplexError::SingleLoop(vertex.label.clone()));
    }
    let (a, b) = (&m.edges[&e1], &m.edges[&e2]);
    if !a.is_interior() || !b.is_interior() {
        return Err(ComplexError::NotApplicable(format!(
            "vertex `{}` touches a boundary edge",
            vertex.label
        )));
    }
    let incoming = if e1_ends_here { Occurrence::forward(e1) } else { Occurrence::backward(e1) };
    let outgoing = if e2_ends_here { Occurrence::backward(e2) } else { Occurrence::forward(e2) };
    let plan = VertexMerge {
        incoming,
        outgoing,
        from: m.tail(incoming),
        to: m.head(outgoing),
    };
    for f in m.faces() {
        let len = f.word.len();
        for (k, &o) in f.word.iter().enumerate() {
            let next = f.word[(k + 1) % len];
            let ok = if o == plan.incoming {
                next == plan.outgoing
            } else if o == plan.outgoing.inverse() {
                next == plan.incoming.inverse()
            } else {
                true
            };
            if !ok {
                return Err(ComplexError::NotApplicable(format!(
                    "face `{}` turns back at vertex `{}`",
                    f.label, vertex.label
                )));
            }
        }
    }
    Ok(plan)
}

/// Move I backward: removes an internal vertex where exactly two distinct
/// interior edges meet, joining them into one.
pub fn move_i_merge(m: &CellComplex, v: VertexId) -> Result<CellComplex, ComplexError> {
    let plan = plan_vertex_merge(m, v)?;
    let mut out = m.clone();
    let joined = out.fresh_edge(plan.from, plan.to, EdgeKind::Interior);
    for f in out.faces.values_mut() {
        let len = f.word.len();
        let is_pair_start =
            |o: Occurrence| o == plan.incoming || o == plan.outgoing.inverse();
        let seconds: BTreeSet<usize> = (0..len)
            .filter(|&k| is_pair_start(f.word[k]))
            .map(|k| (k + 1) % len)
            .collect();
        let Some(start) = (0..len).find(|k| !seconds.contains(k)) else {
            continue;
        };
        let mut word = Vec::with_capacity(len);
        let mut k = 0;
        while k < len {
            let o = f.word[(start + k) % len];
            if o == plan.incoming {
                word.push(Occurrence::forward(joined));
                k += 2;
            } else if o == plan.outgoing.inverse() {
                word.push(Occurrence::backward(joined));
                k += 2;
            } else {
                word.push(o);
                k += 1;
            }
        }
        f.word = word;
    }
    out.edges.remove(&plan.incoming.edge);
    out.edges.remove(&plan.outgoing.edge);
    out.vertices.remove(&v);
    out.checked()
}

/// Move II forward: cuts face `face` along a new interior edge from the
/// vertex at cut point `i` to the vertex at cut point `j`. Cut point `k` sits
/// just before occurrence `k`. With `i == j` one side is a monogon.
pub fn move_ii_split(
    m: &CellComplex,
    face: FaceId,
    i: usize,
    j: usize,
) -> Result<CellComplex, ComplexError> {
    let f = m.face(face).ok_or(ComplexError::UnknownFace(face))?;
    let len = f.word.len();
    if i >= len || j >= len {
        return Err(ComplexError::Position { face: f.label.clone(), i, j, len });
    }
    let word = f.word.clone();
    let (from, to) = (m.tail(word[i]), m.tail(word[j]));
    let first_len = (j + len - i) % len;
    let segment = |start: usize, count: usize| -> Vec<Occurrence> {
        (0..count).map(|k| word[(start + k) % len]).collect()
    };
    let mut out = m.clone();
    let chord = out.fresh_edge(from, to, EdgeKind::Interior);
    let mut left = vec![Occurrence::backward(chord)];
    left.extend(segment(i, first_len));
    let mut right = vec![Occurrence::forward(chord)];
    right.extend(segment(j, len - first_len));
    out.faces.remove(&face);
    out.fresh_face(left);
    out.fresh_face(right);
    out.checked()
}

/// Move II backward: deletes an interior edge separating two distinct faces
/// and splices them into one.
pub fn move_ii_merge(m: &CellComplex, edge: EdgeId) -> Result<CellComplex, ComplexError> {
    let e = m.edge(edge).ok_or(ComplexError::UnknownEdge(edge))?;
    if !e.is_interior() {
        return Err(ComplexError::BoundaryEdge(e.label.clone()));
    }
    let occ = m.occurrences_of(edge);
    let [(f1, p1), (f2, p2)] = occ[..] else {
        return Err(ComplexError::NotApplicable(format!(
            "edge `{}` does not occur twice",
            e.label
        )));
    };
    if f1 == f2 {
        return Err(ComplexError::SameFace(e.label.clone()));
    }
    let rotated = |f: FaceId, p: usize| {
        let mut w = m.faces[&f].word.clone();
        w.rotate_left(p);
        w.remove(0);
        w
    };
    let (fwd, bwd) = if m.faces[&f1].word[p1].dir == Direction::Forward {
        ((f1, p1), (f2, p2))
    } else {
        ((f2, p2), (f1, p1))
    };
    let mut word = rotated(fwd.0, fwd.1);
    word.extend(rotated(bwd.0, bwd.1));
    if word.is_empty() {
        return Err(ComplexError::NotApplicable(format!(
            "merging along `{}` leaves an empty face",
            e.label
        )));
    }
    let mut out = m.clone();
    out.faces.remove(&f1);
    out.faces.remove(&f2);
    out.edges.remove(&edge);
    out.fresh_face(word);
    out.checked()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Subdivide(EdgeId),
    MergeVertex(VertexId),
    Split { face: FaceId, i: usize, j: usize },
    MergeFaces(EdgeId),
}

impl Move {
    pub fn apply(&self, m: &CellComplex) -> Result<CellComplex, ComplexError> {
        match *self {
            Move::Subdivide(e) => move_i_subdivide(m, e),
            Move::MergeVertex(v) => move_i_merge(m, v),
            Move::Split { face, i, j } => move_ii_split(m, face, i, j),
            Move::MergeFaces(e) => move_ii_merge(m, e),
        }
    }

    /// Readable form using the labels of `m`, the complex the move applies to.
    pub fn describe(&self, m: &CellComplex) -> String {
        let edge = |e: EdgeId| m.edge(e).map_or(e.to_string(), |e| e.label.clone());
        match *self {
            Move::Subdivide(e) => format!("I+ subdivide edge {}", edge(e)),
            Move::MergeVertex(v) => format!(
                "I- merge at vertex {}",
                m.vertex(v).map_or(v.to_string(), |v| v.label.clone())
            ),
            Move::Split { face, i, j } => format!(
                "II+ split face {} at ({i},{j})",
                m.face(face).map_or(face.to_string(), |f| f.label.clone())
            ),
            Move::MergeFaces(e) => format!("II- remove edge {}", edge(e)),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Subdivide(e) => write!(f, "subdivide {e}"),
            Move::MergeVertex(v) => write!(f, "merge-vertex {v}"),
            Move::Split { face, i, j } => write!(f, "split {face} {i} {j}"),
            Move::MergeFaces(e) => write!(f, "merge-faces {e}"),
        }
    }
}

/// Every currently legal move, in a fixed order: subdivisions, vertex
/// merges, splits, then face merges.
pub fn legal_moves(m: &CellComplex) -> Vec<Move> {
    let mut moves = Vec::new();
    for e in m.edges().filter(|e| e.is_interior()) {
        moves.push(Move::Subdivide(e.id));
    }
    for v in m.vertices() {
        if v.kind == VertexKind::Internal
            && m.degree(v.id) == 2
            && plan_vertex_merge(m, v.id).is_ok()
        {
            moves.push(Move::MergeVertex(v.id));
        }
    }
    for f in m.faces() {
        let len = f.word.len();
        for i in 0..len {
            for j in 0..len {
                moves.push(Move::Split { face: f.id, i, j });
            }
        }
    }
    for e in m.edges().filter(|e| e.is_interior()) {
        let occ = m.occurrences_of(e.id);
        if let [(f1, _), (f2, _)] = occ[..] {
            let total = m.faces[&f1].word.len() + m.faces[&f2].word.len();
            if f1 != f2 && total > 2 {
                moves.push(Move::MergeFaces(e.id));
            }
        }
    }
    moves
}

#[derive(Clone, Debug)]
pub struct WalkStep {
    pub index: usize,
    pub applied: Move,
    pub description: String,
    pub complex: CellComplex,
}

/// Applies `steps` moves, each drawn uniformly from [`legal_moves`] with a
/// ChaCha8 generator seeded by `seed`. The same seed always gives the same
/// trace. Stops early if no move is legal.
pub fn random_walk(
    start: &CellComplex,
    seed: u64,
    steps: usize,
) -> Result<Vec<WalkStep>, ComplexError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.clone();
    let mut trace = Vec::with_capacity(steps);
    for index in 0..steps {
        let moves = legal_moves(&current);
        if moves.is_empty() {
            break;
        }
        let applied = moves[rng.gen_range(0..moves.len())];
        let description = applied.describe(&current);
        current = applied.apply(&current)?;
        trace.push(WalkStep { index, applied, description, complex: current.clone() });
    }
    Ok(trace)
}
