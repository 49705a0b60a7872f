//! The standard small surfaces. Every face word is read anticlockwise, so in
//! circles appear forward and out circles backward.

use super::{reflect, CellComplex, Circle, ComplexBuilder, ComplexError, EdgeKind, VertexKind};

pub const BUILTIN_NAMES: [&str; 10] = [
    "sphere_a",
    "sphere_b",
    "disk_in",
    "disk_out",
    "cylinder",
    "torus",
    "pants",
    "pants_reflected",
    "punctured_torus_a",
    "punctured_torus_b",
];

const I: VertexKind = VertexKind::Internal;
const INTERIOR: EdgeKind = EdgeKind::Interior;

fn anchor(c: Circle) -> VertexKind {
    VertexKind::External(c)
}

fn boundary(c: Circle) -> EdgeKind {
    EdgeKind::Boundary(c)
}

struct Spec<'a> {
    vertices: &'a [(&'a str, VertexKind)],
    edges: &'a [(&'a str, &'a str, &'a str, EdgeKind)],
    faces: &'a [(&'a str, &'a [&'a str])],
}

fn assemble(name: &str, spec: Spec<'_>) -> CellComplex {
    let mut b = ComplexBuilder::new(name);
    for &(label, kind) in spec.vertices {
        b.vertex(label, kind).expect("builtin vertex");
    }
    for &(label, src, dst, kind) in spec.edges {
        b.edge(label, src, dst, kind).expect("builtin edge");
    }
    for &(label, word) in spec.faces {
        b.face(label, word).expect("builtin face");
    }
    b.build()
}

pub fn builtin(name: &str) -> Result<CellComplex, ComplexError> {
    let (in0, out0, out1) = (Circle::input(0), Circle::output(0), Circle::output(1));
    let m = match name {
        // one edge between two vertices, one face
        "sphere_a" => assemble(
            name,
            Spec {
                vertices: &[("v1", I), ("v2", I)],
                edges: &[("a", "v1", "v2", INTERIOR)],
                faces: &[("f", &["a", "~a"])],
            },
        ),
        // two discs glued along the loop k
        "sphere_b" => assemble(
            name,
            Spec {
                vertices: &[("w", I), ("u1", I), ("u2", I)],
                edges: &[
                    ("k", "w", "w", INTERIOR),
                    ("j1", "u1", "w", INTERIOR),
                    ("j2", "w", "u2", INTERIOR),
                ],
                faces: &[("f1", &["k", "~j1", "j1"]), ("f2", &["~k", "j2", "~j2"])],
            },
        ),
        "disk_in" => assemble(
            name,
            Spec {
                vertices: &[("w", anchor(in0)), ("u", I)],
                edges: &[("g", "w", "w", boundary(in0)), ("k", "w", "u", INTERIOR)],
                faces: &[("f", &["g", "k", "~k"])],
            },
        ),
        "disk_out" => assemble(
            name,
            Spec {
                vertices: &[("w", anchor(out0)), ("u", I)],
                edges: &[("g", "w", "w", boundary(out0)), ("k", "w", "u", INTERIOR)],
                faces: &[("f", &["k", "~k", "~g"])],
            },
        ),
        // g k h⁻¹ k⁻¹ = 1, i.e. g = k h k⁻¹
        "cylinder" => assemble(
            name,
            Spec {
                vertices: &[("vin", anchor(in0)), ("vout", anchor(out0))],
                edges: &[
                    ("g", "vin", "vin", boundary(in0)),
                    ("h", "vout", "vout", boundary(out0)),
                    ("k", "vin", "vout", INTERIOR),
                ],
                faces: &[("f", &["g", "k", "~h", "~k"])],
            },
        ),
        "torus" => assemble(
            name,
            Spec {
                vertices: &[("w", I)],
                edges: &[("a", "w", "w", INTERIOR), ("b", "w", "w", INTERIOR)],
                faces: &[("f", &["a", "b", "~a", "~b"])],
            },
        ),
        // g = j2 i j2⁻¹ j1 h j1⁻¹
        "pants" => assemble(
            name,
            Spec {
                vertices: &[("vin", anchor(in0)), ("vo1", anchor(out0)), ("vo2", anchor(out1))],
                edges: &[
                    ("g", "vin", "vin", boundary(in0)),
                    ("i", "vo1", "vo1", boundary(out0)),
                    ("h", "vo2", "vo2", boundary(out1)),
                    ("j2", "vin", "vo1", INTERIOR),
                    ("j1", "vin", "vo2", INTERIOR),
                ],
                faces: &[("f", &["g", "j1", "~h", "~j1", "j2", "~i", "~j2"])],
            },
        ),
        "pants_reflected" => reflect(&builtin("pants")?).with_name(name),
        // pants with g and i identified as the loop α
        "punctured_torus_a" => assemble(
            name,
            Spec {
                vertices: &[("w", I), ("vo2", anchor(out0))],
                edges: &[
                    ("h", "vo2", "vo2", boundary(out0)),
                    ("alpha", "w", "w", INTERIOR),
                    ("j2", "w", "w", INTERIOR),
                    ("j1", "w", "vo2", INTERIOR),
                ],
                faces: &[("f", &["alpha", "j1", "~h", "~j1", "j2", "~alpha", "~j2"])],
            },
        ),
        // pants with g and h identified as the loop α
        "punctured_torus_b" => assemble(
            name,
            Spec {
                vertices: &[("w", I), ("vo1", anchor(out0))],
                edges: &[
                    ("i", "vo1", "vo1", boundary(out0)),
                    ("alpha", "w", "w", INTERIOR),
                    ("j1", "w", "w", INTERIOR),
                    ("j2", "w", "vo1", INTERIOR),
                ],
                faces: &[("f", &["alpha", "j1", "~alpha", "~j1", "j2", "~i", "~j2"])],
            },
        ),
        _ => return Err(ComplexError::UnknownBuiltin(name.to_string())),
    };
    Ok(m)
}
