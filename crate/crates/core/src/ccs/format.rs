//! Plain-text surface files.
//!
//! ```text
//! surface cylinder
//! vertex vin in 0
//! vertex vout out 0
//! edge g vin vin in 0
//! edge h vout vout out 0
//! edge k vin vout interior
//! face f : g k ~h ~k
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{BuildError, CellComplex, Circle, ComplexBuilder, Direction, EdgeKind, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateId,
    Dangling,
    /// Two anchors or two boundary edges claim the same circle.
    DuplicatePosition,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
    pub msg: String,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, kind: ParseErrorKind::Syntax, msg: msg.into() }
}

fn from_build(line: usize, e: BuildError) -> ParseError {
    let kind = match e {
        BuildError::Duplicate { .. } => ParseErrorKind::DuplicateId,
        BuildError::Dangling { .. } => ParseErrorKind::Dangling,
    };
    ParseError { line, kind, msg: e.to_string() }
}

fn parse_circle(line: usize, side: &str, pos: Option<&str>) -> Result<Circle, ParseError> {
    let pos = pos
        .ok_or_else(|| syntax(line, format!("`{side}` needs a position")))?
        .parse::<usize>()
        .map_err(|_| syntax(line, "position must be a nonnegative integer"))?;
    Ok(match side {
        "in" => Circle::input(pos),
        _ => Circle::output(pos),
    })
}

/// Parses a surface file. The result is not validated; call
/// [`CellComplex::validate`] for the structural checks.
pub fn parse_surface(text: &str) -> Result<CellComplex, ParseError> {
    let mut b = ComplexBuilder::new("surface");
    let mut anchors = HashSet::new();
    let mut circles = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or("");
        match keyword {
            "surface" => {
                let name = content["surface".len()..].trim();
                if name.is_empty() {
                    return Err(syntax(line, "`surface` needs a name"));
                }
                b.set_name(name);
            }
            "vertex" => {
                let id = tokens.next().ok_or_else(|| syntax(line, "`vertex` needs an id"))?;
                let kind = match tokens.next() {
                    Some("internal") => VertexKind::Internal,
                    Some(side @ ("in" | "out")) => {
                        let c = parse_circle(line, side, tokens.next())?;
                        if !anchors.insert(c) {
                            return Err(ParseError {
                                line,
                                kind: ParseErrorKind::DuplicatePosition,
                                msg: format!("second anchor for circle {c}"),
                            });
                        }
                        VertexKind::External(c)
                    }
                    Some(other) => {
                        return Err(syntax(line, format!("unknown vertex kind `{other}`")))
                    }
                    None => return Err(syntax(line, "`vertex` needs a kind")),
                };
                if tokens.next().is_some() {
                    return Err(syntax(line, "trailing tokens"));
                }
                b.vertex(id, kind).map_err(|e| from_build(line, e))?;
            }
            "edge" => {
                let mut next = |what: &str| {
                    tokens
                        .next()
                        .ok_or_else(|| syntax(line, format!("`edge` needs {what}")))
                };
                let id = next("an id")?;
                let src = next("a source")?;
                let dst = next("a target")?;
                let kind = match next("a kind")? {
                    "interior" => EdgeKind::Interior,
                    side @ ("in" | "out") => {
                        let c = parse_circle(line, side, tokens.next())?;
                        if !circles.insert(c) {
                            return Err(ParseError {
                                line,
                                kind: ParseErrorKind::DuplicatePosition,
                                msg: format!("second boundary edge for circle {c}"),
                            });
                        }
                        EdgeKind::Boundary(c)
                    }
                    other => return Err(syntax(line, format!("unknown edge kind `{other}`"))),
                };
                if tokens.next().is_some() {
                    return Err(syntax(line, "trailing tokens"));
                }
                b.edge(id, src, dst, kind).map_err(|e| from_build(line, e))?;
            }
            "face" => {
                let id = tokens.next().ok_or_else(|| syntax(line, "`face` needs an id"))?;
                if tokens.next() != Some(":") {
                    return Err(syntax(line, "expected `:` after the face id"));
                }
                let word: Vec<&str> = tokens.collect();
                if word.iter().any(|t| t.trim_start_matches('~').is_empty()) {
                    return Err(syntax(line, "empty edge reference"));
                }
                b.face(id, &word).map_err(|e| from_build(line, e))?;
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(b.build())
}

fn kind_text(c: Circle) -> String {
    c.to_string()
}

/// Writes a complex in the surface file format. Output depends only on the
/// complex, so equal complexes dump identically.
pub fn dump_surface(m: &CellComplex) -> String {
    let mut out = String::new();
    writeln!(out, "surface {}", m.name()).unwrap();
    for v in m.vertices() {
        match v.kind {
            VertexKind::Internal => writeln!(out, "vertex {} internal", v.label),
            VertexKind::External(c) => writeln!(out, "vertex {} {}", v.label, kind_text(c)),
        }
        .unwrap();
    }
    for e in m.edges() {
        let kind = match e.kind {
            EdgeKind::Interior => "interior".to_string(),
            EdgeKind::Boundary(c) => kind_text(c),
        };
        let (src, dst) = (&m.vertices[&e.src].label, &m.vertices[&e.dst].label);
        writeln!(out, "edge {} {src} {dst} {kind}", e.label).unwrap();
    }
    for f in m.faces() {
        write!(out, "face {} :", f.label).unwrap();
        for o in &f.word {
            let tilde = if o.dir == Direction::Backward { "~" } else { "" };
            write!(out, " {tilde}{}", m.edges[&o.edge].label).unwrap();
        }
        out.push('\n');
    }
    out
}
