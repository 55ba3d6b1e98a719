//! Text formats: TRIG graphs, TCOL/VCOL colorings, and DOT export.
//!
//! TRIG v1:
//! ```text
//! TRIG 1
//! <n>
//! i: j k l ...      # vertex i's clockwise neighbors, one line per vertex
//! hole: v0 v1 ...   # optional; the boundary face's canonical vertex cycle
//! ```
//! TCOL v1 lists one `u v x` line per edge with `x` in `{a,b,c}`, edges in
//! canonical `(min,max)` order; VCOL v1 lists one `v k` line per vertex with
//! `k` in `{1,2,3,4}`.  `#` starts a comment anywhere; blank lines are
//! ignored.

use thiserror::Error;

use crate::coloring::{EdgeColor, TaitColoring, VertexColor, VertexColoring};
use crate::triangulation::{EdgeId, Triangulation, TriangulationError, VertexId};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid triangulation: {0}")]
    Invalid(#[from] TriangulationError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

/// Strips comments and blank lines, keeping 1-based line numbers.
fn meaningful_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line))
            }
        })
        .collect()
}

pub fn parse_trig(text: &str) -> Result<Triangulation, ParseError> {
    let lines = meaningful_lines(text);
    let mut it = lines.into_iter();
    let (ln, header) = it.next().ok_or_else(|| syntax(1, "empty file"))?;
    if header != "TRIG 1" {
        return Err(syntax(ln, format!("expected 'TRIG 1', got '{header}'")));
    }
    let (ln, nline) = it.next().ok_or_else(|| syntax(ln, "missing vertex count"))?;
    let n: usize = nline
        .parse()
        .map_err(|_| syntax(ln, format!("invalid vertex count '{nline}'")))?;
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut hole: Option<Vec<usize>> = None;
    let mut last_ln = ln;
    for (ln, line) in it {
        last_ln = ln;
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(ln, "expected 'i: neighbors...' or 'hole: ...'"))?;
        let ids: Result<Vec<usize>, ParseError> = rest
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| syntax(ln, format!("invalid vertex id '{tok}'"))))
            .collect();
        let ids = ids?;
        if head.trim() == "hole" {
            if hole.is_some() {
                return Err(syntax(ln, "duplicate hole line"));
            }
            hole = Some(ids);
            continue;
        }
        let idx: usize = head
            .trim()
            .parse()
            .map_err(|_| syntax(ln, format!("invalid vertex label '{}'", head.trim())))?;
        if idx != rotation.len() {
            return Err(syntax(ln, format!("expected vertex {} next, got {idx}", rotation.len())));
        }
        if hole.is_some() {
            return Err(syntax(ln, "vertex lines must come before the hole line"));
        }
        rotation.push(ids);
    }
    if rotation.len() != n {
        return Err(syntax(last_ln, format!("expected {n} vertex lines, got {}", rotation.len())));
    }
    Ok(Triangulation::from_rotation_with_hole(rotation, hole.as_deref())?)
}

pub fn write_trig(t: &Triangulation) -> String {
    let mut out = String::from("TRIG 1\n");
    out.push_str(&format!("{}\n", t.vertex_count()));
    for v in t.vertices() {
        let nbrs: Vec<String> = t.neighbors(v).iter().map(|w| w.to_string()).collect();
        out.push_str(&format!("{}: {}\n", v.0, nbrs.join(" ")));
    }
    if let Some(h) = t.hole() {
        let cycle: Vec<String> = t.canonical_face_cycle(h).iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("hole: {}\n", cycle.join(" ")));
    }
    out
}

pub fn parse_tcol(text: &str, t: &Triangulation) -> Result<TaitColoring, ParseError> {
    let lines = meaningful_lines(text);
    let mut it = lines.into_iter();
    let (ln, header) = it.next().ok_or_else(|| syntax(1, "empty file"))?;
    if header != "TCOL 1" {
        return Err(syntax(ln, format!("expected 'TCOL 1', got '{header}'")));
    }
    let mut colors: Vec<Option<EdgeColor>> = vec![None; t.edge_count()];
    let mut last_ln = ln;
    for (ln, line) in it {
        last_ln = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(ln, "expected 'u v x'"));
        }
        let u: usize = toks[0].parse().map_err(|_| syntax(ln, "invalid vertex id"))?;
        let v: usize = toks[1].parse().map_err(|_| syntax(ln, "invalid vertex id"))?;
        let color = toks[2]
            .chars()
            .next()
            .and_then(EdgeColor::from_letter)
            .filter(|_| toks[2].len() == 1)
            .ok_or_else(|| syntax(ln, format!("invalid edge color '{}'", toks[2])))?;
        if u >= t.vertex_count() || v >= t.vertex_count() {
            return Err(syntax(ln, format!("vertex out of range in edge ({u}, {v})")));
        }
        let e = t
            .edge_between(VertexId(u), VertexId(v))
            .ok_or_else(|| syntax(ln, format!("({u}, {v}) is not an edge of the graph")))?;
        if colors[e.0].replace(color).is_some() {
            return Err(syntax(ln, format!("edge ({u}, {v}) colored twice")));
        }
    }
    let mut out = Vec::with_capacity(t.edge_count());
    for (i, c) in colors.into_iter().enumerate() {
        match c {
            Some(c) => out.push(c),
            None => {
                let (u, v) = t.endpoints(EdgeId(i));
                return Err(syntax(last_ln, format!("edge ({}, {}) has no color", u.0, v.0)));
            }
        }
    }
    Ok(TaitColoring::new(out))
}

pub fn write_tcol(t: &Triangulation, ec: &TaitColoring) -> String {
    let mut out = String::from("TCOL 1\n");
    for e in t.edge_ids() {
        let (u, v) = t.endpoints(e);
        out.push_str(&format!("{} {} {}\n", u.0, v.0, ec.color(e).letter()));
    }
    out
}

pub fn parse_vcol(text: &str, t: &Triangulation) -> Result<VertexColoring, ParseError> {
    let lines = meaningful_lines(text);
    let mut it = lines.into_iter();
    let (ln, header) = it.next().ok_or_else(|| syntax(1, "empty file"))?;
    if header != "VCOL 1" {
        return Err(syntax(ln, format!("expected 'VCOL 1', got '{header}'")));
    }
    let mut colors: Vec<Option<VertexColor>> = vec![None; t.vertex_count()];
    let mut last_ln = ln;
    for (ln, line) in it {
        last_ln = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "expected 'v k'"));
        }
        let v: usize = toks[0].parse().map_err(|_| syntax(ln, "invalid vertex id"))?;
        let k: u8 = toks[1].parse().map_err(|_| syntax(ln, "invalid color"))?;
        let color = VertexColor::from_number(k).ok_or_else(|| syntax(ln, format!("invalid color {k}")))?;
        if v >= t.vertex_count() {
            return Err(syntax(ln, format!("vertex {v} out of range")));
        }
        if colors[v].replace(color).is_some() {
            return Err(syntax(ln, format!("vertex {v} colored twice")));
        }
    }
    let mut out = Vec::with_capacity(t.vertex_count());
    for (v, c) in colors.into_iter().enumerate() {
        match c {
            Some(c) => out.push(c),
            None => return Err(syntax(last_ln, format!("vertex {v} has no color"))),
        }
    }
    Ok(VertexColoring::new(out))
}

pub fn write_vcol(vc: &VertexColoring) -> String {
    let mut out = String::from("VCOL 1\n");
    for (v, c) in vc.colors().iter().enumerate() {
        out.push_str(&format!("{} {}\n", v, c.number()));
    }
    out
}

/// A coloring file of either kind, detected from the header line.
#[derive(Debug, Clone)]
pub enum ColoringFile {
    Tait(TaitColoring),
    Vertex(VertexColoring),
}

pub fn parse_coloring(text: &str, t: &Triangulation) -> Result<ColoringFile, ParseError> {
    let header = meaningful_lines(text).into_iter().next();
    match header {
        Some((_, "TCOL 1")) => Ok(ColoringFile::Tait(parse_tcol(text, t)?)),
        Some((_, "VCOL 1")) => Ok(ColoringFile::Vertex(parse_vcol(text, t)?)),
        Some((ln, other)) => Err(syntax(ln, format!("expected 'TCOL 1' or 'VCOL 1', got '{other}'"))),
        None => Err(syntax(1, "empty file")),
    }
}

/// DOT rendering of a triangulation; edges are styled by color when a
/// coloring is given, and edges in `highlight` are drawn bold.
pub fn write_dot(t: &Triangulation, ec: Option<&TaitColoring>, highlight: &[EdgeId]) -> String {
    let mut out = String::from("graph triangulation {\n");
    out.push_str("  layout=neato;\n  node [shape=circle, fontsize=10];\n");
    let bold: std::collections::HashSet<usize> = highlight.iter().map(|e| e.0).collect();
    for e in t.edge_ids() {
        let (u, v) = t.endpoints(e);
        let mut attrs: Vec<String> = Vec::new();
        if let Some(ec) = ec {
            let (color, label) = match ec.color(e) {
                EdgeColor::A => ("crimson", "a"),
                EdgeColor::B => ("seagreen", "b"),
                EdgeColor::C => ("steelblue", "c"),
            };
            attrs.push(format!("color={color}"));
            attrs.push(format!("label=\"{label}\""));
        }
        if bold.contains(&e.0) {
            attrs.push("penwidth=3".to_string());
        }
        if attrs.is_empty() {
            out.push_str(&format!("  {} -- {};\n", u.0, v.0));
        } else {
            out.push_str(&format!("  {} -- {} [{}];\n", u.0, v.0, attrs.join(", ")));
        }
    }
    out.push_str("}\n");
    out
}
