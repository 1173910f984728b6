//! Instance and allocation text files.
//!
//! ```text
//! # name: fig1
//! game 5 4
//! vertex 0 1
//! ...
//! edge 2 3 10
//! ```
//!
//! An allocation file holds one `<id> <rational>` line per vertex. `#`
//! starts a comment anywhere on a line.

use std::collections::BTreeSet;
use std::fmt::Write;

use twomatch_core::model::{Allocation, Edge, Instance, ModelError};
use twomatch_core::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("allocation incomplete: no value for vertex {vertex}")]
    AllocationIncomplete { vertex: usize },
    #[error("instance incomplete: expected {expected} {what} lines, found {found}")]
    InstanceIncomplete { what: &'static str, expected: usize, found: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn name_comment(text: &str) -> Option<String> {
    text.lines().find_map(|l| l.trim().strip_prefix('#')?.trim().strip_prefix("name:").map(|n| n.trim().to_string()))
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("{what} must be a nonnegative integer, found '{tok}'")))
}

/// Parses an instance file. The name comes from a `# name:` comment,
/// falling back to `default_name`.
pub fn parse_instance(text: &str, default_name: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty instance file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let [keyword, n, m] = tokens.as_slice() else {
        return Err(syntax(line, "expected 'game <n> <m>'"));
    };
    if *keyword != "game" {
        return Err(syntax(line, "expected 'game <n> <m>'"));
    }
    let n = parse_count(n, line, "vertex count")?;
    let m = parse_count(m, line, "edge count")?;

    let mut caps: Vec<Option<u64>> = vec![None; n];
    let mut seen_vertices = 0;
    let mut edges = Vec::with_capacity(m);
    let mut keys = BTreeSet::new();
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            ["vertex", id, b] => {
                if !edges.is_empty() {
                    return Err(syntax(line, "vertex line after edge lines"));
                }
                if seen_vertices == n {
                    return Err(syntax(line, format!("more than {n} vertex lines")));
                }
                let id = parse_count(id, line, "vertex id")?;
                if id >= n {
                    return Err(FormatError::Model { line, source: ModelError::UnknownVertex { vertex: id } });
                }
                if caps[id].is_some() {
                    return Err(syntax(line, format!("vertex {id} declared twice")));
                }
                let b: u64 = b.parse().map_err(|_| syntax(line, format!("capacity must be an integer, found '{b}'")))?;
                if b != 1 && b != 2 {
                    return Err(FormatError::Model { line, source: ModelError::CapacityOutOfRange { vertex: id, b } });
                }
                caps[id] = Some(b);
                seen_vertices += 1;
            }
            ["edge", u, v, w] => {
                if seen_vertices < n {
                    return Err(FormatError::InstanceIncomplete { what: "vertex", expected: n, found: seen_vertices });
                }
                if edges.len() == m {
                    return Err(syntax(line, format!("more than {m} edge lines")));
                }
                let u = parse_count(u, line, "vertex id")?;
                let v = parse_count(v, line, "vertex id")?;
                let w = parse_rational(w).map_err(|e| syntax(line, e.to_string()))?;
                let model = |source| FormatError::Model { line, source };
                if let Some(&x) = [u, v].iter().find(|&&x| x >= n) {
                    return Err(model(ModelError::UnknownVertex { vertex: x }));
                }
                if u == v {
                    return Err(model(ModelError::Loop { vertex: u }));
                }
                if w < Rational::from_integer(0.into()) {
                    return Err(model(ModelError::NegativeWeight { u, v }));
                }
                if !keys.insert((u.min(v), u.max(v))) {
                    return Err(model(ModelError::DuplicateEdge { u, v }));
                }
                edges.push(Edge::new(u, v, w));
            }
            _ => return Err(syntax(line, format!("unrecognized line '{body}'"))),
        }
    }
    if seen_vertices < n {
        return Err(FormatError::InstanceIncomplete { what: "vertex", expected: n, found: seen_vertices });
    }
    if edges.len() < m {
        return Err(FormatError::InstanceIncomplete { what: "edge", expected: m, found: edges.len() });
    }
    let name = name_comment(text).unwrap_or_else(|| default_name.to_string());
    let caps = caps.into_iter().map(|b| b.expect("all vertices declared")).collect();
    Instance::new(name, caps, edges).map_err(|source| FormatError::Model { line, source })
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "# name: {}", inst.name()).unwrap();
    writeln!(out, "game {} {}", inst.n(), inst.m()).unwrap();
    for v in inst.vertices() {
        writeln!(out, "vertex {v} {}", inst.capacity(v)).unwrap();
    }
    for e in inst.edges() {
        writeln!(out, "edge {} {} {}", e.u, e.v, e.w).unwrap();
    }
    out
}

pub fn parse_allocation(text: &str, inst: &Instance) -> Result<Allocation, FormatError> {
    let mut values: Vec<Option<Rational>> = vec![None; inst.n()];
    for (line, body) in content_lines(text) {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let [id, value] = tokens.as_slice() else {
            return Err(syntax(line, "expected '<vertex id> <rational>'"));
        };
        let id = parse_count(id, line, "vertex id")?;
        if id >= inst.n() {
            return Err(FormatError::Model { line, source: ModelError::UnknownVertex { vertex: id } });
        }
        if values[id].is_some() {
            return Err(syntax(line, format!("vertex {id} listed twice")));
        }
        values[id] = Some(parse_rational(value).map_err(|e| syntax(line, e.to_string()))?);
    }
    let mut out = Vec::with_capacity(inst.n());
    for (vertex, v) in values.into_iter().enumerate() {
        out.push(v.ok_or(FormatError::AllocationIncomplete { vertex })?);
    }
    Ok(Allocation::new(out, inst).expect("one value per vertex"))
}

pub fn emit_allocation(p: &Allocation) -> String {
    let mut out = String::new();
    for (i, v) in p.values().iter().enumerate() {
        writeln!(out, "{i} {v}").unwrap();
    }
    out
}
