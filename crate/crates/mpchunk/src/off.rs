//! OFF mesh reader.
//!
//! Accepts the plain `OFF` layout: an optional `OFF` line, the counts line
//! `nv nf [ne]`, `nv` vertex lines and `nf` face lines `k v_1 ... v_k`.
//! Faces with more than three vertices are rejected. Two of the vertex
//! coordinates, chosen by a filter string such as `xy`, become the filtration
//! values.

use mpchunk_core::{Coord, Mesh};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OffError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: face with {count} vertices; only simplicial faces are supported")]
    NonSimplicial { line: usize, count: usize },
    #[error("bad filter string `{0}`; expected two distinct letters from x, y, z")]
    Filters(String),
    #[error("file ends before all {expected} {what} were read")]
    Truncated { expected: usize, what: &'static str },
}

/// Which vertex coordinates feed the two filtration parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Filters {
    pub first: usize,
    pub second: usize,
}

impl Default for Filters {
    fn default() -> Self {
        Filters {
            first: 0,
            second: 1,
        }
    }
}

impl std::str::FromStr for Filters {
    type Err = OffError;

    fn from_str(s: &str) -> Result<Self, OffError> {
        let axis = |c: char| match c {
            'x' => Some(0),
            'y' => Some(1),
            'z' => Some(2),
            _ => None,
        };
        let mut chars = s.chars();
        match (
            chars.next().and_then(axis),
            chars.next().and_then(axis),
            chars.next(),
        ) {
            (Some(a), Some(b), None) if a != b => Ok(Filters {
                first: a,
                second: b,
            }),
            _ => Err(OffError::Filters(s.to_string())),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> OffError {
    OffError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_off(text: &str, filters: Filters) -> Result<Mesh, OffError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });

    let (mut n, mut first) = lines.next().ok_or(OffError::Truncated {
        expected: 1,
        what: "header lines",
    })?;
    if let Some(rest) = first.strip_prefix("OFF") {
        if rest.trim().is_empty() {
            (n, first) = lines.next().ok_or(OffError::Truncated {
                expected: 1,
                what: "header lines",
            })?;
        } else {
            first = rest.trim();
        }
    }
    let counts: Vec<usize> = first
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(n, format!("bad count `{t}`"))))
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(syntax(n, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next().ok_or(OffError::Truncated {
            expected: nv,
            what: "vertices",
        })?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let need = filters.first.max(filters.second) + 1;
        if toks.len() < need {
            return Err(syntax(
                n,
                format!("vertex has {} coordinates, need {need}", toks.len()),
            ));
        }
        let coord = |i: usize| {
            Coord::parse(toks[i]).ok_or_else(|| syntax(n, format!("bad coordinate `{}`", toks[i])))
        };
        vertices.push((coord(filters.first)?, coord(filters.second)?));
    }

    let mut cells = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines.next().ok_or(OffError::Truncated {
            expected: nf,
            what: "faces",
        })?;
        let mut toks = l.split_whitespace();
        let k: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(n, "bad face vertex count"))?;
        if k > 3 {
            return Err(OffError::NonSimplicial { line: n, count: k });
        }
        let cell: Vec<usize> = toks
            .by_ref()
            .take(k)
            .map(|t| {
                t.parse()
                    .map_err(|_| syntax(n, format!("bad vertex id `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if cell.len() != k {
            return Err(syntax(
                n,
                format!("face lists {} of {k} vertices", cell.len()),
            ));
        }
        cells.push(cell);
    }
    Ok(Mesh { vertices, cells })
}
