//! Line-oriented text formats.
//!
//! A one-critical file looks like
//!
//! ```text
//! mpchunk-scc 1
//! field 2
//! gen 0 0 0 ;
//! gen 0 1 0 ;
//! gen 1 1 0 ; 0 1
//! ```
//!
//! Each `gen` line holds the dimension, the two coordinates and, after the
//! semicolon, boundary entries `pos[:coeff]` referring to earlier `gen`
//! lines by position (coefficient 1 when omitted). `#` starts a comment.
//! Multi-critical files use the header `mpchunk-mcc 1` and write the grade
//! list as `(x,y)(x,y)...` in place of the two coordinates.

use std::fmt::Write as _;

use mpchunk_core::{
    BifilteredComplex, Coeff, Coord, FieldChar, MultiCriticalGenerator, RawGenerator,
};
use thiserror::Error;

pub const SCC_HEADER: &str = "mpchunk-scc 1";
pub const MCC_HEADER: &str = "mpchunk-mcc 1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: coefficient {coeff} outside [1, {p})")]
    BadCoefficient { line: usize, coeff: u64, p: u32 },
    #[error("line {line}: generator {position} refers to generator {reference}, which does not precede it")]
    ForwardReference {
        line: usize,
        position: usize,
        reference: usize,
    },
    #[error("line {line}: {value} is not a prime")]
    NotPrime { line: usize, value: u64 },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Which text format a file is in, judged by its first meaningful line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Native,
    MultiCritical,
    Off,
}

pub fn detect(text: &str) -> Kind {
    let first = meaningful_lines(text).next().map(|(_, l)| l).unwrap_or("");
    if first == MCC_HEADER {
        Kind::MultiCritical
    } else if first.starts_with("OFF") {
        Kind::Off
    } else {
        Kind::Native
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_field(line: usize, rest: &str) -> Result<FieldChar, FormatError> {
    let value: u64 = rest
        .trim()
        .parse()
        .map_err(|_| syntax(line, format!("bad field characteristic `{}`", rest.trim())))?;
    u32::try_from(value)
        .ok()
        .and_then(|p| FieldChar::new(p).ok())
        .ok_or(FormatError::NotPrime { line, value })
}

fn parse_coord(line: usize, s: &str) -> Result<Coord, FormatError> {
    Coord::parse(s).ok_or_else(|| syntax(line, format!("bad coordinate `{s}`")))
}

fn parse_dim(line: usize, s: Option<&str>) -> Result<usize, FormatError> {
    let s = s.ok_or_else(|| syntax(line, "missing dimension"))?;
    s.parse()
        .map_err(|_| syntax(line, format!("bad dimension `{s}`")))
}

fn parse_boundary(
    line: usize,
    position: usize,
    tail: &str,
    field: FieldChar,
) -> Result<Vec<(usize, Coeff)>, FormatError> {
    let p = field.characteristic();
    tail.split_whitespace()
        .map(|tok| {
            let (pos, coeff) = match tok.split_once(':') {
                Some((a, b)) => (a, Some(b)),
                None => (tok, None),
            };
            let reference: usize = pos
                .parse()
                .map_err(|_| syntax(line, format!("bad boundary entry `{tok}`")))?;
            let coeff: u64 = match coeff {
                Some(c) => c
                    .parse()
                    .map_err(|_| syntax(line, format!("bad coefficient in `{tok}`")))?,
                None => 1,
            };
            if coeff == 0 || coeff >= p as u64 {
                return Err(FormatError::BadCoefficient { line, coeff, p });
            }
            if reference >= position {
                return Err(FormatError::ForwardReference {
                    line,
                    position,
                    reference,
                });
            }
            Ok((reference, coeff as Coeff))
        })
        .collect()
}

/// Shared driver: header, field line, then one callback per `gen` line.
fn parse_lines<T>(
    text: &str,
    header: &str,
    header_required: bool,
    field_override: Option<FieldChar>,
    mut gen: impl FnMut(usize, usize, &str, FieldChar) -> Result<T, FormatError>,
) -> Result<(Vec<T>, FieldChar), FormatError> {
    let mut lines = meaningful_lines(text).peekable();
    match lines.peek() {
        Some(&(_, l)) if l == header => {
            lines.next();
        }
        Some(&(n, l)) if header_required || l.starts_with("mpchunk-") => {
            return Err(syntax(n, format!("expected header `{header}`")));
        }
        None if header_required => return Err(syntax(1, format!("expected header `{header}`"))),
        _ => {}
    }
    let mut field = FieldChar::Z2;
    if let Some(&(n, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix("field") {
            field = parse_field(n, rest)?;
            lines.next();
        }
    }
    let field = field_override.unwrap_or(field);
    let mut out = Vec::new();
    for (n, l) in lines {
        let rest = l
            .strip_prefix("gen")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| syntax(n, format!("expected `gen`, found `{l}`")))?;
        out.push(gen(n, out.len(), rest, field)?);
    }
    Ok((out, field))
}

/// Reads a one-critical file. The header line is optional; the field line
/// defaults to 2 and is ignored when `field_override` is given.
pub fn parse_native(
    text: &str,
    field_override: Option<FieldChar>,
) -> Result<(Vec<RawGenerator>, FieldChar), FormatError> {
    parse_lines(
        text,
        SCC_HEADER,
        false,
        field_override,
        |n, pos, rest, field| {
            let (head, tail) = rest
                .split_once(';')
                .ok_or_else(|| syntax(n, "missing `;` before the boundary"))?;
            let mut it = head.split_whitespace();
            let dim = parse_dim(n, it.next())?;
            let x = parse_coord(n, it.next().ok_or_else(|| syntax(n, "missing x"))?)?;
            let y = parse_coord(n, it.next().ok_or_else(|| syntax(n, "missing y"))?)?;
            if let Some(extra) = it.next() {
                return Err(syntax(n, format!("unexpected `{extra}` before `;`")));
            }
            let boundary = parse_boundary(n, pos, tail, field)?;
            Ok(RawGenerator {
                x,
                y,
                dim,
                boundary,
            })
        },
    )
}

fn parse_grade_list(n: usize, s: &str) -> Result<Vec<(Coord, Coord)>, FormatError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    let mut grades = Vec::new();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| syntax(n, format!("bad grade list `{}`", s.trim())))?;
        let (pair, tail) = inner;
        let (x, y) = pair
            .split_once(',')
            .ok_or_else(|| syntax(n, format!("bad grade `({pair})`")))?;
        grades.push((parse_coord(n, x)?, parse_coord(n, y)?));
        rest = tail;
    }
    if grades.is_empty() {
        return Err(syntax(n, "empty grade list"));
    }
    Ok(grades)
}

/// Reads a multi-critical file.
pub fn parse_multicritical(
    text: &str,
    field_override: Option<FieldChar>,
) -> Result<(Vec<MultiCriticalGenerator>, FieldChar), FormatError> {
    parse_lines(
        text,
        MCC_HEADER,
        true,
        field_override,
        |n, pos, rest, field| {
            let (head, tail) = rest
                .split_once(';')
                .ok_or_else(|| syntax(n, "missing `;` before the boundary"))?;
            let head = head.trim_start();
            let split = head
                .find(|c: char| c.is_whitespace() || c == '(')
                .unwrap_or(head.len());
            let dim = parse_dim(n, Some(&head[..split]))?;
            let grades = parse_grade_list(n, &head[split..])?;
            let boundary = parse_boundary(n, pos, tail, field)?;
            Ok(MultiCriticalGenerator {
                dim,
                grades,
                boundary,
            })
        },
    )
}

fn write_boundary(out: &mut String, entries: &[(usize, Coeff)]) {
    out.push_str(" ;");
    for &(r, c) in entries {
        if c == 1 {
            let _ = write!(out, " {r}");
        } else {
            let _ = write!(out, " {r}:{c}");
        }
    }
    out.push('\n');
}

/// Serializes a complex in index order, coordinates spelled as read.
pub fn write_native(complex: &BifilteredComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SCC_HEADER}");
    let _ = writeln!(out, "field {}", complex.field().characteristic());
    let axes = complex.axes();
    for c in complex.columns() {
        let x = axes.x.get(c.grade.x).expect("grade within axes");
        let y = axes.y.get(c.grade.y).expect("grade within axes");
        let _ = write!(out, "gen {} {} {}", c.dim, x.raw(), y.raw());
        write_boundary(&mut out, c.boundary.entries());
    }
    out
}

/// Serializes raw generators in their given order.
pub fn write_raw(gens: &[RawGenerator], field: FieldChar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SCC_HEADER}");
    let _ = writeln!(out, "field {}", field.characteristic());
    for g in gens {
        let _ = write!(out, "gen {} {} {}", g.dim, g.x.raw(), g.y.raw());
        write_boundary(&mut out, &g.boundary);
    }
    out
}

pub fn write_multicritical(gens: &[MultiCriticalGenerator], field: FieldChar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MCC_HEADER}");
    let _ = writeln!(out, "field {}", field.characteristic());
    for g in gens {
        let _ = write!(out, "gen {} ", g.dim);
        for (x, y) in &g.grades {
            let _ = write!(out, "({},{})", x.raw(), y.raw());
        }
        write_boundary(&mut out, &g.boundary);
    }
    out
}
