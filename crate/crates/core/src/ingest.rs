//! Normalizing raw generator lists into a [`BifilteredComplex`].
//!
//! Raw input refers to generators by their position in the input sequence.
//! [`sort_and_index`] compresses the coordinates, sorts the generators into
//! the canonical index order and remaps every boundary reference once.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::Chain;
use crate::column::Column;
use crate::complex::BifilteredComplex;
use crate::field::{Coeff, FieldChar};
use crate::grade::{Axes, Axis, Coord, Grade};

/// One generator as read from input: grade, dimension and boundary given as
/// `(position, coefficient)` pairs referring to earlier generators.
#[derive(Clone, Debug, PartialEq)]
pub struct RawGenerator {
    pub x: Coord,
    pub y: Coord,
    pub dim: usize,
    pub boundary: Vec<(usize, Coeff)>,
}

/// A generator that enters at several pairwise incomparable grades.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiCriticalGenerator {
    pub dim: usize,
    pub grades: Vec<(Coord, Coord)>,
    pub boundary: Vec<(usize, Coeff)>,
}

/// Simplicial mesh with planar vertex coordinates used as the two filtration
/// values. Cells list vertex ids; all faces of every cell are implied.
#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub vertices: Vec<(Coord, Coord)>,
    pub cells: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IngestError {
    ForwardReference { position: usize, reference: usize },
    DimMismatch { position: usize, reference: usize },
    GradeMonotone { position: usize, reference: usize },
    EmptyGrades { position: usize },
    ComparableGrades { position: usize },
    Unresolvable { position: usize, reference: usize },
    ExpansionFailed { position: usize },
    BadVertex { cell: usize, vertex: usize },
    DegenerateCell { cell: usize },
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IngestError::*;
        match *self {
            ForwardReference { position, reference } => write!(
                f,
                "generator {position} references position {reference}, which does not precede it"
            ),
            DimMismatch { position, reference } => write!(
                f,
                "generator {position} references generator {reference} of the wrong dimension"
            ),
            GradeMonotone { position, reference } => write!(
                f,
                "generator {position} has boundary generator {reference} with a grade not below its own"
            ),
            EmptyGrades { position } => write!(f, "generator {position} has no critical grade"),
            ComparableGrades { position } => write!(
                f,
                "critical grades of generator {position} are not pairwise incomparable"
            ),
            Unresolvable { position, reference } => write!(
                f,
                "no copy of generator {reference} lies below a critical grade of generator {position}"
            ),
            ExpansionFailed { position } => write!(
                f,
                "could not close the boundary of the copies of generator {position}"
            ),
            BadVertex { cell, vertex } => write!(f, "cell {cell} references missing vertex {vertex}"),
            DegenerateCell { cell } => write!(f, "cell {cell} repeats a vertex or is empty"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IngestError {}

/// Builds the canonical complex from raw generators.
///
/// Columns are ordered by grade (x rank, then y rank), then dimension, then
/// input position. Invalid references and grade-monotonicity violations are
/// reported, never repaired.
pub fn sort_and_index(
    raw: &[RawGenerator],
    field: FieldChar,
) -> Result<BifilteredComplex, IngestError> {
    for (pos, g) in raw.iter().enumerate() {
        for &(r, _) in &g.boundary {
            if r >= pos {
                return Err(IngestError::ForwardReference {
                    position: pos,
                    reference: r,
                });
            }
            if raw[r].dim + 1 != g.dim {
                return Err(IngestError::DimMismatch {
                    position: pos,
                    reference: r,
                });
            }
        }
    }

    let axes = Axes {
        x: Axis::compress(raw.iter().map(|g| &g.x)),
        y: Axis::compress(raw.iter().map(|g| &g.y)),
    };
    let grades: Vec<Grade> = raw
        .iter()
        .map(|g| {
            Grade::new(
                axes.x.rank_of(&g.x).expect("x coordinate in its own axis"),
                axes.y.rank_of(&g.y).expect("y coordinate in its own axis"),
            )
        })
        .collect();

    for (pos, g) in raw.iter().enumerate() {
        for &(r, _) in &g.boundary {
            if !grades[r].leq(grades[pos]) {
                return Err(IngestError::GradeMonotone {
                    position: pos,
                    reference: r,
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&pos| (grades[pos], raw[pos].dim, pos));
    let mut new_of = vec![0usize; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }

    let columns = order
        .iter()
        .enumerate()
        .map(|(new, &old)| {
            let g = &raw[old];
            let boundary =
                Chain::from_entries(g.boundary.iter().map(|&(r, c)| (new_of[r], c)), field);
            Column::new(new, grades[old], g.dim, boundary)
        })
        .collect();

    Ok(BifilteredComplex::from_columns(field, axes, columns))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    BoundarySquare,
    GradeMonotone,
    OrderViolation,
    DimMismatch,
    BadCoefficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub column: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks every structural invariant of a complex and lists what fails.
pub fn validate(complex: &BifilteredComplex) -> ValidationReport {
    let field = complex.field();
    let p = field.characteristic();
    let cols = complex.columns();
    let mut violations = Vec::new();
    let mut push = |kind, column, detail: String| {
        violations.push(Violation {
            kind,
            column,
            detail,
        })
    };

    for (pos, c) in cols.iter().enumerate() {
        if c.index != pos {
            push(
                ViolationKind::OrderViolation,
                pos,
                format!("stored index {} at position {pos}", c.index),
            );
        }
        let axes = complex.axes();
        if c.grade.x as usize >= axes.x.len() || c.grade.y as usize >= axes.y.len() {
            push(
                ViolationKind::OrderViolation,
                pos,
                format!("grade {} outside the coordinate tables", c.grade),
            );
        }
        if pos > 0 {
            let prev = &cols[pos - 1];
            if prev.grade > c.grade {
                push(
                    ViolationKind::OrderViolation,
                    pos,
                    format!("grade {} follows larger grade {}", c.grade, prev.grade),
                );
            } else if prev.grade == c.grade && prev.dim > c.dim {
                push(
                    ViolationKind::OrderViolation,
                    pos,
                    format!("dimension {} follows {} inside a chunk", c.dim, prev.dim),
                );
            }
        }

        let entries = c.boundary.entries();
        let mut in_range = true;
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                push(
                    ViolationKind::OrderViolation,
                    pos,
                    format!("boundary entries {} and {} out of order", w[0].0, w[1].0),
                );
            }
        }
        for &(l, coeff) in entries {
            if coeff == 0 || coeff >= p {
                push(
                    ViolationKind::BadCoefficient,
                    pos,
                    format!("coefficient {coeff} at entry {l} outside [1, {p})"),
                );
            }
            if l >= pos {
                push(
                    ViolationKind::OrderViolation,
                    pos,
                    format!("boundary entry {l} does not precede the column"),
                );
                in_range = in_range && l < cols.len();
                continue;
            }
            let face = &cols[l];
            if face.dim + 1 != c.dim {
                push(
                    ViolationKind::DimMismatch,
                    pos,
                    format!(
                        "entry {l} has dimension {}, expected {}",
                        face.dim,
                        c.dim as i64 - 1
                    ),
                );
            }
            if !face.grade.leq(c.grade) {
                push(
                    ViolationKind::GradeMonotone,
                    pos,
                    format!("entry {l} has grade {} not below {}", face.grade, c.grade),
                );
            }
        }

        if in_range && !entries.is_empty() {
            let mut square = Chain::new();
            for &(l, coeff) in entries {
                if coeff % p != 0 {
                    square.add_scaled(&cols[l].boundary, coeff, field);
                }
            }
            if !square.is_empty() {
                push(
                    ViolationKind::BoundarySquare,
                    pos,
                    format!("boundary of boundary has {} nonzero entries", square.len()),
                );
            }
        }
    }
    ValidationReport { violations }
}

fn pt_leq(a: &(Coord, Coord), b: &(Coord, Coord)) -> bool {
    a.0.value() <= b.0.value() && a.1.value() <= b.1.value()
}

struct Expansion {
    gens: Vec<RawGenerator>,
    chains: Vec<Chain>,
    copies: Vec<Vec<usize>>,
    connectors: Vec<Vec<usize>>,
}

impl Expansion {
    fn grade_of(&self, out: usize) -> (Coord, Coord) {
        (self.gens[out].x.clone(), self.gens[out].y.clone())
    }

    fn boundary_of(&self, chain: &Chain, field: FieldChar) -> Chain {
        let mut acc = Chain::new();
        for &(i, c) in chain.entries() {
            acc.add_scaled(&self.chains[i], c, field);
        }
        acc
    }

    fn push(&mut self, x: Coord, y: Coord, dim: usize, boundary: Chain) -> usize {
        let pos = self.gens.len();
        self.gens.push(RawGenerator {
            x,
            y,
            dim,
            boundary: boundary.entries().to_vec(),
        });
        self.chains.push(boundary);
        pos
    }
}

/// Converts an h-critical input into an equivalent 1-critical one.
///
/// A generator with critical grades `p_1, ..., p_h` (sorted by x) becomes `h`
/// copies, one at each `p_i`, plus a connecting generator one dimension up
/// at `(x_{i+1}, y_i)` for every consecutive pair. A boundary reference in a
/// copy at `p_i` is resolved to the copy of the referenced generator with the
/// largest x among those below `p_i`. When faces are themselves
/// multi-critical, this choice can leave a nonzero boundary of the boundary;
/// the copy (or connector) boundary then gets a correction chain supported on
/// lower connectors and copy differences, found by elimination.
pub fn expand_h_critical(
    gens: &[MultiCriticalGenerator],
    field: FieldChar,
) -> Result<Vec<RawGenerator>, IngestError> {
    let mut sorted_grades: Vec<Vec<(Coord, Coord)>> = Vec::with_capacity(gens.len());
    for (pos, g) in gens.iter().enumerate() {
        if g.grades.is_empty() {
            return Err(IngestError::EmptyGrades { position: pos });
        }
        for (a, pa) in g.grades.iter().enumerate() {
            for pb in &g.grades[a + 1..] {
                if pt_leq(pa, pb) || pt_leq(pb, pa) {
                    return Err(IngestError::ComparableGrades { position: pos });
                }
            }
        }
        for &(r, _) in &g.boundary {
            if r >= pos {
                return Err(IngestError::ForwardReference {
                    position: pos,
                    reference: r,
                });
            }
            if gens[r].dim + 1 != g.dim {
                return Err(IngestError::DimMismatch {
                    position: pos,
                    reference: r,
                });
            }
        }
        let mut gs = g.grades.clone();
        gs.sort_by(|a, b| a.0.cmp_value(&b.0));
        sorted_grades.push(gs);
    }

    let mut ex = Expansion {
        gens: Vec::new(),
        chains: Vec::new(),
        copies: Vec::with_capacity(gens.len()),
        connectors: Vec::with_capacity(gens.len()),
    };
    let minus_one = field.reduce(-1);

    for (pos, g) in gens.iter().enumerate() {
        let grades = &sorted_grades[pos];
        let mut copies = Vec::with_capacity(grades.len());
        for p in grades {
            let mut principal = Vec::with_capacity(g.boundary.len());
            for &(r, c) in &g.boundary {
                let copy = ex.copies[r]
                    .iter()
                    .rev()
                    .copied()
                    .find(|&o| pt_leq(&ex.grade_of(o), p))
                    .ok_or(IngestError::Unresolvable {
                        position: pos,
                        reference: r,
                    })?;
                principal.push((copy, c));
            }
            let mut boundary = Chain::from_entries(principal, field);
            let defect = ex.boundary_of(&boundary, field);
            if !defect.is_empty() {
                let fix = correction(&ex, gens, pos, g.dim - 1, p, &defect, field)
                    .ok_or(IngestError::ExpansionFailed { position: pos })?;
                boundary.add_scaled(&fix, 1, field);
            }
            copies.push(ex.push(p.0.clone(), p.1.clone(), g.dim, boundary));
        }
        ex.copies.push(copies.clone());

        let mut connectors = Vec::with_capacity(grades.len().saturating_sub(1));
        for i in 0..grades.len().saturating_sub(1) {
            let q = (grades[i + 1].0.clone(), grades[i].1.clone());
            let mut boundary =
                Chain::from_entries([(copies[i], 1), (copies[i + 1], minus_one)], field);
            let defect = ex.boundary_of(&boundary, field);
            if !defect.is_empty() {
                let fix = correction(&ex, gens, pos, g.dim, &q, &defect, field)
                    .ok_or(IngestError::ExpansionFailed { position: pos })?;
                boundary.add_scaled(&fix, 1, field);
            }
            connectors.push(ex.push(q.0, q.1, g.dim + 1, boundary));
        }
        ex.connectors.push(connectors);
    }
    Ok(ex.gens)
}

/// Finds a chain `y` of dimension `dim`, built from connectors and copy
/// differences of proper faces of input generator `pos` lying below `q`,
/// with `∂y = -defect`.
fn correction(
    ex: &Expansion,
    gens: &[MultiCriticalGenerator],
    pos: usize,
    dim: usize,
    q: &(Coord, Coord),
    defect: &Chain,
    field: FieldChar,
) -> Option<Chain> {
    let mut closure = BTreeSet::new();
    let mut stack: Vec<usize> = gens[pos].boundary.iter().map(|e| e.0).collect();
    while let Some(r) = stack.pop() {
        if closure.insert(r) {
            stack.extend(gens[r].boundary.iter().map(|e| e.0));
        }
    }

    let minus_one = field.reduce(-1);
    let mut basis: Vec<Chain> = Vec::new();
    for &r in &closure {
        if gens[r].dim + 1 == dim {
            for &c in &ex.connectors[r] {
                if pt_leq(&ex.grade_of(c), q) {
                    basis.push(Chain::from_sorted(vec![(c, 1)]));
                }
            }
        } else if gens[r].dim == dim {
            let below: Vec<usize> = ex.copies[r]
                .iter()
                .copied()
                .filter(|&c| pt_leq(&ex.grade_of(c), q))
                .collect();
            for w in below.windows(2) {
                basis.push(Chain::from_entries([(w[0], 1), (w[1], minus_one)], field));
            }
        }
    }

    // column-reduce the boundaries of the basis, tracking combinations
    let mut reduced: Vec<(Chain, Chain)> = Vec::new();
    let mut owner: alloc::collections::BTreeMap<usize, usize> = Default::default();
    for b in basis {
        let mut bd = ex.boundary_of(&b, field);
        let mut comb = b;
        while let Some((piv, c)) = bd.max() {
            match owner.get(&piv) {
                Some(&s) => {
                    let (sbd, scomb) = &reduced[s];
                    let l = field.cancel_factor(c, sbd.coeff(piv));
                    bd.add_scaled(sbd, l, field);
                    comb.add_scaled(scomb, l, field);
                }
                None => break,
            }
        }
        if let Some((piv, _)) = bd.max() {
            owner.insert(piv, reduced.len());
            reduced.push((bd, comb));
        }
    }

    let mut target = defect.clone();
    let mut y = Chain::new();
    while let Some((piv, c)) = target.max() {
        let &s = owner.get(&piv)?;
        let (sbd, scomb) = &reduced[s];
        let l = field.cancel_factor(c, sbd.coeff(piv));
        target.add_scaled(sbd, l, field);
        y.add_scaled(scomb, l, field);
    }
    Some(y)
}

/// Bifiltration of a simplicial mesh by its vertex coordinates.
///
/// Every face of every cell is emitted exactly once, dimensions ascending and
/// each dimension ordered by sorted vertex tuple. A simplex takes the
/// coordinate-wise maximum of its vertices' coordinates; the boundary uses
/// the sign `(-1)^j` for the face missing the `j`-th (ascending) vertex.
pub fn mesh_bifiltration(mesh: &Mesh, field: FieldChar) -> Result<Vec<RawGenerator>, IngestError> {
    let nv = mesh.vertices.len();
    let mut simplices: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
    for (ci, cell) in mesh.cells.iter().enumerate() {
        let mut vs = cell.clone();
        vs.sort_unstable();
        if vs.is_empty() || vs.len() > 16 || vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(IngestError::DegenerateCell { cell: ci });
        }
        if let Some(&bad) = vs.iter().find(|&&v| v >= nv) {
            return Err(IngestError::BadVertex {
                cell: ci,
                vertex: bad,
            });
        }
        for mask in 1u32..(1u32 << vs.len()) {
            if mask.count_ones() < 2 {
                continue;
            }
            let face: Vec<usize> = (0..vs.len())
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| vs[b])
                .collect();
            simplices.push(face);
        }
    }
    simplices.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    simplices.dedup();

    let position = |s: &[usize]| -> usize {
        simplices
            .binary_search_by(|probe| {
                probe
                    .len()
                    .cmp(&s.len())
                    .then_with(|| probe.as_slice().cmp(s))
            })
            .expect("every facet of an enumerated simplex is enumerated")
    };

    let mut out = Vec::with_capacity(simplices.len());
    let mut facet = Vec::new();
    for s in &simplices {
        let mut x = &mesh.vertices[s[0]].0;
        let mut y = &mesh.vertices[s[0]].1;
        for &v in &s[1..] {
            x = x.max_by_value(&mesh.vertices[v].0);
            y = y.max_by_value(&mesh.vertices[v].1);
        }
        let mut boundary = Vec::new();
        if s.len() > 1 {
            for j in 0..s.len() {
                facet.clear();
                facet.extend(
                    s.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .map(|(_, &v)| v),
                );
                let sign = if j % 2 == 0 { 1 } else { -1 };
                boundary.push((position(&facet), field.reduce(sign)));
            }
        }
        out.push(RawGenerator {
            x: x.clone(),
            y: y.clone(),
            dim: s.len() - 1,
            boundary,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> Coord {
        Coord::from_int(v)
    }

    fn raw(x: i64, y: i64, dim: usize, b: &[(usize, Coeff)]) -> RawGenerator {
        RawGenerator {
            x: c(x),
            y: c(y),
            dim,
            boundary: b.to_vec(),
        }
    }

    #[test]
    fn already_sorted_is_identity() {
        let gens = [
            raw(0, 0, 0, &[]),
            raw(0, 1, 0, &[]),
            raw(1, 1, 1, &[(0, 1), (1, 1)]),
        ];
        let cx = sort_and_index(&gens, FieldChar::Z2).unwrap();
        let grades: Vec<Grade> = cx.columns().iter().map(|c| c.grade).collect();
        assert_eq!(
            grades,
            [Grade::new(0, 0), Grade::new(0, 1), Grade::new(1, 1)]
        );
        assert_eq!(cx.column(2).boundary.entries(), &[(0, 1), (1, 1)]);
        assert!(validate(&cx).ok());
    }

    #[test]
    fn swaps_into_linear_extension() {
        let gens = [raw(1, 0, 0, &[]), raw(0, 0, 0, &[])];
        let cx = sort_and_index(&gens, FieldChar::Z2).unwrap();
        assert_eq!(cx.column(0).grade, Grade::new(0, 0));
        assert_eq!(cx.column(1).grade, Grade::new(1, 0));
    }

    #[test]
    fn triangle_single_chunk() {
        // reversed input order of a full triangle at one grade
        let gens = [
            raw(0, 0, 0, &[]),
            raw(0, 0, 0, &[]),
            raw(0, 0, 0, &[]),
            raw(0, 0, 1, &[(0, 1), (1, 1)]),
            raw(0, 0, 1, &[(0, 1), (2, 1)]),
            raw(0, 0, 1, &[(1, 1), (2, 1)]),
            raw(0, 0, 2, &[(3, 1), (4, 1), (5, 1)]),
        ];
        let cx = sort_and_index(&gens, FieldChar::Z2).unwrap();
        assert_eq!(cx.chunk_count(), 1);
        let dims: Vec<usize> = cx.columns().iter().map(|c| c.dim).collect();
        assert_eq!(dims, [0, 0, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn forward_reference_rejected() {
        let gens = [raw(0, 0, 0, &[]), raw(0, 0, 1, &[(1, 1)])];
        assert_eq!(
            sort_and_index(&gens, FieldChar::Z2),
            Err(IngestError::ForwardReference {
                position: 1,
                reference: 1
            })
        );
    }

    #[test]
    fn grade_monotonicity_reported() {
        let gens = [raw(2, 0, 0, &[]), raw(1, 1, 1, &[(0, 1)])];
        assert!(matches!(
            sort_and_index(&gens, FieldChar::Z2),
            Err(IngestError::GradeMonotone { .. })
        ));
    }

    #[test]
    fn validate_flags_grade_and_square() {
        let f = FieldChar::new(5).unwrap();
        // edge whose vertex enters later
        let bad = BifilteredComplex::from_grades(
            f,
            vec![
                (Grade::new(0, 0), 0, vec![]),
                (Grade::new(0, 1), 1, vec![(1, 1)]),
                (Grade::new(1, 1), 0, vec![]),
            ],
        );
        let rep = validate(&bad);
        assert!(rep.count(ViolationKind::OrderViolation) > 0);

        let bad = BifilteredComplex::from_columns(
            FieldChar::Z2,
            Axes::integers(2, 2),
            vec![
                Column::new(0, Grade::new(1, 1), 0, Chain::new()),
                Column::new(1, Grade::new(1, 1), 1, Chain::from_sorted(vec![(0, 1)])),
                Column::new(2, Grade::new(0, 0), 0, Chain::new()),
            ],
        );
        assert!(validate(&bad).count(ViolationKind::OrderViolation) > 0);

        // hollow-then-filled triangle with one corrupted coefficient mod 5
        let m = 4; // -1 mod 5
        let tri = |t: Vec<(usize, Coeff)>| {
            BifilteredComplex::from_grades(
                f,
                vec![
                    (Grade::new(0, 0), 0, vec![]),
                    (Grade::new(0, 0), 0, vec![]),
                    (Grade::new(0, 0), 0, vec![]),
                    (Grade::new(0, 0), 1, vec![(0, m), (1, 1)]),
                    (Grade::new(0, 0), 1, vec![(0, m), (2, 1)]),
                    (Grade::new(0, 0), 1, vec![(1, m), (2, 1)]),
                    (Grade::new(0, 0), 2, t),
                ],
            )
        };
        assert!(validate(&tri(vec![(3, 1), (4, m), (5, 1)])).ok());
        let rep = validate(&tri(vec![(3, 1), (4, 2), (5, 1)]));
        assert_eq!(rep.count(ViolationKind::BoundarySquare), 1);
        assert_eq!(rep.violations[0].column, 6);
    }

    #[test]
    fn validate_flags_grade_monotone() {
        let bad = BifilteredComplex::from_columns(
            FieldChar::Z2,
            Axes::integers(3, 3),
            vec![
                Column::new(0, Grade::new(0, 2), 0, Chain::new()),
                Column::new(1, Grade::new(1, 0), 1, Chain::from_sorted(vec![(0, 1)])),
            ],
        );
        let rep = validate(&bad);
        assert_eq!(rep.count(ViolationKind::GradeMonotone), 1);
        assert!(!rep.ok());
    }

    #[test]
    fn h_critical_two_grades() {
        let f = FieldChar::Z2;
        let gens = [
            MultiCriticalGenerator {
                dim: 0,
                grades: vec![(c(0), c(0))],
                boundary: vec![],
            },
            MultiCriticalGenerator {
                dim: 0,
                grades: vec![(c(0), c(0))],
                boundary: vec![],
            },
            MultiCriticalGenerator {
                dim: 1,
                grades: vec![(c(1), c(0)), (c(0), c(2))],
                boundary: vec![(0, 1), (1, 1)],
            },
        ];
        let out = expand_h_critical(&gens, f).unwrap();
        assert_eq!(out.len(), 5);
        // copies sorted by x
        assert_eq!((out[2].x.value(), out[2].y.value()), (0.0, 2.0));
        assert_eq!((out[3].x.value(), out[3].y.value()), (1.0, 0.0));
        assert_eq!(out[4].dim, 2);
        assert_eq!((out[4].x.value(), out[4].y.value()), (1.0, 2.0));
        assert_eq!(out[4].boundary, vec![(2, 1), (3, 1)]);
        assert!(validate(&sort_and_index(&out, f).unwrap()).ok());
    }

    #[test]
    fn h_critical_single_grade_passthrough() {
        let f = FieldChar::new(3).unwrap();
        let gens = [
            MultiCriticalGenerator {
                dim: 0,
                grades: vec![(c(0), c(1))],
                boundary: vec![],
            },
            MultiCriticalGenerator {
                dim: 0,
                grades: vec![(c(1), c(0))],
                boundary: vec![],
            },
            MultiCriticalGenerator {
                dim: 1,
                grades: vec![(c(1), c(1))],
                boundary: vec![(0, 2), (1, 1)],
            },
        ];
        let out = expand_h_critical(&gens, f).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[2].boundary, vec![(0, 2), (1, 1)]);
    }

    #[test]
    fn h_critical_errors() {
        let f = FieldChar::Z2;
        let comparable = [MultiCriticalGenerator {
            dim: 0,
            grades: vec![(c(0), c(0)), (c(1), c(1))],
            boundary: vec![],
        }];
        assert_eq!(
            expand_h_critical(&comparable, f),
            Err(IngestError::ComparableGrades { position: 0 })
        );
        let unresolvable = [
            MultiCriticalGenerator {
                dim: 0,
                grades: vec![(c(2), c(2))],
                boundary: vec![],
            },
            MultiCriticalGenerator {
                dim: 1,
                grades: vec![(c(1), c(3))],
                boundary: vec![(0, 1)],
            },
        ];
        assert_eq!(
            expand_h_critical(&unresolvable, f),
            Err(IngestError::Unresolvable {
                position: 1,
                reference: 0
            })
        );
    }

    #[test]
    fn mesh_single_triangle() {
        let f = FieldChar::Z2;
        let mesh = Mesh {
            vertices: vec![(c(0), c(0)), (c(1), c(0)), (c(0), c(1))],
            cells: vec![vec![0, 1, 2]],
        };
        let out = mesh_bifiltration(&mesh, f).unwrap();
        assert_eq!(out.len(), 7);
        let g: Vec<(f64, f64, usize)> = out
            .iter()
            .map(|r| (r.x.value(), r.y.value(), r.dim))
            .collect();
        assert_eq!(
            g,
            [
                (0.0, 0.0, 0),
                (1.0, 0.0, 0),
                (0.0, 1.0, 0),
                (1.0, 0.0, 1), // 01
                (0.0, 1.0, 1), // 02
                (1.0, 1.0, 1), // 12
                (1.0, 1.0, 2),
            ]
        );
        assert!(validate(&sort_and_index(&out, f).unwrap()).ok());
    }

    #[test]
    fn mesh_signs_for_odd_characteristic() {
        let f = FieldChar::new(5).unwrap();
        let mesh = Mesh {
            vertices: vec![(c(0), c(0)), (c(1), c(0)), (c(0), c(1))],
            cells: vec![vec![2, 0, 1]],
        };
        let out = mesh_bifiltration(&mesh, f).unwrap();
        // triangle 012: +12 -02 +01
        assert_eq!(out[6].boundary, vec![(5, 1), (4, 4), (3, 1)]);
        assert!(validate(&sort_and_index(&out, f).unwrap()).ok());
    }

    #[test]
    fn mesh_single_vertex_and_errors() {
        let f = FieldChar::Z2;
        let one = Mesh {
            vertices: vec![(c(3), c(4))],
            cells: vec![],
        };
        let out = mesh_bifiltration(&one, f).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].x.raw(), "3");
        let bad = Mesh {
            vertices: vec![(c(0), c(0))],
            cells: vec![vec![0, 1]],
        };
        assert_eq!(
            mesh_bifiltration(&bad, f),
            Err(IngestError::BadVertex { cell: 0, vertex: 1 })
        );
        let degen = Mesh {
            vertices: vec![(c(0), c(0)), (c(1), c(1))],
            cells: vec![vec![0, 0, 1]],
        };
        assert_eq!(
            mesh_bifiltration(&degen, f),
            Err(IngestError::DegenerateCell { cell: 0 })
        );
    }

    mod properties {
        use super::*;
        use crate::oracle::{betti_all, multicritical_betti, GradeGrid};
        use crate::synth::random_multicritical;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn expansion_matches_sublevel_homology(seed in any::<u64>(), z5 in any::<bool>()) {
                let p = if z5 { 5 } else { 2 };
                let field = FieldChar::new(p).unwrap();
                let gens = random_multicritical(seed, p, 3);
                let raw = expand_h_critical(&gens, field).unwrap();
                let c = sort_and_index(&raw, field).unwrap();
                prop_assert!(validate(&c).ok());
                let dims = gens.iter().map(|g| g.dim).max().unwrap() + 1;
                for q in GradeGrid::of(&c).points() {
                    let x = c.axes().x.get(q.x).unwrap();
                    let y = c.axes().y.get(q.y).unwrap();
                    let expanded = betti_all(&c, q, dims);
                    prop_assert_eq!(expanded, multicritical_betti(&gens, field, x, y, dims));
                }
            }
        }
    }
}
