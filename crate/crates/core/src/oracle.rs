//! Brute-force reference computations.
//!
//! Everything here reduces dense submatrices one column at a time with the
//! textbook persistence algorithm. Nothing is shared with the fast path in
//! [`crate::reduce`] beyond the chain type.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::Chain;
use crate::complex::BifilteredComplex;
use crate::field::FieldChar;
use crate::grade::{Axes, Axis, Coord, Grade};
use crate::ingest::MultiCriticalGenerator;

/// Most comparable grid pairs [`rank_invariant`] handles without forcing.
pub const MAX_COMPARABLE_PAIRS: usize = 10_000;

/// A reduced matrix: the reduced columns and the lowest index of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub columns: Vec<Chain>,
    pub low: Vec<Option<usize>>,
    /// `owner[r]` is the column whose lowest index is `r`.
    pub owner: Vec<Option<usize>>,
}

/// Standard left-to-right column reduction. Column `j` may only hold rows
/// below `j`.
pub fn standard_reduce(matrix: &[Chain], field: FieldChar) -> Reduced {
    let n = matrix.len();
    let mut columns: Vec<Chain> = Vec::with_capacity(n);
    let mut low = vec![None; n];
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (j, col) in matrix.iter().enumerate() {
        debug_assert!(col.max().is_none_or(|(r, _)| r < j));
        let mut col = col.clone();
        while let Some((r, c)) = col.max() {
            match owner[r] {
                Some(s) => {
                    let src: &Chain = &columns[s];
                    let lambda = field.cancel_factor(c, src.coeff(r));
                    col.add_scaled(src, lambda, field);
                }
                None => {
                    owner[r] = Some(j);
                    low[j] = Some(r);
                    break;
                }
            }
        }
        columns.push(col);
    }
    Reduced {
        columns,
        low,
        owner,
    }
}

/// A reduction of the subcomplex made of the columns `order`, listed in the
/// order they enter the matrix.
struct SubReduction<'a> {
    complex: &'a BifilteredComplex,
    order: Vec<usize>,
    reduced: Reduced,
}

impl<'a> SubReduction<'a> {
    fn new(complex: &'a BifilteredComplex, order: Vec<usize>) -> Self {
        let mut pos = vec![usize::MAX; complex.len()];
        for (i, &c) in order.iter().enumerate() {
            pos[c] = i;
        }
        let matrix: Vec<Chain> = order
            .iter()
            .map(|&c| {
                Chain::from_entries(
                    complex.column(c).boundary.entries().iter().map(|&(r, v)| {
                        debug_assert!(pos[r] != usize::MAX, "subcomplex not closed");
                        (pos[r], v)
                    }),
                    complex.field(),
                )
            })
            .collect();
        let reduced = standard_reduce(&matrix, complex.field());
        SubReduction {
            complex,
            order,
            reduced,
        }
    }

    fn dim(&self, i: usize) -> usize {
        self.complex.column(self.order[i]).dim
    }

    /// Betti numbers of the subcomplex on the first `len` positions, which
    /// must themselves form a subcomplex.
    fn betti_prefix(&self, len: usize, dims: usize) -> Vec<usize> {
        let mut b = vec![0i64; dims];
        for i in 0..len {
            let k = self.dim(i);
            match self.reduced.low[i] {
                None if k < dims => b[k] += 1,
                Some(_) if k > 0 && k - 1 < dims => b[k - 1] -= 1,
                _ => {}
            }
        }
        b.into_iter().map(|v| v as usize).collect()
    }
}

fn sublevel(complex: &BifilteredComplex, p: Grade) -> Vec<usize> {
    (0..complex.len())
        .filter(|&i| complex.column(i).grade.leq(p))
        .collect()
}

/// `order` for the pair `A ⊆ B`: the columns of `A`, then those of `B \ A`,
/// each in index order.
fn split_order(
    complex: &BifilteredComplex,
    in_a: impl Fn(Grade) -> bool,
    in_b: impl Fn(Grade) -> bool,
) -> (Vec<usize>, usize) {
    let cols = complex.columns();
    let mut order: Vec<usize> = (0..cols.len()).filter(|&i| in_a(cols[i].grade)).collect();
    let a_len = order.len();
    order.extend((0..cols.len()).filter(|&i| in_b(cols[i].grade) && !in_a(cols[i].grade)));
    (order, a_len)
}

fn dims_of(complex: &BifilteredComplex) -> usize {
    complex.max_dim().map_or(0, |d| d + 1)
}

/// `k`-th Betti number of the sublevel complex at `p`.
pub fn betti(complex: &BifilteredComplex, p: Grade, k: usize) -> usize {
    betti_all(complex, p, k + 1)[k]
}

/// Betti numbers in dimensions `0..dims` of the sublevel complex at `p`.
pub fn betti_all(complex: &BifilteredComplex, p: Grade, dims: usize) -> Vec<usize> {
    let sub = SubReduction::new(complex, sublevel(complex, p));
    let len = sub.order.len();
    sub.betti_prefix(len, dims)
}

/// Distinct x-ranks and y-ranks used by a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradeGrid {
    pub xs: Vec<u32>,
    pub ys: Vec<u32>,
}

impl GradeGrid {
    pub fn of(complex: &BifilteredComplex) -> Self {
        let mut xs: Vec<u32> = complex.columns().iter().map(|c| c.grade.x).collect();
        let mut ys: Vec<u32> = complex.columns().iter().map(|c| c.grade.y).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        GradeGrid { xs, ys }
    }

    pub fn union(&self, other: &GradeGrid) -> GradeGrid {
        let merge = |a: &[u32], b: &[u32]| {
            let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        GradeGrid {
            xs: merge(&self.xs, &other.xs),
            ys: merge(&self.ys, &other.ys),
        }
    }

    pub fn contains(&self, p: Grade) -> bool {
        self.xs.binary_search(&p.x).is_ok() && self.ys.binary_search(&p.y).is_ok()
    }

    pub fn points(&self) -> impl Iterator<Item = Grade> + '_ {
        self.xs
            .iter()
            .flat_map(move |&x| self.ys.iter().map(move |&y| Grade::new(x, y)))
    }

    pub fn point_count(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    /// Number of pairs `p ≤ q` of grid points, `p = q` included.
    pub fn comparable_pairs(&self) -> usize {
        let tri = |n: usize| n * (n + 1) / 2;
        tri(self.xs.len()).saturating_mul(tri(self.ys.len()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    OffGrid(Grade),
    GridTooLarge { pairs: usize, limit: usize },
    FieldMismatch { left: u32, right: u32 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::OffGrid(p) => write!(f, "grade {p} is not on the grade grid"),
            OracleError::GridTooLarge { pairs, limit } => write!(
                f,
                "grid has {pairs} comparable pairs, more than the limit of {limit}"
            ),
            OracleError::FieldMismatch { left, right } => {
                write!(
                    f,
                    "complexes are over different fields (Z/{left} and Z/{right})"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

/// Per-dimension lower bounds at `p`, for dimensions `0..dims`; any `p` is
/// accepted and grades without columns give zero.
fn delta_all(complex: &BifilteredComplex, p: Grade, dims: usize) -> Vec<usize> {
    let mut out = vec![0; dims];
    if !complex.columns().iter().any(|c| c.grade == p) {
        return out;
    }
    let (order, a_len) = split_order(complex, |g| g.leq(p) && g != p, |g| g.leq(p));
    let sub = SubReduction::new(complex, order);
    for i in a_len..sub.order.len() {
        let k = sub.dim(i);
        if k >= dims {
            continue;
        }
        let counted = match sub.reduced.low[i] {
            Some(r) => r < a_len,
            None => sub.reduced.owner[i].is_none(),
        };
        if counted {
            out[k] += 1;
        }
    }
    out
}

/// Lower bound on the number of `k`-generators any complex equivalent to
/// `complex` has at grade `p`: kernel dimension of `H_{k-1}(C^{<p}) →
/// H_{k-1}(C^p)` plus cokernel dimension of `H_k(C^{<p}) → H_k(C^p)`, where
/// `C^{<p}` holds the columns of grade strictly below `p`.
pub fn delta(complex: &BifilteredComplex, p: Grade, k: usize) -> Result<usize, OracleError> {
    if !GradeGrid::of(complex).contains(p) {
        return Err(OracleError::OffGrid(p));
    }
    Ok(delta_all(complex, p, k + 1)[k])
}

/// Number of `k`-columns with grade exactly `p`.
pub fn gamma(complex: &BifilteredComplex, p: Grade, k: usize) -> usize {
    complex
        .columns()
        .iter()
        .filter(|c| c.grade == p && c.dim == k)
        .count()
}

/// Betti numbers and inclusion ranks on a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankInvariant {
    pub dims: usize,
    pub betti: BTreeMap<(Grade, usize), usize>,
    pub ranks: BTreeMap<(Grade, Grade, usize), usize>,
}

impl RankInvariant {
    pub fn betti(&self, p: Grade, k: usize) -> Option<usize> {
        self.betti.get(&(p, k)).copied()
    }

    pub fn rank(&self, p: Grade, q: Grade, k: usize) -> Option<usize> {
        self.ranks.get(&(p, q, k)).copied()
    }
}

/// Betti numbers at every point of the complex's own grid and ranks of
/// `H_k(C^p) → H_k(C^q)` for every comparable pair.
pub fn rank_invariant(
    complex: &BifilteredComplex,
    force: bool,
) -> Result<RankInvariant, OracleError> {
    rank_invariant_on(complex, &GradeGrid::of(complex), dims_of(complex), force)
}

/// [`rank_invariant`] on a given grid and for dimensions `0..dims`.
pub fn rank_invariant_on(
    complex: &BifilteredComplex,
    grid: &GradeGrid,
    dims: usize,
    force: bool,
) -> Result<RankInvariant, OracleError> {
    let pairs = grid.comparable_pairs();
    if pairs > MAX_COMPARABLE_PAIRS && !force {
        return Err(OracleError::GridTooLarge {
            pairs,
            limit: MAX_COMPARABLE_PAIRS,
        });
    }
    let mut inv = RankInvariant {
        dims,
        ..Default::default()
    };
    let points: Vec<Grade> = grid.points().collect();
    for &p in &points {
        for &q in points.iter().filter(|&&q| p.leq(q)) {
            let (order, a_len) = split_order(complex, |g| g.leq(p), |g| g.leq(q));
            let sub = SubReduction::new(complex, order);
            let b = sub.betti_prefix(a_len, dims);
            let mut killed = vec![0usize; dims];
            for i in a_len..sub.order.len() {
                let k = sub.dim(i);
                if let Some(r) = sub.reduced.low[i] {
                    if r < a_len && k >= 1 && k - 1 < dims {
                        killed[k - 1] += 1;
                    }
                }
            }
            for k in 0..dims {
                inv.ranks.insert((p, q, k), b[k] - killed[k]);
                if p == q {
                    inv.betti.insert((p, k), b[k]);
                }
            }
        }
    }
    Ok(inv)
}

/// Rebases both complexes onto merged coordinate tables.
fn common_axes(
    c: &BifilteredComplex,
    d: &BifilteredComplex,
) -> Result<(BifilteredComplex, BifilteredComplex), OracleError> {
    if c.field() != d.field() {
        return Err(OracleError::FieldMismatch {
            left: c.field().characteristic(),
            right: d.field().characteristic(),
        });
    }
    if c.axes() == d.axes() {
        return Ok((c.clone(), d.clone()));
    }
    let (x, cx, dx) = Axis::union(&c.axes().x, &d.axes().x);
    let (y, cy, dy) = Axis::union(&c.axes().y, &d.axes().y);
    let axes = Axes { x, y };
    Ok((c.rebased(axes.clone(), &cx, &cy), d.rebased(axes, &dx, &dy)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Betti {
        p: Grade,
        k: usize,
        left: usize,
        right: usize,
    },
    Rank {
        p: Grade,
        q: Grade,
        k: usize,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub mismatches: Vec<Mismatch>,
    pub points: usize,
    pub pairs: usize,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the rank invariants of two complexes over the union of their
/// grids.
pub fn check_equivalence(
    c: &BifilteredComplex,
    d: &BifilteredComplex,
    force: bool,
) -> Result<EquivalenceReport, OracleError> {
    let (c, d) = common_axes(c, d)?;
    let grid = GradeGrid::of(&c).union(&GradeGrid::of(&d));
    let dims = dims_of(&c).max(dims_of(&d));
    let ic = rank_invariant_on(&c, &grid, dims, force)?;
    let id = rank_invariant_on(&d, &grid, dims, force)?;
    let mut report = EquivalenceReport {
        mismatches: Vec::new(),
        points: grid.point_count(),
        pairs: grid.comparable_pairs(),
    };
    for (&(p, k), &left) in &ic.betti {
        let right = id.betti[&(p, k)];
        if left != right {
            report
                .mismatches
                .push(Mismatch::Betti { p, k, left, right });
        }
    }
    for (&(p, q, k), &left) in &ic.ranks {
        let right = id.ranks[&(p, q, k)];
        if left != right && p != q {
            report.mismatches.push(Mismatch::Rank {
                p,
                q,
                k,
                left,
                right,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityViolation {
    pub p: Grade,
    pub k: usize,
    pub delta: usize,
    pub gamma: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptimalityReport {
    pub violations: Vec<OptimalityViolation>,
    pub points_checked: usize,
}

impl OptimalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `reduced` has exactly `delta(c, p, k)` generators of
/// dimension `k` at every grade `p`. Grades holding no column of either
/// complex have both counts zero and are skipped.
pub fn check_optimality(
    c: &BifilteredComplex,
    reduced: &BifilteredComplex,
) -> Result<OptimalityReport, OracleError> {
    let (c, r) = common_axes(c, reduced)?;
    let dims = dims_of(&c).max(dims_of(&r));
    let mut grades: Vec<Grade> = c
        .columns()
        .iter()
        .chain(r.columns())
        .map(|col| col.grade)
        .collect();
    grades.sort_unstable();
    grades.dedup();
    let mut report = OptimalityReport {
        violations: Vec::new(),
        points_checked: grades.len(),
    };
    for p in grades {
        let d = delta_all(&c, p, dims);
        for (k, &delta) in d.iter().enumerate() {
            let gamma = gamma(&r, p, k);
            if gamma != delta {
                report
                    .violations
                    .push(OptimalityViolation { p, k, delta, gamma });
            }
        }
    }
    Ok(report)
}

/// Betti numbers in dimensions `0..dims` of a multi-critical complex at the
/// point `(x, y)`: a generator is present once any of its grades is below
/// the point.
pub fn multicritical_betti(
    gens: &[MultiCriticalGenerator],
    field: FieldChar,
    x: &Coord,
    y: &Coord,
    dims: usize,
) -> Vec<usize> {
    let present: Vec<usize> = (0..gens.len())
        .filter(|&i| {
            gens[i]
                .grades
                .iter()
                .any(|(gx, gy)| gx.cmp_value(x).is_le() && gy.cmp_value(y).is_le())
        })
        .collect();
    let mut pos = vec![usize::MAX; gens.len()];
    for (i, &g) in present.iter().enumerate() {
        pos[g] = i;
    }
    let matrix: Vec<Chain> = present
        .iter()
        .map(|&g| Chain::from_entries(gens[g].boundary.iter().map(|&(r, c)| (pos[r], c)), field))
        .collect();
    let reduced = standard_reduce(&matrix, field);
    let mut b = vec![0i64; dims];
    for (i, &g) in present.iter().enumerate() {
        let k = gens[g].dim;
        match reduced.low[i] {
            None if k < dims => b[k] += 1,
            Some(_) if k > 0 && k - 1 < dims => b[k - 1] -= 1,
            _ => {}
        }
    }
    b.into_iter().map(|v| v as usize).collect()
}
