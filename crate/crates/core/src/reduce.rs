//! The chunk algorithm.
//!
//! * Phase I (local reduction) works chunk by chunk. Within a chunk, columns
//!   are processed in decreasing dimension and increasing index; a column
//!   already labeled is skipped (clearing). A column whose local pivot is
//!   claimed by an earlier column is reduced by that column until its local
//!   pivot is new or gone. Columns left without a local pivot are global;
//!   otherwise the column and its pivot form a local pair.
//! * Phase II (compression) strips every local index from the boundaries of
//!   global columns, using the negative partner of a positive entry to cancel
//!   it.
//! * Phase III keeps the global columns and reindexes them densely.
//!
//! The two elementary moves the algorithm decomposes into,
//! [`order_preserving_addition`] and [`remove_local_pair`], are exposed as
//! standalone transformations, and [`modified_chunk_reduce`] runs the variant
//! of the algorithm built only from those moves.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::time::Duration;

use crate::chain::Chain;
use crate::column::Column;
use crate::complex::BifilteredComplex;
use crate::field::{Coeff, FieldChar};
use crate::heap::HeapColumn;
use crate::ingest::{validate, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Tag {
    #[default]
    Unlabeled,
    Global,
    LocalPositive,
    LocalNegative,
}

impl Tag {
    pub fn is_local(self) -> bool {
        matches!(self, Tag::LocalPositive | Tag::LocalNegative)
    }
}

/// Phase I output: one tag per column and the local-pair matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    tags: Vec<Tag>,
    pair_of: Vec<Option<usize>>,
}

impl Labeling {
    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn tag(&self, index: usize) -> Tag {
        self.tags[index]
    }

    /// Partner of a local column.
    pub fn partner(&self, index: usize) -> Option<usize> {
        self.pair_of[index]
    }

    pub fn global_count(&self) -> usize {
        self.tags.iter().filter(|&&t| t == Tag::Global).count()
    }

    /// Local pairs as `(positive, negative)`, ordered by the negative index.
    pub fn local_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == Tag::LocalNegative)
            .map(|(i, _)| (self.pair_of[i].expect("negative column has a partner"), i))
    }
}

/// Result of Phase I.
#[derive(Clone, Debug)]
pub struct LocalReduction {
    pub labels: Labeling,
    pub additions: u64,
    /// Additions whose target ended up labeled local positive. Clearing
    /// guarantees this stays zero.
    pub additions_on_positive: u64,
}

/// Size parameters and counters of one run of [`chunk_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    /// Input generators.
    pub n: usize,
    /// Chunks.
    pub m: usize,
    /// Largest chunk.
    pub ell: usize,
    /// Global columns, i.e. output generators.
    pub g: usize,
    pub phase1_additions: u64,
    pub phase2_additions: u64,
    pub additions_on_positive: u64,
    /// Wall time of phases I to III. Zero without the `std` feature.
    pub phase_times: [Duration; 3],
}

impl ReductionStats {
    pub fn column_additions(&self) -> u64 {
        self.phase1_additions + self.phase2_additions
    }

    pub fn total_time(&self) -> Duration {
        self.phase_times.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceError {
    Invalid(ValidationReport),
    IndexOutOfRange { index: usize, len: usize },
    SameColumn(usize),
    DimensionMismatch { first: usize, second: usize },
    GradeOrder { source: usize, target: usize },
    UnequalGrades { positive: usize, negative: usize },
    ZeroPairCoefficient { positive: usize, negative: usize },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ReduceError::*;
        match self {
            Invalid(rep) => write!(
                f,
                "input complex is invalid ({} violations)",
                rep.violations.len()
            ),
            IndexOutOfRange { index, len } => {
                write!(f, "column {index} out of range for {len} columns")
            }
            SameColumn(i) => write!(f, "column {i} cannot be added to itself"),
            DimensionMismatch { first, second } => {
                write!(
                    f,
                    "columns {first} and {second} have incompatible dimensions"
                )
            }
            GradeOrder { source, target } => write!(
                f,
                "grade of column {source} is not below the grade of column {target}"
            ),
            UnequalGrades { positive, negative } => {
                write!(f, "columns {positive} and {negative} have different grades")
            }
            ZeroPairCoefficient { positive, negative } => write!(
                f,
                "column {positive} does not appear in the boundary of column {negative}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ReduceError {}

/// Runs independent jobs, on a rayon pool when one is available.
enum Executor {
    Sequential,
    #[cfg(feature = "parallel")]
    Pool(rayon::ThreadPool),
}

impl Executor {
    fn new(threads: usize) -> Self {
        #[cfg(feature = "parallel")]
        if threads > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return Executor::Pool(pool);
            }
        }
        let _ = threads;
        Executor::Sequential
    }

    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Executor::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Pool(pool) => {
                use rayon::prelude::*;
                pool.install(|| items.into_par_iter().map(f).collect())
            }
        }
    }
}

struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(feature = "std")]
        {
            self.start.elapsed()
        }
        #[cfg(not(feature = "std"))]
        {
            Duration::ZERO
        }
    }
}

#[derive(Default)]
struct ChunkCounters {
    additions: u64,
    additions_on_positive: u64,
}

/// Phase I on one chunk. `cols`, `tags` and `pair_of` are the chunk's own
/// slices; `start` is the global index of its first column.
fn reduce_chunk(
    start: usize,
    cols: &mut [Column],
    tags: &mut [Tag],
    pair_of: &mut [Option<usize>],
    field: FieldChar,
) -> ChunkCounters {
    let len = cols.len();
    let mut counters = ChunkCounters::default();
    // owner[o]: offset of the column whose local pivot is start + o
    let mut owner: Vec<Option<usize>> = vec![None; len];
    let mut added = vec![0u64; len];

    // dimensions ascend inside a chunk, so each dimension is a contiguous run
    let mut runs: Vec<Range<usize>> = Vec::new();
    for j in 0..len {
        match runs.last_mut() {
            Some(r) if cols[r.start].dim == cols[j].dim => r.end = j + 1,
            _ => runs.push(j..j + 1),
        }
    }

    for run in runs.into_iter().rev() {
        for j in run {
            if tags[j] != Tag::Unlabeled {
                continue;
            }
            let local_pivot = match cols[j].boundary.max() {
                Some((piv, _)) if piv >= start => {
                    if owner[piv - start].is_none() {
                        Some(piv)
                    } else {
                        let mut heap = HeapColumn::from_chain(&cols[j].boundary, field);
                        let mut found = None;
                        while let Some((piv, c)) = heap.pivot() {
                            if piv < start {
                                break;
                            }
                            match owner[piv - start] {
                                Some(s) => {
                                    let src = &cols[s].boundary;
                                    let lambda = field.cancel_factor(c, src.coeff(piv));
                                    heap.add_scaled(src.entries(), lambda);
                                    counters.additions += 1;
                                    added[j] += 1;
                                }
                                None => {
                                    found = Some(piv);
                                    break;
                                }
                            }
                        }
                        cols[j].boundary = heap.into_chain();
                        found
                    }
                }
                _ => None,
            };
            match local_pivot {
                Some(piv) => {
                    let o = piv - start;
                    tags[j] = Tag::LocalNegative;
                    tags[o] = Tag::LocalPositive;
                    pair_of[j] = Some(piv);
                    pair_of[o] = Some(start + j);
                    owner[o] = Some(j);
                }
                None => tags[j] = Tag::Global,
            }
        }
    }

    counters.additions_on_positive = (0..len)
        .filter(|&j| tags[j] == Tag::LocalPositive)
        .map(|j| added[j])
        .sum();
    counters
}

fn phase1_with(complex: &mut BifilteredComplex, exec: &Executor) -> LocalReduction {
    let n = complex.len();
    let field = complex.field();
    let ranges: Vec<Range<usize>> = complex.chunks().collect();
    let mut tags = vec![Tag::Unlabeled; n];
    let mut pair_of = vec![None; n];

    let outcomes = {
        let mut jobs = Vec::with_capacity(ranges.len());
        let mut cols_rest = complex.columns_mut();
        let mut tags_rest = &mut tags[..];
        let mut pair_rest = &mut pair_of[..];
        for r in &ranges {
            let (c, cr) = core::mem::take(&mut cols_rest).split_at_mut(r.len());
            let (t, tr) = core::mem::take(&mut tags_rest).split_at_mut(r.len());
            let (p, pr) = core::mem::take(&mut pair_rest).split_at_mut(r.len());
            jobs.push((r.start, c, t, p));
            cols_rest = cr;
            tags_rest = tr;
            pair_rest = pr;
        }
        exec.map(jobs, |(start, c, t, p)| reduce_chunk(start, c, t, p, field))
    };

    LocalReduction {
        labels: Labeling { tags, pair_of },
        additions: outcomes.iter().map(|o| o.additions).sum(),
        additions_on_positive: outcomes.iter().map(|o| o.additions_on_positive).sum(),
    }
}

/// Phase I: labels every column and reduces columns in place within their
/// chunk. All additions stay inside one chunk, so chunks run independently.
pub fn phase1_local_reduction(complex: &mut BifilteredComplex, threads: usize) -> LocalReduction {
    phase1_with(complex, &Executor::new(threads))
}

/// Compresses one global column. With `keep_negative`, local negative
/// entries stay in the boundary (the modified algorithm); otherwise they are
/// dropped.
fn compress_column(
    complex: &BifilteredComplex,
    labels: &Labeling,
    index: usize,
    keep_negative: bool,
) -> (Chain, u64) {
    let field = complex.field();
    let col = complex.column(index);
    if col
        .boundary
        .indices()
        .all(|l| labels.tags[l] == Tag::Global)
    {
        return (col.boundary.clone(), 0);
    }
    let mut heap = HeapColumn::from_chain(&col.boundary, field);
    let mut out: Vec<(usize, Coeff)> = Vec::new();
    let mut additions = 0;
    // Entries come off the heap in decreasing index order, and every
    // addition only brings in smaller indices, so `out` ends up descending.
    while let Some((l, coeff)) = heap.pop_pivot() {
        match labels.tags[l] {
            Tag::Global => out.push((l, coeff)),
            Tag::LocalNegative => {
                if keep_negative {
                    out.push((l, coeff))
                }
            }
            Tag::LocalPositive => {
                let partner = labels.pair_of[l].expect("positive column has a partner");
                let src = &complex.column(partner).boundary;
                let (top, top_coeff) = src.max().expect("negative column has a pivot");
                debug_assert_eq!(top, l);
                let lambda = field.cancel_factor(coeff, top_coeff);
                let rest = &src.entries()[..src.len() - 1];
                heap.add_scaled(rest, lambda);
                additions += 1;
            }
            Tag::Unlabeled => unreachable!("phase II runs on a fully labeled complex"),
        }
    }
    out.reverse();
    (Chain::from_sorted(out), additions)
}

fn phase2_with(
    complex: &mut BifilteredComplex,
    labels: &Labeling,
    exec: &Executor,
    keep_negative: bool,
) -> u64 {
    let globals: Vec<usize> = (0..complex.len())
        .filter(|&i| labels.tags[i] == Tag::Global)
        .collect();
    let results = {
        let shared: &BifilteredComplex = complex;
        exec.map(globals.clone(), |i| {
            compress_column(shared, labels, i, keep_negative)
        })
    };
    let mut additions = 0;
    let cols = complex.columns_mut();
    for (i, (chain, a)) in globals.into_iter().zip(results) {
        cols[i].boundary = chain;
        additions += a;
    }
    additions
}

/// Phase II: removes every local index from the boundaries of global
/// columns. Local columns are read but never modified.
pub fn phase2_compress(complex: &mut BifilteredComplex, labels: &Labeling, threads: usize) -> u64 {
    phase2_with(complex, labels, &Executor::new(threads), false)
}

/// Phase III: keeps the global columns, reindexed densely in their original
/// relative order.
pub fn phase3_remove(complex: &BifilteredComplex, labels: &Labeling) -> BifilteredComplex {
    let n = complex.len();
    let mut new_index = vec![usize::MAX; n];
    let mut next = 0;
    for (i, slot) in new_index.iter_mut().enumerate() {
        if labels.tags[i] == Tag::Global {
            *slot = next;
            next += 1;
        }
    }
    let columns = complex
        .columns()
        .iter()
        .filter(|c| labels.tags[c.index] == Tag::Global)
        .map(|c| {
            let mut boundary = c.boundary.clone();
            debug_assert!(boundary.indices().all(|l| labels.tags[l] == Tag::Global));
            boundary.remap(|l| new_index[l]);
            Column::new(new_index[c.index], c.grade, c.dim, boundary)
        })
        .collect();
    BifilteredComplex::from_columns(complex.field(), complex.axes().clone(), columns)
}

/// Full chunk algorithm on a validated complex.
///
/// The output does not depend on `threads`.
pub fn chunk_reduce(
    complex: &BifilteredComplex,
    threads: usize,
) -> Result<(BifilteredComplex, ReductionStats), ReduceError> {
    let report = validate(complex);
    if !report.ok() {
        return Err(ReduceError::Invalid(report));
    }
    Ok(chunk_reduce_unchecked(complex, threads))
}

/// [`chunk_reduce`] without the up-front validation pass.
pub fn chunk_reduce_unchecked(
    complex: &BifilteredComplex,
    threads: usize,
) -> (BifilteredComplex, ReductionStats) {
    let exec = Executor::new(threads);
    let mut work = complex.clone();

    let sw = Stopwatch::start();
    let local = phase1_with(&mut work, &exec);
    let t1 = sw.elapsed();

    let sw = Stopwatch::start();
    let phase2_additions = phase2_with(&mut work, &local.labels, &exec, false);
    let t2 = sw.elapsed();

    let sw = Stopwatch::start();
    let out = phase3_remove(&work, &local.labels);
    let t3 = sw.elapsed();

    let stats = ReductionStats {
        n: complex.len(),
        m: complex.chunk_count(),
        ell: complex.max_chunk_len(),
        g: out.len(),
        phase1_additions: local.additions,
        phase2_additions,
        additions_on_positive: local.additions_on_positive,
        phase_times: [t1, t2, t3],
    };
    (out, stats)
}

fn check_index(complex: &BifilteredComplex, index: usize) -> Result<(), ReduceError> {
    if index >= complex.len() {
        Err(ReduceError::IndexOutOfRange {
            index,
            len: complex.len(),
        })
    } else {
        Ok(())
    }
}

/// Basis change adding `λ` times column `source` to column `target`.
///
/// Both columns must have the same dimension `k` and the grade of `source`
/// must lie below the grade of `target`. Besides the column addition, every
/// `(k+1)`-column with coefficient `μ` at `target` has `λμ` subtracted from
/// its coefficient at `source`, which keeps the boundary of the boundary zero.
pub fn order_preserving_addition(
    complex: &BifilteredComplex,
    source: usize,
    target: usize,
    lambda: Coeff,
) -> Result<BifilteredComplex, ReduceError> {
    check_index(complex, source)?;
    check_index(complex, target)?;
    if source == target {
        return Err(ReduceError::SameColumn(source));
    }
    let (s, t) = (complex.column(source), complex.column(target));
    if s.dim != t.dim {
        return Err(ReduceError::DimensionMismatch {
            first: source,
            second: target,
        });
    }
    if !s.grade.leq(t.grade) {
        return Err(ReduceError::GradeOrder { source, target });
    }
    let field = complex.field();
    let lambda = lambda % field.characteristic();
    let mut columns = complex.columns().to_vec();
    if lambda == 0 {
        return Ok(complex.clone());
    }
    let src_boundary = s.boundary.clone();
    columns[target]
        .boundary
        .add_scaled(&src_boundary, lambda, field);
    let k = s.dim;
    for c in columns.iter_mut().filter(|c| c.dim == k + 1) {
        let mu = c.boundary.coeff(target);
        if mu != 0 {
            let delta = field.neg(field.mul(lambda, mu));
            c.boundary
                .add_scaled(&Chain::from_sorted(vec![(source, 1)]), delta, field);
        }
    }
    Ok(BifilteredComplex::from_columns(
        field,
        complex.axes().clone(),
        columns,
    ))
}

/// Columns with deletions pending compaction.
struct Workspace {
    field: FieldChar,
    cols: Vec<Option<Column>>,
}

impl Workspace {
    fn new(complex: &BifilteredComplex) -> Self {
        Workspace {
            field: complex.field(),
            cols: complex.columns().iter().cloned().map(Some).collect(),
        }
    }

    fn col(&self, i: usize) -> &Column {
        self.cols[i].as_ref().expect("live column")
    }

    /// Removes the local pair `(positive, negative)`.
    fn delete_pair(&mut self, positive: usize, negative: usize) {
        let field = self.field;
        let k = self.col(positive).dim;
        let pair_boundary = self.col(negative).boundary.clone();
        let lambda_inv = field.inv(pair_boundary.coeff(positive));
        for (i, slot) in self.cols.iter_mut().enumerate() {
            let Some(c) = slot.as_mut() else { continue };
            if i == negative {
                continue;
            }
            if c.dim == k + 1 {
                let mu = c.boundary.coeff(positive);
                if mu != 0 {
                    let factor = field.neg(field.mul(lambda_inv, mu));
                    c.boundary.add_scaled(&pair_boundary, factor, field);
                    debug_assert_eq!(c.boundary.coeff(positive), 0);
                }
            } else if c.dim == k + 2 {
                c.boundary.remove(negative);
            }
        }
        self.cols[positive] = None;
        self.cols[negative] = None;
    }

    fn compact(self, template: &BifilteredComplex) -> BifilteredComplex {
        let mut new_index = vec![usize::MAX; self.cols.len()];
        let mut next = 0;
        for (i, slot) in self.cols.iter().enumerate() {
            if slot.is_some() {
                new_index[i] = next;
                next += 1;
            }
        }
        let columns = self
            .cols
            .into_iter()
            .flatten()
            .map(|mut c| {
                c.index = new_index[c.index];
                c.boundary.remap(|l| new_index[l]);
                c
            })
            .collect();
        BifilteredComplex::from_columns(template.field(), template.axes().clone(), columns)
    }
}

/// Deletes a local pair: a `k`-column `positive` and a `(k+1)`-column
/// `negative` of equal grade where `positive` has nonzero coefficient `λ` in
/// the boundary of `negative`.
///
/// Every other `(k+1)`-column with coefficient `μ` at `positive` gets
/// `-λ⁻¹μ` times the boundary of `negative` added, every `(k+2)`-column
/// loses its entry at `negative`, and both columns are removed.
pub fn remove_local_pair(
    complex: &BifilteredComplex,
    positive: usize,
    negative: usize,
) -> Result<BifilteredComplex, ReduceError> {
    check_index(complex, positive)?;
    check_index(complex, negative)?;
    let (p, q) = (complex.column(positive), complex.column(negative));
    if p.dim + 1 != q.dim {
        return Err(ReduceError::DimensionMismatch {
            first: positive,
            second: negative,
        });
    }
    if p.grade != q.grade {
        return Err(ReduceError::UnequalGrades { positive, negative });
    }
    if q.boundary.coeff(positive) == 0 {
        return Err(ReduceError::ZeroPairCoefficient { positive, negative });
    }
    let mut ws = Workspace::new(complex);
    ws.delete_pair(positive, negative);
    Ok(ws.compact(complex))
}

/// The chunk algorithm rewritten as a sequence of elementary moves: Phase II
/// only cancels local positive entries, and Phase III removes each local
/// pair with [`remove_local_pair`] semantics instead of dropping columns.
/// Its output coincides with [`chunk_reduce`].
pub fn modified_chunk_reduce(
    complex: &BifilteredComplex,
) -> Result<BifilteredComplex, ReduceError> {
    let report = validate(complex);
    if !report.ok() {
        return Err(ReduceError::Invalid(report));
    }
    let exec = Executor::Sequential;
    let mut work = complex.clone();
    let local = phase1_with(&mut work, &exec);
    phase2_with(&mut work, &local.labels, &exec, true);
    let mut ws = Workspace::new(&work);
    for (positive, negative) in local.labels.local_pairs() {
        ws.delete_pair(positive, negative);
    }
    Ok(ws.compact(&work))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::local_pivot;
    use crate::grade::Grade;

    fn g(x: u32, y: u32) -> Grade {
        Grade::new(x, y)
    }

    /// a@(0,0), b@(1,0), e@(1,0) with ∂e = a + b.
    fn merged_edge() -> BifilteredComplex {
        BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 0), 1, vec![(0, 1), (1, 1)]),
            ],
        )
    }

    /// Full triangle at (0,0): v0 v1 v2 e01 e02 e12 t.
    fn full_triangle() -> BifilteredComplex {
        let z = g(0, 0);
        BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (z, 0, vec![]),
                (z, 0, vec![]),
                (z, 0, vec![]),
                (z, 1, vec![(0, 1), (1, 1)]),
                (z, 1, vec![(0, 1), (2, 1)]),
                (z, 1, vec![(1, 1), (2, 1)]),
                (z, 2, vec![(3, 1), (4, 1), (5, 1)]),
            ],
        )
    }

    #[test]
    fn phase1_merged_edge() {
        let mut c = merged_edge();
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(
            lr.labels.tags(),
            &[Tag::Global, Tag::LocalPositive, Tag::LocalNegative]
        );
        assert_eq!(lr.labels.partner(2), Some(1));
        assert_eq!(lr.labels.partner(1), Some(2));
    }

    #[test]
    fn phase1_full_triangle_pairs() {
        let mut c = full_triangle();
        let lr = phase1_local_reduction(&mut c, 1);
        let pairs: Vec<(usize, usize)> = lr.labels.local_pairs().collect();
        // (e12, t), (v1, e01), (v2, e02)
        assert_eq!(pairs, [(1, 3), (2, 4), (5, 6)]);
        assert_eq!(lr.labels.tag(0), Tag::Global);
        assert_eq!(lr.additions, 0);
        assert_eq!(lr.additions_on_positive, 0);
    }

    #[test]
    fn phase1_reduces_colliding_pivot() {
        // hollow triangle at (0,0): e12 collides with e02 after e01
        let z = g(0, 0);
        let mut c = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (z, 0, vec![]),
                (z, 0, vec![]),
                (z, 0, vec![]),
                (z, 1, vec![(0, 1), (1, 1)]),
                (z, 1, vec![(0, 1), (2, 1)]),
                (z, 1, vec![(1, 1), (2, 1)]),
            ],
        );
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(lr.labels.tag(5), Tag::Global);
        assert_eq!(lr.additions, 2);
        assert!(c.column(5).boundary.is_empty());
    }

    #[test]
    fn phase2_replaces_positive_entry() {
        // va@(0,0) vb@(0,0) e@(0,0) ∂e = va+vb ; vc@(1,1); f@(1,1) with ∂f = vb + vc
        let mut c = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(0, 0), 0, vec![]),
                (g(0, 0), 1, vec![(0, 1), (1, 1)]),
                (g(1, 1), 0, vec![]),
                (g(1, 1), 1, vec![(1, 1), (3, 1)]),
            ],
        );
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(lr.labels.tag(1), Tag::LocalPositive);
        assert_eq!(lr.labels.tag(3), Tag::LocalPositive);
        assert_eq!(lr.labels.tag(4), Tag::LocalNegative);
        // make a global column that contains the positive vb
        let mut c = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(0, 0), 0, vec![]),
                (g(0, 0), 1, vec![(0, 1), (1, 1)]),
                (g(1, 1), 1, vec![(0, 1), (1, 1)]),
            ],
        );
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(lr.labels.tag(3), Tag::Global);
        let adds = phase2_compress(&mut c, &lr.labels, 1);
        assert_eq!(adds, 1);
        // vb replaced by va, which then cancels against the existing va
        assert!(c.column(3).boundary.is_empty());
    }

    #[test]
    fn phase2_single_addition_over_z2() {
        // global edge at (1,1) with ∂ = {vb}; vb positive paired with e, ∂e = {va, vb}
        let mut c = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 0), 1, vec![(0, 1), (1, 1)]),
                (g(1, 1), 0, vec![]),
                (g(1, 1), 1, vec![(1, 1), (3, 1)]),
            ],
        );
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(lr.labels.tag(4), Tag::LocalNegative);
        // now a global edge carrying vb: extend with an extra column at (2,2)
        let mut c = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 0), 1, vec![(0, 1), (1, 1)]),
                (g(1, 1), 1, vec![(1, 1)]),
            ],
        );
        let _ = &mut c;
        let lr = phase1_local_reduction(&mut c, 1);
        assert_eq!(lr.labels.tag(3), Tag::Global);
        assert_eq!(phase2_compress(&mut c, &lr.labels, 1), 1);
        assert_eq!(c.column(3).boundary.entries(), &[(0, 1)]);
    }

    #[test]
    fn phase3_examples() {
        let (out, stats) = chunk_reduce(&merged_edge(), 1).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.column(0).grade, g(0, 0));

        // the crossing edge: nothing local
        let crossing_edge = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 1), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 1), 1, vec![(0, 1), (1, 1)]),
            ],
        );
        let (out3, _) = chunk_reduce(&crossing_edge, 1).unwrap();
        assert_eq!(out3, crossing_edge);
        assert_eq!(stats.g, 1);

        let (out4, stats4) = chunk_reduce(&full_triangle(), 1).unwrap();
        assert_eq!(out4.len(), 1);
        assert_eq!(out4.column(0).dim, 0);
        assert_eq!((stats4.n, stats4.m, stats4.ell, stats4.g), (7, 1, 7, 1));
    }

    #[test]
    fn single_vertex_fixed_point() {
        let v = BifilteredComplex::from_grades(FieldChar::Z2, vec![(g(0, 0), 0, vec![])]);
        let (out, stats) = chunk_reduce(&v, 4).unwrap();
        assert_eq!(out, v);
        assert_eq!((stats.n, stats.m, stats.ell, stats.g), (1, 1, 1, 1));
    }

    #[test]
    fn invalid_input_rejected() {
        let bad = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![(g(1, 1), 0, vec![]), (g(0, 0), 1, vec![(0, 1)])],
        );
        assert!(matches!(
            chunk_reduce(&bad, 1),
            Err(ReduceError::Invalid(_))
        ));
    }

    #[test]
    fn order_preserving_addition_merged_edge() {
        let c = merged_edge();
        let out = order_preserving_addition(&c, 0, 1, 1).unwrap();
        assert_eq!(out.column(2).boundary.entries(), &[(1, 1)]);
        assert!(validate(&out).ok());
        assert_eq!(order_preserving_addition(&c, 0, 1, 0).unwrap(), c);
        // wrong direction: (1,0) is not below (0,0)
        assert_eq!(
            order_preserving_addition(&c, 1, 0, 1),
            Err(ReduceError::GradeOrder {
                source: 1,
                target: 0
            })
        );
        assert!(matches!(
            order_preserving_addition(&c, 0, 2, 1),
            Err(ReduceError::DimensionMismatch { .. })
        ));
        assert_eq!(
            order_preserving_addition(&c, 1, 1, 1),
            Err(ReduceError::SameColumn(1))
        );
    }

    #[test]
    fn order_preserving_addition_inverse() {
        let f = FieldChar::new(5).unwrap();
        let c = BifilteredComplex::from_grades(
            f,
            vec![
                (g(0, 0), 0, vec![]),
                (g(0, 0), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 0), 1, vec![(0, 4), (2, 1)]),
                (g(1, 1), 1, vec![(1, 4), (2, 1)]),
            ],
        );
        let there = order_preserving_addition(&c, 3, 4, 3).unwrap();
        assert!(validate(&there).ok());
        let back = order_preserving_addition(&there, 3, 4, f.neg(3)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn remove_local_pair_examples() {
        let out = remove_local_pair(&merged_edge(), 1, 2).unwrap();
        assert_eq!(out, chunk_reduce(&merged_edge(), 1).unwrap().0);

        let c = full_triangle();
        let step = remove_local_pair(&c, 5, 6).unwrap(); // (e12, t)
                                                         // indices compact: v0 v1 v2 e01 e02
        let step = remove_local_pair(&step, 1, 3).unwrap(); // (v1, e01)
        let step = remove_local_pair(&step, 1, 2).unwrap(); // (v2, e02)
        assert_eq!(step, chunk_reduce(&c, 1).unwrap().0);

        let unequal = BifilteredComplex::from_grades(
            FieldChar::Z2,
            vec![
                (g(0, 0), 0, vec![]),
                (g(1, 0), 0, vec![]),
                (g(1, 1), 1, vec![(0, 1), (1, 1)]),
            ],
        );
        assert_eq!(
            remove_local_pair(&unequal, 1, 2),
            Err(ReduceError::UnequalGrades {
                positive: 1,
                negative: 2
            })
        );
        assert!(matches!(
            remove_local_pair(&full_triangle(), 0, 5),
            Err(ReduceError::ZeroPairCoefficient { .. })
        ));
    }

    #[test]
    fn modified_matches_on_examples() {
        for c in [merged_edge(), full_triangle()] {
            assert_eq!(
                modified_chunk_reduce(&c).unwrap(),
                chunk_reduce(&c, 1).unwrap().0
            );
        }
    }

    #[test]
    fn local_pivot_after_phase1_matches_pairs() {
        let mut c = full_triangle();
        let lr = phase1_local_reduction(&mut c, 1);
        for (pos, neg) in lr.labels.local_pairs() {
            assert_eq!(local_pivot(&c, neg), Some(pos));
        }
    }

    mod properties {
        use super::*;
        use crate::oracle::{check_equivalence, check_optimality};
        use crate::synth::random_complex;
        use proptest::prelude::*;

        fn field_of(z5: bool) -> u32 {
            if z5 {
                5
            } else {
                2
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn output_equivalent_and_optimal(seed in any::<u64>(), z5 in any::<bool>()) {
                let c = random_complex(seed, field_of(z5));
                let (r, stats) = chunk_reduce(&c, 1).unwrap();
                prop_assert!(validate(&r).ok());
                prop_assert_eq!(stats.additions_on_positive, 0);
                prop_assert!(check_equivalence(&c, &r, false).unwrap().ok());
                prop_assert!(check_optimality(&c, &r).unwrap().ok());
            }

            #[test]
            fn modified_agrees(seed in any::<u64>(), z5 in any::<bool>()) {
                let c = random_complex(seed, field_of(z5));
                prop_assert_eq!(modified_chunk_reduce(&c).unwrap(), chunk_reduce(&c, 1).unwrap().0);
            }

            #[test]
            fn idempotent(seed in any::<u64>(), z5 in any::<bool>()) {
                let c = random_complex(seed, field_of(z5));
                let (r, _) = chunk_reduce(&c, 1).unwrap();
                let (rr, stats) = chunk_reduce(&r, 1).unwrap();
                prop_assert_eq!(stats.column_additions(), 0);
                prop_assert_eq!(rr, r);
            }

            #[test]
            fn thread_count_irrelevant(seed in any::<u64>()) {
                let c = random_complex(seed, 5);
                let one = chunk_reduce(&c, 1).unwrap().0;
                prop_assert_eq!(chunk_reduce(&c, 3).unwrap().0, one);
            }

            #[test]
            fn elementary_moves_preserve_invariant(seed in any::<u64>(), a in 0usize..60, b in 0usize..60, l in 1u32..5) {
                let c = random_complex(seed, 5);
                if let Ok(d) = order_preserving_addition(&c, a % c.len(), b % c.len(), l) {
                    prop_assert!(validate(&d).ok());
                    prop_assert!(check_equivalence(&c, &d, false).unwrap().ok());
                }
                let pairs: Vec<(usize, usize)> = (0..c.len())
                    .filter_map(|q| local_pivot(&c, q).map(|p| (p, q)))
                    .collect();
                if !pairs.is_empty() {
                    let (p, q) = pairs[b % pairs.len()];
                    let d = remove_local_pair(&c, p, q).unwrap();
                    prop_assert!(validate(&d).ok());
                    prop_assert!(check_equivalence(&c, &d, false).unwrap().ok());
                }
            }
        }
    }
}
