//! The bifiltered chain complex as an ordered collection of columns.

use alloc::vec::Vec;
use core::ops::Range;

use crate::chain::Chain;
use crate::column::Column;
use crate::field::{Coeff, FieldChar};
use crate::grade::{Axes, Grade};

/// Boundary matrix of a bifiltered chain complex.
///
/// Columns are stored in index order. For a well-formed complex (see
/// [`crate::ingest::validate`]) the index order sorts grades lexicographically
/// and, inside a block of equal grade, dimensions ascending. Such a block is a
/// *chunk*; `chunk_starts` records where each one begins.
#[derive(Clone, Debug, PartialEq)]
pub struct BifilteredComplex {
    field: FieldChar,
    axes: Axes,
    columns: Vec<Column>,
    chunk_starts: Vec<usize>,
}

impl BifilteredComplex {
    /// Wraps columns as given. Chunk boundaries are recomputed; nothing else
    /// is checked.
    pub fn from_columns(field: FieldChar, axes: Axes, columns: Vec<Column>) -> Self {
        let chunk_starts = chunk_starts_of(&columns);
        BifilteredComplex {
            field,
            axes,
            columns,
            chunk_starts,
        }
    }

    /// Convenience constructor for integer grades: column `i` gets index `i`
    /// and the axes are `0..=max rank` on both sides.
    pub fn from_grades(
        field: FieldChar,
        gens: impl IntoIterator<Item = (Grade, usize, Vec<(usize, Coeff)>)>,
    ) -> Self {
        let columns: Vec<Column> = gens
            .into_iter()
            .enumerate()
            .map(|(i, (grade, dim, entries))| {
                Column::new(i, grade, dim, Chain::from_entries(entries, field))
            })
            .collect();
        let nx = columns.iter().map(|c| c.grade.x + 1).max().unwrap_or(0);
        let ny = columns.iter().map(|c| c.grade.y + 1).max().unwrap_or(0);
        Self::from_columns(field, Axes::integers(nx, ny), columns)
    }

    pub fn empty(field: FieldChar) -> Self {
        Self::from_columns(field, Axes::default(), Vec::new())
    }

    #[inline]
    pub fn field(&self) -> FieldChar {
        self.field
    }

    #[inline]
    pub fn axes(&self) -> &Axes {
        &self.axes
    }

    #[inline]
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    #[inline]
    pub fn column(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub(crate) fn columns_mut(&mut self) -> &mut [Column] {
        &mut self.columns
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn chunk_starts(&self) -> &[usize] {
        &self.chunk_starts
    }

    /// Index ranges of the chunks, in order.
    pub fn chunks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        let n = self.columns.len();
        self.chunk_starts.iter().enumerate().map(move |(k, &s)| {
            let e = self.chunk_starts.get(k + 1).copied().unwrap_or(n);
            s..e
        })
    }

    pub fn chunk_count(&self) -> usize {
        self.chunk_starts.len()
    }

    pub fn max_chunk_len(&self) -> usize {
        self.chunks().map(|r| r.len()).max().unwrap_or(0)
    }

    /// First index of the chunk containing `index`.
    pub fn chunk_start_of(&self, index: usize) -> usize {
        match self.chunk_starts.binary_search(&index) {
            Ok(k) => self.chunk_starts[k],
            Err(k) => self.chunk_starts[k - 1],
        }
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.columns.iter().map(|c| c.dim).max()
    }

    /// Number of generators per dimension, `[count_0, count_1, ...]`.
    pub fn dim_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for c in &self.columns {
            if counts.len() <= c.dim {
                counts.resize(c.dim + 1, 0);
            }
            counts[c.dim] += 1;
        }
        counts
    }

    /// Re-expresses every grade in a larger coordinate table. `xmap[r]` is
    /// the new rank of old x-rank `r`, likewise `ymap`. Both maps must be
    /// strictly increasing.
    pub fn rebased(&self, axes: Axes, xmap: &[u32], ymap: &[u32]) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.grade = Grade::new(xmap[c.grade.x as usize], ymap[c.grade.y as usize]);
                c
            })
            .collect();
        Self::from_columns(self.field, axes, columns)
    }
}

fn chunk_starts_of(columns: &[Column]) -> Vec<usize> {
    let mut starts = Vec::new();
    for (i, c) in columns.iter().enumerate() {
        if i == 0 || columns[i - 1].grade != c.grade {
            starts.push(i);
        }
    }
    starts
}

/// The local pivot of column `index`: the boundary entry of maximal index
/// whose grade equals the column's grade.
pub fn local_pivot(complex: &BifilteredComplex, index: usize) -> Option<usize> {
    let col = complex.column(index);
    col.boundary
        .entries()
        .iter()
        .rev()
        .map(|e| e.0)
        .find(|&l| complex.columns.get(l).is_some_and(|c| c.grade == col.grade))
}
