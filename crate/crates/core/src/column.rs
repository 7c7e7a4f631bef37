//! Columns of the boundary matrix.

use core::fmt;

use crate::chain::Chain;
use crate::field::{Coeff, FieldChar};
use crate::grade::Grade;

/// One generator of the complex together with its boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub index: usize,
    pub grade: Grade,
    pub dim: usize,
    pub boundary: Chain,
}

impl Column {
    pub fn new(index: usize, grade: Grade, dim: usize, boundary: Chain) -> Self {
        Column {
            index,
            grade,
            dim,
            boundary,
        }
    }

    /// Boundary entry of maximal index.
    pub fn pivot(&self) -> Option<(usize, Coeff)> {
        self.boundary.max()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub target: usize,
    pub source: usize,
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot add a {}-column to a {}-column",
            self.source, self.target
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DimensionMismatch {}

/// `target.boundary ← target.boundary + λ·source.boundary`.
///
/// Index, grade and dimension of the target are left alone.
pub fn add_scaled(
    target: &mut Column,
    source: &Column,
    lambda: Coeff,
    field: FieldChar,
) -> Result<(), DimensionMismatch> {
    if target.dim != source.dim {
        return Err(DimensionMismatch {
            target: target.dim,
            source: source.dim,
        });
    }
    target.boundary.add_scaled(&source.boundary, lambda, field);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(dim: usize, entries: &[(usize, Coeff)], f: FieldChar) -> Column {
        Column::new(
            9,
            Grade::new(0, 0),
            dim,
            Chain::from_entries(entries.iter().copied(), f),
        )
    }

    #[test]
    fn xor_over_z2() {
        let f = FieldChar::Z2;
        let mut t = col(1, &[(1, 1), (3, 1)], f);
        add_scaled(&mut t, &col(1, &[(3, 1), (4, 1)], f), 1, f).unwrap();
        assert_eq!(t.boundary.entries(), &[(1, 1), (4, 1)]);
        assert_eq!(t.index, 9);
    }

    #[test]
    fn cancels_mod_5() {
        let f = FieldChar::new(5).unwrap();
        let mut t = col(1, &[(1, 2)], f);
        add_scaled(&mut t, &col(1, &[(1, 1)], f), 3, f).unwrap();
        assert!(t.boundary.is_empty());
    }

    #[test]
    fn empty_source_is_identity() {
        let f = FieldChar::new(3).unwrap();
        let mut t = col(2, &[(0, 1), (2, 2)], f);
        let before = t.clone();
        add_scaled(&mut t, &col(2, &[], f), 2, f).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn dimension_mismatch() {
        let f = FieldChar::Z2;
        let mut t = col(2, &[], f);
        assert_eq!(
            add_scaled(&mut t, &col(1, &[], f), 1, f),
            Err(DimensionMismatch {
                target: 2,
                source: 1
            })
        );
    }

    #[test]
    fn pivot_cancellation_rule() {
        // λ = -coeff_target(pivot)/coeff_source(pivot) removes the pivot
        let f = FieldChar::new(7).unwrap();
        let mut t = col(1, &[(1, 3), (4, 5)], f);
        let s = col(1, &[(2, 6), (4, 2)], f);
        let lambda = f.cancel_factor(5, 2);
        add_scaled(&mut t, &s, lambda, f).unwrap();
        assert_eq!(t.boundary.coeff(4), 0);
        assert_eq!(t.pivot().map(|e| e.0), Some(2));
    }
}
