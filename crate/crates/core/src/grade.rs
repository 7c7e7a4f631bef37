//! Grades in the plane and the coordinate tables behind them.
//!
//! Input coordinates are compressed to integer ranks once, at ingest. All
//! later comparisons are exact integer comparisons; the original decimal
//! strings are kept in an [`Axes`] table so output can be written back in the
//! caller's units.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A point of the plane, as a pair of coordinate ranks.
///
/// The derived `Ord` is lexicographic (x first), which is a linear extension
/// of the product order given by [`Grade::leq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Grade {
    pub x: u32,
    pub y: u32,
}

impl Grade {
    #[inline]
    pub const fn new(x: u32, y: u32) -> Self {
        Grade { x, y }
    }

    /// Product order.
    #[inline]
    pub fn leq(self, other: Grade) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Strictly below in the product order.
    #[inline]
    pub fn lt(self, other: Grade) -> bool {
        self.leq(other) && self != other
    }

    /// Least upper bound (coordinate-wise maximum).
    #[inline]
    pub fn lub(self, other: Grade) -> Grade {
        Grade {
            x: self.x.max(other.x),
            y: self.y.max(other.y),
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn grade_leq(p: Grade, q: Grade) -> bool {
    p.leq(q)
}

pub fn grade_lub(p: Grade, q: Grade) -> Grade {
    p.lub(q)
}

/// One input coordinate: its numeric value and the text it was read from.
#[derive(Clone, Debug)]
pub struct Coord {
    value: f64,
    raw: String,
}

impl Coord {
    /// Parses a decimal literal. Non-finite values are rejected.
    pub fn parse(s: &str) -> Option<Coord> {
        let value: f64 = s.parse().ok()?;
        if !value.is_finite() {
            return None;
        }
        Some(Coord {
            // folds -0.0 into 0.0
            value: value + 0.0,
            raw: s.to_string(),
        })
    }

    pub fn from_int(v: i64) -> Coord {
        Coord {
            value: v as f64,
            raw: v.to_string(),
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn cmp_value(&self, other: &Coord) -> Ordering {
        self.value.total_cmp(&other.value)
    }

    /// The larger of two coordinates by value; ties keep `self`.
    pub fn max_by_value<'a>(&'a self, other: &'a Coord) -> &'a Coord {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

/// Sorted table of the distinct coordinate values along one axis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Axis {
    coords: Vec<Coord>,
}

impl Axis {
    /// Builds the table from arbitrary coordinates. Values that compare equal
    /// collapse to the first one seen.
    pub fn compress<'a>(values: impl IntoIterator<Item = &'a Coord>) -> Axis {
        let mut coords: Vec<Coord> = values.into_iter().cloned().collect();
        // stable sort keeps first occurrence first among equal values
        coords.sort_by(|a, b| a.cmp_value(b));
        coords.dedup_by(|b, a| a.value == b.value);
        Axis { coords }
    }

    /// Axis with the integer coordinates `0..n`.
    pub fn integers(n: u32) -> Axis {
        Axis {
            coords: (0..n as i64).map(Coord::from_int).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, rank: u32) -> Option<&Coord> {
        self.coords.get(rank as usize)
    }

    /// Rank of a value, if present.
    pub fn rank_of(&self, c: &Coord) -> Option<u32> {
        self.coords
            .binary_search_by(|probe| probe.cmp_value(c))
            .ok()
            .map(|r| r as u32)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// Merged table of two axes plus the rank maps from each into it.
    pub fn union(a: &Axis, b: &Axis) -> (Axis, Vec<u32>, Vec<u32>) {
        let merged = Axis::compress(a.coords.iter().chain(b.coords.iter()));
        let map = |src: &Axis| {
            src.coords
                .iter()
                .map(|c| merged.rank_of(c).expect("value present in union"))
                .collect::<Vec<u32>>()
        };
        let (ma, mb) = (map(a), map(b));
        (merged, ma, mb)
    }
}

/// Coordinate tables for both parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Axes {
    pub x: Axis,
    pub y: Axis,
}

impl Axes {
    pub fn integers(nx: u32, ny: u32) -> Axes {
        Axes {
            x: Axis::integers(nx),
            y: Axis::integers(ny),
        }
    }
}
