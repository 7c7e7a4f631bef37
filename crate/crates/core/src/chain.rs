//! Sparse chains in canonical form.

use alloc::vec::Vec;

use crate::field::{Coeff, FieldChar};

/// A linear combination of generators, stored as `(index, coefficient)`
/// pairs sorted by strictly increasing index with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    entries: Vec<(usize, Coeff)>,
}

impl Chain {
    pub const fn new() -> Self {
        Chain {
            entries: Vec::new(),
        }
    }

    /// Wraps entries that are already canonical. Only checked in debug builds.
    pub fn from_sorted(entries: Vec<(usize, Coeff)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        Chain { entries }
    }

    /// Canonicalizes arbitrary entries: sorts, sums duplicates, reduces
    /// coefficients mod p and drops zeros.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (usize, Coeff)>,
        field: FieldChar,
    ) -> Self {
        let mut v: Vec<(usize, Coeff)> = entries
            .into_iter()
            .map(|(i, c)| (i, c % field.characteristic()))
            .collect();
        v.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Coeff)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|e| e.1 != 0);
        Chain { entries: out }
    }

    #[inline]
    pub fn entries(&self) -> &[(usize, Coeff)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Coeff)> {
        self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry of maximal index.
    #[inline]
    pub fn max(&self) -> Option<(usize, Coeff)> {
        self.entries.last().copied()
    }

    pub fn coeff(&self, index: usize) -> Coeff {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// `self ← self + λ·other`.
    pub fn add_scaled(&mut self, other: &Chain, lambda: Coeff, field: FieldChar) {
        let lambda = lambda % field.characteristic();
        if lambda == 0 || other.is_empty() {
            return;
        }
        let a = &self.entries;
        let b = &other.entries;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].0 < b[j].0 {
                out.push(a[i]);
                i += 1;
            } else if a[i].0 > b[j].0 {
                out.push((b[j].0, field.mul(lambda, b[j].1)));
                j += 1;
            } else {
                let c = field.add(a[i].1, field.mul(lambda, b[j].1));
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(k, c)| (k, field.mul(lambda, c))));
        self.entries = out;
    }

    /// Sets the coefficient at `index` to zero.
    pub fn remove(&mut self, index: usize) -> Coeff {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries.remove(pos).1,
            Err(_) => 0,
        }
    }

    /// Rewrites every index through `map`. The map must be strictly
    /// increasing on the support.
    pub fn remap(&mut self, map: impl Fn(usize) -> usize) {
        for e in &mut self.entries {
            e.0 = map(e.0);
        }
        debug_assert!(self.entries.windows(2).all(|w| w[0].0 < w[1].0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32) -> FieldChar {
        FieldChar::new(p).unwrap()
    }

    #[test]
    fn canonicalizes() {
        let c = Chain::from_entries([(3, 1), (1, 4), (3, 4), (2, 0)], z(5));
        assert_eq!(c.entries(), &[(1, 4)]);
    }

    #[test]
    fn add_scaled_merges() {
        let mut a = Chain::from_entries([(1, 1), (3, 1)], z(2));
        a.add_scaled(&Chain::from_entries([(3, 1), (4, 1)], z(2)), 1, z(2));
        assert_eq!(a.entries(), &[(1, 1), (4, 1)]);
    }

    #[test]
    fn coeff_and_remove() {
        let mut a = Chain::from_entries([(1, 2), (5, 3)], z(7));
        assert_eq!(a.coeff(5), 3);
        assert_eq!(a.coeff(4), 0);
        assert_eq!(a.remove(1), 2);
        assert_eq!(a.entries(), &[(5, 3)]);
        assert_eq!(a.remove(9), 0);
    }
}
