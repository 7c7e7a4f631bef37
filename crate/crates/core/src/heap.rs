//! Lazily merged column backed by a max-heap.
//!
//! Adding a column pushes its entries without looking at what is already
//! there. Entries with equal index are only combined when they reach the top
//! of the heap, so repeated additions stay cheap and cancellation is deferred
//! until the pivot is actually needed.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::chain::Chain;
use crate::field::{Coeff, FieldChar};

#[derive(Clone, Debug)]
pub struct HeapColumn {
    heap: BinaryHeap<(usize, Coeff)>,
    field: FieldChar,
    pushes_since_prune: usize,
    prune_at: usize,
}

impl HeapColumn {
    pub fn new(field: FieldChar) -> Self {
        HeapColumn {
            heap: BinaryHeap::new(),
            field,
            pushes_since_prune: 0,
            prune_at: 32,
        }
    }

    pub fn from_chain(chain: &Chain, field: FieldChar) -> Self {
        let mut col = HeapColumn::new(field);
        col.heap.extend(chain.entries().iter().copied());
        col.prune_at = 2 * chain.len() + 32;
        col
    }

    /// Removes and returns the entry of maximal index with a nonzero
    /// combined coefficient.
    pub fn pop_pivot(&mut self) -> Option<(usize, Coeff)> {
        while let Some((idx, mut c)) = self.heap.pop() {
            while let Some(&(next, d)) = self.heap.peek() {
                if next != idx {
                    break;
                }
                c = self.field.add(c, d);
                self.heap.pop();
            }
            if c != 0 {
                return Some((idx, c));
            }
        }
        None
    }

    /// The entry of maximal index with nonzero coefficient, without removing it.
    pub fn pivot(&mut self) -> Option<(usize, Coeff)> {
        let top = self.pop_pivot()?;
        self.heap.push(top);
        Some(top)
    }

    /// `self ← self + λ·entries`.
    pub fn add_scaled(&mut self, entries: &[(usize, Coeff)], lambda: Coeff) {
        if lambda == 0 {
            return;
        }
        let f = self.field;
        self.heap
            .extend(entries.iter().map(|&(i, c)| (i, f.mul(lambda, c))));
        self.pushes_since_prune += entries.len();
        if self.pushes_since_prune > self.prune_at {
            self.prune();
        }
    }

    /// Pushes a single entry.
    pub fn push(&mut self, index: usize, coeff: Coeff) {
        if coeff != 0 {
            self.heap.push((index, coeff));
            self.pushes_since_prune += 1;
        }
    }

    fn prune(&mut self) {
        let chain = self.take_chain();
        self.heap.extend(chain.entries().iter().copied());
        self.pushes_since_prune = 0;
        self.prune_at = 2 * chain.len() + 32;
    }

    fn take_chain(&mut self) -> Chain {
        let mut out: Vec<(usize, Coeff)> = Vec::with_capacity(self.heap.len());
        while let Some(e) = self.pop_pivot() {
            out.push(e);
        }
        out.reverse();
        Chain::from_sorted(out)
    }

    /// Canonical form of the accumulated column.
    pub fn into_chain(mut self) -> Chain {
        self.take_chain()
    }

    pub fn is_zero(&mut self) -> bool {
        self.pivot().is_none()
    }
}
