//! Explicitly enumerated finite groups.

use std::collections::VecDeque;
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Multiplication context for a family of group elements.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// A deduplicated element list with the identity at index 0.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup<E: Clone + Eq + Hash> {
    elements: Vec<E>,
    index: FxHashMap<E, u32>,
}

impl<E: Clone + Eq + Hash> EnumeratedGroup<E> {
    /// Wraps an explicit list. Duplicates are dropped; the identity is moved
    /// to the front. Closure is not checked here (see [`Self::is_closed`]).
    pub fn from_elements(identity: E, elements: impl IntoIterator<Item = E>) -> Self {
        let mut group = EnumeratedGroup {
            elements: Vec::new(),
            index: FxHashMap::default(),
        };
        group.insert(identity);
        for e in elements {
            group.insert(e);
        }
        group
    }

    fn insert(&mut self, e: E) -> bool {
        if self.index.contains_key(&e) {
            return false;
        }
        self.index.insert(e.clone(), self.elements.len() as u32);
        self.elements.push(e);
        true
    }

    /// Breadth-first closure of the identity under right multiplication by
    /// generators `0..num_generators`, where `step(x, j)` returns `x * g_j`.
    ///
    /// Fails with a size-guard error once more than `limit` elements appear.
    pub fn close_under(
        identity: E,
        num_generators: usize,
        limit: usize,
        step: impl Fn(&E, usize) -> E,
    ) -> Result<Self> {
        let mut group = EnumeratedGroup::from_elements(identity, []);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let x = group.elements[i].clone();
            for j in 0..num_generators {
                if group.insert(step(&x, j)) {
                    if group.elements.len() > limit {
                        return Err(Error::SizeGuard(format!(
                            "closure exceeded {limit} elements"
                        )));
                    }
                    queue.push_back(group.elements.len() - 1);
                }
            }
        }
        Ok(group)
    }

    pub fn generate<O: GroupOps<Elem = E>>(
        ops: &O,
        generators: &[E],
        limit: usize,
    ) -> Result<Self> {
        Self::close_under(ops.identity(), generators.len(), limit, |x, j| {
            ops.mul(x, &generators[j])
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    pub fn product_index<O: GroupOps<Elem = E>>(
        &self,
        ops: &O,
        i: usize,
        j: usize,
    ) -> Option<usize> {
        self.index_of(&ops.mul(&self.elements[i], &self.elements[j]))
    }

    pub fn inverse_index<O: GroupOps<Elem = E>>(&self, ops: &O, i: usize) -> Option<usize> {
        (0..self.len()).find(|&j| self.product_index(ops, i, j) == Some(0))
    }

    /// Exhaustive `|G|^2` closure check.
    pub fn is_closed<O: GroupOps<Elem = E>>(&self, ops: &O) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.index.contains_key(&ops.mul(a, b)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cyclic(u32);

    impl GroupOps for Cyclic {
        type Elem = u32;
        fn identity(&self) -> u32 {
            0
        }
        fn mul(&self, a: &u32, b: &u32) -> u32 {
            (a + b) % self.0
        }
    }

    #[test]
    fn closure_of_cyclic_group() {
        let ops = Cyclic(12);
        let g = EnumeratedGroup::generate(&ops, &[8], 100).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(*g.element(0), 0);
        assert!(g.is_closed(&ops));
        let full = EnumeratedGroup::generate(&ops, &[8, 3], 100).unwrap();
        assert_eq!(full.len(), 12);
        assert_eq!(
            full.inverse_index(&ops, full.index_of(&5).unwrap()),
            full.index_of(&7)
        );
    }

    #[test]
    fn size_guard_trips() {
        let ops = Cyclic(1000);
        let err = EnumeratedGroup::generate(&ops, &[1], 10).unwrap_err();
        assert!(matches!(err, Error::SizeGuard(_)));
    }

    #[test]
    fn from_elements_dedups_and_puts_identity_first() {
        let g = EnumeratedGroup::from_elements(0u32, [3, 1, 3, 0, 2]);
        assert_eq!(g.elements(), &[0, 3, 1, 2]);
        assert!(!g.is_closed(&Cyclic(4)) || g.len() == 4);
    }
}
