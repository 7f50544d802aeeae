use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// An ordered point set with index lookup.
#[derive(Debug, Clone)]
pub struct IndexedDomain<L: Clone + Eq + Hash> {
    points: Vec<L>,
    index: FxHashMap<L, usize>,
}

impl<L: Clone + Eq + Hash> IndexedDomain<L> {
    pub fn new(points: Vec<L>) -> Result<Self> {
        if points.len() > super::Symbol::MAX as usize + 1 {
            return Err(Error::SizeGuard(format!(
                "domain of {} points",
                points.len()
            )));
        }
        let mut index = FxHashMap::default();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::Usage(format!("duplicate point at position {i}")));
            }
        }
        Ok(IndexedDomain { points, index })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &L {
        &self.points[i]
    }

    pub fn points(&self) -> &[L] {
        &self.points
    }

    pub fn index_of(&self, p: &L) -> Option<usize> {
        self.index.get(p).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_inverts_position() {
        let d = IndexedDomain::new(vec!["a", "b", "c"]).unwrap();
        for (i, p) in d.points().iter().enumerate() {
            assert_eq!(d.index_of(p), Some(i));
        }
        assert_eq!(d.index_of(&"z"), None);
        assert!(IndexedDomain::new(vec![1, 2, 1]).is_err());
    }
}
