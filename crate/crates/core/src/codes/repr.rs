use rayon::prelude::*;

use super::perm::{is_bijection, support_size};
use super::{Permutation, Symbol};
use crate::error::{Error, Result};

/// A permutation representation of an enumerated group, stored as one image
/// table per element index. Element 0 is the group identity.
///
/// Actions are on the right: `perm(g * h) = perm(g)` followed by `perm(h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    degree: usize,
    images: Vec<Symbol>,
}

impl Representation {
    /// Fills the image table of element `i` with `fill(i, out)`; every table
    /// is checked to be a bijection.
    pub fn build<F>(group_order: usize, degree: usize, fill: F) -> Result<Self>
    where
        F: Fn(usize, &mut [Symbol]) + Sync,
    {
        if degree == 0 || degree > Symbol::MAX as usize + 1 {
            return Err(Error::Usage(format!("unsupported domain size {degree}")));
        }
        let mut images = vec![0 as Symbol; group_order * degree];
        images
            .par_chunks_mut(degree)
            .enumerate()
            .for_each(|(i, out)| fill(i, out));
        if let Some(bad) = images.par_chunks(degree).position_any(|c| !is_bijection(c)) {
            return Err(Error::consistency(
                "representation",
                format!("element {bad} does not act as a permutation"),
            ));
        }
        Ok(Representation { degree, images })
    }

    pub fn from_permutations(perms: &[Permutation]) -> Result<Self> {
        let degree = perms.first().map_or(0, Permutation::degree);
        if perms.iter().any(|p| p.degree() != degree) {
            return Err(Error::Usage("permutations of mixed degree".into()));
        }
        Self::build(perms.len(), degree, |i, out| {
            out.copy_from_slice(perms[i].images())
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.images.len() / self.degree
    }

    pub fn images(&self, element: usize) -> &[Symbol] {
        &self.images[element * self.degree..(element + 1) * self.degree]
    }

    pub fn permutation(&self, element: usize) -> Permutation {
        Permutation::new(self.images(element).to_vec()).expect("validated at build")
    }

    pub fn support_size(&self, element: usize) -> usize {
        support_size(self.images(element))
    }

    pub fn is_trivial_at(&self, element: usize) -> bool {
        self.support_size(element) == 0
    }

    /// Smallest support over non-identity elements; `None` for the trivial
    /// group.
    pub fn minimal_degree(&self) -> Option<usize> {
        (1..self.group_order())
            .into_par_iter()
            .map(|i| self.support_size(i))
            .min()
    }

    pub fn is_faithful(&self) -> bool {
        (1..self.group_order())
            .into_par_iter()
            .all(|i| !self.is_trivial_at(i))
    }

    /// Homomorphism check over the given element pairs; `product(i, j)` is
    /// the index of `g_i * g_j`.
    pub fn respects_products<P>(&self, pairs: &[(usize, usize)], product: P) -> bool
    where
        P: Fn(usize, usize) -> Option<usize> + Sync,
    {
        if !self.is_trivial_at(0) {
            return false;
        }
        pairs.par_iter().all(|&(i, j)| {
            let Some(k) = product(i, j) else {
                return false;
            };
            let (gi, gj, gk) = (self.images(i), self.images(j), self.images(k));
            gi.iter().zip(gk).all(|(&a, &c)| gj[a as usize] == c)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Z/3 acting on 3 points by rotation.
    fn rotations() -> Representation {
        Representation::build(3, 3, |i, out| {
            for (j, o) in out.iter_mut().enumerate() {
                *o = ((j + i) % 3) as Symbol;
            }
        })
        .unwrap()
    }

    #[test]
    fn rotation_representation() {
        let rep = rotations();
        assert!(rep.is_trivial_at(0));
        assert_eq!(rep.minimal_degree(), Some(3));
        assert!(rep.is_faithful());
        let pairs: Vec<_> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
        assert!(rep.respects_products(&pairs, |i, j| Some((i + j) % 3)));
        assert!(!rep.respects_products(&pairs, |i, _| Some(i)));
    }

    #[test]
    fn rejects_non_permutations() {
        let err = Representation::build(2, 3, |_, out| out.fill(0)).unwrap_err();
        assert!(matches!(err, Error::Consistency { .. }));
    }
}
