use super::Symbol;
use crate::error::{Error, Result};

/// A permutation of `0..q`; `images[j]` is the image of point `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<Symbol>,
}

impl Permutation {
    pub fn identity(q: usize) -> Self {
        Permutation {
            images: (0..q as Symbol).collect(),
        }
    }

    pub fn new(images: Vec<Symbol>) -> Result<Self> {
        if !is_bijection(&images) {
            return Err(Error::Usage("image list is not a bijection".into()));
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Symbol] {
        &self.images
    }

    pub fn image(&self, j: usize) -> usize {
        self.images[j] as usize
    }

    pub fn support_size(&self) -> usize {
        support_size(&self.images)
    }

    pub fn fixed_count(&self) -> usize {
        self.degree() - self.support_size()
    }

    pub fn is_identity(&self) -> bool {
        self.support_size() == 0
    }

    /// `self` followed by `other` (right action: `j -> other(self(j))`).
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::Usage(
                "composing permutations of different degree".into(),
            ));
        }
        Ok(Permutation {
            images: self
                .images
                .iter()
                .map(|&j| other.images[j as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (j, &img) in self.images.iter().enumerate() {
            inv[img as usize] = j as Symbol;
        }
        Permutation { images: inv }
    }
}

pub(crate) fn support_size(images: &[Symbol]) -> usize {
    images
        .iter()
        .enumerate()
        .filter(|&(j, &img)| img as usize != j)
        .count()
}

pub(crate) fn is_bijection(images: &[Symbol]) -> bool {
    let mut seen = vec![false; images.len()];
    for &img in images {
        match seen.get_mut(img as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_examples() {
        assert_eq!(Permutation::identity(5).support_size(), 0);
        let t = Permutation::new(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(t.support_size(), 2);
        assert_eq!(t.support_size() + t.fixed_count(), 4);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let c = Permutation::new(vec![1, 2, 0]).unwrap();
        let c2 = c.then(&c).unwrap();
        assert_eq!(c2.images(), &[2, 0, 1]);
        assert!(c.then(&c.inverse()).unwrap().is_identity());
        assert!(c.then(&Permutation::identity(4)).is_err());
    }
}
