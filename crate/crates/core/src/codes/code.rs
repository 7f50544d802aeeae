use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::{Representation, Symbol};
use crate::error::{Error, Result};
use crate::group::EnumeratedGroup;

/// A word over the letters `0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    symbols: Vec<Symbol>,
}

impl Codeword {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Codeword { symbols }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Passive form of `rep(element)`: entry `j` is the image of point `j`.
    pub fn from_element(element: usize, rep: &Representation) -> Self {
        Codeword::new(rep.images(element).to_vec())
    }
}

/// A deduplicated set of equal-length codewords over `q` letters, stored
/// contiguously in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    length: usize,
    alphabet: usize,
    words: Vec<Symbol>,
}

impl Code {
    /// Builds a code from concatenated words, dropping repeats.
    pub fn from_flat(length: usize, alphabet: usize, flat: Vec<Symbol>) -> Result<Self> {
        if length == 0 {
            return Err(Error::Usage("codeword length must be positive".into()));
        }
        if !flat.len().is_multiple_of(length) {
            return Err(Error::Usage(
                "flat buffer is not a whole number of words".into(),
            ));
        }
        if let Some(&bad) = flat.iter().find(|&&s| s as usize >= alphabet) {
            return Err(Error::Usage(format!(
                "letter {} outside alphabet of size {alphabet}",
                bad as usize + 1
            )));
        }
        let mut seen = FxHashSet::default();
        let mut keep = Vec::with_capacity(flat.len() / length);
        for (i, w) in flat.chunks(length).enumerate() {
            if seen.insert(w) {
                keep.push(i);
            }
        }
        let words = if keep.len() * length == flat.len() {
            flat
        } else {
            keep.iter()
                .flat_map(|&i| flat[i * length..(i + 1) * length].iter().copied())
                .collect()
        };
        Ok(Code {
            length,
            alphabet,
            words,
        })
    }

    pub fn from_words(length: usize, alphabet: usize, words: &[Codeword]) -> Result<Self> {
        if words.iter().any(|w| w.len() != length) {
            return Err(Error::Usage("codewords of mixed length".into()));
        }
        let flat = words
            .iter()
            .flat_map(|w| w.symbols.iter().copied())
            .collect();
        Self::from_flat(length, alphabet, flat)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len() / self.length
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[Symbol] {
        &self.words[i * self.length..(i + 1) * self.length]
    }

    pub fn words(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.words.chunks(self.length)
    }

    pub fn par_words(&self) -> rayon::slice::Chunks<'_, Symbol> {
        self.words.par_chunks(self.length)
    }

    pub fn codeword(&self, i: usize) -> Codeword {
        Codeword::new(self.word(i).to_vec())
    }

    /// The common number of occurrences of every letter in every codeword,
    /// if the code is a frequency permutation array.
    pub fn letter_multiplicity(&self) -> Option<usize> {
        if !self.length.is_multiple_of(self.alphabet) {
            return None;
        }
        let r = self.length / self.alphabet;
        let ok = self.par_words().all(|w| {
            let mut counts = vec![0usize; self.alphabet];
            for &s in w {
                counts[s as usize] += 1;
            }
            counts.iter().all(|&c| c == r)
        });
        ok.then_some(r)
    }
}

/// An ordered list of representations of one group on one domain size.
/// Repeats are allowed.
#[derive(Debug, Clone)]
pub struct TwistedSpec<'a> {
    reps: Vec<&'a Representation>,
}

impl<'a> TwistedSpec<'a> {
    pub fn new(reps: Vec<&'a Representation>) -> Result<Self> {
        let first = reps.first().ok_or_else(|| {
            Error::Usage("a twisted code needs at least one representation".into())
        })?;
        if reps.iter().any(|r| r.degree() != first.degree()) {
            return Err(Error::Usage(
                "representations act on domains of different size".into(),
            ));
        }
        if reps.iter().any(|r| r.group_order() != first.group_order()) {
            return Err(Error::Usage(
                "representations of groups of different order".into(),
            ));
        }
        Ok(TwistedSpec { reps })
    }

    pub fn repetition(rep: &'a Representation, r: usize) -> Result<Self> {
        Self::new(vec![rep; r])
    }

    pub fn reps(&self) -> &[&'a Representation] {
        &self.reps
    }

    pub fn r(&self) -> usize {
        self.reps.len()
    }

    pub fn degree(&self) -> usize {
        self.reps[0].degree()
    }

    pub fn group_order(&self) -> usize {
        self.reps[0].group_order()
    }

    pub fn length(&self) -> usize {
        self.r() * self.degree()
    }
}

fn check_order<E: Clone + Eq + Hash>(group: &EnumeratedGroup<E>, order: usize) -> Result<()> {
    if group.len() != order {
        return Err(Error::Usage(format!(
            "representation covers {order} elements, group has {}",
            group.len()
        )));
    }
    Ok(())
}

/// `C(T, rho)`: one passive-form codeword per group element.
pub fn build_code<E: Clone + Eq + Hash>(
    group: &EnumeratedGroup<E>,
    rep: &Representation,
) -> Result<Code> {
    check_order(group, rep.group_order())?;
    let flat = (0..group.len())
        .flat_map(|t| rep.images(t).iter().copied())
        .collect();
    Code::from_flat(rep.degree(), rep.degree(), flat)
}

/// `C(T, I)`: codeword of `t` is the concatenation of its passive forms
/// under each representation in order.
pub fn build_twisted_code<E: Clone + Eq + Hash>(
    group: &EnumeratedGroup<E>,
    spec: &TwistedSpec<'_>,
) -> Result<Code> {
    check_order(group, spec.group_order())?;
    let length = spec.length();
    let q = spec.degree();
    let mut flat = vec![0 as Symbol; group.len() * length];
    flat.par_chunks_mut(length)
        .enumerate()
        .for_each(|(t, out)| {
            for (block, rep) in out.chunks_mut(q).zip(spec.reps()) {
                block.copy_from_slice(rep.images(t));
            }
        });
    Code::from_flat(length, q, flat)
}
