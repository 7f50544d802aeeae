//! Interchangeable minimum-distance algorithms that see only the code.

use std::collections::{BTreeMap, VecDeque};

use rustc_hash::FxHashMap;

use super::perm::{is_bijection, support_size};
use super::{min_distance_pairwise, Code, Symbol};
use crate::error::{Error, Result};

pub trait DistanceStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn min_distance(&self, code: &Code) -> Result<usize>;
}

/// Exact minimum over all pairs of codewords.
#[derive(Debug, Default, Clone, Copy)]
pub struct Pairwise;

impl DistanceStrategy for Pairwise {
    fn name(&self) -> &'static str {
        "pairwise"
    }

    fn description(&self) -> &'static str {
        "exact minimum over all unordered codeword pairs"
    }

    fn min_distance(&self, code: &Code) -> Result<usize> {
        Ok(min_distance_pairwise(code))
    }
}

/// Exact minimum for codes whose words, read as blocks of permutations of
/// the alphabet, form a group under blockwise composition.
///
/// The group property is established from the words alone: a generating set
/// is picked greedily and the breadth-first closure under right
/// multiplication must reach every word without leaving the code. Then
/// `d(a, b) = |supp(a b^-1)|`, so the minimum distance is the least support
/// of a non-identity word. Codes without this structure are rejected.
#[derive(Debug, Default, Clone, Copy)]
pub struct BlockClosure;

impl BlockClosure {
    fn compose(q: usize, a: &[Symbol], b: &[Symbol], out: &mut Vec<Symbol>) {
        out.clear();
        for (block_a, block_b) in a.chunks(q).zip(b.chunks(q)) {
            out.extend(block_a.iter().map(|&j| block_b[j as usize]));
        }
    }
}

impl DistanceStrategy for BlockClosure {
    fn name(&self) -> &'static str {
        "closure"
    }

    fn description(&self) -> &'static str {
        "verifies the code is a group of blockwise permutations, then scans supports"
    }

    fn min_distance(&self, code: &Code) -> Result<usize> {
        let q = code.alphabet();
        let m = code.length();
        let not_group =
            |why: String| Error::Domain(format!("code is not a permutation group: {why}"));
        if !m.is_multiple_of(q) {
            return Err(not_group(format!("length {m} is not a multiple of {q}")));
        }
        if let Some(i) = code.words().position(|w| !w.chunks(q).all(is_bijection)) {
            return Err(not_group(format!(
                "word {} is not a block of permutations",
                i + 1
            )));
        }
        let n = code.len();
        let index: FxHashMap<&[Symbol], usize> =
            code.words().enumerate().map(|(i, w)| (w, i)).collect();
        let identity: Vec<Symbol> = (0..m).map(|j| (j % q) as Symbol).collect();
        let Some(&id) = index.get(identity.as_slice()) else {
            return Err(not_group("identity word is missing".into()));
        };

        let mut reached = vec![false; n];
        reached[id] = true;
        let mut order = vec![id];
        let mut gens: Vec<usize> = Vec::new();
        let mut scratch = Vec::with_capacity(m);
        let mut next_unreached = 0;
        while order.len() < n {
            while reached[next_unreached] {
                next_unreached += 1;
            }
            gens.push(next_unreached);
            // Re-expand everything reached so far under the enlarged set.
            let mut queue: VecDeque<usize> = order.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    Self::compose(q, code.word(x), code.word(g), &mut scratch);
                    let Some(&y) = index.get(scratch.as_slice()) else {
                        return Err(not_group(format!(
                            "product of words {} and {} is not a codeword",
                            x + 1,
                            g + 1
                        )));
                    };
                    if !reached[y] {
                        reached[y] = true;
                        order.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok((0..n)
            .filter(|&i| i != id)
            .map(|i| code.word(i).chunks(q).map(support_size).sum::<usize>())
            .min()
            .unwrap_or(0))
    }
}

/// Distance strategies by name.
pub struct DistanceRegistry {
    entries: BTreeMap<&'static str, Box<dyn DistanceStrategy>>,
}

impl DistanceRegistry {
    pub fn empty() -> Self {
        DistanceRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Pairwise));
        reg.register(Box::new(BlockClosure));
        reg
    }

    pub fn register(&mut self, strategy: Box<dyn DistanceStrategy>) {
        self.entries.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<&dyn DistanceStrategy> {
        self.entries.get(name).map(|s| s.as_ref()).ok_or_else(|| {
            Error::Usage(format!(
                "unknown distance method `{name}` (available: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for DistanceRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_code() -> Code {
        let words = [
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        Code::from_flat(3, 3, words.iter().flatten().copied().collect()).unwrap()
    }

    #[test]
    fn strategies_agree_on_s3() {
        let reg = DistanceRegistry::with_builtin();
        let code = s3_code();
        for name in reg.names() {
            assert_eq!(
                reg.get(name).unwrap().min_distance(&code).unwrap(),
                2,
                "{name}"
            );
        }
        assert!(reg.get("bogus").is_err());
    }

    #[test]
    fn closure_rejects_non_groups() {
        // The cyclic subgroup minus one element.
        let code = Code::from_flat(3, 3, vec![0, 1, 2, 1, 2, 0]).unwrap();
        assert!(BlockClosure.min_distance(&code).is_err());
        let no_identity = Code::from_flat(3, 3, vec![1, 2, 0, 2, 0, 1]).unwrap();
        assert!(BlockClosure.min_distance(&no_identity).is_err());
        let not_perm = Code::from_flat(3, 3, vec![0, 1, 2, 0, 0, 1]).unwrap();
        assert!(BlockClosure.min_distance(&not_perm).is_err());
    }

    #[test]
    fn closure_on_twisted_blocks() {
        // Z/3 acting on two blocks: identity and inverse rotation.
        let mut flat = Vec::new();
        for s in 0..3u16 {
            flat.extend((0..3).map(|j| (j + s) % 3));
            flat.extend((0..3).map(|j| (j + 3 - s) % 3));
        }
        let code = Code::from_flat(6, 3, flat).unwrap();
        assert_eq!(BlockClosure.min_distance(&code).unwrap(), 6);
        assert_eq!(Pairwise.min_distance(&code).unwrap(), 6);
    }
}
