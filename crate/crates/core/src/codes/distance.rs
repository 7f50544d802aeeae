use rayon::prelude::*;

use super::{Code, Symbol, TwistedSpec};
use crate::error::{Error, Result};

/// Number of positions in which two words differ.
pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "hamming distance of words of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(raw_distance(a, b))
}

#[inline]
pub(crate) fn raw_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Minimum over all unordered pairs of distinct codewords; 0 when the code
/// has at most one word.
pub fn min_distance_pairwise(code: &Code) -> usize {
    let n = code.len();
    if n < 2 {
        return 0;
    }
    let m = code.length();
    (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let a = code.word(i);
            let mut best = m;
            for j in i + 1..n {
                best = best.min(raw_distance(a, code.word(j)));
            }
            best
        })
        .min()
        .unwrap_or(0)
}

/// `sum_rho |supp(rho(t))|` for every element index `t`.
pub fn support_sums(spec: &TwistedSpec<'_>) -> Vec<usize> {
    (0..spec.group_order())
        .into_par_iter()
        .map(|t| spec.reps().iter().map(|rep| rep.support_size(t)).sum())
        .collect()
}

/// Order of the joint kernel `K`: elements acting trivially under every
/// representation of the spec (the identity included).
pub fn joint_kernel_size(spec: &TwistedSpec<'_>) -> usize {
    (0..spec.group_order())
        .into_par_iter()
        .filter(|&t| spec.reps().iter().all(|rep| rep.is_trivial_at(t)))
        .count()
}

fn require_trivial_kernel(spec: &TwistedSpec<'_>) -> Result<()> {
    let k = joint_kernel_size(spec);
    if k > 1 {
        return Err(Error::Domain(format!(
            "joint kernel of the representations is nontrivial (order {k})"
        )));
    }
    Ok(())
}

/// Identity-anchored minimum distance: the least support sum over
/// non-identity elements. 0 for the trivial group.
pub fn min_distance_by_support(spec: &TwistedSpec<'_>) -> Result<usize> {
    require_trivial_kernel(spec)?;
    Ok((1..spec.group_order())
        .into_par_iter()
        .map(|t| spec.reps().iter().map(|rep| rep.support_size(t)).sum())
        .min()
        .unwrap_or(0))
}

/// `min_rho r * mindeg(rho(T))`, the minimum distance of the best
/// repetition code over the spec's representations.
pub fn repetition_lower_bound(spec: &TwistedSpec<'_>) -> Result<usize> {
    require_trivial_kernel(spec)?;
    let r = spec.r();
    Ok(spec
        .reps()
        .iter()
        .map(|rep| r * rep.minimal_degree().unwrap_or(0))
        .min()
        .unwrap_or(0))
}

/// Histogram of distances from `anchor` to every codeword (itself included).
pub fn distance_distribution(code: &Code, anchor: usize) -> Vec<usize> {
    let a = code.word(anchor);
    code.par_words()
        .fold(
            || vec![0usize; code.length() + 1],
            |mut h, w| {
                h[raw_distance(a, w)] += 1;
                h
            },
        )
        .reduce(
            || vec![0usize; code.length() + 1],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        )
}

/// True iff every listed anchor sees the same distance distribution.
pub fn check_distance_invariance_at(code: &Code, anchors: &[usize]) -> bool {
    let Some((&first, rest)) = anchors.split_first() else {
        return true;
    };
    let reference = distance_distribution(code, first);
    rest.iter()
        .all(|&a| distance_distribution(code, a) == reference)
}

/// Exhaustive distance-invariance check, `O(|C|^2 m)`.
pub fn check_distance_invariance(code: &Code) -> bool {
    let all: Vec<usize> = (0..code.len()).collect();
    check_distance_invariance_at(code, &all)
}

/// `|C| * |K| = |T|`.
pub fn check_code_size(spec: &TwistedSpec<'_>, code: &Code) -> bool {
    code.len() * joint_kernel_size(spec) == spec.group_order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{Permutation, Representation};

    fn symmetric_group_3() -> Representation {
        let perms: Vec<Permutation> = [
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ]
        .iter()
        .map(|p| Permutation::new(p.to_vec()).unwrap())
        .collect();
        Representation::from_permutations(&perms).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&[0, 1, 2], &[0, 1, 2]).unwrap(), 0);
        assert_eq!(hamming_distance(&[0, 1, 2], &[0, 2, 1]).unwrap(), 2);
        assert!(matches!(
            hamming_distance(&[0], &[0, 1]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn single_word_code_has_distance_zero() {
        let code = Code::from_flat(3, 3, vec![0, 1, 2]).unwrap();
        assert_eq!(min_distance_pairwise(&code), 0);
        assert!(check_distance_invariance(&code));
    }

    #[test]
    fn two_words_are_distance_invariant() {
        let code = Code::from_flat(2, 3, vec![0, 1, 0, 2]).unwrap();
        assert!(check_distance_invariance(&code));
        assert_eq!(min_distance_pairwise(&code), 1);
    }

    #[test]
    fn support_scan_matches_pairwise_on_s3() {
        let rep = symmetric_group_3();
        let spec = TwistedSpec::new(vec![&rep]).unwrap();
        let group = crate::group::EnumeratedGroup::from_elements(0usize, 0..6);
        let code = crate::codes::build_code(&group, &rep).unwrap();
        assert_eq!(min_distance_by_support(&spec).unwrap(), 2);
        assert_eq!(min_distance_pairwise(&code), 2);
        assert_eq!(repetition_lower_bound(&spec).unwrap(), 2);
        assert!(check_code_size(&spec, &code));
        let twice = TwistedSpec::repetition(&rep, 2).unwrap();
        let rep_code = crate::codes::build_twisted_code(&group, &twice).unwrap();
        assert_eq!(min_distance_pairwise(&rep_code), 4);
        assert_eq!(min_distance_by_support(&twice).unwrap(), 4);
        assert_eq!(rep_code.letter_multiplicity(), Some(2));
    }

    #[test]
    fn nontrivial_kernel_is_reported() {
        // Sign-like action of S3 on two points.
        let perms: Vec<Permutation> = [0usize, 1, 1, 1, 0, 0]
            .iter()
            .map(|&odd| Permutation::new(if odd == 1 { vec![1, 0] } else { vec![0, 1] }).unwrap())
            .collect();
        let rep = Representation::from_permutations(&perms).unwrap();
        let spec = TwistedSpec::new(vec![&rep]).unwrap();
        assert_eq!(joint_kernel_size(&spec), 3);
        assert!(matches!(
            min_distance_by_support(&spec),
            Err(Error::Domain(_))
        ));
        let group = crate::group::EnumeratedGroup::from_elements(0usize, 0..6);
        let code = crate::codes::build_code(&group, &rep).unwrap();
        assert_eq!(code.len(), 2);
        assert!(check_code_size(&spec, &code));
    }
}
