//! Permutations of `0..n` in lexicographic order.

use alloc::vec::Vec;

/// Advances `p` to the next permutation in lexicographic order. Returns
/// `false` (leaving `p` sorted descending) once `p` was the last one.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// All permutations of `0..n`, identity first.
pub fn permutations(n: usize) -> Permutations {
    Permutations { current: Some((0..n).collect()) }
}

pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = alloc::vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = alloc::vec![false; p.len()];
    p.iter().all(|&j| j < seen.len() && !core::mem::replace(&mut seen[j], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let all: Vec<_> = permutations(3).collect();
        assert_eq!(all, [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]);
        assert_eq!(permutations(5).count(), 120);
        assert_eq!(permutations(0).count(), 1);
        assert_eq!(permutations(1).count(), 1);
    }

    #[test]
    fn inverse_composes_to_identity() {
        for p in permutations(4) {
            let q = inverse(&p);
            assert!((0..4).all(|i| q[p[i]] == i));
        }
    }

    #[test]
    fn permutation_predicate() {
        assert!(is_permutation(&[2, 0, 1]));
        assert!(!is_permutation(&[0, 0, 1]));
        assert!(!is_permutation(&[0, 3, 1]));
    }
}
