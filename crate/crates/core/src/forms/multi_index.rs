use std::fmt;

use crate::error::{Error, Result};

/// Strictly increasing list of coordinate positions, 0-based.
///
/// The JSON and display forms are 1-based, matching `e¹ ∧ e²` notation.
/// The derived ordering is lexicographic, which for indices of equal length
/// is the usual ordering of basis elements of `Λᵏ(ℝⁿ)*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let bounded = indices.last().is_none_or(|&i| i < dim);
        if !increasing || !bounded {
            return Err(Error::InvalidMultiIndex { indices, dim });
        }
        Ok(MultiIndex(indices))
    }

    /// Builds from 1-based positions.
    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidMultiIndex { indices: indices.to_vec(), dim });
        }
        Self::new(indices.iter().map(|i| i - 1).collect(), dim)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Sorted union with the sign of the merge permutation, or `None` when
    /// the two share an index.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                // b[j] jumps over the remaining elements of a
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            } else {
                return None;
            }
        }
        Some((MultiIndex(out), inversions % 2 == 1))
    }

    /// Removes the entry at `pos`.
    pub fn without_position(&self, pos: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    /// Complement in `{0, …, dim−1}`.
    pub fn complement(&self, dim: usize) -> MultiIndex {
        MultiIndex((0..dim).filter(|i| !self.contains(*i)).collect())
    }

    /// All `k`-subsets of `{0, …, dim−1}` in lexicographic order.
    pub fn combinations(dim: usize, k: usize) -> Combinations {
        Combinations { dim, current: if k <= dim { Some((0..k).collect()) } else { None } }
    }
}

/// Sorts an arbitrary index list, returning the sorted index and whether
/// the sorting permutation is odd. `None` when an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(MultiIndex, bool)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((MultiIndex(v), odd))
}

pub struct Combinations {
    dim: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.dim - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(MultiIndex(cur))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.one_based().iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count_and_order() {
        let all: Vec<_> = MultiIndex::combinations(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0].as_slice(), &[0, 1, 2]);
        assert_eq!(all[9].as_slice(), &[2, 3, 4]);
        assert_eq!(MultiIndex::combinations(3, 0).count(), 1);
        assert_eq!(MultiIndex::combinations(2, 3).count(), 0);
    }

    #[test]
    fn merge_sign() {
        let a = MultiIndex::new(vec![1], 4).unwrap();
        let b = MultiIndex::new(vec![0], 4).unwrap();
        let (m, odd) = a.merge(&b).unwrap();
        assert_eq!(m.as_slice(), &[0, 1]);
        assert!(odd);
        let c = MultiIndex::new(vec![0, 2], 4).unwrap();
        let d = MultiIndex::new(vec![1, 3], 4).unwrap();
        // (0,2,1,3) needs one transposition
        assert!(c.merge(&d).unwrap().1);
        assert!(c.merge(&c).is_none());
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(MultiIndex::new(vec![2, 1], 4).is_err());
        assert!(MultiIndex::new(vec![1, 4], 4).is_err());
        assert!(MultiIndex::from_one_based(&[0, 1], 4).is_err());
        assert!(MultiIndex::from_one_based(&[1, 4], 4).is_ok());
    }

    #[test]
    fn sort_with_sign_parity() {
        let (m, odd) = sort_with_sign(&[2, 0, 1]).unwrap();
        assert_eq!(m.as_slice(), &[0, 1, 2]);
        assert!(!odd);
        assert!(sort_with_sign(&[1, 1]).is_none());
    }
}
