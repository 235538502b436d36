//! Multi-indices over `N_0^d`.

use serde::{Deserialize, Serialize};

/// Element of `N_0^d` indexing tensor Hermite polynomials and derivative
/// orders. The order `|nu|` is the sum of the entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    /// Zero multi-index in dimension `d`.
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// Unit multi-index `e_i` (0-based axis) in dimension `d`.
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut entries = vec![0; d];
        entries[axis] = 1;
        MultiIndex(entries)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// `|nu| = sum(nu_i)`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn entry(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// Componentwise `self <= other`; gates annihilation rules.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if other.le_componentwise(self) {
            Some(MultiIndex(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// Raise entry `axis` by one.
    pub fn raised(&self, axis: usize) -> MultiIndex {
        let mut entries = self.0.clone();
        entries[axis] += 1;
        MultiIndex(entries)
    }

    /// Lower entry `axis` by one; `None` if it is already zero.
    pub fn lowered(&self, axis: usize) -> Option<MultiIndex> {
        if self.0[axis] == 0 {
            return None;
        }
        let mut entries = self.0.clone();
        entries[axis] -= 1;
        Some(MultiIndex(entries))
    }

    /// `nu! = prod(nu_i!)` as a float; exact for the orders used here.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| (1..=n).map(|k| k as f64).product::<f64>())
            .product()
    }

    /// All multi-indices of dimension `d` with order at most `max_order`,
    /// in lexicographic order.
    pub fn all_up_to_order(d: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; d];
        fn rec(current: &mut Vec<u32>, axis: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
            if axis == current.len() {
                out.push(MultiIndex(current.clone()));
                return;
            }
            for v in 0..=remaining {
                current[axis] = v;
                rec(current, axis + 1, remaining - v, out);
            }
            current[axis] = 0;
        }
        rec(&mut current, 0, max_order, &mut out);
        out.sort();
        out
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_entry_sum() {
        let nu = MultiIndex::new(vec![2, 0, 3]);
        assert_eq!(nu.order(), 5);
        assert_eq!(nu.dimension(), 3);
    }

    #[test]
    fn componentwise_comparison_gates_subtraction() {
        let nu = MultiIndex::new(vec![2, 1]);
        let beta = MultiIndex::new(vec![1, 1]);
        let gamma = MultiIndex::new(vec![0, 2]);
        assert!(beta.le_componentwise(&nu));
        assert!(!gamma.le_componentwise(&nu));
        assert_eq!(nu.minus(&beta), Some(MultiIndex::new(vec![1, 0])));
        assert_eq!(nu.minus(&gamma), None);
    }

    #[test]
    fn factorial_matches_products() {
        assert_eq!(MultiIndex::new(vec![0]).factorial(), 1.0);
        assert_eq!(MultiIndex::new(vec![3, 2]).factorial(), 12.0);
        assert_eq!(MultiIndex::new(vec![4]).factorial(), 24.0);
    }

    #[test]
    fn enumeration_counts_simplex_lattice_points() {
        // #{nu in N_0^d : |nu| <= k} = C(k + d, d)
        let all = MultiIndex::all_up_to_order(3, 6);
        assert_eq!(all.len(), 84);
        assert!(all.iter().all(|nu| nu.order() <= 6));
    }
}
