use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::set::ElementSet;

pub type Weight = Ratio<i64>;

/// Element universe in canonical coordinates: canonical index `j` is the
/// element at rank `j` of the weight order, so `prefix(j)` on an
/// [`ElementSet`] is the weight-order prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    weights: Vec<Weight>,
    keys: Vec<i128>,
    original: Vec<usize>,
    position: Vec<usize>,
    unit: bool,
}

impl GroundSet {
    pub fn unit(n: usize) -> Self {
        Self::from_weights(vec![Weight::one(); n], None, true)
    }

    /// Sorts by non-increasing weight. Ties put `designated` elements first
    /// and then fall back to input position.
    pub fn canonical(weights: &[Weight], designated: Option<&[bool]>) -> Self {
        let unit = weights.iter().all(|w| w.is_one());
        Self::from_weights(weights.to_vec(), designated, unit)
    }

    fn from_weights(input: Vec<Weight>, designated: Option<&[bool]>, unit: bool) -> Self {
        let n = input.len();
        let mut order: Vec<usize> = (0..n).collect();
        let flag = |i: usize| designated.is_some_and(|d| d[i]);
        order.sort_by(|&a, &b| {
            input[b]
                .cmp(&input[a])
                .then_with(|| flag(b).cmp(&flag(a)))
                .then_with(|| a.cmp(&b))
        });
        let mut position = vec![0; n];
        for (j, &orig) in order.iter().enumerate() {
            position[orig] = j;
        }
        let weights: Vec<Weight> = order.iter().map(|&o| input[o]).collect();
        let lcm = weights
            .iter()
            .fold(1i128, |acc, w| acc.lcm(&(*w.denom() as i128)));
        let keys = weights
            .iter()
            .map(|w| *w.numer() as i128 * (lcm / *w.denom() as i128))
            .collect();
        GroundSet {
            weights,
            keys,
            original: order,
            position,
            unit,
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.weights[i]
    }

    /// Integer weight on a common scale; comparisons and sums are exact.
    pub fn key(&self, i: usize) -> i128 {
        self.keys[i]
    }

    /// Input id of canonical element `i`.
    pub fn original(&self, i: usize) -> usize {
        self.original[i]
    }

    /// Canonical index of input element `id`.
    pub fn canonical_index(&self, id: usize) -> usize {
        self.position[id]
    }

    pub fn order(&self) -> &[usize] {
        &self.original
    }

    pub fn set_weight(&self, s: &ElementSet) -> Weight {
        s.iter()
            .fold(Weight::zero(), |acc, i| acc + self.weights[i])
    }

    pub fn set_key(&self, s: &ElementSet) -> i128 {
        s.iter().map(|i| self.keys[i]).sum()
    }

    pub fn to_original(&self, s: &ElementSet) -> Vec<usize> {
        let mut ids: Vec<usize> = s.iter().map(|i| self.original[i]).collect();
        ids.sort_unstable();
        ids
    }

    pub fn from_original<I: IntoIterator<Item = usize>>(&self, ids: I) -> ElementSet {
        ElementSet::from_indices(self.n(), ids.into_iter().map(|id| self.position[id]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Vec<Weight> {
        v.iter().map(|&x| Weight::from_integer(x)).collect()
    }

    #[test]
    fn sorts_descending_with_designated_ties_first() {
        let weights = w(&[1, 3, 3, 2, 3]);
        let designated = [false, false, false, false, true];
        let g = GroundSet::canonical(&weights, Some(&designated));
        assert_eq!(g.order(), &[4, 1, 2, 3, 0]);
        for j in 1..g.n() {
            assert!(g.weight(j - 1) >= g.weight(j));
        }
        assert_eq!(g.canonical_index(3), 3);
    }

    #[test]
    fn rational_keys_are_exact() {
        let weights = vec![Weight::new(1, 3), Weight::new(1, 2), Weight::new(2, 6)];
        let g = GroundSet::canonical(&weights, None);
        assert_eq!(g.order(), &[1, 0, 2]);
        assert_eq!(g.key(1), g.key(2));
        let all = ElementSet::full(3);
        assert_eq!(g.set_weight(&all), Weight::new(7, 6));
    }

    #[test]
    fn rebuild_is_deterministic() {
        let weights = w(&[2, 2, 1, 2]);
        let d = [false, true, false, false];
        assert_eq!(
            GroundSet::canonical(&weights, Some(&d)),
            GroundSet::canonical(&weights, Some(&d))
        );
    }
}
