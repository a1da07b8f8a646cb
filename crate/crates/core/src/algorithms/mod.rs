//! Two-oracle basis algorithms. Every function here issues queries through
//! a [`Session`] and never looks at error measures.

mod costly;
mod pair_query;
mod rank;
mod robust;
mod search;
mod simple;
mod weighted;

use std::num::NonZeroUsize;

use serde::{Deserialize, Serialize};

use crate::oracle::{Role, Session};
use crate::set::ElementSet;

pub use costly::{
    cost_a, cost_b, costly_selector, strategy_a, strategy_a_known_rank, strategy_b, CostlyOutcome,
    Strategy,
};
pub use pair_query::{pair_query_basis, PairQueryOutcome};
pub use rank::rank_oracle_basis;
pub use robust::robust_basis;
pub use search::smallest_dependent_prefix;
pub use simple::{error_dependent_basis, simple_basis};
pub use weighted::{robust_weighted_basis, weighted_basis, Modification};

/// `⌈log2 x⌉`, with 0 for `x <= 1`.
pub fn lg(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustParams {
    pub k: NonZeroUsize,
    pub lg_rd: usize,
}

impl RobustParams {
    pub fn new(k: usize, r_d: usize) -> Self {
        RobustParams {
            k: NonZeroUsize::new(k).expect("k must be at least 1"),
            lg_rd: lg(r_d),
        }
    }

    /// `max{1, ⌈log2 n⌉ / 2}`.
    pub fn default_k(n: usize) -> usize {
        (lg(n) / 2).max(1)
    }
}

/// Greedy over the canonical order: exactly `n` queries to `role`.
pub fn greedy_max_weight_basis(session: &mut Session<'_>, role: Role) -> ElementSet {
    let n = session.n();
    let mut b = ElementSet::empty(n);
    for e in 0..n {
        let candidate = b.with(e);
        if session.independent(role, &candidate) {
            b = candidate;
        }
    }
    b
}

/// B_d from dirty queries only.
pub fn dirty_basis(session: &mut Session<'_>) -> ElementSet {
    greedy_max_weight_basis(session, Role::Dirty)
}

/// Adds each element of `candidates`, in order, whose addition keeps `b`
/// clean-independent.
pub(crate) fn augment(
    session: &mut Session<'_>,
    b: &mut ElementSet,
    candidates: impl Iterator<Item = usize>,
) {
    for e in candidates {
        let candidate = b.with(e);
        if session.clean(&candidate) {
            *b = candidate;
        }
    }
}

/// `{members[0], ..., members[p]}`.
pub(crate) fn prefix_of(n: usize, members: &[usize], p: usize) -> ElementSet {
    ElementSet::from_indices(n, members[..=p].iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lg_convention() {
        let got: Vec<usize> = (0..10).map(lg).collect();
        assert_eq!(got, vec![0, 0, 1, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(lg(1 << 20), 20);
        assert_eq!(lg((1 << 20) + 1), 21);
    }

    #[test]
    fn default_k() {
        assert_eq!(RobustParams::default_k(2), 1);
        assert_eq!(RobustParams::default_k(16), 2);
        assert_eq!(RobustParams::default_k(255), 4);
    }
}
