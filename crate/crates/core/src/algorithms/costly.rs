use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{dirty_basis, lg, simple_basis, smallest_dependent_prefix};
use crate::oracle::{Role, Session};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Clean-only removals starting from E.
    A,
    /// Dirty greedy followed by the simple algorithm.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostlyOutcome {
    pub basis: ElementSet,
    pub strategy: Strategy,
}

/// `p(n − r)⌈log2 n⌉ + p`.
pub fn cost_a(n: usize, r: usize, p: Ratio<i64>) -> Ratio<i64> {
    p * ((n - r) * lg(n)) as i64 + p
}

/// `n + p(n − r + 1)`.
pub fn cost_b(n: usize, r: usize, p: Ratio<i64>) -> Ratio<i64> {
    Ratio::from_integer(n as i64) + p * (n - r + 1) as i64
}

fn remove_one(session: &mut Session<'_>, cur: &mut ElementSet) {
    let n = session.n();
    // search over all canonical positions, not just members
    let snapshot = cur.clone();
    let i = smallest_dependent_prefix(None, n - 1, |i| !session.clean(&snapshot.prefix(i)));
    cur.remove(i);
}

/// Strategy A without knowing r: check E, and while the current set is
/// dependent remove the end of its smallest dependent prefix.
pub fn strategy_a(session: &mut Session<'_>) -> ElementSet {
    let mut cur = ElementSet::full(session.n());
    while !session.clean(&cur) {
        remove_one(session, &mut cur);
    }
    cur
}

/// Strategy A when r is known: exactly `n − r` binary searches over the
/// `n` canonical positions and one closing independence check.
pub fn strategy_a_known_rank(session: &mut Session<'_>, r: usize) -> ElementSet {
    let n = session.n();
    let mut cur = ElementSet::full(n);
    for _ in r..n {
        remove_one(session, &mut cur);
    }
    let ok = session.clean(&cur);
    debug_assert!(ok, "known rank was wrong");
    cur
}

pub fn strategy_b(session: &mut Session<'_>) -> ElementSet {
    let bd = dirty_basis(session);
    simple_basis(&bd, session)
}

/// Spends one clean rank call on r, then runs whichever strategy has the
/// smaller closed-form cost (B on ties). Cost p comes from the ledger.
pub fn costly_selector(session: &mut Session<'_>) -> CostlyOutcome {
    let n = session.n();
    let p = session.ledger().cost_p();
    let r = session.rank(Role::Clean, &ElementSet::full(n));
    if cost_a(n, r, p) < cost_b(n, r, p) {
        CostlyOutcome {
            basis: strategy_a_known_rank(session, r),
            strategy: Strategy::A,
        }
    } else {
        CostlyOutcome {
            basis: strategy_b(session),
            strategy: Strategy::B,
        }
    }
}
