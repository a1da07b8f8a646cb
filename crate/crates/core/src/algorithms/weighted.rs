use super::{smallest_dependent_prefix, RobustParams};
use crate::oracle::Session;
use crate::set::ElementSet;

/// Output of the weighted algorithms: `(B_d \ removed) ∪ added`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modification {
    pub basis: ElementSet,
    pub added: ElementSet,
    pub removed: ElementSet,
    /// Elements in the order they entered `added` / `removed`.
    pub add_order: Vec<usize>,
    pub remove_order: Vec<usize>,
}

struct State {
    cur: ElementSet,
    added: ElementSet,
    removed: ElementSet,
    add_order: Vec<usize>,
    remove_order: Vec<usize>,
}

impl State {
    fn new(bd: &ElementSet) -> Self {
        let n = bd.universe();
        State {
            cur: bd.clone(),
            added: ElementSet::empty(n),
            removed: ElementSet::empty(n),
            add_order: Vec::new(),
            remove_order: Vec::new(),
        }
    }

    fn add(&mut self, e: usize) {
        self.cur.insert(e);
        self.added.insert(e);
        self.add_order.push(e);
    }

    fn remove(&mut self, e: usize) {
        self.cur.remove(e);
        self.removed.insert(e);
        self.remove_order.push(e);
    }

    /// Binary search for the smallest dependent prefix of the (dependent)
    /// current set, given that the prefix through `independent_through` is
    /// independent. Removes and returns the element found.
    fn remove_smallest_circuit_end(
        &mut self,
        session: &mut Session<'_>,
        independent_through: Option<usize>,
    ) -> usize {
        let members = self.cur.to_vec();
        let lo = independent_through
            .map(|e| members.partition_point(|&m| m <= e))
            .and_then(|c| c.checked_sub(1));
        let cur = &self.cur;
        let p = smallest_dependent_prefix(lo, members.len() - 1, |p| {
            !session.clean(&cur.prefix(members[p]))
        });
        let e = members[p];
        self.remove(e);
        e
    }

    fn finish(self) -> Modification {
        Modification {
            basis: self.cur,
            added: self.added,
            removed: self.removed,
            add_order: self.add_order,
            remove_order: self.remove_order,
        }
    }
}

/// Maximum-weight basis by minimal modification of B_d. Canonical order
/// must put B_d first among equal weights.
pub fn weighted_basis(bd: &ElementSet, session: &mut Session<'_>) -> Modification {
    let n = session.n();
    let mut st = State::new(bd);
    let mut known_independent: Option<usize> = None;
    while !session.clean(&st.cur) {
        let e = st.remove_smallest_circuit_end(session, known_independent);
        known_independent = st.cur.prefix_below(e).max_element();
    }
    for l in 0..n {
        if bd.contains(l) {
            continue;
        }
        if session.clean(&st.cur.prefix_below(l).with(l)) {
            st.add(l);
            if !session.clean(&st.cur) {
                st.remove_smallest_circuit_end(session, Some(l));
            }
        }
    }
    st.finish()
}

/// Robustified weighted variant. `q` counts linear removal probes since the
/// last reset and `ls` says whether linear search is active.
pub fn robust_weighted_basis(
    bd: &ElementSet,
    session: &mut Session<'_>,
    params: RobustParams,
) -> Modification {
    let n = session.n();
    let k = params.k.get();
    let long_reach = k * params.lg_rd;
    let d_max = bd.max_element();
    let mut st = State::new(bd);
    let mut q = 0usize;
    let mut ls = true;
    // Whether the current solution is known to be dependent.
    let mut known_dependent = false;

    for l in 0..n {
        if !bd.contains(l) {
            if session.clean(&st.cur.prefix_below(l).with(l)) {
                st.add(l);
                ls = true;
            }
            continue;
        }
        if st.removed.contains(l) || !ls {
            continue;
        }
        // With k = 1 the full check due at q = k - 1 = 0 is taken before
        // the linear probe.
        if k == 1 && q == 0 && Some(l) != d_max {
            if session.clean(&st.cur) {
                ls = false;
                continue;
            }
            known_dependent = true;
        }
        q += 1;
        if !session.clean(&st.cur.prefix(l)) {
            st.remove(l);
            q = 0;
            known_dependent = false;
        }
        let stop = Some(l) == d_max
            || (k > 1 && q == k - 1 && {
                let independent = session.clean(&st.cur);
                known_dependent = !independent;
                independent
            });
        if stop {
            q = 0;
            ls = false;
        } else if q == long_reach {
            if !known_dependent && session.clean(&st.cur) {
                q = 0;
                ls = false;
                continue;
            }
            let through = st.cur.prefix(l).max_element();
            st.remove_smallest_circuit_end(session, through);
            q = 0;
            known_dependent = false;
        }
    }
    st.finish()
}
