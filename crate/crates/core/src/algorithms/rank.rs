use super::{lg, smallest_dependent_prefix};
use crate::oracle::{Role, Session};
use crate::set::ElementSet;

/// Basis from clean rank queries. Two calls fix the removal count
/// `|B_d| − r(B_d)` and the addition count `r(E) − r(B_d)`; each phase then
/// picks binary or linear search by which is cheaper for its count.
pub fn rank_oracle_basis(bd: &ElementSet, session: &mut Session<'_>) -> ElementSet {
    let n = session.n();
    let r_d = bd.len();
    let rank_bd = session.rank(Role::Clean, bd);
    let rank_e = session.rank(Role::Clean, &ElementSet::full(n));
    let d_r = r_d - rank_bd;
    let d_a = rank_e - rank_bd;

    let members = bd.to_vec();
    let mut removed = ElementSet::empty(n);
    if d_r > 0 {
        let rank_of = |session: &mut Session<'_>, kept: &ElementSet, p: usize| {
            session.rank(Role::Clean, &kept.prefix(members[p]))
        };
        if d_r * lg(r_d) <= r_d - 1 {
            let mut lo = None;
            for _ in 0..d_r {
                let kept = bd.difference(&removed);
                let positions = kept.to_vec();
                let p = smallest_dependent_prefix(lo, positions.len() - 1, |p| {
                    let prefix = kept.prefix(positions[p]);
                    session.rank(Role::Clean, &prefix) < prefix.len()
                });
                removed.insert(positions[p]);
                lo = p.checked_sub(1);
            }
        } else {
            // r(B_d ∩ prefix) grows by one exactly at kept elements
            let mut prev = 0;
            for p in 0..r_d {
                if removed.len() == d_r {
                    break;
                }
                let rank = if p == r_d - 1 {
                    rank_bd
                } else {
                    rank_of(session, bd, p)
                };
                if rank == prev {
                    removed.insert(members[p]);
                }
                prev = rank;
            }
        }
    }

    let mut basis = bd.difference(&removed);
    let outside = bd.complement().to_vec();
    if d_a > 0 {
        let m = outside.len();
        let gain = |session: &mut Session<'_>, p: usize| {
            let mut q = basis.clone();
            q.extend_from(&outside[..=p]);
            session.rank(Role::Clean, &q) - rank_bd
        };
        let mut picked = Vec::with_capacity(d_a);
        if d_a * lg(m) <= m - 1 {
            let mut lo = None;
            for t in 1..=d_a {
                let p = smallest_dependent_prefix(lo, m - 1, |p| gain(session, p) >= t);
                picked.push(outside[p]);
                lo = Some(p);
            }
        } else {
            let mut prev = 0;
            for p in 0..m {
                if picked.len() == d_a {
                    break;
                }
                let g = if p == m - 1 { d_a } else { gain(session, p) };
                if g > prev {
                    picked.push(outside[p]);
                }
                prev = g;
            }
        }
        for e in picked {
            basis.insert(e);
        }
    }
    basis
}

trait ExtendFrom {
    fn extend_from(&mut self, items: &[usize]);
}

impl ExtendFrom for ElementSet {
    fn extend_from(&mut self, items: &[usize]) {
        for &e in items {
            self.insert(e);
        }
    }
}
