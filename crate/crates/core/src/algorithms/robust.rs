use super::{augment, smallest_dependent_prefix, RobustParams};
use crate::oracle::Session;
use crate::set::ElementSet;

/// Removal search in segments: a short linear scan, a gated full check, a
/// longer linear scan, then binary search. Positions below are 0-based, so
/// position `p` is the pseudocode's index `p + 1`.
pub fn robust_basis(
    bd: &ElementSet,
    session: &mut Session<'_>,
    params: RobustParams,
) -> ElementSet {
    let n = session.n();
    let k = params.k.get();
    let long_reach = k * params.lg_rd;
    let mut b = ElementSet::empty(n);
    let mut s: Vec<usize> = bd.to_vec();

    while !s.is_empty() {
        let len = s.len();
        let base = b.clone();
        let with_prefix = |p: usize| {
            let mut q = base.clone();
            for &e in &s[..=p] {
                q.insert(e);
            }
            q
        };

        let mut found = None;
        let mut last_independent = None;
        for p in 0..len.min(k - 1) {
            if !session.clean(&with_prefix(p)) {
                found = Some(p);
                break;
            }
            last_independent = Some(p);
        }
        if found.is_none() {
            if len < k || session.clean(&with_prefix(len - 1)) {
                b = with_prefix(len - 1);
                s.clear();
                continue;
            }
            for p in (k - 1)..long_reach.min(len) {
                if !session.clean(&with_prefix(p)) {
                    found = Some(p);
                    break;
                }
                last_independent = Some(p);
            }
        }
        let i = found.unwrap_or_else(|| {
            smallest_dependent_prefix(last_independent, len - 1, |p| {
                !session.clean(&with_prefix(p))
            })
        });
        if i > 0 {
            b = with_prefix(i - 1);
        }
        s.drain(..=i);
    }
    augment(session, &mut b, bd.complement().iter());
    b
}
