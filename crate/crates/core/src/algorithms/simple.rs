use super::{augment, prefix_of, smallest_dependent_prefix};
use crate::oracle::Session;
use crate::set::ElementSet;

/// Checks B_d once; keeps and extends it if independent, otherwise runs the
/// greedy from scratch. At most `n + 1` clean queries.
pub fn simple_basis(bd: &ElementSet, session: &mut Session<'_>) -> ElementSet {
    let n = session.n();
    if session.clean(bd) {
        let mut b = bd.clone();
        augment(session, &mut b, bd.complement().iter());
        b
    } else {
        let mut b = ElementSet::empty(n);
        augment(session, &mut b, 0..n);
        b
    }
}

/// Strips removal errors from B_d one binary search at a time, then
/// augments over `E \ B_d`.
pub fn error_dependent_basis(bd: &ElementSet, session: &mut Session<'_>) -> ElementSet {
    let n = session.n();
    let mut members = bd.to_vec();
    let mut lo: Option<usize> = None;
    while !members.is_empty() {
        let cur = ElementSet::from_indices(n, members.iter().copied());
        if session.clean(&cur) {
            break;
        }
        let p = smallest_dependent_prefix(lo, members.len() - 1, |p| {
            !session.clean(&prefix_of(n, &members, p))
        });
        members.remove(p);
        // everything before the removed position stays a known independent prefix
        lo = p.checked_sub(1);
    }
    let mut b = ElementSet::from_indices(n, members);
    augment(session, &mut b, bd.complement().iter());
    b
}
