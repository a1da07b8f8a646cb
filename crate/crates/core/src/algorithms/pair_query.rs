use crate::oracle::Session;
use crate::set::ElementSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairQueryOutcome {
    pub basis: ElementSet,
    /// Set when the output is not a clean basis, i.e. the instance lies
    /// outside the family the algorithm is meant for.
    pub family_violation: bool,
}

/// Extends a clean-independent `b` by testing the outside elements two at a
/// time: one query when both fit, up to three otherwise.
pub fn pair_query_basis(b: &ElementSet, session: &mut Session<'_>) -> PairQueryOutcome {
    let mut basis = b.clone();
    let outside = b.complement().to_vec();
    let mut chunks = outside.chunks_exact(2);
    for pair in &mut chunks {
        let (e, f) = (pair[0], pair[1]);
        let both = basis.with(e).with(f);
        if session.clean(&both) {
            basis = both;
        } else if session.clean(&basis.with(e)) {
            basis.insert(e);
        } else if session.clean(&basis.with(f)) {
            basis.insert(f);
        }
    }
    if let [e] = chunks.remainder() {
        if session.clean(&basis.with(*e)) {
            basis.insert(*e);
        }
    }
    let pair = session.pair();
    let family_violation =
        !pair.clean().is_independent(&basis) || pair.clean().rank(&basis) != pair.clean_rank();
    PairQueryOutcome {
        basis,
        family_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidSpec;
    use crate::oracle::OraclePair;

    #[test]
    fn all_addable_pairs() {
        let clean = MatroidSpec::uniform(9, 9);
        let dirty = MatroidSpec::uniform(9, 2);
        let pair = OraclePair::new(None, &clean, &dirty).unwrap();
        let mut s = pair.session();
        let b = pair.dirty_basis().clone();
        let out = pair_query_basis(&b, &mut s);
        assert_eq!(out.basis.len(), 9);
        assert!(!out.family_violation);
        assert_eq!(s.ledger().clean_total(), 4);
    }

    #[test]
    fn flags_misuse() {
        let clean = MatroidSpec::uniform(4, 2);
        let dirty = MatroidSpec::uniform(4, 3);
        let pair = OraclePair::new(None, &clean, &dirty).unwrap();
        let mut s = pair.session();
        let b = pair.dirty_basis().clone();
        assert!(pair_query_basis(&b, &mut s).family_violation);
    }
}
