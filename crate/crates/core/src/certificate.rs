use serde::{Deserialize, Serialize};

use crate::ground::GroundSet;
use crate::oracle::{QueryRecord, Role};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    Unweighted,
    /// Dependence witnesses must sit inside the output prefix below the
    /// witnessed element.
    WeightedPrefix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    /// Some clean query answered independent covers the output.
    pub covered: bool,
    /// Elements outside the output with no dependence witness.
    pub unwitnessed: Vec<usize>,
}

impl CertificateReport {
    pub fn valid(&self) -> bool {
        self.covered && self.unwitnessed.is_empty()
    }
}

/// Checks whether the clean queries of a transcript prove `output` to be a
/// basis (or, in prefix mode, an n-safe set). Dirty and intersection
/// records are ignored.
pub fn verify_certificate(
    records: &[QueryRecord],
    output: &ElementSet,
    g: &GroundSet,
    mode: CertificateMode,
) -> CertificateReport {
    let n = g.n();
    let mut covered = output.is_empty();
    let mut witnessed = ElementSet::empty(n);
    for r in records
        .iter()
        .filter(|r| r.role == Role::Clean && r.slot == 0)
    {
        let (Some(set), Some(independent)) = (&r.set, r.independence()) else {
            continue;
        };
        if independent {
            covered |= output.is_subset(set);
            continue;
        }
        let outside = set.difference(output);
        if outside.len() != 1 {
            continue;
        }
        let e = outside.iter().next().unwrap();
        let fits = match mode {
            CertificateMode::Unweighted => true,
            CertificateMode::WeightedPrefix => set.max_element() == Some(e),
        };
        if fits {
            witnessed.insert(e);
        }
    }
    let unwitnessed = output.union(&witnessed).complement().to_vec();
    CertificateReport {
        covered,
        unwitnessed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidSpec;
    use crate::oracle::OraclePair;

    #[test]
    fn single_basis_query_is_not_enough() {
        let m = MatroidSpec::uniform(4, 2);
        let pair = OraclePair::new(None, &m, &m).unwrap();
        let mut s = pair.session();
        let basis = ElementSet::from_indices(4, [0, 1]);
        s.clean(&basis);
        let report = verify_certificate(
            s.ledger().records(),
            &basis,
            pair.ground(),
            CertificateMode::Unweighted,
        );
        assert!(report.covered);
        assert_eq!(report.unwitnessed, vec![2, 3]);
        assert!(!report.valid());
    }

    #[test]
    fn prefix_mode_rejects_late_witness() {
        let m = MatroidSpec::uniform(3, 1);
        let pair = OraclePair::new(None, &m, &m).unwrap();
        let mut s = pair.session();
        let out = ElementSet::from_indices(3, [2]);
        s.clean(&out);
        s.clean(&ElementSet::from_indices(3, [0, 2]));
        s.clean(&ElementSet::from_indices(3, [1, 2]));
        let records = s.ledger().records();
        let g = pair.ground();
        assert!(verify_certificate(records, &out, g, CertificateMode::Unweighted).valid());
        let strict = verify_certificate(records, &out, g, CertificateMode::WeightedPrefix);
        assert_eq!(strict.unwitnessed, vec![0, 1]);
    }
}
