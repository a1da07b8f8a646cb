//! Exhaustive error measures. Test-time oracles only: nothing under
//! `algorithms` or `intersection` depends on this module.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::error::{check_guard, Error, Result, INTERSECTION_GUARD};
use crate::ground::GroundSet;
use crate::matroid::{enumerate_max_weight_bases, MatroidKind, MatroidSpec};
use crate::oracle::OraclePair;
use crate::set::ElementSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorReport {
    pub eta_a: usize,
    pub eta_r: usize,
    pub witness_basis: ElementSet,
    /// `(S, |A(S)|, |R(S)|)` for every dirty reference basis `S`.
    pub per_basis: Vec<(ElementSet, usize, usize)>,
}

/// Smallest `A ⊆ E \ s` and `R ⊆ s` such that `s ∪ A` contains and `s \ R`
/// is contained in some maximum-weight clean basis. Ties go to the
/// lexicographically smallest basis.
pub fn modification_sets(
    s: &ElementSet,
    clean: &MatroidSpec,
    g: &GroundSet,
) -> Result<(ElementSet, ElementSet)> {
    let bases = enumerate_max_weight_bases(clean, g)?;
    Ok(modification_from(s, &bases))
}

fn modification_from(s: &ElementSet, bases: &[ElementSet]) -> (ElementSet, ElementSet) {
    // bases arrive in lexicographic order, so min_by_key keeps the first
    let add = bases
        .iter()
        .map(|b| b.difference(s))
        .min_by_key(|a| a.len())
        .expect("a matroid has at least one basis");
    let remove = bases
        .iter()
        .map(|b| s.difference(b))
        .min_by_key(|r| r.len())
        .expect("a matroid has at least one basis");
    (add, remove)
}

/// The dirty sets the error is measured over: maximum-weight bases, or for
/// an unweighted explicit system every inclusion-maximal set.
pub fn dirty_reference_sets(pair: &OraclePair) -> Result<Vec<ElementSet>> {
    let dirty = pair.dirty();
    match dirty.kind() {
        MatroidKind::PredictedBasis { .. } => Ok(vec![pair.dirty_basis().clone()]),
        MatroidKind::Explicit { .. } if pair.ground().is_unit() => {
            Ok(dirty.explicit_sets().expect("explicit").to_vec())
        }
        _ => enumerate_max_weight_bases(dirty, pair.ground()),
    }
}

/// `(|A(s)|, |R(s)|)` without enumeration: among maximum-weight clean
/// bases the greedy with `s` first on ties maximises `|B ∩ s|`.
pub fn basis_errors(pair: &OraclePair, s: &ElementSet) -> (usize, usize) {
    let clean = pair.clean();
    let g = pair.ground();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&e| (Reverse(g.key(e)), !s.contains(e), e));
    let mut b = ElementSet::empty(g.n());
    for e in order {
        b.insert(e);
        if !clean.is_independent(&b) {
            b.remove(e);
        }
    }
    let overlap = b.intersection_len(s);
    (b.len() - overlap, s.len() - overlap)
}

fn report(per_basis: Vec<(ElementSet, usize, usize)>) -> ErrorReport {
    let eta_a = per_basis.iter().map(|p| p.1).max().unwrap_or(0);
    let eta_r = per_basis.iter().map(|p| p.2).max().unwrap_or(0);
    let witness_basis = per_basis
        .iter()
        .find(|p| p.1 == eta_a)
        .map(|p| p.0.clone())
        .unwrap_or_else(|| ElementSet::empty(0));
    ErrorReport {
        eta_a,
        eta_r,
        witness_basis,
        per_basis,
    }
}

/// η_A and η_R. Unit weights with a matroid dirty oracle use the rank
/// shortcut per basis; everything else enumerates clean bases.
pub fn compute_eta(pair: &OraclePair) -> Result<ErrorReport> {
    let refs = dirty_reference_sets(pair)?;
    if pair.ground().is_unit() && pair.dirty().is_matroid() {
        let r = pair.clean_rank();
        let per = refs
            .into_iter()
            .map(|s| {
                let kept = pair.clean().rank(&s);
                let (a, rm) = (r - kept, s.len() - kept);
                (s, a, rm)
            })
            .collect();
        Ok(report(per))
    } else {
        compute_eta_enumerated_from(pair, refs)
    }
}

/// η_A and η_R by full enumeration on both sides.
pub fn compute_eta_enumerated(pair: &OraclePair) -> Result<ErrorReport> {
    let refs = dirty_reference_sets(pair)?;
    compute_eta_enumerated_from(pair, refs)
}

fn compute_eta_enumerated_from(pair: &OraclePair, refs: Vec<ElementSet>) -> Result<ErrorReport> {
    let bases = enumerate_max_weight_bases(pair.clean(), pair.ground())?;
    let per = refs
        .into_iter()
        .map(|s| {
            let (a, r) = modification_from(&s, &bases);
            let (a, r) = (a.len(), r.len());
            (s, a, r)
        })
        .collect();
    Ok(report(per))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionErrorReport {
    pub eta_1: usize,
    pub eta_2: usize,
    /// Largest common dirty-independent set.
    pub s_d_star: usize,
    pub eta_r: usize,
    /// Largest common clean-independent set.
    pub optimum: usize,
}

/// Subset scan over all `2^n` sets. Fails with `SupersetViolation` when a
/// clean-independent set is dirty-dependent.
pub fn compute_intersection_errors(
    dirty1: &MatroidSpec,
    dirty2: &MatroidSpec,
    clean1: &MatroidSpec,
    clean2: &MatroidSpec,
) -> Result<IntersectionErrorReport> {
    scan(dirty1, dirty2, clean1, clean2, true)
}

/// Same scan without the superset precondition.
pub fn intersection_errors_unchecked(
    dirty1: &MatroidSpec,
    dirty2: &MatroidSpec,
    clean1: &MatroidSpec,
    clean2: &MatroidSpec,
) -> Result<IntersectionErrorReport> {
    scan(dirty1, dirty2, clean1, clean2, false)
}

fn scan(
    dirty1: &MatroidSpec,
    dirty2: &MatroidSpec,
    clean1: &MatroidSpec,
    clean2: &MatroidSpec,
    strict: bool,
) -> Result<IntersectionErrorReport> {
    let n = clean1.n();
    check_guard(n, INTERSECTION_GUARD)?;
    let total = 1usize << n;
    // best[m] = largest common clean-independent subset of m
    let mut best = vec![0u8; total];
    let mut dirty_common = Vec::new();
    let (mut eta_1, mut eta_2) = (0, 0);
    for mask in 0..total {
        let s = ElementSet::from_mask(n, mask as u64);
        let (d1, d2) = (dirty1.is_independent(&s), dirty2.is_independent(&s));
        let (c1, c2) = (clean1.is_independent(&s), clean2.is_independent(&s));
        for (slot, clean_ok, dirty_ok) in [(1u8, c1, d1), (2, c2, d2)] {
            if strict && clean_ok && !dirty_ok {
                return Err(Error::SupersetViolation {
                    slot,
                    set: format!("{:?}", s),
                });
            }
        }
        eta_1 += (d1 && !c1) as usize;
        eta_2 += (d2 && !c2) as usize;
        best[mask] = if c1 && c2 {
            s.len() as u8
        } else {
            s.iter().map(|e| best[mask & !(1 << e)]).max().unwrap_or(0)
        };
        if d1 && d2 {
            dirty_common.push(mask);
        }
    }
    let s_d_star = dirty_common
        .iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0);
    let eta_r = dirty_common
        .iter()
        .filter(|m| m.count_ones() as usize == s_d_star)
        .map(|&m| s_d_star - best[m] as usize)
        .max()
        .unwrap_or(0);
    Ok(IntersectionErrorReport {
        eta_1,
        eta_2,
        s_d_star,
        eta_r,
        optimum: best[total - 1] as usize,
    })
}
