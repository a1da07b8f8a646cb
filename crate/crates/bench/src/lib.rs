//! Instance builders and a single dispatch point for the criterion benches.
//! Timing covers the algorithm alone; error enumeration and certificate
//! checks stay out of the measured loop.

use matoracle::algorithms::{
    costly_selector, dirty_basis, error_dependent_basis, greedy_max_weight_basis,
    rank_oracle_basis, robust_basis, robust_weighted_basis, simple_basis, weighted_basis,
    RobustParams,
};
use matoracle::harness::{generate, Algorithm, Family, Instance, InstanceSpec, RandomClean};
use matoracle::intersection::{dirty_intersection, warm_start, IntersectionPair};
use matoracle::{OraclePair, Role, Weight};

pub fn basis_pair(n: usize, seed: u64, clean: RandomClean, weighted: bool) -> OraclePair {
    match generate(&InstanceSpec::family(
        n,
        seed,
        Family::Random { clean, weighted },
    ))
    .expect("random family")
    {
        Instance::Basis { pair, .. } => pair,
        Instance::Intersection { .. } => unreachable!("random family is a basis instance"),
    }
}

pub fn family_pair(n: usize, seed: u64, family: Family) -> OraclePair {
    match generate(&InstanceSpec::family(n, seed, family)).expect("family instance") {
        Instance::Basis { pair, .. } => pair,
        Instance::Intersection { .. } => panic!("not a basis family"),
    }
}

pub fn intersection_pair(n: usize, seed: u64) -> IntersectionPair {
    match generate(&InstanceSpec::family(
        n,
        seed,
        Family::PartitionPair { superset: true },
    ))
    .expect("partition pair")
    {
        Instance::Intersection { pair } => pair,
        Instance::Basis { .. } => unreachable!("partition_pair is an intersection instance"),
    }
}

/// Runs `alg` once on a fresh session and returns its clean query count.
pub fn run_basis(pair: &OraclePair, alg: Algorithm, k: usize) -> u64 {
    let mut s = pair.session();
    if alg == Algorithm::Costly {
        s = s.with_cost(Weight::from_integer(2));
    }
    match alg {
        Algorithm::Greedy => {
            greedy_max_weight_basis(&mut s, Role::Clean);
        }
        Algorithm::Costly => {
            costly_selector(&mut s);
        }
        _ => {
            let bd = dirty_basis(&mut s);
            let params = RobustParams::new(k, bd.len());
            match alg {
                Algorithm::Simple => drop(simple_basis(&bd, &mut s)),
                Algorithm::Errdep => drop(error_dependent_basis(&bd, &mut s)),
                Algorithm::Robust => drop(robust_basis(&bd, &mut s, params)),
                Algorithm::Weighted => drop(weighted_basis(&bd, &mut s)),
                Algorithm::WeightedRobust => drop(robust_weighted_basis(&bd, &mut s, params)),
                Algorithm::Rank => drop(rank_oracle_basis(&bd, &mut s)),
                other => panic!("{other} is not benchmarked here"),
            }
        }
    }
    s.ledger().clean_total()
}

pub fn run_intersection(pair: &IntersectionPair, alg: Algorithm) -> u64 {
    let mut s = pair.session();
    match alg {
        Algorithm::IntersectDirty => drop(dirty_intersection(&mut s).expect("superset instance")),
        Algorithm::Warmstart => drop(warm_start(&mut s)),
        other => panic!("{other} is not an intersection algorithm"),
    }
    s.ledger().clean_total()
}
