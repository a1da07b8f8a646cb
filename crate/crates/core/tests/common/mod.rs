#![allow(dead_code)]

use matoracle::harness::{generate, DirtySpec, Family, Instance, InstanceSpec, RandomClean};
use matoracle::intersection::IntersectionPair;
use matoracle::{MatroidKind, MatroidSpec, OraclePair, PerturbationSpec, Weight};

pub const KINDS: [RandomClean; 3] = [
    RandomClean::Uniform,
    RandomClean::Partition,
    RandomClean::Graphic,
];

pub fn random_spec(seed: u64, n: usize, clean: RandomClean, weighted: bool) -> InstanceSpec {
    InstanceSpec::family(n, seed, Family::Random { clean, weighted })
        .resolve()
        .unwrap()
}

pub fn basis_pair(spec: &InstanceSpec) -> OraclePair {
    match generate(spec).unwrap() {
        Instance::Basis { pair, .. } => pair,
        Instance::Intersection { .. } => panic!("expected a basis instance"),
    }
}

pub fn intersection_pair(spec: &InstanceSpec) -> IntersectionPair {
    match generate(spec).unwrap() {
        Instance::Intersection { pair } => pair,
        Instance::Basis { .. } => panic!("expected an intersection instance"),
    }
}

/// Random unit-weight instance whose dirty matroid equals the clean one.
pub fn identity_spec(seed: u64, n: usize) -> InstanceSpec {
    let mut spec = random_spec(seed, n, KINDS[seed as usize % 3], false);
    spec.dirty = Some(DirtySpec::Perturb(PerturbationSpec::identity()));
    spec
}

/// `e1..e9` with weights 9..1, B_d = {e3,e4,e5,e8,e9}; the unique
/// maximum-weight clean basis is {e2,e3,e4,e7,e8}.
pub fn worked_example() -> OraclePair {
    let weights: Vec<Weight> = (1..=9).rev().map(Weight::from_integer).collect();
    let clean = MatroidSpec::new(
        9,
        MatroidKind::Partition {
            classes: vec![
                vec![0],
                vec![1, 4, 5],
                vec![2],
                vec![3],
                vec![6],
                vec![7, 8],
            ],
            capacities: vec![0, 1, 1, 1, 1, 1],
        },
    )
    .unwrap();
    let dirty = MatroidSpec::new(
        9,
        MatroidKind::PredictedBasis {
            basis: vec![2, 3, 4, 7, 8],
        },
    )
    .unwrap();
    OraclePair::new(Some(&weights), &clean, &dirty).unwrap()
}

pub mod strategies {
    use matoracle::{MatroidKind, MatroidSpec, Weight};
    use proptest::prelude::*;

    pub fn uniform(n: usize) -> impl Strategy<Value = MatroidSpec> {
        (0..=n).prop_map(move |k| MatroidSpec::uniform(n, k))
    }

    pub fn partition(n: usize) -> impl Strategy<Value = MatroidSpec> {
        (
            proptest::collection::vec(0..3usize, n),
            proptest::collection::vec(0..=n, 3),
        )
            .prop_map(move |(class_of, caps)| {
                let classes: Vec<Vec<usize>> = (0..3)
                    .map(|c| (0..n).filter(|&e| class_of[e] == c).collect())
                    .collect();
                let capacities = classes
                    .iter()
                    .zip(&caps)
                    .map(|(c, &k)| k.min(c.len()))
                    .collect();
                MatroidSpec::new(
                    n,
                    MatroidKind::Partition {
                        classes,
                        capacities,
                    },
                )
                .unwrap()
            })
    }

    pub fn graphic(n: usize) -> impl Strategy<Value = MatroidSpec> {
        (1..=5usize).prop_flat_map(move |v| {
            proptest::collection::vec((0..v, 0..v), n).prop_map(move |edges| {
                MatroidSpec::new(n, MatroidKind::Graphic { vertices: v, edges }).unwrap()
            })
        })
    }

    /// Uniform, partition or graphic matroid on `n` elements.
    pub fn matroid(n: usize) -> BoxedStrategy<MatroidSpec> {
        prop_oneof![uniform(n), partition(n), graphic(n)].boxed()
    }

    pub fn sized_matroid(max_n: usize) -> BoxedStrategy<MatroidSpec> {
        (1..=max_n).prop_flat_map(matroid).boxed()
    }

    /// Small integer weights, so ties are common.
    pub fn weights(n: usize) -> impl Strategy<Value = Vec<Weight>> {
        proptest::collection::vec((0..4i64).prop_map(Weight::from_integer), n)
    }
}
