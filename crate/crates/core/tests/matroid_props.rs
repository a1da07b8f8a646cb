mod common;

use common::strategies::{matroid, sized_matroid, weights};
use matoracle::algorithms::greedy_max_weight_basis;
use matoracle::matroid::{enumerate_max_weight_bases, enumerate_maximal_sets};
use matoracle::{ElementSet, GroundSet, MatroidKind, MatroidSpec, OraclePair, Role};
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = ElementSet> {
    (0..1u64 << n).map(move |m| ElementSet::from_mask(n, m))
}

fn independent_sets(spec: &MatroidSpec) -> Vec<ElementSet> {
    subsets(spec.n())
        .filter(|s| spec.is_independent(s))
        .collect()
}

#[test]
fn spec_examples() {
    let u = MatroidSpec::uniform(4, 2);
    assert!(!u.is_independent(&ElementSet::from_indices(4, [0, 1, 2])));
    assert_eq!(u.rank(&ElementSet::full(4)), 2);
    let k3 = MatroidSpec::new(
        3,
        MatroidKind::Graphic {
            vertices: 3,
            edges: vec![(0, 1), (1, 2), (2, 0)],
        },
    )
    .unwrap();
    assert!(!k3.is_independent(&ElementSet::full(3)));
    assert_eq!(k3.rank(&ElementSet::full(3)), 2);
    let p = MatroidSpec::new(
        4,
        MatroidKind::Partition {
            classes: vec![vec![0, 1], vec![2, 3]],
            capacities: vec![1, 1],
        },
    )
    .unwrap();
    assert!(p.is_independent(&ElementSet::from_indices(4, [0, 2])));
    assert_eq!(p.rank(&ElementSet::from_indices(4, [0, 1, 2])), 2);
}

#[test]
fn greedy_examples() {
    let w = |v: &[i64]| {
        v.iter()
            .map(|&x| matoracle::Weight::from_integer(x))
            .collect::<Vec<_>>()
    };
    let k3 = MatroidSpec::new(
        3,
        MatroidKind::Graphic {
            vertices: 3,
            edges: vec![(0, 1), (1, 2), (2, 0)],
        },
    )
    .unwrap();
    let pair = OraclePair::new(Some(&w(&[3, 2, 1])), &k3, &k3).unwrap();
    let mut s = pair.session();
    let b = greedy_max_weight_basis(&mut s, Role::Clean);
    assert_eq!(pair.ground().to_original(&b), vec![0, 1]);
    assert_eq!(s.ledger().clean_total(), 3);

    let p = MatroidSpec::new(
        3,
        MatroidKind::Partition {
            classes: vec![vec![0, 1], vec![2]],
            capacities: vec![1, 1],
        },
    )
    .unwrap();
    let pair = OraclePair::new(Some(&w(&[5, 4, 3])), &p, &p).unwrap();
    let mut s = pair.session();
    let b = greedy_max_weight_basis(&mut s, Role::Clean);
    assert_eq!(pair.ground().to_original(&b), vec![0, 2]);

    let p = MatroidSpec::new(
        3,
        MatroidKind::Partition {
            classes: vec![vec![0, 1], vec![2]],
            capacities: vec![1, 1],
        },
    )
    .unwrap();
    let g = GroundSet::canonical(&w(&[5, 5, 3]), None);
    let position: Vec<usize> = (0..3).map(|i| g.canonical_index(i)).collect();
    let mut got: Vec<Vec<usize>> = enumerate_max_weight_bases(&p.relabel(&position), &g)
        .unwrap()
        .iter()
        .map(|b| g.to_original(b))
        .collect();
    got.sort();
    assert_eq!(got, vec![vec![0, 2], vec![1, 2]]);
}

#[test]
fn malformed_specs_rejected() {
    let overlapping = MatroidKind::Partition {
        classes: vec![vec![0, 1], vec![1, 2]],
        capacities: vec![1, 1],
    };
    assert!(MatroidSpec::new(3, overlapping).is_err());
    let missing = MatroidKind::Partition {
        classes: vec![vec![0]],
        capacities: vec![1],
    };
    assert!(MatroidSpec::new(2, missing).is_err());
    let bad_edge = MatroidKind::Graphic {
        vertices: 2,
        edges: vec![(0, 5)],
    };
    assert!(MatroidSpec::new(1, bad_edge).is_err());
}

#[test]
fn explicit_matroid_flag() {
    let triangle = MatroidKind::Explicit {
        maximal_sets: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    };
    assert!(MatroidSpec::new(3, triangle).unwrap().is_matroid());
    // {0,1} and {2} violate augmentation
    let broken = MatroidKind::Explicit {
        maximal_sets: vec![vec![0, 1], vec![2]],
    };
    assert!(!MatroidSpec::new(3, broken).unwrap().is_matroid());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn independence_matches_maximal_set_enumeration(spec in sized_matroid(12)) {
        let maximal = enumerate_maximal_sets(&spec).unwrap();
        for s in subsets(spec.n()) {
            let covered = maximal.iter().any(|m| s.is_subset(m));
            prop_assert_eq!(spec.is_independent(&s), covered);
        }
    }

    #[test]
    fn rank_is_largest_independent_subset(spec in sized_matroid(10)) {
        let indep = independent_sets(&spec);
        for s in subsets(spec.n()) {
            let best = indep.iter().filter(|t| t.is_subset(&s)).map(|t| t.len()).max().unwrap_or(0);
            prop_assert_eq!(spec.rank(&s), best);
        }
    }

    #[test]
    fn downward_closed_on_chains(spec in sized_matroid(40), order in proptest::collection::vec(any::<prop::sample::Index>(), 40)) {
        let n = spec.n();
        let mut s = ElementSet::empty(n);
        let mut was_independent = true;
        for idx in order {
            s.insert(idx.index(n));
            let now = spec.is_independent(&s);
            prop_assert!(was_independent || !now, "superset of a dependent set is independent");
            was_independent = now;
        }
    }

    #[test]
    fn augmentation_axiom(spec in sized_matroid(7)) {
        let indep = independent_sets(&spec);
        for a in &indep {
            for b in indep.iter().filter(|b| b.len() > a.len()) {
                prop_assert!(b.difference(a).iter().any(|e| spec.is_independent(&a.with(e))));
            }
        }
        prop_assert!(spec.is_matroid());
    }

    #[test]
    fn bases_share_cardinality(spec in sized_matroid(12)) {
        let sizes: Vec<usize> = enumerate_maximal_sets(&spec).unwrap().iter().map(|b| b.len()).collect();
        prop_assert!(sizes.iter().all(|&s| s == spec.full_rank()));
    }

    #[test]
    fn greedy_is_max_weight_with_n_queries(
        (spec, w) in (1..=12usize).prop_flat_map(|n| (matroid(n), weights(n)))
    ) {
        let pair = OraclePair::new(Some(&w), &spec, &spec).unwrap();
        let g = pair.ground();
        let mut s = pair.session();
        let b = greedy_max_weight_basis(&mut s, Role::Clean);
        prop_assert_eq!(s.ledger().clean_total() as usize, pair.n());
        let best = enumerate_max_weight_bases(pair.clean(), g).unwrap();
        prop_assert!(best.contains(&b));
        prop_assert!(best.iter().all(|o| g.set_weight(o) == g.set_weight(&b)));
    }

    #[test]
    fn canonical_order_sorts_and_prefers_designated(
        (w, designated) in (1..=30usize).prop_flat_map(|n| (weights(n), proptest::collection::vec(any::<bool>(), n)))
    ) {
        let g = GroundSet::canonical(&w, Some(&designated));
        let again = GroundSet::canonical(&w, Some(&designated));
        prop_assert_eq!(g.order(), again.order());
        for i in 1..g.n() {
            let (a, b) = (g.order()[i - 1], g.order()[i]);
            prop_assert!(w[a] >= w[b]);
            if w[a] == w[b] {
                prop_assert!(designated[a] >= designated[b]);
                if designated[a] == designated[b] {
                    prop_assert!(a < b);
                }
            }
        }
    }

    #[test]
    fn set_algebra(n in 1..200usize, a in proptest::collection::vec(any::<bool>(), 200), b in proptest::collection::vec(any::<bool>(), 200), cut in any::<prop::sample::Index>()) {
        let from = |bits: &[bool]| ElementSet::from_indices(n, (0..n).filter(|&i| bits[i]));
        let (x, y) = (from(&a), from(&b));
        for i in 0..n {
            prop_assert_eq!(x.union(&y).contains(i), a[i] || b[i]);
            prop_assert_eq!(x.difference(&y).contains(i), a[i] && !b[i]);
            prop_assert_eq!(x.symmetric_difference(&y).contains(i), a[i] != b[i]);
        }
        prop_assert_eq!(x.len(), (0..n).filter(|&i| a[i]).count());
        prop_assert_eq!(x.union(&y).len(), x.symmetric_difference(&y).len() + x.intersection_len(&y));
        let i = cut.index(n);
        prop_assert_eq!(x.prefix(i).to_vec(), x.iter().filter(|&e| e <= i).collect::<Vec<_>>());
        prop_assert_eq!(x.prefix(n - 1), x.clone());
        prop_assert_eq!(ElementSet::from_hex(n, &x.to_hex()), Some(x));
    }
}
