mod common;

use common::{identity_spec, random_spec, KINDS};
use matoracle::harness::{
    bound, plot_data, read_csv, run_trial, sweep, write_csv, Algorithm, BoundParams, DirtySpec,
    Family, InstanceSpec, RandomClean, SeedRange, SweepConfig, TrialParams, TrialRecord, Weights,
};
use matoracle::{MatroidKind, Perturbation, PerturbationSpec};
use num_rational::Ratio;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    let clean = prop_oneof![
        Just(RandomClean::Uniform),
        Just(RandomClean::Partition),
        Just(RandomClean::Graphic),
        Just(RandomClean::Any)
    ];
    prop_oneof![
        (1..8usize).prop_map(|r| Family::LbBasic { r }),
        (1..4usize, 0..4usize).prop_map(|(r_d, eta_a)| Family::LbAdd { r_d, eta_a }),
        (1..4usize, 0..2usize).prop_map(|(r_d, eta_r)| Family::LbRem { r_d, eta_r }),
        (0..2usize).prop_map(|eta_r| Family::LbWeighted { eta_r }),
        (1..4usize, 0..4usize, any::<bool>()).prop_map(|(r_d, eta_a, alternating)| {
            Family::Pairquery {
                r_d,
                eta_a,
                alternating,
            }
        }),
        (clean, any::<bool>()).prop_map(|(clean, weighted)| Family::Random { clean, weighted }),
        any::<bool>().prop_map(|superset| Family::PartitionPair { superset }),
    ]
}

fn without_time(mut r: TrialRecord) -> TrialRecord {
    r.wall_us = 0;
    r
}

#[test]
fn simple_on_identity_uses_n_minus_r_plus_one() {
    for seed in 0..30 {
        let spec = identity_spec(seed, 12);
        let rec = run_trial(&spec, Algorithm::Simple, TrialParams::default());
        let r = rec.r.unwrap();
        assert!(
            rec.within_bound && rec.correct && rec.error.is_none(),
            "{rec:?}"
        );
        assert_eq!(rec.clean_total() as usize, 12 - r + 1);
        assert_eq!(rec.certificate, "valid");
        assert_eq!(rec.eta_source, "enumerated");
    }
}

#[test]
fn robust_on_lower_bound_family() {
    let spec = InstanceSpec::family(40, 0, Family::LbAdd { r_d: 10, eta_a: 6 });
    let rec = run_trial(
        &spec,
        Algorithm::Robust,
        TrialParams {
            k: Some(2),
            p: None,
        },
    );
    assert!(rec.within_bound && rec.correct, "{rec:?}");
    assert_eq!(rec.eta_source, "construction");
    let params = BoundParams {
        n: Some(40),
        r: Some(16),
        r_d: Some(10),
        eta_a: Some(6),
        eta_r: Some(0),
        k: Some(2),
        ..Default::default()
    };
    assert_eq!(
        rec.bound_value(),
        Some(bound(Algorithm::Robust, &params).unwrap())
    );
    assert!(rec.measured_value() <= Ratio::new(3 * 40, 2));
}

#[test]
fn superset_violation_becomes_an_error_row() {
    let spec = InstanceSpec {
        seed: 0,
        n: 3,
        weights: Weights::Unit,
        matroid: Some(MatroidKind::Partition {
            classes: vec![vec![0, 1, 2]],
            capacities: vec![2],
        }),
        dirty: Some(DirtySpec::Matroid(MatroidKind::Partition {
            classes: vec![vec![0, 1, 2]],
            capacities: vec![1],
        })),
        matroid2: Some(MatroidKind::Uniform { k: 3 }),
        dirty2: Some(DirtySpec::Matroid(MatroidKind::Uniform { k: 3 })),
        family: None,
    };
    let rec = run_trial(&spec, Algorithm::IntersectDirty, TrialParams::default());
    assert!(
        rec.error.as_deref().unwrap().contains("superset"),
        "{rec:?}"
    );
    assert!(rec.failed());
}

#[test]
fn algorithm_instance_mismatch_is_an_error_row() {
    let spec = random_spec(1, 8, KINDS[0], true);
    let rec = run_trial(&spec, Algorithm::Simple, TrialParams::default());
    assert!(rec.error.is_some() && rec.failed());
    let rec = run_trial(&spec, Algorithm::Warmstart, TrialParams::default());
    assert!(rec.error.is_some());
}

#[test]
fn costly_row_reports_total_cost() {
    let spec = identity_spec(4, 16);
    let rec = run_trial(
        &spec,
        Algorithm::Costly,
        TrialParams {
            k: None,
            p: Some(Ratio::new(3, 2)),
        },
    );
    assert!(rec.within_bound && rec.correct, "{rec:?}");
    assert_eq!(rec.p.as_deref(), Some("3/2"));
    assert_eq!(rec.bound_value(), Some(rec.measured_value()));
    assert!(run_trial(&spec, Algorithm::Costly, TrialParams::default())
        .error
        .is_some());
}

#[test]
fn k_sweep_has_no_violations() {
    let config = SweepConfig {
        instances: vec![InstanceSpec::family(
            12,
            0,
            Family::Random {
                clean: RandomClean::Any,
                weighted: false,
            },
        )],
        seeds: Some(SeedRange {
            start: 0,
            count: 100,
        }),
        algorithms: vec![Algorithm::Robust],
        k: vec![1, 2, 4, 8],
        p: vec![],
    };
    let out = sweep(&config).unwrap();
    assert_eq!(out.records.len(), 400);
    assert!(out.passed(), "{out}");
    let s = &out.summary["robust"];
    assert_eq!(
        (s.rows, s.violations, s.incorrect, s.errors),
        (400, 0, 0, 0)
    );
    assert!(s.max_ratio.unwrap() <= 1.0);
}

#[test]
fn sweeps_are_deterministic_and_sorted() {
    let config = SweepConfig::from_json(
        r#"{
            "instances": [
                {"n": 9, "family": {"tag": "random", "clean": "any", "weighted": true}},
                {"n": 10, "family": {"tag": "partition_pair", "superset": true}},
                {"n": 11, "family": {"tag": "lb_weighted", "eta_r": 1}}
            ],
            "seeds": {"start": 5, "count": 4},
            "algorithms": ["greedy", "weighted", "weighted-robust", "intersect-dirty", "warmstart"],
            "k": [1, 3]
        }"#,
    )
    .unwrap();
    let a = sweep(&config).unwrap();
    let b = sweep(&config).unwrap();
    let strip = |v: &[TrialRecord]| v.iter().cloned().map(without_time).collect::<Vec<_>>();
    assert_eq!(strip(&a.records), strip(&b.records));
    assert!(a.passed(), "{a}");
    let keys: Vec<_> = a
        .records
        .iter()
        .map(|r| (r.instance.clone(), r.algorithm.clone(), r.k, r.p.clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(a.records.len(), 4 * (4 + 2 + 4));
    assert!(a
        .records
        .iter()
        .any(|r| r.instance.contains("lb_weighted") && r.algorithm == "weighted"));
}

#[test]
fn empty_sweep_is_empty_and_passes() {
    let out = sweep(&SweepConfig::from_json("{}").unwrap()).unwrap();
    assert!(out.records.is_empty() && out.passed());
    assert_eq!(read_csv(&write_csv(&out.records)).unwrap(), vec![]);
    assert_eq!(write_csv(&[]).trim_end(), matoracle::harness::CSV_HEADER);
}

#[test]
fn csv_header_is_fixed() {
    let rec = run_trial(
        &identity_spec(0, 6),
        Algorithm::Errdep,
        TrialParams::default(),
    );
    let csv = write_csv(&[rec.clone()]);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "instance,algorithm,k,p,n,r,r_d,eta_a,eta_r,eta_1,eta_2,eta_r_int,s_d_star,eta_source,clean_independence,\
clean_rank,dirty,measured,bound,within_bound,correct,certificate,output_size,error,wall_us"
    );
    assert_eq!(header, matoracle::harness::CSV_HEADER);
    assert_eq!(read_csv(&csv).unwrap(), vec![rec.clone()]);
    let json = serde_json::to_string(&rec).unwrap();
    assert_eq!(serde_json::from_str::<TrialRecord>(&json).unwrap(), rec);
}

#[test]
fn plot_data_has_k_and_eta_series() {
    let config = SweepConfig {
        instances: vec![identity_spec(2, 10)],
        seeds: None,
        algorithms: vec![Algorithm::Robust, Algorithm::Errdep],
        k: vec![1, 2],
        p: vec![],
    };
    let out = sweep(&config).unwrap();
    let data = plot_data(&out.records);
    let mut lines = data.lines();
    assert_eq!(lines.next(), Some("series,algorithm,x,measured"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|l| l.starts_with("k,robust,2,")));
    assert!(rows.iter().any(|l| l.starts_with("eta,errdep,0,")));
}

#[test]
fn explicit_dirty_spec_round_trips() {
    let spec = InstanceSpec {
        seed: 3,
        n: 4,
        weights: Weights::Values(vec![
            Ratio::new(3, 2),
            Ratio::from_integer(1),
            Ratio::from_integer(1),
            Ratio::new(1, 3),
        ]),
        matroid: Some(MatroidKind::Uniform { k: 2 }),
        dirty: Some(DirtySpec::Explicit(vec![vec![0, 1, 2], vec![3]])),
        matroid2: None,
        dirty2: None,
        family: None,
    };
    let json = spec.to_json();
    assert_eq!(InstanceSpec::from_json(&json).unwrap(), spec);
    assert_eq!(InstanceSpec::from_json(&json).unwrap().to_json(), json);
    let pert = InstanceSpec {
        dirty: Some(DirtySpec::Perturb(PerturbationSpec::new(
            Perturbation::CapacityShift { count: 2 },
            9,
        ))),
        ..spec
    };
    assert_eq!(InstanceSpec::from_json(&pert.to_json()).unwrap(), pert);
    assert!(InstanceSpec::from_json(r#"{"n": 3, "weights": ["1/0", "1", "1"]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_specs_round_trip(n in 3usize..16, seed in any::<u64>(), f in family()) {
        let spec = InstanceSpec::family(n, seed, f);
        let json = spec.to_json();
        let back = InstanceSpec::from_json(&json).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_json(), json);
        if let Ok(resolved) = spec.resolve() {
            let json = resolved.to_json();
            prop_assert_eq!(InstanceSpec::from_json(&json).unwrap().to_json(), json);
            prop_assert_eq!(spec.resolve().unwrap(), resolved);
        }
    }

    #[test]
    fn trial_rows_respect_their_flags(seed in 0u64..100_000, n in 1usize..=14, kind in 0usize..3, weighted in any::<bool>(), k in 1usize..=4) {
        let spec = random_spec(seed, n, KINDS[kind], weighted);
        let algs: &[Algorithm] = if weighted {
            &[Algorithm::Greedy, Algorithm::Weighted, Algorithm::WeightedRobust]
        } else {
            &[Algorithm::Greedy, Algorithm::Simple, Algorithm::Errdep, Algorithm::Robust, Algorithm::Weighted, Algorithm::WeightedRobust, Algorithm::Rank]
        };
        for &alg in algs {
            let rec = run_trial(&spec, alg, TrialParams { k: alg.takes_k().then_some(k), p: None });
            prop_assert!(rec.error.is_none(), "{:?}", rec);
            prop_assert!(rec.correct && rec.within_bound, "{:?}", rec);
            if let Some(b) = rec.bound_value() {
                prop_assert_eq!(rec.within_bound, rec.measured_value() <= b);
            }
            prop_assert!(rec.certificate != "invalid", "{:?}", rec);
            let again = run_trial(&spec, alg, TrialParams { k: alg.takes_k().then_some(k), p: None });
            prop_assert_eq!(without_time(again), without_time(rec));
        }
    }
}
