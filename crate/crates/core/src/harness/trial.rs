use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::bound::{bound, Algorithm, BoundParams};
use super::instance::{generate, Instance, InstanceSpec};
use crate::algorithms::{
    costly_selector, dirty_basis, error_dependent_basis, greedy_max_weight_basis, pair_query_basis,
    rank_oracle_basis, robust_basis, robust_weighted_basis, simple_basis, weighted_basis,
    RobustParams,
};
use crate::certificate::{verify_certificate, CertificateMode};
use crate::error::{guard, Error, BASIS_GUARD, INTERSECTION_GUARD};
use crate::error_metrics::{
    basis_errors, compute_eta, compute_intersection_errors, intersection_errors_unchecked,
};
use crate::intersection::{
    build_exchange_graph, dirty_intersection, warm_start, FalseQueryLists, IntersectionPair,
    OptimalityCertificate,
};
use crate::matroid::greedy_unbilled;
use crate::oracle::{OraclePair, QueryLedger, Role};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialParams {
    pub k: Option<usize>,
    pub p: Option<Ratio<i64>>,
}

/// One experiment row. Flat so it writes straight to CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance: String,
    pub algorithm: String,
    pub k: Option<usize>,
    pub p: Option<String>,
    pub n: usize,
    pub r: Option<usize>,
    pub r_d: Option<usize>,
    pub eta_a: Option<usize>,
    pub eta_r: Option<usize>,
    pub eta_1: Option<usize>,
    pub eta_2: Option<usize>,
    pub eta_r_int: Option<usize>,
    pub s_d_star: Option<usize>,
    /// `enumerated`, `construction`, `basis` (errors of the B_d actually
    /// used) or `skipped`.
    pub eta_source: String,
    pub clean_independence: u64,
    pub clean_rank: u64,
    pub dirty: u64,
    /// Clean queries, or total cost for `costly`.
    pub measured: String,
    pub bound: Option<String>,
    pub within_bound: bool,
    pub correct: bool,
    /// `valid`, `invalid` or `not_checked`.
    pub certificate: String,
    pub output_size: Option<usize>,
    pub error: Option<String>,
    pub wall_us: u64,
}

impl TrialRecord {
    fn blank(instance: &str, alg: Algorithm, params: TrialParams, n: usize) -> Self {
        TrialRecord {
            instance: instance.to_string(),
            algorithm: alg.name().to_string(),
            k: params.k,
            p: params.p.map(|p| p.to_string()),
            n,
            r: None,
            r_d: None,
            eta_a: None,
            eta_r: None,
            eta_1: None,
            eta_2: None,
            eta_r_int: None,
            s_d_star: None,
            eta_source: "skipped".into(),
            clean_independence: 0,
            clean_rank: 0,
            dirty: 0,
            measured: "0".into(),
            bound: None,
            within_bound: true,
            correct: false,
            certificate: "not_checked".into(),
            output_size: None,
            error: None,
            wall_us: 0,
        }
    }

    pub fn measured_value(&self) -> Ratio<i64> {
        self.measured
            .parse()
            .expect("measured is written by run_trial")
    }

    pub fn bound_value(&self) -> Option<Ratio<i64>> {
        self.bound
            .as_ref()
            .map(|b| b.parse().expect("bound is written by run_trial"))
    }

    /// Total clean calls of either kind.
    pub fn clean_total(&self) -> u64 {
        self.clean_independence + self.clean_rank
    }

    /// A bound violation, a wrong output, or an error.
    pub fn failed(&self) -> bool {
        !self.within_bound || !self.correct || self.error.is_some()
    }

    fn fill_ledger(&mut self, ledger: &QueryLedger) {
        self.clean_independence = ledger.clean_independence();
        self.clean_rank = ledger.clean_rank();
        self.dirty = ledger.dirty();
    }

    fn check_bound(&mut self, alg: Algorithm, params: &BoundParams) {
        if self.eta_source == "skipped" {
            return;
        }
        match bound(alg, params) {
            Ok(b) => {
                self.within_bound = self.measured_value() <= b;
                self.bound = Some(b.to_string());
            }
            Err(e) => self.error = Some(e.to_string()),
        }
    }
}

/// A finished run: the record plus what produced it.
#[derive(Clone, Debug)]
pub struct Trial {
    pub record: TrialRecord,
    pub ledger: Option<QueryLedger>,
    /// Output in canonical labels (identity labels for intersections).
    pub output: Option<ElementSet>,
}

pub fn run_trial(spec: &InstanceSpec, alg: Algorithm, params: TrialParams) -> TrialRecord {
    run_trial_detailed(&spec.label(), spec, alg, params).record
}

/// Errors from generation or from the algorithm end up in the record.
pub fn run_trial_detailed(
    id: &str,
    spec: &InstanceSpec,
    alg: Algorithm,
    params: TrialParams,
) -> Trial {
    let start = Instant::now();
    let mut trial = match generate(spec) {
        Ok(instance) => run_on(id, &instance, alg, params),
        Err(e) => failed(TrialRecord::blank(id, alg, params, spec.n), e),
    };
    trial.record.wall_us = start.elapsed().as_micros() as u64;
    trial
}

fn failed(mut record: TrialRecord, e: Error) -> Trial {
    record.error = Some(e.to_string());
    record.correct = false;
    Trial {
        record,
        ledger: None,
        output: None,
    }
}

/// Runs `alg` on an already materialized instance.
pub fn run_on(id: &str, instance: &Instance, alg: Algorithm, params: TrialParams) -> Trial {
    match instance {
        Instance::Basis { pair, known_eta } => {
            let record = TrialRecord::blank(id, alg, params, pair.n());
            if alg.is_intersection() {
                return failed(record, incompatible(alg, "needs a pair of matroid pairs"));
            }
            run_basis(record, pair, *known_eta, alg, params)
        }
        Instance::Intersection { pair } => {
            let record = TrialRecord::blank(id, alg, params, pair.n());
            if !alg.is_intersection() {
                return failed(record, incompatible(alg, "needs a single clean/dirty pair"));
            }
            run_intersection(record, pair, alg)
        }
    }
}

fn incompatible(alg: Algorithm, reason: &str) -> Error {
    Error::Incompatible {
        algorithm: alg.name().into(),
        reason: reason.into(),
    }
}

/// `(η_A, η_R, source)`: enumeration within the guard, else construction
/// values, else the errors of the dirty basis the algorithms start from.
fn basis_eta(pair: &OraclePair, known: Option<(usize, usize)>) -> (usize, usize, &'static str) {
    if pair.n() <= guard(BASIS_GUARD) {
        if let Ok(rep) = compute_eta(pair) {
            return (rep.eta_a, rep.eta_r, "enumerated");
        }
    }
    if let Some((a, r)) = known {
        return (a, r, "construction");
    }
    let (a, r) = basis_errors(pair, pair.dirty_basis());
    (a, r, "basis")
}

fn run_basis(
    mut record: TrialRecord,
    pair: &OraclePair,
    known: Option<(usize, usize)>,
    alg: Algorithm,
    params: TrialParams,
) -> Trial {
    let n = pair.n();
    let unit = pair.ground().is_unit();
    if !unit && !alg.is_weighted() {
        return failed(
            record,
            incompatible(alg, "computes an arbitrary basis; instance is weighted"),
        );
    }
    if alg == Algorithm::Costly && params.p.is_none() {
        return failed(record, Error::MissingParam("p"));
    }
    let k = alg
        .takes_k()
        .then(|| params.k.unwrap_or_else(|| RobustParams::default_k(n)));
    record.k = k;
    let r_d = pair.dirty_basis().len();
    let robust = RobustParams::new(k.unwrap_or(1), r_d);

    let mut session = pair.session();
    if let Some(p) = params.p {
        session = session.with_cost(p);
    }
    let mut family_violation = false;
    let output = match alg {
        Algorithm::Greedy => greedy_max_weight_basis(&mut session, Role::Clean),
        Algorithm::Costly => costly_selector(&mut session).basis,
        _ => {
            let bd = dirty_basis(&mut session);
            match alg {
                Algorithm::Simple => simple_basis(&bd, &mut session),
                Algorithm::Errdep => error_dependent_basis(&bd, &mut session),
                Algorithm::Robust => robust_basis(&bd, &mut session, robust),
                Algorithm::Weighted => weighted_basis(&bd, &mut session).basis,
                Algorithm::WeightedRobust => robust_weighted_basis(&bd, &mut session, robust).basis,
                Algorithm::Rank => rank_oracle_basis(&bd, &mut session),
                Algorithm::Pairquery => {
                    let out = pair_query_basis(&bd, &mut session);
                    family_violation = out.family_violation;
                    out.basis
                }
                _ => unreachable!("handled above"),
            }
        }
    };
    let ledger = session.into_ledger();
    record.fill_ledger(&ledger);
    record.measured = if alg == Algorithm::Costly {
        ledger.total_cost().to_string()
    } else {
        ledger.clean_total().to_string()
    };

    let clean = pair.clean();
    let r = pair.clean_rank();
    let g = pair.ground();
    record.r = Some(r);
    record.r_d = Some(r_d);
    record.output_size = Some(output.len());
    record.correct = clean.is_independent(&output)
        && output.len() == r
        && g.set_key(&output) == g.set_key(&greedy_unbilled(clean));
    if family_violation {
        record.error = Some(
            "pair-query output is not a clean basis: instance outside the algorithm's family"
                .into(),
        );
    }

    let mode = match alg {
        Algorithm::Greedy if !unit => Some(CertificateMode::WeightedPrefix),
        Algorithm::Greedy | Algorithm::Simple | Algorithm::Errdep | Algorithm::Robust => {
            Some(CertificateMode::Unweighted)
        }
        _ => None,
    };
    if let Some(mode) = mode {
        let ok = verify_certificate(ledger.records(), &output, g, mode).valid();
        record.certificate = if ok { "valid" } else { "invalid" }.into();
    }

    let (eta_a, eta_r, source) = basis_eta(pair, known);
    record.eta_a = Some(eta_a);
    record.eta_r = Some(eta_r);
    record.eta_source = source.into();
    let bp = BoundParams {
        n: Some(n),
        r: Some(r),
        r_d: Some(r_d),
        eta_a: Some(eta_a),
        eta_r: Some(eta_r),
        k,
        p: params.p,
        ..Default::default()
    };
    record.check_bound(alg, &bp);
    Trial {
        record,
        ledger: Some(ledger),
        output: Some(output),
    }
}

fn run_intersection(mut record: TrialRecord, pair: &IntersectionPair, alg: Algorithm) -> Trial {
    let n = pair.n();
    let c1 = pair.spec(Role::Clean, 1);
    let c2 = pair.spec(Role::Clean, 2);
    let (d1, d2) = (pair.spec(Role::Dirty, 1), pair.spec(Role::Dirty, 2));
    record.r = Some(c1.full_rank().min(c2.full_rank()));
    let errors = if n > guard(INTERSECTION_GUARD) {
        None
    } else if alg == Algorithm::IntersectDirty {
        match compute_intersection_errors(d1, d2, c1, c2) {
            Ok(rep) => Some(rep),
            Err(e) => return failed(record, e),
        }
    } else {
        intersection_errors_unchecked(d1, d2, c1, c2).ok()
    };
    if let Some(rep) = &errors {
        record.eta_1 = Some(rep.eta_1);
        record.eta_2 = Some(rep.eta_2);
        record.eta_r_int = Some(rep.eta_r);
        record.s_d_star = Some(rep.s_d_star);
        record.eta_source = "enumerated".into();
    }

    let mut session = pair.session();
    let output = match alg {
        Algorithm::IntersectDirty => match dirty_intersection(&mut session) {
            Ok(run) => run.x,
            Err(e) => {
                let ledger = session.into_ledger();
                record.fill_ledger(&ledger);
                return failed(record, e);
            }
        },
        _ => warm_start(&mut session).0,
    };
    let ledger = session.into_ledger();
    record.fill_ledger(&ledger);
    record.measured = ledger.clean_total().to_string();
    record.output_size = Some(output.len());

    let common = c1.is_independent(&output) && c2.is_independent(&output);
    record.correct = common
        && match (alg, &errors) {
            (Algorithm::IntersectDirty, Some(rep)) => output.len() == rep.optimum,
            (Algorithm::IntersectDirty, None) => output.len() == clean_optimum(pair),
            (_, Some(rep)) => output.len() + 2 * rep.eta_r >= rep.s_d_star,
            (_, None) => true,
        };
    if alg == Algorithm::IntersectDirty {
        let mut scratch = pair.session();
        let g = build_exchange_graph(
            &output,
            &mut scratch,
            Role::Clean,
            &FalseQueryLists::default(),
        );
        let u = if g.y1.is_empty() {
            ElementSet::full(n)
        } else if g.y2.is_empty() {
            ElementSet::empty(n)
        } else {
            g.reaching_y2()
        };
        let ok =
            g.shortest_path().is_none() && (OptimalityCertificate { u }).holds(&output, c1, c2);
        record.certificate = if ok { "valid" } else { "invalid" }.into();
    }
    let bp = BoundParams {
        n: Some(n),
        r: record.r,
        eta_1: record.eta_1,
        eta_2: record.eta_2,
        eta_r_int: record.eta_r_int,
        ..Default::default()
    };
    record.check_bound(alg, &bp);
    Trial {
        record,
        ledger: Some(ledger),
        output: Some(output),
    }
}

fn clean_optimum(pair: &IntersectionPair) -> usize {
    let mut scratch = pair.session();
    crate::intersection::textbook_intersection(&mut scratch, Role::Clean)
        .0
        .len()
}
