use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bound::Algorithm;
use super::instance::InstanceSpec;
use super::trial::{run_trial_detailed, TrialParams, TrialRecord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

/// Instances × algorithms × parameter grids. `seeds`, when present,
/// replaces each instance's seed with every seed in the range.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedRange>,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub k: Vec<usize>,
    /// Clean-query prices for `costly`, as `"p"` or `"p/q"`.
    #[serde(default)]
    pub p: Vec<String>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid("config", e.to_string()))
    }

    fn expanded_instances(&self) -> Vec<InstanceSpec> {
        match self.seeds {
            None => self.instances.clone(),
            Some(range) => self
                .instances
                .iter()
                .flat_map(|spec| {
                    (range.start..range.start + range.count).map(move |seed| InstanceSpec {
                        seed,
                        ..spec.clone()
                    })
                })
                .collect(),
        }
    }

    fn prices(&self) -> Result<Vec<Ratio<i64>>> {
        self.p
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e| Error::invalid("p", format!("{s:?}: {e}")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlgorithmSummary {
    pub rows: usize,
    pub violations: usize,
    pub incorrect: usize,
    pub errors: usize,
    /// Largest measured / bound over rows with a bound.
    pub max_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: BTreeMap<String, AlgorithmSummary>,
}

impl SweepOutcome {
    /// True when no row violates its bound, is wrong, or errored.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.failed())
    }

    pub fn to_csv(&self) -> String {
        write_csv(&self.records)
    }
}

impl fmt::Display for SweepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (alg, s) in &self.summary {
            let ratio = s.max_ratio.map_or("-".to_string(), |r| format!("{r:.3}"));
            writeln!(
                f,
                "{alg}: rows={} max_ratio={ratio} violations={} incorrect={} errors={}",
                s.rows, s.violations, s.incorrect, s.errors
            )?;
        }
        write!(
            f,
            "{} rows, {}",
            self.records.len(),
            if self.passed() { "ok" } else { "FAILED" }
        )
    }
}

/// Runs every cell in a rayon pool. Rows come back sorted by instance id,
/// algorithm, k and p.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let prices = config.prices()?;
    let instances = config.expanded_instances();
    let mut cells = Vec::new();
    for (i, spec) in instances.iter().enumerate() {
        let id = format!("{i:05}-{}", spec.label());
        for &alg in &config.algorithms {
            if alg.is_intersection() != spec.is_intersection() {
                continue;
            }
            let ks: Vec<Option<usize>> = if alg.takes_k() && !config.k.is_empty() {
                config.k.iter().map(|&k| Some(k)).collect()
            } else {
                vec![None]
            };
            let ps: Vec<Option<Ratio<i64>>> = if alg == Algorithm::Costly {
                prices.iter().map(|&p| Some(p)).collect()
            } else {
                vec![None]
            };
            for &k in &ks {
                for &p in &ps {
                    cells.push((id.clone(), spec, alg, TrialParams { k, p }));
                }
            }
        }
    }
    let mut records: Vec<TrialRecord> = cells
        .par_iter()
        .map(|(id, spec, alg, params)| run_trial_detailed(id, spec, *alg, *params).record)
        .collect();
    records.sort_by(|a, b| {
        (&a.instance, &a.algorithm, a.k, &a.p).cmp(&(&b.instance, &b.algorithm, b.k, &b.p))
    });
    let summary = summarize(&records);
    Ok(SweepOutcome { records, summary })
}

pub fn summarize(records: &[TrialRecord]) -> BTreeMap<String, AlgorithmSummary> {
    let mut out: BTreeMap<String, AlgorithmSummary> = BTreeMap::new();
    for r in records {
        let s = out.entry(r.algorithm.clone()).or_default();
        s.rows += 1;
        s.violations += !r.within_bound as usize;
        s.incorrect += !r.correct as usize;
        s.errors += r.error.is_some() as usize;
        if let Some(b) = r.bound_value().filter(|b| *b > Ratio::from_integer(0)) {
            let ratio = (r.measured_value() / b).to_f64().unwrap_or(f64::INFINITY);
            s.max_ratio = Some(s.max_ratio.map_or(ratio, |m: f64| m.max(ratio)));
        }
    }
    out
}

pub const CSV_HEADER: &str = "instance,algorithm,k,p,n,r,r_d,eta_a,eta_r,eta_1,eta_2,eta_r_int,s_d_star,eta_source,\
clean_independence,clean_rank,dirty,measured,bound,within_bound,correct,certificate,output_size,error,wall_us";

/// Always starts with [`CSV_HEADER`], even with no rows.
pub fn write_csv(records: &[TrialRecord]) -> String {
    if records.is_empty() {
        return format!("{CSV_HEADER}\n");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("records serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn read_csv(text: &str) -> Result<Vec<TrialRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<TrialRecord>, _>>()
        .map_err(|e| Error::invalid("csv", e.to_string()))
}

/// `series,algorithm,x,measured` rows: `k` series from rows with a k, and
/// `eta` series (sum of the relevant errors) from rows with known errors.
pub fn plot_data(records: &[TrialRecord]) -> String {
    let mut rows = Vec::new();
    for r in records.iter().filter(|r| r.error.is_none()) {
        if let Some(k) = r.k {
            rows.push(("k", r.algorithm.as_str(), k, r.measured.as_str()));
        }
        let eta = match (r.eta_a, r.eta_r, r.eta_1, r.eta_2, r.eta_r_int) {
            (Some(a), Some(b), ..) => Some(a + b),
            (_, _, Some(a), Some(b), _) if r.algorithm != "warmstart" => Some(a + b),
            (.., Some(e)) => Some(e),
            _ => None,
        };
        if let Some(e) = eta {
            rows.push(("eta", r.algorithm.as_str(), e, r.measured.as_str()));
        }
    }
    rows.sort();
    let mut out = String::from("series,algorithm,x,measured\n");
    for (series, alg, x, m) in rows {
        out.push_str(&format!("{series},{alg},{x},{m}\n"));
    }
    out
}
