use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algorithms::lg;
use crate::algorithms::{cost_a, cost_b};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    Simple,
    Errdep,
    Robust,
    Weighted,
    WeightedRobust,
    Rank,
    Pairquery,
    Costly,
    IntersectDirty,
    Warmstart,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::Greedy,
        Algorithm::Simple,
        Algorithm::Errdep,
        Algorithm::Robust,
        Algorithm::Weighted,
        Algorithm::WeightedRobust,
        Algorithm::Rank,
        Algorithm::Pairquery,
        Algorithm::Costly,
        Algorithm::IntersectDirty,
        Algorithm::Warmstart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Simple => "simple",
            Algorithm::Errdep => "errdep",
            Algorithm::Robust => "robust",
            Algorithm::Weighted => "weighted",
            Algorithm::WeightedRobust => "weighted-robust",
            Algorithm::Rank => "rank",
            Algorithm::Pairquery => "pairquery",
            Algorithm::Costly => "costly",
            Algorithm::IntersectDirty => "intersect-dirty",
            Algorithm::Warmstart => "warmstart",
        }
    }

    pub fn takes_k(self) -> bool {
        matches!(self, Algorithm::Robust | Algorithm::WeightedRobust)
    }

    pub fn is_intersection(self) -> bool {
        matches!(self, Algorithm::IntersectDirty | Algorithm::Warmstart)
    }

    /// Computes a maximum-weight basis rather than any basis.
    pub fn is_weighted(self) -> bool {
        matches!(
            self,
            Algorithm::Greedy | Algorithm::Weighted | Algorithm::WeightedRobust
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid("algorithm", format!("unknown algorithm {s:?}")))
    }
}

/// Inputs to the closed-form bounds. Missing entries only matter to the
/// formulas that read them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub r_d: Option<usize>,
    pub eta_a: Option<usize>,
    pub eta_r: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<Ratio<i64>>,
    pub eta_1: Option<usize>,
    pub eta_2: Option<usize>,
    pub eta_r_int: Option<usize>,
}

fn get<T: Copy>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::MissingParam(name))
}

fn int(x: usize) -> Ratio<i64> {
    Ratio::from_integer(x as i64)
}

/// Clean-query bound for `alg` (total cost for `costly`).
pub fn bound(alg: Algorithm, p: &BoundParams) -> Result<Ratio<i64>> {
    let n = get(p.n, "n")?;
    let value = match alg {
        Algorithm::Greedy => int(n),
        Algorithm::Simple => match (p.r, p.eta_a, p.eta_r) {
            (Some(r), Some(0), Some(0)) => int(n - r + 1),
            _ => int(n + 1),
        },
        Algorithm::Errdep => {
            let (r, r_d) = (get(p.r, "r")?, get(p.r_d, "r_d")?);
            int(n - r + 1 + get(p.eta_a, "eta_a")? + get(p.eta_r, "eta_r")? * lg(r_d))
        }
        Algorithm::Robust => {
            let (r, r_d, k) = (get(p.r, "r")?, get(p.r_d, "r_d")?, get(p.k, "k")?);
            let (ea, er) = (get(p.eta_a, "eta_a")?, get(p.eta_r, "eta_r")?);
            int(n - r + k + ea + er * (k + 1) * lg(r_d)).min(robustness(n, k))
        }
        Algorithm::Weighted => {
            let (r, r_d) = (get(p.r, "r")?, get(p.r_d, "r_d")?);
            int(n - r + 1 + 2 * get(p.eta_a, "eta_a")? + get(p.eta_r, "eta_r")? * lg(r_d))
        }
        Algorithm::WeightedRobust => {
            let (r, r_d, k) = (get(p.r, "r")?, get(p.r_d, "r_d")?, get(p.k, "k")?);
            let (ea, er) = (get(p.eta_a, "eta_a")?, get(p.eta_r, "eta_r")?);
            int(n - r + k + ea * (k + 1) + er * (k + 1) * lg(r_d)).min(robustness(n, k))
        }
        Algorithm::Rank => {
            let r_d = get(p.r_d, "r_d")?;
            let (ea, er) = (get(p.eta_a, "eta_a")?, get(p.eta_r, "eta_r")?);
            int((n + 1).min(2 + er * lg(r_d) + (ea * lg(n - r_d)).min(n - r_d)))
        }
        Algorithm::Pairquery => {
            let r = get(p.r, "r")?;
            int((n - r + get(p.eta_a, "eta_a")?).saturating_sub(1))
        }
        Algorithm::Costly => {
            let (r, cost) = (get(p.r, "r")?, get(p.p, "p")?);
            // B's closed form assumes M_d = M; otherwise simple may use n + 1
            let b = match bound(Algorithm::Simple, p)? {
                s if s == int(n - r + 1) => cost_b(n, r, cost),
                s => int(n) + cost * s,
            };
            let a = cost_a(n, r, cost);
            if a < cost_b(n, r, cost) {
                a + cost
            } else {
                b + cost
            }
        }
        Algorithm::IntersectDirty => {
            let r = get(p.r, "r")?;
            let eta = get(p.eta_1, "eta_1")? + get(p.eta_2, "eta_2")?;
            int((r + 1) * (2 + eta * (lg(n) + 2)))
        }
        Algorithm::Warmstart => int(2 + 2 * get(p.eta_r_int, "eta_r_int")? * (1 + lg(n))),
    };
    Ok(value)
}

/// `(1 + 1/k) n`.
pub fn robustness(n: usize, k: usize) -> Ratio<i64> {
    Ratio::new(((k + 1) * n) as i64, k as i64)
}
