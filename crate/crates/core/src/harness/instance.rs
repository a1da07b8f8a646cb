//! Instance files and the generators behind them.

use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::Weight;
use crate::intersection::IntersectionPair;
use crate::matroid::{MatroidKind, MatroidSpec};
use crate::oracle::OraclePair;
use crate::perturb::{make_dirty, Perturbation, PerturbationSpec};

/// `"unit"` or one exact rational per element, written `"p"` or `"p/q"`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Weights {
    #[default]
    Unit,
    Values(Vec<Weight>),
}

impl Weights {
    pub fn is_unit(&self) -> bool {
        matches!(self, Weights::Unit)
    }

    fn as_slice(&self) -> Option<&[Weight]> {
        match self {
            Weights::Unit => None,
            Weights::Values(v) => Some(v),
        }
    }
}

impl Serialize for Weights {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weights::Unit => s.serialize_str("unit"),
            Weights::Values(v) => s.collect_seq(v.iter().map(|w| w.to_string())),
        }
    }
}

impl<'de> Deserialize<'de> for Weights {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tag(String),
            List(Vec<serde_json::Value>),
        }
        match Raw::deserialize(d)? {
            Raw::Tag(t) if t == "unit" => Ok(Weights::Unit),
            Raw::Tag(t) => Err(de::Error::custom(format!(
                "expected \"unit\" or a list, got {t:?}"
            ))),
            Raw::List(items) => items
                .iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => s
                        .parse::<Weight>()
                        .map_err(|e| de::Error::custom(format!("weight {s:?}: {e}"))),
                    serde_json::Value::Number(n) => {
                        n.as_i64().map(Ratio::from_integer).ok_or_else(|| {
                            de::Error::custom(format!(
                                "weight {n} is not an integer; write it as \"p/q\""
                            ))
                        })
                    }
                    other => Err(de::Error::custom(format!("weight {other} is not a number"))),
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Weights::Values),
        }
    }
}

/// Where the dirty matroid comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirtySpec {
    Matroid(MatroidKind),
    Perturb(PerturbationSpec),
    PredictedBasis(Vec<usize>),
    Explicit(Vec<Vec<usize>>),
}

impl DirtySpec {
    fn build(&self, clean: &MatroidSpec) -> Result<MatroidSpec> {
        let n = clean.n();
        match self {
            DirtySpec::Matroid(kind) => MatroidSpec::new(n, kind.clone()),
            DirtySpec::Perturb(p) => make_dirty(clean, p),
            DirtySpec::PredictedBasis(b) => {
                MatroidSpec::new(n, MatroidKind::PredictedBasis { basis: b.clone() })
            }
            DirtySpec::Explicit(sets) => MatroidSpec::new(
                n,
                MatroidKind::Explicit {
                    maximal_sets: sets.clone(),
                },
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomClean {
    Uniform,
    Partition,
    Graphic,
    Any,
}

/// Generator tags. The lower-bound families take their error parameters
/// explicitly and know the resulting errors exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Family {
    /// Dirty = clean = partition into the first `r − 1` elements (capacity
    /// `r − 1`) and the rest (capacity 1).
    LbBasic { r: usize },
    /// Dirty: the first `r_d` elements form the only basis. Clean: `eta_a`
    /// of the others become addable.
    LbAdd { r_d: usize, eta_a: usize },
    /// Dirty as in `lb_add`; clean: `eta_r` of the first `r_d` become loops.
    LbRem { r_d: usize, eta_r: usize },
    /// Weights `n, n−1, …, 1`; dirty classes `{0..n−2}` (capacity `n−2`) and
    /// `{n−1}`. With `eta_r = 1` one random early element joins `n−2` in a
    /// zero-capacity class.
    LbWeighted { eta_r: usize },
    /// `lb_add` shape for the pair-query algorithm. `alternating` puts the
    /// addable elements so that pairs alternately add two and one.
    Pairquery {
        r_d: usize,
        eta_a: usize,
        #[serde(default)]
        alternating: bool,
    },
    Random {
        clean: RandomClean,
        #[serde(default)]
        weighted: bool,
    },
    /// Two random partition matroids with dirty supersets (or arbitrary
    /// dirty partitions when `superset` is false).
    PartitionPair {
        #[serde(default = "yes")]
        superset: bool,
    },
}

fn yes() -> bool {
    true
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::LbBasic { .. } => "lb_basic",
            Family::LbAdd { .. } => "lb_add",
            Family::LbRem { .. } => "lb_rem",
            Family::LbWeighted { .. } => "lb_weighted",
            Family::Pairquery { .. } => "pairquery",
            Family::Random { .. } => "random",
            Family::PartitionPair { .. } => "partition_pair",
        }
    }

    /// `(η_A, η_R)` fixed by construction.
    pub fn known_eta(&self) -> Option<(usize, usize)> {
        match *self {
            Family::LbBasic { .. } => Some((0, 0)),
            Family::LbAdd { eta_a, .. } | Family::Pairquery { eta_a, .. } => Some((eta_a, 0)),
            Family::LbRem { eta_r, .. } => Some((0, eta_r)),
            Family::LbWeighted { eta_r } => Some((0, eta_r)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    #[serde(default)]
    pub weights: Weights,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matroid: Option<MatroidKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirty: Option<DirtySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matroid2: Option<MatroidKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirty2: Option<DirtySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

impl InstanceSpec {
    pub fn family(n: usize, seed: u64, family: Family) -> Self {
        InstanceSpec {
            seed,
            n,
            weights: Weights::Unit,
            matroid: None,
            dirty: None,
            matroid2: None,
            dirty2: None,
            family: Some(family),
        }
    }

    pub fn basis(clean: MatroidKind, dirty: DirtySpec, n: usize) -> Self {
        InstanceSpec {
            seed: 0,
            n,
            weights: Weights::Unit,
            matroid: Some(clean),
            dirty: Some(dirty),
            matroid2: None,
            dirty2: None,
            family: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid("instance", e.to_string()))
    }

    pub fn is_intersection(&self) -> bool {
        self.matroid2.is_some() || matches!(self.family, Some(Family::PartitionPair { .. }))
    }

    /// Short label: family tag or clean kind, then `n` and seed.
    pub fn label(&self) -> String {
        let what = match (&self.family, &self.matroid) {
            (Some(f), _) => f.tag(),
            (None, Some(k)) => k.name(),
            (None, None) => "empty",
        };
        format!("{what}-n{}-s{}", self.n, self.seed)
    }

    /// Expands a family tag into explicit matroid descriptors. Specs that
    /// already carry a clean matroid are returned unchanged.
    pub fn resolve(&self) -> Result<InstanceSpec> {
        if self.matroid.is_some() {
            return Ok(self.clone());
        }
        let family = self.family.as_ref().ok_or_else(|| {
            Error::invalid("matroid", "missing, and no family to generate it from")
        })?;
        let mut out = self.clone();
        generate_family(&mut out, family)?;
        Ok(out)
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug)]
pub enum Instance {
    Basis {
        pair: OraclePair,
        known_eta: Option<(usize, usize)>,
    },
    Intersection {
        pair: IntersectionPair,
    },
}

/// Resolves and materializes a spec.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    let spec = spec.resolve()?;
    let n = spec.n;
    if let Weights::Values(v) = &spec.weights {
        if v.len() != n {
            return Err(Error::invalid(
                "weights",
                format!("{} weights for n = {n}", v.len()),
            ));
        }
    }
    let clean = MatroidSpec::new(n, spec.matroid.clone().expect("resolved"))?;
    let dirty = spec
        .dirty
        .as_ref()
        .ok_or_else(|| Error::invalid("dirty", "missing"))?
        .build(&clean)?;
    if let Some(kind2) = &spec.matroid2 {
        if !spec.weights.is_unit() {
            return Err(Error::invalid(
                "weights",
                "intersection instances are unweighted",
            ));
        }
        let clean2 = MatroidSpec::new(n, kind2.clone())?;
        let dirty2 = spec
            .dirty2
            .as_ref()
            .ok_or_else(|| Error::invalid("dirty2", "missing"))?
            .build(&clean2)?;
        return Ok(Instance::Intersection {
            pair: IntersectionPair::new(clean, clean2, dirty, dirty2)?,
        });
    }
    let pair = OraclePair::new(spec.weights.as_slice(), &clean, &dirty)?;
    Ok(Instance::Basis {
        pair,
        known_eta: spec.family.as_ref().and_then(Family::known_eta),
    })
}

fn partition(classes: Vec<Vec<usize>>, capacities: Vec<usize>) -> MatroidKind {
    MatroidKind::Partition {
        classes,
        capacities,
    }
}

fn generate_family(out: &mut InstanceSpec, family: &Family) -> Result<()> {
    let n = out.n;
    let mut rng = ChaCha8Rng::seed_from_u64(out.seed);
    let need = |ok: bool, field: &str, reason: String| {
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(field, reason))
        }
    };
    match *family {
        Family::LbBasic { r } => {
            need(
                (1..=n).contains(&r),
                "family.r",
                format!("need 1 <= r <= n = {n}, got {r}"),
            )?;
            let kind = partition(
                vec![(0..r - 1).collect(), (r - 1..n).collect()],
                vec![r - 1, 1],
            );
            out.dirty = Some(DirtySpec::Matroid(kind.clone()));
            out.matroid = Some(kind);
        }
        Family::LbAdd { r_d, eta_a } | Family::Pairquery { r_d, eta_a, .. } => {
            need(
                r_d <= n,
                "family.r_d",
                format!("r_d = {r_d} exceeds n = {n}"),
            )?;
            need(
                eta_a <= n - r_d,
                "family.eta_a",
                format!("eta_a = {eta_a} exceeds n - r_d = {}", n - r_d),
            )?;
            let mut rest: Vec<usize> = (r_d..n).collect();
            let addable: Vec<usize> = match family {
                Family::Pairquery {
                    alternating: true, ..
                } => alternating_addable(&rest, eta_a),
                _ => {
                    rest.shuffle(&mut rng);
                    rest[..eta_a].to_vec()
                }
            };
            let mut addable = addable;
            addable.sort_unstable();
            let blocked: Vec<usize> = (r_d..n).filter(|e| !addable.contains(e)).collect();
            out.dirty = Some(DirtySpec::Matroid(partition(
                vec![(0..r_d).collect(), (r_d..n).collect()],
                vec![r_d, 0],
            )));
            out.matroid = Some(partition(
                vec![(0..r_d).collect(), blocked, addable],
                vec![r_d, 0, eta_a],
            ));
        }
        Family::LbRem { r_d, eta_r } => {
            need(
                r_d <= n,
                "family.r_d",
                format!("r_d = {r_d} exceeds n = {n}"),
            )?;
            need(
                eta_r <= r_d,
                "family.eta_r",
                format!("eta_r = {eta_r} exceeds r_d = {r_d}"),
            )?;
            let mut first: Vec<usize> = (0..r_d).collect();
            first.shuffle(&mut rng);
            let mut removed = first[..eta_r].to_vec();
            removed.sort_unstable();
            let kept: Vec<usize> = (0..r_d).filter(|e| !removed.contains(e)).collect();
            let mut blocked = removed;
            blocked.extend(r_d..n);
            out.dirty = Some(DirtySpec::Matroid(partition(
                vec![(0..r_d).collect(), (r_d..n).collect()],
                vec![r_d, 0],
            )));
            out.matroid = Some(partition(vec![kept, blocked], vec![r_d - eta_r, 0]));
        }
        Family::LbWeighted { eta_r } => {
            need(n >= 3, "n", format!("lb_weighted needs n >= 3, got {n}"))?;
            need(
                eta_r <= 1,
                "family.eta_r",
                format!("lb_weighted supports eta_r in {{0, 1}}, got {eta_r}"),
            )?;
            out.weights = Weights::Values(
                (0..n)
                    .map(|i| Ratio::from_integer((n - i) as i64))
                    .collect(),
            );
            let dirty = partition(vec![(0..n - 1).collect(), vec![n - 1]], vec![n - 2, 1]);
            out.matroid = Some(if eta_r == 0 {
                dirty.clone()
            } else {
                let bar = rng.gen_range(0..n - 2);
                partition(
                    vec![
                        (0..n - 2).filter(|&e| e != bar).collect(),
                        vec![bar, n - 2],
                        vec![n - 1],
                    ],
                    vec![n - 3, 0, 1],
                )
            });
            out.dirty = Some(DirtySpec::Matroid(dirty));
        }
        Family::Random { clean, weighted } => {
            need(n >= 1, "n", "random instances need n >= 1".into())?;
            let (kind, dirty) = random_basis_pair(n, clean, &mut rng)?;
            out.matroid = Some(kind);
            out.dirty = Some(dirty);
            if weighted {
                out.weights = Weights::Values(
                    (0..n)
                        .map(|_| {
                            Ratio::new(rng.gen_range(1..=8), *[1, 2].choose(&mut rng).unwrap())
                        })
                        .collect(),
                );
            }
        }
        Family::PartitionPair { superset } => {
            need(n >= 1, "n", "partition pairs need n >= 1".into())?;
            let c1 = random_partition(n, &mut rng, 1);
            let c2 = random_partition(n, &mut rng, 1);
            let d1 = dirty_partition(&c1, superset, &mut rng);
            let d2 = dirty_partition(&c2, superset, &mut rng);
            out.matroid = Some(c1);
            out.matroid2 = Some(c2);
            out.dirty = Some(DirtySpec::Matroid(d1));
            out.dirty2 = Some(DirtySpec::Matroid(d2));
        }
    }
    Ok(())
}

/// Positions inside `rest` taken in pairs: pair `2i` contributes both
/// elements, pair `2i+1` its first, until `eta_a` are placed.
fn alternating_addable(rest: &[usize], eta_a: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(eta_a);
    for (i, pair) in rest.chunks(2).enumerate() {
        let take = if i % 2 == 0 { 2 } else { 1 };
        for &e in pair.iter().take(take) {
            if picked.len() < eta_a {
                picked.push(e);
            }
        }
    }
    // top up from the leftovers if the pattern ran out
    for &e in rest {
        if picked.len() == eta_a {
            break;
        }
        if !picked.contains(&e) {
            picked.push(e);
        }
    }
    picked
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng, min_cap: usize) -> MatroidKind {
    let count = rng.gen_range(1..=n.clamp(1, 4));
    let mut classes = vec![Vec::new(); count];
    for e in 0..n {
        classes[rng.gen_range(0..count)].push(e);
    }
    let capacities = classes
        .iter()
        .map(|c| {
            if c.is_empty() {
                0
            } else {
                rng.gen_range(min_cap.min(c.len())..=c.len())
            }
        })
        .collect();
    partition(classes, capacities)
}

fn random_graphic(n: usize, rng: &mut ChaCha8Rng) -> MatroidKind {
    let vertices = rng.gen_range(2..=(n / 2 + 2).max(3));
    let edges = (0..n)
        .map(|_| {
            let u = rng.gen_range(0..vertices);
            if rng.gen_bool(0.05) {
                (u, u)
            } else {
                (u, (u + rng.gen_range(1..vertices)) % vertices)
            }
        })
        .collect();
    MatroidKind::Graphic { vertices, edges }
}

fn random_basis_pair(
    n: usize,
    clean: RandomClean,
    rng: &mut ChaCha8Rng,
) -> Result<(MatroidKind, DirtySpec)> {
    let clean = match clean {
        RandomClean::Any => *[
            RandomClean::Uniform,
            RandomClean::Partition,
            RandomClean::Graphic,
        ]
        .choose(rng)
        .unwrap(),
        c => c,
    };
    let kind = match clean {
        RandomClean::Uniform => MatroidKind::Uniform {
            k: rng.gen_range(0..=n),
        },
        RandomClean::Partition => random_partition(n, rng, 0),
        _ => random_graphic(n, rng),
    };
    let seed = rng.gen();
    let count = rng.gen_range(1..=3);
    let roll = rng.gen_range(0..100);
    let dirty = if roll < 12 {
        DirtySpec::Perturb(PerturbationSpec::identity())
    } else if roll < 27 {
        DirtySpec::Perturb(PerturbationSpec::new(
            Perturbation::PredictedBasis {
                add_wrong: rng.gen_range(0..=2),
                drop: rng.gen_range(0..=2),
            },
            seed,
        ))
    } else if roll < 35 {
        // an unrelated matroid: exercises the robust branches
        DirtySpec::Matroid(match rng.gen_range(0..3) {
            0 => MatroidKind::Uniform {
                k: rng.gen_range(0..=n),
            },
            1 => random_partition(n, rng, 0),
            _ => random_graphic(n, rng),
        })
    } else {
        match &kind {
            MatroidKind::Uniform { k } => {
                let k = if rng.gen_bool(0.5) {
                    k + count
                } else {
                    k.saturating_sub(count)
                };
                DirtySpec::Matroid(MatroidKind::Uniform { k: k.min(n) })
            }
            MatroidKind::Partition { classes, .. } => {
                let p = if classes.len() >= 2 && rng.gen_bool(0.5) {
                    Perturbation::ClassSwap { count }
                } else {
                    Perturbation::CapacityShift { count }
                };
                DirtySpec::Perturb(PerturbationSpec::new(p, seed))
            }
            _ => DirtySpec::Perturb(PerturbationSpec::new(
                Perturbation::EdgeRewire { count },
                seed,
            )),
        }
    };
    Ok((kind, dirty))
}

/// Superset mode raises capacities or merges two classes; otherwise
/// capacities move both ways.
fn dirty_partition(clean: &MatroidKind, superset: bool, rng: &mut ChaCha8Rng) -> MatroidKind {
    let MatroidKind::Partition {
        classes,
        capacities,
    } = clean
    else {
        unreachable!("partition pairs are built from partitions")
    };
    let mut classes = classes.clone();
    let mut caps = capacities.clone();
    match rng.gen_range(0..4) {
        0 => {}
        1 if classes.len() >= 2 => {
            let a = rng.gen_range(0..classes.len());
            let b = (a + rng.gen_range(1..classes.len())) % classes.len();
            let (lo, hi) = (a.min(b), a.max(b));
            let moved = classes.remove(hi);
            let cap = caps.remove(hi);
            classes[lo].extend(moved);
            classes[lo].sort_unstable();
            caps[lo] += cap + if superset { rng.gen_range(0..=1) } else { 0 };
        }
        _ => {
            for _ in 0..rng.gen_range(1..=3) {
                let c = rng.gen_range(0..caps.len());
                if superset || caps[c] == 0 || rng.gen_bool(0.5) {
                    caps[c] += 1;
                } else {
                    caps[c] -= 1;
                }
            }
        }
    }
    if !superset && rng.gen_bool(0.3) && classes.len() >= 2 {
        // move one element to another class
        let from = rng.gen_range(0..classes.len());
        if let Some(e) = classes[from].pop() {
            let to = (from + 1) % classes.len();
            classes[to].push(e);
            classes[to].sort_unstable();
        }
    }
    partition(classes, caps)
}
