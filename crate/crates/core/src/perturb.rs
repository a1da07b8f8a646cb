use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{greedy_unbilled, MatroidKind, MatroidSpec};

/// How a dirty matroid is derived from the clean one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    Identity,
    /// Move `count` random elements to a different class.
    ClassSwap {
        count: usize,
    },
    /// Explicit `(element, new class)` moves.
    ClassMove {
        moves: Vec<(usize, usize)>,
    },
    /// `count` random unit steps on class capacities.
    CapacityShift {
        count: usize,
    },
    /// Give `count` random edges new random endpoints.
    EdgeRewire {
        count: usize,
    },
    /// Explicit `(edge, new endpoints)` edits; `(v, v)` marks an absent edge.
    StaleSnapshot {
        edits: Vec<(usize, (usize, usize))>,
    },
    /// A clean basis with `drop` members removed and `add_wrong` outsiders
    /// added, served as the matroid `(E, 2^B)`.
    PredictedBasis {
        add_wrong: usize,
        drop: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    #[serde(flatten)]
    pub perturbation: Perturbation,
    #[serde(default)]
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn new(perturbation: Perturbation, seed: u64) -> Self {
        PerturbationSpec { perturbation, seed }
    }

    pub fn identity() -> Self {
        Self::new(Perturbation::Identity, 0)
    }

    fn name(&self) -> &'static str {
        match self.perturbation {
            Perturbation::Identity => "identity",
            Perturbation::ClassSwap { .. } => "class_swap",
            Perturbation::ClassMove { .. } => "class_move",
            Perturbation::CapacityShift { .. } => "capacity_shift",
            Perturbation::EdgeRewire { .. } => "edge_rewire",
            Perturbation::StaleSnapshot { .. } => "stale_snapshot",
            Perturbation::PredictedBasis { .. } => "predicted_basis",
        }
    }
}

/// Builds the dirty spec. Labels are the clean spec's input labels.
pub fn make_dirty(clean: &MatroidSpec, pert: &PerturbationSpec) -> Result<MatroidSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(pert.seed);
    let n = clean.n();
    let incompatible = || Error::IncompatiblePerturbation {
        perturbation: pert.name().into(),
        kind: clean.kind().name().into(),
    };
    let kind = match (&pert.perturbation, clean.kind()) {
        (Perturbation::Identity, k) => k.clone(),
        (
            Perturbation::ClassSwap { count },
            MatroidKind::Partition {
                classes,
                capacities,
            },
        ) => {
            if classes.len() < 2 && *count > 0 {
                return Err(incompatible());
            }
            let mut owner = class_owner(n, classes);
            let mut elements: Vec<usize> = (0..n).collect();
            elements.shuffle(&mut rng);
            for &e in elements.iter().take(*count) {
                let shift = rng.gen_range(1..classes.len());
                owner[e] = (owner[e] + shift) % classes.len();
            }
            MatroidKind::Partition {
                classes: classes_from_owner(&owner, classes.len()),
                capacities: capacities.clone(),
            }
        }
        (
            Perturbation::ClassMove { moves },
            MatroidKind::Partition {
                classes,
                capacities,
            },
        ) => {
            let mut owner = class_owner(n, classes);
            for &(e, c) in moves {
                if e >= n || c >= classes.len() {
                    return Err(Error::invalid("moves", format!("({e}, {c}) out of range")));
                }
                owner[e] = c;
            }
            MatroidKind::Partition {
                classes: classes_from_owner(&owner, classes.len()),
                capacities: capacities.clone(),
            }
        }
        (
            Perturbation::CapacityShift { count },
            MatroidKind::Partition {
                classes,
                capacities,
            },
        ) => {
            let mut caps = capacities.clone();
            for _ in 0..*count {
                if caps.is_empty() {
                    break;
                }
                let c = rng.gen_range(0..caps.len());
                if caps[c] == 0 || rng.gen_bool(0.5) {
                    caps[c] += 1;
                } else {
                    caps[c] -= 1;
                }
            }
            MatroidKind::Partition {
                classes: classes.clone(),
                capacities: caps,
            }
        }
        (Perturbation::EdgeRewire { count }, MatroidKind::Graphic { vertices, edges }) => {
            let mut edges = edges.clone();
            if *vertices >= 2 {
                let mut ids: Vec<usize> = (0..n).collect();
                ids.shuffle(&mut rng);
                for &j in ids.iter().take(*count) {
                    let u = rng.gen_range(0..*vertices);
                    let v = (u + rng.gen_range(1..*vertices)) % vertices;
                    edges[j] = (u, v);
                }
            }
            MatroidKind::Graphic {
                vertices: *vertices,
                edges,
            }
        }
        (Perturbation::StaleSnapshot { edits }, MatroidKind::Graphic { vertices, edges }) => {
            let mut edges = edges.clone();
            for &(j, e) in edits {
                if j >= n {
                    return Err(Error::invalid("edits", format!("edge {j} out of range")));
                }
                edges[j] = e;
            }
            MatroidKind::Graphic {
                vertices: *vertices,
                edges,
            }
        }
        (Perturbation::PredictedBasis { add_wrong, drop }, _) => {
            let basis = greedy_unbilled(clean);
            let mut inside = basis.to_vec();
            let mut outside = basis.complement().to_vec();
            inside.shuffle(&mut rng);
            outside.shuffle(&mut rng);
            let mut predicted: Vec<usize> = inside.iter().skip(*drop).copied().collect();
            predicted.extend(outside.iter().take(*add_wrong));
            predicted.sort_unstable();
            MatroidKind::PredictedBasis { basis: predicted }
        }
        _ => return Err(incompatible()),
    };
    MatroidSpec::new(n, kind)
}

fn class_owner(n: usize, classes: &[Vec<usize>]) -> Vec<usize> {
    let mut owner = vec![0; n];
    for (c, class) in classes.iter().enumerate() {
        for &e in class {
            owner[e] = c;
        }
    }
    owner
}

fn classes_from_owner(owner: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut classes = vec![Vec::new(); count];
    for (e, &c) in owner.iter().enumerate() {
        classes[c].push(e);
    }
    classes
}
