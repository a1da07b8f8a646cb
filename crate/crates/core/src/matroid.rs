use serde::{Deserialize, Serialize};

use crate::error::{check_guard, Error, Result, BASIS_GUARD};
use crate::ground::GroundSet;
use crate::set::{combinations, ElementSet};

/// Serialized description of an independence system over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidKind {
    Uniform {
        k: usize,
    },
    Partition {
        classes: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    /// Element `j` is edge `edges[j]`; an edge `(v, v)` is a loop.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    PredictedBasis {
        basis: Vec<usize>,
    },
    /// Downward closure of the listed sets. Not necessarily a matroid.
    Explicit {
        maximal_sets: Vec<Vec<usize>>,
    },
}

impl MatroidKind {
    pub fn name(&self) -> &'static str {
        match self {
            MatroidKind::Uniform { .. } => "uniform",
            MatroidKind::Partition { .. } => "partition",
            MatroidKind::Graphic { .. } => "graphic",
            MatroidKind::PredictedBasis { .. } => "predicted_basis",
            MatroidKind::Explicit { .. } => "explicit",
        }
    }
}

#[derive(Clone, Debug)]
enum Compiled {
    Uniform(usize),
    Partition {
        masks: Vec<ElementSet>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Predicted(ElementSet),
    Explicit {
        sets: Vec<ElementSet>,
        matroid: Option<bool>,
    },
}

/// A validated [`MatroidKind`] bound to a ground set size.
#[derive(Clone, Debug)]
pub struct MatroidSpec {
    n: usize,
    kind: MatroidKind,
    compiled: Compiled,
}

impl PartialEq for MatroidSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.kind == other.kind
    }
}

impl MatroidSpec {
    pub fn new(n: usize, kind: MatroidKind) -> Result<Self> {
        let in_range = |field: &str, items: &[usize]| -> Result<()> {
            match items.iter().find(|&&i| i >= n) {
                Some(i) => Err(Error::invalid(field, format!("element {i} outside 0..{n}"))),
                None => Ok(()),
            }
        };
        let compiled = match &kind {
            MatroidKind::Uniform { k } => Compiled::Uniform(*k),
            MatroidKind::Partition {
                classes,
                capacities,
            } => {
                if classes.len() != capacities.len() {
                    return Err(Error::invalid(
                        "capacities",
                        format!(
                            "{} classes but {} capacities",
                            classes.len(),
                            capacities.len()
                        ),
                    ));
                }
                let mut seen = ElementSet::empty(n);
                let mut masks = Vec::with_capacity(classes.len());
                for (c, class) in classes.iter().enumerate() {
                    in_range(&format!("classes[{c}]"), class)?;
                    let mask = ElementSet::from_indices(n, class.iter().copied());
                    if mask.len() != class.len() || seen.intersection_len(&mask) > 0 {
                        return Err(Error::invalid(
                            format!("classes[{c}]"),
                            "classes overlap or repeat an element",
                        ));
                    }
                    seen = seen.union(&mask);
                    masks.push(mask);
                }
                if seen.len() != n {
                    let missing = seen.complement().to_vec();
                    return Err(Error::invalid(
                        "classes",
                        format!("elements {missing:?} belong to no class"),
                    ));
                }
                Compiled::Partition {
                    masks,
                    caps: capacities.clone(),
                }
            }
            MatroidKind::Graphic { vertices, edges } => {
                if edges.len() != n {
                    return Err(Error::invalid(
                        "edges",
                        format!("{} edges for {n} elements", edges.len()),
                    ));
                }
                if let Some(j) = edges
                    .iter()
                    .position(|&(u, v)| u >= *vertices || v >= *vertices)
                {
                    return Err(Error::invalid(
                        format!("edges[{j}]"),
                        format!("endpoint outside 0..{vertices}"),
                    ));
                }
                Compiled::Graphic {
                    vertices: *vertices,
                    edges: edges.clone(),
                }
            }
            MatroidKind::PredictedBasis { basis } => {
                in_range("basis", basis)?;
                Compiled::Predicted(ElementSet::from_indices(n, basis.iter().copied()))
            }
            MatroidKind::Explicit { maximal_sets } => {
                let mut sets = Vec::with_capacity(maximal_sets.len());
                for (i, m) in maximal_sets.iter().enumerate() {
                    in_range(&format!("maximal_sets[{i}]"), m)?;
                    sets.push(ElementSet::from_indices(n, m.iter().copied()));
                }
                let sets = normalize_maximal(sets, n);
                let matroid = (n <= BASIS_GUARD).then(|| satisfies_basis_exchange(&sets));
                Compiled::Explicit { sets, matroid }
            }
        };
        Ok(MatroidSpec { n, kind, compiled })
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        Self::new(n, MatroidKind::Uniform { k }).expect("uniform specs are always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    /// False for explicit systems that fail (or were too large to check) the
    /// exchange axiom.
    pub fn is_matroid(&self) -> bool {
        match &self.compiled {
            Compiled::Explicit { matroid, .. } => *matroid == Some(true),
            _ => true,
        }
    }

    /// Inclusion-maximal listed sets of an explicit system.
    pub fn explicit_sets(&self) -> Option<&[ElementSet]> {
        match &self.compiled {
            Compiled::Explicit { sets, .. } => Some(sets),
            _ => None,
        }
    }

    pub fn is_independent(&self, s: &ElementSet) -> bool {
        match &self.compiled {
            Compiled::Uniform(k) => s.len() <= *k,
            Compiled::Partition { masks, caps } => masks
                .iter()
                .zip(caps)
                .all(|(m, &cap)| s.intersection_len(m) <= cap),
            Compiled::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                s.iter().all(|j| uf.union(edges[j].0, edges[j].1))
            }
            Compiled::Predicted(b) => s.is_subset(b),
            Compiled::Explicit { sets, .. } => sets.iter().any(|m| s.is_subset(m)),
        }
    }

    pub fn rank(&self, s: &ElementSet) -> usize {
        match &self.compiled {
            Compiled::Uniform(k) => s.len().min(*k),
            Compiled::Partition { masks, caps } => masks
                .iter()
                .zip(caps)
                .map(|(m, &cap)| s.intersection_len(m).min(cap))
                .sum(),
            Compiled::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                s.iter()
                    .filter(|&j| uf.union(edges[j].0, edges[j].1))
                    .count()
            }
            Compiled::Predicted(b) => s.intersection_len(b),
            Compiled::Explicit { sets, .. } => sets
                .iter()
                .map(|m| s.intersection_len(m))
                .max()
                .unwrap_or(0),
        }
    }

    pub fn full_rank(&self) -> usize {
        self.rank(&ElementSet::full(self.n))
    }

    /// Rewrites the spec so that input element `i` becomes `position[i]`.
    pub fn relabel(&self, position: &[usize]) -> Self {
        let map = |v: &[usize]| -> Vec<usize> {
            let mut out: Vec<usize> = v.iter().map(|&i| position[i]).collect();
            out.sort_unstable();
            out
        };
        let kind = match &self.kind {
            MatroidKind::Uniform { k } => MatroidKind::Uniform { k: *k },
            MatroidKind::Partition {
                classes,
                capacities,
            } => MatroidKind::Partition {
                classes: classes.iter().map(|c| map(c)).collect(),
                capacities: capacities.clone(),
            },
            MatroidKind::Graphic { vertices, edges } => {
                let mut relabeled = vec![(0, 0); edges.len()];
                for (i, &e) in edges.iter().enumerate() {
                    relabeled[position[i]] = e;
                }
                MatroidKind::Graphic {
                    vertices: *vertices,
                    edges: relabeled,
                }
            }
            MatroidKind::PredictedBasis { basis } => {
                MatroidKind::PredictedBasis { basis: map(basis) }
            }
            MatroidKind::Explicit { maximal_sets } => MatroidKind::Explicit {
                maximal_sets: maximal_sets.iter().map(|m| map(m)).collect(),
            },
        };
        MatroidSpec::new(self.n, kind).expect("relabeling preserves validity")
    }
}

/// Drops duplicates and sets contained in other listed sets.
fn normalize_maximal(mut sets: Vec<ElementSet>, n: usize) -> Vec<ElementSet> {
    if sets.is_empty() {
        return vec![ElementSet::empty(n)];
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.lex_cmp(b)));
    sets.dedup();
    let mut kept: Vec<ElementSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept.sort_by(|a, b| a.lex_cmp(b));
    kept
}

fn satisfies_basis_exchange(bases: &[ElementSet]) -> bool {
    bases.iter().all(|b1| {
        bases.iter().all(|b2| {
            b1.difference(b2).iter().all(|x| {
                let without = b1.without(x);
                b2.difference(b1)
                    .iter()
                    .any(|y| bases.contains(&without.with(y)))
            })
        })
    })
}

pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Greedy in canonical order without billing. Used to fix the designated
/// dirty basis and as a test baseline.
pub fn greedy_unbilled(spec: &MatroidSpec) -> ElementSet {
    let mut b = ElementSet::empty(spec.n());
    for e in 0..spec.n() {
        b.insert(e);
        if !spec.is_independent(&b) {
            b.remove(e);
        }
    }
    b
}

/// All maximal independent sets of maximum weight.
pub fn enumerate_max_weight_bases(spec: &MatroidSpec, g: &GroundSet) -> Result<Vec<ElementSet>> {
    check_guard(spec.n(), BASIS_GUARD)?;
    let candidates: Vec<ElementSet> = match &spec.compiled {
        Compiled::Predicted(b) => vec![b.clone()],
        Compiled::Explicit { sets, .. } => sets.clone(),
        _ => {
            let n = spec.n();
            let r = spec.full_rank();
            combinations(n, r)
                .map(|m| ElementSet::from_mask(n, m))
                .filter(|s| spec.is_independent(s))
                .collect()
        }
    };
    Ok(keep_heaviest(candidates, g))
}

/// Inclusion-maximal independent sets regardless of weight.
pub fn enumerate_maximal_sets(spec: &MatroidSpec) -> Result<Vec<ElementSet>> {
    check_guard(spec.n(), BASIS_GUARD)?;
    Ok(match &spec.compiled {
        Compiled::Explicit { sets, .. } => sets.clone(),
        _ => enumerate_max_weight_bases(spec, &GroundSet::unit(spec.n()))?,
    })
}

fn keep_heaviest(candidates: Vec<ElementSet>, g: &GroundSet) -> Vec<ElementSet> {
    let best = candidates.iter().map(|s| g.set_key(s)).max();
    let mut out: Vec<ElementSet> = candidates
        .into_iter()
        .filter(|s| Some(g.set_key(s)) == best)
        .collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}
