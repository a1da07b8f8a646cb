//! Matroid intersection: exchange graphs, the augmenting-path baseline,
//! augmenting paths found with dirty oracles, and the warm start.

use std::collections::{HashMap, VecDeque};

use crate::algorithms::smallest_dependent_prefix;
use crate::error::{Error, Result};
use crate::matroid::{MatroidKind, MatroidSpec};
use crate::oracle::{QueryKind, QueryLedger, Role};
use crate::set::ElementSet;

/// Two clean and two dirty matroids on `0..n` (unit weights, identity order).
#[derive(Clone, Debug)]
pub struct IntersectionPair {
    clean: [MatroidSpec; 2],
    dirty: [MatroidSpec; 2],
}

impl IntersectionPair {
    pub fn new(
        clean1: MatroidSpec,
        clean2: MatroidSpec,
        dirty1: MatroidSpec,
        dirty2: MatroidSpec,
    ) -> Result<Self> {
        let n = clean1.n();
        for (name, m) in [
            ("clean2", &clean2),
            ("dirty1", &dirty1),
            ("dirty2", &dirty2),
        ] {
            if m.n() != n {
                return Err(Error::invalid(
                    name,
                    format!("n = {} but clean1 has n = {n}", m.n()),
                ));
            }
        }
        Ok(IntersectionPair {
            clean: [clean1, clean2],
            dirty: [dirty1, dirty2],
        })
    }

    pub fn n(&self) -> usize {
        self.clean[0].n()
    }

    /// `slot` is 1 or 2.
    pub fn spec(&self, role: Role, slot: u8) -> &MatroidSpec {
        let i = usize::from(slot) - 1;
        match role {
            Role::Clean => &self.clean[i],
            Role::Dirty => &self.dirty[i],
        }
    }

    pub fn session(&self) -> IntersectionSession<'_> {
        IntersectionSession {
            pair: self,
            ledger: QueryLedger::new(self.n()),
        }
    }
}

pub struct IntersectionSession<'a> {
    pair: &'a IntersectionPair,
    ledger: QueryLedger,
}

impl<'a> IntersectionSession<'a> {
    pub fn independent(&mut self, role: Role, slot: u8, s: &ElementSet) -> bool {
        let answer = self.pair.spec(role, slot).is_independent(s);
        self.ledger
            .record(role, slot, QueryKind::Independence, s, answer as usize);
        answer
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }
}

/// Sets already known to be dirty-independent but clean-dependent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FalseQueryLists {
    pub f1: Vec<ElementSet>,
    pub f2: Vec<ElementSet>,
}

impl FalseQueryLists {
    fn list(&self, slot: u8) -> &[ElementSet] {
        if slot == 1 {
            &self.f1
        } else {
            &self.f2
        }
    }

    fn excludes(&self, slot: u8, s: &ElementSet) -> bool {
        self.list(slot).contains(s)
    }

    fn push(&mut self, slot: u8, s: ElementSet) {
        let list = if slot == 1 {
            &mut self.f1
        } else {
            &mut self.f2
        };
        if !list.contains(&s) {
            list.push(s);
        }
    }

    pub fn len(&self) -> usize {
        self.f1.len() + self.f2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Arc `x → y` iff `X − x + y ∈ I^1`; arc `y → x` iff `X − x + y ∈ I^2`.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub x: ElementSet,
    pub y1: ElementSet,
    pub y2: ElementSet,
    /// Sorted out-neighbours per element.
    pub out: Vec<Vec<usize>>,
}

impl ExchangeGraph {
    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from].binary_search(&to).is_ok()
    }

    /// Lexicographically smallest among the shortest `Y1 → Y2` paths.
    pub fn shortest_path(&self) -> Option<Vec<usize>> {
        let dist = self.distance_to_y2();
        let start = self
            .y1
            .iter()
            .filter(|&y| dist[y].is_some())
            .min_by_key(|&y| (dist[y], y))?;
        let mut path = vec![start];
        let mut cur = start;
        while let Some(d) = dist[cur].filter(|&d| d > 0) {
            cur = *self.out[cur]
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("distance labels are consistent");
            path.push(cur);
        }
        Some(path)
    }

    /// Elements that can reach `Y2`.
    pub fn reaching_y2(&self) -> ElementSet {
        let dist = self.distance_to_y2();
        ElementSet::from_indices(
            self.x.universe(),
            (0..dist.len()).filter(|&v| dist[v].is_some()),
        )
    }

    fn distance_to_y2(&self) -> Vec<Option<usize>> {
        let n = self.out.len();
        let mut incoming = vec![Vec::new(); n];
        for (v, outs) in self.out.iter().enumerate() {
            for &w in outs {
                incoming[w].push(v);
            }
        }
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for y in self.y2.iter() {
            dist[y] = Some(0);
            queue.push_back(y);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &u in &incoming[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Builds `D(X)` from `role`'s oracles, skipping sets listed in
/// `exclusions`. At most `2|X|(n−|X|) + 2(n−|X|)` queries.
pub fn build_exchange_graph(
    x: &ElementSet,
    session: &mut IntersectionSession<'_>,
    role: Role,
    exclusions: &FalseQueryLists,
) -> ExchangeGraph {
    let n = session.n();
    let ask = |session: &mut IntersectionSession<'_>, slot: u8, s: &ElementSet| {
        !exclusions.excludes(slot, s) && session.independent(role, slot, s)
    };
    let mut y1 = ElementSet::empty(n);
    let mut y2 = ElementSet::empty(n);
    let mut out = vec![Vec::new(); n];
    let members = x.to_vec();
    for y in x.complement().iter() {
        let plus = x.with(y);
        if ask(session, 1, &plus) {
            y1.insert(y);
        }
        if ask(session, 2, &plus) {
            y2.insert(y);
        }
        for &xe in &members {
            let swap = plus.without(xe);
            if ask(session, 1, &swap) {
                out[xe].push(y);
            }
            if ask(session, 2, &swap) {
                out[y].push(xe);
            }
        }
    }
    for o in &mut out {
        o.sort_unstable();
    }
    ExchangeGraph {
        x: x.clone(),
        y1,
        y2,
        out,
    }
}

/// `X △ P` for a path `y0, x1, y1, …, xm, ym`.
fn apply_path(x: &ElementSet, path: &[usize]) -> ElementSet {
    let mut out = x.clone();
    for &v in path {
        if !out.remove(v) {
            out.insert(v);
        }
    }
    out
}

/// `U` with `|X| = r1(U) + r2(E \ U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub u: ElementSet,
}

impl OptimalityCertificate {
    pub fn holds(&self, x: &ElementSet, m1: &MatroidSpec, m2: &MatroidSpec) -> bool {
        x.len() == m1.rank(&self.u) + m2.rank(&self.u.complement())
    }
}

/// Shortest augmenting paths on `role`'s oracles until none is left.
pub fn textbook_intersection(
    session: &mut IntersectionSession<'_>,
    role: Role,
) -> (ElementSet, OptimalityCertificate) {
    let n = session.n();
    let mut x = ElementSet::empty(n);
    let none = FalseQueryLists::default();
    loop {
        let g = build_exchange_graph(&x, session, role, &none);
        match g.shortest_path() {
            Some(path) => x = apply_path(&x, &path),
            None => {
                let u = if g.y1.is_empty() {
                    ElementSet::full(n)
                } else if g.y2.is_empty() {
                    ElementSet::empty(n)
                } else {
                    g.reaching_y2()
                };
                return (x, OptimalityCertificate { u });
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct DirtyIntersectionRun {
    pub x: ElementSet,
    pub false_queries: FalseQueryLists,
    /// Times the boundary found by binary search was a valid arc and a
    /// linear scan of earlier arcs was needed.
    pub fallback_scans: usize,
}

/// Largest `n` at which the superset precondition is checked exhaustively.
pub const SUPERSET_CHECK_LIMIT: usize = 14;

/// Augmenting paths found in the dirty exchange graph and verified with
/// two clean queries each. Clean matroids must be partition matroids and
/// each dirty matroid a superset of its clean one.
pub fn dirty_intersection(session: &mut IntersectionSession<'_>) -> Result<DirtyIntersectionRun> {
    let n = session.n();
    let pair = session.pair;
    for slot in [1u8, 2] {
        // a uniform matroid is a partition matroid with one class
        if !matches!(
            pair.spec(Role::Clean, slot).kind(),
            MatroidKind::Partition { .. } | MatroidKind::Uniform { .. }
        ) {
            return Err(Error::Incompatible {
                algorithm: "intersect-dirty".into(),
                reason: format!("clean matroid {slot} is not a partition matroid"),
            });
        }
        if n <= SUPERSET_CHECK_LIMIT {
            check_superset(
                pair.spec(Role::Clean, slot),
                pair.spec(Role::Dirty, slot),
                slot,
            )?;
        }
    }

    let mut x = ElementSet::empty(n);
    let mut lists = FalseQueryLists::default();
    let mut fallback_scans = 0;
    // clean answers seen this run, so a confirming query is never repeated
    let mut known: HashMap<(u8, ElementSet), bool> = HashMap::new();
    let clean = |session: &mut IntersectionSession<'_>,
                 known: &mut HashMap<(u8, ElementSet), bool>,
                 slot: u8,
                 s: &ElementSet|
     -> Result<bool> {
        let ok = session.independent(Role::Clean, slot, s);
        if ok && !session.independent(Role::Dirty, slot, s) {
            return Err(Error::SupersetViolation {
                slot,
                set: format!("{s:?}"),
            });
        }
        known.insert((slot, s.clone()), ok);
        Ok(ok)
    };

    loop {
        let g = build_exchange_graph(&x, session, Role::Dirty, &lists);
        let Some(path) = g.shortest_path() else {
            break;
        };
        let next = apply_path(&x, &path);
        let ok1 = clean(session, &mut known, 1, &next)?;
        let ok2 = clean(session, &mut known, 2, &next)?;
        if ok1 && ok2 {
            x = next;
            continue;
        }
        let slot = if ok1 { 2 } else { 1 };
        let ys: Vec<usize> = path.iter().step_by(2).copied().collect();
        let xs: Vec<usize> = path.iter().skip(1).step_by(2).copied().collect();
        let m = xs.len();
        // Exchange sets in path order, each paired with the set defining
        // the corresponding arc of the exchange graph.
        let (probes, defining): (Vec<ElementSet>, Vec<ElementSet>) = if slot == 1 {
            // pairs (x_i, y_i), y0 free
            let mut cur = x.with(ys[0]);
            let mut probes = vec![cur.clone()];
            let mut defining = vec![x.with(ys[0])];
            for i in 1..=m {
                cur.remove(xs[i - 1]);
                cur.insert(ys[i]);
                probes.push(cur.clone());
                defining.push(x.without(xs[i - 1]).with(ys[i]));
            }
            (probes, defining)
        } else {
            // pairs (x_i, y_{i-1}), y_m free
            let mut cur = x.clone();
            let mut probes = Vec::new();
            let mut defining = Vec::new();
            for i in 1..=m {
                cur.remove(xs[i - 1]);
                cur.insert(ys[i - 1]);
                probes.push(cur.clone());
                defining.push(x.without(xs[i - 1]).with(ys[i - 1]));
            }
            probes.push(next.clone());
            defining.push(x.with(ys[m]));
            (probes, defining)
        };
        // probes[j] is dependent for j = last; X itself stands before 0
        let last = probes.len() - 1;
        let mut failure = None;
        let boundary = smallest_dependent_prefix(None, last, |j| {
            if failure.is_some() {
                return true;
            }
            match clean(session, &mut known, slot, &probes[j]) {
                Ok(ok) => !ok,
                Err(e) => {
                    failure = Some(e);
                    true
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let confirmed = match known.get(&(slot, defining[boundary].clone())) {
            Some(&ok) => !ok,
            None => !clean(session, &mut known, slot, &defining[boundary])?,
        };
        if confirmed {
            lists.push(slot, defining[boundary].clone());
            continue;
        }
        fallback_scans += 1;
        let mut found = false;
        for d in &defining[..boundary] {
            let dependent = match known.get(&(slot, d.clone())) {
                Some(&ok) => !ok,
                None => !clean(session, &mut known, slot, d)?,
            };
            if dependent {
                lists.push(slot, d.clone());
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Incompatible {
                algorithm: "intersect-dirty".into(),
                reason:
                    "no false arc on a failed dirty path; clean matroids are not partition matroids"
                        .into(),
            });
        }
    }
    Ok(DirtyIntersectionRun {
        x,
        false_queries: lists,
        fallback_scans,
    })
}

fn check_superset(clean: &MatroidSpec, dirty: &MatroidSpec, slot: u8) -> Result<()> {
    let n = clean.n();
    for mask in 0..1u64 << n {
        let s = ElementSet::from_mask(n, mask);
        if clean.is_independent(&s) && !dirty.is_independent(&s) {
            return Err(Error::SupersetViolation {
                slot,
                set: format!("{s:?}"),
            });
        }
    }
    Ok(())
}

/// Maximum dirty common independent set, then for each clean matroid in
/// turn: check, and while dependent remove the end of the smallest
/// dependent prefix.
pub fn warm_start(session: &mut IntersectionSession<'_>) -> (ElementSet, ElementSet) {
    let (s_d, _) = textbook_intersection(session, Role::Dirty);
    let mut s = s_d.clone();
    for slot in [1u8, 2] {
        let mut lo: Option<usize> = None;
        while !session.independent(Role::Clean, slot, &s) {
            let members = s.to_vec();
            let snapshot = s.clone();
            let p = smallest_dependent_prefix(lo, members.len() - 1, |p| {
                !session.independent(Role::Clean, slot, &snapshot.prefix(members[p]))
            });
            s.remove(members[p]);
            lo = p.checked_sub(1);
        }
    }
    (s, s_d)
}
