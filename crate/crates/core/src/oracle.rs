use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Weight};
use crate::matroid::{greedy_unbilled, MatroidKind, MatroidSpec};
use crate::set::ElementSet;

/// Transcript set storage stops above this ground set size.
pub const SET_STORAGE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Clean,
    Dirty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Independence,
    Rank,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub seq: u64,
    pub role: Role,
    /// 0 for a single matroid, 1 or 2 inside an intersection run.
    pub slot: u8,
    pub kind: QueryKind,
    /// 1/0 for independence queries, the rank otherwise.
    pub answer: usize,
    pub set: Option<ElementSet>,
}

impl QueryRecord {
    /// Whether the record proves its set independent (`Some(true)`) or
    /// dependent (`Some(false)`).
    pub fn independence(&self) -> Option<bool> {
        let size = self.set.as_ref()?.len();
        Some(match self.kind {
            QueryKind::Independence => self.answer == 1,
            QueryKind::Rank => self.answer == size,
        })
    }
}

#[derive(Clone, Debug)]
pub struct QueryLedger {
    n: usize,
    cost_p: Ratio<i64>,
    clean_independence: u64,
    clean_rank: u64,
    dirty: u64,
    records: Vec<QueryRecord>,
}

impl QueryLedger {
    pub fn new(n: usize) -> Self {
        QueryLedger {
            n,
            cost_p: Ratio::one(),
            clean_independence: 0,
            clean_rank: 0,
            dirty: 0,
            records: Vec::new(),
        }
    }

    pub fn with_cost(mut self, p: Ratio<i64>) -> Self {
        self.cost_p = p;
        self
    }

    pub fn record(
        &mut self,
        role: Role,
        slot: u8,
        kind: QueryKind,
        set: &ElementSet,
        answer: usize,
    ) {
        match (role, kind) {
            (Role::Dirty, _) => self.dirty += 1,
            (Role::Clean, QueryKind::Independence) => self.clean_independence += 1,
            (Role::Clean, QueryKind::Rank) => self.clean_rank += 1,
        }
        self.records.push(QueryRecord {
            seq: self.records.len() as u64,
            role,
            slot,
            kind,
            answer,
            set: (self.n <= SET_STORAGE_LIMIT).then(|| set.clone()),
        });
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cost_p(&self) -> Ratio<i64> {
        self.cost_p
    }

    pub fn clean_independence(&self) -> u64 {
        self.clean_independence
    }

    pub fn clean_rank(&self) -> u64 {
        self.clean_rank
    }

    pub fn clean_total(&self) -> u64 {
        self.clean_independence + self.clean_rank
    }

    pub fn dirty(&self) -> u64 {
        self.dirty
    }

    pub fn total_cost(&self) -> Ratio<i64> {
        Ratio::from_integer(self.dirty as i64) + self.cost_p * self.clean_total() as i64
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    /// Drops one record and re-tallies the counters. Meant for negative
    /// controls in tests.
    pub fn remove_record(&mut self, index: usize) -> QueryRecord {
        let removed = self.records.remove(index);
        self.retally();
        removed
    }

    fn retally(&mut self) {
        let (mut ci, mut cr, mut d) = (0, 0, 0);
        for (seq, r) in self.records.iter_mut().enumerate() {
            r.seq = seq as u64;
            match (r.role, r.kind) {
                (Role::Dirty, _) => d += 1,
                (Role::Clean, QueryKind::Independence) => ci += 1,
                (Role::Clean, QueryKind::Rank) => cr += 1,
            }
        }
        self.clean_independence = ci;
        self.clean_rank = cr;
        self.dirty = d;
    }

    /// True when every dirty query precedes every clean query.
    pub fn dirty_before_clean(&self) -> bool {
        let first_clean = self.records.iter().position(|r| r.role == Role::Clean);
        match first_clean {
            None => true,
            Some(i) => self.records[i..].iter().all(|r| r.role == Role::Clean),
        }
    }

    /// Re-asks every recorded query and returns the first mismatching seq.
    pub fn replay<'a>(
        &self,
        spec_for: impl Fn(Role, u8) -> &'a MatroidSpec,
    ) -> std::result::Result<(), u64> {
        for r in &self.records {
            let Some(set) = &r.set else { continue };
            let spec = spec_for(r.role, r.slot);
            let answer = match r.kind {
                QueryKind::Independence => spec.is_independent(set) as usize,
                QueryKind::Rank => spec.rank(set),
            };
            if answer != r.answer {
                return Err(r.seq);
            }
        }
        Ok(())
    }

    /// One line per query: `seq,role,kind,answer,hex`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let role = match (r.role, r.slot) {
                (Role::Clean, 0) => "clean".to_string(),
                (Role::Dirty, 0) => "dirty".to_string(),
                (Role::Clean, s) => format!("clean{s}"),
                (Role::Dirty, s) => format!("dirty{s}"),
            };
            let kind = match r.kind {
                QueryKind::Independence => "indep",
                QueryKind::Rank => "rank",
            };
            let hex = r
                .set
                .as_ref()
                .map_or_else(|| "-".to_string(), |s| s.to_hex());
            out.push_str(&format!("{},{role},{kind},{},{hex}\n", r.seq, r.answer));
        }
        out
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut ledger = QueryLedger::new(n);
        for (line_no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let bad = |what: &str| Error::invalid(format!("transcript line {}", line_no + 1), what);
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let (role, slot) = match fields[1] {
                r if r.starts_with("clean") => (Role::Clean, &r[5..]),
                r if r.starts_with("dirty") => (Role::Dirty, &r[5..]),
                _ => return Err(bad("unknown role")),
            };
            let slot: u8 = if slot.is_empty() {
                0
            } else {
                slot.parse().map_err(|_| bad("bad slot"))?
            };
            let kind = match fields[2] {
                "indep" => QueryKind::Independence,
                "rank" => QueryKind::Rank,
                _ => return Err(bad("unknown kind")),
            };
            let answer: usize = fields[3].parse().map_err(|_| bad("bad answer"))?;
            let set = match fields[4] {
                "-" => None,
                hex => Some(ElementSet::from_hex(n, hex).ok_or_else(|| bad("bad set"))?),
            };
            match (role, kind) {
                (Role::Dirty, _) => ledger.dirty += 1,
                (Role::Clean, QueryKind::Independence) => ledger.clean_independence += 1,
                (Role::Clean, QueryKind::Rank) => ledger.clean_rank += 1,
            }
            ledger.records.push(QueryRecord {
                seq: ledger.records.len() as u64,
                role,
                slot,
                kind,
                answer,
                set,
            });
        }
        Ok(ledger)
    }
}

impl fmt::Display for QueryLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "clean {} (+{} rank), dirty {}, cost {}",
            self.clean_independence,
            self.clean_rank,
            self.dirty,
            self.total_cost()
        )
    }
}

/// Clean and dirty matroids on one canonical ground set. Immutable; each
/// run attaches its own ledger through a [`Session`].
#[derive(Clone, Debug)]
pub struct OraclePair {
    ground: GroundSet,
    clean: MatroidSpec,
    dirty: MatroidSpec,
    dirty_basis: ElementSet,
}

impl OraclePair {
    /// Takes specs in input labels, fixes the canonical order (B_d first
    /// among ties) and relabels both specs into it.
    pub fn new(
        weights: Option<&[Weight]>,
        clean: &MatroidSpec,
        dirty: &MatroidSpec,
    ) -> Result<Self> {
        let n = clean.n();
        if dirty.n() != n {
            return Err(Error::invalid(
                "dirty",
                format!("n = {} but clean has n = {n}", dirty.n()),
            ));
        }
        if let Some(w) = weights {
            if w.len() != n {
                return Err(Error::invalid(
                    "weights",
                    format!("{} weights for n = {n}", w.len()),
                ));
            }
            if w.iter().any(|x| *x < Weight::from_integer(0)) {
                return Err(Error::invalid("weights", "weights must be non-negative"));
            }
        }
        if matches!(clean.kind(), MatroidKind::Explicit { .. }) {
            return Err(Error::invalid(
                "matroid",
                "explicit systems are accepted as dirty oracles only",
            ));
        }
        let unit = vec![Weight::one(); n];
        let weights = weights.unwrap_or(&unit);
        let plain = GroundSet::canonical(weights, None);
        let first = greedy_unbilled(&dirty.relabel(&position_map(&plain)));
        let designated: Vec<bool> = (0..n)
            .map(|id| first.contains(plain.canonical_index(id)))
            .collect();
        let ground = GroundSet::canonical(weights, Some(&designated));
        let position = position_map(&ground);
        let clean = clean.relabel(&position);
        let dirty = dirty.relabel(&position);
        let dirty_basis = greedy_unbilled(&dirty);
        Ok(OraclePair {
            ground,
            clean,
            dirty,
            dirty_basis,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    /// Clean matroid in canonical labels.
    pub fn clean(&self) -> &MatroidSpec {
        &self.clean
    }

    pub fn dirty(&self) -> &MatroidSpec {
        &self.dirty
    }

    pub fn spec(&self, role: Role) -> &MatroidSpec {
        match role {
            Role::Clean => &self.clean,
            Role::Dirty => &self.dirty,
        }
    }

    /// The dirty greedy basis in canonical order, computed without billing.
    pub fn dirty_basis(&self) -> &ElementSet {
        &self.dirty_basis
    }

    pub fn clean_rank(&self) -> usize {
        self.clean.full_rank()
    }

    pub fn session(&self) -> Session<'_> {
        Session::new(self)
    }
}

pub(crate) fn position_map(g: &GroundSet) -> Vec<usize> {
    (0..g.n()).map(|id| g.canonical_index(id)).collect()
}

type MemoKey = (Role, QueryKind, ElementSet);

/// One run's billed view of an [`OraclePair`].
pub struct Session<'a> {
    pair: &'a OraclePair,
    ledger: QueryLedger,
    memo: Option<HashMap<MemoKey, usize>>,
}

impl<'a> Session<'a> {
    pub fn new(pair: &'a OraclePair) -> Self {
        Session {
            pair,
            ledger: QueryLedger::new(pair.n()),
            memo: None,
        }
    }

    pub fn with_cost(mut self, p: Ratio<i64>) -> Self {
        self.ledger = self.ledger.with_cost(p);
        self
    }

    /// Repeated identical queries are answered from a cache without billing.
    pub fn memoizing(mut self) -> Self {
        self.memo = Some(HashMap::new());
        self
    }

    pub fn pair(&self) -> &'a OraclePair {
        self.pair
    }

    pub fn ground(&self) -> &'a GroundSet {
        self.pair.ground()
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn independent(&mut self, role: Role, s: &ElementSet) -> bool {
        self.ask(role, QueryKind::Independence, s) == 1
    }

    pub fn clean(&mut self, s: &ElementSet) -> bool {
        self.independent(Role::Clean, s)
    }

    pub fn dirty(&mut self, s: &ElementSet) -> bool {
        self.independent(Role::Dirty, s)
    }

    pub fn rank(&mut self, role: Role, s: &ElementSet) -> usize {
        self.ask(role, QueryKind::Rank, s)
    }

    fn ask(&mut self, role: Role, kind: QueryKind, s: &ElementSet) -> usize {
        if let Some(&hit) = self
            .memo
            .as_ref()
            .and_then(|m| m.get(&(role, kind, s.clone())))
        {
            return hit;
        }
        let spec = self.pair.spec(role);
        let answer = match kind {
            QueryKind::Independence => spec.is_independent(s) as usize,
            QueryKind::Rank => spec.rank(s),
        };
        self.ledger.record(role, 0, kind, s, answer);
        if let Some(m) = self.memo.as_mut() {
            m.insert((role, kind, s.clone()), answer);
        }
        answer
    }
}
