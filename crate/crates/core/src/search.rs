//! Exhaustive search for irreducible sequences.
//!
//! A sequence `T` is irreducible when no proper sub-multiset (the empty one
//! included, in a monoid) has the same sum. Every sub-multiset of an
//! irreducible sequence is again irreducible, so the irreducible multisets
//! form a tree under "append an element no smaller than the last", and the
//! search walks exactly that tree. Each node carries two bitsets of reachable
//! sums, which makes the irreducibility test for a child `O(n / 64)`.
//!
//! The upper bound `Ψ(a) + D(Γ(H_a)) − 1` is enforced while searching: a
//! node longer than the bound for its sum is reported as a bound violation
//! instead of being expanded.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::abelian::{davenport_constant, AbelianError};
use crate::green::{GreenError, GreenStructure};
use crate::parallel::{map_items, Execution};
use crate::semigroup::{ElementId, Extremal, Semigroup, SemigroupError, Sequence};

pub const DEFAULT_MAX_NODES: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("irreducibility is undefined for the empty sequence")]
    EmptySequence,
    #[error("element {element} is out of range (n = {n})")]
    OutOfRange { element: ElementId, n: usize },
    #[error("search cap exceeded after {nodes} nodes (best length found: {best})")]
    SearchCapExceeded { nodes: u64, best: usize },
    #[error("irreducible sequence of length {length} sums to {element}, above the bound {upper}")]
    BoundViolation {
        element: ElementId,
        length: usize,
        upper: usize,
    },
    #[error("{0}")]
    Green(#[from] GreenError),
    #[error("{0}")]
    Abelian(#[from] AbelianError),
    #[error("{0}")]
    Semigroup(#[from] SemigroupError),
    #[error("small Davenport check failed: {0}")]
    SmallDavenportMismatch(String),
}

/// Sums reachable from sub-multisets of some `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableSums {
    nonempty: FixedBitSet,
    proper: FixedBitSet,
}

impl ReachableSums {
    /// Sums for the empty sequence: nothing is reachable.
    pub fn empty(s: &Semigroup) -> Self {
        ReachableSums {
            nonempty: FixedBitSet::with_capacity(s.order()),
            proper: FixedBitSet::with_capacity(s.order()),
        }
    }

    /// Sums for `T`, built term by term.
    pub fn of(s: &Semigroup, t: &Sequence) -> Self {
        t.terms()
            .fold(ReachableSums::empty(s), |r, x| r.extend(s, x))
    }

    /// Sums for `T · x` from the sums for `T`.
    ///
    /// Sub-multisets of `T·x` are those of `T` (all proper in `T·x`) and
    /// `V·x` for `V | T`; `V·x` is proper exactly when `V` is proper in `T`.
    pub fn extend(&self, s: &Semigroup, x: ElementId) -> Self {
        let row = s.row(x);
        let mut nonempty = self.nonempty.clone();
        nonempty.insert(x);
        for v in self.nonempty.ones() {
            nonempty.insert(row[v] as usize);
        }
        let mut proper = self.nonempty.clone();
        for v in self.proper.ones() {
            proper.insert(row[v] as usize);
        }
        if !self.nonempty.is_clear() {
            // V = ε is proper in T, so x alone is a proper sub-multiset of T·x.
            proper.insert(x);
        }
        if let Some(e) = s.identity() {
            proper.insert(e);
        }
        ReachableSums { nonempty, proper }
    }

    /// Sums of all nonempty sub-multisets, `T` included.
    pub fn nonempty_sums(&self) -> &FixedBitSet {
        &self.nonempty
    }

    /// Sums of all proper sub-multisets, `ε` included when the semigroup is a monoid.
    pub fn proper_sums(&self) -> &FixedBitSet {
        &self.proper
    }
}

pub fn extend_sums(s: &Semigroup, sums: &ReachableSums, x: ElementId) -> ReachableSums {
    sums.extend(s, x)
}

/// Whether no proper sub-multiset of `t` has the same sum as `t`.
pub fn is_irreducible(s: &Semigroup, t: &Sequence) -> Result<bool, SearchError> {
    if t.is_empty() {
        return Err(SearchError::EmptySequence);
    }
    if let Some((x, _)) = t.entries().find(|&(x, _)| x >= s.order()) {
        return Err(SearchError::OutOfRange {
            element: x,
            n: s.order(),
        });
    }
    let sigma = s.sigma(t)?;
    Ok(!ReachableSums::of(s, t).proper_sums().contains(sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Epsilon {
    /// `(a + a) H a`.
    Half,
    One,
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Half => f.write_str("1/2"),
            Epsilon::One => f.write_str("1"),
        }
    }
}

/// The structural quantities bounding `D_a(S)` for one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementBounds {
    pub element: ElementId,
    pub h_class_size: usize,
    pub psi: usize,
    pub gamma_factors: Vec<u64>,
    pub d_gamma: usize,
    pub epsilon: Epsilon,
    /// `⌈ε · D(Γ(H_a))⌉`.
    pub lower: usize,
    /// `Ψ(a) + D(Γ(H_a)) − 1`.
    pub upper: usize,
}

/// Bounds for every element of `s`, computed once per H-class.
pub fn element_bounds(s: &Semigroup) -> Result<Vec<ElementBounds>, SearchError> {
    let green = GreenStructure::new(s);
    let mut per_class: Vec<Option<(usize, Vec<u64>, usize)>> =
        vec![None; green.decomposition().class_count()];
    let mut out = Vec::with_capacity(s.order());
    for a in s.elements() {
        let class = green.decomposition().class_of(a);
        if per_class[class].is_none() {
            let gamma = green.schutzenberger(a)?;
            let d = davenport_constant(gamma.group())?;
            per_class[class] = Some((gamma.order(), gamma.invariant_factors().to_vec(), d));
        }
        let (h, factors, d) = per_class[class].clone().expect("filled above");
        let psi = green.psi(a);
        let epsilon = if green.is_h_idempotent(a) {
            Epsilon::Half
        } else {
            Epsilon::One
        };
        let lower = match epsilon {
            Epsilon::Half => d.div_ceil(2),
            Epsilon::One => d,
        };
        out.push(ElementBounds {
            element: a,
            h_class_size: h,
            psi,
            gamma_factors: factors,
            d_gamma: d,
            epsilon,
            lower,
            upper: psi + d - 1,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_nodes: u64,
    /// Re-check every maximal proper sub-multiset of each enumerated node.
    pub audit_hereditary: bool,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: DEFAULT_MAX_NODES,
            audit_hereditary: false,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub hereditary_checks: u64,
    pub hereditary_violations: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.hereditary_checks += other.hereditary_checks;
        self.hereditary_violations += other.hereditary_violations;
    }
}

/// Outcome of enumerating irreducible multisets.
#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Longest irreducible multiset found for each sum (lexicographically
    /// smallest among equal lengths).
    pub best: Vec<Option<Vec<ElementId>>>,
    /// First offending sequence per element, if any exceeded its bound.
    pub violations: Vec<(ElementId, Vec<ElementId>)>,
    pub capped: bool,
    pub stats: SearchStats,
}

impl Enumeration {
    pub fn longest_for(&self, a: ElementId) -> usize {
        self.best[a].as_ref().map_or(0, Vec::len)
    }

    pub fn witness_for(&self, a: ElementId) -> Sequence {
        self.best[a]
            .as_ref()
            .map(|t| Sequence::from_terms(t.iter().copied()))
            .unwrap_or_default()
    }

    /// Longest irreducible multiset over all sums.
    pub fn overall(&self) -> Option<&Vec<ElementId>> {
        self.best.iter().flatten().fold(None, |acc: Option<&Vec<ElementId>>, t| match acc {
            Some(b) if better(b, t) => Some(b),
            _ => Some(t),
        })
    }
}

/// `a` strictly preferable to `b`: longer, or equally long and lexicographically smaller.
fn better(a: &[ElementId], b: &[ElementId]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

fn offer(slot: &mut Option<Vec<ElementId>>, terms: &[ElementId]) {
    if slot.as_deref().is_none_or(|cur| better(terms, cur)) {
        *slot = Some(terms.to_vec());
    }
}

const BUDGET_BATCH: u64 = 4096;

struct Walker<'a> {
    s: &'a Semigroup,
    upper: &'a [usize],
    filter: Option<&'a FixedBitSet>,
    audit: bool,
    max_nodes: u64,
    shared_nodes: &'a AtomicU64,
    abort: &'a AtomicBool,
    pending: u64,
    best: Vec<Option<Vec<ElementId>>>,
    violations: Vec<(ElementId, Vec<ElementId>)>,
    stats: SearchStats,
    capped: bool,
}

impl Walker<'_> {
    fn tick(&mut self) -> bool {
        self.stats.nodes += 1;
        self.pending += 1;
        if self.pending == BUDGET_BATCH {
            let total = self.shared_nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > self.max_nodes {
                self.abort.store(true, Ordering::Relaxed);
            }
        }
        if self.abort.load(Ordering::Relaxed) {
            self.capped = true;
            return false;
        }
        true
    }

    fn audit(&mut self, terms: &[ElementId]) {
        let t = Sequence::from_terms(terms.iter().copied());
        for (y, _) in t.entries() {
            let mut sub = t.clone();
            sub.remove_one(y);
            if sub.is_empty() {
                continue;
            }
            self.stats.hereditary_checks += 1;
            let sums = ReachableSums::of(self.s, &sub);
            let sigma = self.s.sigma(&sub).expect("nonempty");
            if sums.proper_sums().contains(sigma) {
                self.stats.hereditary_violations += 1;
            }
        }
    }

    /// Visits the child `T·x` of the node (`terms`, `sums`, `sigma`) and its subtree.
    fn visit(&mut self, terms: &mut Vec<ElementId>, sums: &ReachableSums, sigma: Option<ElementId>, x: ElementId) {
        let next = sums.extend(self.s, x);
        let total = sigma.map_or(x, |v| self.s.op(v, x));
        if next.proper_sums().contains(total) {
            return;
        }
        if self.filter.is_some_and(|f| !f.contains(total)) {
            return;
        }
        if !self.tick() {
            return;
        }
        terms.push(x);
        offer(&mut self.best[total], terms);
        if self.audit {
            self.audit(terms);
        }
        if terms.len() > self.upper[total] {
            if !self.violations.iter().any(|(a, _)| *a == total) {
                self.violations.push((total, terms.clone()));
            }
        } else {
            for y in x..self.s.order() {
                if self.capped {
                    break;
                }
                self.visit(terms, &next, Some(total), y);
            }
        }
        terms.pop();
    }
}

/// Enumerates every irreducible multiset of `s` whose sum lies in `filter`
/// (all sums when `None`), branch per first element.
///
/// Prefixes of an irreducible `T` with `σ(T) = a` are irreducible and have
/// sums `c` with `a ∈ (c)`, so a filter of that shape loses nothing for `a`.
pub fn enumerate_irreducible(
    s: &Semigroup,
    upper: &[usize],
    filter: Option<&FixedBitSet>,
    config: &SearchConfig,
) -> Enumeration {
    let shared_nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let roots: Vec<ElementId> = s.elements().collect();
    let branches = map_items(config.execution, roots, |x| {
        let mut walker = Walker {
            s,
            upper,
            filter,
            audit: config.audit_hereditary,
            max_nodes: config.max_nodes,
            shared_nodes: &shared_nodes,
            abort: &abort,
            pending: 0,
            best: vec![None; s.order()],
            violations: Vec::new(),
            stats: SearchStats::default(),
            capped: false,
        };
        let mut terms = Vec::new();
        walker.visit(&mut terms, &ReachableSums::empty(s), None, x);
        shared_nodes.fetch_add(walker.pending, Ordering::Relaxed);
        if shared_nodes.load(Ordering::Relaxed) > config.max_nodes {
            walker.capped = true;
        }
        walker
    });

    let mut out = Enumeration {
        best: vec![None; s.order()],
        violations: Vec::new(),
        capped: false,
        stats: SearchStats::default(),
    };
    for w in branches {
        for (slot, found) in out.best.iter_mut().zip(w.best) {
            if let Some(t) = found {
                offer(slot, &t);
            }
        }
        for (a, t) in w.violations {
            if !out.violations.iter().any(|(b, _)| *b == a) {
                out.violations.push((a, t));
            }
        }
        out.capped |= w.capped;
        out.stats.absorb(&w.stats);
    }
    out.violations.sort();
    out
}

fn check_element(s: &Semigroup, a: ElementId) -> Result<(), SearchError> {
    if a >= s.order() {
        return Err(SearchError::OutOfRange {
            element: a,
            n: s.order(),
        });
    }
    Ok(())
}

/// `D_a(S)` with a witness; 0 with the empty witness for the identity.
pub fn relative_davenport(s: &Semigroup, a: ElementId) -> Result<Extremal, SearchError> {
    relative_davenport_with(s, a, &SearchConfig::default()).map(|(e, _)| e)
}

pub fn relative_davenport_with(
    s: &Semigroup,
    a: ElementId,
    config: &SearchConfig,
) -> Result<(Extremal, SearchStats), SearchError> {
    check_element(s, a)?;
    if s.identity() == Some(a) {
        return Ok((
            Extremal {
                value: 0,
                witness: Sequence::empty(),
            },
            SearchStats::default(),
        ));
    }
    let bounds = element_bounds(s)?;
    let upper: Vec<usize> = bounds.iter().map(|b| b.upper).collect();
    let green = GreenStructure::new(s);
    let mut filter = FixedBitSet::with_capacity(s.order());
    for c in s.elements() {
        if green.leq(a, c) {
            filter.insert(c);
        }
    }
    let run = enumerate_irreducible(s, &upper, Some(&filter), config);
    if let Some((element, t)) = run.violations.first() {
        return Err(SearchError::BoundViolation {
            element: *element,
            length: t.len(),
            upper: upper[*element],
        });
    }
    if run.capped {
        return Err(SearchError::SearchCapExceeded {
            nodes: run.stats.nodes,
            best: run.longest_for(a),
        });
    }
    Ok((
        Extremal {
            value: run.longest_for(a),
            witness: run.witness_for(a),
        },
        run.stats,
    ))
}

fn full_enumeration(s: &Semigroup, config: &SearchConfig) -> Result<Enumeration, SearchError> {
    let upper: Vec<usize> = element_bounds(s)?.iter().map(|b| b.upper).collect();
    let run = enumerate_irreducible(s, &upper, None, config);
    if let Some((element, t)) = run.violations.first() {
        return Err(SearchError::BoundViolation {
            element: *element,
            length: t.len(),
            upper: upper[*element],
        });
    }
    if run.capped {
        return Err(SearchError::SearchCapExceeded {
            nodes: run.stats.nodes,
            best: run.overall().map_or(0, Vec::len),
        });
    }
    Ok(run)
}

/// `D(S)`: one more than the longest irreducible sequence; the witness is a
/// longest irreducible sequence.
pub fn global_davenport(s: &Semigroup) -> Result<Extremal, SearchError> {
    global_davenport_with(s, &SearchConfig::default())
}

pub fn global_davenport_with(s: &Semigroup, config: &SearchConfig) -> Result<Extremal, SearchError> {
    let run = full_enumeration(s, config)?;
    let witness = run
        .overall()
        .map(|t| Sequence::from_terms(t.iter().copied()))
        .unwrap_or_default();
    Ok(Extremal {
        value: witness.len() + 1,
        witness,
    })
}

/// `d(S) = D(S) − 1`.
pub fn small_davenport(s: &Semigroup) -> Result<usize, SearchError> {
    Ok(global_davenport(s)?.value - 1)
}

/// Length of a shortest sub-multiset of `t` with the same sum as `t`
/// (the empty one allowed in a monoid), by direct enumeration.
pub fn shortest_equal_sum(s: &Semigroup, t: &Sequence) -> Result<usize, SearchError> {
    if t.is_empty() {
        return Ok(0);
    }
    let target = s.sigma(t)?;
    let mut best = t.len();
    for sub in t.sub_multisets() {
        if sub.len() >= best {
            continue;
        }
        if sub.is_empty() {
            if s.identity() == Some(target) {
                best = 0;
            }
        } else if s.sigma(&sub)? == target {
            best = sub.len();
        }
    }
    Ok(best)
}

/// Checks `d` against random multisets: each must shrink to a sub-multiset
/// of length at most `d` with the same sum. The longest irreducible
/// sequence must need exactly `d` terms.
pub fn verify_small_davenport(
    s: &Semigroup,
    d: usize,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Result<(), SearchError> {
    let witness = global_davenport(s)?.witness;
    let needed = shortest_equal_sum(s, &witness)?;
    if needed != d {
        return Err(SearchError::SmallDavenportMismatch(format!(
            "longest irreducible sequence shrinks to {needed}, expected {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let len = rng.random_range(1..=max_len.max(1));
        let t: Sequence = (0..len).map(|_| rng.random_range(0..s.order())).collect();
        let shortest = shortest_equal_sum(s, &t)?;
        if shortest > d {
            return Err(SearchError::SmallDavenportMismatch(format!(
                "sequence {t} needs {shortest} terms, more than {d}"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Ok,
    BoundViolation,
    CapExceeded,
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordStatus::Ok => "OK",
            RecordStatus::BoundViolation => "BOUND_VIOLATION",
            RecordStatus::CapExceeded => "CAP_EXCEEDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementRecord {
    pub bounds: ElementBounds,
    /// `D_a(S)`, or the best length found when the search was capped.
    pub exact: usize,
    pub witness: Sequence,
    pub status: RecordStatus,
}

impl ElementRecord {
    pub fn element(&self) -> ElementId {
        self.bounds.element
    }
}

/// Per-element bounds and exact relative constants, plus `D(S)` and `d(S)`.
#[derive(Debug, Clone)]
pub struct DavenportReport {
    /// One record per element of `S^•`, by increasing index.
    pub records: Vec<ElementRecord>,
    pub davenport: Option<usize>,
    pub small_davenport: Option<usize>,
    pub stats: SearchStats,
}

impl DavenportReport {
    pub fn record(&self, a: ElementId) -> Option<&ElementRecord> {
        self.records.iter().find(|r| r.element() == a)
    }

    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.status == RecordStatus::Ok)
    }
}

/// Runs the full analysis, reporting problems per record instead of failing.
pub fn analyze_with(s: &Semigroup, config: &SearchConfig) -> Result<DavenportReport, SearchError> {
    let bounds = element_bounds(s)?;
    let upper: Vec<usize> = bounds.iter().map(|b| b.upper).collect();
    let run = enumerate_irreducible(s, &upper, None, config);
    let records: Vec<ElementRecord> = bounds
        .into_iter()
        .filter(|b| s.identity() != Some(b.element))
        .map(|b| {
            let a = b.element;
            let exact = run.longest_for(a);
            let status = if run.violations.iter().any(|(v, _)| *v == a) || exact < b.lower || exact > b.upper {
                if run.capped && run.violations.iter().all(|(v, _)| *v != a) {
                    RecordStatus::CapExceeded
                } else {
                    RecordStatus::BoundViolation
                }
            } else if run.capped {
                RecordStatus::CapExceeded
            } else {
                RecordStatus::Ok
            };
            ElementRecord {
                witness: run.witness_for(a),
                exact,
                status,
                bounds: b,
            }
        })
        .collect();
    let complete = !run.capped && run.violations.is_empty();
    let davenport = complete.then(|| run.overall().map_or(0, Vec::len) + 1);
    Ok(DavenportReport {
        records,
        davenport,
        small_davenport: davenport.map(|d| d - 1),
        stats: run.stats,
    })
}

/// Runs the full analysis; any bound violation or exhausted budget is an error.
pub fn analyze(s: &Semigroup) -> Result<DavenportReport, SearchError> {
    let report = analyze_with(s, &SearchConfig::default())?;
    for r in &report.records {
        match r.status {
            RecordStatus::Ok => {}
            RecordStatus::BoundViolation => {
                return Err(SearchError::BoundViolation {
                    element: r.element(),
                    length: r.exact,
                    upper: r.bounds.upper,
                })
            }
            RecordStatus::CapExceeded => {
                return Err(SearchError::SearchCapExceeded {
                    nodes: report.stats.nodes,
                    best: r.exact,
                })
            }
        }
    }
    Ok(report)
}
