//! Finite commutative semigroups given by dense operation tables, and finite
//! multisets ("sequences") of their elements.
//!
//! Elements are the dense indices `0..n`. Tables are row-major, so
//! `op(i, j) = table[i * n + j]`. Identity and zero elements are detected when
//! a table is validated and are never supplied by callers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element of a finite semigroup.
pub type ElementId = usize;

/// Largest semigroup order accepted by [`Semigroup::from_table`].
pub const DEFAULT_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("operation table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("semigroup order {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("table entry op({i},{j}) = {value} is not an element (n = {n})")]
    NotClosed {
        i: usize,
        j: usize,
        value: usize,
        n: usize,
    },
    #[error("operation is not commutative: op({0},{1}) != op({1},{0})")]
    NotCommutative(ElementId, ElementId),
    #[error("operation is not associative at ({0},{1},{2})")]
    NotAssociative(ElementId, ElementId, ElementId),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("declared order {declared} does not match a table with {rows} rows")]
    OrderMismatch { declared: usize, rows: usize },
    #[error("the empty sequence has no sum in a semigroup without identity")]
    EmptyInNonMonoid,
    #[error("semigroup has no identity element")]
    NotAMonoid,
    #[error("element {element} is out of range (n = {n})")]
    OutOfRange { element: usize, n: usize },
    #[error("invalid semigroup JSON: {0}")]
    Json(String),
}

/// A validated finite commutative semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    n: usize,
    table: Vec<u32>,
    labels: Option<Vec<String>>,
    identity: Option<ElementId>,
    zero: Option<ElementId>,
}

impl Semigroup {
    /// Validates a square table and returns the semigroup it defines.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        Self::from_table_capped(rows, DEFAULT_MAX_ORDER)
    }

    pub fn from_table_capped(rows: &[Vec<usize>], cap: usize) -> Result<Self, SemigroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        if n > cap {
            return Err(SemigroupError::TooLarge { n, cap });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::NotSquare {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(SemigroupError::NotClosed { i, j, value, n });
                }
                table.push(value as u32);
            }
        }
        Self::from_flat(n, table)
    }

    /// Builds a semigroup from an operation given as a closure over `0..n`.
    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self, SemigroupError> {
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        if n > DEFAULT_MAX_ORDER {
            return Err(SemigroupError::TooLarge {
                n,
                cap: DEFAULT_MAX_ORDER,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let value = op(i, j);
                if value >= n {
                    return Err(SemigroupError::NotClosed { i, j, value, n });
                }
                table.push(value as u32);
            }
        }
        Self::from_flat(n, table)
    }

    fn from_flat(n: usize, table: Vec<u32>) -> Result<Self, SemigroupError> {
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, j) != at(j, i) {
                    return Err(SemigroupError::NotCommutative(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = at(i, j);
                for k in 0..n {
                    if at(ij, k) != at(i, at(j, k)) {
                        return Err(SemigroupError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        // Identities and zeros are unique when they exist.
        let identity = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x));
        let zero = (0..n).find(|&z| (0..n).all(|x| at(z, x) == z));
        Ok(Semigroup {
            n,
            table,
            labels: None,
            identity,
            zero,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SemigroupError> {
        if labels.len() != self.n {
            return Err(SemigroupError::LabelCount {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub(crate) fn row(&self, a: ElementId) -> &[u32] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    pub fn identity(&self) -> Option<ElementId> {
        self.identity
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.zero
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element; its index when the semigroup is unlabelled.
    pub fn label(&self, a: ElementId) -> String {
        match &self.labels {
            Some(labels) => labels[a].clone(),
            None => a.to_string(),
        }
    }

    /// Resolves a label, falling back to a numeric index.
    pub fn find_element(&self, name: &str) -> Option<ElementId> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// `k` copies of `a` added together (`k >= 1`).
    pub fn multiple(&self, a: ElementId, k: usize) -> ElementId {
        assert!(k >= 1, "multiple of an element needs k >= 1");
        let mut acc = a;
        for _ in 1..k {
            acc = self.op(acc, a);
        }
        acc
    }

    /// Sum of all terms of `seq`. The empty sequence sums to the identity.
    pub fn sigma(&self, seq: &Sequence) -> Result<ElementId, SemigroupError> {
        let mut acc: Option<ElementId> = None;
        for (x, mult) in seq.entries() {
            let part = self.multiple(x, mult);
            acc = Some(match acc {
                None => part,
                Some(s) => self.op(s, part),
            });
        }
        acc.or(self.identity).ok_or(SemigroupError::EmptyInNonMonoid)
    }

    /// The group of units `U(S)` of a monoid, in increasing index order.
    pub fn units(&self) -> Result<Vec<ElementId>, SemigroupError> {
        let e = self.identity.ok_or(SemigroupError::NotAMonoid)?;
        Ok(self
            .elements()
            .filter(|&a| self.row(a).iter().any(|&v| v as usize == e))
            .collect())
    }

    /// Restriction of the operation to a subset closed under it.
    ///
    /// Returns the subsemigroup (indexed by position in `subset`) or `None`
    /// if the subset is not closed.
    pub fn restrict(&self, subset: &[ElementId]) -> Option<Semigroup> {
        let position = |x: ElementId| subset.iter().position(|&y| y == x);
        let mut rows = Vec::with_capacity(subset.len());
        for &a in subset {
            let mut row = Vec::with_capacity(subset.len());
            for &b in subset {
                row.push(position(self.op(a, b))?);
            }
            rows.push(row);
        }
        let sub = Semigroup::from_table(&rows).ok()?;
        let labels = subset.iter().map(|&a| self.label(a)).collect();
        sub.with_labels(labels).ok()
    }

    pub fn to_json(&self, meta: Option<serde_json::Value>) -> SemigroupJson {
        SemigroupJson {
            n: self.n,
            table: self.rows(),
            labels: self.labels.clone(),
            meta,
        }
    }

    pub fn from_json(doc: &SemigroupJson) -> Result<Self, SemigroupError> {
        if doc.table.len() != doc.n {
            return Err(SemigroupError::OrderMismatch {
                declared: doc.n,
                rows: doc.table.len(),
            });
        }
        let s = Semigroup::from_table(&doc.table)?;
        match &doc.labels {
            Some(labels) => s.with_labels(labels.clone()),
            None => Ok(s),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, SemigroupError> {
        let doc: SemigroupJson =
            serde_json::from_str(text).map_err(|e| SemigroupError::Json(e.to_string()))?;
        Self::from_json(&doc)
    }

    /// Renders a sequence as space-separated element labels.
    pub fn format_sequence(&self, seq: &Sequence) -> String {
        seq.terms()
            .map(|x| self.label(x))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// On-disk form of a semigroup. Identity and zero are re-derived on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

/// `S⁰`: the semigroup itself if it is a monoid, otherwise `S` with a fresh
/// identity adjoined as element `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjoinedSemigroup {
    monoid: Semigroup,
    adjoined: bool,
}

impl AdjoinedSemigroup {
    pub fn new(s: &Semigroup) -> Self {
        if s.is_monoid() {
            return AdjoinedSemigroup {
                monoid: s.clone(),
                adjoined: false,
            };
        }
        let n = s.order();
        let m = n + 1;
        let mut table = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let v = if i == n {
                    j
                } else if j == n {
                    i
                } else {
                    s.op(i, j)
                };
                table.push(v as u32);
            }
        }
        let labels = s.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.push("1".to_string());
            l
        });
        AdjoinedSemigroup {
            monoid: Semigroup {
                n: m,
                table,
                labels,
                identity: Some(n),
                zero: s.zero,
            },
            adjoined: true,
        }
    }

    pub fn monoid(&self) -> &Semigroup {
        &self.monoid
    }

    pub fn adjoined(&self) -> bool {
        self.adjoined
    }

    pub fn identity(&self) -> ElementId {
        self.monoid.identity.expect("S⁰ is a monoid")
    }

    /// Order of the original semigroup.
    pub fn base_order(&self) -> usize {
        if self.adjoined {
            self.monoid.n - 1
        } else {
            self.monoid.n
        }
    }
}

/// Adjoins an identity element to `s` only when `s` lacks one.
pub fn adjoin_identity(s: &Semigroup) -> AdjoinedSemigroup {
    AdjoinedSemigroup::new(s)
}

/// A finite multiset of semigroup elements in canonical form: entries sorted
/// by element with nonzero multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    entries: Vec<(ElementId, usize)>,
}

impl Sequence {
    pub fn empty() -> Self {
        Sequence::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ElementId>>(terms: I) -> Self {
        let mut terms: Vec<ElementId> = terms.into_iter().collect();
        terms.sort_unstable();
        let mut entries: Vec<(ElementId, usize)> = Vec::new();
        for x in terms {
            match entries.last_mut() {
                Some((y, m)) if *y == x => *m += 1,
                _ => entries.push((x, 1)),
            }
        }
        Sequence { entries }
    }

    /// Canonicalizes (element, multiplicity) pairs; zero multiplicities are dropped.
    pub fn from_multiplicities<I: IntoIterator<Item = (ElementId, usize)>>(pairs: I) -> Self {
        let mut entries: Vec<(ElementId, usize)> =
            pairs.into_iter().filter(|&(_, m)| m > 0).collect();
        entries.sort_unstable();
        entries.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Sequence { entries }
    }

    pub fn entries(&self) -> impl Iterator<Item = (ElementId, usize)> + '_ {
        self.entries.iter().copied()
    }

    /// Terms in non-decreasing order, repeated by multiplicity.
    pub fn terms(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.entries
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
    }

    pub fn to_terms(&self) -> Vec<ElementId> {
        self.terms().collect()
    }

    /// `|T|`.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `v_a(T)`.
    pub fn multiplicity(&self, a: ElementId) -> usize {
        self.entries
            .binary_search_by_key(&a, |&(x, _)| x)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, a: ElementId) {
        match self.entries.binary_search_by_key(&a, |&(x, _)| x) {
            Ok(i) => self.entries[i].1 += 1,
            Err(i) => self.entries.insert(i, (a, 1)),
        }
    }

    /// Removes one copy of `a`; returns false if `a` does not occur.
    pub fn remove_one(&mut self, a: ElementId) -> bool {
        match self.entries.binary_search_by_key(&a, |&(x, _)| x) {
            Ok(i) => {
                self.entries[i].1 -= 1;
                if self.entries[i].1 == 0 {
                    self.entries.remove(i);
                }
                true
            }
            Err(_) => false,
        }
    }

    /// Concatenation `T · U`.
    pub fn concat(&self, other: &Sequence) -> Sequence {
        Sequence::from_multiplicities(self.entries().chain(other.entries()))
    }

    /// `T · U^[-1]`, or `None` when `U` does not divide `T`.
    pub fn difference(&self, other: &Sequence) -> Option<Sequence> {
        let mut out = Vec::with_capacity(self.entries.len());
        for (x, m) in self.entries() {
            let k = other.multiplicity(x);
            if k > m {
                return None;
            }
            out.push((x, m - k));
        }
        if other.entries().any(|(x, _)| self.multiplicity(x) == 0) {
            return None;
        }
        Some(Sequence::from_multiplicities(out))
    }

    pub fn divides(&self, other: &Sequence) -> bool {
        self.entries().all(|(x, m)| other.multiplicity(x) >= m)
    }

    /// Applies `f` termwise.
    pub fn map(&self, f: impl Fn(ElementId) -> ElementId) -> Sequence {
        Sequence::from_multiplicities(self.entries().map(|(x, m)| (f(x), m)))
    }

    /// Every sub-multiset, including the empty one and `self`.
    pub fn sub_multisets(&self) -> Vec<Sequence> {
        let mut out = vec![Vec::new()];
        for &(x, m) in &self.entries {
            let mut next = Vec::with_capacity(out.len() * (m + 1));
            for partial in &out {
                for k in 0..=m {
                    let mut p: Vec<(ElementId, usize)> = partial.clone();
                    if k > 0 {
                        p.push((x, k));
                    }
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|entries| Sequence { entries })
            .collect()
    }
}

/// An extremal length together with a sequence attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub value: usize,
    pub witness: Sequence,
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms().map(|x| x.to_string()).collect();
        write!(f, "{}", terms.join(" "))
    }
}

impl FromIterator<ElementId> for Sequence {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        Sequence::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: usize) -> Semigroup {
        Semigroup::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    fn zmod_mult(n: usize) -> Semigroup {
        Semigroup::from_fn(n, |a, b| (a * b) % n).unwrap()
    }

    #[test]
    fn one_element_table_is_identity_and_zero() {
        let s = Semigroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(s.identity(), Some(0));
        assert_eq!(s.zero(), Some(0));
    }

    #[test]
    fn cyclic_group_has_identity_but_no_zero() {
        let s = zn(3);
        assert_eq!(s.identity(), Some(0));
        assert_eq!(s.zero(), None);
    }

    #[test]
    fn rejects_noncommutative_table() {
        // op(i, j) = i
        let err = Semigroup::from_table(&[vec![0, 0], vec![1, 1]]).unwrap_err();
        assert_eq!(err, SemigroupError::NotCommutative(0, 1));
    }

    #[test]
    fn rejects_out_of_range_and_ragged_tables() {
        assert!(matches!(
            Semigroup::from_table(&[vec![0, 2], vec![2, 0]]),
            Err(SemigroupError::NotClosed { value: 2, .. })
        ));
        assert!(matches!(
            Semigroup::from_table(&[vec![0, 1], vec![1]]),
            Err(SemigroupError::NotSquare { row: 1, .. })
        ));
        assert_eq!(Semigroup::from_table(&[]), Err(SemigroupError::Empty));
    }

    #[test]
    fn rejects_nonassociative_table() {
        // Commutative but not associative: a "rock-paper-scissors" winner table.
        let t = vec![vec![0, 1, 0], vec![1, 1, 2], vec![0, 2, 2]];
        assert!(matches!(
            Semigroup::from_table(&t),
            Err(SemigroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let t = vec![vec![0; 3]; 3];
        assert_eq!(
            Semigroup::from_table_capped(&t, 2),
            Err(SemigroupError::TooLarge { n: 3, cap: 2 })
        );
    }

    #[test]
    fn adjoin_identity_only_when_missing() {
        let z4 = zmod_mult(4);
        let a = adjoin_identity(&z4);
        assert!(!a.adjoined());
        assert_eq!(a.monoid(), &z4);

        // Null semigroup {p, q}: every sum is q.
        let null = Semigroup::from_table(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(null.identity(), None);
        let a = adjoin_identity(&null);
        assert!(a.adjoined());
        assert_eq!(a.monoid().order(), 3);
        assert_eq!(a.identity(), 2);
        for x in 0..3 {
            assert_eq!(a.monoid().op(2, x), x);
        }
        // Idempotent.
        assert_eq!(adjoin_identity(a.monoid()).monoid(), a.monoid());

        let single = Semigroup::from_table(&[vec![0]]).unwrap();
        assert!(!adjoin_identity(&single).adjoined());
    }

    #[test]
    fn sigma_examples() {
        let z6 = zn(6);
        assert_eq!(z6.sigma(&Sequence::from_terms([1, 1, 1])).unwrap(), 3);
        assert_eq!(z6.sigma(&Sequence::empty()).unwrap(), 0);
        let z8 = zmod_mult(8);
        assert_eq!(z8.sigma(&Sequence::from_terms([2, 2])).unwrap(), 4);
        assert_eq!(z8.sigma(&Sequence::empty()).unwrap(), 1);
        let null = Semigroup::from_table(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            null.sigma(&Sequence::empty()),
            Err(SemigroupError::EmptyInNonMonoid)
        );
    }

    #[test]
    fn units_examples() {
        assert_eq!(zmod_mult(8).units().unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(zmod_mult(6).units().unwrap(), vec![1, 5]);
        assert_eq!(zn(5).units().unwrap(), vec![0, 1, 2, 3, 4]);
        let null = Semigroup::from_table(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(null.units(), Err(SemigroupError::NotAMonoid));
    }

    #[test]
    fn sequence_canonical_form() {
        let t = Sequence::from_terms([3, 1, 3, 2, 1, 3]);
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![(1, 2), (2, 1), (3, 3)]);
        assert_eq!(t.len(), 6);
        assert_eq!(t.multiplicity(3), 3);
        assert_eq!(t.multiplicity(7), 0);
        let u = Sequence::from_multiplicities([(3, 1), (1, 0), (3, 2), (1, 2), (2, 1)]);
        assert_eq!(t, u);
        let mut v = t.clone();
        assert!(v.remove_one(2));
        assert!(!v.remove_one(2));
        assert_eq!(v.len(), 5);
        assert_eq!(t.difference(&v), Some(Sequence::from_terms([2])));
        assert_eq!(v.difference(&t), None);
        assert_eq!(t.sub_multisets().len(), 3 * 2 * 4);
    }

    #[test]
    fn json_round_trip_rederives_identity() {
        let s = zmod_mult(6)
            .with_labels((0..6).map(|i| format!("e{i}")).collect())
            .unwrap();
        let text = serde_json::to_string(&s.to_json(None)).unwrap();
        assert!(text.starts_with("{\"n\":6,\"table\":[[0,0,0,0,0,0],"));
        assert!(!text.contains("identity"));
        let back = Semigroup::from_json_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.identity(), Some(1));
        assert_eq!(back.zero(), Some(0));
        assert!(matches!(
            Semigroup::from_json_str("{\"n\":3,\"table\":[[0]]}"),
            Err(SemigroupError::OrderMismatch { .. })
        ));
    }
}
