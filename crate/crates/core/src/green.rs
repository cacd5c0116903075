//! Green's preorder, H-classes, principal-ideal chain lengths and
//! Schützenberger groups.
//!
//! Everything here is computed inside `S⁰`: principal ideals are
//! `(a) = {a + c : c ∈ S⁰}`, stabilizers range over `S⁰`, and `Ψ(a)` is the
//! longest strictly ascending chain of principal ideals of `S⁰` above `(a)`.
//! When `S` has no identity the adjoined one is element `n` and forms its own
//! H-class at the top of the ideal order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::abelian::{AbelianError, AbelianGroup};
use crate::semigroup::{AdjoinedSemigroup, ElementId, Semigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreenError {
    #[error("stabilizer of the empty set requested")]
    EmptySet,
    #[error("element {element} is out of range (|S⁰| = {order})")]
    OutOfRange { element: ElementId, order: usize },
    /// A Schützenberger group property failed; this points at a bad table or
    /// a bug, not at user input.
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl From<AbelianError> for GreenError {
    fn from(e: AbelianError) -> Self {
        GreenError::InternalInvariantViolation(format!("Schützenberger group: {e}"))
    }
}

/// Partition of `S⁰` into H-classes with the strict containment order on
/// their principal ideals.
#[derive(Debug, Clone)]
pub struct HClassDecomposition {
    class_of: Vec<usize>,
    classes: Vec<Vec<ElementId>>,
    ideals: Vec<FixedBitSet>,
    /// `ideal_order[u]` lists every class whose ideal strictly contains `u`'s.
    ideal_order: Vec<Vec<usize>>,
}

impl HClassDecomposition {
    fn new(monoid: &Semigroup) -> Self {
        let n = monoid.order();
        let mut by_ideal: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        let mut classes: Vec<Vec<ElementId>> = Vec::new();
        let mut ideals: Vec<FixedBitSet> = Vec::new();
        for a in 0..n {
            let ideal = ideal_bits(monoid, a);
            let id = *by_ideal.entry(ideal.clone()).or_insert_with(|| {
                classes.push(Vec::new());
                ideals.push(ideal);
                classes.len() - 1
            });
            class_of.push(id);
            classes[id].push(a);
        }
        let ideal_order = (0..classes.len())
            .map(|u| {
                (0..classes.len())
                    .filter(|&v| v != u && ideals[u].is_subset(&ideals[v]))
                    .collect()
            })
            .collect();
        HClassDecomposition {
            class_of,
            classes,
            ideals,
            ideal_order,
        }
    }

    pub fn class_of(&self, a: ElementId) -> usize {
        self.class_of[a]
    }

    pub fn classes(&self) -> &[Vec<ElementId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Classes whose principal ideal strictly contains that of class `u`.
    pub fn strictly_above(&self, u: usize) -> &[usize] {
        &self.ideal_order[u]
    }

    pub fn ideal(&self, class: usize) -> &FixedBitSet {
        &self.ideals[class]
    }
}

fn ideal_bits(monoid: &Semigroup, a: ElementId) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(monoid.order());
    for &v in monoid.row(a) {
        bits.insert(v as usize);
    }
    bits
}

/// Green's structure of a finite commutative semigroup, computed once and
/// queried per element.
#[derive(Debug, Clone)]
pub struct GreenStructure {
    s0: AdjoinedSemigroup,
    decomposition: HClassDecomposition,
    /// Longest chain length above each class.
    height: Vec<usize>,
}

impl GreenStructure {
    pub fn new(s: &Semigroup) -> Self {
        let s0 = AdjoinedSemigroup::new(s);
        let decomposition = HClassDecomposition::new(s0.monoid());
        let mut height = vec![None; decomposition.class_count()];
        for u in 0..decomposition.class_count() {
            longest_chain(&decomposition, u, &mut height);
        }
        GreenStructure {
            s0,
            decomposition,
            height: height.into_iter().map(|h| h.unwrap_or(0)).collect(),
        }
    }

    pub fn s0(&self) -> &AdjoinedSemigroup {
        &self.s0
    }

    pub fn decomposition(&self) -> &HClassDecomposition {
        &self.decomposition
    }

    fn check(&self, a: ElementId) -> Result<(), GreenError> {
        let order = self.s0.monoid().order();
        if a >= order {
            return Err(GreenError::OutOfRange { element: a, order });
        }
        Ok(())
    }

    /// `(a)`, sorted.
    pub fn principal_ideal(&self, a: ElementId) -> Vec<ElementId> {
        self.decomposition
            .ideal(self.decomposition.class_of(a))
            .ones()
            .collect()
    }

    /// `(a) ⊆ (b)`.
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        let d = &self.decomposition;
        d.ideal(d.class_of(a)).is_subset(d.ideal(d.class_of(b)))
    }

    pub fn h_related(&self, a: ElementId, b: ElementId) -> bool {
        self.decomposition.class_of(a) == self.decomposition.class_of(b)
    }

    /// `H_a`, sorted.
    pub fn h_class(&self, a: ElementId) -> &[ElementId] {
        &self.decomposition.classes[self.decomposition.class_of(a)]
    }

    pub fn psi(&self, a: ElementId) -> usize {
        self.height[self.decomposition.class_of(a)]
    }

    /// `(a + a) H a`.
    pub fn is_h_idempotent(&self, a: ElementId) -> bool {
        let m = self.s0.monoid();
        self.h_related(m.op(a, a), a)
    }

    /// `St(A) = {c ∈ S⁰ : c + A ⊆ A}`.
    pub fn stabilizer(&self, set: &[ElementId]) -> Result<Vec<ElementId>, GreenError> {
        if set.is_empty() {
            return Err(GreenError::EmptySet);
        }
        for &a in set {
            self.check(a)?;
        }
        let m = self.s0.monoid();
        let mut members = FixedBitSet::with_capacity(m.order());
        for &a in set {
            members.insert(a);
        }
        Ok(m.elements()
            .filter(|&c| set.iter().all(|&a| members.contains(m.op(c, a))))
            .collect())
    }

    /// Builds `Γ(H_a)` from the translations `x ↦ c + x` by `c ∈ St(H_a)`
    /// and checks the group, commutativity, simple transitivity and
    /// homomorphism properties before extracting its invariant factors.
    pub fn schutzenberger(&self, a: ElementId) -> Result<SchutzGroup, GreenError> {
        self.check(a)?;
        let m = self.s0.monoid();
        let h_class = self.h_class(a).to_vec();
        let k = h_class.len();
        let position = |x: ElementId| h_class.binary_search(&x).ok();
        let stabilizer = self.stabilizer(&h_class)?;

        let mut translations: Vec<(ElementId, Vec<usize>)> = Vec::with_capacity(stabilizer.len());
        for &c in &stabilizer {
            let perm: Option<Vec<usize>> = h_class.iter().map(|&x| position(m.op(c, x))).collect();
            let perm = perm.ok_or_else(|| {
                GreenError::InternalInvariantViolation(format!("{c} does not stabilize H_{a}"))
            })?;
            translations.push((c, perm));
        }

        let mut perms: Vec<Vec<usize>> = translations.iter().map(|(_, p)| p.clone()).collect();
        perms.sort();
        perms.dedup();
        let index: HashMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();

        for p in &perms {
            let mut seen = vec![false; k];
            for &y in p {
                if std::mem::replace(&mut seen[y], true) {
                    return Err(GreenError::InternalInvariantViolation(format!(
                        "translation on H_{a} is not a bijection"
                    )));
                }
            }
        }

        // Simple transitivity: exactly one translation maps x to y.
        for x in 0..k {
            let mut hits = vec![0usize; k];
            for p in &perms {
                hits[p[x]] += 1;
            }
            if hits.iter().any(|&h| h != 1) {
                return Err(GreenError::InternalInvariantViolation(format!(
                    "translations of H_{a} do not act simply transitively"
                )));
            }
        }

        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&y| p[y]).collect() };
        let mut rows = Vec::with_capacity(perms.len());
        for p in &perms {
            let mut row = Vec::with_capacity(perms.len());
            for q in &perms {
                let pq = compose(p, q);
                let qp = compose(q, p);
                if pq != qp {
                    return Err(GreenError::InternalInvariantViolation(format!(
                        "translations of H_{a} do not commute"
                    )));
                }
                let idx = *index.get(pq.as_slice()).ok_or_else(|| {
                    GreenError::InternalInvariantViolation(format!(
                        "translations of H_{a} are not closed under composition"
                    ))
                })?;
                row.push(idx);
            }
            rows.push(row);
        }

        let rho: Vec<(ElementId, usize)> = translations
            .iter()
            .map(|(c, p)| (*c, index[p.as_slice()]))
            .collect();
        let rho_lookup: HashMap<ElementId, usize> = rho.iter().copied().collect();
        for &(c, pc) in &rho {
            for &(d, pd) in &rho {
                let sum = m.op(c, d);
                match rho_lookup.get(&sum) {
                    Some(&ps) if ps == rows[pc][pd] => {}
                    _ => {
                        return Err(GreenError::InternalInvariantViolation(format!(
                            "ρ is not a homomorphism at ({c},{d})"
                        )))
                    }
                }
            }
        }

        let table = Semigroup::from_table(&rows).map_err(|e| {
            GreenError::InternalInvariantViolation(format!("Schützenberger table: {e}"))
        })?;
        let group = AbelianGroup::from_semigroup(table)?;
        Ok(SchutzGroup {
            h_class,
            perms,
            group,
            rho,
        })
    }
}

fn longest_chain(d: &HClassDecomposition, u: usize, memo: &mut Vec<Option<usize>>) -> usize {
    if let Some(h) = memo[u] {
        return h;
    }
    let mut best = 0;
    for &v in d.strictly_above(u) {
        best = best.max(1 + longest_chain(d, v, memo));
    }
    memo[u] = Some(best);
    best
}

/// The Schützenberger group `Γ(H_a)` as permutations of `H_a`.
#[derive(Debug, Clone)]
pub struct SchutzGroup {
    h_class: Vec<ElementId>,
    perms: Vec<Vec<usize>>,
    group: AbelianGroup,
    rho: Vec<(ElementId, usize)>,
}

impl SchutzGroup {
    pub fn h_class(&self) -> &[ElementId] {
        &self.h_class
    }

    /// Permutations of `H_a` given as images of the positions in `h_class`.
    /// Index 0 is the identity permutation.
    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Abstract group on the permutation indices.
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn invariant_factors(&self) -> &[u64] {
        self.group.invariant_factors()
    }

    /// `(c, ρ(c))` for every `c ∈ St(H_a)` in increasing element order.
    pub fn rho(&self) -> &[(ElementId, usize)] {
        &self.rho
    }

    pub fn rho_of(&self, c: ElementId) -> Option<usize> {
        self.rho
            .binary_search_by_key(&c, |&(x, _)| x)
            .ok()
            .map(|i| self.rho[i].1)
    }

    /// `γ ∘ x` for `x ∈ H_a`.
    pub fn act(&self, perm: usize, x: ElementId) -> Option<ElementId> {
        let pos = self.h_class.binary_search(&x).ok()?;
        Some(self.h_class[self.perms[perm][pos]])
    }
}

pub fn principal_ideal(s: &Semigroup, a: ElementId) -> Vec<ElementId> {
    GreenStructure::new(s).principal_ideal(a)
}

pub fn h_classes(s: &Semigroup) -> HClassDecomposition {
    GreenStructure::new(s).decomposition
}

pub fn psi(s: &Semigroup, a: ElementId) -> usize {
    GreenStructure::new(s).psi(a)
}

pub fn stabilizer(s: &Semigroup, set: &[ElementId]) -> Result<Vec<ElementId>, GreenError> {
    GreenStructure::new(s).stabilizer(set)
}

pub fn schutzenberger(s: &Semigroup, a: ElementId) -> Result<SchutzGroup, GreenError> {
    GreenStructure::new(s).schutzenberger(a)
}

pub fn is_h_idempotent(s: &Semigroup, a: ElementId) -> bool {
    GreenStructure::new(s).is_h_idempotent(a)
}
