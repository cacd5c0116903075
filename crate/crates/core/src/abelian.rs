//! Finite abelian groups: invariant factors and zero-sum invariants.
//!
//! The searches here work directly with zero-sum-free multisets: in a group a
//! nonempty sequence is irreducible exactly when it is zero-sum free, so
//! `D(G)` and the relative constants `D_g(G)` come from one canonical DFS over
//! non-decreasing multisets that never extends a node containing a zero-sum.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arith::{factorize, gcd};
use crate::semigroup::{ElementId, Extremal, Semigroup, SemigroupError, Sequence};

/// Node budget for the brute-force searches in this module.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("search cap exceeded after {nodes} nodes (best length found: {best})")]
    SearchCapExceeded { nodes: u64, best: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no multiplier b coprime to n makes the residue sum smaller than n")]
    NoWitness,
    #[error("the identity element has no nonempty irreducible representation")]
    IdentityElement,
    #[error(transparent)]
    Table(#[from] SemigroupError),
}

/// A finite abelian group: its operation table plus invariant factors
/// `d₁ | d₂ | ⋯ | d_k` (empty for the trivial group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    table: Semigroup,
    invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn from_semigroup(table: Semigroup) -> Result<Self, AbelianError> {
        let invariant_factors = invariant_factors(&table)?;
        Ok(AbelianGroup {
            table,
            invariant_factors,
        })
    }

    /// `Z_n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        Self::direct_sum(&[n])
    }

    /// `Z_{m₁} ⊕ ⋯ ⊕ Z_{m_r}`, elements in mixed radix with the last component
    /// varying fastest.
    pub fn direct_sum(moduli: &[usize]) -> Self {
        let order: usize = moduli.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            let mut parts = vec![0; moduli.len()];
            for (i, &m) in moduli.iter().enumerate().rev() {
                parts[i] = x % m;
                x /= m;
            }
            parts
        };
        let encode = |parts: &[usize]| parts.iter().zip(moduli).fold(0, |acc, (&p, &m)| acc * m + p);
        let table = Semigroup::from_fn(order, |a, b| {
            let (pa, pb) = (decode(a), decode(b));
            let sum: Vec<usize> = pa
                .iter()
                .zip(&pb)
                .zip(moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect();
            encode(&sum)
        })
        .expect("direct sums of cyclic groups are commutative groups");
        let labels = (0..order)
            .map(|x| {
                let parts = decode(x);
                if parts.len() == 1 {
                    parts[0].to_string()
                } else {
                    let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                    format!("({})", inner.join(","))
                }
            })
            .collect();
        let table = table.with_labels(labels).expect("label count matches");
        AbelianGroup::from_semigroup(table).expect("direct sum is a group")
    }

    pub fn table(&self) -> &Semigroup {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn identity(&self) -> ElementId {
        self.table.identity().expect("groups have an identity")
    }

    pub fn op(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table.op(a, b)
    }

    pub fn inverse(&self, a: ElementId) -> ElementId {
        let e = self.identity();
        self.table
            .elements()
            .find(|&b| self.table.op(a, b) == e)
            .expect("every group element is invertible")
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Number of elements whose order divides `m`.
    pub fn order_census(&self, m: usize) -> usize {
        let e = self.identity();
        self.table
            .elements()
            .filter(|&x| m == 0 || self.table.multiple(x, m) == e)
            .count()
    }
}

/// Canonical invariant factors of a finite abelian group table, computed
/// from its element-order census prime by prime.
pub fn invariant_factors(g: &Semigroup) -> Result<Vec<u64>, AbelianError> {
    let e = g
        .identity()
        .ok_or_else(|| AbelianError::NotAGroup("no identity element".into()))?;
    if g.units()?.len() != g.order() {
        return Err(AbelianError::NotAGroup("some element has no inverse".into()));
    }
    let n = g.order() as u64;
    // p-primary exponents, largest first, for each prime p | n.
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e_max) in factorize(n) {
        // counts[k] = #{x : p^k x = 0}
        let mut counts = vec![0u64; e_max as usize + 1];
        for x in g.elements() {
            let mut y = x;
            let mut k = 0;
            while y != e && k < e_max as usize {
                y = g.multiple(y, p as usize);
                k += 1;
            }
            if y == e {
                for c in counts.iter_mut().skip(k) {
                    *c += 1;
                }
            }
        }
        // r[k] = number of cyclic p-factors of exponent >= k.
        let mut r = Vec::with_capacity(e_max as usize);
        for k in 1..=e_max as usize {
            let ratio = counts[k] / counts[k - 1];
            if !counts[k].is_multiple_of(counts[k - 1]) {
                return Err(AbelianError::NotAGroup("inconsistent order census".into()));
            }
            let mut rk = 0u32;
            let mut q = ratio;
            while q > 1 {
                if !q.is_multiple_of(p) {
                    return Err(AbelianError::NotAGroup("inconsistent order census".into()));
                }
                q /= p;
                rk += 1;
            }
            r.push(rk);
        }
        let factors = r.first().copied().unwrap_or(0);
        let exps: Vec<u32> = (1..=factors)
            .map(|i| r.iter().filter(|&&rk| rk >= i).count() as u32)
            .collect();
        primary.push((p, exps));
    }
    let rank = primary.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..rank)
        .map(|j| {
            primary
                .iter()
                .map(|(p, exps)| exps.get(j).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    out.sort_unstable();
    if out.iter().product::<u64>() != n {
        return Err(AbelianError::NotAGroup("invariant factors do not multiply to |G|".into()));
    }
    Ok(out)
}

/// A Davenport constant value from the closed-form route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DavenportValue {
    Exact(u64),
    /// `1 + Σ(dᵢ − 1)`, known to be a lower bound only.
    LowerBound(u64),
}

/// Closed-form `D(G)` from invariant factors: exact up to rank two, the
/// standard lower bound beyond.
pub fn davenport_formula(factors: &[u64]) -> DavenportValue {
    let bound = 1 + factors.iter().map(|d| d - 1).sum::<u64>();
    if factors.len() <= 2 {
        DavenportValue::Exact(bound)
    } else {
        DavenportValue::LowerBound(bound)
    }
}

/// Canonical DFS over zero-sum-free multisets of a group.
struct ZeroSumFree<'a> {
    g: &'a AbelianGroup,
    budget: u64,
    nodes: u64,
    best: usize,
}

impl<'a> ZeroSumFree<'a> {
    fn new(g: &'a AbelianGroup, budget: u64) -> Self {
        ZeroSumFree {
            g,
            budget,
            nodes: 0,
            best: 0,
        }
    }

    /// Calls `visit(terms, sigma)` for every nonempty zero-sum-free multiset,
    /// in lexicographic (preorder) order.
    fn run(&mut self, visit: &mut dyn FnMut(&[ElementId], ElementId)) -> Result<(), AbelianError> {
        let n = self.g.order();
        let mut terms = Vec::new();
        self.dfs(&mut terms, &FixedBitSet::with_capacity(n), None, visit)
    }

    fn dfs(
        &mut self,
        terms: &mut Vec<ElementId>,
        sums: &FixedBitSet,
        sigma: Option<ElementId>,
        visit: &mut dyn FnMut(&[ElementId], ElementId),
    ) -> Result<(), AbelianError> {
        let table = self.g.table();
        let e = self.g.identity();
        let start = terms.last().copied().unwrap_or(0);
        for x in start..table.order() {
            if x == e {
                continue;
            }
            let mut next = sums.clone();
            next.insert(x);
            for s in sums.ones() {
                next.insert(table.op(x, s));
            }
            if next.contains(e) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(AbelianError::SearchCapExceeded {
                    nodes: self.nodes,
                    best: self.best,
                });
            }
            let s = sigma.map_or(x, |s| table.op(s, x));
            terms.push(x);
            self.best = self.best.max(terms.len());
            visit(terms, s);
            self.dfs(terms, &next, Some(s), visit)?;
            terms.pop();
        }
        Ok(())
    }
}

fn keep_better(best: &mut Option<Vec<ElementId>>, terms: &[ElementId]) {
    let better = match best {
        None => true,
        Some(b) => terms.len() > b.len() || (terms.len() == b.len() && terms < b.as_slice()),
    };
    if better {
        *best = Some(terms.to_vec());
    }
}

/// `D(G)` by exhaustive search, with a longest zero-sum-free multiset
/// (lexicographically smallest among those) as witness.
pub fn davenport_bruteforce(g: &AbelianGroup) -> Result<Extremal, AbelianError> {
    davenport_bruteforce_with(g, DEFAULT_NODE_BUDGET)
}

pub fn davenport_bruteforce_with(g: &AbelianGroup, budget: u64) -> Result<Extremal, AbelianError> {
    let mut best: Option<Vec<ElementId>> = None;
    ZeroSumFree::new(g, budget).run(&mut |terms, _| keep_better(&mut best, terms))?;
    let witness = Sequence::from_terms(best.unwrap_or_default());
    Ok(Extremal {
        value: witness.len() + 1,
        witness,
    })
}

/// Exact `D(G)`: the closed form when it is exact, brute force otherwise.
pub fn davenport_constant(g: &AbelianGroup) -> Result<usize, AbelianError> {
    match davenport_formula(g.invariant_factors()) {
        DavenportValue::Exact(d) => Ok(d as usize),
        DavenportValue::LowerBound(_) => Ok(davenport_bruteforce(g)?.value),
    }
}

/// `D_g(G)`: the longest irreducible multiset summing to `g`; 0 for the identity.
pub fn relative_davenport_group(g: &AbelianGroup, target: ElementId) -> Result<Extremal, AbelianError> {
    if target == g.identity() {
        return Ok(Extremal {
            value: 0,
            witness: Sequence::empty(),
        });
    }
    let mut best: Option<Vec<ElementId>> = None;
    ZeroSumFree::new(g, DEFAULT_NODE_BUDGET).run(&mut |terms, s| {
        if s == target {
            keep_better(&mut best, terms);
        }
    })?;
    let witness = Sequence::from_terms(best.unwrap_or_default());
    Ok(Extremal {
        value: witness.len(),
        witness,
    })
}

/// `Σ(T)`: sums of all nonempty sub-multisets of `T`.
pub fn subsums(g: &AbelianGroup, t: &Sequence) -> FixedBitSet {
    let table = g.table();
    let mut sums = FixedBitSet::with_capacity(g.order());
    for x in t.terms() {
        let mut next = sums.clone();
        next.insert(x);
        for s in sums.ones() {
            next.insert(table.op(x, s));
        }
        sums = next;
    }
    sums
}

pub fn is_zero_sum_free(g: &AbelianGroup, t: &Sequence) -> bool {
    !subsums(g, t).contains(g.identity())
}

/// All minimal zero-sum multisets of length `D(G)`, sorted.
///
/// Each is `U · (−σ(U))` for a zero-sum-free `U` of length `D(G) − 1`.
pub fn max_minimal_zero_sum(g: &AbelianGroup) -> Result<Vec<Sequence>, AbelianError> {
    let d = davenport_bruteforce(g)?.value;
    let mut found = BTreeSet::new();
    if d == 1 {
        found.insert(Sequence::from_terms([g.identity()]));
    }
    ZeroSumFree::new(g, DEFAULT_NODE_BUDGET).run(&mut |terms, s| {
        if terms.len() == d - 1 {
            let mut t = terms.to_vec();
            t.push(g.inverse(s));
            found.insert(Sequence::from_terms(t));
        }
    })?;
    Ok(found.into_iter().collect())
}

/// A long irreducible multiset with sum `target`: from a minimal zero-sum
/// `L` of length `D(G)`, a sub-multiset `V` with `σ(V) = target`, returning
/// `V` when it is at least half of `D(G)` long and the negation of `L·V⁻¹`
/// otherwise.
pub fn skalba_construction(g: &AbelianGroup, target: ElementId) -> Result<Sequence, AbelianError> {
    if target == g.identity() {
        return Err(AbelianError::IdentityElement);
    }
    let minimal = max_minimal_zero_sum(g)?;
    let l = minimal
        .first()
        .ok_or_else(|| AbelianError::PreconditionViolated("no minimal zero-sum sequence".into()))?;
    let d = l.len();
    let mut v: Option<Sequence> = None;
    for sub in l.sub_multisets() {
        if sub.is_empty() || g.table().sigma(&sub)? != target {
            continue;
        }
        let better = match &v {
            None => true,
            Some(b) => sub.len() > b.len() || (sub.len() == b.len() && sub.to_terms() < b.to_terms()),
        };
        if better {
            v = Some(sub);
        }
    }
    let v = v.ok_or_else(|| {
        AbelianError::PreconditionViolated("target is not a subsum of a maximal minimal zero-sum".into())
    })?;
    if 2 * v.len() >= d {
        Ok(v)
    } else {
        let rest = l.difference(&v).expect("V divides L");
        Ok(rest.map(|c| g.inverse(c)))
    }
}

/// Finds `b` coprime to `n` with `Σ |b·c|_n < n` for a zero-sum-free
/// sequence over `Z_n` longer than `n/2`; returns the smallest such `b`.
pub fn savchev_chen_witness(n: u64, terms: &[u64]) -> Result<u64, AbelianError> {
    if n <= 1 {
        return Err(AbelianError::PreconditionViolated("n must exceed 1".into()));
    }
    if 2 * terms.len() as u64 <= n {
        return Err(AbelianError::PreconditionViolated(format!(
            "length {} is not greater than n/2",
            terms.len()
        )));
    }
    let residues: Vec<u64> = terms.iter().map(|&c| c % n).collect();
    let mut sums = vec![false; n as usize];
    for &c in &residues {
        let mut next = sums.clone();
        next[c as usize] = true;
        for (s, &hit) in sums.iter().enumerate() {
            if hit {
                next[(s + c as usize) % n as usize] = true;
            }
        }
        sums = next;
    }
    if sums[0] {
        return Err(AbelianError::PreconditionViolated("sequence has a zero-sum subsequence".into()));
    }
    (1..n)
        .filter(|&b| gcd(b, n) == 1)
        .find(|&b| residues.iter().map(|&c| (b * c) % n).sum::<u64>() < n)
        .ok_or(AbelianError::NoWitness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Semigroup {
        Semigroup::from_fn(4, |a, b| a ^ b).unwrap()
    }

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(invariant_factors(&Semigroup::from_table(&[vec![0]]).unwrap()).unwrap(), Vec::<u64>::new());
        assert_eq!(AbelianGroup::cyclic(6).invariant_factors(), &[6]);
        assert_eq!(invariant_factors(&klein()).unwrap(), vec![2, 2]);
        assert_eq!(AbelianGroup::direct_sum(&[2, 4]).invariant_factors(), &[2, 4]);
        assert_eq!(AbelianGroup::direct_sum(&[4, 6]).invariant_factors(), &[2, 12]);
        assert_eq!(AbelianGroup::direct_sum(&[2, 2, 2]).invariant_factors(), &[2, 2, 2]);
        assert_eq!(AbelianGroup::direct_sum(&[3, 5]).invariant_factors(), &[15]);
        let nongroup = Semigroup::from_fn(4, |a, b| (a * b) % 4).unwrap();
        assert!(matches!(invariant_factors(&nongroup), Err(AbelianError::NotAGroup(_))));
    }

    #[test]
    fn census_matches_invariant_factor_model() {
        for moduli in [vec![12], vec![2, 6], vec![4, 4], vec![2, 2, 4], vec![3, 9]] {
            let g = AbelianGroup::direct_sum(&moduli);
            let model = AbelianGroup::direct_sum(
                &g.invariant_factors().iter().map(|&d| d as usize).collect::<Vec<_>>(),
            );
            for m in 1..=g.order() {
                assert_eq!(g.order_census(m), model.order_census(m), "{moduli:?} at {m}");
            }
        }
    }

    #[test]
    fn davenport_bruteforce_examples() {
        for m in 1..=8 {
            assert_eq!(davenport_bruteforce(&AbelianGroup::cyclic(m)).unwrap().value, m);
        }
        let v4 = AbelianGroup::direct_sum(&[2, 2]);
        let d = davenport_bruteforce(&v4).unwrap();
        assert_eq!(d.value, 3);
        assert_eq!(d.witness.len(), 2);
        assert!(is_zero_sum_free(&v4, &d.witness));
    }

    #[test]
    fn davenport_formula_examples() {
        assert_eq!(davenport_formula(&[]), DavenportValue::Exact(1));
        assert_eq!(davenport_formula(&[6]), DavenportValue::Exact(6));
        assert_eq!(davenport_formula(&[2, 4]), DavenportValue::Exact(5));
        assert_eq!(davenport_formula(&[2, 2, 2]), DavenportValue::LowerBound(4));
        assert_eq!(davenport_bruteforce(&AbelianGroup::direct_sum(&[2, 4])).unwrap().value, 5);
        assert_eq!(davenport_bruteforce(&AbelianGroup::direct_sum(&[2, 2, 2])).unwrap().value, 4);
    }

    #[test]
    fn relative_davenport_examples() {
        let z6 = AbelianGroup::cyclic(6);
        assert_eq!(relative_davenport_group(&z6, 3).unwrap().value, 3);
        assert_eq!(relative_davenport_group(&z6, 0).unwrap().value, 0);
        let z4 = AbelianGroup::cyclic(4);
        let r = relative_davenport_group(&z4, 2).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.witness, Sequence::from_terms([1, 1]));
    }

    #[test]
    fn max_minimal_zero_sum_examples() {
        let z3 = AbelianGroup::cyclic(3);
        assert_eq!(
            max_minimal_zero_sum(&z3).unwrap(),
            vec![Sequence::from_terms([1, 1, 1]), Sequence::from_terms([2, 2, 2])]
        );
        let z2 = AbelianGroup::cyclic(2);
        assert_eq!(max_minimal_zero_sum(&z2).unwrap(), vec![Sequence::from_terms([1, 1])]);
        let v4 = AbelianGroup::direct_sum(&[2, 2]);
        let all = max_minimal_zero_sum(&v4).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|t| t.len() == 3));
    }

    #[test]
    fn skalba_examples() {
        let z6 = AbelianGroup::cyclic(6);
        let t = skalba_construction(&z6, 3).unwrap();
        assert!(t.len() >= 3);
        assert_eq!(z6.table().sigma(&t).unwrap(), 3);
        assert_eq!(skalba_construction(&AbelianGroup::cyclic(2), 1).unwrap(), Sequence::from_terms([1]));
        let z5 = AbelianGroup::cyclic(5);
        let t = skalba_construction(&z5, 2).unwrap();
        assert!(t.len() >= 3);
        assert_eq!(z5.table().sigma(&t).unwrap(), 2);
        // Irreducible: no proper sub-multiset (including ε) has the same sum.
        for sub in t.sub_multisets() {
            if sub != t {
                assert_ne!(z5.table().sigma(&sub).unwrap(), 2);
            }
        }
        assert_eq!(skalba_construction(&z5, 0), Err(AbelianError::IdentityElement));
    }

    #[test]
    fn savchev_chen_examples() {
        assert_eq!(savchev_chen_witness(4, &[1, 1, 1]).unwrap(), 1);
        assert_eq!(savchev_chen_witness(6, &[1, 1, 1, 1]).unwrap(), 1);
        assert_eq!(savchev_chen_witness(5, &[2, 2, 2]).unwrap(), 3);
        assert!(matches!(savchev_chen_witness(6, &[1, 1]), Err(AbelianError::PreconditionViolated(_))));
        assert!(matches!(
            savchev_chen_witness(4, &[1, 3, 1]),
            Err(AbelianError::PreconditionViolated(_))
        ));
    }
}
