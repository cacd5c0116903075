//! Finite commutative unitary rings and the principal-ideal machinery used to
//! evaluate `D_a` of their multiplicative semigroups in closed form.
//!
//! Ideals are plain bitsets over the ring's elements. Everything is computed
//! by direct enumeration; the rings of interest have at most a few dozen
//! elements.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::abelian::{davenport_bruteforce, davenport_constant, AbelianError, AbelianGroup};
use crate::arith::{big_omega, gcd};
use crate::green::{GreenError, GreenStructure};
use crate::search::{is_irreducible, SearchError};
use crate::semigroup::{ElementId, Semigroup, SemigroupError, Sequence, DEFAULT_MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring tables are empty")]
    Empty,
    #[error("addition and multiplication tables have different sizes")]
    SizeMismatch,
    #[error("ring of order {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("modulus must be at least 1")]
    InvalidModulus,
    #[error("addition is not an abelian group: {0}")]
    AdditionNotAGroup(String),
    #[error("multiplication is not a commutative monoid: {0}")]
    MultiplicationNotAMonoid(String),
    #[error("distributivity fails at ({0},{1},{2})")]
    NotDistributive(ElementId, ElementId, ElementId),
    #[error("0 = 1 in a ring with more than one element")]
    ZeroIsOne,
    #[error("subset is not an ideal")]
    NotAnIdeal,
    #[error("ring is not a principal ideal ring")]
    NotPIR,
    #[error("element {0} is a unit")]
    UnitElement(ElementId),
    #[error("element {element} is out of range (n = {n})")]
    OutOfRange { element: ElementId, n: usize },
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// A finite commutative ring with identity, as dense tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    zero: ElementId,
    one: ElementId,
    labels: Option<Vec<String>>,
}

/// An ideal as the set of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    members: FixedBitSet,
}

impl Ideal {
    pub fn contains(&self, x: ElementId) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> Vec<ElementId> {
        self.members.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A quotient ring together with the projection from the original ring.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ring: FiniteRing,
    /// `projection[x]` is the coset of `x`.
    pub projection: Vec<ElementId>,
}

/// `b = a₁^{m₁} ⋯ a_r^{m_r} · u` over the maximal principal ideals `(aᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub generators: Vec<ElementId>,
    pub exponents: Vec<usize>,
    pub unit: ElementId,
}

/// Comparison of `Γ(H_a)` with `U(R / Ann(a))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCheck {
    pub gamma_factors: Vec<u64>,
    pub unit_factors: Vec<u64>,
    /// Whether every element of `Γ(H_a)` is the translation by a unit of `R`;
    /// only checked for principal ideal rings.
    pub units_cover_gamma: Option<bool>,
}

impl IsoCheck {
    pub fn holds(&self) -> bool {
        self.gamma_factors == self.unit_factors && self.units_cover_gamma != Some(false)
    }
}

fn flatten(rows: &[Vec<usize>], n: usize) -> Result<Vec<u32>, RingError> {
    if rows.len() != n {
        return Err(RingError::SizeMismatch);
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(RingError::SizeMismatch);
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(SemigroupError::NotClosed { i, j, value: v, n }.into());
            }
            out.push(v as u32);
        }
    }
    Ok(out)
}

impl FiniteRing {
    /// Validates addition and multiplication tables.
    pub fn from_tables(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self, RingError> {
        let n = add.len();
        if n == 0 {
            return Err(RingError::Empty);
        }
        if n > DEFAULT_MAX_ORDER {
            return Err(RingError::CapExceeded {
                n,
                cap: DEFAULT_MAX_ORDER,
            });
        }
        let add_flat = flatten(add, n)?;
        let mul_flat = flatten(mul, n)?;
        let additive = Semigroup::from_table(add).map_err(|e| RingError::AdditionNotAGroup(e.to_string()))?;
        let zero = additive
            .identity()
            .ok_or_else(|| RingError::AdditionNotAGroup("no additive identity".into()))?;
        if additive.units()?.len() != n {
            return Err(RingError::AdditionNotAGroup("some element has no negative".into()));
        }
        let multiplicative =
            Semigroup::from_table(mul).map_err(|e| RingError::MultiplicationNotAMonoid(e.to_string()))?;
        let one = multiplicative
            .identity()
            .ok_or_else(|| RingError::MultiplicationNotAMonoid("no multiplicative identity".into()))?;
        if n > 1 && one == zero {
            return Err(RingError::ZeroIsOne);
        }
        let ring = FiniteRing {
            n,
            add: add_flat,
            mul: mul_flat,
            zero,
            one,
            labels: None,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)) {
                        return Err(RingError::NotDistributive(a, b, c));
                    }
                }
            }
        }
        Ok(ring)
    }

    /// `Z/n₁ × ⋯ × Z/n_r`, elements in mixed radix with the last component
    /// varying fastest.
    pub fn zmod_product(moduli: &[usize]) -> Result<Self, RingError> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(RingError::InvalidModulus);
        }
        let n = moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m).filter(|&p| p <= DEFAULT_MAX_ORDER))
            .ok_or(RingError::CapExceeded {
                n: usize::MAX,
                cap: DEFAULT_MAX_ORDER,
            })?;
        let decode = |x: usize| decode_mixed(moduli, x);
        let encode = |parts: &[usize]| parts.iter().zip(moduli).fold(0, |acc, (&p, &m)| acc * m + p);
        let combine = |f: fn(usize, usize) -> usize| -> Vec<u32> {
            let mut out = Vec::with_capacity(n * n);
            for a in 0..n {
                let pa = decode(a);
                for b in 0..n {
                    let pb = decode(b);
                    let parts: Vec<usize> = pa
                        .iter()
                        .zip(&pb)
                        .zip(moduli)
                        .map(|((&x, &y), &m)| f(x, y) % m)
                        .collect();
                    out.push(encode(&parts) as u32);
                }
            }
            out
        };
        let labels = (0..n)
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
        let one = encode(&moduli.iter().map(|&m| 1 % m).collect::<Vec<_>>());
        Ok(FiniteRing {
            n,
            add: combine(|x, y| x + y),
            mul: combine(|x, y| x * y),
            zero: 0,
            one,
            labels: Some(labels),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, RingError> {
        if labels.len() != self.n {
            return Err(SemigroupError::LabelCount {
                expected: self.n,
                got: labels.len(),
            }
            .into());
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> ElementId {
        self.zero
    }

    pub fn one(&self) -> ElementId {
        self.one
    }

    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        self.add[a * self.n + b] as usize
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul[a * self.n + b] as usize
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn label(&self, a: ElementId) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        rows_of(&self.add, self.n)
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        rows_of(&self.mul, self.n)
    }

    fn check(&self, a: ElementId) -> Result<(), RingError> {
        if a >= self.n {
            return Err(RingError::OutOfRange { element: a, n: self.n });
        }
        Ok(())
    }

    /// `S_R`: the multiplicative monoid.
    pub fn mult_semigroup(&self) -> Semigroup {
        let s = Semigroup::from_fn(self.n, |a, b| self.mul(a, b)).expect("validated ring tables");
        match &self.labels {
            Some(l) => s.with_labels(l.clone()).expect("label count matches"),
            None => s,
        }
    }

    pub fn is_unit(&self, a: ElementId) -> bool {
        self.elements().any(|y| self.mul(a, y) == self.one)
    }

    /// `U(R)`, in increasing index order.
    pub fn units(&self) -> Vec<ElementId> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn unit_group(&self) -> AbelianGroup {
        let table = self
            .mult_semigroup()
            .restrict(&self.units())
            .expect("units are closed under multiplication");
        AbelianGroup::from_semigroup(table).expect("units form an abelian group")
    }

    fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.n)
    }

    /// Additive closure of a set already closed under multiplication by `R`.
    fn additive_closure(&self, mut set: FixedBitSet) -> Ideal {
        set.insert(self.zero);
        let mut frontier: Vec<ElementId> = set.ones().collect();
        while let Some(x) = frontier.pop() {
            let current: Vec<ElementId> = set.ones().collect();
            for y in current {
                let s = self.add(x, y);
                if !set.contains(s) {
                    set.insert(s);
                    frontier.push(s);
                }
            }
        }
        Ideal { members: set }
    }

    /// The ideal generated by `gens`.
    pub fn ideal_generated(&self, gens: &[ElementId]) -> Ideal {
        let mut set = self.empty_set();
        for &g in gens {
            for r in self.elements() {
                set.insert(self.mul(g, r));
            }
        }
        self.additive_closure(set)
    }

    /// `(a) = a·R`.
    pub fn principal_ideal(&self, a: ElementId) -> Ideal {
        let mut set = self.empty_set();
        for r in self.elements() {
            set.insert(self.mul(a, r));
        }
        Ideal { members: set }
    }

    pub fn whole(&self) -> Ideal {
        let mut set = self.empty_set();
        set.insert_range(..);
        Ideal { members: set }
    }

    /// Checks that `elements` form an ideal.
    pub fn ideal(&self, elements: &[ElementId]) -> Result<Ideal, RingError> {
        let mut set = self.empty_set();
        for &x in elements {
            self.check(x)?;
            set.insert(x);
        }
        if !set.contains(self.zero) {
            return Err(RingError::NotAnIdeal);
        }
        for x in set.ones() {
            for y in set.ones() {
                if !set.contains(self.add(x, y)) {
                    return Err(RingError::NotAnIdeal);
                }
            }
            for r in self.elements() {
                if !set.contains(self.mul(x, r)) {
                    return Err(RingError::NotAnIdeal);
                }
            }
        }
        Ok(Ideal { members: set })
    }

    /// `Ann(a) = {x : x·a = 0}`.
    pub fn annihilator(&self, a: ElementId) -> Ideal {
        let mut set = self.empty_set();
        for x in self.elements().filter(|&x| self.mul(x, a) == self.zero) {
            set.insert(x);
        }
        Ideal { members: set }
    }

    /// `R / I`; each coset is represented by its smallest element, and cosets
    /// are numbered in increasing order of representative.
    pub fn quotient(&self, ideal: &Ideal) -> Result<Quotient, RingError> {
        if ideal.members.len() != self.n {
            return Err(RingError::NotAnIdeal);
        }
        self.ideal(&ideal.elements())?;
        let mut projection = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in self.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            let class = reps.len();
            reps.push(x);
            for i in ideal.members.ones() {
                projection[self.add(x, i)] = class;
            }
        }
        let k = reps.len();
        let induced = |f: &dyn Fn(ElementId, ElementId) -> ElementId| -> Vec<u32> {
            let mut out = Vec::with_capacity(k * k);
            for &a in &reps {
                for &b in &reps {
                    out.push(projection[f(a, b)] as u32);
                }
            }
            out
        };
        let ring = FiniteRing {
            n: k,
            add: induced(&|a, b| self.add(a, b)),
            mul: induced(&|a, b| self.mul(a, b)),
            zero: projection[self.zero],
            one: projection[self.one],
            labels: Some(reps.iter().map(|&r| self.label(r)).collect()),
        };
        Ok(Quotient { ring, projection })
    }

    /// `R_a = R / Ann(a)`.
    pub fn residue_ring(&self, a: ElementId) -> Result<Quotient, RingError> {
        self.check(a)?;
        self.quotient(&self.annihilator(a))
    }

    /// Every ideal is principal; checked on pairs of generators, which
    /// suffices by induction on the number of generators.
    pub fn is_pir(&self) -> bool {
        let principal: HashSet<Ideal> = self.elements().map(|a| self.principal_ideal(a)).collect();
        let list: Vec<&Ideal> = principal.iter().collect();
        for (i, x) in list.iter().enumerate() {
            for y in &list[i + 1..] {
                let mut set = x.members.clone();
                set.union_with(&y.members);
                if !principal.contains(&self.additive_closure(set)) {
                    return false;
                }
            }
        }
        true
    }

    /// `K^{i+1}`: the ideal generated by products of `K^i` and `K`.
    fn next_power(&self, power: &Ideal, k: &Ideal) -> Ideal {
        let mut set = self.empty_set();
        for x in power.members.ones() {
            for y in k.members.ones() {
                set.insert(self.mul(x, y));
            }
        }
        self.additive_closure(set)
    }

    /// `K⁰ = R, K¹, …, K^{ind(K)}`.
    pub fn ideal_powers(&self, k: &Ideal) -> Vec<Ideal> {
        let mut powers = vec![self.whole()];
        loop {
            let next = self.next_power(powers.last().expect("nonempty"), k);
            if &next == powers.last().expect("nonempty") {
                return powers;
            }
            powers.push(next);
        }
    }

    /// `ind(K)`: the least `n` with `K^n = K^{n+1}`.
    pub fn ideal_index(&self, k: &Ideal) -> usize {
        self.ideal_powers(k).len() - 1
    }

    /// `ζ(K : c)`: the largest `t ≤ ind(K)` with `c ∈ K^t`.
    pub fn zeta(&self, k: &Ideal, c: ElementId) -> usize {
        let powers = self.ideal_powers(k);
        powers.iter().rposition(|p| p.contains(c)).expect("K⁰ = R contains c")
    }

    /// Generators of the maximal proper principal ideals, each the smallest
    /// element generating its ideal, ordered by generator.
    pub fn maximal_principal_ideals(&self) -> Vec<ElementId> {
        let whole = self.whole();
        let mut seen: Vec<Ideal> = Vec::new();
        let mut gens = Vec::new();
        for a in self.elements() {
            let ideal = self.principal_ideal(a);
            if ideal != whole && !seen.contains(&ideal) {
                seen.push(ideal);
                gens.push(a);
            }
        }
        let maximal: Vec<ElementId> = (0..seen.len())
            .filter(|&i| !(0..seen.len()).any(|j| j != i && seen[i].is_subset(&seen[j])))
            .map(|i| gens[i])
            .collect();
        maximal
    }

    /// Writes `b = a₁^{m₁} ⋯ a_r^{m_r} · u` with `mᵢ = ζ((aᵢ) : b)` and
    /// `u` the smallest unit that works.
    pub fn factorize_pir(&self, b: ElementId) -> Result<Factorization, RingError> {
        self.check(b)?;
        if !self.is_pir() {
            return Err(RingError::NotPIR);
        }
        let generators = self.maximal_principal_ideals();
        let exponents: Vec<usize> = generators
            .iter()
            .map(|&g| self.zeta(&self.principal_ideal(g), b))
            .collect();
        let product = generators
            .iter()
            .zip(&exponents)
            .fold(self.one, |acc, (&g, &m)| self.mul(acc, self.power(g, m)));
        let unit = self
            .units()
            .into_iter()
            .find(|&u| self.mul(product, u) == b)
            .ok_or_else(|| {
                RingError::InternalInvariantViolation(format!("no unit completes the factorization of {b}"))
            })?;
        Ok(Factorization {
            generators,
            exponents,
            unit,
        })
    }

    /// `a^k`, with `a⁰ = 1`.
    pub fn power(&self, a: ElementId, k: usize) -> ElementId {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    /// Longest strictly ascending chain of principal ideals above `(a)`.
    pub fn psi(&self, a: ElementId) -> Result<usize, RingError> {
        self.check(a)?;
        let mut ideals: Vec<Ideal> = Vec::new();
        for x in self.elements() {
            let ideal = self.principal_ideal(x);
            if !ideals.contains(&ideal) {
                ideals.push(ideal);
            }
        }
        let start = ideals
            .iter()
            .position(|i| *i == self.principal_ideal(a))
            .expect("(a) is listed");
        let mut memo = vec![None; ideals.len()];
        Ok(chain_above(&ideals, start, &mut memo))
    }

    /// `Ψ(a) + D(U(R / Ann(a))) − 1`, the value of `D_a(S_R)` for a
    /// principal ideal ring and a non-unit `a`.
    pub fn davenport_formula_value(&self, a: ElementId) -> Result<usize, RingError> {
        self.check(a)?;
        if !self.is_pir() {
            return Err(RingError::NotPIR);
        }
        if self.is_unit(a) {
            return Err(RingError::UnitElement(a));
        }
        let d = davenport_constant(&self.residue_ring(a)?.ring.unit_group())?;
        Ok(self.psi(a)? + d - 1)
    }

    /// Compares the invariant factors of `Γ(H_a)` and `U(R / Ann(a))`.
    pub fn gamma_unit_iso_check(&self, a: ElementId) -> Result<IsoCheck, RingError> {
        self.check(a)?;
        let s = self.mult_semigroup();
        let gamma = GreenStructure::new(&s).schutzenberger(a)?;
        let unit_factors = self.residue_ring(a)?.ring.unit_group().invariant_factors().to_vec();
        let units_cover_gamma = self.is_pir().then(|| {
            let mut hit = vec![false; gamma.order()];
            for u in self.units() {
                if let Some(p) = gamma.rho_of(u) {
                    hit[p] = true;
                }
            }
            hit.iter().all(|&h| h)
        });
        Ok(IsoCheck {
            gamma_factors: gamma.invariant_factors().to_vec(),
            unit_factors,
            units_cover_gamma,
        })
    }

    /// An irreducible sequence of length `Ψ(a) + D(Γ(H_a)) − 1` with product
    /// `a`, built from a long zero-sum-free sequence of `Γ(H_a)` lifted to
    /// units and a factorization of the remaining cofactor.
    pub fn extremal_sequence_pir(&self, a: ElementId) -> Result<Sequence, RingError> {
        self.check(a)?;
        if !self.is_pir() {
            return Err(RingError::NotPIR);
        }
        if self.is_unit(a) {
            return Err(RingError::UnitElement(a));
        }
        let s = self.mult_semigroup();
        let gamma = GreenStructure::new(&s).schutzenberger(a)?;
        let d_gamma = davenport_bruteforce(gamma.group())?;
        let units = self.units();
        let lift = |p: usize| -> Result<ElementId, RingError> {
            units
                .iter()
                .copied()
                .find(|&u| gamma.rho_of(u) == Some(p))
                .ok_or_else(|| RingError::InternalInvariantViolation(format!("no unit translates H_{a} by {p}")))
        };
        let v: Vec<ElementId> = d_gamma.witness.terms().map(lift).collect::<Result<_, _>>()?;
        let v_product = v.iter().fold(self.one, |acc, &u| self.mul(acc, u));
        let v_inverse = units
            .iter()
            .copied()
            .find(|&u| self.mul(u, v_product) == self.one)
            .expect("products of units are units");
        let b = self.mul(v_inverse, a);
        let f = self.factorize_pir(b)?;
        let first = f
            .exponents
            .iter()
            .position(|&m| m > 0)
            .ok_or(RingError::UnitElement(a))?;
        let mut terms = v;
        for (i, (&g, &m)) in f.generators.iter().zip(&f.exponents).enumerate() {
            if i == first {
                terms.push(self.mul(g, f.unit));
                terms.extend(std::iter::repeat_n(g, m - 1));
            } else {
                terms.extend(std::iter::repeat_n(g, m));
            }
        }
        let t = Sequence::from_terms(terms);
        let expected = self.psi(a)? + d_gamma.value - 1;
        if s.sigma(&t)? != a || t.len() != expected || !is_irreducible(&s, &t)? {
            return Err(RingError::InternalInvariantViolation(format!(
                "constructed sequence {} for {a} is not an extremal irreducible sequence",
                s.format_sequence(&t)
            )));
        }
        Ok(t)
    }
}

fn rows_of(flat: &[u32], n: usize) -> Vec<Vec<usize>> {
    flat.chunks(n).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
}

fn decode_mixed(moduli: &[usize], mut x: usize) -> Vec<usize> {
    let mut parts = vec![0; moduli.len()];
    for (i, &m) in moduli.iter().enumerate().rev() {
        parts[i] = x % m;
        x /= m;
    }
    parts
}

fn chain_above(ideals: &[Ideal], u: usize, memo: &mut Vec<Option<usize>>) -> usize {
    if let Some(h) = memo[u] {
        return h;
    }
    let mut best = 0;
    for v in 0..ideals.len() {
        if v != u && ideals[u].is_subset(&ideals[v]) {
            best = best.max(1 + chain_above(ideals, v, memo));
        }
    }
    memo[u] = Some(best);
    best
}

/// Index of the element with the given components in `Z/n₁ × ⋯ × Z/n_r`.
pub fn zmod_product_element(moduli: &[usize], components: &[usize]) -> Result<ElementId, RingError> {
    if components.len() != moduli.len() {
        return Err(RingError::ComponentCount {
            expected: moduli.len(),
            got: components.len(),
        });
    }
    Ok(components
        .iter()
        .zip(moduli)
        .fold(0, |acc, (&c, &m)| acc * m + c % m))
}

/// `Σ Ω(tᵢ) + D(U(Π Z/(nᵢ/tᵢ))) − 1` with `tᵢ = gcd(aᵢ, nᵢ)`: the closed
/// form of `D_a` for a non-unit `a` of a product of residue rings.
pub fn zmod_product_formula_value(moduli: &[usize], components: &[usize]) -> Result<usize, RingError> {
    if components.len() != moduli.len() {
        return Err(RingError::ComponentCount {
            expected: moduli.len(),
            got: components.len(),
        });
    }
    if moduli.contains(&0) {
        return Err(RingError::InvalidModulus);
    }
    let t: Vec<u64> = components
        .iter()
        .zip(moduli)
        .map(|(&c, &m)| gcd((c % m) as u64, m as u64))
        .collect();
    if t.iter().all(|&ti| ti == 1) {
        return Err(RingError::UnitElement(zmod_product_element(moduli, components)?));
    }
    let omega: u32 = t.iter().map(|&ti| big_omega(ti)).sum();
    let reduced: Vec<usize> = moduli.iter().zip(&t).map(|(&m, &ti)| m / ti as usize).collect();
    let d = davenport_constant(&FiniteRing::zmod_product(&reduced)?.unit_group())?;
    Ok(omega as usize + d - 1)
}

/// `F₂[u, v] / (u, v)²`: eight elements `α + βu + γv`, indexed by the bits
/// `α + 2β + 4γ`. Its maximal ideal `(u, v)` is not principal.
pub fn f2_uv() -> FiniteRing {
    let mul = |x: usize, y: usize| {
        let (a, b, c) = (x & 1, (x >> 1) & 1, (x >> 2) & 1);
        let (p, q, r) = (y & 1, (y >> 1) & 1, (y >> 2) & 1);
        (a & p) | (((a & q) ^ (p & b)) << 1) | (((a & r) ^ (p & c)) << 2)
    };
    let add: Vec<Vec<usize>> = (0..8).map(|x| (0..8).map(|y| x ^ y).collect()).collect();
    let mul: Vec<Vec<usize>> = (0..8).map(|x| (0..8).map(|y| mul(x, y)).collect()).collect();
    let labels = ["0", "1", "u", "1+u", "v", "1+v", "u+v", "1+u+v"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteRing::from_tables(&add, &mul)
        .and_then(|r| r.with_labels(labels))
        .expect("F2[u,v]/(u,v)^2 is a commutative ring")
}
