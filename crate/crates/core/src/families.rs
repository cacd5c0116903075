//! Explicit semigroup families, family spec strings, and the registry of
//! small instances used for verification.
//!
//! Two families attain the two ends of the bound
//! `ε·D(Γ(H_a)) ≤ D_a(S) ≤ Ψ(a) + D(Γ(H_a)) − 1`:
//!
//! * `S₁(n, r)` is generated by `x₁, …, x_r` with `(n+1)xᵢ = xᵢ` and
//!   `xᵢ + x_j = x_j` for `i < j`. Its elements are the normal forms `m·xᵢ`
//!   with `m ∈ [1, n]`, and `(n/2)x_k` has `D_a = n/2`.
//! * `S₂(m)` is generated by `x₀, …, x_m` with `(m+1)x₀ = x₀`,
//!   `x₀ + x_k = x_{|k+1|_m}` and `xᵢ + x_j = ∞` for all `i, j ∈ [1, m]`.
//!   Here `x_m` has `D_a = m`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::rings::{f2_uv, FiniteRing, RingError};
use crate::semigroup::{ElementId, Semigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("S1 needs an even n >= 2, got {0}")]
    OddN(usize),
    #[error("S1 needs r >= 1")]
    ZeroR,
    #[error("S2 needs m > 2, got {0}")]
    MTooSmall(usize),
    #[error("Z_n needs n >= 1")]
    ZeroN,
    #[error("unrecognized family spec {0:?}")]
    BadSpec(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A constructed semigroup with the elements its family singles out.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub semigroup: Semigroup,
    /// The underlying ring when the semigroup is `S_R`.
    pub ring: Option<FiniteRing>,
    /// Moduli `n₁, …, n_r` when the ring is `Z/n₁ × ⋯ × Z/n_r`.
    pub moduli: Option<Vec<usize>>,
    pub designated: Vec<ElementId>,
}

/// `S₁(n, r)`; element `m·xᵢ` has index `(i−1)·n + (m−1)`. The designated
/// elements are `(n/2)x_k` for `k ∈ [1, r]`.
pub fn build_s1(n: usize, r: usize) -> Result<Instance, FamilyError> {
    if n == 0 || n % 2 == 1 {
        return Err(FamilyError::OddN(n));
    }
    if r == 0 {
        return Err(FamilyError::ZeroR);
    }
    let op = |a: usize, b: usize| {
        let (i, m) = (a / n, a % n + 1);
        let (j, l) = (b / n, b % n + 1);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => i * n + (m + l - 1) % n,
        }
    };
    let labels = (0..n * r)
        .map(|a| {
            let (i, m) = (a / n + 1, a % n + 1);
            if m == 1 {
                format!("x{i}")
            } else {
                format!("{m}*x{i}")
            }
        })
        .collect();
    let semigroup = Semigroup::from_fn(n * r, op)
        .and_then(|s| s.with_labels(labels))
        .expect("S1 normal forms define a commutative semigroup");
    Ok(Instance {
        name: format!("S1_{n}_{r}"),
        semigroup,
        ring: None,
        moduli: None,
        designated: (0..r).map(|k| k * n + n / 2 - 1).collect(),
    })
}

/// `S₂(m)`; `k·x₀` has index `k−1`, `x_j` index `m+j−1` and `∞` index `2m`.
/// The relation `xᵢ + x_j = ∞` is applied for all `i, j ∈ [1, m]`. The
/// designated element is `x_m`.
pub fn build_s2(m: usize) -> Result<Instance, FamilyError> {
    if m <= 2 {
        return Err(FamilyError::MTooSmall(m));
    }
    let inf = 2 * m;
    let op = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        if b == inf {
            inf
        } else if b < m {
            // k·x₀ + l·x₀ with k = a+1, l = b+1.
            (a + b + 1) % m
        } else if a < m {
            // k·x₀ + x_j = x_{|j+k|_m}
            let (k, j) = (a + 1, b - m + 1);
            m + (j + k - 1) % m
        } else {
            inf
        }
    };
    let labels = (0..=inf)
        .map(|x| match x {
            0 => "x0".to_string(),
            x if x < m => format!("{}*x0", x + 1),
            x if x < inf => format!("x{}", x - m + 1),
            _ => "inf".to_string(),
        })
        .collect();
    let semigroup = Semigroup::from_fn(2 * m + 1, op)
        .and_then(|s| s.with_labels(labels))
        .expect("S2 normal forms define a commutative semigroup");
    Ok(Instance {
        name: format!("S2_{m}"),
        semigroup,
        ring: None,
        moduli: None,
        designated: vec![2 * m - 1],
    })
}

/// The additive group `Z_n`, labelled `0..n`.
pub fn build_zn(n: usize) -> Semigroup {
    AbelianGroup::cyclic(n.max(1)).table().clone()
}

/// The multiplicative semigroup of `Z/n`.
pub fn zmod_mult(n: usize) -> Semigroup {
    FiniteRing::zmod_product(&[n.max(1)])
        .expect("Z/n is within the size cap")
        .mult_semigroup()
}

/// A family spec string: `s1:n=4,r=2`, `s2:m=3`, `zn:n=6`, `zmod:12` or
/// `zmodprod:2,4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    S1 { n: usize, r: usize },
    S2 { m: usize },
    Zn { n: usize },
    Zmod { n: usize },
    ZmodProduct { moduli: Vec<usize> },
}

fn parse_usize(text: &str, spec: &str) -> Result<usize, FamilyError> {
    text.trim()
        .parse()
        .map_err(|_| FamilyError::BadSpec(spec.to_string()))
}

/// Parses `key=value` pairs separated by commas; bare values are accepted
/// in place for single-parameter families.
fn parse_params<'a>(body: &'a str, keys: &[&str], spec: &str) -> Result<Vec<usize>, FamilyError> {
    let parts: Vec<&'a str> = body.split(',').map(str::trim).collect();
    if parts.len() != keys.len() {
        return Err(FamilyError::BadSpec(spec.to_string()));
    }
    let mut values = vec![None; keys.len()];
    for (pos, part) in parts.iter().enumerate() {
        let (slot, value) = match part.split_once('=') {
            Some((k, v)) => (
                keys.iter()
                    .position(|key| *key == k.trim())
                    .ok_or_else(|| FamilyError::BadSpec(spec.to_string()))?,
                v,
            ),
            None => (pos, *part),
        };
        if values[slot].is_some() {
            return Err(FamilyError::BadSpec(spec.to_string()));
        }
        values[slot] = Some(parse_usize(value, spec)?);
    }
    Ok(values.into_iter().map(|v| v.expect("all slots filled")).collect())
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(spec: &str) -> Result<Self, FamilyError> {
        let (kind, body) = spec
            .trim()
            .split_once(':')
            .ok_or_else(|| FamilyError::BadSpec(spec.to_string()))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "s1" => {
                let v = parse_params(body, &["n", "r"], spec)?;
                Ok(FamilySpec::S1 { n: v[0], r: v[1] })
            }
            "s2" => Ok(FamilySpec::S2 {
                m: parse_params(body, &["m"], spec)?[0],
            }),
            "zn" => Ok(FamilySpec::Zn {
                n: parse_params(body, &["n"], spec)?[0],
            }),
            "zmod" => Ok(FamilySpec::Zmod {
                n: parse_params(body, &["n"], spec)?[0],
            }),
            "zmodprod" => {
                let moduli = body
                    .split(',')
                    .map(|p| parse_usize(p, spec))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FamilySpec::ZmodProduct { moduli })
            }
            _ => Err(FamilyError::BadSpec(spec.to_string())),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::S1 { n, r } => write!(f, "s1:n={n},r={r}"),
            FamilySpec::S2 { m } => write!(f, "s2:m={m}"),
            FamilySpec::Zn { n } => write!(f, "zn:n={n}"),
            FamilySpec::Zmod { n } => write!(f, "zmod:{n}"),
            FamilySpec::ZmodProduct { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|m| m.to_string()).collect();
                write!(f, "zmodprod:{}", parts.join(","))
            }
        }
    }
}

fn ring_name(moduli: &[usize]) -> String {
    let parts: Vec<String> = moduli.iter().map(|m| format!("Zmod{m}")).collect();
    format!("{}_mult", parts.join("x"))
}

fn ring_instance(moduli: &[usize]) -> Result<Instance, FamilyError> {
    let ring = FiniteRing::zmod_product(moduli)?;
    Ok(Instance {
        name: ring_name(moduli),
        semigroup: ring.mult_semigroup(),
        ring: Some(ring),
        moduli: Some(moduli.to_vec()),
        designated: Vec::new(),
    })
}

impl FamilySpec {
    pub fn build(&self) -> Result<Instance, FamilyError> {
        match self {
            FamilySpec::S1 { n, r } => build_s1(*n, *r),
            FamilySpec::S2 { m } => build_s2(*m),
            FamilySpec::Zn { n } => {
                if *n == 0 {
                    return Err(FamilyError::ZeroN);
                }
                Ok(Instance {
                    name: format!("Z{n}"),
                    semigroup: build_zn(*n),
                    ring: None,
                    moduli: None,
                    designated: if n % 2 == 0 { vec![n / 2] } else { Vec::new() },
                })
            }
            FamilySpec::Zmod { n } => ring_instance(&[*n]),
            FamilySpec::ZmodProduct { moduli } => ring_instance(moduli),
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedKind {
    /// A closed form proved for the family.
    ClosedForm,
    /// Established by exhaustive search in an independent check.
    Exhaustive,
}

/// A known value of `D_a` for one element of a corpus entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub element: ElementId,
    pub value: usize,
    pub kind: ExpectedKind,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    /// The construction this entry instantiates.
    pub source: &'static str,
    pub semigroup: Semigroup,
    pub ring: Option<FiniteRing>,
    pub moduli: Option<Vec<usize>>,
    pub expected: Vec<Expected>,
}

impl CorpusEntry {
    fn new(source: &'static str, instance: Instance) -> Self {
        CorpusEntry {
            name: instance.name,
            source,
            semigroup: instance.semigroup,
            ring: instance.ring,
            moduli: instance.moduli,
            expected: Vec::new(),
        }
    }

    fn expect(mut self, element: ElementId, value: usize, kind: ExpectedKind) -> Self {
        self.expected.push(Expected { element, value, kind });
        self
    }

    pub fn is_group(&self) -> bool {
        self.semigroup.units().is_ok_and(|u| u.len() == self.semigroup.order())
    }
}

impl FamilySpec {
    /// Builds the instance with the `D_a` values known for its family attached.
    pub fn corpus_entry(&self) -> Result<CorpusEntry, FamilyError> {
        let instance = self.build()?;
        let designated = instance.designated.clone();
        Ok(match self {
            FamilySpec::S1 { n, .. } => designated
                .into_iter()
                .fold(CorpusEntry::new("S1 family", instance), |e, a| {
                    e.expect(a, n / 2, ExpectedKind::ClosedForm)
                }),
            FamilySpec::S2 { m } => {
                CorpusEntry::new("S2 family", instance).expect(designated[0], *m, ExpectedKind::ClosedForm)
            }
            FamilySpec::Zn { n } => designated
                .into_iter()
                .fold(CorpusEntry::new("cyclic group", instance), |e, a| {
                    e.expect(a, n / 2, ExpectedKind::ClosedForm)
                }),
            FamilySpec::Zmod { n } => {
                let entry = CorpusEntry::new("multiplicative semigroup of a residue ring", instance);
                match n {
                    8 => entry.expect(4, 2, ExpectedKind::Exhaustive),
                    12 => entry.expect(2, 2, ExpectedKind::Exhaustive),
                    _ => entry,
                }
            }
            FamilySpec::ZmodProduct { .. } => {
                CorpusEntry::new("multiplicative semigroup of a residue ring product", instance)
            }
        })
    }
}

/// The fixed verification registry, in a deterministic order.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut specs: Vec<FamilySpec> = (1..=10).map(|n| FamilySpec::Zn { n }).collect();
    for n in [2, 4, 6] {
        for r in [1, 2] {
            specs.push(FamilySpec::S1 { n, r });
        }
    }
    specs.extend([3, 4, 5].map(|m| FamilySpec::S2 { m }));
    specs.extend((4..=12).map(|n| FamilySpec::Zmod { n }));
    for moduli in [[2, 2], [2, 4], [3, 3]] {
        specs.push(FamilySpec::ZmodProduct { moduli: moduli.to_vec() });
    }
    let mut out: Vec<CorpusEntry> = specs
        .iter()
        .map(|spec| spec.corpus_entry().expect("corpus parameters are valid"))
        .collect();
    let ring = f2_uv();
    out.push(CorpusEntry {
        name: "F2uv_mult".to_string(),
        source: "multiplicative semigroup of a non-principal ideal ring",
        semigroup: ring.mult_semigroup(),
        ring: Some(ring),
        moduli: None,
        expected: Vec::new(),
    });
    for moduli in [&[2usize, 2][..], &[2, 4], &[3, 3], &[2, 2, 2]] {
        let parts: Vec<String> = moduli.iter().map(|m| format!("Z{m}")).collect();
        out.push(CorpusEntry {
            name: parts.join("x"),
            source: "abelian group",
            semigroup: AbelianGroup::direct_sum(moduli).table().clone(),
            ring: None,
            moduli: None,
            expected: Vec::new(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::GreenStructure;
    use crate::semigroup::adjoin_identity;

    #[test]
    fn s1_examples() {
        let s = build_s1(4, 1).unwrap().semigroup;
        assert_eq!(s.order(), 4);
        assert_eq!(s.identity(), Some(3));
        let s = build_s1(4, 2).unwrap();
        assert_eq!(s.semigroup.order(), 8);
        let (x1, x2) = (s.semigroup.find_element("x1").unwrap(), s.semigroup.find_element("x2").unwrap());
        assert_eq!(s.semigroup.op(x1, x2), x2);
        // n·x₁ is an identity for every r.
        assert_eq!(s.semigroup.identity(), s.semigroup.find_element("4*x1"));
        assert!(!adjoin_identity(&s.semigroup).adjoined());
        let labels: Vec<String> = s.designated.iter().map(|&a| s.semigroup.label(a)).collect();
        assert_eq!(labels, vec!["2*x1", "2*x2"]);
        assert_eq!(build_s1(2, 3).unwrap().semigroup.order(), 6);
        assert_eq!(build_s1(3, 1).unwrap_err(), FamilyError::OddN(3));
    }

    #[test]
    fn s1_with_one_generator_is_cyclic() {
        // m·x₁ ↦ m mod n is an isomorphism onto Z_n.
        for n in [2, 4, 6] {
            let s = build_s1(n, 1).unwrap().semigroup;
            let z = build_zn(n);
            let phi = |a: usize| (a + 1) % n;
            for a in s.elements() {
                for b in s.elements() {
                    assert_eq!(phi(s.op(a, b)), z.op(phi(a), phi(b)));
                }
            }
        }
    }

    #[test]
    fn s2_examples() {
        let s = build_s2(3).unwrap().semigroup;
        assert_eq!(s.order(), 7);
        assert_eq!(s.label(s.identity().unwrap()), "3*x0");
        let f = |name: &str| s.find_element(name).unwrap();
        assert_eq!(s.op(f("x1"), f("x2")), f("inf"));
        let s4 = build_s2(4).unwrap().semigroup;
        let g = |name: &str| s4.find_element(name).unwrap();
        assert_eq!(s4.op(g("x0"), g("x4")), g("x1"));
        assert_eq!(build_s2(2).unwrap_err(), FamilyError::MTooSmall(2));
    }

    #[test]
    fn designated_elements_have_the_stated_structure() {
        for m in [3, 4, 5] {
            let inst = build_s2(m).unwrap();
            let s = &inst.semigroup;
            let g = GreenStructure::new(s);
            let a = inst.designated[0];
            let mut h: Vec<String> = g.h_class(a).iter().map(|&x| s.label(x)).collect();
            h.sort();
            let mut want: Vec<String> = (1..=m).map(|j| format!("x{j}")).collect();
            want.sort();
            assert_eq!(h, want);
            assert_eq!(g.schutzenberger(a).unwrap().invariant_factors(), &[m as u64]);
            assert!(!g.is_h_idempotent(a));
        }
        for (n, r) in [(2, 1), (4, 2), (6, 2)] {
            let inst = build_s1(n, r).unwrap();
            let s = &inst.semigroup;
            let g = GreenStructure::new(s);
            for (k, &a) in inst.designated.iter().enumerate() {
                let generated: Vec<usize> = (k * n..(k + 1) * n).collect();
                assert_eq!(g.h_class(a), generated.as_slice());
                assert!(g.is_h_idempotent(a));
                assert_eq!(g.schutzenberger(a).unwrap().invariant_factors(), &[n as u64]);
            }
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for text in ["s1:n=4,r=2", "s2:m=3", "zn:n=6", "zmod:12", "zmodprod:2,4"] {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            spec.build().unwrap();
        }
        assert_eq!("s1:r=2,n=4".parse::<FamilySpec>().unwrap(), FamilySpec::S1 { n: 4, r: 2 });
        assert_eq!("zn:6".parse::<FamilySpec>().unwrap(), FamilySpec::Zn { n: 6 });
        for bad in ["", "zn", "zn:n=x", "q:3", "s1:n=4", "s1:n=4,n=2", "zmodprod:2,,4"] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad:?}");
        }
        assert!(FamilySpec::Zn { n: 0 }.build().is_err());
        assert_eq!(FamilySpec::Zmod { n: 8 }.build().unwrap().semigroup, zmod_mult(8));
    }

    #[test]
    fn corpus_registry() {
        let c = corpus();
        let names: Vec<&str> = c.iter().map(|e| e.name.as_str()).collect();
        for required in ["Z1", "Z10", "S1_6_2", "S2_5", "Zmod4_mult", "Zmod12_mult", "Zmod2xZmod4_mult", "F2uv_mult", "Z2xZ2xZ2"] {
            assert!(names.contains(&required), "{required}");
        }
        let find = |name: &str| c.iter().find(|e| e.name == name).unwrap();
        let s2 = find("S2_3");
        assert_eq!(s2.semigroup.label(s2.expected[0].element), "x3");
        assert_eq!(s2.expected[0].value, 3);
        let s1 = find("S1_4_2");
        assert_eq!(s1.semigroup.label(s1.expected[0].element), "2*x1");
        assert_eq!(s1.expected[0].value, 2);
        assert_eq!(find("Zmod12_mult").expected[0], Expected { element: 2, value: 2, kind: ExpectedKind::Exhaustive });
        assert!(find("Z2xZ4").is_group());
        assert!(!find("Zmod4_mult").is_group());
        // Deterministic.
        assert_eq!(names, corpus().iter().map(|e| e.name.clone()).collect::<Vec<_>>());
    }
}
