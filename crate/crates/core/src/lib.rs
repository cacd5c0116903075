//! Irreducible sequences and relative Davenport constants of finite
//! commutative semigroups.
//!
//! A sequence over a semigroup `S` is a finite multiset of elements. It is
//! irreducible when no proper sub-multiset has the same sum, and `D_a(S)` is
//! the length of a longest irreducible sequence summing to `a`. This crate
//! computes `D_a(S)`, `D(S)` and `d(S)` exactly by exhaustive search and
//! compares them with the structural bounds built from Green's H-classes:
//! the chain length `Ψ(a)` of principal ideals above `a` and the
//! Schützenberger group `Γ(H_a)`.
//!
//! ```
//! use irrseq::{families::zmod_mult, search::relative_davenport};
//!
//! let s = zmod_mult(8);
//! let d = relative_davenport(&s, 4).unwrap();
//! assert_eq!(d.value, 2);
//! assert_eq!(s.format_sequence(&d.witness), "2 2");
//! ```

pub mod abelian;
pub mod arith;
pub mod families;
pub mod green;
pub mod parallel;
pub mod rings;
pub mod search;
pub mod semigroup;

pub use abelian::AbelianGroup;
pub use families::{CorpusEntry, FamilySpec};
pub use green::GreenStructure;
pub use parallel::Execution;
pub use rings::FiniteRing;
pub use search::{DavenportReport, SearchConfig};
pub use semigroup::{ElementId, Extremal, Semigroup, Sequence};
