//! Analysis of rotation symmetric Boolean functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolfn`]: packed truth tables, Möbius and Walsh–Hadamard transforms,
//!   weight, degree, nonlinearity and bentness;
//! - [`rotsym`]: cyclic-shift orbits, SANF terms and rotation symmetric specs;
//! - [`bentlab`]: corner entries of the `M = A Aᵀ` matrix, sign corners, the
//!   J-set nonlinearity bound, gap statistics and structural predicates;
//! - [`search`]: exhaustive and sampled enumeration used to check the
//!   classification results at small `n`.
//!
//! ```
//! use rotbent::rotsym::RotSymSpec;
//!
//! let f = RotSymSpec::parse(6, "x0x3").unwrap().build();
//! assert!(f.is_bent());
//! assert_eq!(f.nonlinearity(), 28);
//! ```

pub mod bentlab;
pub mod boolfn;
pub mod error;
pub mod rotsym;
pub mod search;

pub use boolfn::{AnfForm, BooleanFunction, WalshSpectrum};
pub use error::{Error, Result};
pub use rotsym::{CycleKind, Orbit, RotSymSpec, SanfTerm};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/truth-tables.md")]
    mod truth_tables {}
    #[doc = include_str!("../../../book/src/orbits.md")]
    mod orbits {}
    #[doc = include_str!("../../../book/src/corner-entry.md")]
    mod corner_entry {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
