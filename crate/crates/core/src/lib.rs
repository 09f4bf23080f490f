//! Two-qubit entanglement, mixedness and CHSH-violation numerics.
//!
//! The crate computes, for any 4×4 density matrix, the triple
//! `(S_L, C, m)` of normalized linear entropy, concurrence and the Horodecki
//! CHSH quantity `m(ρ)` (the state violates some CHSH inequality iff `m > 1`).
//! On top of that it builds the standard extremal state families, seeded
//! random-state samplers, and a binned atlas of the entropy–concurrence plane
//! that classifies each cell as all-violating, non-violating or mixed.
//!
//! Basis order everywhere is `|00⟩, |01⟩, |10⟩, |11⟩`.
//!
//! ```
//! use chsh_atlas::families::{make_werner, WernerParam};
//! use chsh_atlas::measures::quantity_triple;
//!
//! let w = make_werner(WernerParam::new(0.8).unwrap()).unwrap();
//! let t = quantity_triple(&w).unwrap();
//! assert!((t.s - 0.36).abs() < 1e-12);
//! assert!((t.c - 0.7).abs() < 1e-12);
//! assert!((t.m - 1.28).abs() < 1e-12);
//! ```

pub mod atlas;
pub mod error;
pub mod families;
pub mod kernel;
pub mod measures;
pub mod qstate;
pub mod sampling;

pub use error::{Error, Result};
pub use kernel::ComplexMatrix;
pub use num_complex::Complex64;
pub use qstate::{DensityMatrix, QuantityTriple};
