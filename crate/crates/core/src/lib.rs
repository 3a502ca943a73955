//! Exact lattice arithmetic for deciding whether a singular K3 surface is
//! the double cover of an Enriques surface.
//!
//! A singular K3 surface is given by its transcendental lattice, the
//! positive definite even form `[[2a, c], [c, 2b]]`. [`classify`] selects
//! the branch of the criterion from the parities of `(a, b, c)` and a
//! representation-of-one test, and returns a [`Certificate`] that
//! [`Certificate::verify`] replays from scratch.
//!
//! ```
//! use k3cover_core::{classify, Case, TranscendentalForm};
//!
//! let t = TranscendentalForm::new(1, 2, 1)?;
//! let c = classify(&t)?;
//! assert_eq!(c.case, Case::II);
//! assert!(c.covers);
//! c.verify(&t)?;
//! # Ok::<(), k3cover_core::Error>(())
//! ```

pub mod classify;
pub mod embedding;
pub mod error;
pub mod form;
pub mod lattice;
pub mod lemmas;
pub mod lll;
pub mod matrix;
pub mod quadform;
pub mod shortvec;
pub mod vinberg;

pub use classify::{case_of, certify, classify, classify_with, normalize_case_iii, Case, Certificate, Classification};
pub use embedding::{index_of_split, Complement, Embedding, TorsionWitness};
pub use error::{Error, Result};
pub use form::{ParityClass, Sl2Matrix, TranscendentalForm};
pub use lattice::{IntegralLattice, Signature, StandardLattice};
pub use matrix::IntMatrix;
pub use quadform::BinaryForm;
pub use shortvec::{enumerate_norm, has_norm, NormQuery, NormTarget};
pub use vinberg::{search_norm, FamilyTable, VinbergVector};
