//! Kernel subgroups of direct products of free groups.
//!
//! The groups `K^n_m(r)` are kernels of maps `F_m x ... x F_m -> Z^r`. This
//! crate provides exact free-group arithmetic, membership and rewriting over
//! finite generating sets, the amalgam splitting of `K^n_m(m)`, brute-force
//! area search over finite presentations, word-metric balls, and the
//! certificate pipeline that chains these into lower bounds on area.

pub mod abelian;
pub mod certificate;
pub mod error;
pub mod exec;
pub mod kernel;
pub mod metric;
pub mod presentation;
pub mod product;
pub mod splitting;
pub mod text;
pub mod word;

pub use error::{Error, ParseError, Result};
pub use exec::Exec;
pub use product::ProductElement;
pub use word::{FreeGroup, Letter, Word};
