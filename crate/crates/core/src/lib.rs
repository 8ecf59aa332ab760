//! Exact computations with K-theoretic invariants of extensions: finitely generated
//! abelian groups, Hom and (pointed) Ext, six-term exact sequences with units,
//! congruence and isomorphism decisions.

pub mod abgroup;
pub mod cli;
pub mod error;
pub mod homalg;
pub mod invariants;
pub mod matrix;
pub mod sixterm;
pub mod snf;
pub mod uct;

pub use abgroup::{FgAbGroup, GroupElement, Subquotient};
pub use error::{Error, Result};
pub use homalg::{GroupHom, ShortExactSeq};

pub use matrix::IntMatrix;

pub use snf::{smith_normal_form, Snf};
pub use invariants::Decision;
pub use sixterm::SixTermSequence;
