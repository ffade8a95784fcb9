//! Rejection-augmented argumentation frameworks (RAFs).
//!
//! An RAF attaches to every argument of a Dung framework a *rejection
//! condition*: a set of propositional formulas (classical mode) or a
//! disjunctive logic program (asp mode). A set of arguments is an extension
//! when it is an extension of the underlying framework and the combined
//! conditions of its members, together with the membership facts, are
//! inconsistent.
//!
//! The crate provides
//! - the domain model and an instance parser ([`model`], [`parse`]),
//! - brute-force semantics for frameworks, logic and RAFs ([`af`], [`logic`], [`raf`]),
//! - simulations and hardness-instance generators ([`translate`]),
//! - tree decompositions ([`td`]) and decomposition-guided QBF encodings ([`encode`]),
//! - a QBF representation with evaluator and QDIMACS/QCIR output ([`qbf`]).
//!
//! Brute-force loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to sequential iteration otherwise.

pub mod af;
pub mod encode;
pub mod error;
pub mod logic;
pub mod model;
pub mod par;
pub mod parse;
pub mod qbf;
pub mod raf;
pub mod random;
pub mod td;
pub mod translate;

pub use error::{Error, Result};
pub use model::{Af, ArgSet, Caf, Condition, Formula, Lit, Mode, Raf, RcClass, Rule, Semantics};

/// Brute-force limits. Exceeding one is reported as [`Error::CapExceeded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of arguments for subset enumeration over a framework.
    pub arguments: usize,
    /// Maximum number of free variables / atoms in consistency checks.
    pub atoms: usize,
    /// Maximum number of variables handed to the QBF evaluator.
    pub qbf_vars: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { arguments: 20, atoms: 22, qbf_vars: 24 }
    }
}

/// Limits plus execution strategy for the brute-force procedures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub caps: Caps,
    pub exec: par::Exec,
}

impl Config {
    pub fn sequential() -> Config {
        Config { exec: par::Exec::Sequential, ..Config::default() }
    }
}
