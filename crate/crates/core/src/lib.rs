//! A kernel for intuitionistic linear dependent type theory.
//!
//! The crate is organised bottom-up: [`syntax`] holds the locally nameless
//! core language, [`surface`] parses and prints it, [`checker`] implements the
//! typing rules with resource threading, [`equality`] decides judgemental
//! equality by normalisation, and [`model`] evaluates derivations in the
//! families model over pointed sets or GF(2) vector spaces.

pub mod checker;
pub mod corpus;
pub mod diag;
pub mod equality;
pub mod model;
pub mod surface;
pub mod syntax;
pub mod testgen;

pub use diag::{Diagnostic, Severity, Span};
pub use syntax::{alpha_eq, free_vars, subst_int, subst_lin, FreeVars, Hint, Syntax, Term, Ty, Var};
