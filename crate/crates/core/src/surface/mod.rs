//! Concrete syntax: an ASCII language for signatures, definitions and
//! checking directives.
//!
//! ```text
//! type A
//! type B
//! def f (y : Pi !x:A. B) : !A -o B := \x':!A. let[B] x' be !x in y !x
//! check (y : Pi !x:A. B) |- f : !A -o B
//! ```

pub mod lexer;
pub mod parser;
pub mod printer;

pub use parser::{
    parse_module, parse_module_with, parse_term, parse_ty, CtxEntry, Decl, DeclKind, ParseEnv,
    SourceModule,
};
pub use printer::{print_decl, print_module, print_term, print_term_with, print_ty, print_ty_with, Style};
