//! Ordinal notation system for reflection: terms, the order, coefficient
//! sets, validity, base-`L` normal forms, predecessor towers and
//! finite-universe closure operators.

pub mod closures;
pub mod coefficients;
pub mod enumerate;
pub mod gen;
pub mod lambda_cnf;
pub mod order;
pub mod parse;
pub mod suites;
pub mod term;
pub mod towers;
pub mod validity;

pub use order::{compare, ecmp};
pub use parse::{parse_eterm, parse_term, parse_vector, ParseError};
pub use term::{Config, ETerm, Kind, MVector, Mono, Term, Triple};
