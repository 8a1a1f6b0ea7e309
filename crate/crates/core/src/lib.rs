//! Universal deformation rings of string modules over two-point gentle
//! algebras, with brute-force oracles for every step.

pub mod catalog;
pub mod dsl;
pub mod expected;
pub mod homext;
pub mod lifts;
pub mod linalg;
pub mod module;
pub mod presentation;
pub mod report;
pub mod strings;
pub mod udr;

pub use catalog::{lambda0, table1_catalog, CatalogEntry};
pub use linalg::{Matrix, PrimeField};
pub use module::{simple_module, string_module, FinModule};
pub use presentation::Presentation;
pub use strings::{enumerate_strings, make_string, word_isomorphic, Letter, StringWord};
