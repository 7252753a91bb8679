//! A small dependently typed kernel with a cumulative hierarchy of universes
//! `U 0 : U 1 : ...`, where `U 0` (also written `Prop`) is an impredicative
//! universe of proof-irrelevant propositions.
//!
//! Conversion is decided by normalization by evaluation: terms are evaluated
//! into [`nbe::Value`]s and read back by a type-directed quote that
//! η-expands functions and collapses every proof to the constant
//! [`syntax::Term::Irrel`]. Two terms are convertible iff their normal forms
//! are syntactically equal.

pub mod cli;
pub mod global;
pub mod nbe;
pub mod parser;
pub mod syntax;
pub mod typecheck;

pub use global::{Decl, GlobalEnv};
pub use syntax::{Level, Term};
pub use typecheck::TypingContext;
