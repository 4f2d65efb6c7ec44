//! Symbolic engine for free Rota-Baxter associative algebras: bracketed
//! words, rewriting to normal forms, composition checking, post-Lie
//! algebras and their enveloping postassociative algebras.

pub mod envelope;
pub mod gsb;
pub mod poly;
pub mod postlie;
pub mod rewrite;
pub mod sample;
pub mod words;

pub use gsb::{check_pairs, GsbReport};
pub use envelope::{verify_embedding, verify_postassociative, Envelope, EnvelopeRules, Family};
pub use poly::{Polynomial, Rational};
pub use postlie::{hat, validate_post_lie, validate_rb_lie, PostLieAlgebra, RbLieAlgebra};
pub use rewrite::{Reducer, RewriteRule, RuleSource, Strategy};
pub use words::{Generator, Kind, Letter, StarWord, Word};
