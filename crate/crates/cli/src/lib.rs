//! Front end for the `rbgs` engine: algebra files, an expression parser and
//! the `rbgs` subcommands.

pub mod algebra;
pub mod app;
pub mod expr;

pub use algebra::{parse_algebra, AlgebraFileError};
pub use app::{run, Outcome};
pub use expr::{parse_expression, Expression, ParseError};
