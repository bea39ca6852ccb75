//! Plain-text operator syntax and documents.
//!
//! Grammar: `expr := [+|-] term (('+'|'-') term)*`,
//! `term := power (('*'|'/') power)*`, `power := atom ('^' nat)*`,
//! `atom := rational | t | var | dvar | dt | e<nat> | '(' expr ')'`.
//! Division is only by nonzero scalars.

mod document;
mod expr;

pub use document::{AlgebraSpec, FieldSpec, OperatorDocument};
pub use expr::{parse_operator, print_operator};
