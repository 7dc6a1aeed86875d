//! Uniform random canonical implicative expressions and their
//! classification as intuitionistic or classical theorems.
//!
//! - [`expr`]: expressions, tree shapes, growth strings, text and JSON forms
//! - [`count`]: Catalan/Bell counts, asymptotics, the class-count table
//! - [`randgen`]: Rémy trees, Stam partitions, uniform canonical expressions
//! - [`intuition`]: the simple/MP/easy/minor/cheap cascade
//! - [`classical`]: valuations, simple antilogies, tautology decision
//! - [`oracle`]: enumeration, complete provers, truth tables, chi-square
//! - [`experiment`]: parallel seeded experiments and their reports

pub mod classical;
pub mod count;
pub mod error;
pub mod experiment;
pub mod expr;
pub mod intuition;
pub mod oracle;
pub mod randgen;

pub use error::{Error, Result};
pub use expr::{CanonicalExpression, Expr, GrowthString, RemyVector, Spine, TreeShape, Var};
