//! A kernel for the simply-typed lambda calculus with explicit weakening.
//!
//! Terms are de Bruijn terms with a single variable `#` and an explicit
//! weakening constructor `M^`; substitutions are built from `id`, `σ^` and
//! `σ , M`. Instantiation and composition are ordinary functions over this
//! syntax that dispatch on the substitution first, which makes the usual
//! substitution lemmas hold by computation. [`classical`] holds an
//! independent numbered-variable calculus used to cross-check the engine.

pub mod classical;
pub mod engine;
pub mod gen;
pub mod laws;
pub mod parse;
pub mod print;
pub mod syntax;
pub mod typeck;

use thiserror::Error;

pub use classical::{ClassicalTerm, ParallelSubst};
pub use engine::{Rule, TraceSink, TraceStep, DEFAULT_STEP_LIMIT};
pub use gen::{GenConfig, Generator};
pub use parse::{Annotated, SyntaxError};
pub use syntax::{Ctx, Subst, Term, Ty};
pub use typeck::{check_subst, check_term, infer_term, TypeError, TypedSubst, TypedTerm};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("variable {index} is out of scope in a context of length {depth}")]
    Scope { index: usize, depth: usize },
    #[error("context mismatch: expected {expected}, found {found}")]
    ContextMismatch { expected: String, found: String },
    #[error("no normal form within {limit} steps")]
    StepLimit { limit: usize },
    #[error("no term of type {ty} in {ctx} within size {size}")]
    Unsatisfiable { ctx: String, ty: String, size: usize },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
