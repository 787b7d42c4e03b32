//! A small typed DSL for relational and multirelational laws: ASCII terms
//! and formulas, a unification-based typechecker, an evaluator, and an
//! exhaustive/sampling search engine with deterministic parallel scanning.

pub mod ast;
pub mod engine;
pub mod eval;
pub mod parser;
pub mod typecheck;

pub use ast::{BinaryOp, CmpOp, ConstName, Formula, Law, LawFile, PredName, Term, UnaryOp};
pub use engine::{
    estimate_space, run_law, CheckOptions, LawReport, Mode, SearchGoal, Verdict,
    DEFAULT_MAX_SPACE,
};
pub use eval::{eval_formula, eval_term};
pub use parser::{parse_formula, parse_law_file, parse_term};
pub use typecheck::{typecheck_formula, typecheck_term, TFormula, TTerm};
