//! Generalized planning as heuristic search over planning programs with
//! pointers.
//!
//! The crate covers the whole pipeline: STRIPS-fragment PDDL and builtin
//! numeric domains ([`model`], [`pddl`]), a program interpreter ([`vm`]),
//! action novelty ranks ([`novelty`]), evaluation functions ([`heuristics`]),
//! best-first and progressive search ([`search`]) and benchmark generators and
//! reports ([`bench`]).

pub mod bench;
pub mod config;
pub mod error;
pub mod heuristics;
pub mod model;
pub mod novelty;
pub mod pddl;
pub mod program;
pub mod search;
pub mod vm;

pub use config::{EvaluatorId, SearchMode};
pub use error::{Error, ParseError, Position, Result};
pub use model::{Domain, GpProblem, Instance, WorldState};
pub use program::{FlagCondition, Instruction, PlanningProgram};
pub use vm::{ExecutionState, FailureReason, RunOptions, RunOutcome};
