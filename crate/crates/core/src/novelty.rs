//! Action novelty ranks and novelty-based pruning of candidate instructions.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::pddl::RawLine;
use crate::program::{Instruction, PlanningProgram};

/// What counts as "the same action" for novelty purposes: planning actions
/// are compared by schema only, RAM actions by name and exact pointers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionIdentity {
    SchemaLevel(u16),
    InstantiatedRam(Instruction),
}

impl ActionIdentity {
    /// `None` for goto and end, which are never ranked.
    pub fn of(instruction: &Instruction) -> Option<ActionIdentity> {
        match instruction {
            Instruction::Action { schema, .. } => Some(ActionIdentity::SchemaLevel(*schema)),
            Instruction::Goto { .. } | Instruction::End => None,
            ram => Some(ActionIdentity::InstantiatedRam(*ram)),
        }
    }
}

/// Bound on the novelty rank of newly written actions, at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoveltyBound(usize);

impl NoveltyBound {
    pub fn new(v: usize) -> Result<Self, Error> {
        if v == 0 {
            return Err(Error::Config("novelty bound v must be at least 1".into()));
        }
        Ok(NoveltyBound(v))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// One plus the number of defined lines carrying the same identity.
pub fn novelty_rank(identity: ActionIdentity, program: &PlanningProgram) -> usize {
    1 + program
        .defined()
        .filter(|(_, w)| ActionIdentity::of(w) == Some(identity))
        .count()
}

/// True iff writing `candidate` would add an action whose rank already
/// exceeds the bound.
pub fn should_prune(program: &PlanningProgram, candidate: &Instruction, bound: NoveltyBound) -> bool {
    match ActionIdentity::of(candidate) {
        Some(id) => novelty_rank(id, program) > bound.get(),
        None => false,
    }
}

/// Identity key of a textual line: the schema name for planning actions,
/// the full instruction for RAM actions, `None` for goto and end.
pub fn raw_identity(line: &RawLine) -> Option<String> {
    const RAM: [&str; 7] = ["inc", "dec", "set", "clear", "cmp", "cmp_x", "test"];
    match line.op.as_str() {
        "goto" | "end" => None,
        op if RAM.contains(&op) || op.starts_with("test_") || op.starts_with("cmp_") => {
            Some(format!("{op}({})", line.args.join(",")))
        }
        op => Some(op.to_string()),
    }
}

/// Occurrence counts per identity of a textual program, sorted by key.
pub fn occurrence_table(lines: &[RawLine]) -> BTreeMap<String, usize> {
    let mut table = BTreeMap::new();
    for id in lines.iter().filter_map(raw_identity) {
        *table.entry(id).or_insert(0) += 1;
    }
    table
}
