//! Pointer/flag machine that executes planning programs on instances.

use std::collections::HashSet;
use std::fmt;

use rustc_hash::FxHashSet;

use crate::model::{
    apply_numeric, goal_satisfied, Domain, GpProblem, Instance, WorldState,
    DEFAULT_OVERFLOW_CAP,
};
use crate::program::{Instruction, PlanningProgram};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExecutionState {
    pub world: WorldState,
    pub line: usize,
    pub pointers: Vec<usize>,
    pub zero: bool,
    pub carry: bool,
    pub steps: u64,
}

impl ExecutionState {
    /// `(I_t, 0)` with zeroed pointers and cleared flags.
    pub fn initial(instance: &Instance, pointers: usize) -> Self {
        ExecutionState {
            world: instance.initial_state(),
            line: 0,
            pointers: vec![0; pointers],
            zero: false,
            carry: false,
            steps: 0,
        }
    }

    fn set_flags(&mut self, res: i64) {
        self.zero = res == 0;
        self.carry = res > 0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureReason {
    EndWithoutGoal,
    InfiniteLoop,
    StepBudget,
    PointerFault,
    Overflow,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::EndWithoutGoal => "end-without-goal",
            FailureReason::InfiniteLoop => "infinite-loop",
            FailureReason::StepBudget => "step-budget",
            FailureReason::PointerFault => "pointer-fault",
            FailureReason::Overflow => "overflow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Solved(ExecutionState),
    Failed {
        reason: FailureReason,
        state: ExecutionState,
    },
    ReachedUndefinedLine {
        line: usize,
        state: ExecutionState,
    },
}

impl RunOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, RunOutcome::Solved(_))
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, RunOutcome::Failed { .. })
    }

    /// The last reached program state.
    pub fn state(&self) -> &ExecutionState {
        match self {
            RunOutcome::Solved(s)
            | RunOutcome::Failed { state: s, .. }
            | RunOutcome::ReachedUndefinedLine { state: s, .. } => s,
        }
    }

    pub fn verdict(&self) -> String {
        match self {
            RunOutcome::Solved(_) => "Solved".to_string(),
            RunOutcome::Failed { reason, .. } => format!("Failed({reason})"),
            RunOutcome::ReachedUndefinedLine { line, .. } => {
                format!("Failed(undefined-line {line})")
            }
        }
    }
}

/// What a test or compare instruction inspected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inspection {
    /// Ground atom index (well-typed atoms only).
    Atom(usize),
    /// Unordered register pair, `lo < hi`.
    Pair(usize, usize),
}

pub struct StepEvent<'a> {
    /// Line of the executed instruction.
    pub line: usize,
    pub instruction: &'a Instruction,
    /// Result of a res-producing instruction.
    pub res: Option<i64>,
    pub inspected: Option<Inspection>,
    /// State after the step.
    pub state: &'a ExecutionState,
}

/// Hook called on every executed instruction.
pub trait Observer {
    fn start(&mut self, _state: &ExecutionState) {}
    fn step(&mut self, _event: &StepEvent<'_>) {}
}

impl Observer for () {}

impl<A: Observer, B: Observer> Observer for (A, B) {
    fn start(&mut self, state: &ExecutionState) {
        self.0.start(state);
        self.1.start(state);
    }
    fn step(&mut self, event: &StepEvent<'_>) {
        self.0.step(event);
        self.1.step(event);
    }
}

impl<O: Observer + ?Sized> Observer for &mut O {
    fn start(&mut self, state: &ExecutionState) {
        (**self).start(state);
    }
    fn step(&mut self, event: &StepEvent<'_>) {
        (**self).step(event);
    }
}

/// Distinct atoms tested and register pairs compared during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub tested: HashSet<usize>,
    pub compared: HashSet<(usize, usize)>,
}

impl Observer for Coverage {
    fn step(&mut self, event: &StepEvent<'_>) {
        match event.inspected {
            Some(Inspection::Atom(a)) => {
                self.tested.insert(a);
            }
            Some(Inspection::Pair(i, j)) => {
                self.compared.insert((i, j));
            }
            None => {}
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub budget: u64,
    pub overflow_cap: i64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: DEFAULT_STEP_BUDGET,
            overflow_cap: DEFAULT_OVERFLOW_CAP,
        }
    }
}

/// Result of one instruction.
#[derive(Debug)]
pub enum StepResult {
    Continue {
        res: Option<i64>,
        inspected: Option<Inspection>,
    },
    Fault(FailureReason),
}

/// Executes the instruction at `exec.line` (which must be defined and not `end`).
pub fn step(
    program: &PlanningProgram,
    exec: &mut ExecutionState,
    domain: &Domain,
    instance: &Instance,
    options: &RunOptions,
) -> StepResult {
    let instr = *program
        .get(exec.line)
        .expect("step called on an undefined line");
    let bound = instance.pointer_bound();
    let mut inspected = None;
    let res: Option<i64> = match instr {
        Instruction::Action { schema, args } => {
            let mut buf = [0usize; 6];
            for (k, z) in args.iter().enumerate() {
                buf[k] = exec.pointers[z];
            }
            let pointed = &buf[..args.len()];
            match (domain, instance, &mut exec.world) {
                (Domain::Strips(d), Instance::Strips(inst), WorldState::Strips(s)) => {
                    let s_id = schema as usize;
                    let schema_ref = &d.schemas[s_id];
                    let typed = schema_ref
                        .params
                        .iter()
                        .zip(pointed)
                        .all(|(p, &o)| inst.object_has_type(o, p.ty));
                    let mut ok = typed;
                    if ok {
                        let mut atom_args = [0usize; 6];
                        for pre in &schema_ref.pre {
                            for (k, &p) in pre.args.iter().enumerate() {
                                atom_args[k] = pointed[p];
                            }
                            let idx = inst.atom_index(pre.predicate, &atom_args[..pre.args.len()]);
                            if !s.contains(idx) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        let mut atom_args = [0usize; 6];
                        let mut index_of = |atom: &crate::model::Atom| {
                            for (k, &p) in atom.args.iter().enumerate() {
                                atom_args[k] = pointed[p];
                            }
                            inst.atom_index(atom.predicate, &atom_args[..atom.args.len()])
                        };
                        for del in &schema_ref.del {
                            s.remove(index_of(del));
                        }
                        for add in &schema_ref.add {
                            s.insert(index_of(add));
                        }
                    }
                    Some(ok as i64)
                }
                (Domain::Numeric(d), Instance::Numeric(_), WorldState::Numeric(regs)) => {
                    let schema_ref = &d.schemas[schema as usize];
                    match apply_numeric(schema_ref, regs, pointed, options.overflow_cap) {
                        Some(r) => Some(r),
                        None => return StepResult::Fault(FailureReason::Overflow),
                    }
                }
                _ => return StepResult::Fault(FailureReason::PointerFault),
            }
        }
        Instruction::Inc(z) => {
            let p = &mut exec.pointers[z as usize];
            if *p + 1 < bound {
                *p += 1;
                Some(1)
            } else {
                Some(0)
            }
        }
        Instruction::Dec(z) => {
            let p = &mut exec.pointers[z as usize];
            if *p > 0 {
                *p -= 1;
                Some(1)
            } else {
                Some(0)
            }
        }
        Instruction::Set(a, b) => {
            exec.pointers[b as usize] = exec.pointers[a as usize];
            Some(exec.pointers[b as usize] as i64)
        }
        Instruction::Clear(z) => {
            exec.pointers[z as usize] = 0;
            Some(0)
        }
        Instruction::Test { predicate, args } => match (instance, &exec.world) {
            (Instance::Strips(inst), WorldState::Strips(s)) => {
                let mut buf = [0usize; 6];
                for (k, z) in args.iter().enumerate() {
                    buf[k] = exec.pointers[z];
                }
                let objs = &buf[..args.len()];
                let p = predicate as usize;
                if inst.is_well_typed(p, objs) {
                    let idx = inst.atom_index(p, objs);
                    inspected = Some(Inspection::Atom(idx));
                    Some(s.contains(idx) as i64)
                } else {
                    Some(0)
                }
            }
            _ => return StepResult::Fault(FailureReason::PointerFault),
        },
        Instruction::Cmp(a, b) => {
            let (x, y) = (exec.pointers[a as usize], exec.pointers[b as usize]);
            if x != y {
                inspected = Some(Inspection::Pair(x.min(y), x.max(y)));
            }
            Some(x as i64 - y as i64)
        }
        Instruction::CmpVar(a, b) => match &exec.world {
            WorldState::Numeric(regs) => {
                let (x, y) = (exec.pointers[a as usize], exec.pointers[b as usize]);
                if x != y {
                    inspected = Some(Inspection::Pair(x.min(y), x.max(y)));
                }
                match regs[x].checked_sub(regs[y]) {
                    Some(r) => Some(r),
                    None => return StepResult::Fault(FailureReason::Overflow),
                }
            }
            WorldState::Strips(_) => return StepResult::Fault(FailureReason::PointerFault),
        },
        Instruction::Goto { target, cond } => {
            if cond.holds(exec.zero, exec.carry) {
                exec.line = target as usize;
            } else {
                exec.line += 1;
            }
            exec.steps += 1;
            return StepResult::Continue {
                res: None,
                inspected: None,
            };
        }
        Instruction::End => panic!("step called on end"),
    };
    if let Some(r) = res {
        exec.set_flags(r);
    }
    exec.line += 1;
    exec.steps += 1;
    StepResult::Continue { res, inspected }
}

/// Runs a program from the initial state of `instance` until it ends, fails,
/// or reaches an undefined line.
pub fn run(
    program: &PlanningProgram,
    domain: &Domain,
    instance: &Instance,
    pointers: usize,
    options: &RunOptions,
) -> RunOutcome {
    run_observed(program, domain, instance, pointers, options, &mut ())
}

pub fn run_observed(
    program: &PlanningProgram,
    domain: &Domain,
    instance: &Instance,
    pointers: usize,
    options: &RunOptions,
    observer: &mut impl Observer,
) -> RunOutcome {
    let mut exec = ExecutionState::initial(instance, pointers);
    observer.start(&exec);
    // States are recorded where a taken goto lands at or before its own line:
    // every cycle of control passes through such a landing point.
    let mut visited: FxHashSet<Box<[u64]>> = FxHashSet::default();
    let n = program.len();
    loop {
        if exec.line >= n {
            // ran past the last line: behaves as an implicit end
            return finish(exec, instance);
        }
        let line = exec.line;
        let instr = match program.get(line) {
            None => return RunOutcome::ReachedUndefinedLine { line, state: exec },
            Some(Instruction::End) => return finish(exec, instance),
            Some(i) => i,
        };
        if exec.steps >= options.budget {
            return RunOutcome::Failed {
                reason: FailureReason::StepBudget,
                state: exec,
            };
        }
        match step(program, &mut exec, domain, instance, options) {
            StepResult::Fault(reason) => return RunOutcome::Failed { reason, state: exec },
            StepResult::Continue { res, inspected } => {
                observer.step(&StepEvent {
                    line,
                    instruction: instr,
                    res,
                    inspected,
                    state: &exec,
                });
                if instr.is_goto() && exec.line <= line && !visited.insert(loop_key(&exec)) {
                    return RunOutcome::Failed {
                        reason: FailureReason::InfiniteLoop,
                        state: exec,
                    };
                }
            }
        }
    }
}

/// The execution state without its step counter, packed into one buffer.
fn loop_key(exec: &ExecutionState) -> Box<[u64]> {
    let mut key = Vec::with_capacity(exec.pointers.len() + 8);
    key.push(exec.line as u64 | (exec.zero as u64) << 62 | (exec.carry as u64) << 63);
    key.extend(exec.pointers.iter().map(|&p| p as u64));
    match &exec.world {
        WorldState::Strips(atoms) => key.extend_from_slice(atoms.words()),
        WorldState::Numeric(x) => key.extend(x.iter().map(|&v| v as u64)),
    }
    key.into_boxed_slice()
}

fn finish(exec: ExecutionState, instance: &Instance) -> RunOutcome {
    if goal_satisfied(&exec.world, instance) {
        RunOutcome::Solved(exec)
    } else {
        RunOutcome::Failed {
            reason: FailureReason::EndWithoutGoal,
            state: exec,
        }
    }
}

/// Runs the program on the selected instances (all when `subset` is `None`).
pub fn validate(
    program: &PlanningProgram,
    problem: &GpProblem,
    subset: Option<&[usize]>,
    options: &RunOptions,
) -> Vec<RunOutcome> {
    let all: Vec<usize>;
    let ids = match subset {
        Some(s) => s,
        None => {
            all = (0..problem.instances.len()).collect();
            &all
        }
    };
    ids.iter()
        .map(|&t| {
            run(
                program,
                &problem.domain,
                &problem.instances[t],
                problem.pointers,
                options,
            )
        })
        .collect()
}

pub fn all_solved(outcomes: &[RunOutcome]) -> bool {
    outcomes.iter().all(RunOutcome::is_solved)
}

/// One trace row per executed instruction: `i | instr | res | y_z y_c | pointers`.
pub struct TraceRecorder<'a> {
    domain: &'a Domain,
    pub rows: Vec<String>,
}

impl<'a> TraceRecorder<'a> {
    pub fn new(domain: &'a Domain) -> Self {
        TraceRecorder {
            domain,
            rows: Vec::new(),
        }
    }
}

impl Observer for TraceRecorder<'_> {
    fn step(&mut self, event: &StepEvent<'_>) {
        let res = event.res.map_or("-".to_string(), |r| r.to_string());
        let ptrs: Vec<String> = event.state.pointers.iter().map(|p| p.to_string()).collect();
        self.rows.push(format!(
            "{} | {} | {} | {} {} | {}",
            event.line,
            event.instruction.display(self.domain),
            res,
            event.state.zero as u8,
            event.state.carry as u8,
            ptrs.join(" ")
        ));
    }
}
