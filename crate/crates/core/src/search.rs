//! Best-first search over planning programs: BFS(v) over all instances and
//! progressive PGP(v) over a growing set of active instances.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::config::{EvaluatorId, SearchMode};
use crate::error::{Error, Result};
use crate::heuristics::{EvaluatorStack, Guidance, InstanceRun, Score};
use crate::model::{Domain, GpProblem};
use crate::novelty::{should_prune, NoveltyBound};
use crate::program::{FlagCondition, Instruction, PlanningProgram};
use crate::vm::{validate, RunOptions, RunOutcome};

/// Step budget per run during search; desk-scale solutions need far fewer.
pub const SEARCH_STEP_BUDGET: u64 = 1_000;

/// Open-list size at which the search stops with a memory limit.
pub const DEFAULT_OPEN_LIMIT: usize = 4_000_000;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub v: usize,
    pub evaluators: Vec<EvaluatorId>,
    pub run: RunOptions,
    pub time_limit: Option<Duration>,
    /// Stop after this many evaluated nodes.
    pub node_limit: Option<u64>,
    /// Stop when the open list holds this many nodes.
    pub open_limit: Option<usize>,
    /// Enforce the first-line and goto-to-goto restrictions.
    pub structural_restrictions: bool,
    /// Prune children by novelty rank; off gives plain BFS / PGP.
    pub novelty_pruning: bool,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, v: usize, evaluators: Vec<EvaluatorId>) -> Self {
        SearchConfig {
            mode,
            v,
            evaluators,
            run: RunOptions {
                budget: SEARCH_STEP_BUDGET,
                ..RunOptions::default()
            },
            time_limit: None,
            node_limit: None,
            open_limit: Some(DEFAULT_OPEN_LIMIT),
            structural_restrictions: true,
            novelty_pruning: true,
        }
    }

    /// Label in the style `B(v)_{5,1}` / `P(v)_{lm,1,ha}`, or `B_{5,1}`
    /// without novelty pruning.
    pub fn label(&self) -> String {
        let parts: Vec<&str> = self.evaluators.iter().map(|e| e.short()).collect();
        let m = match self.mode {
            SearchMode::Bfs => 'B',
            SearchMode::Pgp => 'P',
        };
        let v = if self.novelty_pruning { "(v)" } else { "" };
        format!("{m}{v}_{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub evaluated: u64,
    pub pruned_novelty: u64,
    pub pruned_dead_end: u64,
    pub escalations: u64,
    /// Active instance sets, one entry per phase.
    pub active_history: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Time,
    Nodes,
    Memory,
}

impl LimitKind {
    pub fn name(self) -> &'static str {
        match self {
            LimitKind::Time => "time",
            LimitKind::Nodes => "nodes",
            LimitKind::Memory => "memory",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Solved(PlanningProgram),
    Unsolvable,
    ResourceLimit(LimitKind),
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn solution(&self) -> Option<&PlanningProgram> {
        match &self.outcome {
            SearchOutcome::Solved(p) => Some(p),
            _ => None,
        }
    }
}

/// Hooks for observing a search; used for audits and golden tests.
pub trait SearchMonitor {
    fn expanded(&mut self, _program: &PlanningProgram) {}
    fn generated(&mut self, _program: &PlanningProgram) {}
}

impl SearchMonitor for () {}

/// Records every expanded and generated program in order.
#[derive(Debug, Default)]
pub struct RecordingMonitor {
    pub expanded: Vec<PlanningProgram>,
    pub generated: Vec<PlanningProgram>,
}

impl SearchMonitor for RecordingMonitor {
    fn expanded(&mut self, program: &PlanningProgram) {
        self.expanded.push(program.clone());
    }
    fn generated(&mut self, program: &PlanningProgram) {
        self.generated.push(program.clone());
    }
}

/// Status of a program on the active instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    DeadEnd,
    Solved,
    /// Line to program next.
    Open(usize),
}

fn status(runs: &[InstanceRun]) -> Status {
    if runs.iter().any(|r| r.outcome.is_failed()) {
        return Status::DeadEnd;
    }
    runs.iter()
        .find_map(|r| match r.outcome {
            RunOutcome::ReachedUndefinedLine { line, .. } => Some(Status::Open(line)),
            _ => None,
        })
        .unwrap_or(Status::Solved)
}

/// Every instruction that may be written into `line`, in the fixed
/// enumeration order, after the structural restrictions but before novelty.
pub fn candidate_instructions(
    program: &PlanningProgram,
    line: usize,
    domain: &Domain,
    pointers: usize,
    structural: bool,
) -> Vec<Instruction> {
    let mut out = Vec::new();
    let mut schemas: Vec<usize> = (0..domain.schema_count()).collect();
    schemas.sort_by(|&a, &b| domain.schema_name(a).cmp(domain.schema_name(b)));
    for s in schemas {
        for_each_tuple(pointers, domain.schema_arity(s), |t| out.push(Instruction::action(s, t)));
    }
    let first = structural && line == 0;
    let zs = 0..pointers as u8;
    out.extend(zs.clone().map(Instruction::Inc));
    if !first {
        out.extend(zs.clone().map(Instruction::Dec));
        for a in zs.clone() {
            out.extend(zs.clone().filter(|&b| b != a).map(|b| Instruction::Set(a, b)));
        }
        out.extend(zs.clone().map(Instruction::Clear));
    }
    match domain {
        Domain::Strips(d) => {
            let mut preds: Vec<usize> = (0..d.predicates.len()).collect();
            preds.sort_by(|&a, &b| d.predicates[a].name.cmp(&d.predicates[b].name));
            for p in preds {
                for_each_tuple(pointers, d.predicates[p].arity(), |t| out.push(Instruction::test(p, t)));
            }
        }
        Domain::Numeric(_) => {
            for a in zs.clone() {
                out.extend(zs.clone().filter(|&b| b != a).map(|b| Instruction::Cmp(a, b)));
            }
            for a in zs.clone() {
                out.extend(zs.clone().filter(|&b| b != a).map(|b| Instruction::CmpVar(a, b)));
            }
        }
    }
    let targeted = program
        .defined()
        .any(|(_, w)| matches!(w, Instruction::Goto { target, .. } if *target as usize == line));
    if !(structural && targeted) {
        let conds: &[FlagCondition] = if domain.is_strips() {
            &FlagCondition::STRIPS
        } else {
            &FlagCondition::NUMERIC
        };
        for target in 0..program.len() {
            let lands_on_goto = target == line || program.get(target).is_some_and(Instruction::is_goto);
            if structural && lands_on_goto {
                continue;
            }
            out.extend(conds.iter().map(|&c| Instruction::goto(target, c)));
        }
    }
    out.push(Instruction::End);
    out
}

fn for_each_tuple(pointers: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; arity];
    loop {
        f(&t);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < pointers {
                break;
            }
            t[k] = 0;
        }
    }
}

/// True iff the program obeys the first-line and goto-to-goto restrictions.
pub fn respects_restrictions(program: &PlanningProgram) -> bool {
    let first_ok = !matches!(
        program.get(0),
        Some(Instruction::Clear(_) | Instruction::Dec(_) | Instruction::Set(..))
    );
    first_ok
        && program.defined().all(|(i, w)| match w {
            Instruction::Goto { target, .. } => {
                *target as usize != i && !program.get(*target as usize).is_some_and(Instruction::is_goto)
            }
            _ => true,
        })
}

struct Node {
    program: PlanningProgram,
    score: Score,
    status: Status,
    seq: u64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: the best node (lowest score, then complete
    // candidates, then oldest) is greatest
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .cmp(&self.score)
            .then_with(|| (self.status == Status::Solved).cmp(&(other.status == Status::Solved)))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Search<'a, M: SearchMonitor> {
    problem: &'a GpProblem,
    config: &'a SearchConfig,
    stack: EvaluatorStack,
    bound: NoveltyBound,
    guidance: Guidance,
    active: Vec<usize>,
    open: BinaryHeap<Node>,
    stats: SearchStats,
    seq: u64,
    start: Instant,
    monitor: &'a mut M,
}

impl<M: SearchMonitor> Search<'_, M> {
    fn evaluate(&self, program: &PlanningProgram) -> (Score, Status) {
        let runs = self
            .stack
            .execute(program, self.problem, &self.active, &self.guidance, &self.config.run);
        let score = self.stack.evaluate(program, self.problem, &runs, &self.guidance);
        (score, status(&runs))
    }

    fn push(&mut self, program: PlanningProgram, score: Score, status: Status) {
        self.seq += 1;
        self.open.push(Node {
            program,
            score,
            status,
            seq: self.seq,
        });
    }

    fn limit_hit(&self) -> Option<LimitKind> {
        if self.config.node_limit.is_some_and(|n| self.stats.evaluated >= n) {
            return Some(LimitKind::Nodes);
        }
        if self.config.open_limit.is_some_and(|n| self.open.len() >= n) {
            return Some(LimitKind::Memory);
        }
        if self.config.time_limit.is_some_and(|t| self.start.elapsed() >= t) {
            return Some(LimitKind::Time);
        }
        None
    }

    /// A popped program solving every active instance: accept it, or
    /// escalate and return it to the re-evaluated open list.
    fn on_candidate_solution(&mut self, node: Node) -> Option<SearchOutcome> {
        let rest: Vec<usize> = (0..self.problem.instances.len())
            .filter(|t| !self.active.contains(t))
            .collect();
        let outcomes = validate(&node.program, self.problem, Some(&rest), &self.config.run);
        match rest.iter().zip(&outcomes).find(|(_, o)| !o.is_solved()) {
            None => Some(SearchOutcome::Solved(node.program)),
            Some((&t, _)) => {
                self.open.push(node);
                self.escalate(t);
                None
            }
        }
    }

    fn escalate(&mut self, instance: usize) {
        self.active.push(instance);
        self.stats.escalations += 1;
        self.stats.active_history.push(self.active.clone());
        self.guidance.refresh(&self.stack, self.problem, &self.active);
        let old = std::mem::take(&mut self.open);
        for node in old.into_sorted_vec().into_iter().rev() {
            let (score, status) = self.evaluate(&node.program);
            if status == Status::DeadEnd {
                self.stats.pruned_dead_end += 1;
                continue;
            }
            self.push(node.program, score, status);
        }
    }

    fn run(&mut self) -> SearchOutcome {
        let root = PlanningProgram::with_final_end(self.problem.lines);
        let (score, status) = self.evaluate(&root);
        self.stats.evaluated += 1;
        self.monitor.generated(&root);
        if status == Status::DeadEnd {
            self.stats.pruned_dead_end += 1;
            return SearchOutcome::Unsolvable;
        }
        self.push(root, score, status);
        while let Some(node) = self.open.pop() {
            if let Some(kind) = self.limit_hit() {
                return SearchOutcome::ResourceLimit(kind);
            }
            let line = match node.status {
                Status::Open(line) => line,
                Status::Solved => match self.on_candidate_solution(node) {
                    Some(outcome) => return outcome,
                    None => continue,
                },
                Status::DeadEnd => unreachable!("dead ends never enter the open list"),
            };
            self.stats.expanded += 1;
            self.monitor.expanded(&node.program);
            if let Some(kind) = self.expand(&node.program, line) {
                return SearchOutcome::ResourceLimit(kind);
            }
        }
        SearchOutcome::Unsolvable
    }

    fn expand(&mut self, program: &PlanningProgram, line: usize) -> Option<LimitKind> {
        let candidates = candidate_instructions(
            program,
            line,
            &self.problem.domain,
            self.problem.pointers,
            self.config.structural_restrictions,
        );
        for w in candidates {
            if self.config.novelty_pruning && should_prune(program, &w, self.bound) {
                self.stats.pruned_novelty += 1;
                continue;
            }
            if let Some(kind) = self.limit_hit() {
                return Some(kind);
            }
            let child = program.with_line(line, w);
            let (score, status) = self.evaluate(&child);
            self.stats.evaluated += 1;
            self.monitor.generated(&child);
            if status == Status::DeadEnd {
                self.stats.pruned_dead_end += 1;
            } else {
                self.push(child, score, status);
            }
        }
        None
    }
}

/// Runs BFS(v) or PGP(v) as selected by `config.mode`.
pub fn search(problem: &GpProblem, config: &SearchConfig) -> Result<SearchResult> {
    search_with(problem, config, &mut ())
}

pub fn search_with<M: SearchMonitor>(
    problem: &GpProblem,
    config: &SearchConfig,
    monitor: &mut M,
) -> Result<SearchResult> {
    let bound = NoveltyBound::new(config.v)?;
    if config.v > problem.lines {
        return Err(Error::Config(format!(
            "novelty bound v={} exceeds the {} program lines",
            config.v, problem.lines
        )));
    }
    let stack = EvaluatorStack::new(config.evaluators.clone(), &problem.domain)?;
    let active: Vec<usize> = match config.mode {
        SearchMode::Bfs => (0..problem.instances.len()).collect(),
        SearchMode::Pgp => vec![0],
    };
    let guidance = Guidance::compute(&stack, problem, &active);
    let start = Instant::now();
    let mut s = Search {
        problem,
        config,
        stack,
        bound,
        guidance,
        stats: SearchStats {
            active_history: vec![active.clone()],
            ..SearchStats::default()
        },
        active,
        open: BinaryHeap::new(),
        seq: 0,
        start,
        monitor,
    };
    let outcome = s.run();
    s.stats.elapsed = start.elapsed();
    Ok(SearchResult {
        outcome,
        stats: s.stats,
    })
}

pub fn bfs(problem: &GpProblem, v: usize, evaluators: Vec<EvaluatorId>) -> Result<SearchResult> {
    search(problem, &SearchConfig::new(SearchMode::Bfs, v, evaluators))
}

pub fn pgp(problem: &GpProblem, v: usize, evaluators: Vec<EvaluatorId>) -> Result<SearchResult> {
    search(problem, &SearchConfig::new(SearchMode::Pgp, v, evaluators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{benchmark, generate_sizes, DEFAULT_SEED, REFERENCE_PROGRAMS};
    use crate::config::EvaluatorId::{F1, H5};
    use crate::model::Instance;
    use crate::pddl::{parse_domain, parse_instance, parse_program};
    use crate::vm::{all_solved, run};

    const SWITCHES: &str = "
(define (domain switches)
  (:requirements :strips :typing)
  (:types switch)
  (:predicates (on ?s - switch) (broken ?s - switch))
  (:action turn-on
    :parameters (?s - switch)
    :precondition (and)
    :effect (and (on ?s))))";

    fn switches(goals: &[&str], lines: usize) -> GpProblem {
        let d = parse_domain(SWITCHES).unwrap();
        let goal: String = goals.iter().map(|g| format!("({g})")).collect();
        let text = format!(
            "(define (problem p) (:domain switches) (:objects s0 s1 - switch) (:init) (:goal (and {goal})))"
        );
        let inst = parse_instance(&text, &d).unwrap();
        GpProblem::new(Domain::Strips(d), vec![Instance::Strips(inst)], 1, lines).unwrap()
    }

    /// Every complete program with `end` on its last line, over the full
    /// instruction set without restrictions.
    fn brute_force_solvable(problem: &GpProblem) -> bool {
        let n = problem.lines;
        let mut alphabet = candidate_instructions(
            &PlanningProgram::empty(n),
            1,
            &problem.domain,
            problem.pointers,
            false,
        );
        alphabet.extend([Instruction::goto(1, FlagCondition::Zero), Instruction::goto(1, FlagCondition::NonZero)]);
        alphabet.sort_by_key(|w| format!("{w:?}"));
        alphabet.dedup();
        let total = alphabet.len().pow(n as u32 - 1);
        (0..total).any(|mut code| {
            let mut p = PlanningProgram::with_final_end(n);
            for line in 0..n - 1 {
                p.set(line, alphabet[code % alphabet.len()]);
                code /= alphabet.len();
            }
            let opts = RunOptions::default();
            problem
                .instances
                .iter()
                .all(|inst| run(&p, &problem.domain, inst, problem.pointers, &opts).is_solved())
        })
    }

    fn bfs_full(problem: &GpProblem) -> SearchResult {
        bfs(problem, problem.lines, vec![H5, F1]).unwrap()
    }

    #[test]
    fn first_line_excludes_clear_dec_set() {
        let p = switches(&["on s0"], 4);
        let at0 = candidate_instructions(&PlanningProgram::with_final_end(4), 0, &p.domain, 2, true);
        assert!(at0.iter().all(|w| !matches!(w, Instruction::Clear(_) | Instruction::Dec(_) | Instruction::Set(..))));
        assert!(at0.contains(&Instruction::Inc(1)));
        let at1 = candidate_instructions(&PlanningProgram::with_final_end(4), 1, &p.domain, 2, true);
        assert!(at1.contains(&Instruction::Set(0, 1)) && at1.contains(&Instruction::Clear(1)));
    }

    #[test]
    fn gotos_never_land_on_gotos() {
        let p = switches(&["on s0"], 5);
        let mut prog = PlanningProgram::with_final_end(5);
        prog.set(0, Instruction::Inc(0));
        prog.set(1, Instruction::goto(0, FlagCondition::Zero));
        let c = candidate_instructions(&prog, 2, &p.domain, 1, true);
        let targets: Vec<usize> = c
            .iter()
            .filter_map(|w| match w {
                Instruction::Goto { target, .. } => Some(*target as usize),
                _ => None,
            })
            .collect();
        assert!(!targets.contains(&1) && !targets.contains(&2));
        assert!(targets.contains(&0) && targets.contains(&4));
        // line 0 is a goto target, so no goto may be written there
        let mut q = PlanningProgram::with_final_end(5);
        q.set(1, Instruction::goto(0, FlagCondition::Zero));
        let c0 = candidate_instructions(&q, 0, &p.domain, 1, true);
        assert!(c0.iter().all(|w| !w.is_goto()));
        assert!(candidate_instructions(&q, 0, &p.domain, 1, false).iter().any(Instruction::is_goto));
    }

    #[test]
    fn candidates_follow_the_documented_order() {
        let p = switches(&["on s0"], 3);
        let c = candidate_instructions(&PlanningProgram::with_final_end(3), 1, &p.domain, 2, true);
        let kinds: Vec<u8> = c
            .iter()
            .map(|w| match w {
                Instruction::Action { .. } => 0,
                Instruction::Inc(_) => 1,
                Instruction::Dec(_) => 2,
                Instruction::Set(..) => 3,
                Instruction::Clear(_) => 4,
                Instruction::Test { .. } => 5,
                Instruction::Cmp(..) | Instruction::CmpVar(..) => 6,
                Instruction::Goto { .. } => 7,
                Instruction::End => 8,
            })
            .collect();
        assert!(kinds.windows(2).all(|w| w[0] <= w[1]), "{kinds:?}");
        assert_eq!(c[0], Instruction::action(0, &[0]));
        assert_eq!(c.last(), Some(&Instruction::End));
    }

    #[test]
    fn goal_true_initially_gives_end_after_one_expansion() {
        let p = switches(&[], 3);
        let r = bfs_full(&p);
        let sol = r.solution().expect("solved");
        assert_eq!(sol.get(0), Some(&Instruction::End));
        assert_eq!(r.stats.expanded, 1);
    }

    #[test]
    fn search_agrees_with_brute_force_on_tiny_problems() {
        for (goals, lines) in [
            (&["on s0"][..], 2),
            (&["on s0", "on s1"], 2),
            (&["on s0", "on s1"], 3),
            (&["on s0", "on s1"], 4),
            (&["broken s0"], 3),
        ] {
            let p = switches(goals, lines);
            let r = bfs_full(&p);
            assert_eq!(r.solution().is_some(), brute_force_solvable(&p), "{goals:?} n={lines}");
            match &r.outcome {
                SearchOutcome::Solved(s) => assert!(all_solved(&validate(s, &p, None, &RunOptions::default()))),
                other => assert_eq!(other, &SearchOutcome::Unsolvable),
            }
        }
    }

    #[test]
    fn single_instance_pgp_matches_bfs() {
        let g = generate_sizes(benchmark("visitall").unwrap(), &[3], &[], DEFAULT_SEED).unwrap();
        let p = g.problem().unwrap();
        let b = bfs(&p, 1, vec![H5, F1]).unwrap();
        let q = pgp(&p, 1, vec![H5, F1]).unwrap();
        assert!(b.solution().is_some());
        assert_eq!(b.outcome, q.outcome);
        assert_eq!((b.stats.expanded, b.stats.evaluated), (q.stats.expanded, q.stats.evaluated));
        assert_eq!(q.stats.escalations, 0);
    }

    #[test]
    fn generated_programs_respect_restrictions() {
        let g = generate_sizes(benchmark("visitall").unwrap(), &[2, 3], &[], DEFAULT_SEED).unwrap();
        let mut rec = RecordingMonitor::default();
        let cfg = SearchConfig::new(SearchMode::Bfs, 1, vec![H5, F1]);
        let r = search_with(&g.problem().unwrap(), &cfg, &mut rec).unwrap();
        assert!(r.solution().is_some());
        assert_eq!(rec.generated.len() as u64, r.stats.evaluated);
        assert_eq!(rec.expanded.len() as u64, r.stats.expanded);
        assert!(rec.generated.iter().all(respects_restrictions));
    }

    #[test]
    fn node_limit_stops_at_the_limit() {
        let g = generate_sizes(benchmark("reverse").unwrap(), &[2, 3], &[], DEFAULT_SEED).unwrap();
        let mut cfg = SearchConfig::new(SearchMode::Bfs, 1, vec![H5, F1]);
        cfg.node_limit = Some(500);
        let r = search(&g.problem().unwrap(), &cfg).unwrap();
        assert_eq!(r.outcome, SearchOutcome::ResourceLimit(LimitKind::Nodes));
        assert_eq!(r.stats.evaluated, 500);
    }

    #[test]
    fn bound_above_program_length_is_rejected() {
        let p = switches(&["on s0"], 3);
        assert!(bfs(&p, 4, vec![H5, F1]).is_err());
        assert!(bfs(&p, 0, vec![H5, F1]).is_err());
    }

    #[test]
    fn reference_programs_fit_the_search_budget() {
        let opts = SearchConfig::new(SearchMode::Bfs, 1, vec![H5]).run;
        for (name, text) in REFERENCE_PROGRAMS {
            let g = crate::bench::generate(benchmark(name).unwrap(), DEFAULT_SEED).unwrap();
            let p = g.problem().unwrap();
            let prog = parse_program(text, &p.domain, p.pointers, p.lines).unwrap();
            assert!(all_solved(&validate(&prog, &p, None, &opts)), "{name}");
        }
    }

    #[test]
    fn labels_use_short_evaluator_names() {
        let c = SearchConfig::new(SearchMode::Pgp, 1, vec![EvaluatorId::Flm, F1, EvaluatorId::Fha]);
        assert_eq!(c.label(), "P(v)_{lm,1,ha}");
        let mut b = SearchConfig::new(SearchMode::Bfs, 1, vec![H5, F1]);
        assert_eq!(b.label(), "B(v)_{5,1}");
        b.novelty_pruning = false;
        assert_eq!(b.label(), "B_{5,1}");
    }
}
