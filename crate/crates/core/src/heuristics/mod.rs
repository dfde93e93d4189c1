//! Evaluation functions over planning programs and their lexicographic
//! composition. Every function is "lower is better".

pub mod helpful;
pub mod landmarks;

use std::cmp::Ordering;

pub use helpful::{helpful_layers, HelpfulActionSet, HelpfulLayer, LiftedAtomSet};
pub use landmarks::{extract_landmark_graph, LandmarkGraph, LandmarkTracker};

use crate::config::EvaluatorId;
use crate::error::{Error, Result};
use crate::model::{Domain, GpProblem, Instance, WorldState};
use crate::program::{Instruction, PlanningProgram};
use crate::vm::{run_observed, Coverage, ExecutionState, Observer, RunOptions, RunOutcome, StepEvent};

/// Number of goto instructions.
pub fn f1(program: &PlanningProgram) -> usize {
    program.defined().filter(|(_, w)| w.is_goto()).count()
}

/// Defined instructions other than goto, test and cmp (end included).
pub fn f_ln(program: &PlanningProgram) -> usize {
    program
        .defined()
        .filter(|(_, w)| {
            !matches!(
                w,
                Instruction::Goto { .. } | Instruction::Test { .. } | Instruction::Cmp(..) | Instruction::CmpVar(..)
            )
        })
        .count()
}

/// Planning actions whose schema is not helpful.
pub fn f_ha(program: &PlanningProgram, helpful: &HelpfulActionSet) -> usize {
    program
        .defined()
        .filter(|(_, w)| matches!(w, Instruction::Action { schema, .. } if !helpful.contains(*schema as usize)))
        .count()
}

/// Euclidean distance between the goal-constrained variables of `world` and
/// their targets; STRIPS goal atoms count 1 when false.
pub fn goal_distance(world: &WorldState, instance: &Instance) -> f64 {
    match (world, instance) {
        (WorldState::Strips(s), Instance::Strips(i)) => {
            (i.goal_indices().iter().filter(|&&g| !s.contains(g)).count() as f64).sqrt()
        }
        (WorldState::Numeric(r), Instance::Numeric(i)) => i
            .goal
            .iter()
            .map(|&(k, v)| {
                let d = r[k] as f64 - v as f64;
                d * d
            })
            .sum::<f64>()
            .sqrt(),
        _ => f64::INFINITY,
    }
}

/// Size of the inspection universe of an instance: well-typed ground atoms
/// for STRIPS, unordered register pairs for numeric instances.
pub fn inspection_universe(domain: &Domain, instance: &Instance) -> usize {
    match (domain, instance) {
        (Domain::Strips(_), Instance::Strips(i)) => {
            (0..i.num_predicates()).map(|p| i.well_typed_atoms(p).len()).sum()
        }
        (_, Instance::Numeric(i)) => {
            let m = i.registers.len();
            m * (m - 1) / 2
        }
        _ => 0,
    }
}

/// Run of one instance with the bookkeeping the evaluators need.
#[derive(Debug, Clone)]
pub struct InstanceRun {
    pub instance: usize,
    pub outcome: RunOutcome,
    pub coverage: Option<Coverage>,
    pub unaccepted_landmarks: Option<usize>,
}

impl InstanceRun {
    pub fn last_state(&self) -> &ExecutionState {
        self.outcome.state()
    }
}

/// Sum of per-instance goal distances at the last reached states.
pub fn h5(runs: &[InstanceRun], problem: &GpProblem) -> f64 {
    runs.iter()
        .map(|r| goal_distance(&r.last_state().world, &problem.instances[r.instance]))
        .sum()
}

/// Uninspected atoms or register pairs, summed over instances.
pub fn f_cn(runs: &[InstanceRun], problem: &GpProblem) -> usize {
    runs.iter()
        .map(|r| {
            let total = inspection_universe(&problem.domain, &problem.instances[r.instance]);
            let seen = r.coverage.as_ref().map_or(0, |c| c.tested.len() + c.compared.len());
            total.saturating_sub(seen)
        })
        .sum()
}

/// Unaccepted landmarks, summed over instances.
pub fn f_lm(runs: &[InstanceRun]) -> usize {
    runs.iter().map(|r| r.unaccepted_landmarks.unwrap_or(0)).sum()
}

/// Static per-problem data: landmark graphs (per instance) and helpful actions.
#[derive(Debug, Clone, Default)]
pub struct Guidance {
    pub landmarks: Vec<Option<LandmarkGraph>>,
    pub helpful: HelpfulActionSet,
}

impl Guidance {
    /// Computes what `stack` needs for the given instances; H is the union
    /// over exactly these instances.
    pub fn compute(stack: &EvaluatorStack, problem: &GpProblem, instances: &[usize]) -> Guidance {
        let mut g = Guidance {
            landmarks: vec![None; problem.instances.len()],
            helpful: HelpfulActionSet::default(),
        };
        g.refresh(stack, problem, instances);
        g
    }

    /// Extends landmark graphs to new instances and recomputes H.
    pub fn refresh(&mut self, stack: &EvaluatorStack, problem: &GpProblem, instances: &[usize]) {
        let Domain::Strips(domain) = &problem.domain else {
            return;
        };
        if stack.uses(EvaluatorId::Flm) {
            for &t in instances {
                if self.landmarks[t].is_none() {
                    let inst = problem.instances[t].as_strips().expect("STRIPS instance");
                    self.landmarks[t] = Some(extract_landmark_graph(domain, inst));
                }
            }
        }
        if stack.uses(EvaluatorId::Fha) {
            let insts = instances.iter().filter_map(|&t| problem.instances[t].as_strips());
            self.helpful = HelpfulActionSet::for_instances(domain, insts);
        }
    }
}

/// Ordered list of evaluators; values compare lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatorStack {
    ids: Vec<EvaluatorId>,
}

impl EvaluatorStack {
    pub fn new(ids: Vec<EvaluatorId>, domain: &Domain) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::Config("empty evaluator stack".into()));
        }
        if !domain.is_strips() {
            if let Some(e) = ids.iter().find(|e| e.strips_only()) {
                return Err(Error::Config(format!(
                    "{e} is only defined for STRIPS domains, {} is numeric",
                    domain.name()
                )));
            }
        }
        Ok(EvaluatorStack { ids })
    }

    pub fn ids(&self) -> &[EvaluatorId] {
        &self.ids
    }

    pub fn uses(&self, id: EvaluatorId) -> bool {
        self.ids.contains(&id)
    }

    /// Label like `{lm,1,ha}`.
    pub fn label(&self) -> String {
        let parts: Vec<&str> = self.ids.iter().map(|e| e.short()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Runs the program on `instances`, recording what the stack needs.
    pub fn execute(
        &self,
        program: &PlanningProgram,
        problem: &GpProblem,
        instances: &[usize],
        guidance: &Guidance,
        options: &RunOptions,
    ) -> Vec<InstanceRun> {
        let want_cov = self.uses(EvaluatorId::Fcn);
        instances
            .iter()
            .map(|&t| {
                let mut obs = EvalObserver {
                    coverage: want_cov.then(Coverage::default),
                    tracker: guidance
                        .landmarks
                        .get(t)
                        .and_then(Option::as_ref)
                        .filter(|_| self.uses(EvaluatorId::Flm))
                        .map(LandmarkTracker::new),
                };
                let outcome = run_observed(
                    program,
                    &problem.domain,
                    &problem.instances[t],
                    problem.pointers,
                    options,
                    &mut obs,
                );
                InstanceRun {
                    instance: t,
                    outcome,
                    unaccepted_landmarks: obs.tracker.as_ref().map(LandmarkTracker::unaccepted),
                    coverage: obs.coverage,
                }
            })
            .collect()
    }

    pub fn evaluate(
        &self,
        program: &PlanningProgram,
        problem: &GpProblem,
        runs: &[InstanceRun],
        guidance: &Guidance,
    ) -> Score {
        Score(
            self.ids
                .iter()
                .map(|id| match id {
                    EvaluatorId::F1 => f1(program) as f64,
                    EvaluatorId::H5 => h5(runs, problem),
                    EvaluatorId::Flm => f_lm(runs) as f64,
                    EvaluatorId::Fha => f_ha(program, &guidance.helpful) as f64,
                    EvaluatorId::Fln => f_ln(program) as f64,
                    EvaluatorId::Fcn => f_cn(runs, problem) as f64,
                })
                .collect(),
        )
    }
}

struct EvalObserver<'a> {
    coverage: Option<Coverage>,
    tracker: Option<LandmarkTracker<'a>>,
}

impl Observer for EvalObserver<'_> {
    fn start(&mut self, state: &ExecutionState) {
        if let Some(t) = &mut self.tracker {
            t.start(state);
        }
    }

    fn step(&mut self, event: &StepEvent<'_>) {
        if let Some(c) = &mut self.coverage {
            c.step(event);
        }
        if let Some(t) = &mut self.tracker {
            t.step(event);
        }
    }
}

/// Evaluator values in stack order; smaller is better.
#[derive(Debug, Clone, PartialEq)]
pub struct Score(pub Vec<f64>);

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl std::fmt::Display for Score {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|v| if v.fract() == 0.0 { format!("{v}") } else { format!("{v:.3}") })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::bench::{benchmark, generate, generate_sizes, FLATTEN_PROGRAM, DEFAULT_SEED};
    use crate::bench::generators::REFERENCE_PROGRAMS;
    use crate::model::{numeric_domain, NumericInstance};
    use crate::pddl::parse_program;
    use crate::program::FlagCondition;

    fn reference(name: &str) -> &'static str {
        REFERENCE_PROGRAMS.iter().find(|(n, _)| *n == name).unwrap().1
    }

    fn problem(name: &str) -> GpProblem {
        generate(benchmark(name).unwrap(), DEFAULT_SEED).unwrap().problem().unwrap()
    }

    fn all(p: &GpProblem) -> Vec<usize> {
        (0..p.instances.len()).collect()
    }

    #[test]
    fn static_counts() {
        assert_eq!(f1(&PlanningProgram::empty(5)), 0);
        let one = PlanningProgram::from_lines(vec![Some(Instruction::Inc(0)), Some(Instruction::goto(0, FlagCondition::Zero)), None]);
        assert_eq!(f1(&one), 1);
        assert_eq!(f_ln(&one), 1);
        let gotos = PlanningProgram::from_lines(vec![Some(Instruction::goto(1, FlagCondition::Zero)); 3]);
        assert_eq!(f_ln(&gotos), 0);

        let p = problem("ontable");
        let flatten = parse_program(FLATTEN_PROGRAM, &p.domain, 3, 11).unwrap();
        let goto_tokens = FLATTEN_PROGRAM.matches("goto(").count();
        let other_lines = FLATTEN_PROGRAM.lines().count() - goto_tokens;
        assert_eq!(f1(&flatten), goto_tokens);
        assert_eq!(f_ln(&flatten), other_lines);
    }

    #[test]
    fn helpful_action_count() {
        let p = problem("ontable");
        let stack = EvaluatorStack::new(vec![EvaluatorId::Fha], &p.domain).unwrap();
        let g = Guidance::compute(&stack, &p, &all(&p));
        let prog = parse_program("0. stack(z1,z2)\n1. putdown(z1)\n2. inc(z1)\n3. end", &p.domain, 3, 11).unwrap();
        assert_eq!(f_ha(&prog, &g.helpful), 1);
        let ram = parse_program("0. inc(z1)\n1. clear(z2)", &p.domain, 3, 11).unwrap();
        assert_eq!(f_ha(&ram, &g.helpful), 0);
        let flatten = parse_program(FLATTEN_PROGRAM, &p.domain, 3, 11).unwrap();
        assert_eq!(f_ha(&flatten, &g.helpful), 0);
    }

    #[test]
    fn goal_distances() {
        let inst = Instance::Numeric(NumericInstance::new("d", vec![3, 0], vec![(0, 0)]).unwrap());
        assert_eq!(goal_distance(&inst.initial_state(), &inst), 3.0);

        // partial triangular-sum program stops at line 2 with x = [k, k]
        let p = problem("tsum");
        let stack = EvaluatorStack::new(vec![EvaluatorId::H5], &p.domain).unwrap();
        let prog = parse_program("0. inc(z2)\n1. add(z2,z1)", &p.domain, 2, 6).unwrap();
        let runs = stack.execute(&prog, &p, &all(&p), &Guidance::default(), &RunOptions::default());
        let expected: f64 = p
            .instances
            .iter()
            .map(|i| {
                let Instance::Numeric(n) = i else { panic!() };
                let k = n.registers[0] as f64;
                ((k - k * (k + 1.0) / 2.0).powi(2)).sqrt()
            })
            .sum();
        assert!((h5(&runs, &p) - expected).abs() < 1e-9);
        for name in ["tsum", "visitall", "gripper"] {
            let p = problem(name);
            let stack = EvaluatorStack::new(vec![EvaluatorId::H5], &p.domain).unwrap();
            let prog = parse_program(reference(name), &p.domain, p.pointers, p.lines).unwrap();
            let runs = stack.execute(&prog, &p, &all(&p), &Guidance::default(), &RunOptions::default());
            assert_eq!(h5(&runs, &p), 0.0, "{name}");
        }
    }

    /// Records compared register pairs from the pointers seen at each compare.
    #[derive(Default)]
    struct PairOracle(HashSet<(usize, usize)>);

    impl Observer for PairOracle {
        fn step(&mut self, e: &StepEvent<'_>) {
            if let Instruction::Cmp(a, b) | Instruction::CmpVar(a, b) = *e.instruction {
                let (x, y) = (e.state.pointers[a as usize], e.state.pointers[b as usize]);
                if x != y {
                    self.0.insert((x.min(y), x.max(y)));
                }
            }
        }
    }

    #[test]
    fn coverage_counts() {
        let p = problem("visitall");
        let stack = EvaluatorStack::new(vec![EvaluatorId::Fcn], &p.domain).unwrap();
        let prog = parse_program(reference("visitall"), &p.domain, 2, 7).unwrap();
        let runs = stack.execute(&prog, &p, &all(&p), &Guidance::default(), &RunOptions::default());
        let total: usize = p.instances.iter().map(|i| inspection_universe(&p.domain, i)).sum();
        assert_eq!(f_cn(&runs, &p), total);
        let Instance::Strips(first) = &p.instances[0] else { panic!() };
        let k = first.num_objects();
        // at, visited over k cells plus adjacent over k² pairs
        assert_eq!(inspection_universe(&p.domain, &p.instances[0]), 2 * k + k * k);

        let sel = problem("select");
        let stack = EvaluatorStack::new(vec![EvaluatorId::Fcn], &sel.domain).unwrap();
        let partial = parse_program("0. cmp_x(z2,z1)\n1. goto(3, >=0)\n2. copy(z1,z2)\n3. inc(z2)", &sel.domain, 2, 6).unwrap();
        let runs = stack.execute(&partial, &sel, &all(&sel), &Guidance::default(), &RunOptions::default());
        let mut expected = 0;
        for (t, inst) in sel.instances.iter().enumerate() {
            let mut oracle = PairOracle::default();
            crate::vm::run_observed(&partial, &sel.domain, inst, 2, &RunOptions::default(), &mut oracle);
            let m = inst.pointer_bound();
            expected += m * (m - 1) / 2 - oracle.0.len();
            assert_eq!(runs[t].coverage.as_ref().unwrap().compared, oracle.0);
        }
        assert_eq!(f_cn(&runs, &sel), expected);

        // comparing every pair leaves nothing uncovered
        let inst = Instance::Numeric(NumericInstance::new("c", vec![1, 2, 3], vec![]).unwrap());
        let dom = Domain::Numeric(numeric_domain("select").unwrap());
        let q = GpProblem::new(dom.clone(), vec![inst], 2, 8).unwrap();
        let pairs = parse_program("0. inc(z2)\n1. cmp(z1,z2)\n2. inc(z2)\n3. cmp(z1,z2)\n4. inc(z1)\n5. cmp(z1,z2)\n6. end", &dom, 2, 8).unwrap();
        let stack = EvaluatorStack::new(vec![EvaluatorId::Fcn], &dom).unwrap();
        let runs = stack.execute(&pairs, &q, &[0], &Guidance::default(), &RunOptions::default());
        assert_eq!(f_cn(&runs, &q), 0);
    }

    /// Independent acceptance replay over recorded states.
    #[derive(Default)]
    struct StateLog(Vec<ExecutionState>);

    impl Observer for StateLog {
        fn start(&mut self, s: &ExecutionState) {
            self.0.push(s.clone());
        }
        fn step(&mut self, e: &StepEvent<'_>) {
            self.0.push(e.state.clone());
        }
    }

    fn replay(g: &LandmarkGraph, states: &[ExecutionState]) -> usize {
        let mut facts = g.initially_true.clone();
        let mut ptr: HashSet<usize> = HashSet::new();
        for s in states {
            ptr.extend(s.pointers.iter().copied());
            let atoms = s.world.as_atoms().unwrap();
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..facts.len() {
                    if !facts[i]
                        && atoms.contains(g.facts[i])
                        && g.fact_preds[i].iter().all(|&p| facts[p])
                        && g.pointer_preds[i].iter().all(|o| ptr.contains(o))
                    {
                        facts[i] = true;
                        changed = true;
                    }
                }
            }
        }
        facts.iter().filter(|f| !**f).count() + g.objects.iter().filter(|o| !ptr.contains(o)).count()
    }

    #[test]
    fn landmark_counts() {
        for name in ["visitall", "gripper", "lock"] {
            let p = problem(name);
            let stack = EvaluatorStack::new(vec![EvaluatorId::Flm], &p.domain).unwrap();
            let g = Guidance::compute(&stack, &p, &all(&p));
            let empty = PlanningProgram::with_final_end(p.lines);
            let runs = stack.execute(&empty, &p, &all(&p), &g, &RunOptions::default());
            let expected: usize = g
                .landmarks
                .iter()
                .map(|lg| {
                    let lg = lg.as_ref().unwrap();
                    let facts = lg.initially_true.iter().filter(|t| !**t).count();
                    facts + lg.objects.iter().filter(|&&o| o != 0).count()
                })
                .sum();
            assert_eq!(f_lm(&runs), expected, "{name}");

            let solved = parse_program(reference(name), &p.domain, p.pointers, p.lines).unwrap();
            let runs = stack.execute(&solved, &p, &all(&p), &g, &RunOptions::default());
            assert_eq!(f_lm(&runs), 0, "{name}");
        }
        // a partial visitall program, checked against a replay of its states
        let gen = generate_sizes(benchmark("visitall").unwrap(), &[3, 5], &[], DEFAULT_SEED).unwrap();
        let p = gen.problem().unwrap();
        let stack = EvaluatorStack::new(vec![EvaluatorId::Flm], &p.domain).unwrap();
        let g = Guidance::compute(&stack, &p, &all(&p));
        let partial = parse_program("0. inc(z2)\n1. move(z1,z2)\n2. inc(z2)\n3. move(z2,z1)\n4. goto(1, y_z=false)", &p.domain, 2, 7).unwrap();
        let runs = stack.execute(&partial, &p, &all(&p), &g, &RunOptions::default());
        for (t, inst) in p.instances.iter().enumerate() {
            let mut log = StateLog::default();
            crate::vm::run_observed(&partial, &p.domain, inst, 2, &RunOptions::default(), &mut log);
            assert_eq!(runs[t].unaccepted_landmarks, Some(replay(g.landmarks[t].as_ref().unwrap(), &log.0)));
        }
    }

    #[test]
    fn lexicographic_scores() {
        assert!(Score(vec![3.0, 1.0]) < Score(vec![3.0, 2.0]));
        assert!(Score(vec![2.0, 9.0]) < Score(vec![3.0, 0.0]));
        let d = Domain::Numeric(numeric_domain("fibo").unwrap());
        assert!(EvaluatorStack::new(vec![EvaluatorId::Flm, EvaluatorId::F1], &d).is_err());
        let s = EvaluatorStack::new(vec![EvaluatorId::H5, EvaluatorId::F1], &d).unwrap();
        assert_eq!(s.label(), "{5,1}");
        let p = problem("ontable");
        let s = EvaluatorStack::new(vec![EvaluatorId::Flm, EvaluatorId::F1, EvaluatorId::Fha], &p.domain).unwrap();
        assert_eq!(s.label(), "{lm,1,ha}");
    }
}
