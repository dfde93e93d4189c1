//! Delete-relaxation fact landmarks with pointer landmarks, and their replay
//! along a program execution.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::model::{ground_all, AtomSet, GroundAction, StripsDomain, StripsInstance, WorldState};
use crate::program::Instruction;
use crate::vm::{ExecutionState, Observer, StepEvent};

/// Landmarks of one instance.
///
/// Facts are ground atom indices. Each fact lists the fact landmarks ordered
/// before it and the objects that some pointer must reference first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LandmarkGraph {
    pub facts: Vec<usize>,
    pub fact_preds: Vec<Vec<usize>>,
    pub pointer_preds: Vec<Vec<usize>>,
    /// Objects with a pointer landmark, ascending.
    pub objects: Vec<usize>,
    /// Facts true in the initial state, accepted before execution starts.
    pub initially_true: Vec<bool>,
}

impl LandmarkGraph {
    pub fn len(&self) -> usize {
        self.facts.len() + self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn describe(&self, domain: &StripsDomain, inst: &StripsInstance) -> String {
        let mut out = String::new();
        for (i, &f) in self.facts.iter().enumerate() {
            let preds: Vec<String> = self.fact_preds[i]
                .iter()
                .map(|&p| inst.format_atom_index(domain, self.facts[p]))
                .chain(self.pointer_preds[i].iter().map(|&o| format!("ptr->{}", inst.objects[o].name)))
                .collect();
            let _ = writeln!(
                out,
                "{}{} <- [{}]",
                inst.format_atom_index(domain, f),
                if self.initially_true[i] { " (init)" } else { "" },
                preds.join(", ")
            );
        }
        for &o in &self.objects {
            let _ = writeln!(out, "ptr->{}", inst.objects[o].name);
        }
        out
    }
}

/// Facts and actions reachable from `init` when deletes are ignored,
/// skipping actions for which `skip` holds.
pub(crate) fn relaxed_reachable(
    actions: &[GroundAction],
    init: &AtomSet,
    skip: impl Fn(&GroundAction) -> bool,
) -> (AtomSet, Vec<bool>) {
    let mut facts = init.clone();
    let mut used = vec![false; actions.len()];
    loop {
        let mut changed = false;
        for (i, a) in actions.iter().enumerate() {
            if used[i] || skip(a) || !a.pre.iter().all(|&p| facts.contains(p)) {
                continue;
            }
            used[i] = true;
            for &q in &a.add {
                facts.insert(q);
            }
            changed = true;
        }
        if !changed {
            return (facts, used);
        }
    }
}

/// Exact delete-relaxation landmarks of the goal.
///
/// Each fact p carries LM(p), the facts every relaxed plan reaching p must
/// achieve; LM(p) = {p} on the initial state and otherwise {p} joined with the
/// intersection over achievers a of add(a) ∪ ⋃ LM(pre(a)), iterated from the
/// top element. A fact q in LM(p) is ordered before p unless p is also in
/// LM(q), in which case both become true together.
pub fn extract_landmark_graph(domain: &StripsDomain, inst: &StripsInstance) -> LandmarkGraph {
    let actions = ground_all(domain, inst);
    let init = inst.initial_atoms();
    let n = inst.num_atoms();
    let (reach, used) = relaxed_reachable(&actions, init, |_| false);
    let goal = inst.goal_indices();
    if goal.iter().any(|&g| !reach.contains(g)) {
        return build(inst, goal.iter().copied().collect(), |_| Vec::new());
    }
    let mut lm: Vec<Option<AtomSet>> = vec![None; n];
    for p in init.iter() {
        lm[p] = Some(AtomSet::from_indices(n, [p]));
    }
    let live: Vec<&GroundAction> = actions.iter().zip(&used).filter(|(_, u)| **u).map(|(a, _)| a).collect();
    loop {
        let mut changed = false;
        for a in &live {
            let mut union = AtomSet::new(n);
            let mut top = false;
            for &q in &a.pre {
                match &lm[q] {
                    Some(s) => union.union_with(s),
                    None => top = true,
                }
            }
            if top {
                continue;
            }
            for &q in &a.add {
                union.insert(q);
            }
            for &p in &a.add {
                if init.contains(p) {
                    continue;
                }
                let mut next = match &lm[p] {
                    None => union.clone(),
                    Some(cur) => {
                        let mut c = cur.clone();
                        c.intersect_with(&union);
                        c
                    }
                };
                next.insert(p);
                if lm[p].as_ref() != Some(&next) {
                    lm[p] = Some(next);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut facts = BTreeSet::new();
    for &g in goal {
        facts.extend(lm[g].as_ref().expect("goal reachable").iter());
    }
    build(inst, facts, |p| match &lm[p] {
        Some(s) if !init.contains(p) => s
            .iter()
            .filter(|&q| q != p && !lm[q].as_ref().is_some_and(|lq| lq.contains(p)))
            .collect(),
        _ => Vec::new(),
    })
}

fn build(
    inst: &StripsInstance,
    facts: BTreeSet<usize>,
    before: impl Fn(usize) -> Vec<usize>,
) -> LandmarkGraph {
    let facts: Vec<usize> = facts.into_iter().collect();
    let slot = |a: usize| facts.binary_search(&a).ok();
    let fact_preds = facts
        .iter()
        .map(|&p| before(p).into_iter().filter_map(slot).collect())
        .collect();
    let pointer_preds: Vec<Vec<usize>> = facts
        .iter()
        .map(|&p| {
            let objs: BTreeSet<usize> = inst.decode_atom(p).args.into_iter().collect();
            objs.into_iter().collect()
        })
        .collect();
    let objects: BTreeSet<usize> = pointer_preds.iter().flatten().copied().collect();
    let init = inst.initial_atoms();
    LandmarkGraph {
        initially_true: facts.iter().map(|&p| init.contains(p)).collect(),
        facts,
        fact_preds,
        pointer_preds,
        objects: objects.into_iter().collect(),
    }
}

/// Replays landmark acceptance along a run. Accepted landmarks stay accepted.
#[derive(Debug, Clone)]
pub struct LandmarkTracker<'a> {
    graph: &'a LandmarkGraph,
    facts: Vec<bool>,
    objects: Vec<bool>,
}

impl<'a> LandmarkTracker<'a> {
    pub fn new(graph: &'a LandmarkGraph) -> Self {
        LandmarkTracker {
            graph,
            facts: graph.initially_true.clone(),
            objects: vec![false; graph.objects.len()],
        }
    }

    pub fn unaccepted(&self) -> usize {
        self.facts.iter().chain(&self.objects).filter(|a| !**a).count()
    }

    fn update(&mut self, state: &ExecutionState) {
        for &z in &state.pointers {
            if let Ok(k) = self.graph.objects.binary_search(&z) {
                self.objects[k] = true;
            }
        }
        let WorldState::Strips(atoms) = &state.world else {
            return;
        };
        loop {
            let mut changed = false;
            for i in 0..self.facts.len() {
                if self.facts[i] || !atoms.contains(self.graph.facts[i]) {
                    continue;
                }
                let ready = self.graph.fact_preds[i].iter().all(|&p| self.facts[p])
                    && self.graph.pointer_preds[i].iter().all(|o| {
                        let k = self.graph.objects.binary_search(o).expect("pointer landmark");
                        self.objects[k]
                    });
                if ready {
                    self.facts[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

impl Observer for LandmarkTracker<'_> {
    fn start(&mut self, state: &ExecutionState) {
        self.update(state);
    }

    fn step(&mut self, event: &StepEvent<'_>) {
        // only actions and pointer writes can change what is accepted
        if matches!(
            event.instruction,
            Instruction::Action { .. }
                | Instruction::Inc(_)
                | Instruction::Dec(_)
                | Instruction::Set(..)
                | Instruction::Clear(_)
        ) {
            self.update(event.state);
        }
    }
}
