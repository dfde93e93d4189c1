//! Lifted helpful actions: regression over predicate names from the goals.

use std::collections::BTreeSet;

use crate::model::{StripsDomain, StripsInstance};

/// Predicate ids with arguments stripped.
pub type LiftedAtomSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HelpfulLayer {
    pub unachieved: LiftedAtomSet,
    pub supporters: BTreeSet<usize>,
}

/// Schema ids of helpful actions, with the layers that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HelpfulActionSet {
    pub schemas: BTreeSet<usize>,
    /// Layers per instance, in instance order.
    pub layers: Vec<Vec<HelpfulLayer>>,
}

impl HelpfulActionSet {
    pub fn contains(&self, schema: usize) -> bool {
        self.schemas.contains(&schema)
    }

    /// Union of the per-instance sets.
    pub fn for_instances<'a>(
        domain: &StripsDomain,
        instances: impl IntoIterator<Item = &'a StripsInstance>,
    ) -> HelpfulActionSet {
        let mut out = HelpfulActionSet::default();
        for inst in instances {
            let layers = helpful_layers(domain, inst);
            for l in &layers {
                out.schemas.extend(&l.supporters);
            }
            out.layers.push(layers);
        }
        out
    }

    /// Stable text listing: the set, then layers per instance.
    pub fn describe(&self, domain: &StripsDomain) -> String {
        let names = |s: &BTreeSet<usize>, schema: bool| -> String {
            let mut v: Vec<&str> = s
                .iter()
                .map(|&i| {
                    if schema {
                        domain.schemas[i].name.as_str()
                    } else {
                        domain.predicates[i].name.as_str()
                    }
                })
                .collect();
            v.sort_unstable();
            format!("{{{}}}", v.join(", "))
        };
        let mut out = format!("H = {}\n", names(&self.schemas, true));
        for (t, layers) in self.layers.iter().enumerate() {
            for (i, l) in layers.iter().enumerate() {
                out.push_str(&format!(
                    "instance {t} layer {i}: U = {} S = {}\n",
                    names(&l.unachieved, false),
                    names(&l.supporters, true)
                ));
            }
        }
        out
    }
}

fn lift<'a>(atoms: impl IntoIterator<Item = &'a usize>) -> LiftedAtomSet {
    atoms.into_iter().copied().collect()
}

/// Layers (U_i, S_i) for one instance, up to the first repeated U.
///
/// A schema supports layer i when its lifted add effects meet U_i and no
/// earlier U_j. U_{i+1} regresses U_i through every supporter.
pub fn helpful_layers(domain: &StripsDomain, inst: &StripsInstance) -> Vec<HelpfulLayer> {
    let init = inst.initial_atoms();
    let lifted_init: LiftedAtomSet = lift(&inst.init.iter().map(|a| a.predicate).collect::<Vec<_>>());
    let u0: LiftedAtomSet = inst
        .goal
        .iter()
        .filter(|g| !init.contains(inst.atom_index(g.predicate, &g.args)))
        .map(|g| g.predicate)
        .collect();
    let adds: Vec<LiftedAtomSet> = domain
        .schemas
        .iter()
        .map(|s| s.add.iter().map(|a| a.predicate).collect())
        .collect();
    let pres: Vec<LiftedAtomSet> = domain
        .schemas
        .iter()
        .map(|s| s.pre.iter().map(|a| a.predicate).collect())
        .collect();

    let mut layers: Vec<HelpfulLayer> = Vec::new();
    let mut u = u0;
    loop {
        let supporters: BTreeSet<usize> = (0..domain.schemas.len())
            .filter(|&a| {
                !adds[a].is_disjoint(&u)
                    && layers.iter().all(|l| adds[a].is_disjoint(&l.unachieved))
            })
            .collect();
        let mut next = LiftedAtomSet::new();
        for &a in &supporters {
            let mut regressed = u.clone();
            regressed.extend(pres[a].difference(&lifted_init));
            next.extend(regressed.difference(&adds[a]));
        }
        layers.push(HelpfulLayer {
            unachieved: u.clone(),
            supporters,
        });
        // supporters are disjoint across layers, so this bound is never hit
        if next == u || layers.len() > domain.schemas.len() + domain.predicates.len() + 1 {
            break;
        }
        u = next;
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{benchmark, generate, DomainKind, BENCHMARKS, DEFAULT_SEED};
    use crate::model::Domain;

    fn helpful(name: &str) -> (StripsDomain, HelpfulActionSet) {
        let problem = generate(benchmark(name).unwrap(), DEFAULT_SEED).unwrap().problem().unwrap();
        let Domain::Strips(d) = problem.domain.clone() else { panic!() };
        let h = HelpfulActionSet::for_instances(&d, problem.instances.iter().filter_map(|i| i.as_strips()));
        (d, h)
    }

    fn names(d: &StripsDomain, h: &HelpfulActionSet) -> Vec<String> {
        h.schemas.iter().map(|&s| d.schemas[s].name.clone()).collect()
    }

    #[test]
    fn ontable_excludes_stack() {
        let (d, h) = helpful("ontable");
        assert_eq!(names(&d, &h), ["pickup", "putdown", "unstack"]);
        let first = &h.layers[0][0];
        assert_eq!(first.unachieved, [d.predicate_id("ontable").unwrap()].into());
    }

    #[test]
    fn lock_keeps_only_open() {
        let (d, h) = helpful("lock");
        assert_eq!(names(&d, &h), ["open"]);
        assert!(h.describe(&d).starts_with("H = {open}\n"));
    }

    #[test]
    fn goal_in_initial_state_gives_empty_set() {
        let d = crate::pddl::parse_domain(crate::bench::domains::VISITALL).unwrap();
        let text = "(define (problem p) (:domain visitall) (:objects c0 - cell) (:init (at c0) (visited c0)) (:goal (and (visited c0))))";
        let inst = crate::pddl::parse_instance(text, &d).unwrap();
        let layers = helpful_layers(&d, &inst);
        assert!(layers[0].unachieved.is_empty());
        assert!(HelpfulActionSet::for_instances(&d, [&inst]).schemas.is_empty());
    }

    #[test]
    fn layers_terminate_and_supporters_are_disjoint() {
        for spec in BENCHMARKS.iter().filter(|s| matches!(s.kind, DomainKind::Strips(_))) {
            let (d, h) = helpful(spec.name);
            for layers in &h.layers {
                assert!(layers.len() <= d.predicates.len() + 1, "{}", spec.name);
                for (i, a) in layers.iter().enumerate() {
                    for b in &layers[i + 1..] {
                        assert!(a.supporters.is_disjoint(&b.supporters), "{}", spec.name);
                    }
                }
            }
        }
    }
}
