//! Domains, instances, world states and generalized planning problems.

pub mod numeric;
pub mod state;
pub mod strips;

pub use numeric::{
    apply_numeric, numeric_domain, NumericActionSchema, NumericDomain, NumericInstance,
    DEFAULT_OVERFLOW_CAP, NUMERIC_DOMAINS,
};
pub use state::{AtomSet, WorldState};
pub use strips::{
    applicable, apply, ground_all, ground_over_pointers, ground_schema, ActionSchema, Atom,
    GroundAction, GroundAtom, Object, Parameter, Predicate, StripsDomain, StripsInstance,
    TypeHierarchy, OBJECT_TYPE,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum Domain {
    Strips(StripsDomain),
    Numeric(&'static NumericDomain),
}

impl Domain {
    pub fn name(&self) -> &str {
        match self {
            Domain::Strips(d) => &d.name,
            Domain::Numeric(d) => d.name,
        }
    }

    pub fn is_strips(&self) -> bool {
        matches!(self, Domain::Strips(_))
    }

    pub fn as_strips(&self) -> Option<&StripsDomain> {
        match self {
            Domain::Strips(d) => Some(d),
            Domain::Numeric(_) => None,
        }
    }

    pub fn schema_count(&self) -> usize {
        match self {
            Domain::Strips(d) => d.schemas.len(),
            Domain::Numeric(d) => d.schemas.len(),
        }
    }

    pub fn schema_name(&self, id: usize) -> &str {
        match self {
            Domain::Strips(d) => &d.schemas[id].name,
            Domain::Numeric(d) => d.schemas[id].name,
        }
    }

    pub fn schema_arity(&self, id: usize) -> usize {
        match self {
            Domain::Strips(d) => d.schemas[id].arity(),
            Domain::Numeric(d) => d.schemas[id].arity,
        }
    }

    pub fn schema_id(&self, name: &str) -> Option<usize> {
        match self {
            Domain::Strips(d) => d.schema_id(name),
            Domain::Numeric(d) => d.schema_id(name),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Strips(StripsInstance),
    Numeric(NumericInstance),
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Strips(i) => &i.name,
            Instance::Numeric(i) => &i.name,
        }
    }

    /// Exclusive upper bound of pointer values: |objects| or |registers|.
    pub fn pointer_bound(&self) -> usize {
        match self {
            Instance::Strips(i) => i.num_objects(),
            Instance::Numeric(i) => i.registers.len(),
        }
    }

    pub fn initial_state(&self) -> WorldState {
        match self {
            Instance::Strips(i) => i.initial_state(),
            Instance::Numeric(i) => i.initial_state(),
        }
    }

    pub fn as_strips(&self) -> Option<&StripsInstance> {
        match self {
            Instance::Strips(i) => Some(i),
            Instance::Numeric(_) => None,
        }
    }
}

/// True iff the state meets every goal condition of the instance.
pub fn goal_satisfied(state: &WorldState, instance: &Instance) -> bool {
    match (state, instance) {
        (WorldState::Strips(s), Instance::Strips(i)) => s.is_superset_of(i.goal_indices()),
        (WorldState::Numeric(r), Instance::Numeric(i)) => i.goal_satisfied(r),
        _ => false,
    }
}

/// A family of instances over one shared domain, with the program bounds.
#[derive(Debug, Clone)]
pub struct GpProblem {
    pub domain: Domain,
    pub instances: Vec<Instance>,
    pub pointers: usize,
    pub lines: usize,
}

impl GpProblem {
    pub fn new(
        domain: Domain,
        instances: Vec<Instance>,
        pointers: usize,
        lines: usize,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Model("a GP problem needs at least one instance".into()));
        }
        if pointers == 0 {
            return Err(Error::Model("pointer count must be at least 1".into()));
        }
        if lines == 0 {
            return Err(Error::Model("program line count must be at least 1".into()));
        }
        if pointers > 8 {
            return Err(Error::Model("at most 8 pointers are supported".into()));
        }
        for inst in &instances {
            let kind_ok = matches!(
                (&domain, inst),
                (Domain::Strips(_), Instance::Strips(_)) | (Domain::Numeric(_), Instance::Numeric(_))
            );
            if !kind_ok {
                return Err(Error::Model(format!(
                    "instance {} does not belong to domain {}",
                    inst.name(),
                    domain.name()
                )));
            }
        }
        Ok(GpProblem {
            domain,
            instances,
            pointers,
            lines,
        })
    }

    /// Same domain and bounds over a different instance list.
    pub fn with_instances(&self, instances: Vec<Instance>) -> Result<Self> {
        GpProblem::new(self.domain.clone(), instances, self.pointers, self.lines)
    }
}
