//! STRIPS domains, instances and grounding of action schemas.

use std::collections::HashSet;

use super::state::{AtomSet, WorldState};
use crate::error::{Error, Result};

/// Id of the implicit root type `object`.
pub const OBJECT_TYPE: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeHierarchy {
    names: Vec<String>,
    parents: Vec<Option<usize>>,
}

impl Default for TypeHierarchy {
    fn default() -> Self {
        TypeHierarchy {
            names: vec!["object".to_string()],
            parents: vec![None],
        }
    }
}

impl TypeHierarchy {
    /// Declares `name` as a subtype of `parent`, or re-parents an existing type.
    pub fn declare(&mut self, name: &str, parent: usize) -> usize {
        match self.id(name) {
            Some(OBJECT_TYPE) => OBJECT_TYPE,
            Some(id) => {
                self.parents[id] = Some(parent);
                id
            }
            None => {
                self.names.push(name.to_string());
                self.parents.push(Some(parent));
                self.names.len() - 1
            }
        }
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parents[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subtype(&self, ty: usize, of: usize) -> bool {
        let mut cur = Some(ty);
        let mut hops = 0;
        while let Some(t) = cur {
            if t == of {
                return true;
            }
            cur = self.parents[t];
            hops += 1;
            if hops > self.names.len() {
                return false;
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<usize>,
}

impl Predicate {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub ty: usize,
}

/// A predicate applied to schema parameters (by parameter index).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: usize,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Parameter>,
    pub pre: Vec<Atom>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

impl ActionSchema {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsDomain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: TypeHierarchy,
    pub predicates: Vec<Predicate>,
    pub schemas: Vec<ActionSchema>,
}

impl StripsDomain {
    /// Checks the structural invariants of a domain.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.predicates.iter().enumerate() {
            if self.predicates[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::Model(format!("duplicate predicate {}", p.name)));
            }
        }
        for s in &self.schemas {
            for atom in s.pre.iter().chain(&s.add).chain(&s.del) {
                let pred = self.predicates.get(atom.predicate).ok_or_else(|| {
                    Error::Model(format!("schema {} uses an undeclared predicate", s.name))
                })?;
                if pred.arity() != atom.args.len() {
                    return Err(Error::Model(format!(
                        "schema {}: {} expects {} arguments",
                        s.name,
                        pred.name,
                        pred.arity()
                    )));
                }
                if let Some(&bad) = atom.args.iter().find(|&&a| a >= s.params.len()) {
                    return Err(Error::Model(format!(
                        "schema {}: term {bad} is not a parameter",
                        s.name
                    )));
                }
            }
            if s.add.iter().any(|a| s.del.contains(a)) {
                return Err(Error::Model(format!(
                    "schema {}: add and delete effects overlap",
                    s.name
                )));
            }
        }
        Ok(())
    }

    pub fn predicate_id(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p.name == name)
    }

    pub fn schema_id(&self, name: &str) -> Option<usize> {
        self.schemas.iter().position(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: usize,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub name: String,
    pub ty: usize,
}

/// A STRIPS instance compiled against its domain.
///
/// Ground atoms are indexed over all object tuples (not only well-typed ones)
/// so that an atom over any pointer valuation has a slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsInstance {
    pub name: String,
    pub objects: Vec<Object>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundAtom>,
    offsets: Vec<usize>,
    arities: Vec<usize>,
    universe: usize,
    // [object][type]
    has_type: Vec<Vec<bool>>,
    // [predicate] parameter types
    pred_types: Vec<Vec<usize>>,
    init_state: AtomSet,
    goal_atoms: Vec<usize>,
}

impl StripsInstance {
    pub fn new(
        domain: &StripsDomain,
        name: impl Into<String>,
        objects: Vec<Object>,
        init: Vec<GroundAtom>,
        goal: Vec<GroundAtom>,
    ) -> Result<Self> {
        let m = objects.len();
        let mut offsets = Vec::with_capacity(domain.predicates.len());
        let mut universe = 0usize;
        for p in &domain.predicates {
            offsets.push(universe);
            let size = m
                .checked_pow(p.arity() as u32)
                .filter(|s| *s <= 1 << 24)
                .ok_or_else(|| {
                    Error::Model(format!("atom universe of {} is too large", p.name))
                })?;
            universe += size;
        }
        let has_type = objects
            .iter()
            .map(|o| {
                (0..domain.types.len())
                    .map(|t| domain.types.is_subtype(o.ty, t))
                    .collect()
            })
            .collect();
        let mut inst = StripsInstance {
            name: name.into(),
            objects,
            init,
            goal,
            offsets,
            arities: domain.predicates.iter().map(Predicate::arity).collect(),
            universe,
            has_type,
            pred_types: domain.predicates.iter().map(|p| p.params.clone()).collect(),
            init_state: AtomSet::new(universe),
            goal_atoms: Vec::new(),
        };
        for atom in inst.init.iter().chain(&inst.goal) {
            if atom.predicate >= inst.arities.len()
                || atom.args.len() != inst.arities[atom.predicate]
                || atom.args.iter().any(|&o| o >= m)
            {
                return Err(Error::Model(format!("malformed ground atom {atom:?}")));
            }
            if !inst.is_well_typed(atom.predicate, &atom.args) {
                return Err(Error::Model(format!(
                    "ground atom {} violates predicate types",
                    inst.format_atom(domain, atom)
                )));
            }
        }
        let init_idx: Vec<usize> = inst
            .init
            .iter()
            .map(|a| inst.atom_index(a.predicate, &a.args))
            .collect();
        inst.init_state = AtomSet::from_indices(universe, init_idx);
        let mut seen = HashSet::new();
        inst.goal_atoms = inst
            .goal
            .iter()
            .map(|a| inst.atom_index(a.predicate, &a.args))
            .filter(|i| seen.insert(*i))
            .collect();
        Ok(inst)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    /// Size of the indexed ground-atom universe (the bit-set length).
    pub fn num_atoms(&self) -> usize {
        self.universe
    }

    pub fn num_predicates(&self) -> usize {
        self.arities.len()
    }

    #[inline]
    pub fn atom_index(&self, predicate: usize, args: &[usize]) -> usize {
        let m = self.objects.len();
        let mut idx = 0;
        for &a in args.iter().rev() {
            idx = idx * m + a;
        }
        self.offsets[predicate] + idx
    }

    pub fn decode_atom(&self, index: usize) -> GroundAtom {
        let predicate = match self.offsets.binary_search(&index) {
            Ok(mut p) => {
                // zero-sized ranges share offsets; pick the last predicate starting here
                while p + 1 < self.offsets.len() && self.offsets[p + 1] == index {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        };
        let m = self.objects.len();
        let mut rest = index - self.offsets[predicate];
        let args = (0..self.arities[predicate])
            .map(|_| {
                let a = rest % m;
                rest /= m;
                a
            })
            .collect();
        GroundAtom { predicate, args }
    }

    #[inline]
    pub fn object_has_type(&self, object: usize, ty: usize) -> bool {
        self.has_type[object][ty]
    }

    pub fn is_well_typed(&self, predicate: usize, args: &[usize]) -> bool {
        self.pred_types[predicate]
            .iter()
            .zip(args)
            .all(|(&t, &o)| self.has_type[o][t])
    }

    /// All well-typed ground atoms of one predicate.
    pub fn well_typed_atoms(&self, predicate: usize) -> Vec<usize> {
        let m = self.objects.len();
        let arity = self.arities[predicate];
        let mut out = Vec::new();
        let mut args = vec![0; arity];
        let total = m.pow(arity as u32);
        for code in 0..total {
            let mut c = code;
            for a in args.iter_mut() {
                *a = c % m;
                c /= m;
            }
            if self.is_well_typed(predicate, &args) {
                out.push(self.offsets[predicate] + code);
            }
        }
        out
    }

    pub fn initial_state(&self) -> WorldState {
        WorldState::Strips(self.init_state.clone())
    }

    pub fn initial_atoms(&self) -> &AtomSet {
        &self.init_state
    }

    pub fn goal_indices(&self) -> &[usize] {
        &self.goal_atoms
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn format_atom(&self, domain: &StripsDomain, atom: &GroundAtom) -> String {
        let mut s = format!("({}", domain.predicates[atom.predicate].name);
        for &a in &atom.args {
            s.push(' ');
            s.push_str(&self.objects[a].name);
        }
        s.push(')');
        s
    }

    pub fn format_atom_index(&self, domain: &StripsDomain, index: usize) -> String {
        self.format_atom(domain, &self.decode_atom(index))
    }
}

/// A schema instantiated over concrete objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub schema: usize,
    pub objects: Vec<usize>,
    /// False when some object does not match its parameter type; such an
    /// action is never applicable.
    pub well_typed: bool,
    pub pre: Vec<usize>,
    pub add: Vec<usize>,
    pub del: Vec<usize>,
}

impl GroundAction {
    pub fn format(&self, domain: &StripsDomain, inst: &StripsInstance) -> String {
        let names: Vec<&str> = self
            .objects
            .iter()
            .map(|&o| inst.objects[o].name.as_str())
            .collect();
        format!("{}({})", domain.schemas[self.schema].name, names.join(","))
    }
}

fn ground_atoms(atoms: &[Atom], objects: &[usize], inst: &StripsInstance) -> Vec<usize> {
    let mut buf = Vec::with_capacity(4);
    atoms
        .iter()
        .map(|a| {
            buf.clear();
            buf.extend(a.args.iter().map(|&p| objects[p]));
            inst.atom_index(a.predicate, &buf)
        })
        .collect()
}

/// Substitutes concrete objects for the parameters of a schema.
pub fn ground_schema(
    domain: &StripsDomain,
    schema: usize,
    objects: &[usize],
    inst: &StripsInstance,
) -> GroundAction {
    let s = &domain.schemas[schema];
    let well_typed = s
        .params
        .iter()
        .zip(objects)
        .all(|(p, &o)| inst.object_has_type(o, p.ty));
    GroundAction {
        schema,
        objects: objects.to_vec(),
        well_typed,
        pre: ground_atoms(&s.pre, objects, inst),
        add: ground_atoms(&s.add, objects, inst),
        del: ground_atoms(&s.del, objects, inst),
    }
}

/// Instantiates a schema over pointers by dereferencing each pointer value to
/// the object it indexes.
pub fn ground_over_pointers(
    domain: &StripsDomain,
    schema: usize,
    pointer_values: &[usize],
    inst: &StripsInstance,
) -> Result<GroundAction> {
    let s = domain
        .schemas
        .get(schema)
        .ok_or_else(|| Error::Model(format!("unknown schema id {schema}")))?;
    if s.arity() != pointer_values.len() {
        return Err(Error::Model(format!(
            "{} takes {} arguments, got {}",
            s.name,
            s.arity(),
            pointer_values.len()
        )));
    }
    if let Some(&v) = pointer_values.iter().find(|&&v| v >= inst.num_objects()) {
        return Err(Error::Model(format!(
            "pointer value {v} outside {} objects",
            inst.num_objects()
        )));
    }
    Ok(ground_schema(domain, schema, pointer_values, inst))
}

/// Every well-typed ground action of the instance.
pub fn ground_all(domain: &StripsDomain, inst: &StripsInstance) -> Vec<GroundAction> {
    let mut out = Vec::new();
    for (sid, s) in domain.schemas.iter().enumerate() {
        let candidates: Vec<Vec<usize>> = s
            .params
            .iter()
            .map(|p| {
                (0..inst.num_objects())
                    .filter(|&o| inst.object_has_type(o, p.ty))
                    .collect()
            })
            .collect();
        let mut tuple = vec![0usize; s.arity()];
        let mut counters = vec![0usize; s.arity()];
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            for (k, c) in counters.iter().enumerate() {
                tuple[k] = candidates[k][*c];
            }
            out.push(ground_schema(domain, sid, &tuple, inst));
            let mut k = 0;
            loop {
                if k == counters.len() {
                    break;
                }
                counters[k] += 1;
                if counters[k] < candidates[k].len() {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == counters.len() {
                break;
            }
        }
    }
    out
}

pub fn applicable(state: &AtomSet, action: &GroundAction) -> bool {
    action.well_typed && state.is_superset_of(&action.pre)
}

/// Applies delete effects, then add effects, in place.
pub fn apply_in_place(state: &mut AtomSet, action: &GroundAction) {
    for &d in &action.del {
        state.remove(d);
    }
    for &a in &action.add {
        state.insert(a);
    }
}

pub fn apply(state: &AtomSet, action: &GroundAction) -> Result<AtomSet> {
    if !applicable(state, action) {
        return Err(Error::Model("action applied outside its preconditions".into()));
    }
    let mut next = state.clone();
    apply_in_place(&mut next, action);
    Ok(next)
}
