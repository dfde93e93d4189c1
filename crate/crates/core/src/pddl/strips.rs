//! STRIPS-fragment PDDL front end (`:strips` and `:typing` only).

use super::sexpr::{self, SExpr};
use crate::error::{Error, ParseError, Position};
use crate::model::{
    ActionSchema, Atom, GroundAtom, Object, Parameter, Predicate, StripsDomain, StripsInstance,
    TypeHierarchy, OBJECT_TYPE,
};
use crate::program::PointerArgs;

const SUPPORTED_REQUIREMENTS: [&str; 2] = [":strips", ":typing"];

fn single_define(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let exprs = sexpr::parse(text)?;
    let mut iter = exprs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| ParseError::syntax(Position { line: 1, column: 1 }, "empty input"))?;
    if let Some(extra) = iter.next() {
        return Err(ParseError::syntax(extra.pos(), "trailing content after define"));
    }
    let pos = first.pos();
    match first {
        SExpr::List(items, _) if items.first().and_then(SExpr::as_atom) == Some("define") => Ok(items),
        _ => Err(ParseError::syntax(pos, "expected (define ...)")),
    }
}

fn header_name<'a>(expr: Option<&'a SExpr>, keyword: &str, pos: Position) -> Result<&'a str, ParseError> {
    let expr = expr.ok_or_else(|| ParseError::syntax(pos, format!("missing ({keyword} <name>)")))?;
    let items = expr.expect_list(&format!("({keyword} <name>)"))?;
    match items {
        [k, name] if k.as_atom() == Some(keyword) => name.expect_atom("a name"),
        _ => Err(ParseError::syntax(expr.pos(), format!("expected ({keyword} <name>)"))),
    }
}

/// Parses `a b - t c` into (name, type name, position) triples.
fn typed_list(items: &[SExpr]) -> Result<Vec<(String, String, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Position)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let tok = items[i].expect_atom("a name")?;
        if tok == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| ParseError::syntax(items[i].pos(), "type expected after '-'"))?;
            if ty.head() == Some("either") {
                return Err(ParseError::semantic(ty.pos(), "either-types are not supported"));
            }
            let ty = ty.expect_atom("a type name")?;
            if pending.is_empty() {
                return Err(ParseError::syntax(items[i].pos(), "'-' without preceding names"));
            }
            for (n, p) in pending.drain(..) {
                out.push((n, ty.to_string(), p));
            }
            i += 2;
        } else {
            pending.push((tok.to_string(), items[i].pos()));
            i += 1;
        }
    }
    for (n, p) in pending {
        out.push((n, "object".to_string(), p));
    }
    Ok(out)
}

fn resolve_type(types: &TypeHierarchy, name: &str, pos: Position) -> Result<usize, ParseError> {
    types
        .id(name)
        .ok_or_else(|| ParseError::semantic(pos, format!("unknown type {name}")))
}

pub fn parse_domain(text: &str) -> Result<StripsDomain, ParseError> {
    let items = single_define(text)?;
    let name = header_name(items.get(1), "domain", items[0].pos())?.to_string();
    let mut domain = StripsDomain {
        name,
        requirements: Vec::new(),
        types: TypeHierarchy::default(),
        predicates: Vec::new(),
        schemas: Vec::new(),
    };
    let mut actions = Vec::new();
    for section in &items[2..] {
        let list = section.expect_list("a domain section")?;
        let key = section
            .head()
            .ok_or_else(|| ParseError::syntax(section.pos(), "empty section"))?;
        match key {
            ":requirements" => {
                for r in &list[1..] {
                    let r = r.expect_atom("a requirement")?;
                    if !SUPPORTED_REQUIREMENTS.contains(&r) {
                        return Err(ParseError::UnsupportedRequirement {
                            pos: section.pos(),
                            requirement: r.to_string(),
                        });
                    }
                    domain.requirements.push(r.to_string());
                }
            }
            ":types" => {
                let declared = typed_list(&list[1..])?;
                // declare names first so parents may appear later in the list
                for (n, _, _) in &declared {
                    domain.types.declare(n, OBJECT_TYPE);
                }
                for (n, parent, p) in &declared {
                    let parent_id = match domain.types.id(parent) {
                        Some(id) => id,
                        None => domain.types.declare(parent, OBJECT_TYPE),
                    };
                    let id = domain.types.id(n).expect("declared above");
                    if domain.types.is_subtype(parent_id, id) && parent_id != OBJECT_TYPE {
                        return Err(ParseError::semantic(*p, format!("cyclic type {n}")));
                    }
                    domain.types.declare(n, parent_id);
                }
            }
            ":predicates" => {
                for p in &list[1..] {
                    let parts = p.expect_list("a predicate declaration")?;
                    let pname = parts
                        .first()
                        .ok_or_else(|| ParseError::syntax(p.pos(), "empty predicate"))?
                        .expect_atom("a predicate name")?;
                    if domain.predicate_id(pname).is_some() {
                        return Err(ParseError::semantic(p.pos(), format!("duplicate predicate {pname}")));
                    }
                    let params = typed_list(&parts[1..])?
                        .into_iter()
                        .map(|(_, t, pos)| resolve_type(&domain.types, &t, pos))
                        .collect::<Result<Vec<_>, _>>()?;
                    if params.len() > PointerArgs::MAX {
                        return Err(ParseError::semantic(p.pos(), format!("{pname}: arity above {}", PointerArgs::MAX)));
                    }
                    domain.predicates.push(Predicate {
                        name: pname.to_string(),
                        params,
                    });
                }
            }
            ":action" => actions.push(section),
            ":constants" => {
                return Err(ParseError::semantic(section.pos(), "domain constants are not supported"))
            }
            other => {
                return Err(ParseError::semantic(section.pos(), format!("unsupported section {other}")))
            }
        }
    }
    for a in actions {
        let schema = parse_action(&domain, a)?;
        if domain.schema_id(&schema.name).is_some() {
            return Err(ParseError::semantic(a.pos(), format!("duplicate action {}", schema.name)));
        }
        domain.schemas.push(schema);
    }
    domain
        .validate()
        .map_err(|e| ParseError::semantic(items[0].pos(), e.to_string()))?;
    Ok(domain)
}

fn parse_action(domain: &StripsDomain, section: &SExpr) -> Result<ActionSchema, ParseError> {
    let list = section.as_list().unwrap_or_default();
    let name = list
        .get(1)
        .ok_or_else(|| ParseError::syntax(section.pos(), "action name expected"))?
        .expect_atom("an action name")?
        .to_string();
    let mut params = Vec::new();
    let mut pre = Vec::new();
    let mut add = Vec::new();
    let mut del = Vec::new();
    let mut i = 2;
    while i < list.len() {
        let key = list[i].expect_atom("an action keyword")?;
        let value = list
            .get(i + 1)
            .ok_or_else(|| ParseError::syntax(list[i].pos(), format!("value expected after {key}")))?;
        match key {
            ":parameters" => {
                for (n, t, pos) in typed_list(value.expect_list("a parameter list")?)? {
                    if !n.starts_with('?') {
                        return Err(ParseError::syntax(pos, format!("parameter {n} must start with '?'")));
                    }
                    params.push(Parameter {
                        name: n,
                        ty: resolve_type(&domain.types, &t, pos)?,
                    });
                }
                if params.len() > PointerArgs::MAX {
                    return Err(ParseError::semantic(value.pos(), format!("{name}: too many parameters")));
                }
            }
            ":precondition" => {
                for (atom, negated) in literals(domain, &params, value)? {
                    if negated {
                        return Err(ParseError::semantic(value.pos(), "negative preconditions are not supported"));
                    }
                    pre.push(atom);
                }
            }
            ":effect" => {
                for (atom, negated) in literals(domain, &params, value)? {
                    if negated {
                        del.push(atom);
                    } else {
                        add.push(atom);
                    }
                }
            }
            other => {
                return Err(ParseError::semantic(list[i].pos(), format!("unsupported action keyword {other}")))
            }
        }
        i += 2;
    }
    Ok(ActionSchema {
        name,
        params,
        pre,
        add,
        del,
    })
}

/// Flattens `atom`, `(not atom)` and `(and ...)` into literals.
fn literals(
    domain: &StripsDomain,
    params: &[Parameter],
    expr: &SExpr,
) -> Result<Vec<(Atom, bool)>, ParseError> {
    let mut out = Vec::new();
    collect_literals(domain, params, expr, false, &mut out)?;
    Ok(out)
}

fn collect_literals(
    domain: &StripsDomain,
    params: &[Parameter],
    expr: &SExpr,
    negated: bool,
    out: &mut Vec<(Atom, bool)>,
) -> Result<(), ParseError> {
    let list = expr.expect_list("a formula")?;
    match expr.head() {
        None if list.is_empty() => Ok(()),
        Some("and") if !negated => {
            for e in &list[1..] {
                collect_literals(domain, params, e, false, out)?;
            }
            Ok(())
        }
        Some("not") if !negated => match &list[1..] {
            [inner] => collect_literals(domain, params, inner, true, out),
            _ => Err(ParseError::syntax(expr.pos(), "not takes one argument")),
        },
        Some(kw @ ("or" | "imply" | "forall" | "exists" | "when" | "=" | "increase")) => Err(
            ParseError::semantic(expr.pos(), format!("{kw} is outside the STRIPS fragment")),
        ),
        Some(pname) => {
            let predicate = domain
                .predicate_id(pname)
                .ok_or_else(|| ParseError::semantic(expr.pos(), format!("unknown predicate {pname}")))?;
            let args = list[1..]
                .iter()
                .map(|t| {
                    let t = t.expect_atom("a parameter")?;
                    params.iter().position(|p| p.name == t).ok_or_else(|| {
                        ParseError::semantic(expr.pos(), format!("{t} is not an action parameter"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if args.len() != domain.predicates[predicate].arity() {
                return Err(ParseError::semantic(
                    expr.pos(),
                    format!("{pname} expects {} arguments", domain.predicates[predicate].arity()),
                ));
            }
            for (&a, &ty) in args.iter().zip(&domain.predicates[predicate].params) {
                let pty = params[a].ty;
                if !domain.types.is_subtype(pty, ty) && !domain.types.is_subtype(ty, pty) {
                    return Err(ParseError::semantic(
                        expr.pos(),
                        format!("{} cannot be of type {}", params[a].name, domain.types.name(ty)),
                    ));
                }
            }
            out.push((Atom { predicate, args }, negated));
            Ok(())
        }
        None => Err(ParseError::syntax(expr.pos(), "malformed formula")),
    }
}

pub fn parse_instance(text: &str, domain: &StripsDomain) -> Result<StripsInstance, ParseError> {
    let items = single_define(text)?;
    let name = header_name(items.get(1), "problem", items[0].pos())?.to_string();
    let mut objects: Vec<Object> = Vec::new();
    let mut init = Vec::new();
    let mut goal = Vec::new();
    let mut seen_domain = false;
    let mut init_expr = None;
    let mut goal_expr = None;
    for section in &items[2..] {
        let list = section.expect_list("a problem section")?;
        match section.head() {
            Some(":domain") => {
                let d = list
                    .get(1)
                    .ok_or_else(|| ParseError::syntax(section.pos(), "domain name expected"))?
                    .expect_atom("a domain name")?;
                if d != domain.name {
                    return Err(ParseError::semantic(
                        section.pos(),
                        format!("instance belongs to domain {d}, expected {}", domain.name),
                    ));
                }
                seen_domain = true;
            }
            Some(":objects") => {
                for (n, t, pos) in typed_list(&list[1..])? {
                    if objects.iter().any(|o| o.name == n) {
                        return Err(ParseError::semantic(pos, format!("duplicate object {n}")));
                    }
                    objects.push(Object {
                        name: n,
                        ty: resolve_type(&domain.types, &t, pos)?,
                    });
                }
            }
            Some(":init") => init_expr = Some(section),
            Some(":goal") => goal_expr = Some(section),
            Some(other) => {
                return Err(ParseError::semantic(section.pos(), format!("unsupported section {other}")))
            }
            None => return Err(ParseError::syntax(section.pos(), "empty section")),
        }
    }
    if !seen_domain {
        return Err(ParseError::syntax(items[0].pos(), "missing (:domain <name>)"));
    }
    if let Some(s) = init_expr {
        for a in &s.as_list().unwrap_or_default()[1..] {
            init.push(ground_atom(domain, &objects, a)?);
        }
    }
    if let Some(s) = goal_expr {
        let list = s.as_list().unwrap_or_default();
        for g in &list[1..] {
            collect_ground(domain, &objects, g, &mut goal)?;
        }
    }
    StripsInstance::new(domain, name, objects, init, goal).map_err(|e| match e {
        Error::Model(m) => ParseError::semantic(items[0].pos(), m),
        other => ParseError::semantic(items[0].pos(), other.to_string()),
    })
}

fn collect_ground(
    domain: &StripsDomain,
    objects: &[Object],
    expr: &SExpr,
    out: &mut Vec<GroundAtom>,
) -> Result<(), ParseError> {
    match expr.head() {
        Some("and") => {
            for e in &expr.as_list().unwrap_or_default()[1..] {
                collect_ground(domain, objects, e, out)?;
            }
            Ok(())
        }
        Some("not" | "or" | "forall" | "exists" | "imply") => Err(ParseError::semantic(
            expr.pos(),
            "only conjunctions of atoms are supported in goals",
        )),
        _ if expr.as_list().is_some_and(<[SExpr]>::is_empty) => Ok(()),
        _ => {
            out.push(ground_atom(domain, objects, expr)?);
            Ok(())
        }
    }
}

fn ground_atom(domain: &StripsDomain, objects: &[Object], expr: &SExpr) -> Result<GroundAtom, ParseError> {
    let list = expr.expect_list("a ground atom")?;
    let pname = list
        .first()
        .ok_or_else(|| ParseError::syntax(expr.pos(), "empty atom"))?
        .expect_atom("a predicate name")?;
    let predicate = domain
        .predicate_id(pname)
        .ok_or_else(|| ParseError::semantic(expr.pos(), format!("unknown predicate {pname}")))?;
    let args = list[1..]
        .iter()
        .map(|o| {
            let o_name = o.expect_atom("an object")?;
            objects
                .iter()
                .position(|x| x.name == o_name)
                .ok_or_else(|| ParseError::semantic(o.pos(), format!("unknown object {o_name}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if args.len() != domain.predicates[predicate].arity() {
        return Err(ParseError::semantic(
            expr.pos(),
            format!("{pname} expects {} arguments", domain.predicates[predicate].arity()),
        ));
    }
    Ok(GroundAtom { predicate, args })
}

fn typed_names(types: &TypeHierarchy, items: impl Iterator<Item = (String, usize)>) -> String {
    // groups consecutive names with equal types: `a b - t c - u`
    let items: Vec<(String, usize)> = items.collect();
    let mut out = String::new();
    let mut i = 0;
    while i < items.len() {
        let ty = items[i].1;
        let mut j = i;
        while j < items.len() && items[j].1 == ty {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&items[j].0);
            j += 1;
        }
        out.push_str(" - ");
        out.push_str(types.name(ty));
        i = j;
    }
    out
}

fn format_schema_atom(domain: &StripsDomain, schema: &ActionSchema, atom: &Atom) -> String {
    let mut s = format!("({}", domain.predicates[atom.predicate].name);
    for &a in &atom.args {
        s.push(' ');
        s.push_str(&schema.params[a].name);
    }
    s.push(')');
    s
}

pub fn print_domain(domain: &StripsDomain) -> String {
    let mut out = format!("(define (domain {})\n", domain.name);
    if !domain.requirements.is_empty() {
        out.push_str(&format!("  (:requirements {})\n", domain.requirements.join(" ")));
    }
    if domain.types.len() > 1 {
        let types = (1..domain.types.len())
            .map(|t| (domain.types.name(t).to_string(), domain.types.parent(t).unwrap_or(OBJECT_TYPE)));
        out.push_str(&format!("  (:types {})\n", typed_names(&domain.types, types)));
    }
    out.push_str("  (:predicates");
    for p in &domain.predicates {
        out.push_str(&format!("\n    ({}", p.name));
        if !p.params.is_empty() {
            let params = p.params.iter().enumerate().map(|(i, &t)| (format!("?x{i}"), t));
            out.push(' ');
            out.push_str(&typed_names(&domain.types, params));
        }
        out.push(')');
    }
    out.push_str(")\n");
    for s in &domain.schemas {
        out.push_str(&format!("  (:action {}\n", s.name));
        let params = s.params.iter().map(|p| (p.name.clone(), p.ty));
        out.push_str(&format!("    :parameters ({})\n", typed_names(&domain.types, params)));
        let pre: Vec<String> = s.pre.iter().map(|a| format_schema_atom(domain, s, a)).collect();
        out.push_str(&format!("    :precondition (and {})\n", pre.join(" ")));
        let mut eff: Vec<String> = s.add.iter().map(|a| format_schema_atom(domain, s, a)).collect();
        eff.extend(s.del.iter().map(|a| format!("(not {})", format_schema_atom(domain, s, a))));
        out.push_str(&format!("    :effect (and {}))\n", eff.join(" ")));
    }
    out.push_str(")\n");
    out
}

pub fn print_instance(domain: &StripsDomain, inst: &StripsInstance) -> String {
    let mut out = format!("(define (problem {})\n  (:domain {})\n", inst.name, domain.name);
    let objs = inst.objects.iter().map(|o| (o.name.clone(), o.ty));
    out.push_str(&format!("  (:objects {})\n", typed_names(&domain.types, objs)));
    out.push_str("  (:init");
    for a in &inst.init {
        out.push_str("\n    ");
        out.push_str(&inst.format_atom(domain, a));
    }
    out.push_str(")\n  (:goal (and");
    for a in &inst.goal {
        out.push_str("\n    ");
        out.push_str(&inst.format_atom(domain, a));
    }
    out.push_str(")))\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BLOCKS: &str = "
(define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action unstack
    :parameters (?b1 - block ?b2 - block)
    :precondition (and (on ?b1 ?b2) (clear ?b1) (handempty))
    :effect (and (holding ?b1) (clear ?b2)
                 (not (on ?b1 ?b2)) (not (clear ?b1)) (not (handempty)))))";

    const PROBLEM: &str = "
(define (problem p3) (:domain blocks)
  (:objects block1 block2 block3 - block)
  (:init (on block1 block2) (on block2 block3) (ontable block3) (clear block1) (handempty))
  (:goal (and (ontable block1) (ontable block2))))";

    #[test]
    fn parses_blocks_unstack() {
        let d = parse_domain(BLOCKS).unwrap();
        assert_eq!(d.schemas.len(), 1);
        let s = &d.schemas[0];
        assert_eq!(s.name, "unstack");
        let names: Vec<&str> = s.params.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["?b1", "?b2"]);
        assert!(s.params.iter().all(|p| d.types.name(p.ty) == "block"));
        assert_eq!((s.pre.len(), s.add.len(), s.del.len()), (3, 2, 3));
    }

    #[test]
    fn parses_instance_objects() {
        let d = parse_domain(BLOCKS).unwrap();
        let i = parse_instance(PROBLEM, &d).unwrap();
        let names: Vec<&str> = i.objects.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["block1", "block2", "block3"]);
        assert_eq!(i.goal.len(), 2);
    }

    #[test]
    fn fragment_boundaries() {
        let err = parse_domain("(define (domain d) (:requirements :adl))").unwrap_err();
        assert!(err.to_string().contains("unsupported requirement :adl"));
        let d = parse_domain("(define (domain d) (:requirements :strips) (:predicates))").unwrap();
        assert!(d.predicates.is_empty());
        let neg = "(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (not (p)) :effect (p)))";
        assert!(parse_domain(neg).is_err());
        let cond = "(define (domain d) (:predicates (p)) (:action a :parameters () :precondition () :effect (when (p) (p))))";
        assert!(parse_domain(cond).is_err());
    }

    #[test]
    fn instance_diagnostics() {
        let d = parse_domain(BLOCKS).unwrap();
        let unknown_obj = PROBLEM.replace("(ontable block2)", "(ontable block9)");
        let e = parse_instance(&unknown_obj, &d).unwrap_err();
        assert!(e.to_string().contains("unknown object block9"));
        assert!(e.position().line > 1);
        let unknown_pred = PROBLEM.replace("(handempty)", "(armempty)");
        assert!(parse_instance(&unknown_pred, &d).unwrap_err().to_string().contains("unknown predicate"));
        let wrong_domain = PROBLEM.replace("(:domain blocks)", "(:domain other)");
        assert!(parse_instance(&wrong_domain, &d).is_err());
        let empty_goal = PROBLEM.replace("(and (ontable block1) (ontable block2))", "(and)");
        assert!(parse_instance(&empty_goal, &d).unwrap().goal.is_empty());
    }

    #[test]
    fn print_parse_round_trip() {
        let d = parse_domain(BLOCKS).unwrap();
        let d2 = parse_domain(&print_domain(&d)).unwrap();
        assert_eq!(print_domain(&d2), print_domain(&d));
        assert_eq!(d2.schemas, d.schemas);
        let i = parse_instance(PROBLEM, &d).unwrap();
        let i2 = parse_instance(&print_instance(&d, &i), &d2).unwrap();
        assert_eq!(i2, i);
    }

    proptest::proptest! {
        #[test]
        fn parsers_never_panic(bytes in proptest::collection::vec(proptest::num::u8::ANY, 0..300)) {
            let text = String::from_utf8_lossy(&bytes);
            let d = parse_domain(BLOCKS).unwrap();
            let _ = parse_domain(&text);
            let _ = parse_instance(&text, &d);
            let _ = crate::pddl::parse_program_raw(&text);
        }

        #[test]
        fn mutated_pddl_never_panics(cut in 0usize..400, insert in "[() a-z?:-]{0,6}") {
            let cut = cut.min(BLOCKS.len());
            let text = format!("{}{}{}", &BLOCKS[..cut], insert, &BLOCKS[cut..]);
            let _ = parse_domain(&text);
        }
    }
}
