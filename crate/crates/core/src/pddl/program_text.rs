//! Textual planning programs: one `<line>. <instr>` per line.

use crate::error::{ParseError, Position};
use crate::model::Domain;
use crate::program::{FlagCondition, Instruction, PlanningProgram};

/// An instruction as written, before resolution against a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLine {
    pub line: usize,
    pub op: String,
    pub args: Vec<String>,
    pub pos: Position,
}

/// Syntactic pass: line numbers, operation names and argument lists.
///
/// Blank lines and `#` comments are skipped. A line without a `<n>.` prefix
/// takes the next line number.
pub fn parse_program_raw(text: &str) -> Result<Vec<RawLine>, ParseError> {
    let mut out: Vec<RawLine> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or_default();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = content.len() - content.trim_start().len() + 1;
        let pos = Position { line: i + 1, column };
        let (line, body) = match trimmed.split_once('.') {
            Some((num, rest)) if !num.is_empty() && num.trim().chars().all(|c| c.is_ascii_digit()) => {
                let n = num
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::syntax(pos, "line number out of range"))?;
                (n, rest.trim())
            }
            _ => (out.last().map_or(0, |l| l.line + 1), trimmed),
        };
        if out.iter().any(|l| l.line == line) {
            return Err(ParseError::semantic(pos, format!("line {line} defined twice")));
        }
        let (op, args) = match body.split_once('(') {
            Some((op, rest)) => {
                let inner = rest
                    .trim_end()
                    .strip_suffix(')')
                    .ok_or_else(|| ParseError::syntax(pos, "missing ')'"))?;
                if inner.contains('(') || inner.contains(')') {
                    return Err(ParseError::syntax(pos, "nested parentheses"));
                }
                let args: Vec<String> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(|a| a.trim().to_ascii_lowercase()).collect()
                };
                (op.trim(), args)
            }
            None => (body, Vec::new()),
        };
        if op.is_empty() || !op.chars().all(|c| c.is_alphanumeric() || "_-".contains(c)) {
            return Err(ParseError::syntax(pos, format!("malformed instruction {body:?}")));
        }
        if args.iter().any(String::is_empty) {
            return Err(ParseError::syntax(pos, "empty argument"));
        }
        out.push(RawLine {
            line,
            op: op.to_ascii_lowercase(),
            args,
            pos,
        });
    }
    Ok(out)
}

fn pointer(arg: &str, pointers: usize, pos: Position) -> Result<u8, ParseError> {
    let idx = arg
        .strip_prefix('z')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| ParseError::syntax(pos, format!("expected a pointer z1..z{pointers}, found {arg:?}")))?;
    if idx > pointers {
        return Err(ParseError::semantic(
            pos,
            format!("pointer {arg} exceeds the {pointers} available pointers"),
        ));
    }
    Ok((idx - 1) as u8)
}

fn pointers_of(raw: &RawLine, pointers: usize, arity: usize) -> Result<Vec<usize>, ParseError> {
    if raw.args.len() != arity {
        return Err(ParseError::semantic(
            raw.pos,
            format!("{} expects {arity} arguments, found {}", raw.op, raw.args.len()),
        ));
    }
    raw.args
        .iter()
        .map(|a| pointer(a, pointers, raw.pos).map(usize::from))
        .collect()
}

/// Resolves one raw line against the domain, pointer count and line bound.
pub fn resolve_line(
    raw: &RawLine,
    domain: &Domain,
    pointers: usize,
    lines: usize,
) -> Result<Instruction, ParseError> {
    let pos = raw.pos;
    let two = |raw: &RawLine| -> Result<(u8, u8), ParseError> {
        let z = pointers_of(raw, pointers, 2)?;
        Ok((z[0] as u8, z[1] as u8))
    };
    Ok(match raw.op.as_str() {
        "end" => {
            if !raw.args.is_empty() {
                return Err(ParseError::syntax(pos, "end takes no arguments"));
            }
            Instruction::End
        }
        "inc" => Instruction::Inc(pointers_of(raw, pointers, 1)?[0] as u8),
        "dec" => Instruction::Dec(pointers_of(raw, pointers, 1)?[0] as u8),
        "clear" => Instruction::Clear(pointers_of(raw, pointers, 1)?[0] as u8),
        "set" => {
            let (a, b) = two(raw)?;
            Instruction::Set(a, b)
        }
        "cmp" | "cmp_x" => {
            if domain.is_strips() {
                return Err(ParseError::semantic(pos, format!("{} needs a numeric domain", raw.op)));
            }
            let (a, b) = two(raw)?;
            if raw.op == "cmp" {
                Instruction::Cmp(a, b)
            } else {
                Instruction::CmpVar(a, b)
            }
        }
        "goto" => {
            let [target, cond] = raw.args.as_slice() else {
                return Err(ParseError::syntax(pos, "goto expects (<line>, <condition>)"));
            };
            let target: usize = target
                .parse()
                .map_err(|_| ParseError::syntax(pos, format!("goto target {target:?} is not a line number")))?;
            if target >= lines {
                return Err(ParseError::semantic(
                    pos,
                    format!("goto target {target} out of range for a {lines}-line program"),
                ));
            }
            let cond = FlagCondition::parse(cond)
                .ok_or_else(|| ParseError::syntax(pos, format!("unknown goto condition {cond:?}")))?;
            if domain.is_strips() && !cond.is_strips() {
                return Err(ParseError::semantic(pos, "STRIPS gotos only test y_z"));
            }
            Instruction::goto(target, cond)
        }
        op => {
            if let Some(pred) = op.strip_prefix("test_") {
                if let Some(d) = domain.as_strips() {
                    if let Some(p) = d.predicate_id(pred) {
                        let z = pointers_of(raw, pointers, d.predicates[p].arity())?;
                        return Ok(Instruction::test(p, &z));
                    }
                }
            }
            match domain.schema_id(op) {
                Some(s) => {
                    let z = pointers_of(raw, pointers, domain.schema_arity(s))?;
                    Instruction::action(s, &z)
                }
                None if op.starts_with("test_") && !domain.is_strips() => {
                    return Err(ParseError::semantic(pos, "test instructions need a STRIPS domain"))
                }
                None => return Err(ParseError::semantic(pos, format!("unknown action {op}"))),
            }
        }
    })
}

/// Parses and resolves a program with `lines` slots over `pointers` pointers.
pub fn parse_program(
    text: &str,
    domain: &Domain,
    pointers: usize,
    lines: usize,
) -> Result<PlanningProgram, ParseError> {
    let raw = parse_program_raw(text)?;
    let mut program = PlanningProgram::empty(lines);
    for r in &raw {
        if r.line >= lines {
            return Err(ParseError::semantic(
                r.pos,
                format!("line {} exceeds the {lines}-line bound", r.line),
            ));
        }
        program.set(r.line, resolve_line(r, domain, pointers, lines)?);
    }
    Ok(program)
}
