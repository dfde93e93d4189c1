//! Planning programs: instruction slots over pointers, RAM actions and gotos.

use std::fmt;

use crate::model::Domain;

/// Up to six pointer indices, stored inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointerArgs {
    len: u8,
    z: [u8; 6],
}

impl PointerArgs {
    pub const MAX: usize = 6;

    pub fn new(args: &[usize]) -> Self {
        assert!(args.len() <= Self::MAX, "too many pointer arguments");
        let mut z = [0u8; 6];
        for (slot, &a) in z.iter_mut().zip(args) {
            *slot = u8::try_from(a).expect("pointer index fits in u8");
        }
        PointerArgs {
            len: args.len() as u8,
            z,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.z[..self.len as usize].iter().map(|&v| v as usize)
    }

    pub fn get(&self, i: usize) -> usize {
        self.z[..self.len as usize][i] as usize
    }
}

impl fmt::Debug for PointerArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Required valuation of the zero/carry flags for a goto to jump.
///
/// STRIPS programs only use `Zero` (`y_z=true`) and `NonZero` (`y_z=false`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlagCondition {
    Zero,
    NonZero,
    Positive,
    NonPositive,
    Negative,
    NonNegative,
}

impl FlagCondition {
    pub const STRIPS: [FlagCondition; 2] = [FlagCondition::Zero, FlagCondition::NonZero];
    pub const NUMERIC: [FlagCondition; 6] = [
        FlagCondition::Zero,
        FlagCondition::NonZero,
        FlagCondition::Positive,
        FlagCondition::NonPositive,
        FlagCondition::Negative,
        FlagCondition::NonNegative,
    ];

    #[inline]
    pub fn holds(self, zero: bool, carry: bool) -> bool {
        match self {
            FlagCondition::Zero => zero,
            FlagCondition::NonZero => !zero,
            FlagCondition::Positive => carry,
            FlagCondition::NonPositive => !carry,
            FlagCondition::Negative => !zero && !carry,
            FlagCondition::NonNegative => zero || carry,
        }
    }

    pub fn is_strips(self) -> bool {
        matches!(self, FlagCondition::Zero | FlagCondition::NonZero)
    }

    pub fn text(self, strips: bool) -> &'static str {
        match (self, strips) {
            (FlagCondition::Zero, true) => "y_z=true",
            (FlagCondition::NonZero, true) => "y_z=false",
            (FlagCondition::Zero, false) => "=0",
            (FlagCondition::NonZero, false) => "!=0",
            (FlagCondition::Positive, _) => ">0",
            (FlagCondition::NonPositive, _) => "<=0",
            (FlagCondition::Negative, _) => "<0",
            (FlagCondition::NonNegative, _) => ">=0",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        Some(match t.to_ascii_lowercase().as_str() {
            "y_z=true" | "y_z=1" | "=0" | "==0" => FlagCondition::Zero,
            "y_z=false" | "y_z=0" | "!=0" | "≠0" => FlagCondition::NonZero,
            ">0" => FlagCondition::Positive,
            "<=0" | "≤0" => FlagCondition::NonPositive,
            "<0" => FlagCondition::Negative,
            ">=0" | "≥0" => FlagCondition::NonNegative,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Planning action: schema id instantiated over pointers.
    Action { schema: u16, args: PointerArgs },
    Inc(u8),
    Dec(u8),
    /// `set(a,b)` writes pointer b := value of pointer a.
    Set(u8, u8),
    Clear(u8),
    Test { predicate: u16, args: PointerArgs },
    Cmp(u8, u8),
    CmpVar(u8, u8),
    Goto { target: u16, cond: FlagCondition },
    End,
}

impl Instruction {
    pub fn action(schema: usize, args: &[usize]) -> Self {
        Instruction::Action {
            schema: schema as u16,
            args: PointerArgs::new(args),
        }
    }

    pub fn test(predicate: usize, args: &[usize]) -> Self {
        Instruction::Test {
            predicate: predicate as u16,
            args: PointerArgs::new(args),
        }
    }

    pub fn goto(target: usize, cond: FlagCondition) -> Self {
        Instruction::Goto {
            target: target as u16,
            cond,
        }
    }

    pub fn is_goto(&self) -> bool {
        matches!(self, Instruction::Goto { .. })
    }

    pub fn is_ram(&self) -> bool {
        matches!(
            self,
            Instruction::Inc(_)
                | Instruction::Dec(_)
                | Instruction::Set(..)
                | Instruction::Clear(_)
                | Instruction::Test { .. }
                | Instruction::Cmp(..)
                | Instruction::CmpVar(..)
        )
    }

    /// Largest pointer index referenced, if any.
    pub fn max_pointer(&self) -> Option<usize> {
        match self {
            Instruction::Action { args, .. } | Instruction::Test { args, .. } => args.iter().max(),
            Instruction::Inc(z) | Instruction::Dec(z) | Instruction::Clear(z) => Some(*z as usize),
            Instruction::Set(a, b) | Instruction::Cmp(a, b) | Instruction::CmpVar(a, b) => {
                Some((*a).max(*b) as usize)
            }
            Instruction::Goto { .. } | Instruction::End => None,
        }
    }

    pub fn display<'a>(&'a self, domain: &'a Domain) -> InstructionDisplay<'a> {
        InstructionDisplay {
            instruction: self,
            domain,
        }
    }
}

fn write_pointers(f: &mut fmt::Formatter<'_>, args: impl Iterator<Item = usize>) -> fmt::Result {
    let mut first = true;
    for z in args {
        if !first {
            f.write_str(",")?;
        }
        first = false;
        write!(f, "z{}", z + 1)?;
    }
    Ok(())
}

pub struct InstructionDisplay<'a> {
    instruction: &'a Instruction,
    domain: &'a Domain,
}

impl fmt::Display for InstructionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.instruction {
            Instruction::Action { schema, args } => {
                write!(f, "{}(", self.domain.schema_name(schema as usize))?;
                write_pointers(f, args.iter())?;
                f.write_str(")")
            }
            Instruction::Inc(z) => write!(f, "inc(z{})", z + 1),
            Instruction::Dec(z) => write!(f, "dec(z{})", z + 1),
            Instruction::Set(a, b) => write!(f, "set(z{},z{})", a + 1, b + 1),
            Instruction::Clear(z) => write!(f, "clear(z{})", z + 1),
            Instruction::Test { predicate, args } => {
                let name = match self.domain {
                    Domain::Strips(d) => d.predicates[predicate as usize].name.as_str(),
                    Domain::Numeric(_) => "?",
                };
                write!(f, "test_{name}(")?;
                write_pointers(f, args.iter())?;
                f.write_str(")")
            }
            Instruction::Cmp(a, b) => write!(f, "cmp(z{},z{})", a + 1, b + 1),
            Instruction::CmpVar(a, b) => write!(f, "cmp_x(z{},z{})", a + 1, b + 1),
            Instruction::Goto { target, cond } => {
                write!(f, "goto({}, {})", target, cond.text(self.domain.is_strips()))
            }
            Instruction::End => f.write_str("end"),
        }
    }
}

/// A fixed-capacity sequence of instruction slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanningProgram {
    lines: Box<[Option<Instruction>]>,
}

impl PlanningProgram {
    /// All slots undefined.
    pub fn empty(n: usize) -> Self {
        PlanningProgram {
            lines: vec![None; n].into_boxed_slice(),
        }
    }

    /// The search root: every slot undefined except `end` in the last line.
    pub fn with_final_end(n: usize) -> Self {
        let mut p = Self::empty(n);
        if n > 0 {
            p.lines[n - 1] = Some(Instruction::End);
        }
        p
    }

    pub fn from_lines(lines: Vec<Option<Instruction>>) -> Self {
        PlanningProgram {
            lines: lines.into_boxed_slice(),
        }
    }

    /// Capacity n.
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    #[inline]
    pub fn get(&self, line: usize) -> Option<&Instruction> {
        self.lines.get(line).and_then(Option::as_ref)
    }

    pub fn set(&mut self, line: usize, instruction: Instruction) {
        self.lines[line] = Some(instruction);
    }

    pub fn with_line(&self, line: usize, instruction: Instruction) -> Self {
        let mut p = self.clone();
        p.set(line, instruction);
        p
    }

    pub fn slots(&self) -> &[Option<Instruction>] {
        &self.lines
    }

    /// Defined instructions with their line numbers.
    pub fn defined(&self) -> impl Iterator<Item = (usize, &Instruction)> {
        self.lines
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| (i, w)))
    }

    pub fn display<'a>(&'a self, domain: &'a Domain) -> ProgramDisplay<'a> {
        ProgramDisplay {
            program: self,
            domain,
        }
    }
}

pub struct ProgramDisplay<'a> {
    program: &'a PlanningProgram,
    domain: &'a Domain,
}

impl fmt::Display for ProgramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.program.defined() {
            writeln!(f, "{i}. {}", w.display(self.domain))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_conditions_cover_sign_relations() {
        // (zero, carry) encodes res == 0, res > 0, res < 0
        let cases = [(true, false, 0), (false, true, 1), (false, false, -1)];
        for (zero, carry, res) in cases {
            let r: i64 = res;
            assert_eq!(FlagCondition::Zero.holds(zero, carry), r == 0);
            assert_eq!(FlagCondition::NonZero.holds(zero, carry), r != 0);
            assert_eq!(FlagCondition::Positive.holds(zero, carry), r > 0);
            assert_eq!(FlagCondition::NonPositive.holds(zero, carry), r <= 0);
            assert_eq!(FlagCondition::Negative.holds(zero, carry), r < 0);
            assert_eq!(FlagCondition::NonNegative.holds(zero, carry), r >= 0);
        }
    }

    #[test]
    fn condition_text_round_trips() {
        for c in FlagCondition::NUMERIC {
            assert_eq!(FlagCondition::parse(c.text(false)), Some(c));
        }
        for c in FlagCondition::STRIPS {
            assert_eq!(FlagCondition::parse(c.text(true)), Some(c));
        }
    }

    #[test]
    fn root_program_has_end_last() {
        let p = PlanningProgram::with_final_end(4);
        assert_eq!(p.get(3), Some(&Instruction::End));
        assert_eq!(p.defined().count(), 1);
    }
}
