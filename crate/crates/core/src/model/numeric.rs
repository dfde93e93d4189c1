//! Builtin numeric domains: register vectors updated by pointer-addressed actions.

use super::state::WorldState;

/// Default magnitude above which a register value counts as an overflow.
pub const DEFAULT_OVERFLOW_CAP: i64 = 1 << 62;

/// Updates the registers given the pointed register indices and returns the
/// flag result, or `None` on arithmetic overflow.
pub type NumericUpdate = fn(&mut [i64], &[usize]) -> Option<i64>;

#[derive(Debug)]
pub struct NumericActionSchema {
    pub name: &'static str,
    pub arity: usize,
    /// Writes the last register of the vector in addition to pointed ones.
    pub writes_last: bool,
    pub update: NumericUpdate,
}

#[derive(Debug)]
pub struct NumericDomain {
    pub name: &'static str,
    pub schemas: &'static [NumericActionSchema],
}

impl NumericDomain {
    pub fn schema_id(&self, name: &str) -> Option<usize> {
        self.schemas.iter().position(|s| s.name == name)
    }
}

fn add(x: &mut [i64], z: &[usize]) -> Option<i64> {
    x[z[0]] = x[z[0]].checked_add(x[z[1]])?;
    Some(x[z[0]])
}

fn count(x: &mut [i64], _z: &[usize]) -> Option<i64> {
    let last = x.len() - 1;
    x[last] = x[last].checked_add(1)?;
    Some(x[last])
}

fn swap_ordered(x: &mut [i64], z: &[usize]) -> Option<i64> {
    if z[0] < z[1] {
        x.swap(z[0], z[1]);
    }
    Some(z[1] as i64 - z[0] as i64)
}

fn compare_swap(x: &mut [i64], z: &[usize]) -> Option<i64> {
    if z[0] < z[1] && x[z[0]] > x[z[1]] {
        x.swap(z[0], z[1]);
        Some(1)
    } else {
        Some(0)
    }
}

fn copy(x: &mut [i64], z: &[usize]) -> Option<i64> {
    x[z[0]] = x[z[1]];
    Some(x[z[0]])
}

fn decrement(x: &mut [i64], z: &[usize]) -> Option<i64> {
    x[z[0]] = x[z[0]].checked_sub(1)?;
    Some(x[z[0]])
}

/// `add(z1,z2)`: x[z1] += x[z2].
pub static FIBO: NumericDomain = NumericDomain {
    name: "fibo",
    schemas: &[NumericActionSchema {
        name: "add",
        arity: 2,
        writes_last: false,
        update: add,
    }],
};

/// `count()`: increments the counter kept in the last register.
pub static FIND: NumericDomain = NumericDomain {
    name: "find",
    schemas: &[NumericActionSchema {
        name: "count",
        arity: 0,
        writes_last: true,
        update: count,
    }],
};

/// `swap(z1,z2)`: exchanges x[z1] and x[z2] when z1 < z2; res = z2 - z1.
pub static REVERSE: NumericDomain = NumericDomain {
    name: "reverse",
    schemas: &[NumericActionSchema {
        name: "swap",
        arity: 2,
        writes_last: false,
        update: swap_ordered,
    }],
};

/// `cswap(z1,z2)`: exchanges x[z1] and x[z2] when z1 < z2 and they are out of order.
pub static SORTING: NumericDomain = NumericDomain {
    name: "sorting",
    schemas: &[NumericActionSchema {
        name: "cswap",
        arity: 2,
        writes_last: false,
        update: compare_swap,
    }],
};

/// `copy(z1,z2)`: x[z1] := x[z2].
pub static SELECT: NumericDomain = NumericDomain {
    name: "select",
    schemas: &[NumericActionSchema {
        name: "copy",
        arity: 2,
        writes_last: false,
        update: copy,
    }],
};

/// `add(z1,z2)` and `vdec(z1)`: x[z1] -= 1.
pub static TSUM: NumericDomain = NumericDomain {
    name: "tsum",
    schemas: &[
        NumericActionSchema {
            name: "add",
            arity: 2,
            writes_last: false,
            update: add,
        },
        NumericActionSchema {
            name: "vdec",
            arity: 1,
            writes_last: false,
            update: decrement,
        },
    ],
};

pub static NUMERIC_DOMAINS: [&NumericDomain; 6] = [&FIBO, &FIND, &REVERSE, &SORTING, &SELECT, &TSUM];

pub fn numeric_domain(name: &str) -> Option<&'static NumericDomain> {
    NUMERIC_DOMAINS.iter().copied().find(|d| d.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericInstance {
    pub name: String,
    pub registers: Vec<i64>,
    /// (register index, target value) pairs.
    pub goal: Vec<(usize, i64)>,
}

impl NumericInstance {
    pub fn new(
        name: impl Into<String>,
        registers: Vec<i64>,
        goal: Vec<(usize, i64)>,
    ) -> crate::Result<Self> {
        if registers.is_empty() {
            return Err(crate::Error::Model("numeric instance without registers".into()));
        }
        if let Some((i, _)) = goal.iter().find(|(i, _)| *i >= registers.len()) {
            return Err(crate::Error::Model(format!(
                "goal register {i} outside {} registers",
                registers.len()
            )));
        }
        Ok(NumericInstance {
            name: name.into(),
            registers,
            goal,
        })
    }

    pub fn initial_state(&self) -> WorldState {
        WorldState::Numeric(self.registers.clone())
    }

    pub fn goal_satisfied(&self, registers: &[i64]) -> bool {
        self.goal.iter().all(|&(i, v)| registers[i] == v)
    }
}

/// Applies a numeric action in place. Returns the flag result, or `None` when
/// a written register leaves `[-cap, cap]`.
pub fn apply_numeric(
    schema: &NumericActionSchema,
    registers: &mut [i64],
    pointed: &[usize],
    cap: i64,
) -> Option<i64> {
    let res = (schema.update)(registers, pointed)?;
    let within = |v: i64| v.checked_abs().is_some_and(|a| a <= cap);
    let pointed_ok = pointed.iter().all(|&i| within(registers[i]));
    let last_ok = !schema.writes_last || within(registers[registers.len() - 1]);
    (pointed_ok && last_ok).then_some(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibo_add_touches_only_target() {
        let mut x = vec![3, 5, 7];
        let res = apply_numeric(&FIBO.schemas[0], &mut x, &[0, 2], DEFAULT_OVERFLOW_CAP);
        assert_eq!(res, Some(10));
        assert_eq!(x, vec![10, 5, 7]);
    }

    #[test]
    fn overflow_is_reported() {
        let mut x = vec![DEFAULT_OVERFLOW_CAP, 1];
        assert_eq!(
            apply_numeric(&FIBO.schemas[0], &mut x, &[0, 1], DEFAULT_OVERFLOW_CAP),
            None
        );
        let mut y = vec![i64::MAX, 1];
        assert_eq!(apply_numeric(&FIBO.schemas[0], &mut y, &[0, 1], i64::MAX), None);
    }

    #[test]
    fn ordered_swap_ignores_reversed_pointers() {
        let mut x = vec![1, 2, 3];
        assert_eq!(apply_numeric(&REVERSE.schemas[0], &mut x, &[2, 0], 100), Some(-2));
        assert_eq!(x, vec![1, 2, 3]);
        assert_eq!(apply_numeric(&REVERSE.schemas[0], &mut x, &[0, 2], 100), Some(2));
        assert_eq!(x, vec![3, 2, 1]);
    }

    #[test]
    fn registry_lookup() {
        for name in ["fibo", "find", "reverse", "sorting", "select", "tsum"] {
            assert_eq!(numeric_domain(name).unwrap().name, name);
        }
        assert!(numeric_domain("gripper").is_none());
    }

    #[test]
    fn goal_index_checked() {
        assert!(NumericInstance::new("x", vec![0, 0], vec![(2, 1)]).is_err());
    }
}
