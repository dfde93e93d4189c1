use crate::error::{ParseError, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String, Position),
    List(Vec<SExpr>, Position),
}

impl SExpr {
    pub fn pos(&self) -> Position {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// Head keyword of a list, e.g. `:action` in `(:action ...)`.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, ParseError> {
        self.as_atom()
            .ok_or_else(|| ParseError::syntax(self.pos(), format!("expected {what}, found a list")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[SExpr], ParseError> {
        self.as_list().ok_or_else(|| {
            ParseError::syntax(self.pos(), format!("expected {what}, found an atom"))
        })
    }
}

/// Reads a sequence of s-expressions. Identifiers are lower-cased and `;`
/// starts a comment running to the end of the line.
pub fn parse(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut stack: Vec<(Vec<SExpr>, Position)> = Vec::new();
    let mut top: Vec<SExpr> = Vec::new();
    let mut line = 1;
    let mut column = 0;
    let mut chars = text.chars().peekable();
    let mut atom = String::new();
    let mut atom_pos = Position::default();

    fn flush(atom: &mut String, pos: Position, stack: &mut [(Vec<SExpr>, Position)], top: &mut Vec<SExpr>) {
        if atom.is_empty() {
            return;
        }
        let a = SExpr::Atom(std::mem::take(atom).to_lowercase(), pos);
        match stack.last_mut() {
            Some((items, _)) => items.push(a),
            None => top.push(a),
        }
    }

    while let Some(c) = chars.next() {
        column += 1;
        let pos = Position { line, column };
        match c {
            '\n' => {
                flush(&mut atom, atom_pos, &mut stack, &mut top);
                line += 1;
                column = 0;
            }
            ';' => {
                flush(&mut atom, atom_pos, &mut stack, &mut top);
                for d in chars.by_ref() {
                    if d == '\n' {
                        line += 1;
                        column = 0;
                        break;
                    }
                }
            }
            '(' => {
                flush(&mut atom, atom_pos, &mut stack, &mut top);
                stack.push((Vec::new(), pos));
            }
            ')' => {
                flush(&mut atom, atom_pos, &mut stack, &mut top);
                let (items, open) = stack
                    .pop()
                    .ok_or_else(|| ParseError::syntax(pos, "unbalanced ')'"))?;
                let list = SExpr::List(items, open);
                match stack.last_mut() {
                    Some((items, _)) => items.push(list),
                    None => top.push(list),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, atom_pos, &mut stack, &mut top),
            c if c.is_control() => {
                return Err(ParseError::syntax(pos, format!("unexpected character {c:?}")))
            }
            c => {
                if atom.is_empty() {
                    atom_pos = pos;
                }
                atom.push(c);
            }
        }
    }
    flush(&mut atom, atom_pos, &mut stack, &mut top);
    if let Some((_, open)) = stack.last() {
        return Err(ParseError::syntax(*open, "unclosed '('"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let e = parse("(a (B c) ; note\n d)").unwrap();
        assert_eq!(e.len(), 1);
        let items = e[0].as_list().unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items[1].as_list().unwrap()[0].as_atom(), Some("b"));
        assert_eq!(items[2].pos(), Position { line: 2, column: 2 });
    }

    #[test]
    fn unbalanced_reports_position() {
        let err = parse("(a\n (b)").unwrap_err();
        assert_eq!(err.position(), Position { line: 1, column: 1 });
        assert!(parse("a)").is_err());
    }
}
