use super::{builtin, Formula, ReductSpec};
use crate::error::{Error, Result};
use crate::structures::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Name(String),
    Sym(char),
    End,
}

const OPERATOR_CHARS: &str = "<>~+*/^@%-";

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, m: String| Error::Syntax {
        line,
        column: col + 1,
        message: m,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let var = word
                .strip_prefix('x')
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                .and_then(|d| d.parse().ok());
            out.push((var.map_or(Tok::Name(word), Tok::Var), line, start + 1));
        } else if OPERATOR_CHARS.contains(c) && !(c == '@' && i + 1 < chars.len() && chars[i + 1].is_alphabetic()) {
            while i < chars.len() && OPERATOR_CHARS.contains(chars[i]) {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), line, start + 1));
        } else if "!&|=()[],@".contains(c) {
            out.push((Tok::Sym(c), line, start + 1));
            i += 1;
        } else {
            return Err(err(start, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, line, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    signature: &'a Signature,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (_, line, column) = self.toks[self.pos];
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn var(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Var(v) => {
                if v >= self.arity {
                    return Err(Error::VariableOutOfRange {
                        index: v,
                        arity: self.arity,
                    });
                }
                self.bump();
                Ok(v)
            }
            _ => Err(self.err("expected a variable `xN`")),
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Sym('|') {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Sym('&') {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Sym('!') {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn relation_atom(&mut self, name: String, args: Vec<usize>) -> Result<Formula> {
        let i = self
            .signature
            .relation_index(&name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        let expected = self.signature.relations()[i].arity;
        if expected != args.len() {
            return Err(Error::ArityMismatch {
                symbol: name,
                expected,
                found: args.len(),
            });
        }
        Ok(Formula::Atom { relation: name, args })
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let f = self.disjunction()?;
                self.expect(')')?;
                Ok(f)
            }
            Tok::Sym('@') => {
                self.bump();
                let name = match self.bump() {
                    Tok::Name(n) => n,
                    _ => return Err(self.err("expected a built-in name after `@`")),
                };
                let b = builtin::builtin(&name)?;
                if b.arity > self.arity {
                    return Err(Error::ArityMismatch {
                        symbol: name,
                        expected: b.arity,
                        found: self.arity,
                    });
                }
                b.formula.check(self.signature, self.arity)?;
                Ok(b.formula)
            }
            Tok::Name(n) if n == "parity" && *self.peek_at(1) == Tok::Sym('[') => {
                self.bump();
                self.bump();
                let mut members = Vec::new();
                if *self.peek() != Tok::Sym(']') {
                    members.push(self.disjunction()?);
                    while *self.peek() == Tok::Sym(',') {
                        self.bump();
                        members.push(self.disjunction()?);
                    }
                }
                self.expect(']')?;
                Ok(Formula::Parity(members))
            }
            Tok::Name(n) => {
                self.bump();
                self.expect('(')?;
                let mut args = Vec::new();
                if *self.peek() != Tok::Sym(')') {
                    args.push(self.var()?);
                    while *self.peek() == Tok::Sym(',') {
                        self.bump();
                        args.push(self.var()?);
                    }
                }
                self.expect(')')?;
                self.relation_atom(n, args)
            }
            Tok::Var(_) => {
                let x = self.var()?;
                match self.peek().clone() {
                    Tok::Sym('=') => {
                        self.bump();
                        let y = self.var()?;
                        Ok(Formula::Eq(x, y))
                    }
                    Tok::Name(n) => {
                        self.bump();
                        let y = self.var()?;
                        self.relation_atom(n, vec![x, y])
                    }
                    _ => Err(self.err("expected `=` or a relation name after a variable")),
                }
            }
            Tok::End => Err(self.err("unexpected end of formula")),
            t => Err(self.err(format!("unexpected token {t:?}"))),
        }
    }
}

fn parse_at(text: &str, line: usize, signature: &Signature, arity: usize) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text, line)?,
        pos: 0,
        signature,
        arity,
    };
    let f = p.disjunction()?;
    if *p.peek() != Tok::End {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

/// Parses a quantifier-free formula with free variables below `arity`.
pub fn parse_formula(text: &str, signature: &Signature, arity: usize) -> Result<Formula> {
    parse_at(text, 1, signature, arity)
}

/// Parses lines `NAME/ARITY := formula`; `#` starts a comment.
pub fn parse_reduct(text: &str, source: &Signature) -> Result<ReductSpec> {
    let mut defs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Syntax {
            line: i + 1,
            column: 1,
            message: m.to_string(),
        };
        let (head, body) = line
            .split_once(":=")
            .ok_or_else(|| bad("expected `NAME/ARITY := formula`"))?;
        let (name, arity) = head
            .trim()
            .rsplit_once('/')
            .ok_or_else(|| bad("expected `NAME/ARITY`"))?;
        let arity: usize = arity.trim().parse().map_err(|_| bad("arity must be a number"))?;
        let name = name.trim().to_string();
        if name.is_empty() {
            return Err(bad("missing relation name"));
        }
        let offset = line.find(":=").unwrap() + 2;
        let f = parse_at(body, i + 1, source, arity).map_err(|e| match e {
            Error::Syntax { line, column, message } => Error::Syntax {
                line,
                column: column + offset,
                message,
            },
            other => other,
        })?;
        defs.push((name, arity, f));
    }
    ReductSpec::new(source.clone(), defs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::relational([("<", 2), ("E", 2), ("R", 3)]).unwrap()
    }

    #[test]
    fn precedence_and_sugar() {
        let f = parse_formula("x0<x1 & x1<x2 | !E(x0,x2)", &sig(), 3).unwrap();
        assert_eq!(
            f,
            Formula::Or(vec![
                Formula::And(vec![Formula::atom("<", &[0, 1]), Formula::atom("<", &[1, 2])]),
                Formula::not(Formula::atom("E", &[0, 2])),
            ])
        );
        let g = parse_formula("x0 E x1", &sig(), 2).unwrap();
        assert_eq!(g, Formula::atom("E", &[0, 1]));
    }

    #[test]
    fn parity_and_equality() {
        let f = parse_formula("parity[E(x0,x1), x0 = x1, R(x0,x1,x1)]", &sig(), 2).unwrap();
        assert!(matches!(f, Formula::Parity(ref v) if v.len() == 3));
        assert_eq!(parse_formula("parity[]", &sig(), 0).unwrap(), Formula::Parity(vec![]));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_formula("F(x0)", &sig(), 1),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_formula("R(x0,x1)", &sig(), 2),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_formula("x0 < x3", &sig(), 2),
            Err(Error::VariableOutOfRange { .. })
        ));
        assert!(matches!(
            parse_formula("exists x0", &sig(), 2),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("(x0 = x1", &sig(), 2),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn builtin_macro() {
        let chain = Signature::relational([("<", 2)]).unwrap();
        let f = parse_formula("@Cyc", &chain, 3).unwrap();
        assert_eq!(f, builtin::builtin("Cyc").unwrap().formula);
    }

    #[test]
    fn reduct_file() {
        let chain = Signature::relational([("<", 2)]).unwrap();
        let spec = parse_reduct(
            "# cyclic\nCyc/3 := @Cyc\nB/3 := x0<x1 & x1<x2 | x2<x1 & x1<x0\n",
            &chain,
        )
        .unwrap();
        assert_eq!(spec.target().relations().len(), 2);
        let e = parse_reduct("C/2 := x0 < x5", &chain).unwrap_err();
        assert!(matches!(e, Error::VariableOutOfRange { index: 5, arity: 2 }));
        assert!(parse_reduct("C := x0 < x1", &chain).is_err());
    }
}
