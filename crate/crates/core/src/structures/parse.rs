use std::fmt::Write as _;

use super::{Signature, Structure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(usize),
    Punct(char),
    End,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

const OPERATOR_CHARS: &str = "<>~+*/^@%-";

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.pos)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// Next token with its starting line and column.
    fn next(&mut self) -> Result<(Tok, usize, usize)> {
        self.skip_blank();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else {
            return Ok((Tok::End, line, col));
        };
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                s.push(d);
                self.bump();
            }
            let n = s.parse().map_err(|_| syntax(line, col, "number too large"))?;
            return Ok((Tok::Num(n), line, col));
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(d) = self.peek().filter(|d| d.is_alphanumeric() || *d == '_' || *d == '\'') {
                s.push(d);
                self.bump();
            }
            return Ok((Tok::Word(s), line, col));
        }
        if OPERATOR_CHARS.contains(c) {
            let mut s = String::new();
            while let Some(d) = self.peek().filter(|d| OPERATOR_CHARS.contains(*d)) {
                s.push(d);
                self.bump();
            }
            return Ok((Tok::Word(s), line, col));
        }
        if ";:(),={}".contains(c) {
            self.bump();
            return Ok((Tok::Punct(c), line, col));
        }
        Err(syntax(line, col, &format!("unexpected character `{c}`")))
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser {
    lex: Lexer,
    tok: Tok,
    line: usize,
    col: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut lex = Lexer::new(src);
        let (tok, line, col) = lex.next()?;
        Ok(Parser { lex, tok, line, col })
    }

    fn advance(&mut self) -> Result<Tok> {
        let (tok, line, col) = self.lex.next()?;
        self.line = line;
        self.col = col;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn err(&self, message: &str) -> Error {
        syntax(self.line, self.col, message)
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.tok == Tok::Punct(c) {
            self.advance()?;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match &self.tok {
            Tok::Word(w) if w == kw => {
                self.advance()?;
                Ok(())
            }
            _ => Err(self.err(&format!("expected `{kw}`"))),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.advance()? {
            Tok::Word(w) => Ok(w),
            _ => Err(self.err("expected a name")),
        }
    }

    fn number(&mut self) -> Result<usize> {
        match &self.tok {
            Tok::Num(n) => {
                let n = *n;
                self.advance()?;
                Ok(n)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.tok, Tok::Word(w) if w == kw)
    }

    fn structure(&mut self) -> Result<Structure> {
        self.expect_keyword("signature")?;
        let mut rels = Vec::new();
        let mut consts = Vec::new();
        loop {
            if self.is_keyword("rel") {
                self.advance()?;
                let name = self.name()?;
                let arity = self.number()?;
                self.expect_punct(';')?;
                rels.push((name, arity));
            } else if self.is_keyword("const") {
                self.advance()?;
                let name = self.name()?;
                self.expect_punct(';')?;
                consts.push(name);
            } else {
                break;
            }
        }
        let (sig_line, sig_col) = (self.line, self.col);
        let sig = Signature::new(rels, consts).map_err(|e| syntax(sig_line, sig_col, &e.to_string()))?;
        self.expect_keyword("universe")?;
        let size = self.number()?;
        let mut s = Structure::empty(sig, size).map_err(|e| self.err(&e.to_string()))?;
        let mut seen_rel = vec![false; s.signature.relations.len()];
        let mut seen_const = vec![false; s.signature.constants.len()];
        while let Tok::Word(_) = &self.tok {
            let (line, col) = (self.line, self.col);
            let name = self.name()?;
            if self.tok == Tok::Punct('=') {
                self.advance()?;
                let (vl, vc) = (self.line, self.col);
                let value = self.number()?;
                let i = s
                    .signature
                    .constant_index(&name)
                    .ok_or_else(|| located(line, col, Error::UnknownSymbol(name.clone())))?;
                if std::mem::replace(&mut seen_const[i], true) {
                    return Err(syntax(line, col, &format!("constant `{name}` assigned twice")));
                }
                s.set_constant(i, value).map_err(|e| located(vl, vc, e))?;
                self.expect_punct(';')?;
                continue;
            }
            self.expect_punct(':')?;
            let rel = s
                .signature
                .relation_index(&name)
                .ok_or_else(|| located(line, col, Error::UnknownSymbol(name.clone())))?;
            if std::mem::replace(&mut seen_rel[rel], true) {
                return Err(syntax(line, col, &format!("relation `{name}` listed twice")));
            }
            while self.tok == Tok::Punct('(') {
                let (tl, tc) = (self.line, self.col);
                self.advance()?;
                let mut t = vec![self.number()?];
                while self.tok == Tok::Punct(',') {
                    self.advance()?;
                    t.push(self.number()?);
                }
                self.expect_punct(')')?;
                s.insert_at(rel, &t).map_err(|e| located(tl, tc, e))?;
                if self.tok == Tok::Punct(',') {
                    self.advance()?;
                }
            }
            self.expect_punct(';')?;
        }
        if let Some(i) = seen_const.iter().position(|&b| !b) {
            return Err(self.err(&format!("constant `{}` has no value", s.signature.constants[i])));
        }
        Ok(s)
    }
}

/// Attaches a position to a semantic error while keeping its kind in the message.
fn located(line: usize, column: usize, e: Error) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => Error::Syntax {
            line,
            column,
            message: other.to_string(),
        },
    }
}

/// Parses the textual structure format or one of the shorthands.
pub fn parse_structure(text: &str) -> Result<Structure> {
    if let Some(s) = try_shorthand(text)? {
        return Ok(s);
    }
    let mut p = Parser::new(text)?;
    let s = p.structure()?;
    if p.tok != Tok::End {
        return Err(p.err("trailing input after structure"));
    }
    Ok(s)
}

/// Like [`parse_structure`], also accepting compact shorthands such as `chain6`.
pub fn parse_structure_or_shorthand(text: &str) -> Result<Structure> {
    match shorthand(text) {
        Ok(s) => Ok(s),
        Err(_) => parse_structure(text),
    }
}

fn try_shorthand(text: &str) -> Result<Option<Structure>> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let words: Vec<&str> = body.split_whitespace().collect();
    if words.first().is_some_and(|w| SHORTHANDS.contains(w)) {
        return shorthand(body.trim()).map(Some);
    }
    Ok(None)
}

const SHORTHANDS: [&str; 6] = ["chain", "clique", "emptygraph", "tournament-cycle", "path", "cycle"];

/// Builds a named standard structure: `chain N`, `clique N`, `emptygraph N`,
/// `path N`, `cycle N` and `tournament-cycle 3`. The space may be omitted.
pub fn shorthand(text: &str) -> Result<Structure> {
    let text = text.trim().trim_end_matches(';').trim();
    let split = text
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::Invalid(format!("`{text}` is not a shorthand")))?;
    let (kind, num) = text.split_at(split);
    let kind = kind.trim().to_ascii_lowercase();
    let n: usize = num
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("`{text}` is not a shorthand")))?;
    let graph = || Structure::empty(Signature::relational([("E", 2)]).unwrap(), n);
    let mut s;
    match kind.as_str() {
        "chain" => {
            s = Structure::empty(Signature::relational([("<", 2)])?, n)?;
            for x in 0..n {
                for y in x + 1..n {
                    s.insert("<", &[x, y])?;
                }
            }
        }
        "clique" => {
            s = graph()?;
            for x in 0..n {
                for y in 0..n {
                    if x != y {
                        s.insert("E", &[x, y])?;
                    }
                }
            }
        }
        "emptygraph" => s = graph()?,
        "path" => {
            s = graph()?;
            for x in 1..n {
                s.insert("E", &[x - 1, x])?;
                s.insert("E", &[x, x - 1])?;
            }
        }
        "cycle" => {
            if n < 3 {
                return Err(Error::Invalid("cycle needs at least 3 vertices".into()));
            }
            s = graph()?;
            for x in 0..n {
                let y = (x + 1) % n;
                s.insert("E", &[x, y])?;
                s.insert("E", &[y, x])?;
            }
        }
        "tournament-cycle" => {
            if n != 3 {
                return Err(Error::Invalid("tournament-cycle is defined for 3 vertices".into()));
            }
            s = graph()?;
            for x in 0..3 {
                s.insert("E", &[x, (x + 1) % 3])?;
            }
        }
        _ => return Err(Error::Invalid(format!("unknown shorthand `{kind}`"))),
    }
    Ok(s)
}

/// Canonical text form; parsing it back yields the same structure.
pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::from("signature\n");
    for r in s.signature.relations() {
        let _ = writeln!(out, "  rel {} {};", r.name, r.arity);
    }
    for c in s.signature.constants() {
        let _ = writeln!(out, "  const {c};");
    }
    let _ = writeln!(out, "universe {}", s.size());
    for (i, r) in s.signature.relations().iter().enumerate() {
        let _ = write!(out, "  {}:", r.name);
        for t in s.tuples(i) {
            let parts: Vec<String> = t.iter().map(usize::to_string).collect();
            let _ = write!(out, " ({})", parts.join(","));
        }
        out.push_str(";\n");
    }
    for (c, v) in s.signature.constants().iter().zip(s.constants()) {
        let _ = writeln!(out, "  {c} = {v};");
    }
    out
}

/// Parses a pool file: entries `NAME = <structure>` where the structure is a
/// one-line shorthand or a `{ ... }` block in the structure format.
pub fn parse_pool(text: &str) -> Result<Vec<(String, Structure)>> {
    let mut out: Vec<(String, Structure)> = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let line = lines[i].split('#').next().unwrap_or("").trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        let (name, rest) = line
            .split_once('=')
            .ok_or_else(|| syntax(line_no, 1, "expected `NAME = structure`"))?;
        let name = name.trim().to_string();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(syntax(line_no, 1, "invalid object name"));
        }
        let rest = rest.trim();
        let structure = if let Some(body) = rest.strip_prefix('{') {
            let mut block = String::from(body);
            while !block.contains('}') {
                let next = lines
                    .get(i)
                    .ok_or_else(|| syntax(line_no, 1, "unterminated `{` block"))?;
                block.push('\n');
                block.push_str(next);
                i += 1;
            }
            let end = block.find('}').unwrap();
            if !block[end + 1..].trim().is_empty() {
                return Err(syntax(line_no, 1, "text after closing `}`"));
            }
            parse_structure(&block[..end]).map_err(|e| shift(e, line_no - 1))?
        } else {
            parse_structure_or_shorthand(rest).map_err(|e| shift(e, line_no - 1))?
        };
        if out.iter().any(|(n, _)| *n == name) {
            return Err(syntax(line_no, 1, &format!("object `{name}` defined twice")));
        }
        out.push((name, structure));
    }
    Ok(out)
}

/// Pool text that [`parse_pool`] reads back to the same entries.
pub fn serialize_pool(pool: &[(String, Structure)]) -> String {
    let mut out = String::new();
    for (name, s) in pool {
        let _ = write!(out, "{name} = {{\n{}}}\n", serialize_structure(s));
    }
    out
}

fn shift(e: Error, lines: usize) -> Error {
    match e {
        Error::Syntax { line, column, message } => Error::Syntax {
            line: line + lines,
            column,
            message,
        },
        other => Error::Syntax {
            line: lines + 1,
            column: 1,
            message: other.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_round_trip() {
        let pool = vec![
            ("P3{0,1}".to_string(), shorthand("path 3").unwrap()),
            ("E0".to_string(), shorthand("emptygraph 0").unwrap()),
        ];
        assert_eq!(parse_pool(&serialize_pool(&pool)).unwrap(), pool);
    }

    const CHAIN3: &str = "signature\n  rel < 2;\nuniverse 3\n  <: (0,1) (0,2) (1,2);\n";

    #[test]
    fn canonical_round_trip() {
        let s = parse_structure(CHAIN3).unwrap();
        assert_eq!(s, shorthand("chain 3").unwrap());
        assert_eq!(serialize_structure(&s), CHAIN3);
    }

    #[test]
    fn tuple_separators_and_comments() {
        let s = parse_structure("signature rel E 2; # graph\nuniverse 2 E: (0,1), (1,0);").unwrap();
        assert_eq!(s, shorthand("clique 2").unwrap());
    }

    #[test]
    fn constants_parse() {
        let s = parse_structure("signature rel < 2; const c; universe 2 <: (0,1); c = 1;").unwrap();
        assert_eq!(s.constant("c"), Some(1));
        let e = parse_structure("signature rel < 2; const c; universe 2 <: (0,1);").unwrap_err();
        assert!(e.to_string().contains("no value"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_structure("signature rel E 2;\nuniverse 2\n  E: (0,1,1);").unwrap_err();
        match e {
            Error::Syntax { line, column, message } => {
                assert_eq!((line, column), (3, 6));
                assert!(message.contains("arity"));
            }
            other => panic!("{other:?}"),
        }
        let e = parse_structure("signature rel E 2;\nuniverse 2\n  E: (0,5);").unwrap_err();
        assert!(e.to_string().contains("outside the universe"));
        let e = parse_structure("signature rel E 2;\nuniverse 2\n  F: (0,1);").unwrap_err();
        assert!(e.to_string().starts_with("3:3"));
    }

    #[test]
    fn shorthands() {
        assert_eq!(shorthand("chain6").unwrap().size(), 6);
        assert_eq!(shorthand("clique 3").unwrap().tuple_count(0), 6);
        assert_eq!(shorthand("emptygraph 4").unwrap().tuple_count(0), 0);
        assert_eq!(shorthand("tournament-cycle 3").unwrap().tuple_count(0), 3);
        assert!(shorthand("tournament-cycle 4").is_err());
        assert!(shorthand("widget 2").is_err());
    }

    #[test]
    fn pool_with_blocks() {
        let pool = parse_pool("a = chain 2\nb = {\n signature rel < 2;\n universe 1\n <: ;\n}\n# done\n").unwrap();
        assert_eq!(pool.len(), 2);
        assert_eq!(pool[1].1, shorthand("chain 1").unwrap());
        assert!(parse_pool("a = chain 2\na = chain 3\n").is_err());
    }
}
