//! Finite presentations and the text grammar for them.
//!
//! Native grammar: `< g1, g2, ... | w1, w2, ... >` where each word is a
//! `*`-separated product of `gen`, `gen^k` (k a nonzero signed integer) and
//! parenthesized subwords with exponents.

use crate::error::ParseError;
use crate::word::Word;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<GeneratorSymbol>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(name: &str, gens: &[&str], relators: Vec<Word>) -> Result<Self, ParseError> {
        let generators: Vec<GeneratorSymbol> = gens
            .iter()
            .enumerate()
            .map(|(index, n)| GeneratorSymbol { name: n.to_string(), index })
            .collect();
        let p = Presentation {
            name: name.to_string(),
            generators,
            relators: relators.into_iter().map(|w| crate::word::free_reduce(&w)).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        if self.generators.is_empty() {
            return Err(ParseError::EmptyGeneratorList);
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(ParseError::DuplicateGenerator { name: g.name.clone() });
            }
        }
        for r in &self.relators {
            if let Some(m) = r.max_generator() {
                if m >= self.generators.len() {
                    return Err(ParseError::UndeclaredGenerator { name: format!("#{m}") });
                }
            }
        }
        Ok(())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Render a word over this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .syllables()
            .iter()
            .map(|&(g, e)| {
                let n = &self.generators[g].name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Render in the native grammar; `parse_presentation` inverts this.
    pub fn format(&self) -> String {
        let gens: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        format!("< {} | {} >", gens.join(", "), rels.join(", "))
    }

    /// Parse a word in this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let mut lex = Lexer::new(text);
        let toks = lex.run()?;
        let mut p = Parser { toks: &toks, pos: 0, gens: &names };
        if p.peek() == Some(&TokKind::One) {
            p.pos += 1;
            p.expect_end()?;
            return Ok(Word::identity());
        }
        let w = p.word()?;
        p.expect_end()?;
        Ok(w)
    }
}

/// Parse the native grammar `< gens | relators >`.
pub fn parse_presentation(name: &str, text: &str) -> Result<Presentation, ParseError> {
    let mut lex = Lexer::new(text);
    let toks = lex.run()?;
    let mut pos = 0;
    expect(&toks, &mut pos, TokKind::Lt)?;
    let mut gen_names: Vec<String> = Vec::new();
    loop {
        match toks.get(pos) {
            Some(t) if matches!(t.kind, TokKind::Ident(_)) => {
                if let TokKind::Ident(s) = &t.kind {
                    gen_names.push(s.clone());
                }
                pos += 1;
                match toks.get(pos).map(|t| &t.kind) {
                    Some(TokKind::Comma) => pos += 1,
                    _ => break,
                }
            }
            Some(t) if t.kind == TokKind::Pipe => break,
            other => {
                let (l, c) = loc(&toks, pos, other);
                return Err(ParseError::Syntax { line: l, col: c, expected: "generator name".into() });
            }
        }
    }
    if gen_names.is_empty() {
        return Err(ParseError::EmptyGeneratorList);
    }
    expect(&toks, &mut pos, TokKind::Pipe)?;
    let names: Vec<&str> = gen_names.iter().map(|s| s.as_str()).collect();
    let mut relators = Vec::new();
    if toks.get(pos).map(|t| &t.kind) != Some(&TokKind::Gt) {
        loop {
            let mut p = Parser { toks: &toks, pos, gens: &names };
            let w = p.word()?;
            pos = p.pos;
            relators.push(w);
            match toks.get(pos).map(|t| &t.kind) {
                Some(TokKind::Comma) => pos += 1,
                _ => break,
            }
        }
    }
    expect(&toks, &mut pos, TokKind::Gt)?;
    if pos != toks.len() {
        let t = &toks[pos];
        return Err(ParseError::Syntax { line: t.line, col: t.col, expected: "end of input".into() });
    }
    let gens: Vec<&str> = gen_names.iter().map(|s| s.as_str()).collect();
    Presentation::new(name, &gens, relators)
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Ident(String),
    Int(i64),
    Lt,
    Gt,
    Pipe,
    Comma,
    Star,
    Caret,
    LParen,
    RParen,
    One,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { chars: s.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(&mut self) -> Result<Vec<Tok>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '<' => { self.bump(); out.push(Tok { kind: TokKind::Lt, line, col }); }
                '>' => { self.bump(); out.push(Tok { kind: TokKind::Gt, line, col }); }
                '|' => { self.bump(); out.push(Tok { kind: TokKind::Pipe, line, col }); }
                ',' => { self.bump(); out.push(Tok { kind: TokKind::Comma, line, col }); }
                '*' => { self.bump(); out.push(Tok { kind: TokKind::Star, line, col }); }
                '^' => { self.bump(); out.push(Tok { kind: TokKind::Caret, line, col }); }
                '(' => { self.bump(); out.push(Tok { kind: TokKind::LParen, line, col }); }
                ')' => { self.bump(); out.push(Tok { kind: TokKind::RParen, line, col }); }
                '-' | '+' => {
                    self.bump();
                    let sign: i64 = if c == '-' { -1 } else { 1 };
                    let n = self.number(line, col)?;
                    out.push(Tok { kind: TokKind::Int(sign * n), line, col });
                }
                '0'..='9' => {
                    let n = self.number(line, col)?;
                    if n == 1 && !matches!(out.last().map(|t| &t.kind), Some(TokKind::Caret)) {
                        out.push(Tok { kind: TokKind::One, line, col });
                    } else {
                        out.push(Tok { kind: TokKind::Int(n), line, col });
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push(Tok { kind: TokKind::Ident(s), line, col });
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        expected: format!("valid token, found {other:?}"),
                    })
                }
            }
        }
        Ok(out)
    }

    fn number(&mut self, line: usize, col: usize) -> Result<i64, ParseError> {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s.parse::<i64>().map_err(|_| ParseError::Syntax { line, col, expected: "integer".into() })
    }
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    gens: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn err(&self, expected: &str) -> ParseError {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => ParseError::Syntax { line: t.line, col: t.col, expected: expected.into() },
            None => ParseError::Syntax { line: 1, col: 1, expected: expected.into() },
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("end of word"))
        }
    }

    // word := term (('*')? term)*   -- `*` is required between terms
    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = self.term()?;
        while self.peek() == Some(&TokKind::Star) {
            self.pos += 1;
            let t = self.term()?;
            w = w.concat(&t);
        }
        Ok(w)
    }

    // term := factor ('^' int)?
    fn term(&mut self) -> Result<Word, ParseError> {
        let f = self.factor()?;
        if self.peek() == Some(&TokKind::Caret) {
            self.pos += 1;
            let e = match self.peek() {
                Some(TokKind::Int(n)) => {
                    let n = *n;
                    self.pos += 1;
                    n
                }
                Some(TokKind::One) => {
                    self.pos += 1;
                    1
                }
                _ => return Err(self.err("integer exponent")),
            };
            if e == 0 {
                return Err(self.err("nonzero exponent"));
            }
            let base = if e > 0 { f } else { f.inverse() };
            let mut out = Word::identity();
            for _ in 0..e.unsigned_abs() {
                out = out.concat(&base);
            }
            return Ok(out);
        }
        Ok(f)
    }

    // factor := ident | '(' word ')'
    fn factor(&mut self) -> Result<Word, ParseError> {
        match self.peek().cloned() {
            Some(TokKind::Ident(name)) => {
                self.pos += 1;
                match self.gens.iter().position(|&g| g == name) {
                    Some(i) => Ok(Word::generator(i)),
                    None => Err(ParseError::UndeclaredGenerator { name }),
                }
            }
            Some(TokKind::One) => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(TokKind::LParen) => {
                self.pos += 1;
                let w = self.word()?;
                if self.peek() != Some(&TokKind::RParen) {
                    return Err(self.err("closing parenthesis"));
                }
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err("generator or parenthesized subword")),
        }
    }
}

fn expect(toks: &[Tok], pos: &mut usize, kind: TokKind) -> Result<(), ParseError> {
    match toks.get(*pos) {
        Some(t) if t.kind == kind => {
            *pos += 1;
            Ok(())
        }
        other => {
            let (l, c) = loc(toks, *pos, other);
            Err(ParseError::Syntax { line: l, col: c, expected: format!("{kind:?}") })
        }
    }
}

fn loc(toks: &[Tok], pos: usize, t: Option<&Tok>) -> (usize, usize) {
    t.or_else(|| toks.get(pos.saturating_sub(1)))
        .map(|t| (t.line, t.col))
        .unwrap_or((1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_relator_cyclic() {
        let p = parse_presentation("C5", "< a | a^5 >").unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.relators, vec![Word::power(0, 5)]);
    }

    #[test]
    fn s3_coxeter() {
        let p = parse_presentation("S3", "< a, b | a^2, b^3, (a*b)^2 >").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators.len(), 3);
        assert_eq!(
            p.relators[2],
            Word::from_letters([(0, 1), (1, 1), (0, 1), (1, 1)])
        );
    }

    #[test]
    fn undeclared_generator() {
        let e = parse_presentation("bad", "< a, b | a^2*c >").unwrap_err();
        assert!(matches!(e, ParseError::UndeclaredGenerator { .. }));
    }

    #[test]
    fn empty_generators() {
        let e = parse_presentation("bad", "< | a >").unwrap_err();
        assert!(matches!(
            e,
            ParseError::Syntax { .. } | ParseError::EmptyGeneratorList
        ));
    }

    #[test]
    fn no_relators() {
        let p = parse_presentation("F2", "< a, b | >").unwrap();
        assert!(p.relators.is_empty());
    }

    #[test]
    fn roundtrip() {
        let p = parse_presentation("G", "< a, b | a^2*b^-3, (a*b^-1)^2 >").unwrap();
        let p2 = parse_presentation("G", &p.format()).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn negative_exponents_and_nesting() {
        let p = parse_presentation("G", "< x, y | (x*(y*x)^-2)^3 >").unwrap();
        let x = Word::generator(0);
        let y = Word::generator(1);
        let inner = y.concat(&x);
        let f = x.concat(&inner.inverse().concat(&inner.inverse()));
        let expect = f.concat(&f).concat(&f);
        assert_eq!(p.relators[0], expect);
    }

    #[test]
    fn syntax_error_location() {
        let e = parse_presentation("bad", "< a |\n a^^2 >").unwrap_err();
        match e {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
