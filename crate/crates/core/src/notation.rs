//! Text syntax for words and commutator expressions.
//!
//! ```text
//! expr   := factor+
//! factor := IDENT ('^' INT)?
//!         | '[' expr ',' expr ']' ('^' INT)?
//!         | '(' expr ')' ('^' INT)?
//! ```
//!
//! Whitespace is insignificant except as a separator between identifiers.
//! `[a, b]` expands to `a b a^-1 b^-1`; exponents expand by repetition. The
//! printer never folds exponents, so `print` output parses back to the same
//! letter sequence.

use std::sync::Arc;

use thiserror::Error;

use crate::word::{Alphabet, Letter, Word};

/// Nesting bound for brackets and parentheses.
pub const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen { gen: usize, exp: i64 },
    Bracket(Box<Expr>, Box<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("exponent must be nonzero")]
    ZeroExponent,
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("nesting deeper than {MAX_NESTING}")]
    TooDeep,
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Caret,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'^' => out.push((start, Tok::Caret)),
            b'[' => out.push((start, Tok::LBracket)),
            b']' => out.push((start, Tok::RBracket)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b',' => out.push((start, Tok::Comma)),
            b'-' | b'+' | b'0'..=b'9' => {
                let neg = c == b'-';
                if c == b'-' || c == b'+' {
                    i += 1;
                }
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits == i {
                    return Err(ParseError { offset: i, kind: ParseErrorKind::Expected("digits") });
                }
                let value: i64 = text[digits..i]
                    .parse()
                    .map_err(|_| ParseError { offset: start, kind: ParseErrorKind::ExponentOverflow })?;
                out.push((start, Tok::Int(if neg { -value } else { value })));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError { offset: start, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), kind })
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => self.err(ParseErrorKind::Expected(what)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::LBracket | Tok::LParen))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if !self.starts_factor() {
            return match self.peek() {
                None => self.err(ParseErrorKind::UnexpectedEnd),
                Some(_) => self.err(ParseErrorKind::Expected("generator, `[` or `(`")),
            };
        }
        let mut factors = Vec::new();
        while self.starts_factor() {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn exponent(&mut self) -> Result<Option<i64>, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Int(0)) => self.err(ParseErrorKind::ZeroExponent),
            Some(&Tok::Int(v)) => {
                self.pos += 1;
                Ok(Some(v))
            }
            Some(_) => self.err(ParseErrorKind::Expected("integer exponent")),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn nested(&mut self, close: Tok, bracket: bool) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err(ParseErrorKind::TooDeep);
        }
        self.pos += 1;
        let inner = if bracket {
            let left = self.expr()?;
            self.expect(Tok::Comma, "`,`")?;
            let right = self.expr()?;
            Expr::Bracket(Box::new(left), Box::new(right))
        } else {
            self.expr()?
        };
        self.expect(close, if bracket { "`]`" } else { "`)`" })?;
        self.depth -= 1;
        Ok(match self.exponent()? {
            None | Some(1) => inner,
            Some(e) => Expr::Power(Box::new(inner), e),
        })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let Some(gen) = self.alphabet.index_of(&name) else {
                    return self.err(ParseErrorKind::UnknownGenerator(name));
                };
                self.pos += 1;
                let exp = self.exponent()?.unwrap_or(1);
                Ok(Expr::Gen { gen, exp })
            }
            Some(Tok::LBracket) => self.nested(Tok::RBracket, true),
            Some(Tok::LParen) => self.nested(Tok::RParen, false),
            Some(_) => self.err(ParseErrorKind::Expected("generator, `[` or `(`")),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }
}

/// Parse `text` against a fixed alphabet.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError { offset: 0, kind: ParseErrorKind::Empty });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), alphabet, depth: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        let kind = match p.peek() {
            Some(Tok::RBracket) | Some(Tok::RParen) | Some(Tok::Comma) => {
                ParseErrorKind::UnexpectedChar(text[p.offset()..].chars().next().unwrap())
            }
            _ => ParseErrorKind::Expected("end of input"),
        };
        return p.err(kind);
    }
    Ok(e)
}

/// Parse with an alphabet made of the identifiers in `text`, in order of
/// first appearance.
pub fn parse_inferring_alphabet(text: &str) -> Result<(Arc<Alphabet>, Expr), ParseError> {
    let mut names: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(n) = t {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    let alphabet = Alphabet::new(names).expect("identifiers from the tokenizer are valid");
    let e = parse(text, &alphabet)?;
    Ok((alphabet, e))
}

/// Expand brackets and exponents into a literal letter sequence.
pub fn flatten(e: &Expr, alphabet: Arc<Alphabet>) -> Word {
    let mut out = Vec::new();
    flatten_into(e, &mut out);
    Word::from_letters_unchecked(alphabet, out)
}

fn flatten_into(e: &Expr, out: &mut Vec<Letter>) {
    match e {
        Expr::Gen { gen, exp } => {
            let l = Letter::with_sign(*gen, exp.signum() as i32);
            out.extend(std::iter::repeat(l).take(exp.unsigned_abs() as usize));
        }
        Expr::Product(fs) => fs.iter().for_each(|f| flatten_into(f, out)),
        Expr::Bracket(a, b) => {
            let mut u = Vec::new();
            flatten_into(a, &mut u);
            let mut v = Vec::new();
            flatten_into(b, &mut v);
            out.extend_from_slice(&u);
            out.extend_from_slice(&v);
            out.extend(u.iter().rev().map(|l| l.inv()));
            out.extend(v.iter().rev().map(|l| l.inv()));
        }
        Expr::Power(inner, k) => {
            let mut u = Vec::new();
            flatten_into(inner, &mut u);
            if *k < 0 {
                u = u.iter().rev().map(|l| l.inv()).collect();
            }
            for _ in 0..k.unsigned_abs() {
                out.extend_from_slice(&u);
            }
        }
    }
}

/// Number of letters `flatten` would produce, saturating.
pub fn flat_len(e: &Expr) -> u128 {
    match e {
        Expr::Gen { exp, .. } => exp.unsigned_abs() as u128,
        Expr::Product(fs) => fs.iter().fold(0u128, |acc, f| acc.saturating_add(flat_len(f))),
        Expr::Bracket(a, b) => flat_len(a).saturating_add(flat_len(b)).saturating_mul(2),
        Expr::Power(inner, k) => flat_len(inner).saturating_mul(k.unsigned_abs() as u128),
    }
}

/// Letter-faithful text form: `x y x^-1`.
pub fn print(w: &Word) -> String {
    print_letters(w.alphabet(), w.letters())
}

pub(crate) fn print_letters(alphabet: &Alphabet, letters: &[Letter]) -> String {
    let mut s = String::new();
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&print_letter(alphabet, *l));
    }
    s
}

pub(crate) fn print_letter(alphabet: &Alphabet, l: Letter) -> String {
    if l.inverse {
        format!("{}^-1", alphabet.name(l.gen))
    } else {
        alphabet.name(l.gen).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Arc<Alphabet> {
        Alphabet::new(["x", "y"]).unwrap()
    }

    fn gen(g: usize, e: i64) -> Expr {
        Expr::Gen { gen: g, exp: e }
    }

    /// Expansion written directly from the bracket convention, on strings.
    fn oracle(e: &Expr, names: &[&str]) -> Vec<String> {
        fn inv(v: &[String]) -> Vec<String> {
            v.iter()
                .rev()
                .map(|s| s.strip_suffix("^-1").map(str::to_string).unwrap_or(format!("{s}^-1")))
                .collect()
        }
        match e {
            Expr::Gen { gen, exp } => {
                let base = names[*gen].to_string();
                let one = if *exp < 0 { format!("{base}^-1") } else { base };
                vec![one; exp.unsigned_abs() as usize]
            }
            Expr::Product(fs) => fs.iter().flat_map(|f| oracle(f, names)).collect(),
            Expr::Bracket(a, b) => {
                let (u, v) = (oracle(a, names), oracle(b, names));
                [u.clone(), v.clone(), inv(&u), inv(&v)].concat()
            }
            Expr::Power(x, k) => {
                let u = oracle(x, names);
                let u = if *k < 0 { inv(&u) } else { u };
                (0..k.unsigned_abs()).flat_map(|_| u.clone()).collect()
            }
        }
    }

    #[test]
    fn parses_nested_bracket() {
        let e = parse("[[x,y],y^-1]", &xy()).unwrap();
        let expected =
            Expr::Bracket(Box::new(Expr::Bracket(Box::new(gen(0, 1)), Box::new(gen(1, 1)))), Box::new(gen(1, -1)));
        assert_eq!(e, expected);
        assert_eq!(parse("x", &xy()).unwrap(), gen(0, 1));
    }

    #[test]
    fn unbalanced_bracket_offset() {
        let err = parse("[x,y", &xy()).unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn rejects_zero_exponent_and_unknown_names() {
        assert_eq!(parse("x^0", &xy()).unwrap_err().kind, ParseErrorKind::ZeroExponent);
        let err = parse("x z", &xy()).unwrap_err();
        assert_eq!((err.offset, err.kind), (2, ParseErrorKind::UnknownGenerator("z".into())));
        assert_eq!(parse("  ", &xy()).unwrap_err().kind, ParseErrorKind::Empty);
        assert!(parse("x]", &xy()).is_err());
        assert!(parse("[x]", &xy()).is_err());
    }

    #[test]
    fn flatten_examples() {
        let a = xy();
        let w = flatten(&parse("[x,y]", &a).unwrap(), a.clone());
        assert_eq!(print(&w), "x y x^-1 y^-1");
        let e = parse("[[x,y],y^-1]", &a).unwrap();
        let w = flatten(&e, a.clone());
        assert_eq!(w.len(), 10);
        assert_eq!(print(&w), "x y x^-1 y^-1 y^-1 y x y^-1 x^-1 y");
        assert_eq!(print(&w).split(' ').collect::<Vec<_>>(), oracle(&e, &["x", "y"]));
        assert_eq!(flat_len(&e), 10);
    }

    #[test]
    fn bracket_exponent_is_inverse() {
        let a = xy();
        let w = flatten(&parse("[x,y]^-1", &a).unwrap(), a.clone());
        assert_eq!(print(&w), "y x y^-1 x^-1");
        let direct = flatten(&parse("[x,y]", &a).unwrap(), a.clone()).invert();
        assert_eq!(w, direct);
        let p = flatten(&parse("(x y)^2", &a).unwrap(), a);
        assert_eq!(print(&p), "x y x y");
    }

    #[test]
    fn print_examples() {
        let a = xy();
        let w = Word::new(a.clone(), vec![Letter::pos(0), Letter::pos(1), Letter::neg(0)]).unwrap();
        assert_eq!(print(&w), "x y x^-1");
        assert_eq!(print(&Word::empty(a.clone())), "");
        let xx = Word::new(a, vec![Letter::pos(0), Letter::pos(0)]).unwrap();
        assert_eq!(print(&xx), "x x");
    }

    #[test]
    fn infers_alphabet_in_order() {
        let (a, _) = parse_inferring_alphabet("[y1, x1] x1").unwrap();
        assert_eq!(a.names(), &["y1", "x1"]);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = "(".repeat(10_000);
        assert_eq!(parse(&text, &xy()).unwrap_err().kind, ParseErrorKind::TooDeep);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = (0usize..2, prop_oneof![-3i64..=-1, 1i64..=3]).prop_map(|(g, e)| gen(g, e));
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bracket(Box::new(a), Box::new(b))),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
                (inner, prop_oneof![-2i64..=-1, 2i64..=2]).prop_map(|(a, k)| Expr::Power(Box::new(a), k)),
            ]
        })
    }

    proptest! {
        #[test]
        fn flatten_matches_string_oracle(e in arb_expr()) {
            let w = flatten(&e, xy());
            let printed = print(&w);
            let got: Vec<String> =
                if printed.is_empty() { vec![] } else { printed.split(' ').map(str::to_string).collect() };
            prop_assert_eq!(got, oracle(&e, &["x", "y"]));
            prop_assert_eq!(flat_len(&e), w.len() as u128);
        }

        #[test]
        fn random_text_never_panics(s in "[xy\\[\\],()^0-9 +-]{0,40}") {
            match parse(&s, &xy()) {
                Ok(_) => {}
                Err(e) => prop_assert!(e.offset <= s.len()),
            }
        }
    }
}
