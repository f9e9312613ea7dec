use std::fmt;

use thiserror::Error;

use super::{Atom, Formula, GeneralFormula};

/// Failure to read a formula, with the byte offset of the offending token
/// and the tokens that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: expected one of {}, found {}",
            self.offset,
            self.expected.join(", "),
            self.found
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Negation only on atoms.
    Strict,
    /// Negation on any subformula.
    General,
    /// As `General`, plus the constants `T` and `F`.
    Constants,
}

/// Parse tree shared by all modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Syntax {
    Atom(Atom),
    Top,
    Bottom,
    Not(Box<Syntax>),
    And(Box<Syntax>, Box<Syntax>),
    Or(Box<Syntax>, Box<Syntax>),
    Diamond(Box<Syntax>),
    Box(Box<Syntax>),
    ExistsR(Box<Syntax>),
    ForallR(Box<Syntax>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Diamond,
    Box,
    ExistsR,
    ForallR,
    LParen,
    RParen,
    Top,
    Bottom,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::ExistsR => "`Er`".into(),
            Tok::ForallR => "`Ar`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Top => "`T`".into(),
            Tok::Bottom => "`F`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const UNARY_START: &[&str] = &["atom", "!", "<>", "[]", "Er", "Ar", "("];

fn lex(text: &str, mode: Mode) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let pair = |i: usize, second: u8, tok: Tok, what: &'static str| {
        if bytes.get(i + 1) == Some(&second) {
            Ok(tok)
        } else {
            Err(ParseError {
                offset: i + 1,
                expected: vec![what],
                found: describe_at(text, i + 1),
            })
        }
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' => pair(i, b'>', Tok::Diamond, ">")?,
            b'[' => pair(i, b']', Tok::Box, "]")?,
            b'E' => pair(i, b'r', Tok::ExistsR, "r")?,
            b'A' => pair(i, b'r', Tok::ForallR, "r")?,
            b'T' if mode == Mode::Constants => Tok::Top,
            b'F' if mode == Mode::Constants => Tok::Bottom,
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let name = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Atom(name)));
                continue;
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: UNARY_START.to_vec(),
                    found: describe_at(text, i),
                })
            }
        };
        i += match tok {
            Tok::Diamond | Tok::Box | Tok::ExistsR | Tok::ForallR => 2,
            _ => 1,
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn describe_at(text: &str, offset: usize) -> String {
    match text[offset.min(text.len())..].chars().next() {
        Some(c) => format!("`{c}`"),
        None => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            expected: expected.to_vec(),
            found: tok.describe(),
        }
    }

    fn form(&mut self) -> Result<Syntax, ParseError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Or {
            self.pos += 1;
            let right = self.and()?;
            left = Syntax::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Syntax, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.pos += 1;
            let right = self.unary()?;
            left = Syntax::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Syntax, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Atom(name) => {
                self.pos += 1;
                Ok(Syntax::Atom(Atom::new(&name).expect("lexer yields valid atoms")))
            }
            Tok::Top => {
                self.pos += 1;
                Ok(Syntax::Top)
            }
            Tok::Bottom => {
                self.pos += 1;
                Ok(Syntax::Bottom)
            }
            Tok::Not => {
                self.pos += 1;
                if self.mode == Mode::Strict {
                    match self.peek().clone() {
                        Tok::Atom(name) => {
                            self.pos += 1;
                            let atom = Atom::new(&name).expect("lexer yields valid atoms");
                            Ok(Syntax::Not(Box::new(Syntax::Atom(atom))))
                        }
                        _ => Err(self.error(&["atom"])),
                    }
                } else {
                    Ok(Syntax::Not(Box::new(self.unary()?)))
                }
            }
            Tok::Diamond => {
                self.pos += 1;
                Ok(Syntax::Diamond(Box::new(self.unary()?)))
            }
            Tok::Box => {
                self.pos += 1;
                Ok(Syntax::Box(Box::new(self.unary()?)))
            }
            Tok::ExistsR => {
                self.pos += 1;
                Ok(Syntax::ExistsR(Box::new(self.unary()?)))
            }
            Tok::ForallR => {
                self.pos += 1;
                Ok(Syntax::ForallR(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.form()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["&", "|", ")"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                if self.mode == Mode::Constants {
                    Err(self.error(&["atom", "!", "<>", "[]", "Er", "Ar", "(", "T", "F"]))
                } else {
                    Err(self.error(UNARY_START))
                }
            }
        }
    }
}

pub(crate) fn parse_syntax(text: &str, mode: Mode) -> Result<Syntax, ParseError> {
    let toks = lex(text, mode)?;
    let mut parser = Parser { toks, pos: 0, mode };
    let tree = parser.form()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["&", "|", "end of input"]));
    }
    Ok(tree)
}

/// Parses the negation-restricted surface syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    fn lower(s: Syntax) -> Formula {
        match s {
            Syntax::Atom(a) => Formula::Atom(a),
            Syntax::Not(inner) => match *inner {
                Syntax::Atom(a) => Formula::NegAtom(a),
                _ => unreachable!("strict mode only negates atoms"),
            },
            Syntax::And(l, r) => Formula::And(Box::new(lower(*l)), Box::new(lower(*r))),
            Syntax::Or(l, r) => Formula::Or(Box::new(lower(*l)), Box::new(lower(*r))),
            Syntax::Diamond(b) => Formula::Diamond(Box::new(lower(*b))),
            Syntax::Box(b) => Formula::Box(Box::new(lower(*b))),
            Syntax::ExistsR(b) => Formula::ExistsR(Box::new(lower(*b))),
            Syntax::ForallR(b) => Formula::ForallR(Box::new(lower(*b))),
            Syntax::Top | Syntax::Bottom => unreachable!("constants are lexed only on request"),
        }
    }
    parse_syntax(text, Mode::Strict).map(lower)
}

/// Parses the same syntax but with `!` allowed in front of any subformula.
pub fn parse_general(text: &str) -> Result<GeneralFormula, ParseError> {
    fn lower(s: Syntax) -> GeneralFormula {
        use GeneralFormula as G;
        match s {
            Syntax::Atom(a) => G::Atom(a),
            Syntax::Not(b) => G::Not(Box::new(lower(*b))),
            Syntax::And(l, r) => G::And(Box::new(lower(*l)), Box::new(lower(*r))),
            Syntax::Or(l, r) => G::Or(Box::new(lower(*l)), Box::new(lower(*r))),
            Syntax::Diamond(b) => G::Diamond(Box::new(lower(*b))),
            Syntax::Box(b) => G::Box(Box::new(lower(*b))),
            Syntax::ExistsR(b) => G::ExistsR(Box::new(lower(*b))),
            Syntax::ForallR(b) => G::ForallR(Box::new(lower(*b))),
            Syntax::Top | Syntax::Bottom => unreachable!("constants are lexed only on request"),
        }
    }
    parse_syntax(text, Mode::General).map(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_grammar_examples() {
        assert_eq!(
            parse("p & !p").unwrap(),
            Formula::and(Formula::atom("p"), Formula::neg_atom("p"))
        );
        assert_eq!(
            parse("Er <> p").unwrap(),
            Formula::exists_r(Formula::diamond(Formula::atom("p")))
        );
    }

    #[test]
    fn incomplete_input_reports_end_offset() {
        let err = parse("p &").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"atom"));
    }

    #[test]
    fn precedence() {
        let f = parse("<>p & q | r").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::and(Formula::diamond(Formula::atom("p")), Formula::atom("q")),
                Formula::atom("r")
            )
        );
        // unary operators take a unary operand, not a conjunction
        assert_eq!(
            parse("Er p & q").unwrap(),
            Formula::and(Formula::exists_r(Formula::atom("p")), Formula::atom("q"))
        );
        assert_eq!(parse("p&q&r").unwrap(), parse("(p & q) & r").unwrap());
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" [ ]p").unwrap_err().offset, 2);
        assert_eq!(parse("\t[]  (p|q)\n").unwrap(), parse("[](p | q)").unwrap());
        assert_eq!(parse("Erp").unwrap(), parse("Er p").unwrap());
    }

    #[test]
    fn strict_mode_rejects_compound_negation() {
        let err = parse("!(p & q)").unwrap_err();
        assert_eq!(err.offset, 1);
        assert_eq!(err.expected, vec!["atom"]);
        assert!(parse_general("!(p & q)").is_ok());
    }

    #[test]
    fn reserved_words_and_garbage() {
        assert!(parse("Er").is_err());
        assert_eq!(parse("p ) q").unwrap_err().offset, 2);
        assert_eq!(parse("p # q").unwrap_err().offset, 2);
        assert_eq!(parse("(p & q").unwrap_err().offset, 6);
        assert!(parse("T").is_err());
        assert_eq!(parse("Ar p").unwrap(), Formula::forall_r(Formula::atom("p")));
    }

    #[test]
    fn constants_mode() {
        let s = parse_syntax("<>T & []F", Mode::Constants).unwrap();
        assert_eq!(
            s,
            Syntax::And(
                Box::new(Syntax::Diamond(Box::new(Syntax::Top))),
                Box::new(Syntax::Box(Box::new(Syntax::Bottom)))
            )
        );
    }
}
