//! Recursive-descent parser for programs, goals, terms and substitutions.
//!
//! ```text
//! program  := { rule }
//! rule     := atom [ "<" label "|" expr ] "with" weight "."
//! label    := ident | "#" ident
//! weight   := number | "#" ident
//! expr     := number | "#" ident | ["#"] ("&"|"|"|"@") ident "(" expr {"," expr} ")" | atom
//! atom     := ident [ "(" term {"," term} ")" ]
//! term     := Var | ident [ "(" term {"," term} ")" ]
//! subst    := "{" [ Var "/" term { "," Var "/" term } ] "}"
//! ```
//!
//! `%` starts a comment running to the end of the line.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Atom, Body, ConnName, Expr, Program, Rule, SymbolTable, Term, Weight};
use crate::error::{ParseError, SyntaxError};
use crate::lattice::{ConnectiveKind, TruthValue};
use crate::unify::Substitution;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    Hash,
    Amp,
    Bar,
    At,
    Lt,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Slash,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Hash => "`#`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::At => "`@`".into(),
            Tok::Lt => "`<`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '#' => Some(Tok::Hash),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '@' => Some(Tok::At),
            '<' => Some(Tok::Lt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '/' => Some(Tok::Slash),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            push(tok);
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            // A dot is a decimal point only when a digit follows; otherwise
            // it terminates the statement.
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            push(Tok::Number(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if c.is_uppercase() || c == '_' {
                push(Tok::Var(word));
            } else {
                push(Tok::Ident(word));
            }
        } else {
            return Err(ParseError {
                line,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
        col += i - start;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError::Parse(ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn number(&mut self) -> PResult<TruthValue> {
        let Tok::Number(text) = self.peek().clone() else {
            return Err(self.unexpected("a truth degree"));
        };
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("malformed number `{text}`")))?;
        let tv = TruthValue::new(value)
            .ok_or_else(|| self.error(format!("truth degree `{text}` outside [0,1]")))?;
        self.bump();
        Ok(tv)
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                let args = if *self.peek() == Tok::LParen {
                    self.paren_list(Self::term)?
                } else {
                    Vec::new()
                };
                Ok(Term::App(name, args))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn paren_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(Tok::LParen)?;
        let mut out = alloc::vec![item(self)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(item(self)?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn atom(&mut self) -> PResult<Atom> {
        let predicate = self.ident()?;
        let args = if *self.peek() == Tok::LParen {
            self.paren_list(Self::term)?
        } else {
            Vec::new()
        };
        Ok(Atom { predicate, args })
    }

    fn connective_kind(&mut self) -> Option<ConnectiveKind> {
        let kind = match self.peek() {
            Tok::Amp => ConnectiveKind::Conjunction,
            Tok::Bar => ConnectiveKind::Disjunction,
            Tok::At => ConnectiveKind::Aggregator,
            _ => return None,
        };
        self.bump();
        Some(kind)
    }

    fn implication_in_body(&self) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError::ImplicationInBody {
            line: s.line,
            column: s.column,
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Number(_) => Ok(Expr::Value(self.number()?)),
            Tok::Lt => Err(self.implication_in_body()),
            Tok::Hash => {
                if *self.peek_at(1) == Tok::Lt {
                    return Err(self.implication_in_body());
                }
                self.bump();
                match self.connective_kind() {
                    Some(kind) => {
                        let name = self.ident()?;
                        let args = self.paren_list(Self::expr)?;
                        Ok(Expr::App {
                            kind,
                            name: ConnName::Symbolic(name),
                            args,
                        })
                    }
                    None => Ok(Expr::SymValue(self.ident()?)),
                }
            }
            Tok::Amp | Tok::Bar | Tok::At => {
                let kind = self.connective_kind().expect("connective sigil");
                let name = self.ident()?;
                let args = self.paren_list(Self::expr)?;
                Ok(Expr::App {
                    kind,
                    name: ConnName::Concrete(name),
                    args,
                })
            }
            Tok::Ident(_) => Ok(Expr::Atom(self.atom()?)),
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn weight(&mut self) -> PResult<Weight> {
        if *self.peek() == Tok::Hash {
            self.bump();
            Ok(Weight::Symbolic(self.ident()?))
        } else {
            Ok(Weight::Value(self.number()?))
        }
    }

    fn keyword_with(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == "with" => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected("`with`")),
        }
    }

    fn rule(&mut self) -> PResult<Rule> {
        let head = self.atom()?;
        let body = if *self.peek() == Tok::Lt {
            self.bump();
            let implication = if *self.peek() == Tok::Hash {
                self.bump();
                ConnName::Symbolic(self.ident()?)
            } else {
                ConnName::Concrete(self.ident()?)
            };
            self.expect(Tok::Bar)?;
            let expr = self.expr()?;
            Some(Body { implication, expr })
        } else {
            None
        };
        self.keyword_with()?;
        let weight = self.weight()?;
        self.expect(Tok::Dot)?;
        Ok(Rule { head, body, weight })
    }

    fn substitution(&mut self) -> PResult<Substitution> {
        self.expect(Tok::LBrace)?;
        let mut pairs = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let Tok::Var(v) = self.peek().clone() else {
                    return Err(self.unexpected("a variable"));
                };
                self.bump();
                self.expect(Tok::Slash)?;
                let t = self.term()?;
                if pairs.iter().any(|(w, _): &(String, Term)| *w == v) {
                    return Err(self.error(format!("variable `{v}` bound twice")));
                }
                pairs.push((v, t));
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Substitution::from_pairs(pairs))
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Dot {
            self.bump();
        }
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a whole program. Fails on syntax errors, implications inside
/// bodies, and symbols used with two different sorts.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut rules = Vec::new();
    while !p.at_eof() {
        rules.push(p.rule()?);
    }
    let program = Program { rules };
    program.symbols()?;
    Ok(program)
}

/// Parses a goal expression; a trailing `.` is allowed.
pub fn parse_goal(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    let mut table = SymbolTable::default();
    e.collect_symbols(&mut table)?;
    Ok(e)
}

pub fn parse_atom(text: &str) -> Result<Atom, SyntaxError> {
    let mut p = Parser::new(text)?;
    let a = p.atom()?;
    p.finish()?;
    Ok(a)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses `{X/a, Y/f(Z)}`; `{}` is the identity.
pub fn parse_substitution(text: &str) -> Result<Substitution, SyntaxError> {
    let mut p = Parser::new(text)?;
    let s = p.substitution()?;
    p.finish()?;
    Ok(s)
}
