//! Concrete syntax.
//!
//! Types: `bot`, identifiers (declared atoms parse as atomic constants, any
//! other identifier starting with an uppercase letter is a type variable),
//! `->` right-associative, `~T` sugar for `T -> bot`, parentheses.
//!
//! Terms: `\x:T. M`, `mu a:T. M` (binding `a` at type `~T`), `[a] M`,
//! juxtaposition for application (left-associative), parentheses. Binders
//! extend maximally to the right. λ- and μ-variables share one lexical shape
//! but live in disjoint namespaces; the parser rejects a term that uses one
//! identifier in both, and rejects a binder that shadows one in scope.
//!
//! Equation files: `atom A B C` declarations, one `X = <type>` equation per
//! line, `#` comments. Context files: `x : T` for λ-variables and `a : ~T`
//! for μ-variables (declaring `a : ~T`); a λ-variable at a negated type is
//! written with the arrow spelled out, `x : T -> bot`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::system::EquationSystem;
use super::term::Term;
use super::ty::Type;
use super::AtomSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    KwMu,
    KwBot,
    KwAtom,
    Backslash,
    Dot,
    Colon,
    Arrow,
    Tilde,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "`{x}`"),
            Tok::KwMu => "`mu`",
            Tok::KwBot => "`bot`",
            Tok::KwAtom => "`atom`",
            Tok::Backslash => "`\\`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Arrow => "`->`",
            Tok::Tilde => "`~`",
            Tok::Eq => "`=`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, start_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lno, line) in src.lines().enumerate() {
        let line_no = start_line + lno;
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            let col = i + 1;
            match c {
                '#' => break, // comment to end of line
                c if c.is_whitespace() => {
                    chars.next();
                }
                '(' | ')' | '[' | ']' | '.' | ':' | '~' | '=' | '\\' => {
                    chars.next();
                    let tok = match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        '.' => Tok::Dot,
                        ':' => Tok::Colon,
                        '~' => Tok::Tilde,
                        '=' => Tok::Eq,
                        _ => Tok::Backslash,
                    };
                    out.push(Token {
                        tok,
                        line: line_no,
                        col,
                    });
                }
                '-' => {
                    chars.next();
                    match chars.peek() {
                        Some(&(_, '>')) => {
                            chars.next();
                            out.push(Token {
                                tok: Tok::Arrow,
                                line: line_no,
                                col,
                            });
                        }
                        _ => {
                            return Err(ParseError {
                                line: line_no,
                                col,
                                msg: "expected `->`".into(),
                            })
                        }
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            name.push(c);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let tok = match name.as_str() {
                        "mu" => Tok::KwMu,
                        "bot" => Tok::KwBot,
                        "atom" => Tok::KwAtom,
                        _ => Tok::Ident(name),
                    };
                    out.push(Token {
                        tok,
                        line: line_no,
                        col,
                    });
                }
                _ => {
                    return Err(ParseError {
                        line: line_no,
                        col,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    atoms: &'a AtomSet,
    end_line: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &str, atoms: &'a AtomSet, start_line: usize) -> Result<Parser<'a>, ParseError> {
        let tokens = lex(src, start_line)?;
        let end_line = start_line + src.lines().count().saturating_sub(1);
        Ok(Parser {
            tokens,
            pos: 0,
            atoms,
            end_line,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => match self.tokens.last() {
                Some(t) => (t.line, t.col + 1),
                None => (self.end_line, 1),
            },
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.next();
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected {tok}, found {t}"))
            }
            None => self.err(format!("expected {tok}, found end of input")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Token {
                    tok: Tok::Ident(x), ..
                }) = self.next()
                else {
                    unreachable!()
                };
                Ok(x)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected {what}, found {t}"))
            }
            None => self.err(format!("expected {what}, found end of input")),
        }
    }

    fn eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => {
                let t = t.clone();
                self.err(format!("unexpected {t} after the end of the expression"))
            }
        }
    }

    // Types: arrow is right-associative, `~` binds tighter than `->`.
    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_prefix()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prefix(&mut self) -> Result<Type, ParseError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.next();
            let t = self.ty_prefix()?;
            Ok(Type::neg(t))
        } else {
            self.ty_primary()
        }
    }

    fn ty_primary(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Some(Tok::KwBot) => {
                self.next();
                Ok(Type::Bottom)
            }
            Some(Tok::LParen) => {
                self.next();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                let classified = self.classify(name);
                let t = match classified {
                    Ok(t) => t,
                    Err(msg) => return self.err(msg),
                };
                self.next();
                Ok(t)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected a type, found {t}"))
            }
            None => self.err("expected a type, found end of input"),
        }
    }

    fn classify(&self, name: &str) -> Result<Type, String> {
        if self.atoms.contains(name) {
            Ok(Type::atom(name))
        } else if name.chars().next().is_some_and(|c| c.is_uppercase()) {
            Ok(Type::var(name))
        } else {
            Err(format!(
                "`{name}` is not a declared atomic constant (type variables start uppercase)"
            ))
        }
    }
}

/// Scope bookkeeping for term parsing: the two namespaces must stay
/// disjoint across the whole term and binders may not shadow.
#[derive(Default)]
struct Scopes {
    lam_in_scope: Vec<String>,
    mu_in_scope: Vec<String>,
    lam_seen: BTreeSet<String>,
    mu_seen: BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn term(&mut self, sc: &mut Scopes) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Backslash) => {
                self.next();
                let x = self.ident("a λ-variable")?;
                self.bind_check(sc, &x, true)?;
                self.expect(Tok::Colon)?;
                let ann = self.ty()?;
                self.expect(Tok::Dot)?;
                sc.lam_in_scope.push(x.clone());
                let body = self.term(sc)?;
                sc.lam_in_scope.pop();
                Ok(Term::lam(x, ann, body))
            }
            Some(Tok::KwMu) => {
                self.next();
                let a = self.ident("a μ-variable")?;
                self.bind_check(sc, &a, false)?;
                self.expect(Tok::Colon)?;
                let ann = self.ty()?;
                self.expect(Tok::Dot)?;
                sc.mu_in_scope.push(a.clone());
                let body = self.term(sc)?;
                sc.mu_in_scope.pop();
                Ok(Term::mu(a, ann, body))
            }
            Some(Tok::LBracket) => {
                self.next();
                let a = self.ident("a μ-variable")?;
                if sc.lam_seen.contains(&a) {
                    return self.err(format!("λ-variable `{a}` used in μ-variable position"));
                }
                sc.mu_seen.insert(a.clone());
                self.expect(Tok::RBracket)?;
                let body = self.term(sc)?;
                Ok(Term::name(a, body))
            }
            _ => self.app_chain(sc),
        }
    }

    fn bind_check(&self, sc: &mut Scopes, name: &str, lambda: bool) -> Result<(), ParseError> {
        let (own_scope, own_seen, other_seen) = if lambda {
            (&sc.lam_in_scope, &mut sc.lam_seen, &sc.mu_seen)
        } else {
            (&sc.mu_in_scope, &mut sc.mu_seen, &sc.lam_seen)
        };
        if own_scope.iter().any(|v| v == name) {
            return self.err(format!("binder `{name}` shadows a variable in scope"));
        }
        if other_seen.contains(name) {
            let kinds = if lambda { ("λ", "μ") } else { ("μ", "λ") };
            return self.err(format!(
                "`{name}` is used as both a {}-variable and a {}-variable",
                kinds.0, kinds.1
            ));
        }
        own_seen.insert(name.to_string());
        Ok(())
    }

    fn app_chain(&mut self, sc: &mut Scopes) -> Result<Term, ParseError> {
        let mut t = self.term_primary(sc)?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let arg = self.term_primary(sc)?;
                    t = Term::app(t, arg);
                }
                _ => return Ok(t),
            }
        }
    }

    fn term_primary(&mut self, sc: &mut Scopes) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let x = self.ident("a variable")?;
                if sc.mu_seen.contains(&x) {
                    return self.err(format!("μ-variable `{x}` used in λ-variable position"));
                }
                sc.lam_seen.insert(x.clone());
                Ok(Term::var(x))
            }
            Some(Tok::LParen) => {
                self.next();
                let t = self.term(sc)?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected a term, found {t}"))
            }
            None => self.err("expected a term, found end of input"),
        }
    }
}

/// Parses a type. `atoms` names the declared atomic constants.
pub fn parse_type(src: &str, atoms: &AtomSet) -> Result<Type, ParseError> {
    let mut p = Parser::new(src, atoms, 1)?;
    let t = p.ty()?;
    p.eof()?;
    Ok(t)
}

/// Parses a term. `atoms` names the declared atomic constants used in
/// annotations.
pub fn parse_term(src: &str, atoms: &AtomSet) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, atoms, 1)?;
    let mut sc = Scopes::default();
    let t = p.term(&mut sc)?;
    p.eof()?;
    Ok(t)
}

/// Parses an equation file: `atom` declarations and `X = <type>` lines.
pub fn parse_equations(src: &str) -> Result<EquationSystem, ParseError> {
    // atoms first, so declarations may follow their uses textually
    let mut atoms = AtomSet::new();
    for (lno, line) in src.lines().enumerate() {
        let toks = lex(line, lno + 1)?;
        if toks.first().map(|t| &t.tok) == Some(&Tok::KwAtom) {
            if toks.len() == 1 {
                return Err(ParseError {
                    line: lno + 1,
                    col: toks[0].col,
                    msg: "`atom` needs at least one name".into(),
                });
            }
            for t in &toks[1..] {
                match &t.tok {
                    Tok::Ident(name) => {
                        atoms.insert(name.clone());
                    }
                    other => {
                        return Err(ParseError {
                            line: t.line,
                            col: t.col,
                            msg: format!("expected an atom name, found {other}"),
                        })
                    }
                }
            }
        }
    }

    let mut system = EquationSystem::new();
    for a in &atoms {
        system.declare_atom(a.clone());
    }
    for (lno, line) in src.lines().enumerate() {
        let toks = lex(line, lno + 1)?;
        if toks.is_empty() || toks[0].tok == Tok::KwAtom {
            continue;
        }
        let mut p = Parser::new(line, &atoms, lno + 1)?;
        let lhs = p.ident("a type variable")?;
        if atoms.contains(&lhs) {
            return Err(ParseError {
                line: lno + 1,
                col: 1,
                msg: format!("`{lhs}` is declared as an atom and cannot head an equation"),
            });
        }
        if !lhs.chars().next().is_some_and(|c| c.is_uppercase()) {
            return Err(ParseError {
                line: lno + 1,
                col: 1,
                msg: format!("type variable `{lhs}` must start uppercase"),
            });
        }
        p.expect(Tok::Eq)?;
        let rhs = p.ty()?;
        p.eof()?;
        if let Err(e) = system.add_equation(lhs, rhs) {
            return Err(ParseError {
                line: lno + 1,
                col: 1,
                msg: e.to_string(),
            });
        }
    }
    if let Err(e) = system.validate() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: e.to_string(),
        });
    }
    Ok(system)
}

/// One declaration from a context file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtxEntry {
    /// `x : T`
    Lambda(String, Type),
    /// `a : ~T`: a μ-variable of type `~T`, carrying `T`.
    Mu(String, Type),
}

/// Parses a context file: one declaration per line, `#` comments.
pub fn parse_context_file(src: &str, atoms: &AtomSet) -> Result<Vec<CtxEntry>, ParseError> {
    let mut out = Vec::new();
    for (lno, line) in src.lines().enumerate() {
        let stripped = line.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let mut p = Parser::new(line, atoms, lno + 1)?;
        let name = p.ident("a variable")?;
        p.expect(Tok::Colon)?;
        let entry = if p.peek() == Some(&Tok::Tilde) {
            // leading `~` marks a μ-declaration; the rest is the full type
            p.next();
            let t = p.ty()?;
            CtxEntry::Mu(name, t)
        } else {
            let t = p.ty()?;
            CtxEntry::Lambda(name, t)
        };
        p.eof()?;
        out.push(entry);
    }
    Ok(out)
}
