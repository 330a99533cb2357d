//! Recursive-descent parser shared by all four languages.
//!
//! Precedence, tightest first: `~ <> [] ext`, `&`, `|`, `-> <->`.
//! Binder bodies extend as far to the right as possible.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{Language, SyntaxError};
use std::collections::BTreeSet;

const KEYWORDS: &[&str] = &[
    "mu", "nu", "exists", "forall", "exists2", "forall2", "existsP", "forallP", "ext", "true", "false",
];

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Set variables bound by enclosing `exists2`/`forall2` (MSO only).
    set_scope: Vec<String>,
}

/// Language hooks: constants, connectives and the language-specific
/// prefix forms (atoms, binders, modal operators).
pub trait Grammar: Sized {
    fn top() -> Self;
    fn bottom() -> Self;
    fn mk_not(a: Self) -> Self;
    fn mk_and(a: Self, b: Self) -> Self;
    fn mk_or(a: Self, b: Self) -> Self;
    fn mk_implies(a: Self, b: Self) -> Self;
    fn mk_iff(a: Self, b: Self) -> Self;
    /// Parse a form starting with the current token, or `Ok(None)` if the
    /// token cannot start one in this language.
    fn prefix(p: &mut Parser) -> Result<Option<Self>, SyntaxError>;
}

macro_rules! grammar_connectives {
    () => {
        fn top() -> Self {
            Self::True
        }
        fn bottom() -> Self {
            Self::False
        }
        fn mk_not(a: Self) -> Self {
            Self::not(a)
        }
        fn mk_and(a: Self, b: Self) -> Self {
            Self::and(a, b)
        }
        fn mk_or(a: Self, b: Self) -> Self {
            Self::or(a, b)
        }
        fn mk_implies(a: Self, b: Self) -> Self {
            Self::implies(a, b)
        }
        fn mk_iff(a: Self, b: Self) -> Self {
            Self::iff(a, b)
        }
    };
}

impl Parser {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            set_scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError::Syntax {
            line: t.line,
            col: t.col,
            found: t.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn invalid(&self, message: String) -> SyntaxError {
        let t = &self.toks[self.pos.saturating_sub(1)];
        SyntaxError::Invalid {
            line: t.line,
            col: t.col,
            message,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Some(s.as_str()),
            _ => None,
        }
    }

    /// A non-keyword identifier satisfying `ok`, described by `what` in errors.
    fn ident(&mut self, what: &str, ok: impl Fn(&str) -> bool) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && ok(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn args(&mut self) -> Result<Vec<String>, SyntaxError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.ident("a variable", |_| true)?];
        while self.eat(&Tok::Comma) {
            out.push(self.ident("a variable", |_| true)?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    pub fn parse_complete<G: Grammar>(&mut self) -> Result<G, SyntaxError> {
        let f = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
        }
        Ok(f)
    }

    pub fn expr<G: Grammar>(&mut self) -> Result<G, SyntaxError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(G::mk_implies(lhs, self.expr()?))
        } else if self.eat(&Tok::Iff) {
            Ok(G::mk_iff(lhs, self.expr()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction<G: Grammar>(&mut self) -> Result<G, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = G::mk_or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction<G: Grammar>(&mut self) -> Result<G, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = G::mk_and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    pub fn unary<G: Grammar>(&mut self) -> Result<G, SyntaxError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(G::mk_not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(G::top())
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(G::bottom())
            }
            _ => match G::prefix(self)? {
                Some(f) => Ok(f),
                None => Err(self.error(&["a formula"])),
            },
        }
    }

    fn binder_var(&mut self, what: &str, ok: impl Fn(&str) -> bool) -> Result<String, SyntaxError> {
        let v = self.ident(what, ok)?;
        self.expect(Tok::Dot)?;
        Ok(v)
    }
}

fn is_lower(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase())
}

fn is_upper(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

impl Grammar for ModalFormula {
    grammar_connectives!();

    fn prefix(p: &mut Parser) -> Result<Option<Self>, SyntaxError> {
        match p.peek().clone() {
            Tok::Diamond => {
                p.bump();
                Ok(Some(Self::diamond(p.unary()?)))
            }
            Tok::Box => {
                p.bump();
                Ok(Some(Self::boxed(p.unary()?)))
            }
            Tok::Ident(kw) if kw == "mu" || kw == "nu" => {
                p.bump();
                let x = p.binder_var("an uppercase fixpoint variable", is_upper)?;
                let body = p.expr()?;
                Ok(Some(if kw == "mu" {
                    Self::Mu(x, Box::new(body))
                } else {
                    Self::Nu(x, Box::new(body))
                }))
            }
            Tok::Ident(_) if p.keyword().is_some() => Ok(None),
            Tok::Ident(name) => {
                p.bump();
                if is_lower(&name) {
                    Ok(Some(Self::Letter(name)))
                } else if is_upper(&name) {
                    Ok(Some(Self::FixVar(name)))
                } else {
                    Err(p.invalid(format!("`{name}` is neither a letter nor a fixpoint variable")))
                }
            }
            _ => Ok(None),
        }
    }
}

fn object_equality(p: &mut Parser, first: String) -> Result<(String, String), SyntaxError> {
    p.expect(Tok::Eq)?;
    let second = p.ident("an object variable", is_lower)?;
    Ok((first, second))
}

impl Grammar for FoFormula {
    grammar_connectives!();

    fn prefix(p: &mut Parser) -> Result<Option<Self>, SyntaxError> {
        match p.peek().clone() {
            Tok::Ident(kw) if kw == "exists" && *p.peek_at(1) == Tok::LParen => {
                p.bump();
                let vars = p.args()?;
                p.expect(Tok::Dot)?;
                let mut seen = BTreeSet::new();
                for v in &vars {
                    if !is_lower(v) {
                        return Err(p.invalid(format!("`{v}` is not an object variable")));
                    }
                    if !seen.insert(v) {
                        return Err(p.invalid(format!("variable `{v}` repeated in polyadic quantifier")));
                    }
                }
                Ok(Some(Self::PolyExists(vars, Box::new(p.expr()?))))
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                p.bump();
                let x = p.binder_var("an object variable", is_lower)?;
                let body = Box::new(p.expr()?);
                Ok(Some(if kw == "exists" {
                    Self::Exists(x, body)
                } else {
                    Self::Forall(x, body)
                }))
            }
            Tok::Ident(kw) if kw == "ext" => {
                p.bump();
                Ok(Some(Self::ext(p.unary()?)))
            }
            Tok::Ident(_) if p.keyword().is_some() => Ok(None),
            Tok::Ident(name) if is_upper(&name) => {
                p.bump();
                let args = p.args()?;
                if let Some(bad) = args.iter().find(|a| !is_lower(a)) {
                    return Err(p.invalid(format!("`{bad}` is not an object variable")));
                }
                Ok(Some(Self::Pred(name, args)))
            }
            Tok::Ident(name) if is_lower(&name) => {
                p.bump();
                let (x, y) = object_equality(p, name)?;
                Ok(Some(Self::Eq(x, y)))
            }
            _ => Ok(None),
        }
    }
}

impl Grammar for MsoFormula {
    grammar_connectives!();

    fn prefix(p: &mut Parser) -> Result<Option<Self>, SyntaxError> {
        match p.peek().clone() {
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                p.bump();
                let x = p.binder_var("an object variable", is_lower)?;
                let body = Box::new(p.expr()?);
                Ok(Some(if kw == "exists" {
                    Self::Exists(x, body)
                } else {
                    Self::Forall(x, body)
                }))
            }
            Tok::Ident(kw) if kw == "exists2" || kw == "forall2" => {
                p.bump();
                let x = p.binder_var("an uppercase set variable", is_upper)?;
                p.set_scope.push(x.clone());
                let body = p.expr();
                p.set_scope.pop();
                let body = Box::new(body?);
                Ok(Some(if kw == "exists2" {
                    Self::ExistsSet(x, body)
                } else {
                    Self::ForallSet(x, body)
                }))
            }
            Tok::Ident(_) if p.keyword().is_some() => Ok(None),
            Tok::Ident(name) if is_upper(&name) => {
                p.bump();
                let args = p.args()?;
                if let Some(bad) = args.iter().find(|a| !is_lower(a)) {
                    return Err(p.invalid(format!("`{bad}` is not an object variable")));
                }
                if p.set_scope.contains(&name) {
                    if args.len() != 1 {
                        return Err(p.invalid(format!("set variable `{name}` takes exactly one argument")));
                    }
                    Ok(Some(Self::SetAtom(name, args.into_iter().next().unwrap())))
                } else {
                    Ok(Some(Self::Pred(name, args)))
                }
            }
            Tok::Ident(name) if is_lower(&name) => {
                p.bump();
                let (x, y) = object_equality(p, name)?;
                Ok(Some(Self::Eq(x, y)))
            }
            _ => Ok(None),
        }
    }
}

impl Grammar for TwoSortedFormula {
    grammar_connectives!();

    fn prefix(p: &mut Parser) -> Result<Option<Self>, SyntaxError> {
        let tok = p.toks[p.pos].clone();
        match tok.tok {
            Tok::Ident(kw) if ["exists", "forall", "existsP", "forallP"].contains(&kw.as_str()) => {
                p.bump();
                let sort = if kw.ends_with('P') {
                    Sort::Predicate
                } else {
                    Sort::Object
                };
                let x = p.binder_var(
                    if sort == Sort::Object {
                        "an object variable"
                    } else {
                        "a predicate variable (starting with `P`)"
                    },
                    |s| Sort::of(s) == Some(sort),
                )?;
                let body = Box::new(p.expr()?);
                Ok(Some(if kw.starts_with("exists") {
                    Self::Exists(sort, x, body)
                } else {
                    Self::Forall(sort, x, body)
                }))
            }
            Tok::Ident(_) if p.keyword().is_some() => Ok(None),
            Tok::Ident(name) if *p.peek_at(1) == Tok::LParen => {
                p.bump();
                let args = p.args()?;
                if name == "E" {
                    if args.len() != 2
                        || Sort::of(&args[0]) != Some(Sort::Object)
                        || Sort::of(&args[1]) != Some(Sort::Predicate)
                    {
                        return Err(p.invalid("`E` takes an object variable and a predicate variable".into()));
                    }
                    let mut it = args.into_iter();
                    return Ok(Some(Self::Member(it.next().unwrap(), it.next().unwrap())));
                }
                if !is_upper(&name) {
                    return Err(p.invalid(format!("predicate `{name}` must be uppercase")));
                }
                if let Some(bad) = args.iter().find(|a| Sort::of(a) != Some(Sort::Object)) {
                    return Err(p.invalid(format!("`{bad}` is not an object variable")));
                }
                Ok(Some(Self::Pred(name, args)))
            }
            Tok::Ident(name) => {
                p.bump();
                let sort = Sort::of(&name).ok_or(SyntaxError::UnknownSort {
                    name: name.clone(),
                    line: tok.line,
                    col: tok.col,
                })?;
                p.expect(Tok::Eq)?;
                let rhs_tok = p.toks[p.pos].clone();
                let rhs = p.ident("a variable", |_| true)?;
                match Sort::of(&rhs) {
                    Some(s) if s == sort => Ok(Some(Self::Eq(sort, name, rhs))),
                    Some(_) => Err(p.invalid(format!("equality between `{name}` and `{rhs}` mixes sorts"))),
                    None => Err(SyntaxError::UnknownSort {
                        name: rhs,
                        line: rhs_tok.line,
                        col: rhs_tok.col,
                    }),
                }
            }
            _ => Ok(None),
        }
    }
}

pub fn parse_as<G: Grammar>(text: &str) -> Result<G, SyntaxError> {
    Parser::new(text)?.parse_complete()
}

pub fn parse(language: Language, text: &str) -> Result<Formula, SyntaxError> {
    Ok(match language {
        Language::Modal => Formula::Modal(super::parse_modal(text)?),
        Language::Fol => Formula::Fol(super::parse_fol(text)?),
        Language::Mso => Formula::Mso(super::parse_mso(text)?),
        Language::TwoSorted => Formula::TwoSorted(super::parse_two_sorted(text)?),
    })
}
