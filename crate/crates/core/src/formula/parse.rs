//! Text syntax:
//!
//! ```text
//! program := decl* formula
//! decl    := ("param" | "free") ident+ (";" | newline)
//! formula := ("exists" | "forall") ident "." formula | disj
//! disj    := conj ("or" conj)*
//! conj    := neg ("and" neg)*
//! neg     := "not" neg | "(" formula ")" | quantified | "true" | "false" | atom
//! atom    := term ("<=" | "<" | ">=" | ">" | "=" | "!=") term | int "|" term
//! term    := ["-"] addend (("+" | "-") addend)*
//! addend  := factor ("*" factor)*      at most one non-parameter variable
//! factor  := int | ident | "(" poly ")" with an optional "^" int on the last two
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Atom, Formula, Program, Term, VarDecl, VarId, VarKind};
use crate::arith::IntPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    newline_before: bool,
}

const SYMBOLS: [&str; 16] = [
    "<=", ">=", "!=", "<", ">", "=", "|", "+", "-", "*", "^", "(", ")", ".", ";", ",",
];

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut newline = false;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            newline = true;
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col, start) = (line, col, i);
        let tok = if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(text[s..i].parse().unwrap())
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(text[s..i].to_string())
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            i += sym.len();
            Tok::Sym(sym)
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
            });
        };
        col += i - start;
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
            newline_before: newline,
        });
        newline = false;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
        newline_before: true,
    });
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["param", "free", "exists", "forall", "and", "or", "not", "true", "false"];

/// A polynomial in the parameter times at most one variable.
struct Product {
    coeff: IntPoly,
    var: Option<VarId>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    decls: Vec<VarDecl>,
    names: HashMap<String, VarId>,
    /// Bound names currently in scope.
    scope: Vec<(String, VarId)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn program(&mut self) -> Result<Program> {
        while self.is_kw("param") || self.is_kw("free") {
            let kind = if self.is_kw("param") {
                VarKind::Parameter
            } else {
                VarKind::Free
            };
            self.bump();
            let mut any = false;
            loop {
                if self.eat_sym(";") {
                    break;
                }
                if any && self.toks[self.pos].newline_before {
                    break;
                }
                self.eat_sym(",");
                let name = self.ident()?;
                if self.names.contains_key(&name) {
                    return Err(self.error(format!("`{name}` declared twice")));
                }
                self.names.insert(name.clone(), self.decls.len());
                self.decls.push(VarDecl { name, kind });
                any = true;
            }
            if !any {
                return Err(self.error("empty declaration"));
            }
        }
        let params = self.decls.iter().filter(|d| d.kind == VarKind::Parameter).count();
        let formula = self.formula(params)?;
        self.eat_sym(";");
        if *self.peek() != Tok::Eof {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(Program {
            decls: std::mem::take(&mut self.decls),
            formula,
        })
    }

    fn formula(&mut self, params: usize) -> Result<Formula> {
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantified(params);
        }
        let mut parts = vec![self.conj(params)?];
        while self.is_kw("or") {
            self.bump();
            parts.push(self.conj(params)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn quantified(&mut self, params: usize) -> Result<Formula> {
        let forall = self.is_kw("forall");
        self.bump();
        let name = self.ident()?;
        let id = match self.names.get(&name) {
            Some(&id) if self.decls[id].kind != VarKind::Bound => {
                return Err(self.error(format!("cannot quantify declared variable `{name}`")));
            }
            Some(&id) => id,
            None => {
                self.names.insert(name.clone(), self.decls.len());
                self.decls.push(VarDecl {
                    name: name.clone(),
                    kind: VarKind::Bound,
                });
                self.decls.len() - 1
            }
        };
        self.expect_sym(".")?;
        self.scope.push((name, id));
        let body = self.formula(params);
        self.scope.pop();
        let body = Box::new(body?);
        Ok(if forall {
            Formula::Forall(id, body)
        } else {
            Formula::Exists(id, body)
        })
    }

    fn conj(&mut self, params: usize) -> Result<Formula> {
        let mut parts = vec![self.neg(params)?];
        while self.is_kw("and") {
            self.bump();
            parts.push(self.neg(params)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn neg(&mut self, params: usize) -> Result<Formula> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Formula::negate(self.neg(params)?));
        }
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantified(params);
        }
        if self.is_kw("true") {
            self.bump();
            return Ok(Formula::True);
        }
        if self.is_kw("false") {
            self.bump();
            return Ok(Formula::False);
        }
        if self.is_sym("(") {
            // either a parenthesized formula or a term starting with a parenthesis
            let (save, ndecls, names) = (self.pos, self.decls.len(), self.names.clone());
            self.bump();
            if let Ok(f) = self.formula(params) {
                if self.eat_sym(")") && !self.continues_term() {
                    return Ok(f);
                }
            }
            self.pos = save;
            self.decls.truncate(ndecls);
            self.names = names;
        }
        self.atom(params)
    }

    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Sym("<=" | ">=" | "!=" | "<" | ">" | "=" | "|" | "+" | "-" | "*" | "^")
        )
    }

    fn atom(&mut self, params: usize) -> Result<Formula> {
        if let (Tok::Int(d), Tok::Sym("|")) = (self.peek().clone(), self.peek_at(1).clone()) {
            if d.is_zero() {
                return Err(self.error("divisor must be positive"));
            }
            self.bump();
            self.bump();
            let e = self.term(params)?;
            return Ok(Formula::Atom(Atom::Div(d, e)));
        }
        let lhs = self.term(params)?;
        let op = match self.bump() {
            Tok::Sym(s @ ("<=" | ">=" | "!=" | "<" | ">" | "=")) => s,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a comparison"));
            }
        };
        let rhs = self.term(params)?;
        Ok(match op {
            "<=" => Formula::le(lhs, rhs),
            "<" => Formula::le(lhs, rhs.add_int(-1)),
            ">=" => Formula::le(rhs, lhs),
            ">" => Formula::le(rhs, lhs.add_int(-1)),
            "=" => Formula::eq(lhs, rhs),
            _ => Formula::negate(Formula::eq(lhs, rhs)),
        })
    }

    fn term(&mut self, params: usize) -> Result<Term> {
        let mut negate = self.eat_sym("-");
        let mut acc = Term::zero();
        loop {
            let p = self.product(params)?;
            let mut coeff = p.coeff;
            if negate {
                coeff = -coeff;
            }
            acc = acc.add(&match p.var {
                Some(v) => Term::monomial(v, coeff),
                None => Term::constant(coeff),
            });
            if self.eat_sym("+") {
                negate = false;
            } else if self.eat_sym("-") {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn resolve(&self, name: &str) -> Result<VarId> {
        if let Some((_, id)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return Ok(*id);
        }
        match self.names.get(name) {
            Some(&id) if self.decls[id].kind != VarKind::Bound => Ok(id),
            _ => Err(Error::UndeclaredVariable(name.to_string())),
        }
    }

    fn product(&mut self, params: usize) -> Result<Product> {
        let mut coeff = IntPoly::from_i64s(&[1]);
        let mut var: Option<VarId> = None;
        loop {
            let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
            match self.bump() {
                Tok::Int(n) => coeff = &coeff * &IntPoly::constant(n),
                Tok::Sym("(") => {
                    let inner = self.paren_poly(params)?;
                    coeff = &coeff * &self.power(inner)?;
                }
                Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                    let id = self.resolve(&name)?;
                    let is_poly_param = params == 1 && self.decls[id].kind == VarKind::Parameter;
                    if is_poly_param {
                        coeff = &coeff * &self.power(IntPoly::var())?;
                    } else {
                        if self.is_sym("^") {
                            return Err(Error::NonlinearTerm(format!("power of variable `{name}`")));
                        }
                        if let Some(prev) = var {
                            return Err(Error::NonlinearTerm(format!(
                                "product of `{}` and `{name}`",
                                self.decls[prev].name
                            )));
                        }
                        var = Some(id);
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        column,
                        message: "expected a number, variable or `(`".into(),
                    })
                }
            }
            if !self.eat_sym("*") {
                break;
            }
        }
        Ok(Product { coeff, var })
    }

    fn power(&mut self, base: IntPoly) -> Result<IntPoly> {
        if !self.eat_sym("^") {
            return Ok(base);
        }
        match self.bump() {
            Tok::Int(k) => {
                let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
                Ok((0..k).fold(IntPoly::from_i64s(&[1]), |acc, _| &acc * &base))
            }
            _ => Err(self.error("expected exponent")),
        }
    }

    /// Body of `( … )` in coefficient position: a polynomial in the parameter only.
    fn paren_poly(&mut self, params: usize) -> Result<IntPoly> {
        let t = self.term(params)?;
        self.expect_sym(")")?;
        if let Some((&v, _)) = t.coeffs.iter().next() {
            return Err(Error::NonlinearTerm(format!(
                "`{}` inside a parenthesized coefficient",
                self.decls[v].name
            )));
        }
        Ok(t.constant)
    }
}

/// Parse a program: declarations followed by a formula.
pub fn parse_formula(text: &str) -> Result<Program> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        decls: Vec::new(),
        names: HashMap::new(),
        scope: Vec::new(),
    };
    let prog = p.program()?;
    check_div(&prog.formula)?;
    Ok(prog)
}

fn check_div(f: &Formula) -> Result<()> {
    let mut bad = None;
    f.visit_atoms(&mut |a| {
        if let Atom::Div(d, _) = a {
            if !d.is_positive() {
                bad = Some(d.clone());
            }
        }
    });
    match bad {
        Some(d) => Err(Error::InvalidInput(format!("divisor {d} must be positive"))),
        None => Ok(()),
    }
}
