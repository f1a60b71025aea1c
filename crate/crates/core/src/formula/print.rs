//! Canonical text form; `parse_formula(print_program(p)) == p` for parsed programs.

use num_traits::{One, Signed};

use super::{Atom, Formula, Program, Term, VarKind};

pub fn print_term(t: &Term, prog: &Program) -> String {
    let param = prog.param_name();
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (v, c) in &t.coeffs {
        let name = prog.name(*v);
        parts.push(match c.as_constant() {
            Some(k) => {
                let body = if k.abs().is_one() {
                    name.to_string()
                } else {
                    format!("{}*{name}", k.abs())
                };
                (k.is_negative(), body)
            }
            None => (false, format!("({})*{name}", c.fmt_with(param))),
        });
    }
    if !t.constant.is_zero() || parts.is_empty() {
        parts.push(match t.constant.as_constant() {
            Some(k) => (k.is_negative(), k.abs().to_string()),
            None => (false, format!("({})", t.constant.fmt_with(param))),
        });
    }
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn print_atom(a: &Atom, prog: &Program) -> String {
    match a {
        Atom::Le(l, r) => format!("{} <= {}", print_term(l, prog), print_term(r, prog)),
        Atom::Eq(l, r) => format!("{} = {}", print_term(l, prog), print_term(r, prog)),
        Atom::Div(d, e) => format!("{d} | {}", print_term(e, prog)),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Or,
    And,
    Not,
}

fn go(f: &Formula, prog: &Program, ctx: Ctx) -> String {
    let wrap = |s: String, needed: bool| if needed { format!("({s})") } else { s };
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Atom(a) => print_atom(a, prog),
        Formula::Not(g) => format!("not {}", go(g, prog, Ctx::Not)),
        Formula::And(parts) => {
            let s = parts
                .iter()
                .map(|g| go(g, prog, Ctx::And))
                .collect::<Vec<_>>()
                .join(" and ");
            wrap(s, matches!(ctx, Ctx::And | Ctx::Not))
        }
        Formula::Or(parts) => {
            let s = parts
                .iter()
                .map(|g| go(g, prog, Ctx::Or))
                .collect::<Vec<_>>()
                .join(" or ");
            wrap(s, ctx != Ctx::Top)
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let q = if matches!(f, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            let s = format!("{q} {}. {}", prog.name(*v), go(g, prog, Ctx::Top));
            wrap(s, ctx != Ctx::Top)
        }
    }
}

pub fn print_formula(f: &Formula, prog: &Program) -> String {
    go(f, prog, Ctx::Top)
}

pub fn print_program(prog: &Program) -> String {
    let mut out = String::new();
    let mut i = 0;
    let declared: Vec<_> = prog.decls.iter().filter(|d| d.kind != VarKind::Bound).collect();
    while i < declared.len() {
        let kind = declared[i].kind;
        out.push_str(if kind == VarKind::Parameter { "param" } else { "free" });
        while i < declared.len() && declared[i].kind == kind {
            out.push(' ');
            out.push_str(&declared[i].name);
            i += 1;
        }
        out.push_str(";\n");
    }
    out.push_str(&print_formula(&prog.formula, prog));
    out.push('\n');
    out
}
