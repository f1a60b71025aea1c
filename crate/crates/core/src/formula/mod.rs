//! Presburger formulas with one polynomial parameter.
//!
//! A [`Program`] owns the variable declarations and the formula. Variables are referred
//! to by [`VarId`], an index into `Program::decls`.
//!
//! Coefficients are [`IntPoly`]s in the parameter when exactly one parameter is
//! declared. With several parameters, each one is an ordinary map key of a [`Term`]
//! and every coefficient is constant.

mod nnf;
mod parse;
mod print;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::IntPoly;

pub(crate) use nnf::negate_atom;
pub use nnf::normalize_nnf;
pub use parse::parse_formula;
pub use print::{print_formula, print_program, print_term};

pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Parameter,
    Free,
    Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
}

/// `Σ coeffs[v]·v + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Term {
    pub coeffs: BTreeMap<VarId, IntPoly>,
    pub constant: IntPoly,
}

impl Term {
    pub fn zero() -> Self {
        Term::default()
    }

    pub fn constant(c: IntPoly) -> Self {
        Term {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(IntPoly::from_i64s(&[c]))
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(v, IntPoly::from_i64s(&[1]))
    }

    pub fn monomial(v: VarId, c: IntPoly) -> Self {
        let mut t = Term::zero();
        if !c.is_zero() {
            t.coeffs.insert(v, c);
        }
        t
    }

    pub fn coeff(&self, v: VarId) -> IntPoly {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn mentions(&self, v: VarId) -> bool {
        self.coeffs.contains_key(&v)
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let sum = &out.coeff(*v) + c;
            if sum.is_zero() {
                out.coeffs.remove(v);
            } else {
                out.coeffs.insert(*v, sum);
            }
        }
        out.constant = &out.constant + &other.constant;
        out
    }

    pub fn neg(&self) -> Term {
        self.scale(&IntPoly::from_i64s(&[-1]))
    }

    pub fn sub(&self, other: &Term) -> Term {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &IntPoly) -> Term {
        let mut out = Term::constant(&self.constant * k);
        for (v, c) in &self.coeffs {
            let p = c * k;
            if !p.is_zero() {
                out.coeffs.insert(*v, p);
            }
        }
        out
    }

    pub fn scale_int(&self, k: &BigInt) -> Term {
        self.scale(&IntPoly::constant(k.clone()))
    }

    pub fn add_int(&self, k: i64) -> Term {
        self.add(&Term::int(k))
    }

    /// Drop `v` and return its coefficient.
    pub fn take(&mut self, v: VarId) -> IntPoly {
        self.coeffs.remove(&v).unwrap_or_default()
    }

    /// Replace `v` by the term `by`.
    pub fn substitute(&self, v: VarId, by: &Term) -> Term {
        let mut out = self.clone();
        let c = out.take(v);
        if c.is_zero() {
            return out;
        }
        out.add(&by.scale(&c))
    }

    /// Every coefficient and the constant are degree <= 0.
    pub fn is_ground(&self) -> bool {
        self.constant.is_constant() && self.coeffs.values().all(|c| c.is_constant())
    }

    /// Constant coefficient of `v`, if it does not depend on the parameter.
    pub fn const_coeff(&self, v: VarId) -> Option<BigInt> {
        self.coeff(v).as_constant()
    }

    pub fn const_value(&self) -> Option<BigInt> {
        if self.coeffs.is_empty() {
            self.constant.as_constant()
        } else {
            None
        }
    }

    /// gcd of all variable coefficients, for ground terms.
    pub fn coeff_content(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(&c.coeff(0)))
    }

    /// Evaluate with `values[v]` for each variable and `param` for the polynomial
    /// parameter.
    pub fn eval(&self, values: &[i64], param: i64) -> BigInt {
        let mut acc = self.constant.eval_i64(param);
        for (v, c) in &self.coeffs {
            acc += c.eval_i64(param) * BigInt::from(values[*v]);
        }
        acc
    }

    /// Evaluate every coefficient at `param`.
    pub fn ground_param(&self, param: i64) -> Term {
        let mut out = Term::constant(IntPoly::constant(self.constant.eval_i64(param)));
        for (v, c) in &self.coeffs {
            let k = c.eval_i64(param);
            if !k.is_zero() {
                out.coeffs.insert(*v, IntPoly::constant(k));
            }
        }
        out
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn remap(&self, map: &[Option<VarId>]) -> Term {
        Term {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (map[*v].expect("remapped variable"), c.clone()))
                .collect(),
            constant: self.constant.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `lhs <= rhs`
    Le(Term, Term),
    /// `lhs = rhs`
    Eq(Term, Term),
    /// `d | e`, `d > 0`
    Div(BigInt, Term),
}

impl Atom {
    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Le(a, b) => Atom::Le(f(a), f(b)),
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Div(d, e) => Atom::Div(d.clone(), f(e)),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Le(a, b) | Atom::Eq(a, b) => vec![a, b],
            Atom::Div(_, e) => vec![e],
        }
    }

    pub fn holds(&self, values: &[i64], param: i64) -> bool {
        match self {
            Atom::Le(a, b) => a.eval(values, param) <= b.eval(values, param),
            Atom::Eq(a, b) => a.eval(values, param) == b.eval(values, param),
            Atom::Div(d, e) => e.eval(values, param).mod_floor(d).is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists(VarId, Box<Formula>),
    Forall(VarId, Box<Formula>),
}

impl Formula {
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Le(a, b))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn div(d: i64, e: Term) -> Formula {
        Formula::Atom(Atom::Div(BigInt::from(d), e))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: VarId, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    /// Conjunction with flattening and constant folding.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with flattening and constant folding.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::And(v) | Formula::Or(v) => v.iter().all(|f| f.is_quantifier_free()),
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| g.visit_atoms(f)),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_atoms(f),
        }
    }

    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::And(v) => Formula::and(v.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(v) => Formula::or(v.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Not(g) => Formula::negate(g.map_atoms(f)),
            Formula::Exists(x, g) => Formula::Exists(*x, Box::new(g.map_atoms(f))),
            Formula::Forall(x, g) => Formula::Forall(*x, Box::new(g.map_atoms(f))),
        }
    }

    /// Variables occurring free (not under a quantifier binding them).
    pub fn free_vars(&self) -> Vec<VarId> {
        let mut out = std::collections::BTreeSet::new();
        fn go(f: &Formula, bound: &mut Vec<VarId>, out: &mut std::collections::BTreeSet<VarId>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => {
                    for t in a.terms() {
                        out.extend(t.vars().filter(|v| !bound.contains(v)));
                    }
                }
                Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| go(g, bound, out)),
                Formula::Not(g) => go(g, bound, out),
                Formula::Exists(x, g) | Formula::Forall(x, g) => {
                    bound.push(*x);
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    /// Truth of a quantifier-free formula. Panics on quantifiers.
    pub fn holds(&self, values: &[i64], param: i64) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.holds(values, param),
            Formula::And(v) => v.iter().all(|g| g.holds(values, param)),
            Formula::Or(v) => v.iter().any(|g| g.holds(values, param)),
            Formula::Not(g) => !g.holds(values, param),
            Formula::Exists(..) | Formula::Forall(..) => {
                panic!("holds() needs a quantifier-free formula")
            }
        }
    }

    /// Every term coefficient evaluated at `param`.
    pub fn ground_param(&self, param: i64) -> Formula {
        self.map_atoms(&|a| Formula::Atom(a.map_terms(|t| t.ground_param(param))))
    }

    pub fn remap(&self, map: &[Option<VarId>]) -> Formula {
        match self {
            Formula::Exists(x, g) => Formula::Exists(map[*x].unwrap(), Box::new(g.remap(map))),
            Formula::Forall(x, g) => Formula::Forall(map[*x].unwrap(), Box::new(g.remap(map))),
            Formula::Not(g) => Formula::negate(g.remap(map)),
            Formula::And(v) => Formula::And(v.iter().map(|g| g.remap(map)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.remap(map)).collect()),
            Formula::Atom(a) => Formula::Atom(a.map_terms(|t| t.remap(map))),
            Formula::True | Formula::False => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::And(v) | Formula::Or(v) => 1 + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + g.size(),
        }
    }
}

/// Declarations plus formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<VarDecl>,
    pub formula: Formula,
}

impl Program {
    pub fn var(&self, name: &str) -> Option<VarId> {
        self.decls.iter().position(|d| d.name == name)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.decls[v].name
    }

    pub fn of_kind(&self, kind: VarKind) -> Vec<VarId> {
        (0..self.decls.len()).filter(|&v| self.decls[v].kind == kind).collect()
    }

    pub fn params(&self) -> Vec<VarId> {
        self.of_kind(VarKind::Parameter)
    }

    pub fn free_vars(&self) -> Vec<VarId> {
        self.of_kind(VarKind::Free)
    }

    /// The parameter stored inside polynomial coefficients (exactly one parameter).
    pub fn poly_param(&self) -> Option<VarId> {
        match self.params().as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    pub fn param_name(&self) -> &str {
        self.poly_param().map_or("t", |p| self.name(p))
    }

    pub fn with_formula(&self, formula: Formula) -> Program {
        Program {
            decls: self.decls.clone(),
            formula,
        }
    }

    /// Fresh bound variable with a name derived from `hint`.
    pub fn fresh_bound(&mut self, hint: &str) -> VarId {
        let mut k = 1;
        loop {
            let name = format!("{hint}_{k}");
            if self.var(&name).is_none() {
                self.decls.push(VarDecl {
                    name,
                    kind: VarKind::Bound,
                });
                return self.decls.len() - 1;
            }
            k += 1;
        }
    }
}

/// Specialize the parameters to `values` (one per declared parameter, in declaration
/// order). Parameter declarations are removed and the remaining variables renumbered.
pub fn ground(p: &Program, values: &[i64]) -> crate::Result<Program> {
    let params = p.params();
    if params.len() != values.len() {
        return Err(crate::Error::InvalidInput(format!(
            "expected {} parameter value(s), got {}",
            params.len(),
            values.len()
        )));
    }
    let param_value = if params.len() == 1 { values[0] } else { 0 };
    let formula = p.formula.map_atoms(&|a| {
        Formula::Atom(a.map_terms(|t| {
            let mut g = t.ground_param(param_value);
            for (&pv, &x) in params.iter().zip(values) {
                let c = g.take(pv);
                g = g.add(&Term::constant(&c * &IntPoly::from_i64s(&[x])));
            }
            g
        }))
    });
    let mut map = vec![None; p.decls.len()];
    let mut decls = Vec::new();
    for (i, d) in p.decls.iter().enumerate() {
        if d.kind != VarKind::Parameter {
            map[i] = Some(decls.len());
            decls.push(d.clone());
        }
    }
    Ok(Program {
        decls,
        formula: formula.remap(&map),
    })
}

/// Normalize a ground `Le(a, b)` to `e <= 0` with `e = a - b`, divided by the content.
pub fn le_to_nonpos(a: &Term, b: &Term) -> Term {
    let mut e = a.sub(b);
    let g = e.coeff_content();
    if g > BigInt::one() && e.is_ground() {
        // e <= 0  ⇔  (Σ c_i x_i)/g <= floor(-k/g)
        let k = e.constant.coeff(0);
        let bound = (-k).div_floor(&g);
        e = Term {
            coeffs: e
                .coeffs
                .iter()
                .map(|(v, c)| (*v, IntPoly::constant(c.coeff(0) / &g)))
                .collect(),
            constant: IntPoly::constant(-bound),
        };
    }
    e
}
