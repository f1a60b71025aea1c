//! Cooper-style quantifier elimination for variables with constant coefficients.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::IntPoly;
use crate::error::{Error, Result};
use crate::eval::Compiled;
use crate::formula::{le_to_nonpos, negate_atom, Atom, Formula, Program, Term, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Le,
    Eq,
    Div,
}

/// Atom written as `s·v' + r  (<= 0 | = 0)` or `d | v' + r` after scaling `v' = L·v`.
#[derive(Clone, Debug)]
struct Unit {
    shape: Shape,
    s: i32,
    r: Term,
    d: BigInt,
}

/// Coefficient of `v` in the atom and the rest, as `c·v + r`; `None` when `v` is absent.
fn split(a: &Atom, v: VarId) -> Result<Option<(Shape, BigInt, Term, BigInt)>> {
    let (shape, e, d) = match a {
        Atom::Le(l, r) => (Shape::Le, l.sub(r), BigInt::zero()),
        Atom::Eq(l, r) => (Shape::Eq, l.sub(r), BigInt::zero()),
        Atom::Div(d, e) => (Shape::Div, e.clone(), d.clone()),
    };
    if !e.mentions(v) {
        return Ok(None);
    }
    let c = e
        .const_coeff(v)
        .ok_or_else(|| Error::NonconstantCoefficient(format!("#{v}")))?;
    let mut r = e;
    r.take(v);
    Ok(Some((shape, c, r, d)))
}

fn unitize(a: &Atom, v: VarId, l: &BigInt, flip: bool) -> Result<Option<Unit>> {
    let Some((shape, c, r, d)) = split(a, v)? else {
        return Ok(None);
    };
    let m = l / c.abs();
    let mut r = r.scale_int(&m);
    let mut s = if c.is_positive() { 1 } else { -1 };
    let d = &d * &m;
    if shape != Shape::Le && s < 0 {
        r = r.neg();
        s = 1;
    }
    if flip {
        if shape == Shape::Le {
            s = -s;
        } else {
            r = r.neg();
        }
    }
    Ok(Some(Unit { shape, s, r, d }))
}

impl Unit {
    /// The atom with `v'` replaced by `x`.
    fn at(&self, x: &Term) -> Formula {
        let lhs = x.scale_int(&BigInt::from(self.s)).add(&self.r);
        match self.shape {
            Shape::Le => simplify_atom(&Atom::Le(lhs, Term::zero())),
            Shape::Eq => simplify_atom(&Atom::Eq(lhs, Term::zero())),
            Shape::Div => simplify_atom(&Atom::Div(self.d.clone(), lhs)),
        }
    }

    /// The atom for `v'` below every lower bound.
    fn at_minus_infinity(&self, j: &Term) -> Formula {
        match (self.shape, self.s) {
            (Shape::Le, s) if s < 0 => Formula::False,
            (Shape::Le, _) => Formula::True,
            (Shape::Eq, _) => Formula::False,
            (Shape::Div, _) => self.at(j),
        }
    }

    /// Lower bound on `v'` carried by the atom, if any.
    fn lower(&self) -> Option<Term> {
        match (self.shape, self.s) {
            (Shape::Le, s) if s < 0 => Some(self.r.clone()),
            (Shape::Eq, _) => Some(self.r.neg()),
            _ => None,
        }
    }

    fn upper(&self) -> bool {
        matches!((self.shape, self.s), (Shape::Le, 1) | (Shape::Eq, _))
    }
}

fn int_term(k: &BigInt) -> Term {
    Term::constant(IntPoly::constant(k.clone()))
}

fn reduce_mod(p: &IntPoly, d: &BigInt) -> IntPoly {
    IntPoly::new(p.coeffs().iter().map(|c| c.mod_floor(d)).collect())
}

/// Constant folding and normalization of a single atom.
pub fn simplify_atom(a: &Atom) -> Formula {
    match a {
        Atom::Le(l, r) => {
            let e = le_to_nonpos(l, r);
            match e.const_value() {
                Some(k) => bool_formula(!k.is_positive()),
                None => Formula::le(e, Term::zero()),
            }
        }
        Atom::Eq(l, r) => {
            let e = l.sub(r);
            if let Some(k) = e.const_value() {
                return bool_formula(k.is_zero());
            }
            if e.is_ground() {
                let g = e.coeff_content();
                let k = e.constant.coeff(0);
                if !k.is_multiple_of(&g) {
                    return Formula::False;
                }
                return Formula::eq(e.divide_exact(&g), Term::zero());
            }
            Formula::eq(e, Term::zero())
        }
        Atom::Div(d, e) => {
            if d.is_one() {
                return Formula::True;
            }
            let mut out = Term {
                coeffs: Default::default(),
                constant: reduce_mod(&e.constant, d),
            };
            for (v, c) in &e.coeffs {
                let c = reduce_mod(c, d);
                if !c.is_zero() {
                    out.coeffs.insert(*v, c);
                }
            }
            if let Some(k) = out.const_value() {
                return bool_formula(k.is_zero());
            }
            let g = out
                .coeffs
                .values()
                .chain(std::iter::once(&out.constant))
                .flat_map(|p| p.coeffs().iter())
                .fold(d.clone(), |g, c| g.gcd(c));
            if g > BigInt::one() {
                return simplify_atom(&Atom::Div(d / &g, out.divide_exact(&g)));
            }
            Formula::Atom(Atom::Div(d.clone(), out))
        }
    }
}

fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

/// Fold constants throughout and drop repeated disjuncts and conjuncts.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => simplify_atom(a),
        Formula::And(v) => Formula::and(dedup(v.iter().map(simplify).collect())),
        Formula::Or(v) => Formula::or(dedup(v.iter().map(simplify).collect())),
        Formula::Not(g) => match simplify(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(h) => *h,
            g => Formula::negate(g),
        },
        Formula::Exists(x, g) => Formula::exists(*x, simplify(g)),
        Formula::Forall(x, g) => Formula::Forall(*x, Box::new(simplify(g))),
    }
}

fn dedup(v: Vec<Formula>) -> Vec<Formula> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

fn mentions_in_quantifier(f: &Formula, v: VarId) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => false,
        Formula::And(p) | Formula::Or(p) => p.iter().any(|g| mentions_in_quantifier(g, v)),
        Formula::Not(g) => mentions_in_quantifier(g, v),
        Formula::Exists(x, g) | Formula::Forall(x, g) => *x == v || g.free_vars().contains(&v),
    }
}

/// Map every atom mentioning `v` through `f`, keeping the rest.
fn map_v_atoms(g: &Formula, v: VarId, f: &dyn Fn(&Atom) -> Formula) -> Formula {
    match g {
        Formula::True | Formula::False => g.clone(),
        Formula::Atom(a) => {
            let mentions = a.terms().iter().any(|t| t.mentions(v));
            if mentions {
                f(a)
            } else {
                g.clone()
            }
        }
        Formula::And(p) => Formula::and(p.iter().map(|h| map_v_atoms(h, v, f)).collect()),
        Formula::Or(p) => Formula::or(p.iter().map(|h| map_v_atoms(h, v, f)).collect()),
        Formula::Not(h) if matches!(**h, Formula::Atom(_)) => Formula::negate(map_v_atoms(h, v, f)),
        // quantified parts do not mention v
        other => other.clone(),
    }
}

/// Negation normal form that keeps `not (d | e)` as a literal instead of splitting it
/// into `d - 1` residues; Cooper's method handles negated divisibility directly.
fn nnf(f: &Formula) -> Formula {
    nnf_pos(f)
}

fn nnf_pos(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::And(v) => Formula::and(v.iter().map(nnf_pos).collect()),
        Formula::Or(v) => Formula::or(v.iter().map(nnf_pos).collect()),
        Formula::Not(g) => nnf_neg(g),
        Formula::Exists(x, g) => Formula::exists(*x, nnf_pos(g)),
        Formula::Forall(x, g) => Formula::negate(Formula::exists(*x, nnf_neg(g))),
    }
}

fn nnf_neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(a @ Atom::Div(..)) => Formula::negate(Formula::Atom(a.clone())),
        Formula::Atom(a) => negate_atom(a),
        Formula::And(v) => Formula::or(v.iter().map(nnf_neg).collect()),
        Formula::Or(v) => Formula::and(v.iter().map(nnf_neg).collect()),
        Formula::Not(g) => nnf_pos(g),
        Formula::Exists(x, g) => Formula::negate(Formula::exists(*x, nnf_pos(g))),
        Formula::Forall(x, g) => Formula::exists(*x, nnf_neg(g)),
    }
}

/// `∃v. f` as a quantifier-free-in-`v` formula, equivalent over the integers.
pub fn eliminate_exists(f: &Formula, v: VarId) -> Result<Formula> {
    let g = nnf(f);
    if mentions_in_quantifier(&g, v) {
        return Err(Error::InvalidInput(format!(
            "variable #{v} occurs under an inner quantifier; eliminate inner quantifiers first"
        )));
    }
    elim_nnf(&g, v)
}

/// Constant ranges up to this width are expanded value by value.
const EXPAND_LIMIT: i64 = 64;

fn elim_nnf(g: &Formula, v: VarId) -> Result<Formula> {
    if !g.free_vars().contains(&v) {
        return Ok(g.clone());
    }
    match g {
        Formula::Or(parts) => {
            let out: Vec<Formula> = parts.iter().map(|p| elim_nnf(p, v)).collect::<Result<_>>()?;
            return Ok(Formula::or(dedup(out)));
        }
        Formula::And(parts) => {
            let (with, without): (Vec<&Formula>, Vec<&Formula>) =
                parts.iter().partition(|p| p.free_vars().contains(&v));
            if !without.is_empty() {
                let inner = Formula::and(with.into_iter().cloned().collect());
                let mut out: Vec<Formula> = without.into_iter().cloned().collect();
                out.push(elim_nnf(&inner, v)?);
                return Ok(Formula::and(out));
            }
            if let Some((lo, hi)) = constant_range(g, v) {
                if &hi - &lo < BigInt::from(EXPAND_LIMIT) {
                    return Ok(expand_range(g, v, &lo, &hi));
                }
            }
            // ∃v.(A ∧ (B ∨ C)) = ∃v.(A ∧ B) ∨ ∃v.(A ∧ C), when A has no disjunction
            let mut ors = parts.iter().enumerate().filter(|(_, p)| matches!(p, Formula::Or(_)));
            if let (Some((i, Formula::Or(alts))), None) = (ors.next(), ors.next()) {
                let rest: Vec<Formula> = parts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                let out: Vec<Formula> = alts
                    .iter()
                    .map(|alt| {
                        let mut conj = rest.clone();
                        conj.push(alt.clone());
                        elim_nnf(&Formula::and(conj), v)
                    })
                    .collect::<Result<_>>()?;
                return Ok(Formula::or(dedup(out)));
            }
        }
        _ => {}
    }
    cooper(g, v)
}

fn cooper(g: &Formula, v: VarId) -> Result<Formula> {
    let mut l = BigInt::one();
    let mut err = None;
    g.visit_atoms(&mut |a| match split(a, v) {
        Ok(Some((_, c, _, _))) => l = l.lcm(&c),
        Ok(None) => {}
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    let units = |flip: bool| -> Result<Vec<Unit>> {
        let mut out = Vec::new();
        let mut err = None;
        g.visit_atoms(&mut |a| match unitize(a, v, &l, flip) {
            Ok(Some(u)) => out.push(u),
            Ok(None) => {}
            Err(e) => err = Some(e),
        });
        err.map_or(Ok(out), Err)
    };
    let unscaled = units(false)?;
    let lowers = unscaled.iter().filter(|u| u.lower().is_some()).count();
    let uppers = unscaled.iter().filter(|u| u.upper()).count();
    let flip = uppers < lowers;
    let all = if flip { units(true)? } else { unscaled };

    let guard = |x: &Term| simplify_atom(&Atom::Div(l.clone(), x.clone()));
    let instantiate = |x: &Term| -> Formula {
        let body = map_v_atoms(g, v, &|a| {
            unitize(a, v, &l, flip)
                .expect("checked above")
                .expect("atom mentions v")
                .at(x)
        });
        Formula::and(vec![guard(x), body])
    };

    // a conjunct v' = e pins the variable
    if let Formula::And(parts) | Formula::Or(parts) = g {
        if matches!(g, Formula::And(_)) {
            for p in parts {
                if let Formula::Atom(a @ Atom::Eq(..)) = p {
                    if let Some(u) = unitize(a, v, &l, flip)? {
                        let e = u.lower().expect("equalities bound from below");
                        return Ok(simplify(&instantiate(&e)));
                    }
                }
            }
        }
    }
    if let Formula::Atom(a @ Atom::Eq(..)) = g {
        if let Some(u) = unitize(a, v, &l, flip)? {
            return Ok(simplify(&instantiate(&u.lower().expect("equality"))));
        }
    }

    let mut d = l.clone();
    for u in &all {
        if u.shape == Shape::Div {
            d = d.lcm(&u.d);
        }
    }
    let d_count = d
        .to_string()
        .parse::<u64>()
        .map_err(|_| Error::Overflow("Cooper period"))?;
    let lowers: Vec<Term> = dedup_terms(all.iter().filter_map(Unit::lower).collect());
    if let Some((lo, hi)) = constant_range(g, v) {
        let work = BigInt::from(lowers.len() + 1) * &d;
        if &hi - &lo < work {
            return Ok(expand_range(g, v, &lo, &hi));
        }
    }
    let mut branches = Vec::new();
    // below all lower bounds: only divisibility constraints still depend on v'
    let minus = map_v_atoms(g, v, &|a| {
        let u = unitize(a, v, &l, flip).expect("checked").expect("mentions v");
        let key = Term::var(v);
        u.at_minus_infinity(&key)
    });
    for j in 1..=d_count {
        let jt = int_term(&BigInt::from(j));
        let b = Formula::and(vec![
            guard(&jt),
            map_v_atoms(&minus, v, &|a| {
                simplify(&Formula::Atom(a.map_terms(|t| t.substitute(v, &jt))))
            }),
        ]);
        let b = simplify(&b);
        if b == Formula::True {
            return Ok(Formula::True);
        }
        branches.push(b);
    }
    for b in &lowers {
        for j in 0..d_count {
            let x = b.add(&int_term(&BigInt::from(j)));
            let br = simplify(&instantiate(&x));
            if br == Formula::True {
                return Ok(Formula::True);
            }
            branches.push(br);
        }
    }
    Ok(Formula::or(dedup(branches)))
}

/// Bounds `lo <= v <= hi` implied by top-level conjuncts that mention only `v`.
fn constant_range(g: &Formula, v: VarId) -> Option<(BigInt, BigInt)> {
    let parts: Vec<&Formula> = match g {
        Formula::And(p) => p.iter().collect(),
        other => vec![other],
    };
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for p in parts {
        let Formula::Atom(Atom::Le(l, r)) = p else {
            continue;
        };
        let e = l.sub(r);
        if e.vars().any(|w| w != v) {
            continue;
        }
        let (Some(c), Some(k)) = (e.const_coeff(v), e.constant.as_constant()) else {
            continue;
        };
        // c·v + k <= 0
        if c.is_positive() {
            let b = (-k).div_floor(&c);
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        } else if c.is_negative() {
            let b = -((-k).div_floor(&-c));
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        }
    }
    Some((lo?, hi?))
}

/// `∃v` over `lo..=hi` as the disjunction of the instances.
fn expand_range(g: &Formula, v: VarId, lo: &BigInt, hi: &BigInt) -> Formula {
    let mut branches = Vec::new();
    let mut k = lo.clone();
    while &k <= hi {
        let kt = int_term(&k);
        let br = simplify(&map_v_atoms(g, v, &|a| {
            simplify_atom(&a.map_terms(|t| t.substitute(v, &kt)))
        }));
        if br == Formula::True {
            return Formula::True;
        }
        branches.push(br);
        k += 1;
    }
    Formula::or(dedup(branches))
}

fn dedup_terms(v: Vec<Term>) -> Vec<Term> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

/// The coefficient of `v` in a top-level equality, if any.
fn equality_coeff(g: &Formula, v: VarId) -> Option<BigInt> {
    let parts: Vec<&Formula> = match g {
        Formula::And(p) => p.iter().collect(),
        other => vec![other],
    };
    parts
        .into_iter()
        .filter_map(|p| match p {
            Formula::Atom(a @ Atom::Eq(..)) => split(a, v).ok().flatten().map(|(_, c, _, _)| c.abs()),
            _ => None,
        })
        .min()
}

fn elim(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::And(p) => Formula::and(p.iter().map(elim).collect::<Result<_>>()?),
        Formula::Or(p) => Formula::or(p.iter().map(elim).collect::<Result<_>>()?),
        Formula::Not(g) => Formula::negate(elim(g)?),
        Formula::Exists(..) => {
            let mut vars = Vec::new();
            let mut body = f;
            while let Formula::Exists(x, g) = body {
                vars.push(*x);
                body = g;
            }
            let mut g = nnf(&elim(body)?);
            while !vars.is_empty() {
                let pick = vars
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &x)| equality_coeff(&g, x).map(|c| (c, std::cmp::Reverse(i))))
                    .min()
                    .map_or(vars.len() - 1, |(_, std::cmp::Reverse(i))| i);
                let x = vars.remove(pick);
                g = eliminate_exists(&g, x)?;
            }
            g
        }
        Formula::Forall(x, g) => {
            let inner = nnf(&Formula::negate(elim(g)?));
            nnf(&Formula::negate(eliminate_exists(&inner, *x)?))
        }
    })
}

/// Quantifier-free equivalent of `f`, eliminating innermost quantifiers first.
pub fn eliminate_all(f: &Formula) -> Result<Formula> {
    Ok(simplify(&nnf(&elim(f)?)))
}

/// [`eliminate_all`] on a program, with variable names in error messages.
pub fn eliminate_program(p: &Program) -> Result<Program> {
    eliminate_all(&p.formula)
        .map(|f| p.with_formula(f))
        .map_err(|e| match e {
            Error::NonconstantCoefficient(id) => {
                let name = id
                    .trim_start_matches('#')
                    .parse::<usize>()
                    .ok()
                    .and_then(|v| p.decls.get(v))
                    .map_or(id.clone(), |d| d.name.clone());
                Error::NonconstantCoefficient(name)
            }
            other => other,
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// First disagreement in lexicographic order, one value per box variable.
    pub counterexample: Option<Vec<i64>>,
}

pub const DEFAULT_POINT_BUDGET: u128 = 10_000_000;

/// Compare two ground formulas at every point of a box.
///
/// `bx` lists `(variable, lo, hi)`; the first entry varies slowest.
pub fn equivalent_on_box(
    f: &Formula,
    g: &Formula,
    nvars: usize,
    bx: &[(VarId, i64, i64)],
    budget: u128,
) -> Result<Equivalence> {
    let points = bx
        .iter()
        .map(|&(_, lo, hi)| if hi < lo { 0 } else { (hi - lo) as u128 + 1 })
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if points > budget {
        return Err(Error::BoxTooLarge { points, budget });
    }
    let (cf, cg) = (Compiled::new(f, nvars)?, Compiled::new(g, nvars)?);
    if points == 0 {
        return Ok(Equivalence {
            equivalent: true,
            counterexample: None,
        });
    }
    let first_outer = |x0: i64| -> Result<Option<Vec<i64>>> {
        let mut vals = vec![0i64; nvars];
        let mut idx: Vec<i64> = bx.iter().map(|&(_, lo, _)| lo).collect();
        idx[0] = x0;
        loop {
            for (k, &(v, _, _)) in bx.iter().enumerate() {
                vals[v] = idx[k];
            }
            if cf.holds(&vals)? != cg.holds(&vals)? {
                return Ok(Some(idx));
            }
            // odometer over all but the first coordinate
            let mut k = bx.len() - 1;
            loop {
                if k == 0 {
                    return Ok(None);
                }
                if idx[k] < bx[k].2 {
                    idx[k] += 1;
                    break;
                }
                idx[k] = bx[k].1;
                k -= 1;
            }
        }
    };
    let outer: Vec<i64> = (bx[0].1..=bx[0].2).collect();
    let found: Vec<Option<Vec<i64>>> = outer.par_iter().map(|&x| first_outer(x)).collect::<Result<_>>()?;
    let counterexample = found.into_iter().flatten().next();
    Ok(Equivalence {
        equivalent: counterexample.is_none(),
        counterexample,
    })
}
