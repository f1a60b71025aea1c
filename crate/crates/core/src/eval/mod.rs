//! Ground evaluation: decide, count, enumerate and optimize over the integer points
//! of a formula once every parameter has a value.
//!
//! Formulas are compiled to a machine-integer form ([`Compiled`]). Bound variables are
//! searched over intervals derived from the quantifier body; free variables are
//! enumerated lexicographically in declaration order.

mod bounds;
mod count;
mod equalities;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::formula::{normalize_nnf, Atom, Formula, Term};

pub use bounds::{derive_bounds, Bounds};
pub use count::{argmax_point, count_points, first_points, Cardinality, CountOptions, CountResult, Method};
pub use equalities::eliminate_equalities;

/// Closed integer interval; a missing end is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: Option<i128>,
    pub hi: Option<i128>,
}

impl Iv {
    pub const FULL: Iv = Iv { lo: None, hi: None };
    pub const EMPTY: Iv = Iv {
        lo: Some(1),
        hi: Some(0),
    };

    pub fn point(v: i128) -> Iv {
        Iv {
            lo: Some(v),
            hi: Some(v),
        }
    }

    pub fn new(lo: i128, hi: i128) -> Iv {
        Iv {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn intersect(&self, o: &Iv) -> Iv {
        let lo = match (self.lo, o.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let out = Iv { lo, hi };
        if out.is_empty() {
            Iv::EMPTY
        } else {
            out
        }
    }

    pub fn hull(&self, o: &Iv) -> Iv {
        if self.is_empty() {
            return *o;
        }
        if o.is_empty() {
            return *self;
        }
        Iv {
            lo: self.lo.zip(o.lo).map(|(a, b)| a.min(b)),
            hi: self.hi.zip(o.hi).map(|(a, b)| a.max(b)),
        }
    }

    /// Number of integers, saturating.
    pub fn len(&self) -> u128 {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l <= h => (h - l) as u128 + 1,
            (Some(_), Some(_)) => 0,
            _ => u128::MAX,
        }
    }
}

/// `Σ c·x + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lin {
    pub terms: Vec<(usize, i128)>,
    pub k: i128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rel {
    /// `lin <= 0`
    Le,
    /// `lin = 0`
    Eq,
    /// `d | lin`
    Div(i128),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CAtom {
    pub lin: Lin,
    pub rel: Rel,
}

/// Negation-normal compiled formula; `Not` occurs only above `Exists`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum CForm {
    True,
    False,
    Atom(CAtom),
    And(Vec<CForm>),
    Or(Vec<CForm>),
    Not(Box<CForm>),
    Exists(usize, Box<CForm>),
}

/// A ground formula in machine-integer form.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub(crate) form: CForm,
    pub(crate) nvars: usize,
    pub(crate) bound: Vec<bool>,
}

fn small(c: &BigInt) -> Result<i128> {
    c.to_i64()
        .map(i128::from)
        .ok_or(Error::Overflow("coefficient exceeds 64 bits"))
}

fn lin_of(t: &Term) -> Result<Lin> {
    let constant = t
        .constant
        .as_constant()
        .ok_or_else(|| Error::InvalidInput("formula still depends on the parameter; ground it first".into()))?;
    let mut terms = Vec::with_capacity(t.coeffs.len());
    for (v, c) in &t.coeffs {
        let c = c
            .as_constant()
            .ok_or_else(|| Error::InvalidInput("formula still depends on the parameter; ground it first".into()))?;
        if c != BigInt::from(0) {
            terms.push((*v, small(&c)?));
        }
    }
    Ok(Lin {
        terms,
        k: small(&constant)?,
    })
}

fn compile_atom(a: &Atom) -> Result<CAtom> {
    Ok(match a {
        Atom::Le(l, r) => CAtom {
            lin: lin_of(&l.sub(r))?,
            rel: Rel::Le,
        },
        Atom::Eq(l, r) => CAtom {
            lin: lin_of(&l.sub(r))?,
            rel: Rel::Eq,
        },
        Atom::Div(d, e) => CAtom {
            lin: lin_of(e)?,
            rel: Rel::Div(small(d)?),
        },
    })
}

fn compile_nnf(f: &Formula) -> Result<CForm> {
    Ok(match f {
        Formula::True => CForm::True,
        Formula::False => CForm::False,
        Formula::Atom(a) => CForm::Atom(compile_atom(a)?),
        Formula::And(v) => CForm::And(v.iter().map(compile_nnf).collect::<Result<_>>()?),
        Formula::Or(v) => CForm::Or(v.iter().map(compile_nnf).collect::<Result<_>>()?),
        Formula::Not(g) => CForm::Not(Box::new(compile_nnf(g)?)),
        Formula::Exists(x, g) => CForm::Exists(*x, Box::new(compile_nnf(g)?)),
        Formula::Forall(..) => unreachable!("normal form has no universal quantifiers"),
    })
}

impl Compiled {
    /// Compile a ground formula over `nvars` variables.
    pub fn new(f: &Formula, nvars: usize) -> Result<Compiled> {
        let form = compile_nnf(&normalize_nnf(f))?;
        let mut bound = vec![false; nvars];
        form.mark_bound(&mut bound);
        Ok(Compiled { form, nvars, bound })
    }

    /// A fresh environment; bound variables start unconstrained.
    pub(crate) fn env(&self) -> Env {
        Env::new(self.nvars)
    }

    /// Truth at `values` (one entry per variable; bound-variable entries are ignored).
    pub fn holds(&self, values: &[i64]) -> Result<bool> {
        let mut env = self.env();
        for (v, &x) in values.iter().enumerate() {
            if !self.bound[v] {
                env.set(v, x);
            }
        }
        env.holds(&self.form)
    }
}

/// Truth of a ground formula, searching bound variables as needed.
pub fn holds(f: &Formula, nvars: usize, values: &[i64]) -> Result<bool> {
    Compiled::new(f, nvars)?.holds(values)
}

impl Lin {
    fn coeff(&self, v: usize) -> i128 {
        self.terms.iter().find(|(w, _)| *w == v).map_or(0, |(_, c)| *c)
    }

    fn eval(&self, vals: &[i64]) -> Result<i128> {
        let mut acc = self.k;
        for &(v, c) in &self.terms {
            acc = c
                .checked_mul(vals[v] as i128)
                .and_then(|p| acc.checked_add(p))
                .ok_or(Error::Overflow("linear form evaluation"))?;
        }
        Ok(acc)
    }

    /// Range of the form without variable `skip`, over the box.
    fn range_without(&self, skip: usize, bx: &[Iv]) -> (Option<i128>, Option<i128>) {
        let (mut lo, mut hi) = (Some(self.k), Some(self.k));
        for &(v, c) in &self.terms {
            if v == skip {
                continue;
            }
            let iv = bx[v];
            let (a, b) = if c > 0 {
                (iv.lo.map(|x| c * x), iv.hi.map(|x| c * x))
            } else {
                (iv.hi.map(|x| c * x), iv.lo.map(|x| c * x))
            };
            lo = lo.zip(a).and_then(|(p, q)| p.checked_add(q));
            hi = hi.zip(b).and_then(|(p, q)| p.checked_add(q));
        }
        (lo, hi)
    }
}

impl CAtom {
    fn holds(&self, vals: &[i64]) -> Result<bool> {
        let v = self.lin.eval(vals)?;
        Ok(match self.rel {
            Rel::Le => v <= 0,
            Rel::Eq => v == 0,
            Rel::Div(d) => v.mod_floor(&d) == 0,
        })
    }

    /// Values of `y` compatible with this atom for some choice of the other variables
    /// in the box.
    fn interval(&self, y: usize, bx: &[Iv]) -> Iv {
        let c = self.lin.coeff(y);
        let (rmin, rmax) = self.lin.range_without(y, bx);
        match self.rel {
            Rel::Le => match (c.signum(), rmin) {
                (_, None) => Iv::FULL,
                (0, Some(r)) => {
                    if r > 0 {
                        Iv::EMPTY
                    } else {
                        Iv::FULL
                    }
                }
                (1, Some(r)) => Iv {
                    lo: None,
                    hi: Some(Integer::div_floor(&-r, &c)),
                },
                (_, Some(r)) => Iv {
                    lo: Some(Integer::div_ceil(&r, &-c)),
                    hi: None,
                },
            },
            Rel::Eq => {
                if c == 0 {
                    let outside = rmin.is_some_and(|r| r > 0) || rmax.is_some_and(|r| r < 0);
                    return if outside { Iv::EMPTY } else { Iv::FULL };
                }
                // c·y = -R with R in [rmin, rmax]
                let (a, b) = if c > 0 {
                    (rmax.map(|r| -r), rmin.map(|r| -r))
                } else {
                    (rmin, rmax)
                };
                let ac = c.abs();
                let out = Iv {
                    lo: a.map(|a| Integer::div_ceil(&a, &ac)),
                    hi: b.map(|b| Integer::div_floor(&b, &ac)),
                };
                if out.is_empty() {
                    Iv::EMPTY
                } else {
                    out
                }
            }
            Rel::Div(d) => match (c, rmin, rmax) {
                (0, Some(a), Some(b)) if a == b && a.mod_floor(&d) != 0 => Iv::EMPTY,
                _ => Iv::FULL,
            },
        }
    }
}

impl CForm {
    fn has_quantifier(&self) -> bool {
        match self {
            CForm::True | CForm::False | CForm::Atom(_) => false,
            CForm::And(v) | CForm::Or(v) => v.iter().any(CForm::has_quantifier),
            CForm::Not(g) => g.has_quantifier(),
            CForm::Exists(..) => true,
        }
    }

    fn mark_bound(&self, out: &mut [bool]) {
        match self {
            CForm::True | CForm::False | CForm::Atom(_) => {}
            CForm::And(v) | CForm::Or(v) => v.iter().for_each(|g| g.mark_bound(out)),
            CForm::Not(g) => g.mark_bound(out),
            CForm::Exists(y, g) => {
                out[*y] = true;
                g.mark_bound(out);
            }
        }
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a CAtom)) {
        match self {
            CForm::True | CForm::False => {}
            CForm::Atom(a) => f(a),
            CForm::And(v) | CForm::Or(v) => v.iter().for_each(|g| g.visit_atoms(f)),
            CForm::Not(g) | CForm::Exists(_, g) => g.visit_atoms(f),
        }
    }

    /// Necessary condition on `y`: every satisfying assignment within the box has
    /// `y` in the returned interval.
    pub(crate) fn interval(&self, y: usize, bx: &[Iv]) -> Iv {
        match self {
            CForm::True | CForm::Not(_) => Iv::FULL,
            CForm::False => Iv::EMPTY,
            CForm::Atom(a) => a.interval(y, bx),
            CForm::And(v) => {
                let mut out = Iv::FULL;
                for g in v {
                    out = out.intersect(&g.interval(y, bx));
                    if out.is_empty() {
                        break;
                    }
                }
                out
            }
            CForm::Or(v) => v.iter().fold(Iv::EMPTY, |acc, g| acc.hull(&g.interval(y, bx))),
            CForm::Exists(_, g) => g.interval(y, bx),
        }
    }
}

/// Current assignment: values plus the box view used by interval analysis.
#[derive(Clone, Debug)]
pub(crate) struct Env {
    pub vals: Vec<i64>,
    pub bx: Vec<Iv>,
}

impl Env {
    pub fn new(n: usize) -> Env {
        Env {
            vals: vec![0; n],
            bx: vec![Iv::FULL; n],
        }
    }

    pub fn set(&mut self, v: usize, x: i64) {
        self.vals[v] = x;
        self.bx[v] = Iv::point(x as i128);
    }

    pub fn holds(&mut self, f: &CForm) -> Result<bool> {
        match f {
            CForm::True => Ok(true),
            CForm::False => Ok(false),
            CForm::Atom(a) => a.holds(&self.vals),
            CForm::And(v) => {
                for g in v {
                    if !self.holds(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CForm::Or(v) => {
                for g in v {
                    if self.holds(g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            CForm::Not(g) => Ok(!self.holds(g)?),
            CForm::Exists(y, body) => self.exists(*y, body),
        }
    }

    fn exists(&mut self, y: usize, body: &CForm) -> Result<bool> {
        let saved = self.bx[y];
        self.bx[y] = Iv::FULL;
        let mut iv = body.interval(y, &self.bx);
        if !iv.is_bounded() && body.has_quantifier() {
            let mut start = self.bx.clone();
            start[y] = Iv::FULL;
            iv = iv.intersect(&bounds::box_within(body, &start)[y]);
        }
        let range = if iv.is_empty() || iv.is_bounded() {
            iv
        } else {
            self.periodic_window(y, body, iv)?
        };
        let mut found = false;
        if let (Some(lo), Some(hi)) = (range.lo, range.hi) {
            let mut x = lo;
            while x <= hi {
                let xv = i64::try_from(x).map_err(|_| Error::Overflow("search range"))?;
                self.set(y, xv);
                if self.holds(body)? {
                    found = true;
                    break;
                }
                x += 1;
            }
        }
        self.bx[y] = saved;
        Ok(found)
    }

    /// For a quantifier-free body in which `y` is the only unassigned variable, the
    /// truth of the body is constant in every comparison outside `[-M, M]` and periodic
    /// with period `D` there, so one period beyond `M` on each open side decides the
    /// search.
    fn periodic_window(&self, y: usize, body: &CForm, iv: Iv) -> Result<Iv> {
        if body.has_quantifier() {
            return Err(Error::CannotDecideFiniteness(format!(
                "bound variable #{y} (unbounded search over a nested quantifier)"
            )));
        }
        let mut m: i128 = 0;
        let mut d: i128 = 1;
        let mut err = None;
        body.visit_atoms(&mut |a| {
            let c = a.lin.coeff(y);
            if c == 0 {
                return;
            }
            match a.rel {
                Rel::Div(k) => d = d.lcm(&k),
                Rel::Le | Rel::Eq => {
                    let mut rest = a.lin.clone();
                    rest.terms.retain(|(v, _)| *v != y);
                    match rest.eval(&self.vals) {
                        Ok(r) => m = m.max(r.abs() / c.abs() + 1),
                        Err(e) => err = Some(e),
                    }
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let lo = iv.lo.unwrap_or(-m - d);
        let hi = iv.hi.unwrap_or(m.max(lo) + d);
        let lo = if iv.lo.is_none() { lo.min(hi - d) } else { lo };
        Ok(Iv::new(lo, hi))
    }
}
