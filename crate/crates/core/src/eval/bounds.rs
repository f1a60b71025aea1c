//! Finiteness analysis: a box containing every solution, or the variable that escapes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{CAtom, CForm, Compiled, Iv, Rel};
use crate::error::Result;
use crate::formula::{Formula, VarId};

/// Outcome of [`derive_bounds`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounds {
    /// One closed interval per requested variable.
    Box(Vec<(i64, i64)>),
    /// The analysis proved the formula unsatisfiable.
    Empty,
    /// No finite bound was found for this variable.
    Unbounded(VarId),
}

const PROPAGATION_ROUNDS: usize = 32;
const FM_MAX_ROWS: usize = 60;
const FM_ROW_CAP: usize = 2000;

/// Box guaranteed to contain every solution of a ground formula, for the requested
/// variables. Bound variables may be requested too.
pub fn derive_bounds(f: &Formula, nvars: usize, vars: &[VarId]) -> Result<Bounds> {
    let c = Compiled::new(f, nvars)?;
    Ok(bounds_of(&c, vars))
}

pub(crate) fn bounds_of(c: &Compiled, vars: &[VarId]) -> Bounds {
    let all = box_of(&c.form, c.nvars);
    if all.iter().any(Iv::is_empty) {
        return Bounds::Empty;
    }
    let mut out = Vec::with_capacity(vars.len());
    for &v in vars {
        match (all[v].lo, all[v].hi) {
            (Some(lo), Some(hi)) => match (i64::try_from(lo), i64::try_from(hi)) {
                (Ok(lo), Ok(hi)) => out.push((lo, hi)),
                _ => return Bounds::Unbounded(v),
            },
            _ => return Bounds::Unbounded(v),
        }
    }
    Bounds::Box(out)
}

/// Per-variable intervals: atoms give half-spaces, conjunctions intersect (with
/// propagation and Fourier–Motzkin over their linear atoms), disjunctions take the hull.
pub(crate) fn box_of(f: &CForm, n: usize) -> Vec<Iv> {
    box_within(f, &vec![Iv::FULL; n])
}

/// [`box_of`] starting from known intervals, such as points for assigned variables.
pub(crate) fn box_within(f: &CForm, start: &[Iv]) -> Vec<Iv> {
    let n = start.len();
    match f {
        CForm::True | CForm::Not(_) => start.to_vec(),
        CForm::False => vec![Iv::EMPTY; n],
        CForm::Atom(a) => tighten(&[a], start.to_vec()),
        CForm::Exists(z, g) => {
            let mut s = start.to_vec();
            s[*z] = Iv::FULL;
            box_within(g, &s)
        }
        CForm::Or(parts) => {
            let mut acc = vec![Iv::EMPTY; n];
            for p in parts {
                let b = box_within(p, start);
                if b.iter().any(Iv::is_empty) {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(&b) {
                    *a = a.hull(x);
                }
            }
            acc
        }
        CForm::And(parts) => {
            let mut bx = start.to_vec();
            let mut atoms = Vec::new();
            for p in parts {
                match p {
                    CForm::Atom(a) => atoms.push(a),
                    other => {
                        let b = box_within(other, start);
                        for (x, y) in bx.iter_mut().zip(&b) {
                            *x = x.intersect(y);
                        }
                    }
                }
            }
            if bx.iter().any(Iv::is_empty) {
                return vec![Iv::EMPTY; n];
            }
            tighten(&atoms, bx)
        }
    }
}

fn tighten(atoms: &[&CAtom], mut bx: Vec<Iv>) -> Vec<Iv> {
    let n = bx.len();
    propagate(atoms, &mut bx);
    if bx.iter().any(Iv::is_empty) {
        return vec![Iv::EMPTY; n];
    }
    let linear: Vec<&CAtom> = atoms
        .iter()
        .copied()
        .filter(|a| !matches!(a.rel, Rel::Div(_)))
        .collect();
    if !linear.is_empty() && linear.len() <= FM_MAX_ROWS {
        let vars: Vec<usize> = {
            let mut v: Vec<usize> = linear
                .iter()
                .flat_map(|a| a.lin.terms.iter().map(|(x, _)| *x))
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let rows = rows_of(&linear, &bx, &vars, n);
        for &x in &vars {
            if bx[x].is_bounded() {
                continue;
            }
            match project(rows.clone(), x) {
                Projection::Infeasible => return vec![Iv::EMPTY; n],
                Projection::Interval(iv) => bx[x] = bx[x].intersect(&iv),
                Projection::GaveUp => {}
            }
        }
        propagate(atoms, &mut bx);
    }
    if bx.iter().any(Iv::is_empty) {
        return vec![Iv::EMPTY; n];
    }
    bx
}

fn propagate(atoms: &[&CAtom], bx: &mut [Iv]) {
    for _ in 0..PROPAGATION_ROUNDS {
        let mut changed = false;
        for a in atoms {
            for &(v, _) in &a.lin.terms {
                let iv = bx[v].intersect(&a.interval(v, bx));
                if iv != bx[v] {
                    bx[v] = iv;
                    changed = true;
                }
                if iv.is_empty() {
                    return;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Row `a·x <= b`, dense over all variables.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<BigInt>,
    b: BigInt,
}

impl Row {
    /// Divide by the coefficient content, rounding the right side down.
    fn normalized(mut self) -> Row {
        let g = self.a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g > BigInt::from(1) {
            for c in &mut self.a {
                *c /= &g;
            }
            self.b = self.b.div_floor(&g);
        }
        self
    }
}

fn rows_of(atoms: &[&CAtom], bx: &[Iv], vars: &[usize], n: usize) -> Vec<Row> {
    let mut rows = Vec::new();
    for a in atoms {
        let mut coeffs = vec![BigInt::zero(); n];
        for &(v, c) in &a.lin.terms {
            coeffs[v] = BigInt::from(c);
        }
        let b = BigInt::from(-a.lin.k);
        if a.rel == Rel::Eq {
            rows.push(Row {
                a: coeffs.iter().map(|c| -c).collect(),
                b: -&b,
            });
        }
        rows.push(Row { a: coeffs, b });
    }
    for &v in vars {
        let mut unit = vec![BigInt::zero(); n];
        if let Some(h) = bx[v].hi {
            unit[v] = BigInt::from(1);
            rows.push(Row {
                a: unit.clone(),
                b: BigInt::from(h),
            });
        }
        if let Some(l) = bx[v].lo {
            unit[v] = BigInt::from(-1);
            rows.push(Row {
                a: unit,
                b: BigInt::from(-l),
            });
        }
    }
    rows.into_iter().map(Row::normalized).collect()
}

enum Projection {
    Interval(Iv),
    Infeasible,
    GaveUp,
}

/// Fourier–Motzkin elimination of every variable except `keep`.
fn project(mut rows: Vec<Row>, keep: usize) -> Projection {
    let n = rows.first().map_or(0, |r| r.a.len());
    loop {
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| v != keep && rows.iter().any(|r| !r.a[v].is_zero()))
            .collect();
        let Some(&v) = candidates.iter().min_by_key(|&&v| {
            let pos = rows.iter().filter(|r| r.a[v].is_positive()).count();
            let neg = rows.iter().filter(|r| r.a[v].is_negative()).count();
            pos * neg
        }) else {
            break;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        if rest.len() + pos.len() * neg.len() > FM_ROW_CAP {
            return Projection::GaveUp;
        }
        for p in &pos {
            for q in &neg {
                let (mp, mq) = (-&q.a[v], p.a[v].clone());
                let a: Vec<BigInt> = p.a.iter().zip(&q.a).map(|(x, y)| x * &mp + y * &mq).collect();
                let b = &p.b * &mp + &q.b * &mq;
                rest.push(Row { a, b }.normalized());
            }
        }
        rows = rest;
    }
    let mut iv = Iv::FULL;
    for r in rows {
        let c = &r.a[keep];
        let bound = if c.is_zero() {
            if r.b.is_negative() {
                return Projection::Infeasible;
            }
            continue;
        } else if c.is_positive() {
            Iv {
                lo: None,
                hi: r.b.div_floor(c).to_i128(),
            }
        } else {
            Iv {
                lo: (-&r.b).div_ceil(&-c).to_i128(),
                hi: None,
            }
        };
        iv = iv.intersect(&bound);
    }
    if iv.is_empty() {
        Projection::Infeasible
    } else {
        Projection::Interval(iv)
    }
}
