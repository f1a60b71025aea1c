//! Lattice points of polytopes: Pick's theorem, Ehrhart quasi-polynomials, parametric
//! counts and integer hulls.

mod ehrhart;
mod hull_eqp;
mod linalg;
mod polygon;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::IntPoly;
use crate::error::{Error, Result};
use crate::eval::{count_points, derive_bounds, Bounds, Cardinality, CountOptions};
use crate::fit::{detect_and_fit_eqp, FitConfig, FitOutcome};
use crate::formula::{ground, Atom, Formula, Program, Term, VarDecl, VarKind};
use crate::qpoly::Pqp;

pub use ehrhart::{ehrhart_qp, polytope_volume, EhrhartFit, PolytopeSpec};
pub use hull_eqp::{parametric_hull_vertices, HullClass, HullVertexFit};
pub use linalg::affine_dimension;
pub use polygon::{convex_hull, integer_hull_2d, pick_count, PickCount, Point2, Polygon};

pub type Q = BigRational;

/// `normal·x <= rhs`, entries polynomial in the parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRow {
    pub normal: Vec<IntPoly>,
    pub rhs: IntPoly,
}

/// Conjunction of rows `a(t)·x <= b(t)` in dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub rows: Vec<HRow>,
}

fn int(k: i64) -> IntPoly {
    IntPoly::constant(BigInt::from(k))
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<HRow>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.normal.len() != dim) {
            return Err(Error::InvalidInput(format!("row {i} has the wrong length")));
        }
        Ok(HPolytope { dim, rows })
    }

    /// Rows with integer entries, `(a, b)` for `a·x <= b`.
    pub fn from_ints(rows: &[(Vec<i64>, i64)]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.0.len());
        Self::new(
            dim,
            rows.iter()
                .map(|(a, b)| HRow {
                    normal: a.iter().map(|&k| int(k)).collect(),
                    rhs: int(*b),
                })
                .collect(),
        )
    }

    pub fn from_big_rows(dim: usize, rows: &[(Vec<BigInt>, BigInt)]) -> Result<Self> {
        Self::new(
            dim,
            rows.iter()
                .map(|(a, b)| HRow {
                    normal: a.iter().map(|k| IntPoly::constant(k.clone())).collect(),
                    rhs: IntPoly::constant(b.clone()),
                })
                .collect(),
        )
    }

    pub fn is_constant(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.rhs.is_constant() && r.normal.iter().all(IntPoly::is_constant))
    }

    /// The dilate family `tP` of a constant polytope: right-hand sides times `t`.
    pub fn dilate(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| HRow {
                    normal: r.normal.clone(),
                    rhs: &r.rhs * &IntPoly::var(),
                })
                .collect(),
        }
    }

    /// Integer rows at parameter value `t`.
    pub fn ground(&self, t: i64) -> Vec<(Vec<BigInt>, BigInt)> {
        self.rows
            .iter()
            .map(|r| (r.normal.iter().map(|a| a.eval_i64(t)).collect(), r.rhs.eval_i64(t)))
            .collect()
    }

    /// `param t; free x1 .. xd;` with one atom per row.
    pub fn to_program(&self) -> Program {
        let mut decls = vec![VarDecl {
            name: "t".into(),
            kind: VarKind::Parameter,
        }];
        decls.extend((1..=self.dim).map(|i| VarDecl {
            name: format!("x{i}"),
            kind: VarKind::Free,
        }));
        let atoms = self
            .rows
            .iter()
            .map(|r| {
                let mut lhs = Term::zero();
                for (i, a) in r.normal.iter().enumerate() {
                    lhs = lhs.add(&Term::monomial(i + 1, a.clone()));
                }
                Formula::le(lhs, Term::constant(r.rhs.clone()))
            })
            .collect();
        Program {
            decls,
            formula: Formula::and(atoms),
        }
    }

    /// Rows of a quantifier-free conjunction of linear inequalities and equations
    /// over the free variables, with at most one parameter.
    pub fn from_program(p: &Program) -> Result<Self> {
        let params = p.params();
        if params.len() > 1 {
            return Err(Error::InvalidInput(
                "a polytope family takes at most one parameter".into(),
            ));
        }
        let free = p.free_vars();
        if free.is_empty() {
            return Err(Error::InvalidInput("no free variables".into()));
        }
        let mut atoms = Vec::new();
        collect_conjuncts(&p.formula, &mut atoms)?;
        let mut rows = Vec::new();
        for atom in atoms {
            let (e, both) = match atom {
                Atom::Le(a, b) => (a.sub(b), false),
                Atom::Eq(a, b) => (a.sub(b), true),
                Atom::Div(..) => {
                    return Err(Error::InvalidInput(
                        "divisibility constraints do not define a polytope".into(),
                    ))
                }
            };
            if let Some(v) = e.vars().find(|v| !free.contains(v)) {
                return Err(Error::InvalidInput(format!("`{}` is not a free variable", p.name(v))));
            }
            let normal: Vec<IntPoly> = free.iter().map(|&v| e.coeff(v)).collect();
            let rhs = -&e.constant;
            if both {
                rows.push(HRow {
                    normal: normal.iter().map(|a| -a).collect(),
                    rhs: -&rhs,
                });
            }
            rows.push(HRow { normal, rhs });
        }
        HPolytope::new(free.len(), rows)
    }

    /// Rational vertices at parameter value `t`.
    pub fn vertices(&self, t: i64) -> Vec<Vec<Q>> {
        linalg::vertices(&self.ground(t), self.dim)
    }
}

/// Box of the polytope at `t`, `None` if empty.
fn bounding_box(p: &HPolytope, t: i64) -> Result<Option<Vec<(i64, i64)>>> {
    let g = ground(&p.to_program(), &[t])?;
    let vars = g.free_vars();
    match derive_bounds(&g.formula, g.decls.len(), &vars)? {
        Bounds::Box(b) => Ok(Some(b)),
        Bounds::Empty => Ok(None),
        Bounds::Unbounded(_) => Err(Error::UnboundedPolyhedron(t)),
    }
}

/// Integer y-range of a grounded 2D polygon in column `x`.
fn column(rows: &[(Vec<BigInt>, BigInt)], x: i64) -> Option<(i64, i64)> {
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    let x = BigInt::from(x);
    for (a, b) in rows {
        let rest = b - &a[0] * &x;
        let c = &a[1];
        if c.is_zero() {
            if rest.is_negative() {
                return None;
            }
        } else if c.is_positive() {
            let h = rest.div_floor(c);
            hi = Some(hi.map_or(h.clone(), |v: BigInt| v.min(h)));
        } else {
            let l = (-rest).div_ceil(&-c);
            lo = Some(lo.map_or(l.clone(), |v: BigInt| v.max(l)));
        }
    }
    let (lo, hi) = (lo?.to_i64()?, hi?.to_i64()?);
    (lo <= hi).then_some((lo, hi))
}

/// Lattice points of a bounded 2D polygon, column by column.
fn count_columns(p: &HPolytope, t: i64, bx: &[(i64, i64)]) -> BigInt {
    let rows = p.ground(t);
    let mut n = BigInt::zero();
    for x in bx[0].0..=bx[0].1 {
        if let Some((lo, hi)) = column(&rows, x) {
            n += hi - lo + 1;
        }
    }
    n
}

const PICK_CROSS_CHECK_WIDTH: i64 = 2000;

fn collect_conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Atom>) -> Result<()> {
    match f {
        Formula::True => Ok(()),
        Formula::Atom(a) => {
            out.push(a);
            Ok(())
        }
        Formula::And(parts) => parts.iter().try_for_each(|g| collect_conjuncts(g, out)),
        _ => Err(Error::InvalidInput(
            "a polytope is a conjunction of linear inequalities and equations".into(),
        )),
    }
}

/// The twisting square `|2x + (2t-2)y| <= t²-2t+2`, `|(2-2t)x + 2y| <= t²-2t+2`.
pub fn twisting_square() -> HPolytope {
    let r = IntPoly::from_i64s(&[2, -2, 1]);
    let row = |a: &[i64], b: &[i64]| HRow {
        normal: vec![IntPoly::from_i64s(a), IntPoly::from_i64s(b)],
        rhs: r.clone(),
    };
    HPolytope {
        dim: 2,
        rows: vec![
            row(&[2], &[-2, 2]),
            row(&[-2], &[2, -2]),
            row(&[2, -2], &[2]),
            row(&[-2, 2], &[-2]),
        ],
    }
}

/// `|P(t) ∩ Z^d|`, exact.
///
/// Plane polygons with integer vertices use Pick's theorem (cross-checked by column
/// enumeration when narrow); everything else enumerates the derived box.
pub fn count_polytope_points(p: &HPolytope, t: i64) -> Result<BigInt> {
    let Some(bx) = bounding_box(p, t)? else {
        return Ok(BigInt::zero());
    };
    if p.dim == 2 {
        let vs = p.vertices(t);
        let integral = vs.iter().all(|v| v.iter().all(|c| c.is_integer()));
        if integral && affine_dimension(&vs) == 2 {
            let poly = Polygon::new(vs.iter().map(|v| (v[0].clone(), v[1].clone())).collect());
            let pick = pick_count(&poly)?;
            if bx[0].1 - bx[0].0 <= PICK_CROSS_CHECK_WIDTH {
                let direct = count_columns(p, t, &bx);
                if direct != pick.total {
                    return Err(Error::Internal(format!(
                        "Pick count {} disagrees with enumeration {direct} at t = {t}",
                        pick.total
                    )));
                }
            }
            return Ok(pick.total);
        }
        return Ok(count_columns(p, t, &bx));
    }
    let opts = CountOptions {
        user_box: Some(bx),
        ..CountOptions::default()
    };
    match count_points(&p.to_program(), &[t], &opts)?.cardinality {
        Cardinality::Finite(n) => Ok(n),
        Cardinality::Infinite => Err(Error::UnboundedPolyhedron(t)),
    }
}

/// Fit the lattice-point count of a parametric polytope as an EQP in `t`.
pub fn parametric_count_eqp(p: &HPolytope, config: &FitConfig) -> Result<FitOutcome> {
    // an unbounded sample is an error, not a missing value
    let oracle = |t: i64| count_polytope_points(p, t);
    let first_unbounded = std::sync::Mutex::new(None::<i64>);
    let guarded = |t: i64| {
        let r = oracle(t);
        if let Err(Error::UnboundedPolyhedron(u)) = &r {
            let mut g = first_unbounded.lock().unwrap();
            *g = Some(g.map_or(*u, |v: i64| v.min(*u)));
        }
        r
    };
    let out = detect_and_fit_eqp(&guarded, config);
    if let Some(t) = *first_unbounded.lock().unwrap() {
        return Err(Error::UnboundedPolyhedron(t));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub ok: bool,
    pub points_checked: usize,
    pub first_mismatch: Option<Vec<i64>>,
}

/// Compare a PQP with direct counts of `prog` at every grid point, in lexicographic
/// order. The PQP's parameter names are matched to the program's parameters.
///
/// With `domain_only`, grid points outside every piece are skipped instead of failing.
pub fn verify_pqp_on_grid(pqp: &Pqp, prog: &Program, ranges: &[(i64, i64)], domain_only: bool) -> Result<GridReport> {
    let params = prog.params();
    if params.len() != pqp.params.len() || ranges.len() != params.len() {
        return Err(Error::InvalidInput(format!(
            "the PQP has {} parameters, the formula {}, the grid {}",
            pqp.params.len(),
            params.len(),
            ranges.len()
        )));
    }
    let order: Vec<usize> = params
        .iter()
        .map(|&v| {
            pqp.params
                .iter()
                .position(|n| n == prog.name(v))
                .ok_or_else(|| Error::InvalidInput(format!("parameter {} missing from the PQP", prog.name(v))))
        })
        .collect::<Result<_>>()?;
    let mut report = GridReport {
        ok: true,
        points_checked: 0,
        first_mismatch: None,
    };
    let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|r| r.0 > r.1) {
        return Ok(report);
    }
    loop {
        // `point` is in PQP order; the program wants declaration order
        let covered = !pqp.covering(&point).is_empty();
        if covered || !domain_only {
            let expected = pqp.eval(&point)?;
            let prog_params: Vec<i64> = order.iter().map(|&i| point[i]).collect();
            let got = count_points(prog, &prog_params, &CountOptions::default())?;
            report.points_checked += 1;
            let same = got.value().is_some_and(|n| Q::from_integer(n.clone()) == expected);
            if !same {
                report.ok = false;
                report.first_mismatch = Some(point.clone());
                return Ok(report);
            }
        }
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return Ok(report);
            }
            k -= 1;
            if point[k] < ranges[k].1 {
                point[k] += 1;
                break;
            }
            point[k] = ranges[k].0;
        }
    }
}

/// Denominator lcm of all coordinates.
fn denominator_lcm(points: &[Vec<Q>]) -> BigInt {
    points.iter().flatten().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}

fn distinct(points: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    points.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}
