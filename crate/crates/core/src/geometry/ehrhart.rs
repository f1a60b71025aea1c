//! Ehrhart quasi-polynomials of rational polytopes.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::linalg::{dot, hrep_from_vertices};
use super::{affine_dimension, count_polytope_points, denominator_lcm, distinct, HPolytope, Polygon, Q};
use crate::arith::rat;
use crate::error::{Error, Result};
use crate::fit::fit_qp_fixed;
use crate::qpoly::QuasiPolynomial;

/// A polytope given by its vertices (or any finite point set whose hull it is), or by
/// constant inequality rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeSpec {
    Vertices(Vec<Vec<Q>>),
    Rows(HPolytope),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartFit {
    pub qp: QuasiPolynomial,
    pub period: usize,
    pub degree: usize,
    pub vertices: Vec<Vec<Q>>,
    /// Volume used for the leading-coefficient check, when it was performed.
    pub volume: Option<Q>,
}

const EXTRA_DILATES_PER_CLASS: i64 = 2;

/// `t ↦ |tP ∩ Z^d|` as a quasi-polynomial.
///
/// The period is the lcm of the vertex denominators and the degree the dimension of
/// `P`. Each constituent is interpolated from exact counts and checked at further
/// dilates; the residue-0 constituent must be 1 at `t = 0`, and for full-dimensional
/// `P` in dimension at most 3 every leading coefficient must equal the volume.
pub fn ehrhart_qp(spec: &PolytopeSpec) -> Result<EhrhartFit> {
    let h = match spec {
        PolytopeSpec::Vertices(vs) => {
            let d = vs.first().map(Vec::len).ok_or(Error::EmptySet)?;
            if d == 0 || vs.iter().any(|v| v.len() != d) {
                return Err(Error::InvalidInput("vertices must share a positive dimension".into()));
            }
            HPolytope::from_big_rows(d, &hrep_from_vertices(vs))?
        }
        PolytopeSpec::Rows(h) => {
            if !h.is_constant() {
                return Err(Error::InvalidInput("Ehrhart dilation needs constant rows".into()));
            }
            super::bounding_box(h, 0)?;
            h.clone()
        }
    };
    let vertices = h.vertices(0);
    if vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    let period = denominator_lcm(&vertices)
        .to_usize()
        .ok_or(Error::Overflow("Ehrhart period"))?;
    let degree = affine_dimension(&vertices) as usize;
    let family = h.dilate();
    let oracle = |t: i64| count_polytope_points(&family, t);
    let qp = fit_qp_fixed(&oracle, period, degree, 1)?;

    let s = period as i64;
    for r in 0..s {
        let first = 1 + (r - 1).rem_euclid(s);
        for k in 1..=EXTRA_DILATES_PER_CLASS {
            let t = first + (degree as i64 + k) * s;
            if qp.eval(t) != Q::from_integer(oracle(t)?) {
                return Err(Error::FitFailed(format!(
                    "Ehrhart candidate disagrees with the count at dilate {t}"
                )));
            }
        }
    }
    if qp.constituent(0).eval_i64(0) != rat(1) {
        return Err(Error::Internal("residue-0 constituent is not 1 at t = 0".into()));
    }
    let volume = if degree == h.dim {
        polytope_volume(&vertices)
    } else {
        None
    };
    if let Some(v) = &volume {
        let bad = qp.constituents().iter().any(|c| &c.coeff(degree) != v);
        if bad {
            return Err(Error::Internal(format!(
                "leading coefficient differs from the volume {v}"
            )));
        }
    }
    Ok(EhrhartFit {
        qp: qp.canonicalize(),
        period,
        degree,
        vertices,
        volume,
    })
}

/// Volume of a full-dimensional polytope of dimension 1, 2 or 3 given by its vertices;
/// `None` otherwise.
pub fn polytope_volume(vertices: &[Vec<Q>]) -> Option<Q> {
    let vs = distinct(vertices.to_vec());
    let d = vs.first()?.len();
    if affine_dimension(&vs) != d as isize {
        return None;
    }
    match d {
        1 => {
            let lo = vs.iter().map(|v| &v[0]).min()?;
            let hi = vs.iter().map(|v| &v[0]).max()?;
            Some(hi - lo)
        }
        2 => Some(Polygon::new(vs.iter().map(|v| (v[0].clone(), v[1].clone())).collect()).area()),
        3 => Some(volume_3d(&vs)),
        _ => None,
    }
}

/// Cone from the centroid over a fan triangulation of every facet.
fn volume_3d(vs: &[Vec<Q>]) -> Q {
    let n = Q::from_integer(vs.len().into());
    let c: Vec<Q> = (0..3)
        .map(|i| vs.iter().map(|v| v[i].clone()).sum::<Q>() / &n)
        .collect();
    let facets: BTreeSet<Vec<usize>> = hrep_from_vertices(vs)
        .into_iter()
        .map(|(a, b)| {
            let qa: Vec<Q> = a.into_iter().map(Q::from_integer).collect();
            let qb = Q::from_integer(b);
            (0..vs.len()).filter(|&i| dot(&qa, &vs[i]) == qb).collect::<Vec<_>>()
        })
        .filter(|tight| tight.len() >= 3)
        .collect();
    let facets: Vec<Vec<usize>> = facets.into_iter().collect();
    let sub = |a: &[Q], b: &[Q]| -> Vec<Q> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let det = |u: &[Q], v: &[Q], w: &[Q]| -> Q {
        &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
            + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0])
    };
    let mut vol = Q::zero();
    for f in &facets {
        let f0 = f[0];
        for g in &facets {
            if g == f {
                continue;
            }
            let edge: Vec<usize> = f.iter().copied().filter(|i| g.contains(i)).collect();
            if edge.len() == 2 && !edge.contains(&f0) {
                let (a, b) = (&vs[edge[0]], &vs[edge[1]]);
                vol += det(&sub(&vs[f0], &c), &sub(a, &c), &sub(b, &c)).abs();
            }
        }
    }
    vol / Q::from_integer(6.into())
}
