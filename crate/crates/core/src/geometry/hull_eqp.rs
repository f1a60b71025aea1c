//! Integer-hull vertices of a parametric plane polygon as functions of `t`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::polygon::column_extremes;
use super::{convex_hull, HPolytope, Q};
use crate::arith::{interpolate, rat, RatPoly};
use crate::error::{Error, Result};
use crate::fit::{detect_degree, first_in_class, FitConfig, START_OFFSETS};

/// Vertices of the hull on one residue class, as polynomials in `t`, valid for every
/// `t ≡ residue` with `t >= threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullClass {
    pub residue: usize,
    pub threshold: i64,
    /// Counterclockwise from the lexicographically largest vertex.
    pub vertices: Vec<(RatPoly, RatPoly)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullVertexFit {
    pub period: usize,
    pub classes: Vec<HullClass>,
}

type Hull = Vec<(BigInt, BigInt)>;

/// Integer hull at `t`, counterclockwise from the lexicographically largest vertex.
fn anchored_hull(p: &HPolytope, t: i64) -> Result<Hull> {
    let pts: Vec<(Q, Q)> = column_extremes(p, t)?
        .into_iter()
        .map(|(x, y)| (rat(x), rat(y)))
        .collect();
    let mut hull: Hull = convex_hull(pts)
        .into_iter()
        .map(|(x, y)| (x.to_integer(), y.to_integer()))
        .collect();
    if let Some(k) = (0..hull.len()).max_by(|&i, &j| hull[i].cmp(&hull[j])) {
        hull.rotate_left(k);
    }
    Ok(hull)
}

struct Hulls<'a> {
    p: &'a HPolytope,
    cache: Mutex<HashMap<i64, Option<Hull>>>,
}

impl Hulls<'_> {
    fn get_many(&self, ts: &[i64]) -> Result<Vec<Option<Hull>>> {
        let missing: Vec<i64> = {
            let c = self.cache.lock().unwrap();
            ts.iter().copied().filter(|t| !c.contains_key(t)).collect()
        };
        let fresh: Vec<(i64, Option<Hull>)> = missing
            .par_iter()
            .map(|&t| match anchored_hull(self.p, t) {
                Ok(h) => Ok((t, Some(h))),
                Err(Error::UnboundedPolyhedron(u)) => Err(Error::UnboundedPolyhedron(u)),
                Err(_) => Ok((t, None)),
            })
            .collect::<Result<_>>()?;
        let mut c = self.cache.lock().unwrap();
        c.extend(fresh);
        Ok(ts.iter().map(|t| c[t].clone()).collect())
    }
}

enum Attempt {
    Fit(Vec<HullClass>),
    Unstable(usize),
    NotPolynomial,
}

/// Fit every hull-vertex coordinate as a polynomial on each residue class.
///
/// Periods are tried in increasing order, each with the same start offsets as
/// [`crate::fit::detect_and_fit_eqp`]. On a class, the hulls at the probe points must
/// have the same number of vertices; vertex `i` is the `i`-th counterclockwise from
/// the lexicographically largest. Each coordinate sequence must have vanishing finite
/// differences on the probe window and extrapolate to the verification points.
pub fn parametric_hull_vertices(p: &HPolytope, config: &FitConfig) -> Result<HullVertexFit> {
    config.validate()?;
    if p.dim != 2 {
        return Err(Error::InvalidInput(format!(
            "integer hulls need dimension 2, got {}",
            p.dim
        )));
    }
    let hulls = Hulls {
        p,
        cache: Mutex::new(HashMap::new()),
    };
    let window = config.max_degree + config.verify_points_per_class + 2;
    let mut unstable = None;
    for s in 1..=config.max_period as i64 {
        for off in START_OFFSETS {
            let start = config.sample_start + off;
            match attempt(&hulls, s, start, window, config)? {
                Attempt::Fit(classes) => {
                    return Ok(HullVertexFit {
                        period: s as usize,
                        classes,
                    })
                }
                Attempt::Unstable(r) => unstable = Some((s as usize, r)),
                Attempt::NotPolynomial => {}
            }
        }
    }
    match unstable {
        Some((period, residue)) => Err(Error::VertexCountUnstable { period, residue }),
        None => Err(Error::FitFailed(
            "hull vertices are not polynomial on any residue class".into(),
        )),
    }
}

fn attempt(hulls: &Hulls, s: i64, start: i64, window: usize, config: &FitConfig) -> Result<Attempt> {
    let total = window + config.verify_points_per_class;
    let mut classes = Vec::with_capacity(s as usize);
    for r in 0..s {
        let t0 = first_in_class(start, r, s);
        let ts: Vec<i64> = (0..total as i64).map(|k| t0 + k * s).collect();
        let Some(hs) = hulls.get_many(&ts)?.into_iter().collect::<Option<Vec<Hull>>>() else {
            return Ok(Attempt::NotPolynomial);
        };
        let n = hs[0].len();
        if n == 0 || hs.iter().any(|h| h.len() != n) {
            return Ok(Attempt::Unstable(r as usize));
        }
        let mut vertices = Vec::with_capacity(n);
        for i in 0..n {
            let xs: Vec<BigInt> = hs.iter().map(|h| h[i].0.clone()).collect();
            let ys: Vec<BigInt> = hs.iter().map(|h| h[i].1.clone()).collect();
            match (
                fit_coordinate(&ts, &xs, window, config.max_degree),
                fit_coordinate(&ts, &ys, window, config.max_degree),
            ) {
                (Some(x), Some(y)) => vertices.push((x, y)),
                _ => return Ok(Attempt::NotPolynomial),
            }
        }
        let threshold = class_threshold(hulls, &vertices, t0, s, config.sample_start)?;
        classes.push(HullClass {
            residue: r as usize,
            threshold,
            vertices,
        });
    }
    Ok(Attempt::Fit(classes))
}

fn fit_coordinate(ts: &[i64], vals: &[BigInt], window: usize, max_degree: usize) -> Option<RatPoly> {
    let d = detect_degree(&vals[..window], max_degree)?;
    let pts: Vec<(Q, Q)> = ts[..=d]
        .iter()
        .zip(vals)
        .map(|(&t, v)| (rat(t), Q::from_integer(v.clone())))
        .collect();
    let p = interpolate(&pts);
    let ok = ts[window..]
        .iter()
        .zip(&vals[window..])
        .all(|(&t, v)| p.eval_i64(t) == Q::from_integer(v.clone()));
    ok.then_some(p)
}

/// Least class member, scanning down from `t0`, from which the fitted vertices match.
fn class_threshold(hulls: &Hulls, vertices: &[(RatPoly, RatPoly)], t0: i64, s: i64, floor: i64) -> Result<i64> {
    let mut threshold = t0;
    let mut t = t0 - s;
    while t >= floor {
        let expected: Option<Hull> = vertices
            .iter()
            .map(|(x, y)| {
                let (x, y) = (x.eval_i64(t), y.eval_i64(t));
                (x.is_integer() && y.is_integer()).then(|| (x.to_integer(), y.to_integer()))
            })
            .collect();
        let got = hulls.get_many(&[t])?.pop().unwrap();
        if got.is_none() || got != expected {
            break;
        }
        threshold = t;
        t -= s;
    }
    Ok(threshold)
}
