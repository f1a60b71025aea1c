//! Plane polygons: convex hulls, Pick's theorem, integer hulls.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{bounding_box, column, HPolytope, Q};
use crate::error::{Error, Result};

pub type Point2 = (Q, Q);

/// Convex polygon, vertices counterclockwise starting from the lexicographically
/// smallest, with no three consecutive vertices collinear. Segments and single points
/// are allowed and flagged as degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
    pub degenerate: bool,
}

impl Polygon {
    /// Convex hull of the given points.
    pub fn new(points: Vec<Point2>) -> Polygon {
        let vertices = convex_hull(points);
        let degenerate = vertices.len() < 3;
        Polygon { vertices, degenerate }
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Polygon {
        Polygon::new(
            points
                .iter()
                .map(|&(x, y)| (Q::from_integer(x.into()), Q::from_integer(y.into())))
                .collect(),
        )
    }

    /// Shoelace area.
    pub fn area(&self) -> Q {
        let n = self.vertices.len();
        let twice: Q = (0..n)
            .map(|i| {
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                &a.0 * &b.1 - &b.0 * &a.1
            })
            .sum();
        twice / Q::from_integer(2.into())
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point2) -> bool {
        let n = self.vertices.len();
        match n {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => {
                cross(&self.vertices[0], &self.vertices[1], p).is_zero()
                    && within(&self.vertices[0], &self.vertices[1], p)
            }
            _ => (0..n).all(|i| !cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative()),
        }
    }
}

fn within(a: &Point2, b: &Point2, p: &Point2) -> bool {
    let between = |x: &Q, y: &Q, z: &Q| (x <= z && z <= y) || (y <= z && z <= x);
    between(&a.0, &b.0, &p.0) && between(&a.1, &b.1, &p.1)
}

/// `(b - a) × (c - a)`; positive for a left turn.
fn cross(a: &Point2, b: &Point2, c: &Point2) -> Q {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

/// Monotone-chain convex hull, counterclockwise, collinear points dropped.
pub fn convex_hull(mut points: Vec<Point2>) -> Vec<Point2> {
    points.sort();
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &points {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in points.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PickCount {
    pub area: Q,
    pub interior: BigInt,
    pub boundary: BigInt,
    pub total: BigInt,
}

/// Lattice points of an integer polygon by Pick's theorem `A = i + b/2 - 1`.
pub fn pick_count(p: &Polygon) -> Result<PickCount> {
    if let Some(v) = p.vertices.iter().find(|v| !v.0.is_integer() || !v.1.is_integer()) {
        return Err(Error::NonIntegralVertex(format!("({}, {})", v.0, v.1)));
    }
    if p.degenerate {
        return Err(Error::InvalidInput(
            "Pick's theorem needs a polygon with interior".into(),
        ));
    }
    let n = p.vertices.len();
    let boundary = (0..n).fold(BigInt::zero(), |acc, i| {
        let (a, b) = (&p.vertices[i], &p.vertices[(i + 1) % n]);
        let dx = (&b.0 - &a.0).to_integer().abs();
        let dy = (&b.1 - &a.1).to_integer().abs();
        acc + dx.gcd(&dy)
    });
    let area = p.area();
    // i = A - b/2 + 1
    let interior = (&area - Q::new(boundary.clone(), 2.into()) + Q::from_integer(1.into())).to_integer();
    let total = &interior + &boundary;
    Ok(PickCount {
        area,
        interior,
        boundary,
        total,
    })
}

/// Lattice points of a bounded plane polytope that can be hull vertices: the lowest and
/// highest point of every column.
pub(crate) fn column_extremes(p: &HPolytope, t: i64) -> Result<Vec<(i64, i64)>> {
    if p.dim != 2 {
        return Err(Error::InvalidInput(format!(
            "integer hulls need dimension 2, got {}",
            p.dim
        )));
    }
    let Some(bx) = bounding_box(p, t)? else {
        return Ok(Vec::new());
    };
    let rows = p.ground(t);
    let mut out = Vec::new();
    for x in bx[0].0..=bx[0].1 {
        if let Some((lo, hi)) = column(&rows, x) {
            out.push((x, lo));
            if hi != lo {
                out.push((x, hi));
            }
        }
    }
    Ok(out)
}

/// Convex hull of `P(t) ∩ Z²`.
pub fn integer_hull_2d(p: &HPolytope, t: i64) -> Result<Polygon> {
    let pts = column_extremes(p, t)?;
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Polygon::new(
        pts.into_iter()
            .map(|(x, y)| (Q::from_integer(x.into()), Q::from_integer(y.into())))
            .collect(),
    ))
}
