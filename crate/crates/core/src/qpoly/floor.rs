//! `t ↦ floor(f(t) / g(t))` as a certified EQP.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Eqp, QuasiPolynomial};
use crate::arith::{eventual_sign, interpolate, poly_divmod, rat, IntPoly, RatPoly, Sign};
use crate::error::{Error, Result};

pub const DEFAULT_FLOOR_MAX_PERIOD: usize = 360;

/// Symbolic evidence for one residue class `t = s·u + r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCertificate {
    pub residue: usize,
    /// Eventual sign and threshold (in `u`) of `f - g·p`, sign is 0 or +1.
    pub lower: (Sign, i64),
    /// Eventual sign and threshold (in `u`) of `g·(p + 1) - f`, sign is +1.
    pub upper: (Sign, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorDiv {
    pub eqp: Eqp,
    /// Every `t` at or above this value is covered by the symbolic certificate.
    pub certified_from: i64,
    pub classes: Vec<ClassCertificate>,
}

pub fn poly_floor_div(f: &IntPoly, g: &IntPoly) -> Result<FloorDiv> {
    poly_floor_div_with(f, g, DEFAULT_FLOOR_MAX_PERIOD)
}

fn floor_value(f: &IntPoly, g: &IntPoly, t: i64) -> Option<BigInt> {
    let d = g.eval_i64(t);
    (!d.is_zero()).then(|| f.eval_i64(t).div_floor(&d))
}

pub fn poly_floor_div_with(f: &IntPoly, g: &IntPoly, max_period: usize) -> Result<FloorDiv> {
    let (qp, certified_from, classes) = certified_quotient(f, g, max_period)?;
    let eqp = Eqp::from_scan(qp, 1, certified_from, |t| floor_value(f, g, t));
    Ok(FloorDiv {
        eqp,
        certified_from,
        classes,
    })
}

/// Certified QP for `floor(f/g)` and the point from which it is exact, without the
/// exception scan below that point.
pub(crate) fn certified_quotient(
    f: &IntPoly,
    g: &IntPoly,
    max_period: usize,
) -> Result<(QuasiPolynomial, i64, Vec<ClassCertificate>)> {
    if g.is_zero() {
        return Err(Error::DivisionByZeroPoly);
    }
    let (orig_f, orig_g) = (f, g);
    let (gs, _) = eventual_sign(&g.to_rat());
    let (f, g) = if gs == Sign::Negative {
        (-f, -g)
    } else {
        (f.clone(), g.clone())
    };
    let (fr, gr) = (f.to_rat(), g.to_rat());
    let (_, g_pos) = eventual_sign(&gr);

    // f = q·g + r over Q. With L the denominator lcm of q, floor(f/g) is periodic
    // modulo L once sign(r) is settled and |L·r| < g.
    let (q, r) = poly_divmod(&fr, &gr)?;
    let l = q.denominator_lcm();
    let lr = r.scale(&BigRational::from_integer(l.clone()));
    let start = [
        g_pos,
        eventual_sign(&r).1,
        eventual_sign(&(&gr - &lr)).1,
        eventual_sign(&(&gr + &lr)).1,
        1,
    ]
    .into_iter()
    .max()
    .unwrap();
    let degree = (f.degree() - g.degree()).max(0) as usize;

    for s in 1..=max_period {
        if !l.is_multiple_of(&BigInt::from(s)) {
            continue;
        }
        let Some(candidate) = fit_candidate(&f, &g, s, degree, start) else {
            continue;
        };
        if let Some((classes, certified_from)) = certify(&fr, &gr, &candidate) {
            let certified_from = certified_from.max(g_pos).max(1);
            return Ok((candidate.canonicalize(), certified_from, classes));
        }
    }
    Err(Error::FitFailed(format!(
        "floor({orig_f} / ({orig_g})) has no certified period <= {max_period}"
    )))
}

/// Interpolate each class through `degree + 1` samples at or after `start`, then
/// reject cheaply if two further samples disagree.
fn fit_candidate(f: &IntPoly, g: &IntPoly, s: usize, degree: usize, start: i64) -> Option<QuasiPolynomial> {
    let s_i = s as i64;
    let mut constituents = Vec::with_capacity(s);
    for r in 0..s_i {
        let first = start + (r - start).rem_euclid(s_i);
        let pts: Vec<(BigRational, BigRational)> = (0..=degree as i64)
            .map(|k| {
                let t = first + k * s_i;
                let v = floor_value(f, g, t).expect("g positive past start");
                (rat(t), BigRational::from_integer(v))
            })
            .collect();
        let p = interpolate(&pts);
        for k in 1..=2 {
            let t = first + (degree as i64 + k) * s_i;
            let v = floor_value(f, g, t).expect("g positive past start");
            if p.eval_i64(t) != BigRational::from_integer(v) {
                return None;
            }
        }
        constituents.push(p);
    }
    Some(QuasiPolynomial::new(constituents))
}

fn certify(f: &RatPoly, g: &RatPoly, candidate: &QuasiPolynomial) -> Option<(Vec<ClassCertificate>, i64)> {
    let s = candidate.period();
    let one = RatPoly::constant(BigRational::one());
    let mut classes = Vec::with_capacity(s);
    let mut from = 0i64;
    for (r, p) in candidate.constituents().iter().enumerate() {
        let (a, b) = (rat(s as i64), rat(r as i64));
        let fs = f.compose_affine(&a, &b);
        let gs = g.compose_affine(&a, &b);
        let ps = p.compose_affine(&a, &b);
        let lower = eventual_sign(&(&fs - &(&gs * &ps)));
        let upper = eventual_sign(&(&(&gs * &(&ps + &one)) - &fs));
        if lower.0 == Sign::Negative || upper.0 != Sign::Positive {
            return None;
        }
        let u0 = lower.1.max(upper.1);
        from = from.max(u0.saturating_mul(s as i64).saturating_add(r as i64));
        classes.push(ClassCertificate {
            residue: r,
            lower,
            upper,
        });
    }
    Some((classes, from))
}
