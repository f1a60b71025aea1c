//! `t ↦ gcd(f₁(t), …, f_k(t))` as an EQP, by a Euclidean algorithm that splits
//! residue classes whenever a quotient or remainder needs it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::floor::{certified_quotient, DEFAULT_FLOOR_MAX_PERIOD};
use super::{Eqp, QuasiPolynomial};
use crate::arith::{eventual_sign, to_i64, IntPoly, RatPoly, Sign};
use crate::error::{Error, Result};

pub const DEFAULT_GCD_DEPTH: usize = 64;

/// Class `t = m·u + r`; the value there is `gcd(a(u), rest…(u))`.
#[derive(Clone, Debug)]
struct Item {
    m: i64,
    r: i64,
    a: IntPoly,
    rest: Vec<IntPoly>,
    depth: usize,
}

struct Leaf {
    m: i64,
    r: i64,
    value: RatPoly,
}

pub fn eqp_gcd(f: &IntPoly, g: &IntPoly) -> Result<Eqp> {
    eqp_gcd_with_depth(&[f.clone(), g.clone()], DEFAULT_GCD_DEPTH)
}

pub fn eqp_gcd_many(polys: &[IntPoly]) -> Result<Eqp> {
    eqp_gcd_with_depth(polys, DEFAULT_GCD_DEPTH)
}

pub fn eqp_gcd_with_depth(polys: &[IntPoly], max_depth: usize) -> Result<Eqp> {
    if polys.iter().all(|p| p.is_zero()) {
        return Err(Error::InvalidInput("gcd of zero polynomials".into()));
    }
    let mut stack = vec![Item {
        m: 1,
        r: 0,
        a: polys[0].clone(),
        rest: polys[1..].to_vec(),
        depth: 0,
    }];
    let mut leaves = Vec::new();
    let mut threshold = 1i64;
    while let Some(item) = stack.pop() {
        if item.depth > max_depth {
            return Err(Error::NonterminationGuard(max_depth));
        }
        step(item, &mut stack, &mut leaves, &mut threshold)?;
    }

    let period = leaves
        .iter()
        .try_fold(1i64, |l, leaf| l.lcm(&leaf.m).to_i64().filter(|&p| p <= 1 << 24))
        .ok_or(Error::Overflow("gcd period"))?;
    let mut slots: Vec<Option<RatPoly>> = vec![None; period as usize];
    for leaf in &leaves {
        for rho in (leaf.r.rem_euclid(leaf.m)..period).step_by(leaf.m as usize) {
            slots[rho as usize] = Some(leaf.value.clone());
        }
    }
    let constituents = slots
        .into_iter()
        .enumerate()
        .map(|(rho, v)| v.ok_or_else(|| Error::Internal(format!("residue {rho} not covered"))))
        .collect::<Result<Vec<_>>>()?;
    let qp = QuasiPolynomial::new(constituents).canonicalize();
    Ok(Eqp::from_scan(qp, 1, threshold, |t| {
        let g = polys.iter().fold(BigInt::zero(), |g, p| g.gcd(&p.eval_i64(t)));
        (!g.is_zero()).then_some(g)
    }))
}

fn sub(p: &IntPoly, alpha: i64, beta: i64) -> IntPoly {
    p.compose_affine(&BigInt::from(alpha), &BigInt::from(beta))
}

fn step(item: Item, stack: &mut Vec<Item>, leaves: &mut Vec<Leaf>, threshold: &mut i64) -> Result<()> {
    let Item {
        m,
        r,
        a,
        mut rest,
        depth,
    } = item;
    if rest.is_empty() {
        // gcd(a) = |a|, as a polynomial once the sign of a settles
        let (s, tu) = eventual_sign(&a.to_rat());
        let value = if s == Sign::Negative { -&a } else { a };
        // 0 <= r < m, so u >= 0 already covers every t >= 1 in the class
        if tu > 0 {
            *threshold = (*threshold).max(tu.saturating_mul(m).saturating_add(r));
        }
        let inv = BigRational::new(BigInt::from(1), BigInt::from(m));
        let shift = BigRational::new(BigInt::from(-r), BigInt::from(m));
        leaves.push(Leaf {
            m,
            r,
            value: value.to_rat().compose_affine(&inv, &shift),
        });
        return Ok(());
    }
    let b = rest.remove(0);
    let next = |a: IntPoly, rest: Vec<IntPoly>, m: i64, r: i64, depth: usize| Item { m, r, a, rest, depth };
    if b.is_zero() {
        stack.push(next(a, rest, m, r, depth));
        return Ok(());
    }
    if a.is_zero() {
        stack.push(next(b, rest, m, r, depth));
        return Ok(());
    }
    // a constant operand makes the gcd periodic in u
    let (c, other) = match (a.as_constant(), b.as_constant()) {
        (Some(c), _) => (Some(c), &b),
        (_, Some(c)) => (Some(c), &a),
        _ => (None, &a),
    };
    if let Some(c) = c {
        let c_abs = to_i64(&c.abs(), "gcd modulus")?;
        let m2 = m.checked_mul(c_abs).ok_or(Error::Overflow("gcd modulus"))?;
        for rho in 0..c_abs {
            let k = BigInt::from(c_abs).gcd(&other.eval_i64(rho));
            if rest.is_empty() {
                leaves.push(Leaf {
                    m: m2,
                    r: r + m * rho,
                    value: RatPoly::constant(BigRational::from_integer(k)),
                });
                continue;
            }
            let rest2 = rest.iter().map(|p| sub(p, c_abs, rho)).collect();
            stack.push(next(IntPoly::constant(k), rest2, m2, r + m * rho, depth + 1));
        }
        return Ok(());
    }

    // gcd(a, b) = gcd(b, a - b·q) for any integer q; take q = floor(a / b).
    // any integer quotient preserves the gcd, so the exceptions below the
    // certified point are not needed
    let (q, _, _) = certified_quotient(&a, &b, DEFAULT_FLOOR_MAX_PERIOD)?;
    let s = q.period() as i64;
    for j in 0..s {
        let a1 = sub(&a, s, j);
        let b1 = sub(&b, s, j);
        let p1 = q.constituent(j).compose_affine(
            &BigRational::from_integer(s.into()),
            &BigRational::from_integer(j.into()),
        );
        let rem = &a1.to_rat() - &(&b1.to_rat() * &p1);
        // rem is integer-valued; splitting by the denominator lcm makes it integral
        let l = to_i64(&rem.denominator_lcm(), "gcd modulus")?;
        for k in 0..l {
            let rem_z = rem
                .compose_affine(
                    &BigRational::from_integer(l.into()),
                    &BigRational::from_integer(k.into()),
                )
                .to_int()
                .ok_or_else(|| Error::Internal("remainder is not integer-valued".into()))?;
            let b_z = sub(&b1, l, k);
            let mut rest2 = vec![rem_z];
            rest2.extend(rest.iter().map(|p| sub(&sub(p, s, j), l, k)));
            let m2 = m
                .checked_mul(s)
                .and_then(|x| x.checked_mul(l))
                .ok_or(Error::Overflow("gcd modulus"))?;
            stack.push(next(b_z, rest2, m2, r + m * (j + s * k), depth + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_int_poly, rat};

    fn ip(s: &str) -> IntPoly {
        parse_int_poly(s, "t").unwrap()
    }

    fn brute(ps: &[IntPoly], t: i64) -> BigInt {
        let vals: Vec<BigInt> = ps.iter().map(|p| p.eval_i64(t).abs()).collect();
        let hi = vals.iter().max().unwrap().clone();
        let mut d = hi;
        while d > BigInt::zero() {
            if vals.iter().all(|v| (v % &d).is_zero()) {
                return d;
            }
            d -= 1;
        }
        unreachable!()
    }

    #[test]
    fn worked_example() {
        let (f, g) = (ip("t^2 + 1"), ip("2*t - 1"));
        let e = eqp_gcd(&f, &g).unwrap();
        assert_eq!(e.qp.period(), 5);
        for t in 1..=200 {
            let want = if t % 5 == 3 { 5 } else { 1 };
            assert_eq!(e.eval(t).unwrap(), rat(want), "t = {t}");
        }
    }

    #[test]
    fn consecutive_coprime() {
        let e = eqp_gcd(&ip("t"), &ip("t + 1")).unwrap();
        assert_eq!(e.qp, QuasiPolynomial::constant(rat(1)));
        assert!(e.exceptions.is_empty());
    }

    #[test]
    fn constant_divisor() {
        let (f, g) = (ip("2*t"), ip("4"));
        let e = eqp_gcd(&f, &g).unwrap();
        assert_eq!(e.qp.period(), 2);
        for t in 1..=40 {
            assert_eq!(
                e.eval(t).unwrap(),
                BigRational::from_integer(brute(&[f.clone(), g.clone()], t))
            );
        }
    }

    #[test]
    fn several_polynomials_and_zero_values() {
        let ps = [ip("t^2 - 4"), ip("t^2 + 2*t"), ip("6*t + 12")];
        let e = eqp_gcd_many(&ps).unwrap();
        for t in 1..=80 {
            assert_eq!(e.eval(t).unwrap(), BigRational::from_integer(brute(&ps, t)), "t = {t}");
        }
        let ps = [ip("t - 2"), ip("2*t - 4")];
        let e = eqp_gcd_many(&ps).unwrap();
        assert_eq!(e.exceptions.get(&2), Some(&None));
    }

    #[test]
    fn depth_guard_is_reported() {
        let r = eqp_gcd_with_depth(&[ip("t^2 + 1"), ip("2*t - 1")], 0);
        assert_eq!(r.map(|_| ()), Err(Error::NonterminationGuard(0)));
    }
}
