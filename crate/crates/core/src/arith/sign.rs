//! Eventual sign of a univariate polynomial on the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ceil_rat, poly_divmod, Poly, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(q: &BigRational) -> Sign {
        if q.is_positive() {
            Sign::Positive
        } else if q.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

// Past this bound the plain downward scan is replaced by root isolation.
const PLAIN_SCAN_LIMIT: i64 = 4096;

/// Returns `(s, T)` with `sign(p(t)) = s` for all integers `t >= T`, `T >= 0` least.
pub fn eventual_sign(p: &RatPoly) -> (Sign, i64) {
    let Some(lead) = p.leading() else {
        return (Sign::Zero, 0);
    };
    let s = Sign::of(lead);
    let bound = cauchy_bound(p);
    let sign_at = |t: i64| Sign::of(&p.eval_i64(t));

    if bound <= BigInt::from(PLAIN_SCAN_LIMIT) {
        let mut t = bound.to_i64().unwrap();
        while t >= 0 && sign_at(t) == s {
            t -= 1;
        }
        return (s, t + 1);
    }

    // Walk down from root-free interval to root-free interval.
    let chain = sturm_chain(p);
    let above = |x: &BigInt| roots_above(&chain, &BigRational::from_integer(x.clone()));
    let mut cur = least_int(BigInt::zero(), bound, |m| above(m) == 0);
    loop {
        let at = Sign::of(&p.eval(&BigRational::from_integer(cur.clone())));
        if at != s {
            return (s, saturate(cur + 1));
        }
        if cur.is_zero() {
            return (s, 0);
        }
        let top = above(&cur);
        let hi = &cur - 1;
        cur = least_int(BigInt::zero(), hi, |m| above(m) == top);
    }
}

fn saturate(n: BigInt) -> i64 {
    n.to_i64().unwrap_or(i64::MAX)
}

/// `ceil(1 + max |a_i / a_n|)`, an upper bound on every real root.
fn cauchy_bound(p: &RatPoly) -> BigInt {
    let lead = p.leading().unwrap();
    let n = p.coeffs().len() - 1;
    let m = p.coeffs()[..n]
        .iter()
        .map(|a| (a / lead).abs())
        .fold(BigRational::zero(), |m, x| if x > m { x } else { m });
    ceil_rat(&(m + BigRational::one()))
}

/// Smallest integer `m` in `[lo, hi]` satisfying a monotone predicate (true at `hi`).
fn least_int(mut lo: BigInt, mut hi: BigInt, pred: impl Fn(&BigInt) -> bool) -> BigInt {
    while lo < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

fn derivative(p: &RatPoly) -> RatPoly {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = poly_divmod(&a, &b).unwrap();
        a = b;
        b = r;
    }
    match a.leading() {
        Some(l) => {
            let inv = BigRational::one() / l;
            a.scale(&inv)
        }
        None => a,
    }
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let d = derivative(p);
    let g = poly_gcd(p, &d);
    let (sf, _) = poly_divmod(p, &g).unwrap();
    let mut chain = vec![sf.clone(), derivative(&sf)];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = poly_divmod(&chain[n - 2], &chain[n - 1]).unwrap();
        chain.push(-r);
    }
    chain.pop();
    chain
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::Zero;
    let mut count = 0;
    for s in signs.filter(|&s| s != Sign::Zero) {
        if last != Sign::Zero && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn roots_above(chain: &[RatPoly], a: &BigRational) -> usize {
    let at_a = variations(chain.iter().map(|q| Sign::of(&q.eval(a))));
    let at_inf = variations(chain.iter().map(|q| Sign::of(q.leading().unwrap())));
    at_a - at_inf
}

/// Number of distinct real roots of `p` strictly greater than `a`.
pub fn sturm_real_roots_above(p: &RatPoly, a: &BigRational) -> usize {
    if p.is_zero() {
        return 0;
    }
    roots_above(&sturm_chain(p), a)
}
