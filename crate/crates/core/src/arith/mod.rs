//! Exact integers, rationals and univariate polynomials over them.
//!
//! Everything here is exact. `IntPoly` and `RatPoly` share one generic
//! representation: a coefficient vector indexed by degree with no trailing
//! zeros, so the zero polynomial is the empty vector and has degree -1.

mod multi;
mod parse;
mod sign;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use multi::MultiPoly;
pub use parse::{parse_int_poly, parse_multi_poly, parse_rat_poly, parse_rational};
pub use sign::{eventual_sign, sturm_real_roots_above, Sign};

pub type Rational = BigRational;

/// Coefficient ring of a [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl Coeff for BigInt {}
impl Coeff for BigRational {}

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant term when the polynomial has degree <= 0.
    pub fn as_constant(&self) -> Option<C> {
        self.is_constant().then(|| self.coeff(0))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `u ↦ self(a·u + b)`.
    pub fn compose_affine(&self, a: &C, b: &C) -> Self {
        let inner = Self::new(vec![b.clone(), a.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// `self(g(u))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn fmt_with(&self, var: &str) -> String
    where
        C: CoeffDisplay,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative_coeff();
            let abs = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match deg {
                0 => String::new(),
                1 => var.to_string(),
                d => format!("{var}^{d}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.render());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", abs.render(), mono));
            }
        }
        out
    }
}

/// Coefficients that know how to print themselves in the polynomial syntax.
pub trait CoeffDisplay: Coeff {
    fn is_negative_coeff(&self) -> bool;
    fn render(&self) -> String;
}

impl CoeffDisplay for BigInt {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl CoeffDisplay for BigRational {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }
    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl<C: CoeffDisplay> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("t"))
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl IntPoly {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rat(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }

    /// gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl RatPoly {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn eval_i64(&self, t: i64) -> BigRational {
        self.eval(&rat(t))
    }

    /// Integer polynomial with the same coefficients, if they are all integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }

    /// lcm of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }
}

/// Long division over the rationals: `f = q·g + r` with `deg r < deg g`.
pub fn poly_divmod(f: &RatPoly, g: &RatPoly) -> Result<(RatPoly, RatPoly)> {
    let lead = g.leading().ok_or(Error::DivisionByZeroPoly)?.clone();
    let dg = g.coeffs.len() - 1;
    let mut rem = f.coeffs.clone();
    if rem.len() <= dg {
        return Ok((Poly::zero(), f.clone()));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dg].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        for (j, gj) in g.coeffs.iter().enumerate() {
            rem[k + j] = rem[k + j].clone() - c.clone() * gj.clone();
        }
        quot[k] = c;
    }
    rem.truncate(dg);
    Ok((Poly::new(quot), Poly::new(rem)))
}

/// `u ↦ f(m·u + r)`, a ring homomorphism `Z[t] → Z[u]`.
pub fn poly_substitute_affine(f: &IntPoly, m: i64, r: i64) -> IntPoly {
    f.compose_affine(&BigInt::from(m), &BigInt::from(r))
}

/// The unique polynomial of degree < n through n points with distinct abscissae.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> RatPoly {
    // Newton divided differences
    let n = points.len();
    let xs: Vec<&BigRational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut acc = RatPoly::zero();
    for i in (0..n).rev() {
        let factor = Poly::new(vec![-xs[i].clone(), BigRational::one()]);
        acc = &(&acc * &factor) + &Poly::constant(dd[i].clone());
    }
    acc
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn floor_rat(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil_rat(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

pub fn to_i64(n: &BigInt, context: &'static str) -> Result<i64> {
    n.to_i64().ok_or(Error::Overflow(context))
}

/// Floor division for machine integers, `b != 0`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
