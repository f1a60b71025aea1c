//! Quasi-polynomials, eventual quasi-polynomials and piecewise quasi-polynomials.

mod floor;
mod gcd;
mod pqp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::arith::{rat, RatPoly};
use crate::error::{Error, Result};

pub use floor::{poly_floor_div, poly_floor_div_with, ClassCertificate, FloorDiv};
pub use gcd::{eqp_gcd, eqp_gcd_many, eqp_gcd_with_depth, DEFAULT_GCD_DEPTH};
pub use pqp::{pqp_eval, Chamber, Coset, Pqp, PqpPiece};

/// One polynomial per residue class: `f(t) = constituents[t mod period](t)`.
///
/// Equality compares canonical (minimal-period) forms.
#[derive(Clone, Debug)]
pub struct QuasiPolynomial {
    constituents: Vec<RatPoly>,
}

impl QuasiPolynomial {
    pub fn new(constituents: Vec<RatPoly>) -> Self {
        assert!(!constituents.is_empty(), "a quasi-polynomial needs period >= 1");
        QuasiPolynomial { constituents }
    }

    pub fn from_poly(p: RatPoly) -> Self {
        Self::new(vec![p])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(RatPoly::constant(c))
    }

    pub fn period(&self) -> usize {
        self.constituents.len()
    }

    pub fn constituents(&self) -> &[RatPoly] {
        &self.constituents
    }

    /// Constituent used for `t ≡ residue`, any integer residue.
    pub fn constituent(&self, residue: i64) -> &RatPoly {
        let s = self.period() as i64;
        &self.constituents[residue.rem_euclid(s) as usize]
    }

    pub fn eval(&self, t: i64) -> BigRational {
        self.constituent(t).eval_i64(t)
    }

    pub fn degree(&self) -> isize {
        self.constituents.iter().map(|p| p.degree()).max().unwrap()
    }

    /// True iff every constituent takes integer values on its whole residue class.
    ///
    /// A polynomial in `u` is integer-valued iff it is integral at deg+1 consecutive
    /// integers, so each class is checked at deg+1 consecutive members.
    pub fn integer_valued(&self) -> bool {
        let s = self.period() as i64;
        self.constituents
            .iter()
            .enumerate()
            .all(|(r, p)| (0..=p.degree().max(0) as i64).all(|k| p.eval_i64(r as i64 + k * s).is_integer()))
    }

    fn combine(&self, other: &Self, op: impl Fn(&RatPoly, &RatPoly) -> RatPoly) -> Self {
        let l = self.period().lcm(&other.period());
        Self::new(
            (0..l as i64)
                .map(|i| op(self.constituent(i), other.constituent(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.constituents.iter().map(|p| -p).collect())
    }

    /// Pointwise-equal QP with the least period dividing the current one.
    pub fn canonicalize(&self) -> Self {
        let s = self.period();
        for d in (1..=s).filter(|d| s.is_multiple_of(*d)) {
            if (0..s).all(|i| self.constituents[i] == self.constituents[i % d]) {
                return Self::new(self.constituents[..d].to_vec());
            }
        }
        unreachable!()
    }

    /// Same function written with period `multiple`, which must be a multiple of the period.
    pub fn with_period(&self, multiple: usize) -> Self {
        assert_eq!(multiple % self.period(), 0);
        Self::new((0..multiple as i64).map(|i| self.constituent(i).clone()).collect())
    }
}

impl PartialEq for QuasiPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.canonicalize().constituents == other.canonicalize().constituents
    }
}

impl Eq for QuasiPolynomial {}

/// Evaluate a QP at `t`.
pub fn qp_eval(q: &QuasiPolynomial, t: i64) -> BigRational {
    q.eval(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpOp {
    Add,
    Mul,
}

pub fn qp_binary(op: QpOp, a: &QuasiPolynomial, b: &QuasiPolynomial) -> QuasiPolynomial {
    match op {
        QpOp::Add => a.add(b),
        QpOp::Mul => a.mul(b),
    }
}

pub fn qp_canonicalize(q: &QuasiPolynomial) -> QuasiPolynomial {
    q.canonicalize()
}

/// Eventual quasi-polynomial on the domain `t >= 1`.
///
/// `qp` is exact for every `t >= threshold`. Below the threshold, the points where the
/// function differs from `qp` are listed in `exceptions`; unlisted points agree with
/// `qp`. A `None` exception marks a point where the function is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eqp {
    pub qp: QuasiPolynomial,
    pub threshold: i64,
    pub exceptions: BTreeMap<i64, Option<BigInt>>,
}

impl Eqp {
    /// An EQP without exceptions, valid from the domain start.
    pub fn from_qp(qp: QuasiPolynomial) -> Self {
        Eqp {
            qp,
            threshold: 1,
            exceptions: BTreeMap::new(),
        }
    }

    /// Build from a QP known to be exact for `t >= hi`, scanning `[lo, hi)` against
    /// `truth` for mismatches. The threshold is one past the largest mismatch.
    pub fn from_scan(qp: QuasiPolynomial, lo: i64, hi: i64, truth: impl Fn(i64) -> Option<BigInt>) -> Self {
        let mut exceptions = BTreeMap::new();
        for t in lo..hi {
            let v = truth(t);
            let agrees = matches!(&v, Some(x) if BigRational::from_integer(x.clone()) == qp.eval(t));
            if !agrees {
                exceptions.insert(t, v);
            }
        }
        let threshold = exceptions.keys().next_back().map_or(lo, |&t| t + 1);
        Eqp {
            qp,
            threshold,
            exceptions,
        }
    }

    pub fn eval(&self, t: i64) -> Result<BigRational> {
        match self.exceptions.get(&t) {
            Some(Some(v)) => Ok(BigRational::from_integer(v.clone())),
            Some(None) => Err(Error::ZeroDivisorAt(t)),
            None => Ok(self.qp.eval(t)),
        }
    }

    pub fn canonicalize(&self) -> Self {
        Eqp {
            qp: self.qp.canonicalize(),
            ..self.clone()
        }
    }
}

/// Constant QP helper for tests and examples.
pub fn qp_const(c: i64) -> QuasiPolynomial {
    QuasiPolynomial::constant(rat(c))
}
