//! Piecewise quasi-polynomials in several parameters.

use num_rational::BigRational;

use crate::arith::MultiPoly;
use crate::error::{Error, Result};

/// Conjunction of inequalities `a·t <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chamber {
    pub inequalities: Vec<(Vec<i64>, i64)>,
}

impl Chamber {
    pub fn contains(&self, t: &[i64]) -> bool {
        self.inequalities.iter().all(|(a, b)| {
            let lhs: i128 = a.iter().zip(t).map(|(&x, &y)| x as i128 * y as i128).sum();
            lhs <= *b as i128
        })
    }
}

/// `t_i ≡ residues[i] (mod moduli[i])` for every parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub moduli: Vec<i64>,
    pub residues: Vec<i64>,
}

impl Coset {
    pub fn trivial(k: usize) -> Self {
        Coset {
            moduli: vec![1; k],
            residues: vec![0; k],
        }
    }

    pub fn contains(&self, t: &[i64]) -> bool {
        self.moduli
            .iter()
            .zip(&self.residues)
            .zip(t)
            .all(|((&m, &r), &x)| x.rem_euclid(m) == r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqpPiece {
    pub chamber: Chamber,
    pub coset: Coset,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pqp {
    pub params: Vec<String>,
    pub pieces: Vec<PqpPiece>,
}

impl Pqp {
    pub fn new(params: Vec<String>, pieces: Vec<PqpPiece>) -> Result<Self> {
        let k = params.len();
        for (i, p) in pieces.iter().enumerate() {
            let bad_chamber = p.chamber.inequalities.iter().any(|(a, _)| a.len() != k);
            let bad_coset = p.coset.moduli.len() != k
                || p.coset.residues.len() != k
                || p.coset
                    .moduli
                    .iter()
                    .zip(&p.coset.residues)
                    .any(|(&m, &r)| m < 1 || r < 0 || r >= m);
            if bad_chamber || bad_coset || p.poly.nvars() != k {
                return Err(Error::InvalidInput(format!("piece {i} does not match {k} parameters")));
            }
        }
        Ok(Pqp { params, pieces })
    }

    /// Indices of the pieces covering `t`.
    pub fn covering(&self, t: &[i64]) -> Vec<usize> {
        self.pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.chamber.contains(t) && p.coset.contains(t))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn eval(&self, t: &[i64]) -> Result<BigRational> {
        let hits = self.covering(t);
        match hits.as_slice() {
            [] => Err(Error::NotCovered(t.to_vec())),
            [i] => Ok(self.pieces[*i].poly.eval(t)),
            _ => Err(Error::Ambiguous {
                point: t.to_vec(),
                pieces: hits,
            }),
        }
    }

    /// Check that every listed point is covered by exactly one piece.
    pub fn check_partition<'a>(&self, points: impl IntoIterator<Item = &'a [i64]>) -> Result<()> {
        for t in points {
            self.eval(t)?;
        }
        Ok(())
    }
}

pub fn pqp_eval(p: &Pqp, t: &[i64]) -> Result<BigRational> {
    p.eval(t)
}
