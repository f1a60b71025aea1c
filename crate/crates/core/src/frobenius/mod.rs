//! Numerical semigroups: Frobenius numbers, gaps, Apéry sets, bounded representations
//! and Frobenius/genus functions of parametric generators.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::arith::{to_i64, IntPoly};
use crate::error::{Error, Result};
use crate::fit::{detect_and_fit_eqp_masked, ClassMask, FitConfig, FitOutcome};
use crate::qpoly::{eqp_gcd_many, Eqp};

/// Generators sorted ascending without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semigroup {
    pub generators: Vec<i64>,
}

impl Semigroup {
    pub fn new(generators: &[i64]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a semigroup needs at least one generator".into()));
        }
        if let Some(g) = generators.iter().find(|&&g| g < 1) {
            return Err(Error::InvalidInput(format!("generator {g} is not positive")));
        }
        let mut generators = generators.to_vec();
        generators.sort_unstable();
        generators.dedup();
        Ok(Semigroup { generators })
    }

    pub fn gcd(&self) -> i64 {
        self.generators.iter().fold(0, |g, &a| g.gcd(&a))
    }

    fn require_coprime(&self) -> Result<()> {
        if self.gcd() != 1 {
            return Err(Error::NotCoprime(self.generators.clone()));
        }
        Ok(())
    }
}

/// Frobenius number (-1 when there are no gaps), genus, gaps, and the Apéry set with
/// respect to the least generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapData {
    pub frobenius: i64,
    pub genus: u64,
    pub gaps: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apery: Option<BTreeMap<i64, i64>>,
}

/// Representability sieve, stopped after `min(generators)` consecutive members.
pub fn analyze_semigroup(g: &Semigroup) -> Result<GapData> {
    g.require_coprime()?;
    let m = g.generators[0] as usize;
    let mut member = vec![true];
    let mut gaps = Vec::new();
    let mut run = 1usize;
    let mut n = 0usize;
    while run < m {
        n += 1;
        let hit = g
            .generators
            .iter()
            .any(|&a| (a as usize) <= n && member[n - a as usize]);
        member.push(hit);
        if hit {
            run += 1;
        } else {
            run = 0;
            gaps.push(n as i64);
        }
    }
    Ok(GapData {
        frobenius: gaps.last().copied().unwrap_or(-1),
        genus: gaps.len() as u64,
        gaps,
        apery: Some(apery_set(g, m as i64)?),
    })
}

/// Least member of the semigroup in each residue class mod `m`, by shortest paths over
/// residues where adding generator `a` is an edge of weight `a`.
pub fn apery_set(g: &Semigroup, m: i64) -> Result<BTreeMap<i64, i64>> {
    if m < 1 {
        return Err(Error::InvalidInput(format!("modulus {m} is not positive")));
    }
    g.require_coprime()?;
    let mut best: Vec<Option<i64>> = vec![None; m as usize];
    let mut heap = BinaryHeap::from([Reverse((0i64, 0i64))]);
    while let Some(Reverse((d, r))) = heap.pop() {
        if best[r as usize].is_some() {
            continue;
        }
        best[r as usize] = Some(d);
        for &a in &g.generators {
            let next = (r + a) % m;
            if best[next as usize].is_none() {
                let w = d.checked_add(a).ok_or(Error::Overflow("Apéry set"))?;
                heap.push(Reverse((w, next)));
            }
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .map(|(r, d)| (r as i64, d.expect("coprime generators reach every residue")))
        .collect())
}

/// `(F, g) = (ab - a - b, (a - 1)(b - 1)/2)`; `(-1, 0)` when `a` or `b` is 1.
pub fn sylvester_pair(a: i64, b: i64) -> Result<(i64, i64)> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidInput(format!("generators {a}, {b} must be positive")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(vec![a, b]));
    }
    let over = || Error::Overflow("Sylvester formula");
    let ab = a.checked_mul(b).ok_or_else(over)?;
    let f = ab - a - b;
    let g = (a - 1).checked_mul(b - 1).ok_or_else(over)? / 2;
    Ok((f, g))
}

/// Largest element of `a1 Z + a2 Z` outside the semigroup `<a1, a2>`: `lcm - a1 - a2`.
pub fn extended_frobenius_pair(a1: i64, a2: i64) -> Result<i64> {
    if a1 < 1 || a2 < 1 {
        return Err(Error::InvalidInput(format!("generators {a1}, {a2} must be positive")));
    }
    let l = (a1 / a1.gcd(&a2)).checked_mul(a2).ok_or(Error::Overflow("lcm"))?;
    Ok(l - a1 - a2)
}

pub const DISTINCT_VALUES_BUDGET: u128 = 100_000_000;

/// `|{Σ λ_i a_i : 0 <= λ_i <= bound_i}|`, by a bounded-knapsack sieve over `[0, Σ a_i·bound_i]`.
pub fn distinct_values_bounded(generators: &[i64], bounds: &[i64]) -> Result<u64> {
    if generators.len() != bounds.len() {
        return Err(Error::InvalidInput(format!(
            "{} generators but {} bounds",
            generators.len(),
            bounds.len()
        )));
    }
    if generators.iter().any(|&a| a < 1) || bounds.iter().any(|&b| b < 0) {
        return Err(Error::InvalidInput(
            "generators must be positive and bounds nonnegative".into(),
        ));
    }
    let top: u128 = generators
        .iter()
        .zip(bounds)
        .map(|(&a, &b)| a as u128 * b as u128)
        .sum();
    if top >= DISTINCT_VALUES_BUDGET {
        return Err(Error::BoxTooLarge {
            points: top + 1,
            budget: DISTINCT_VALUES_BUDGET,
        });
    }
    let top = top as usize;
    let mut reach = vec![false; top + 1];
    reach[0] = true;
    let mut hi = 0usize;
    for (&a, &b) in generators.iter().zip(bounds) {
        let (a, b) = (a as usize, b as usize);
        hi += a * b;
        let mut next = vec![false; top + 1];
        // next[n] iff some reach[n - k·a] with 0 <= k <= b: track the last hit per residue
        let mut last: Vec<Option<usize>> = vec![None; a];
        for n in 0..=hi {
            if reach[n] {
                last[n % a] = Some(n);
            }
            next[n] = last[n % a].is_some_and(|p| (n - p) / a <= b);
        }
        reach = next;
    }
    Ok(reach.iter().filter(|&&x| x).count() as u64)
}

/// Fitted Frobenius number and genus of `<f_1(t), ..., f_k(t)>`.
///
/// `gcd` is the generator gcd as an EQP; `classes` marks the residues mod its period
/// where it is eventually 1. The other classes are excluded and their constituents
/// are zero placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricFrobenius {
    pub gcd: Eqp,
    pub classes: ClassMask,
    pub frobenius: FitOutcome,
    pub genus: FitOutcome,
}

impl ParametricFrobenius {
    pub fn excluded_residues(&self) -> Vec<usize> {
        (0..self.classes.modulus)
            .filter(|&r| !self.classes.allowed[r])
            .collect()
    }
}

/// Generators evaluated at `t`.
pub fn generators_at(generators: &[IntPoly], t: i64) -> Result<Vec<i64>> {
    generators
        .iter()
        .map(|f| to_i64(&f.eval_i64(t), "generator value"))
        .collect()
}

/// Sieve `<f_i(t)>` at each sampled `t` and fit `F` and `g` as EQPs on the classes
/// where the generators are eventually coprime.
pub fn parametric_frobenius(generators: &[IntPoly], config: &FitConfig) -> Result<ParametricFrobenius> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("no generators".into()));
    }
    let gcd = eqp_gcd_many(generators)?;
    let period = gcd.qp.period();
    let allowed: Vec<bool> = gcd
        .qp
        .constituents()
        .iter()
        .map(|c| c.as_constant().is_some_and(|v| v.is_one()))
        .collect();
    if !allowed.contains(&true) {
        return Err(Error::NeverCoprime);
    }
    let classes = ClassMask {
        modulus: period,
        allowed,
    };
    let memo: Mutex<HashMap<i64, Result<(BigInt, BigInt)>>> = Mutex::new(HashMap::new());
    let sample = |t: i64| -> Result<(BigInt, BigInt)> {
        if let Some(v) = memo.lock().unwrap().get(&t) {
            return v.clone();
        }
        let v = frobenius_at(generators, t);
        memo.lock().unwrap().insert(t, v.clone());
        v
    };
    let f_oracle = |t: i64| sample(t).map(|v| v.0);
    let g_oracle = |t: i64| sample(t).map(|v| v.1);
    let frobenius = detect_and_fit_eqp_masked(&f_oracle, config, &classes)?;
    let genus = detect_and_fit_eqp_masked(&g_oracle, config, &classes)?;
    Ok(ParametricFrobenius {
        gcd,
        classes,
        frobenius,
        genus,
    })
}

/// `(F, g)` of the generators at `t`; fails where a generator is not positive or the
/// generators share a factor.
pub fn frobenius_at(generators: &[IntPoly], t: i64) -> Result<(BigInt, BigInt)> {
    let gens = generators_at(generators, t)?;
    let d = analyze_semigroup(&Semigroup::new(&gens)?)?;
    Ok((d.frobenius.into(), d.genus.into()))
}
