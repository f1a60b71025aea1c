//! Reconstruct quasi-polynomials and eventual quasi-polynomials from exact samples.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{interpolate, rat, RatPoly};
use crate::error::{Error, Result};
use crate::qpoly::{Eqp, QuasiPolynomial};

/// Integer-valued function of one integer, possibly failing at some points.
pub type Oracle<'a> = dyn Fn(i64) -> Result<BigInt> + Sync + 'a;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub max_degree: usize,
    pub max_period: usize,
    pub sample_start: i64,
    pub verify_points_per_class: usize,
    pub threshold_scan_limit: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_degree: 8,
            max_period: 360,
            sample_start: 1,
            verify_points_per_class: 3,
            threshold_scan_limit: 5000,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_degree == 0
            || self.max_period == 0
            || self.verify_points_per_class == 0
            || self.threshold_scan_limit == 0
        {
            return Err(Error::InvalidInput("fit limits must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    /// Matched the oracle at every verification point; not a proof.
    VerifiedWindow,
    /// Backed by a symbolic certificate.
    Certified,
}

impl FitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FitStatus::VerifiedWindow => "verified-window",
            FitStatus::Certified => "certified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitOutcome {
    pub eqp: Eqp,
    pub status: FitStatus,
    pub samples_used: usize,
}

/// Smallest `t >= start` with `t ≡ r (mod s)`.
pub(crate) fn first_in_class(start: i64, r: i64, s: i64) -> i64 {
    start + (r - start).rem_euclid(s)
}

/// Fit a QP of the given period and degree through the first `degree + 1` members of
/// each residue class at or after `start`.
pub fn fit_qp_fixed(oracle: &Oracle, period: usize, degree: usize, start: i64) -> Result<QuasiPolynomial> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let s = period as i64;
    let constituents = (0..s)
        .into_par_iter()
        .map(|r| {
            let t0 = first_in_class(start, r, s);
            let pts = (0..=degree as i64)
                .map(|k| {
                    let t = t0 + k * s;
                    Ok((rat(t), BigRational::from_integer(oracle(t)?)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(interpolate(&pts))
        })
        .collect::<Result<Vec<RatPoly>>>()?;
    Ok(QuasiPolynomial::new(constituents))
}

/// Memoized oracle; failures are cached too.
struct Cache<'a> {
    oracle: &'a Oracle<'a>,
    values: Mutex<HashMap<i64, Option<BigInt>>>,
}

impl<'a> Cache<'a> {
    fn new(oracle: &'a Oracle<'a>) -> Self {
        Cache {
            oracle,
            values: Mutex::new(HashMap::new()),
        }
    }

    /// Values at `ts`, sampling missing points in parallel.
    fn get_many(&self, ts: &[i64]) -> Vec<Option<BigInt>> {
        let missing: Vec<i64> = {
            let v = self.values.lock().unwrap();
            let mut m: Vec<i64> = ts.iter().copied().filter(|t| !v.contains_key(t)).collect();
            m.sort_unstable();
            m.dedup();
            m
        };
        let fresh: Vec<(i64, Option<BigInt>)> = missing.par_iter().map(|&t| (t, (self.oracle)(t).ok())).collect();
        let mut v = self.values.lock().unwrap();
        v.extend(fresh);
        ts.iter().map(|t| v[t].clone()).collect()
    }

    fn len(&self) -> usize {
        self.values.lock().unwrap().len()
    }
}

/// Smallest `d` whose `(d+1)`-st differences vanish on the whole sequence, if any
/// `d <= max_degree` qualifies and leaves at least one difference to test.
pub(crate) fn detect_degree(seq: &[BigInt], max_degree: usize) -> Option<usize> {
    let mut diffs = seq.to_vec();
    for d in 0..=max_degree {
        let next: Vec<BigInt> = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        if next.is_empty() {
            return None;
        }
        if next.iter().all(Zero::is_zero) {
            return Some(d);
        }
        diffs = next;
    }
    None
}

pub(crate) const START_OFFSETS: [i64; 4] = [0, 8, 32, 128];

/// Search periods in increasing order for an eventual QP matching the oracle.
///
/// For each period and start offset, every residue class is subsampled on a probe
/// window, its degree detected by finite differences, fitted, and checked at points
/// past the window. The first period that passes wins; the QP is then compared with
/// the oracle below the window to find the least threshold and the exceptions.
pub fn detect_and_fit_eqp(oracle: &Oracle, config: &FitConfig) -> Result<FitOutcome> {
    detect_and_fit_eqp_masked(oracle, config, &ClassMask::all())
}

/// Residue classes `t mod modulus` on which a function is fitted; the others are
/// neither sampled nor scanned, and their constituents are left zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMask {
    pub modulus: usize,
    pub allowed: Vec<bool>,
}

impl ClassMask {
    pub fn all() -> Self {
        ClassMask {
            modulus: 1,
            allowed: vec![true],
        }
    }

    pub fn allows(&self, t: i64) -> bool {
        self.allowed[t.rem_euclid(self.modulus as i64) as usize]
    }
}

/// [`detect_and_fit_eqp`] restricted to the classes allowed by `mask`. Only periods
/// that are multiples of the mask modulus are tried.
pub fn detect_and_fit_eqp_masked(oracle: &Oracle, config: &FitConfig, mask: &ClassMask) -> Result<FitOutcome> {
    config.validate()?;
    if mask.modulus == 0 || mask.allowed.len() != mask.modulus || !mask.allowed.contains(&true) {
        return Err(Error::InvalidInput("class mask must allow some residue".into()));
    }
    let cache = Cache::new(oracle);
    let window = config.max_degree + config.verify_points_per_class + 2;
    let verify = config.verify_points_per_class;
    let m = mask.modulus as i64;
    for s in (m..=config.max_period as i64).step_by(mask.modulus) {
        for off in START_OFFSETS {
            let start = config.sample_start + off;
            if let Some(qp) = try_period(&cache, s, start, window, verify, config.max_degree, mask) {
                let lo = (start - config.threshold_scan_limit as i64).max(config.sample_start);
                let below: Vec<i64> = (lo..start).filter(|&t| mask.allows(t)).collect();
                let vals = cache.get_many(&below);
                let truth: HashMap<i64, Option<BigInt>> = below.into_iter().zip(vals).collect();
                let eqp = Eqp::from_scan(qp.canonicalize(), lo, start, |t| match truth.get(&t) {
                    Some(v) => v.clone(),
                    None => qp.eval(t).is_integer().then(|| qp.eval(t).to_integer()),
                });
                let eqp = Eqp {
                    threshold: eqp.threshold.max(config.sample_start),
                    ..eqp
                };
                return Ok(FitOutcome {
                    eqp,
                    status: FitStatus::VerifiedWindow,
                    samples_used: cache.len(),
                });
            }
        }
    }
    Err(Error::FitFailed(format!(
        "no period <= {} with degree <= {} matched the samples",
        config.max_period, config.max_degree
    )))
}

fn try_period(
    cache: &Cache,
    s: i64,
    start: i64,
    window: usize,
    verify: usize,
    max_degree: usize,
    mask: &ClassMask,
) -> Option<QuasiPolynomial> {
    let mut constituents = Vec::with_capacity(s as usize);
    for r in 0..s {
        if !mask.allows(r) {
            constituents.push(RatPoly::zero());
            continue;
        }
        let t0 = first_in_class(start, r, s);
        let ts: Vec<i64> = (0..(window + verify) as i64).map(|k| t0 + k * s).collect();
        let vals: Vec<BigInt> = cache.get_many(&ts).into_iter().collect::<Option<_>>()?;
        let d = detect_degree(&vals[..window], max_degree)?;
        let pts: Vec<(BigRational, BigRational)> = ts[..=d]
            .iter()
            .zip(&vals)
            .map(|(&t, v)| (rat(t), BigRational::from_integer(v.clone())))
            .collect();
        let p = interpolate(&pts);
        let extrapolates = ts[window..]
            .iter()
            .zip(&vals[window..])
            .all(|(&t, v)| p.eval_i64(t) == BigRational::from_integer(v.clone()));
        if !extrapolates {
            return None;
        }
        constituents.push(p);
    }
    Some(QuasiPolynomial::new(constituents))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub first_mismatch: Option<i64>,
}

/// Compare an EQP with the oracle at every `t` in `[lo, hi]`. A point where both fail
/// (poisoned exception, failing oracle) agrees.
pub fn verify_eqp(eqp: &Eqp, oracle: &Oracle, lo: i64, hi: i64) -> VerifyReport {
    let bad = |t: i64| -> bool {
        match (eqp.eval(t), oracle(t)) {
            (Ok(a), Ok(b)) => a != BigRational::from_integer(b),
            (Err(_), Err(_)) => false,
            _ => true,
        }
    };
    let first_mismatch = (lo..=hi).into_par_iter().find_first(|&t| bad(t));
    VerifyReport {
        ok: first_mismatch.is_none(),
        first_mismatch,
    }
}
