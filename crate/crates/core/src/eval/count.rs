//! Counting, witnesses and optimization over the free variables.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::bounds::box_of;
use super::{eliminate_equalities, Compiled, Env, Iv};
use crate::cooper::eliminate_all;
use crate::error::{Error, Result};
use crate::formula::{ground, Formula, Program, Term, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Search bound variables directly.
    #[default]
    Enumerate,
    /// Eliminate quantifiers first, then enumerate the free variables.
    QeThenEnumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub method: Method,
    /// Closed interval per free variable, in declaration order. Used when the formula
    /// alone does not bound the set.
    pub user_box: Option<Vec<(i64, i64)>>,
    /// Half-width of the first probe box for unbounded variables.
    pub probe_start: i64,
    /// Number of doublings of the probe box.
    pub probe_doublings: u32,
    /// Split the outermost variable across threads.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            method: Method::Enumerate,
            user_box: None,
            probe_start: 64,
            probe_doublings: 3,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(BigInt),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub cardinality: Cardinality,
    pub empty: bool,
}

impl CountResult {
    fn finite(n: u128) -> CountResult {
        CountResult {
            cardinality: Cardinality::Finite(BigInt::from(n)),
            empty: n == 0,
        }
    }

    /// The count, when finite.
    pub fn value(&self) -> Option<&BigInt> {
        match &self.cardinality {
            Cardinality::Finite(n) => Some(n),
            Cardinality::Infinite => None,
        }
    }
}

/// The grounded program, optionally quantifier-free, plus its counted variables.
fn prepare(prog: &Program, params: &[i64], method: Method) -> Result<(Program, Formula)> {
    let g = ground(prog, params)?;
    let f = match method {
        Method::Enumerate => g.formula.clone(),
        Method::QeThenEnumerate => eliminate_all(&g.formula)?,
    };
    Ok((g, f))
}

/// Where to enumerate: a finite box, or a request to probe.
enum Region {
    Finite(Vec<Iv>),
    Empty,
    Unbounded(Vec<Iv>, VarId),
}

fn region(c: &Compiled, vars: &[VarId], all_free: &[VarId], opts: &CountOptions) -> Result<Region> {
    let derived = box_of(&c.form, c.nvars);
    if derived.iter().any(Iv::is_empty) {
        return Ok(Region::Empty);
    }
    let mut bx: Vec<Iv> = vars.iter().map(|&v| derived[v]).collect();
    if let Some(user) = &opts.user_box {
        if user.len() != all_free.len() {
            return Err(Error::InvalidInput(format!(
                "user box has {} intervals for {} free variables",
                user.len(),
                all_free.len()
            )));
        }
        for (i, &v) in vars.iter().enumerate() {
            let k = all_free.iter().position(|&w| w == v).unwrap();
            let (lo, hi) = user[k];
            bx[i] = bx[i].intersect(&Iv::new(lo as i128, hi as i128));
        }
    }
    if bx.iter().any(Iv::is_empty) {
        return Ok(Region::Empty);
    }
    match vars.iter().zip(&bx).find(|(_, iv)| !iv.is_bounded()) {
        Some((&v, _)) => Ok(Region::Unbounded(bx, v)),
        None => Ok(Region::Finite(bx)),
    }
}

fn clip(bx: &[Iv], r: i64) -> Vec<Iv> {
    bx.iter()
        .map(|iv| iv.intersect(&Iv::new(-(r as i128), r as i128)))
        .collect()
}

fn install(c: &Compiled, vars: &[VarId], bx: &[Iv]) -> Env {
    let mut env = c.env();
    for (&v, iv) in vars.iter().zip(bx) {
        env.bx[v] = *iv;
    }
    env
}

fn level_range(c: &Compiled, env: &Env, v: VarId) -> Option<(i64, i64)> {
    let iv = env.bx[v].intersect(&c.form.interval(v, &env.bx));
    match (iv.lo, iv.hi) {
        (Some(lo), Some(hi)) if lo <= hi => Some((lo as i64, hi as i64)),
        _ => None,
    }
}

fn count_rec(c: &Compiled, vars: &[VarId], env: &mut Env) -> Result<u128> {
    let Some((&v, rest)) = vars.split_first() else {
        return Ok(u128::from(env.holds(&c.form)?));
    };
    let saved = env.bx[v];
    let mut total: u128 = 0;
    if let Some((lo, hi)) = level_range(c, env, v) {
        for x in lo..=hi {
            env.set(v, x);
            total += count_rec(c, rest, env)?;
        }
    }
    env.bx[v] = saved;
    Ok(total)
}

fn count_box(c: &Compiled, vars: &[VarId], bx: &[Iv], parallel: bool) -> Result<u128> {
    let mut env = install(c, vars, bx);
    let Some((&v, rest)) = vars.split_first() else {
        return count_rec(c, vars, &mut env);
    };
    let Some((lo, hi)) = level_range(c, &env, v) else {
        return Ok(0);
    };
    let one = |x: i64| -> Result<u128> {
        let mut e = env.clone();
        e.set(v, x);
        count_rec(c, rest, &mut e)
    };
    if parallel && hi > lo {
        (lo..=hi).into_par_iter().map(one).try_reduce(|| 0, |a, b| Ok(a + b))
    } else {
        (lo..=hi).map(one).sum()
    }
}

/// Visit solutions in lexicographic order until `f` returns `false`.
fn visit_rec(
    c: &Compiled,
    vars: &[VarId],
    depth: usize,
    env: &mut Env,
    f: &mut dyn FnMut(&Env) -> bool,
) -> Result<bool> {
    if depth == vars.len() {
        return Ok(!env.holds(&c.form)? || f(env));
    }
    let v = vars[depth];
    let saved = env.bx[v];
    let mut go_on = true;
    if let Some((lo, hi)) = level_range(c, env, v) {
        for x in lo..=hi {
            env.set(v, x);
            if !visit_rec(c, vars, depth + 1, env, f)? {
                go_on = false;
                break;
            }
        }
    }
    env.bx[v] = saved;
    Ok(go_on)
}

/// Number of free-variable assignments satisfying the program at `params`.
///
/// Top-level equalities are solved away first. When the formula leaves some variable
/// unbounded and no user box is given, boxes of half-width `probe_start·2^k` are
/// counted for `k = 0..=probe_doublings`; strictly growing counts give
/// [`Cardinality::Infinite`], anything else is reported as undecided.
pub fn count_points(prog: &Program, params: &[i64], opts: &CountOptions) -> Result<CountResult> {
    let (g, f) = prepare(prog, params, opts.method)?;
    let free = g.free_vars();
    let (f, log) = eliminate_equalities(&f, &free);
    let vars: Vec<VarId> = free
        .iter()
        .copied()
        .filter(|v| !log.iter().any(|(w, _)| w == v))
        .collect();
    let mut opts = opts.clone();
    let mut parts = vec![f];
    if let Some(user) = &opts.user_box {
        if user.len() != free.len() {
            return Err(Error::InvalidInput(format!(
                "user box has {} intervals for {} free variables",
                user.len(),
                free.len()
            )));
        }
        // solved variables keep their box through their solutions
        for (v, &(lo, hi)) in free.iter().zip(user) {
            if let Some((_, value)) = log.iter().find(|(w, _)| w == v) {
                parts.push(Formula::le(Term::int(lo), value.clone()));
                parts.push(Formula::le(value.clone(), Term::int(hi)));
            }
        }
        let kept = free
            .iter()
            .zip(user)
            .filter(|(v, _)| vars.contains(v))
            .map(|(_, b)| *b)
            .collect();
        opts.user_box = Some(kept);
    }
    let c = Compiled::new(&Formula::and(parts), g.decls.len())?;
    count_compiled(&c, &vars, &g, &opts)
}

fn count_compiled(c: &Compiled, vars: &[VarId], g: &Program, opts: &CountOptions) -> Result<CountResult> {
    match region(c, vars, vars, opts)? {
        Region::Empty => Ok(CountResult::finite(0)),
        Region::Finite(bx) => Ok(CountResult::finite(count_box(c, vars, &bx, opts.parallel)?)),
        Region::Unbounded(bx, v) => {
            let mut counts = Vec::new();
            for k in 0..=opts.probe_doublings {
                let r = opts.probe_start << k;
                counts.push(count_box(c, vars, &clip(&bx, r), opts.parallel)?);
            }
            if counts.windows(2).all(|w| w[0] < w[1]) {
                Ok(CountResult {
                    cardinality: Cardinality::Infinite,
                    empty: false,
                })
            } else {
                Err(Error::CannotDecideFiniteness(g.name(v).to_string()))
            }
        }
    }
}

fn point_of(env: &Env, vars: &[VarId]) -> Vec<i64> {
    vars.iter().map(|&v| env.vals[v]).collect()
}

/// Best point of `c·x` in one box: the lexicographically smallest maximizer.
fn best_in(c: &Compiled, vars: &[VarId], bx: &[Iv], dir: &[i64]) -> Result<Option<(i128, Vec<i64>)>> {
    let mut env = install(c, vars, bx);
    let mut best: Option<(i128, Vec<i64>)> = None;
    visit_rec(c, vars, 0, &mut env, &mut |e| {
        let p = point_of(e, vars);
        let val: i128 = p.iter().zip(dir).map(|(&x, &k)| x as i128 * k as i128).sum();
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, p));
        }
        true
    })?;
    Ok(best)
}

/// Point maximizing `dir · x` over the free variables, ties broken by the
/// lexicographically smallest point; `None` when the set is empty or unbounded in
/// direction `dir`. A zero direction returns the lexicographically smallest witness.
pub fn argmax_point(prog: &Program, params: &[i64], dir: &[i64], opts: &CountOptions) -> Result<Option<Vec<i64>>> {
    let (g, f) = prepare(prog, params, opts.method)?;
    let vars = g.free_vars();
    if dir.len() != vars.len() {
        return Err(Error::InvalidInput(format!(
            "direction has {} entries for {} free variables",
            dir.len(),
            vars.len()
        )));
    }
    let c = Compiled::new(&f, g.decls.len())?;
    match region(&c, &vars, &vars, opts)? {
        Region::Empty => Ok(None),
        Region::Finite(bx) => Ok(best_in(&c, &vars, &bx, dir)?.map(|(_, p)| p)),
        Region::Unbounded(bx, v) => {
            let mut values = Vec::new();
            for k in 0..=opts.probe_doublings {
                let r = opts.probe_start << k;
                values.push(best_in(&c, &vars, &clip(&bx, r), dir)?.map(|(val, _)| val));
            }
            let growing = values
                .windows(2)
                .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if a < b));
            if growing {
                Ok(None)
            } else {
                Err(Error::CannotDecideFiniteness(g.name(v).to_string()))
            }
        }
    }
}

/// The first `n` solutions in lexicographic order of the free variables.
pub fn first_points(prog: &Program, params: &[i64], n: usize, opts: &CountOptions) -> Result<Vec<Vec<i64>>> {
    let (g, f) = prepare(prog, params, opts.method)?;
    let vars = g.free_vars();
    let c = Compiled::new(&f, g.decls.len())?;
    let bx = match region(&c, &vars, &vars, opts)? {
        Region::Empty => return Ok(Vec::new()),
        Region::Finite(bx) => bx,
        Region::Unbounded(_, v) => return Err(Error::CannotDecideFiniteness(g.name(v).to_string())),
    };
    let mut env = install(&c, &vars, &bx);
    let mut out = Vec::new();
    if n > 0 {
        visit_rec(&c, &vars, 0, &mut env, &mut |e| {
            out.push(point_of(e, &vars));
            out.len() < n
        })?;
    }
    Ok(out)
}
