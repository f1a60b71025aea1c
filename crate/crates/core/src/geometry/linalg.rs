//! Exact rational linear algebra for small systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{distinct, Q};

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (x, y) in line.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{x : m·x = 0}` for `m` with `n` columns.
pub(crate) fn null_space(m: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut r: Vec<Vec<Q>> = m.to_vec();
    let pivots = if r.is_empty() { Vec::new() } else { rref(&mut r) };
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][free].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of a square system, if any.
pub(crate) fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dimension of the affine hull of the points; -1 for none.
pub fn affine_dimension(points: &[Vec<Q>]) -> isize {
    let Some(p0) = points.first() else {
        return -1;
    };
    let mut diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| sub(p, p0)).collect();
    if diffs.is_empty() {
        return 0;
    }
    rref(&mut diffs).len() as isize
}

/// Combinations of `k` indices out of `n`, lexicographic.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{x : a·x <= b}` from all `dim × dim` subsystems.
pub(crate) fn vertices(rows: &[(Vec<BigInt>, BigInt)], dim: usize) -> Vec<Vec<Q>> {
    let qa: Vec<Vec<Q>> = rows
        .iter()
        .map(|(a, _)| a.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    let qb: Vec<Q> = rows.iter().map(|(_, b)| Q::from_integer(b.clone())).collect();
    let mut out = Vec::new();
    for pick in combinations(rows.len(), dim) {
        let a: Vec<Vec<Q>> = pick.iter().map(|&i| qa[i].clone()).collect();
        let b: Vec<Q> = pick.iter().map(|&i| qb[i].clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if qa.iter().zip(&qb).all(|(r, bi)| &dot(r, &x) <= bi) {
                out.push(x);
            }
        }
    }
    distinct(out)
}

/// The row `a·x <= b` scaled to coprime integers.
fn integer_row(a: &[Q], b: &Q) -> (Vec<BigInt>, BigInt) {
    let mut v = a.to_vec();
    v.push(b.clone());
    let mut ints = primitive(&v);
    let b = ints.pop().unwrap();
    (ints, b)
}

/// Positive integer multiple of a rational vector with coprime entries.
pub(crate) fn primitive(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// Integer rows `a·x <= b` describing the convex hull of the points: affine-hull
/// equations as opposite pairs, then facets within the hull.
pub(crate) fn hrep_from_vertices(points: &[Vec<Q>]) -> Vec<(Vec<BigInt>, BigInt)> {
    let points = distinct(points.to_vec());
    let n = points[0].len();
    let p0 = &points[0];
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| sub(p, p0)).collect();
    let mut rows = Vec::new();
    let push = |a: Vec<BigInt>, b: BigInt, rows: &mut Vec<(Vec<BigInt>, BigInt)>| {
        if !rows.contains(&(a.clone(), b.clone())) {
            rows.push((a, b));
        }
    };
    // equations n·x = n·p0
    for eq in null_space(&diffs, n) {
        let (a, b) = integer_row(&eq, &dot(&eq, p0));
        push(a.iter().map(|x| -x).collect(), -&b, &mut rows);
        push(a, b, &mut rows);
    }
    // direction space basis
    let mut dirs = diffs.clone();
    let k = if dirs.is_empty() { 0 } else { rref(&mut dirs).len() };
    dirs.truncate(k);
    if k == 0 {
        return rows;
    }
    for pick in combinations(points.len(), k) {
        let base = &points[pick[0]];
        let m: Vec<Vec<Q>> = pick[1..]
            .iter()
            .map(|&j| {
                let d = sub(&points[j], base);
                dirs.iter().map(|w| dot(w, &d)).collect()
            })
            .collect();
        let ns = if m.is_empty() {
            vec![vec![Q::one()]]
        } else {
            null_space(&m, k)
        };
        if ns.len() != 1 {
            continue;
        }
        let mut a = vec![Q::zero(); n];
        for (c, w) in ns[0].iter().zip(&dirs) {
            for (x, y) in a.iter_mut().zip(w) {
                *x += c * y;
            }
        }
        let b = dot(&a, base);
        let vals: Vec<Q> = points.iter().map(|p| dot(&a, p)).collect();
        let (a, b) = if vals.iter().all(|v| v <= &b) {
            (a, b)
        } else if vals.iter().all(|v| v >= &b) {
            (a.iter().map(|x| -x).collect(), -b)
        } else {
            continue;
        };
        let (a, b) = integer_row(&a, &b);
        push(a, b, &mut rows);
    }
    rows
}
