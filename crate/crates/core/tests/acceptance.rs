//! One test per acceptance criterion. Each prints a single `criterion NN PASS|FAIL` line
//! with its wall time; exceeding the time budget counts as a failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::error::Error as StdError;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpcount::arith::{poly_divmod, poly_substitute_affine, IntPoly, RatPoly};
use qpcount::cooper::{eliminate_all, eliminate_program, equivalent_on_box, DEFAULT_POINT_BUDGET};
use qpcount::eval::{count_points, holds, CountOptions, Method};
use qpcount::fit::{detect_and_fit_eqp, fit_qp_fixed, verify_eqp, FitConfig, FitOutcome, Oracle};
use qpcount::formula::{parse_formula, Program, VarId};
use qpcount::frobenius::{analyze_semigroup, distinct_values_bounded, frobenius_at, parametric_frobenius, Semigroup};
use qpcount::geometry::{
    ehrhart_qp, integer_hull_2d, parametric_count_eqp, parametric_hull_vertices, pick_count, twisting_square, Polygon,
    PolytopeSpec, Q,
};
use qpcount::qpoly::{eqp_gcd, poly_floor_div, Chamber, Coset, Pqp, PqpPiece, QuasiPolynomial};

type Outcome = Result<(), Box<dyn StdError>>;

static SERIAL: Mutex<()> = Mutex::new(());

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn criterion(id: u32, title: &str, budget_secs: f64, body: impl FnOnce() -> Outcome) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let result = body();
    let secs = start.elapsed().as_secs_f64();
    let failure = match result {
        Err(e) => Some(e.to_string()),
        Ok(()) if secs > budget_secs => Some(format!("over the {budget_secs} s budget")),
        Ok(()) => None,
    };
    let verdict = if failure.is_none() { "PASS" } else { "FAIL" };
    let detail = failure.as_deref().map(|f| format!(": {f}")).unwrap_or_default();
    println!("criterion {id:02} {verdict} {title} ({secs:.2} s){detail}");
    assert!(failure.is_none(), "criterion {id:02}{detail}");
}

fn q(n: i64, d: i64) -> Q {
    BigRational::new(n.into(), d.into())
}

fn int(n: i64) -> Q {
    q(n, 1)
}

/// Coefficients in ascending degree as `(numerator, denominator)` pairs.
fn poly(c: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(c.iter().map(|&(n, d)| q(n, d)).collect())
}

fn ipoly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn parse(src: &str) -> Result<Program, Box<dyn StdError>> {
    Ok(parse_formula(src)?)
}

fn count(p: &Program, params: &[i64]) -> Result<BigInt, Box<dyn StdError>> {
    let r = count_points(p, params, &CountOptions::default())?;
    Ok(r.value().ok_or("unexpected infinite count")?.clone())
}

/// Members of the semigroup generated by `gens` up to `limit`, by dynamic programming.
fn brute_members(gens: &[i64], limit: i64) -> Vec<bool> {
    let mut member = vec![false; limit as usize + 1];
    member[0] = true;
    for n in 1..=limit {
        member[n as usize] = gens.iter().any(|&g| g <= n && member[(n - g) as usize]);
    }
    member
}

#[test]
fn criterion_01_mcnugget_semigroup() {
    criterion(1, "Frobenius <6,9,20>", 0.1, || {
        let d = analyze_semigroup(&Semigroup::new(&[6, 9, 20])?)?;
        let gaps = [
            1, 2, 3, 4, 5, 7, 8, 10, 11, 13, 14, 16, 17, 19, 22, 23, 25, 28, 31, 34, 37, 43,
        ];
        ensure!(d.frobenius == 43, "frobenius {}", d.frobenius);
        ensure!(d.genus == 22, "genus {}", d.genus);
        ensure!(d.gaps == gaps, "gaps {:?}", d.gaps);
        Ok(())
    });
}

#[test]
fn criterion_02_three_five() {
    criterion(2, "Frobenius <3,5> and Apery set", 0.1, || {
        let d = analyze_semigroup(&Semigroup::new(&[3, 5])?)?;
        ensure!(d.frobenius == 7 && d.genus == 4, "({}, {})", d.frobenius, d.genus);
        ensure!(d.gaps == [1, 2, 4, 7], "gaps {:?}", d.gaps);
        let apery: BTreeMap<i64, i64> = [(0, 0), (1, 10), (2, 5)].into();
        ensure!(d.apery.as_ref() == Some(&apery), "apery {:?}", d.apery);
        // 3·N + {0, 5, 10} is the semigroup
        let member = brute_members(&[3, 5], 60);
        for n in 0..=60i64 {
            let w = apery[&n.rem_euclid(3)];
            ensure!(member[n as usize] == (n >= w), "decomposition fails at {n}");
        }
        Ok(())
    });
}

#[test]
fn criterion_03_sylvester() {
    criterion(3, "Sylvester formula for coprime pairs up to 40", 5.0, || {
        let mut pairs = 0;
        for a in 2..=40i64 {
            for b in a + 1..=40 {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let d = analyze_semigroup(&Semigroup::new(&[a, b])?)?;
                let want = (a * b - a - b, ((a - 1) * (b - 1) / 2) as u64);
                ensure!(
                    (d.frobenius, d.genus) == want,
                    "({a}, {b}): {:?}",
                    (d.frobenius, d.genus)
                );
                pairs += 1;
            }
        }
        ensure!(pairs > 400, "only {pairs} pairs");
        Ok(())
    });
}

#[test]
fn criterion_04_parametric_frobenius() {
    criterion(4, "parametric Frobenius (t, t+1, t+3)", 30.0, || {
        let gens = [ipoly(&[0, 1]), ipoly(&[1, 1]), ipoly(&[3, 1])];
        let p = parametric_frobenius(&gens, &FitConfig::default())?;
        let f = QuasiPolynomial::new(vec![
            poly(&[(-1, 1), (1, 1), (1, 3)]),
            poly(&[(-2, 1), (2, 3), (1, 3)]),
            poly(&[(-1, 1), (1, 3), (1, 3)]),
        ]);
        let g = QuasiPolynomial::new(vec![
            poly(&[(0, 1), (1, 2), (1, 6)]),
            poly(&[(-2, 3), (1, 2), (1, 6)]),
            poly(&[(-2, 3), (1, 2), (1, 6)]),
        ]);
        ensure!(
            p.frobenius.eqp.qp.period() == 3,
            "frobenius period {}",
            p.frobenius.eqp.qp.period()
        );
        for r in 0..3 {
            ensure!(
                p.frobenius.eqp.qp.constituent(r) == f.constituent(r),
                "frobenius constituent {r}: {}",
                p.frobenius.eqp.qp.constituent(r).fmt_with("t")
            );
            ensure!(
                p.genus.eqp.qp.constituent(r) == g.constituent(r),
                "genus constituent {r}: {}",
                p.genus.eqp.qp.constituent(r).fmt_with("t")
            );
        }
        for t in 4..=80i64 {
            let d = analyze_semigroup(&Semigroup::new(&[t, t + 1, t + 3])?)?;
            ensure!(p.frobenius.eqp.eval(t)? == int(d.frobenius), "frobenius at {t}");
            ensure!(p.genus.eqp.eval(t)? == int(d.genus as i64), "genus at {t}");
        }
        Ok(())
    });
}

#[test]
fn criterion_05_ehrhart_suite() {
    criterion(5, "Ehrhart suite", 10.0, || {
        let v = |pts: &[&[(i64, i64)]]| -> Vec<Vec<Q>> {
            pts.iter().map(|p| p.iter().map(|&(n, d)| q(n, d)).collect()).collect()
        };
        let cases = [
            (
                "triangle T",
                v(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(1, 1), (1, 1)]]),
                vec![poly(&[(1, 1), (3, 2), (1, 2)])],
            ),
            (
                "triangle Q",
                v(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(2, 1), (2, 1)]]),
                vec![poly(&[(1, 1), (3, 2), (3, 2)])],
            ),
            (
                "tetrahedron",
                v(&[
                    &[(0, 1), (0, 1), (0, 1)],
                    &[(1, 1), (0, 1), (0, 1)],
                    &[(0, 1), (1, 1), (0, 1)],
                    &[(0, 1), (0, 1), (1, 1)],
                ]),
                // (t+1)(t+2)(t+3)/6
                vec![poly(&[(1, 1), (11, 6), (1, 1), (1, 6)])],
            ),
            (
                "interval [0, 1/2]",
                v(&[&[(0, 1)], &[(1, 2)]]),
                vec![poly(&[(1, 1), (1, 2)]), poly(&[(1, 2), (1, 2)])],
            ),
            (
                "triangle (0,0), (0,1), (1/3,1)",
                v(&[&[(0, 1), (0, 1)], &[(0, 1), (1, 1)], &[(1, 3), (1, 1)]]),
                vec![
                    poly(&[(1, 1), (5, 6), (1, 6)]),
                    poly(&[(1, 1), (5, 6), (1, 6)]),
                    poly(&[(2, 3), (5, 6), (1, 6)]),
                ],
            ),
        ];
        for (name, vertices, want) in cases {
            let fit = ehrhart_qp(&PolytopeSpec::Vertices(vertices))?;
            let want = QuasiPolynomial::new(want);
            ensure!(
                fit.qp == want,
                "{name}: period {} {:?}",
                fit.qp.period(),
                fit.qp.constituents()
            );
            ensure!(fit.qp.period() == want.period(), "{name}: period {}", fit.qp.period());
        }
        Ok(())
    });
}

#[test]
fn criterion_06_mcnugget_ehrhart() {
    criterion(6, "McNuggets Ehrhart quasi-polynomial", 60.0, || {
        let vertices = vec![
            vec![q(1, 6), int(0), int(0)],
            vec![int(0), q(1, 9), int(0)],
            vec![int(0), int(0), q(1, 20)],
        ];
        let fit = ehrhart_qp(&PolytopeSpec::Vertices(vertices))?;
        ensure!(
            fit.period == 180 && fit.qp.period() == 180,
            "period {} / {}",
            fit.period,
            fit.qp.period()
        );
        ensure!(
            fit.qp.constituent(18) == &poly(&[(23, 20), (7, 180), (1, 2160)]),
            "residue 18: {}",
            fit.qp.constituent(18).fmt_with("t")
        );
        ensure!(
            fit.qp.constituent(75) == &poly(&[(5, 48), (11, 360), (1, 2160)]),
            "residue 75: {}",
            fit.qp.constituent(75).fmt_with("t")
        );
        let direct = |t: i64| {
            let mut n = 0;
            for x in 0..=t / 6 {
                for y in 0..=(t - 6 * x) / 9 {
                    n += i64::from((t - 6 * x - 9 * y) % 20 == 0);
                }
            }
            n
        };
        ensure!(
            direct(18) == 2 && direct(75) == 5,
            "direct counts {} {}",
            direct(18),
            direct(75)
        );
        let p = parse(common::MCNUGGETS)?;
        for t in [18, 75] {
            ensure!(fit.qp.eval(t) == int(direct(t)), "fit at {t}");
            ensure!(count(&p, &[t])? == BigInt::from(direct(t)), "formula count at {t}");
        }
        Ok(())
    });
}

/// Vertex set as sorted `(x, y)` polynomial pairs.
fn vertex_set(v: &[(RatPoly, RatPoly)]) -> Vec<(RatPoly, RatPoly)> {
    let mut v = v.to_vec();
    v.sort_by_key(|(x, y)| format!("{x:?}{y:?}"));
    v
}

#[test]
fn criterion_07_twisting_square() {
    criterion(7, "twisting square counts and integer hulls", 20.0, || {
        let square = twisting_square();
        let out = parametric_count_eqp(&square, &FitConfig::default())?;
        let even = poly(&[(5, 1), (-2, 1), (1, 1)]);
        let odd = poly(&[(2, 1), (-2, 1), (1, 1)]);
        ensure!(
            out.eqp.qp == QuasiPolynomial::new(vec![even, odd]),
            "count {:?}",
            out.eqp.qp.constituents()
        );
        ensure!(out.eqp.exceptions.is_empty(), "exceptions {:?}", out.eqp.exceptions);
        for t in 1..=30i64 {
            let r = t * t - 2 * t + 2;
            let mut n = 0;
            for x in -t..=t {
                for y in -t..=t {
                    n += i64::from((2 * x + (2 * t - 2) * y).abs() <= r && ((2 - 2 * t) * x + 2 * y).abs() <= r);
                }
            }
            ensure!(out.eqp.eval(t)? == int(n), "count at {t}");
        }

        // the commonly listed vertex formulas with correlated signs describe the mirror image y -> -y
        let h = |k: i64, s: i64| poly(&[(-k * s, 2), (s, 2)]);
        let zero = RatPoly::zero();
        let listed_odd = [
            (zero.clone(), h(1, 1)),
            (zero.clone(), h(1, -1)),
            (h(3, 1), h(1, 1)),
            (h(3, -1), h(1, -1)),
            (h(1, 1), zero.clone()),
            (h(1, -1), zero.clone()),
            (h(1, 1), h(3, -1)),
            (h(1, -1), h(3, 1)),
        ];
        let listed_even = [
            (h(2, 1), h(0, 1)),
            (h(2, -1), h(0, -1)),
            (h(0, 1), h(2, -1)),
            (h(0, -1), h(2, 1)),
        ];
        let mirror = |v: &[(RatPoly, RatPoly)]| -> Vec<(RatPoly, RatPoly)> {
            vertex_set(&v.iter().map(|(x, y)| (x.clone(), -y.clone())).collect::<Vec<_>>())
        };
        let cfg = FitConfig {
            max_period: 4,
            ..FitConfig::default()
        };
        let fit = parametric_hull_vertices(&square, &cfg)?;
        ensure!(fit.period == 2, "hull period {}", fit.period);
        ensure!(
            vertex_set(&fit.classes[0].vertices) == mirror(&listed_even),
            "even hull vertices"
        );
        ensure!(
            vertex_set(&fit.classes[1].vertices) == mirror(&listed_odd),
            "odd hull vertices"
        );

        let h5 = integer_hull_2d(&square, 5)?;
        let mut got: Vec<(Q, Q)> = h5.vertices.clone();
        got.sort();
        let mut octagon: Vec<(Q, Q)> = mirror(&listed_odd)
            .iter()
            .map(|(x, y)| (x.eval_i64(5), y.eval_i64(5)))
            .collect();
        octagon.sort();
        ensure!(got == octagon, "hull at 5: {got:?}");
        Ok(())
    });
}

#[test]
fn criterion_08_eqp_arithmetic() {
    criterion(8, "floor division and gcd of polynomials", 5.0, || {
        let f = poly_floor_div(&ipoly(&[0, 0, 1]), &ipoly(&[3, 2]))?;
        let e = &f.eqp;
        ensure!(
            e.qp == QuasiPolynomial::new(vec![poly(&[(-1, 1), (1, 2)]), poly(&[(-3, 2), (1, 2)])]),
            "floor constituents {:?}",
            e.qp.constituents()
        );
        ensure!(e.threshold == 4, "threshold {}", e.threshold);
        let exceptions: BTreeMap<i64, Option<BigInt>> = [(1, Some(BigInt::from(0))), (3, Some(BigInt::from(1)))].into();
        ensure!(e.exceptions == exceptions, "exceptions {:?}", e.exceptions);
        for t in 1..=200i64 {
            ensure!(
                e.eval(t)? == int(Integer::div_floor(&(t * t), &(2 * t + 3))),
                "floor at {t}"
            );
        }
        let g = eqp_gcd(&ipoly(&[1, 0, 1]), &ipoly(&[-1, 2]))?;
        let five_on_three: Vec<RatPoly> = (0..5)
            .map(|r| RatPoly::constant(int(if r == 3 { 5 } else { 1 })))
            .collect();
        ensure!(
            g.qp == QuasiPolynomial::new(five_on_three),
            "gcd {:?}",
            g.qp.constituents()
        );
        for t in 1..=200i64 {
            ensure!(g.eval(t)? == int((t * t + 1).gcd(&(2 * t - 1))), "gcd at {t}");
        }
        Ok(())
    });
}

fn random_atom(rng: &mut ChaCha8Rng) -> String {
    let mut s = rng.gen_range(-6i64..=6).to_string();
    for name in ["x", "y", "z"] {
        let c: i64 = rng.gen_range(-4..=4);
        if c != 0 {
            s += &if c < 0 {
                format!(" - {} * {name}", -c)
            } else {
                format!(" + {c} * {name}")
            };
        }
    }
    let a = match rng.gen_range(0..3) {
        0 => format!("{s} <= 0"),
        1 => format!("{s} = 0"),
        _ => format!("{} | {s}", rng.gen_range(2..=5)),
    };
    if rng.gen_bool(0.5) {
        format!("not ({a})")
    } else {
        a
    }
}

/// Random one- or two-quantifier formula; an outer quantifier is bounded to `[-6, 6]`.
fn random_formula(rng: &mut ChaCha8Rng) -> String {
    let mut body = random_atom(rng);
    for _ in 1..rng.gen_range(2..4) {
        let op = if rng.gen_bool(0.5) { "or" } else { "and" };
        body = format!("({body}) {op} ({})", random_atom(rng));
    }
    let quant = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { "forall" } else { "exists" };
    let inner = format!("{} y. {body}", quant(rng));
    if rng.gen_bool(0.5) {
        format!("free x z; {inner}")
    } else if rng.gen_bool(0.5) {
        format!("free x; forall z. z < -6 or z > 6 or ({inner})")
    } else {
        format!("free x; exists z. -6 <= z and z <= 6 and ({inner})")
    }
}

#[test]
fn criterion_09_cooper_elimination() {
    criterion(9, "quantifier elimination on random formulas and <3,5>", 60.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..300 {
            let src = random_formula(&mut rng);
            let p = parse(&src)?;
            let f = eliminate_all(&p.formula)?;
            ensure!(f.is_quantifier_free(), "formula {i} keeps a quantifier");
            let bx: Vec<(VarId, i64, i64)> = p.free_vars().iter().map(|&v| (v, -12, 12)).collect();
            let r = equivalent_on_box(&p.formula, &f, p.decls.len(), &bx, DEFAULT_POINT_BUDGET)?;
            ensure!(r.equivalent, "formula {i} `{src}` differs at {:?}", r.counterexample);
        }
        let p = parse("free n; exists x. exists y. x >= 0 and y >= 0 and 3*x + 5*y = n")?;
        let e = eliminate_program(&p)?;
        ensure!(e.formula.is_quantifier_free(), "<3,5> elimination keeps a quantifier");
        let n = e.var("n").ok_or("no variable n")?;
        let member = brute_members(&[3, 5], 60);
        for v in 0..=60i64 {
            let mut vals = vec![0; e.decls.len()];
            vals[n] = v;
            ensure!(
                holds(&e.formula, e.decls.len(), &vals)? == member[v as usize],
                "membership of {v}"
            );
        }
        Ok(())
    });
}

/// `(a, b, c; d, e, f; g, h, i)` with distinct positive entries and all eight lines summing to `t`.
fn brute_magic(t: i64) -> i64 {
    let mut n = 0;
    for a in 1..t {
        for b in 1..t {
            for d in 1..t {
                for e in 1..t {
                    let (c, f, g, h) = (t - a - b, t - d - e, t - a - d, t - b - e);
                    let i = t - c - f;
                    let cells = [a, b, c, d, e, f, g, h, i];
                    if cells.iter().any(|&x| x < 1) || g + h + i != t || a + e + i != t || c + e + g != t {
                        continue;
                    }
                    let distinct: BTreeSet<i64> = cells.into();
                    n += i64::from(distinct.len() == 9);
                }
            }
        }
    }
    n
}

/// Labeled placements of three mutually non-attacking queens on a `t × t` board.
fn brute_queens(t: i64) -> i64 {
    let cells: Vec<(i64, i64)> = (1..=t).flat_map(|x| (1..=t).map(move |y| (x, y))).collect();
    let free =
        |p: (i64, i64), q: (i64, i64)| p.0 != q.0 && p.1 != q.1 && p.0 - p.1 != q.0 - q.1 && p.0 + p.1 != q.0 + q.1;
    let mut n = 0;
    for &a in &cells {
        for &b in &cells {
            for &c in &cells {
                n += i64::from(free(a, b) && free(a, c) && free(b, c));
            }
        }
    }
    n
}

/// Unlabeled non-attacking three-queen placements, the period-2 degree-6 quasi-polynomial.
fn queens_qp(t: i64) -> Q {
    let c = [q(1, 8), q(-43, 12), int(11), q(-25, 2), q(79, 12), q(-5, 3), q(1, 6)];
    let sign = if t % 2 == 0 { 1 } else { -1 };
    let base = RatPoly::new(c.to_vec()).eval_i64(t);
    base + int(sign) * (q(t, 4) - q(1, 8))
}

#[test]
fn criterion_10_boolean_combinations() {
    criterion(10, "chromatic, magic square and queens counts", 120.0, || {
        let chromatic = parse(common::CHROMATIC)?;
        for t in 1..=8 {
            ensure!(
                count(&chromatic, &[t])? == BigInt::from(t * (t - 1) * (t - 1)),
                "chromatic at {t}"
            );
        }
        let magic = parse(common::MAGIC)?;
        for t in (1..=30).filter(|t| t % 3 != 0) {
            ensure!(count(&magic, &[t])? == BigInt::from(0), "magic at {t}");
        }
        for t in [6, 24, 42] {
            let want = 2 * (t - 6) * (t - 10) / 9;
            let oracle = brute_magic(t);
            ensure!(oracle == want, "brute-force magic at {t}: {oracle} vs {want}");
            ensure!(count(&magic, &[t])? == BigInt::from(want), "magic at {t}");
        }
        let queens = parse(common::QUEENS)?;
        ensure!(
            queens_qp(4) * int(6) == int(brute_queens(4)),
            "queens oracle at 4: {}",
            brute_queens(4)
        );
        for t in 1..=7 {
            let labeled = queens_qp(t) * int(6);
            ensure!(int(count(&queens, &[t])?.try_into()?) == labeled, "queens at {t}");
        }
        Ok(())
    });
}

fn piece(
    ineq: Vec<(Vec<i64>, i64)>,
    moduli: Vec<i64>,
    residues: Vec<i64>,
    p: &str,
) -> Result<PqpPiece, Box<dyn StdError>> {
    Ok(PqpPiece {
        chamber: Chamber { inequalities: ineq },
        coset: Coset { moduli, residues },
        poly: qpcount::arith::parse_multi_poly(p, &["s", "t"])?,
    })
}

#[test]
fn criterion_11_multivariate_pqp() {
    criterion(11, "trapezoid and burger piecewise quasi-polynomials", 10.0, || {
        let names = vec!["s".to_string(), "t".to_string()];
        let trapezoid = Pqp::new(
            names.clone(),
            vec![
                // t > 2s
                piece(vec![(vec![2, -1], -1)], vec![1, 1], vec![0, 0], "t*s - s^2 + t + 1")?,
                piece(vec![(vec![-2, 1], 0)], vec![1, 2], vec![0, 0], "1/4*t^2 + t + 1")?,
                piece(vec![(vec![-2, 1], 0)], vec![1, 2], vec![0, 1], "1/4*t^2 + t + 3/4")?,
            ],
        )?;
        let r = verify_pqp(&trapezoid, common::TRAPEZOID, false)?;
        ensure!(r.0 && r.1 == 144, "trapezoid: ok {} after {} points", r.0, r.1);
        // s <= 2t, 3t <= 2s, s even
        let burger = Pqp::new(
            names,
            vec![piece(
                vec![(vec![1, -2], 0), (vec![-2, 3], 0)],
                vec![2, 1],
                vec![0, 0],
                "(2*t - s + 2)/2",
            )?],
        )?;
        let r = verify_pqp(&burger, common::BURGER, true)?;
        ensure!(r.0 && r.1 > 0, "burger: ok {} after {} points", r.0, r.1);
        Ok(())
    });
}

fn verify_pqp(pqp: &Pqp, src: &str, domain_only: bool) -> Result<(bool, u64), Box<dyn StdError>> {
    let prog = parse(src)?;
    let r = qpcount::geometry::verify_pqp_on_grid(pqp, &prog, &[(1, 12), (1, 12)], domain_only)?;
    Ok((r.ok, r.points_checked as u64))
}

#[test]
fn criterion_12_bounded_mcnugget_boxes() {
    criterion(12, "bounded McNugget boxes", 5.0, || {
        for r in 8..=10i64 {
            for s in 8..=10i64 {
                for t in 8..=10i64 {
                    let n = distinct_values_bounded(&[6, 9, 20], &[r, s, t])?;
                    let mut values = BTreeSet::new();
                    for a in 0..=r {
                        for b in 0..=s {
                            for c in 0..=t {
                                values.insert(6 * a + 9 * b + 20 * c);
                            }
                        }
                    }
                    let want = 6 * r + 9 * s + 20 * t - 43;
                    ensure!(
                        values.len() as i64 == want,
                        "brute force at ({r}, {s}, {t}): {}",
                        values.len()
                    );
                    ensure!(n as i64 == want, "({r}, {s}, {t}): {n}");
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_13_negative_cases() {
    criterion(13, "gcd family and divisor count", 10.0, || {
        for s in 1..=12i64 {
            for t in 1..=12i64 {
                let p = parse(&format!("free x y; x >= 0 and y >= 0 and {s}*x + {t}*y = {}", s * t))?;
                let got = count(&p, &[])?;
                let brute = (0..=t).filter(|x| (s * t - s * x) % t == 0).count() as i64;
                ensure!(brute == s.gcd(&t) + 1, "brute force at ({s}, {t})");
                ensure!(got == BigInt::from(s.gcd(&t) + 1), "({s}, {t}): {got}");
            }
        }
        let p = parse("free x y; x >= 0 and y >= 0 and 4*x + 6*y = 24")?;
        ensure!(count(&p, &[])? == BigInt::from(3), "f(4, 6)");
        let tau = |t: i64| Ok(BigInt::from((1..=t).filter(|d| t % d == 0).count()));
        match detect_and_fit_eqp(&tau, &FitConfig::default()) {
            Err(e) if e.kind() == "FIT_FAILED" => Ok(()),
            Err(e) => Err(format!("divisor count gave {}", e.kind()).into()),
            Ok(out) => Err(format!("divisor count fitted period {}", out.eqp.qp.period()).into()),
        }
    });
}

/// Integer-valued QP: integer polynomial plus `c·(t - r)/s` on class `r`, plus `h·t(t+1)/2`.
fn random_qp(rng: &mut ChaCha8Rng) -> QuasiPolynomial {
    let s = rng.gen_range(1..=12i64);
    QuasiPolynomial::new(
        (0..s)
            .map(|r| {
                let ints: Vec<Q> = (0..rng.gen_range(1..=5)).map(|_| int(rng.gen_range(-5..=5))).collect();
                let (c, h) = (rng.gen_range(-4..=4i64), rng.gen_range(-3..=3i64));
                let shift = RatPoly::new(vec![q(-c * r, s), q(c, s)]);
                let tri = RatPoly::new(vec![int(0), q(h, 2), q(h, 2)]);
                &(&RatPoly::new(ints) + &shift) + &tri
            })
            .collect(),
    )
}

fn fits_in_window(out: &FitOutcome, oracle: &Oracle) -> bool {
    let e = &out.eqp;
    let (s, d) = (e.qp.period() as i64, e.qp.degree().max(0) as i64);
    verify_eqp(e, oracle, 1, e.threshold + 2 * s * (d + 1)).ok
}

/// No smaller period reproduces the oracle past the threshold.
fn is_minimal(out: &FitOutcome, oracle: &Oracle) -> bool {
    let e = &out.eqp;
    let (s, d) = (e.qp.period(), e.qp.degree().max(0) as usize);
    (1..s).all(|smaller| {
        let Ok(cand) = fit_qp_fixed(oracle, smaller, d, e.threshold) else {
            return true;
        };
        let hi = e.threshold + 4 * (s * (d + 1)) as i64;
        !(e.threshold..hi).all(|t| oracle(t).ok().map(BigRational::from_integer) == Some(cand.eval(t)))
    })
}

fn arith_identities(rng: &mut ChaCha8Rng) -> Outcome {
    let mut random_poly = |deg: usize| {
        IntPoly::from_i64s(
            &(0..=rng.gen_range(0..=deg))
                .map(|_| rng.gen_range(-20..=20))
                .collect::<Vec<_>>(),
        )
    };
    for _ in 0..200 {
        let (f, g) = (random_poly(6), random_poly(6));
        if g.is_zero() {
            continue;
        }
        let (quo, rem) = poly_divmod(&f.to_rat(), &g.to_rat())?;
        ensure!(
            &(&quo * &g.to_rat()) + &rem == f.to_rat() && rem.degree() < g.degree(),
            "divmod of {f:?} by {g:?}"
        );
    }
    for m in 1..=7i64 {
        for r in -6..=6i64 {
            let (f1, f2) = (random_poly(4), random_poly(4));
            let lhs = poly_substitute_affine(&(&f1 * &f2), m, r);
            ensure!(
                lhs == &poly_substitute_affine(&f1, m, r) * &poly_substitute_affine(&f2, m, r),
                "substitution ({m}, {r})"
            );
            for u in -5..=5i64 {
                ensure!(
                    lhs.eval_i64(u) == (&f1 * &f2).eval_i64(m * u + r),
                    "substitution value at {u}"
                );
            }
        }
    }
    Ok(())
}

fn qp_round_trips(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..100 {
        let qp = random_qp(rng);
        let oracle = |t: i64| Ok(qp.eval(t).to_integer());
        let out = detect_and_fit_eqp(&oracle, &FitConfig::default())?;
        ensure!(out.eqp.qp == qp && out.eqp.exceptions.is_empty(), "round trip {i}");
        ensure!(
            out.eqp.qp.period() == qp.canonicalize().period(),
            "round trip {i}: period {}",
            out.eqp.qp.period()
        );
        ensure!(fits_in_window(&out, &oracle), "round trip {i}: window");
    }
    Ok(())
}

fn pick_matches_enumeration(rng: &mut ChaCha8Rng) -> Outcome {
    let mut done = 0;
    while done < 100 {
        let pts: Vec<(i64, i64)> = (0..rng.gen_range(3..12))
            .map(|_| (rng.gen_range(-8..=8), rng.gen_range(-8..=8)))
            .collect();
        let p = Polygon::from_ints(&pts);
        if p.degenerate {
            continue;
        }
        let brute = (-8..=8i64)
            .flat_map(|x| (-8..=8i64).map(move |y| (int(x), int(y))))
            .filter(|pt| p.contains(pt))
            .count();
        let c = pick_count(&p)?;
        ensure!(
            c.total == BigInt::from(brute),
            "polygon {pts:?}: {} vs {brute}",
            c.total
        );
        done += 1;
    }
    Ok(())
}

fn fit_invariants(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..60 {
        let qp = random_qp(rng);
        let bumps: BTreeMap<i64, i64> = (0..rng.gen_range(0..4))
            .map(|_| (rng.gen_range(1..=12), rng.gen_range(1..=9)))
            .collect();
        let oracle = |t: i64| Ok(qp.eval(t).to_integer() + bumps.get(&t).copied().unwrap_or(0));
        let out = detect_and_fit_eqp(&oracle, &FitConfig::default())?;
        ensure!(out.eqp.qp == qp, "case {i}: wrong quasi-polynomial");
        let listed: Vec<i64> = out.eqp.exceptions.keys().copied().collect();
        let want: Vec<i64> = bumps.keys().copied().collect();
        ensure!(listed == want, "case {i}: exceptions {listed:?} vs {want:?}");
        for (&t, v) in &out.eqp.exceptions {
            ensure!(v.as_ref() == Some(&oracle(t)?), "case {i}: exception value at {t}");
        }
        ensure!(
            out.eqp.threshold == want.last().map_or(1, |t| t + 1),
            "case {i}: threshold {}",
            out.eqp.threshold
        );
        ensure!(is_minimal(&out, &oracle), "case {i}: a smaller period fits");
        ensure!(fits_in_window(&out, &oracle), "case {i}: window");
    }
    let pair = [ipoly(&[0, 1]), ipoly(&[1, 1])];
    let frob = |t: i64| frobenius_at(&pair, t).map(|v| v.0);
    let out = detect_and_fit_eqp(&frob, &FitConfig::default())?;
    ensure!(
        is_minimal(&out, &frob) && fits_in_window(&out, &frob),
        "frobenius of (t, t+1)"
    );
    Ok(())
}

fn methods_agree_on_fixtures() -> Outcome {
    let qe = CountOptions {
        method: Method::QeThenEnumerate,
        ..CountOptions::default()
    };
    for fx in common::FIXTURES {
        let p = parse(fx.src)?;
        for &params in fx.samples {
            let a = count_points(&p, params, &CountOptions::default());
            let b = count_points(&p, params, &qe);
            let same = match (&a, &b) {
                (Ok(x), Ok(y)) => x == y,
                (Err(x), Err(y)) => x.kind() == y.kind(),
                _ => false,
            };
            ensure!(same, "{} at {params:?}: {a:?} vs {b:?}", fx.name);
        }
    }
    Ok(())
}

#[test]
fn criterion_14_property_suites() {
    criterion(14, "property suites", 120.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        arith_identities(&mut rng).map_err(|e| format!("arithmetic: {e}"))?;
        qp_round_trips(&mut rng).map_err(|e| format!("round trip: {e}"))?;
        pick_matches_enumeration(&mut rng).map_err(|e| format!("Pick: {e}"))?;
        fit_invariants(&mut rng).map_err(|e| format!("fit: {e}"))?;
        methods_agree_on_fixtures().map_err(|e| format!("eval: {e}"))?;
        Ok(())
    });
}
