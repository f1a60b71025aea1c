//! Top-level equality elimination for counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::IntPoly;
use crate::formula::{normalize_nnf, Atom, Formula, Term, VarId};

/// Solve top-level equalities for variables in `eliminable`.
///
/// Inside the outermost conjunction, an equality in which some eliminable variable has
/// coefficient ±1 is solved for it and the solution substituted everywhere; an equality
/// whose coefficients and constant share a common factor is divided through first; an
/// equality whose coefficient content does not divide the constant makes the formula
/// false. The log lists `(variable, value)` pairs in elimination order, so solutions
/// lift back by evaluating the log from last to first.
pub fn eliminate_equalities(f: &Formula, eliminable: &[VarId]) -> (Formula, Vec<(VarId, Term)>) {
    let mut parts = match normalize_nnf(f) {
        Formula::And(v) => v,
        other => vec![other],
    };
    let mut log = Vec::new();
    'outer: loop {
        for i in 0..parts.len() {
            let Formula::Atom(Atom::Eq(l, r)) = &parts[i] else {
                continue;
            };
            let e = l.sub(r);
            if !e.is_ground() {
                continue;
            }
            let content = e.coeff_content();
            let k = e.constant.coeff(0);
            if content.is_zero() {
                if !k.is_zero() {
                    return (Formula::False, log);
                }
                parts.remove(i);
                continue 'outer;
            }
            if !k.is_multiple_of(&content) {
                return (Formula::False, log);
            }
            let e = if content.is_one() {
                e
            } else {
                let divided = e.divide_exact(&content);
                parts[i] = Formula::eq(divided.clone(), Term::zero());
                divided
            };
            let pick = e
                .coeffs
                .iter()
                .find(|(v, c)| eliminable.contains(v) && c.coeff(0).abs().is_one());
            let Some((&v, c)) = pick else { continue };
            // c·v + rest = 0  ⇒  v = -rest/c = -c·rest for c = ±1
            let mut rest = e.clone();
            rest.take(v);
            let value = rest.scale_int(&-c.coeff(0));
            parts.remove(i);
            parts = parts
                .iter()
                .map(|p| p.map_atoms(&|a| Formula::Atom(a.map_terms(|t| t.substitute(v, &value)))))
                .collect();
            log.push((v, value));
            continue 'outer;
        }
        break;
    }
    (Formula::and(parts), log)
}

impl Term {
    /// Exact division of every coefficient and the constant by `d`.
    pub(crate) fn divide_exact(&self, d: &BigInt) -> Term {
        let div = |p: &IntPoly| IntPoly::new(p.coeffs().iter().map(|c| c / d).collect());
        Term {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, div(c))).collect(),
            constant: div(&self.constant),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{ground, parse_formula, print_formula};

    #[test]
    fn unit_coefficient_substitution() {
        let p = parse_formula("free x y; x = 2*y + 1 and 0 <= x and x <= 9").unwrap();
        let (f, log) = eliminate_equalities(&p.formula, &[0, 1]);
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].0, 0);
        assert_eq!(print_formula(&f, &p), "0 <= 2*y + 1 and 2*y + 1 <= 9");
    }

    #[test]
    fn no_unit_coefficient_leaves_equation() {
        let p = parse_formula("free x y n; 3*x + 5*y = n").unwrap();
        let (f, log) = eliminate_equalities(&p.formula, &[0, 1]);
        assert!(log.is_empty());
        assert_eq!(f, p.formula);
    }

    #[test]
    fn divide_through_and_infeasible() {
        let p = parse_formula("free x y; 2*x + 4*y = 6 and x >= 0").unwrap();
        let (f, log) = eliminate_equalities(&p.formula, &[0, 1]);
        assert_eq!(log[0].0, 0);
        assert_eq!(print_formula(&f, &p), "0 <= -2*y + 3");
        let p = parse_formula("free x y; 2*x + 4*y = 7").unwrap();
        assert_eq!(eliminate_equalities(&p.formula, &[0, 1]).0, Formula::False);
    }

    /// Rank of the eight line-sum equations of a 3×3 square, by exact row reduction.
    fn magic_rank() -> usize {
        let lines: [[usize; 3]; 8] = [
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [2, 4, 6],
        ];
        let mut m: Vec<Vec<num_rational::BigRational>> = lines
            .iter()
            .map(|l| {
                let mut row = vec![crate::arith::rat(0); 10];
                for &c in l {
                    row[c] = crate::arith::rat(1);
                }
                row[9] = crate::arith::rat(-1);
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..10 {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[rank][col];
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn magic_square_reduces_to_two_cells() {
        let src = "param t; free a b c d e f g h i;
            a + b + c = t and d + e + f = t and g + h + i = t and
            a + d + g = t and b + e + h = t and c + f + i = t and
            a + e + i = t and c + e + g = t";
        let p = ground(&parse_formula(src).unwrap(), &[24]).unwrap();
        let cells: Vec<VarId> = (0..9).collect();
        let (_, log) = eliminate_equalities(&p.formula, &cells);
        // 9 cells plus the parameter, rank of the system in (cells, t)
        assert_eq!(9 - log.len(), 10 - magic_rank() - 1);
        assert_eq!(log.len(), 7);
    }
}
