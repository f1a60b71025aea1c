use num_bigint::BigInt;
use num_traits::One;

use super::{Atom, Formula};

/// Negation normal form over the integers.
///
/// Negated atoms are rewritten into positive ones, `forall v. φ` becomes
/// `not exists v. ψ` with `ψ` the normal form of `not φ`, and a negation survives
/// only directly above an existential.
pub fn normalize_nnf(f: &Formula) -> Formula {
    pos(f)
}

fn pos(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::And(v) => Formula::and(v.iter().map(pos).collect()),
        Formula::Or(v) => Formula::or(v.iter().map(pos).collect()),
        Formula::Not(g) => neg(g),
        Formula::Exists(x, g) => Formula::exists(*x, pos(g)),
        Formula::Forall(x, g) => Formula::negate(Formula::exists(*x, neg(g))),
    }
}

fn neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(a) => negate_atom(a),
        Formula::And(v) => Formula::or(v.iter().map(neg).collect()),
        Formula::Or(v) => Formula::and(v.iter().map(neg).collect()),
        Formula::Not(g) => pos(g),
        Formula::Exists(x, g) => Formula::negate(Formula::exists(*x, pos(g))),
        Formula::Forall(x, g) => Formula::exists(*x, neg(g)),
    }
}

pub(crate) fn negate_atom(a: &Atom) -> Formula {
    match a {
        Atom::Le(l, r) => Formula::le(r.add_int(1), l.clone()),
        Atom::Eq(l, r) => Formula::or(vec![
            Formula::le(l.clone(), r.add_int(-1)),
            Formula::le(r.clone(), l.add_int(-1)),
        ]),
        Atom::Div(d, e) => {
            let mut branches = Vec::new();
            let mut j = BigInt::one();
            while &j < d {
                let shifted = e.sub(&super::Term::constant(crate::arith::IntPoly::constant(j.clone())));
                branches.push(Formula::Atom(Atom::Div(d.clone(), shifted)));
                j += 1;
            }
            Formula::or(branches)
        }
    }
}
