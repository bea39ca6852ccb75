use std::cmp::Ordering;

use proptest::prelude::*;
use weyl_ct::arith::{qt, Rationals};
use weyl_ct::format::{parse_operator, print_operator};
use weyl_ct::weyl::{MonomialOrder, WeylAlgebra};

use super::{check, Outcome};
use crate::common::*;

fn orders(n: usize) -> Vec<MonomialOrder> {
    let w: Vec<u32> = (1..=2 * n as u32).collect();
    vec![
        MonomialOrder::grevlex(),
        MonomialOrder::block(),
        MonomialOrder::lex((0..2 * n).collect()),
        MonomialOrder::weight(w),
    ]
}

fn q_algebra(n: usize) -> WeylAlgebra<Rationals> {
    WeylAlgebra::new(Rationals, n, 1, MonomialOrder::block()).unwrap()
}

pub fn associativity() -> Outcome {
    let s = (1usize..=3, raw_terms(6, 4, 4), raw_terms(6, 4, 4), raw_terms(6, 4, 4));
    check(128, s, |(n, a, b, c)| {
        let w = q_algebra(n);
        let [a, b, c] = [a, b, c].map(|r| {
            let r: RawTerms = r.into_iter().map(|(e, c)| ([&e[..n], &e[3..3 + n]].concat(), c)).collect();
            op_of(&w, &r, rational)
        });
        prop_assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
        Ok(())
    })
}

/// In `W_{t,x}(t)` moving `∂_t` past a coefficient differentiates it.
pub fn associativity_with_dt() -> Outcome {
    let s = (raw_terms(3, 3, 3), raw_terms(3, 3, 3), raw_terms(3, 3, 3), -2i64..=2);
    check(128, s, |(a, b, c, s)| {
        let w = WeylAlgebra::with_dt(qt(), 1, 1, MonomialOrder::block()).unwrap();
        let (a, b, c) = (qt_op(&w, &a, s), qt_op(&w, &b, 1), qt_op(&w, &c, -s));
        prop_assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
        Ok(())
    })
}

pub fn action_homomorphism() -> Outcome {
    check(128, (raw_terms(4, 3, 4), raw_terms(4, 3, 4), raw_terms(2, 5, 5)), |(p, q, f)| {
        let w = q_algebra(2);
        let (p, q) = (op_of(&w, &p, rational), op_of(&w, &q, rational));
        let f: RawTerms = f.into_iter().map(|(e, c)| ([e, vec![0, 0]].concat(), c)).collect();
        let f = op_of(&w, &f, rational);
        let lhs = w.apply_to_polynomial(&w.mul(&p, &q), &f).unwrap();
        let rhs = w.apply_to_polynomial(&p, &w.apply_to_polynomial(&q, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn degree_additivity() -> Outcome {
    check(128, (raw_terms(6, 4, 4), raw_terms(6, 4, 4)), |(a, b)| {
        let w = q_algebra(3);
        let (a, b) = (op_of(&w, &a, rational), op_of(&w, &b, rational));
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(w.mul(&a, &b).degree(), a.degree() + b.degree());
        Ok(())
    })
}

/// `lm(q·g) = lm(q·lm(g))` for a monomial `q`, under every order kind.
pub fn leading_monomial_law() -> Outcome {
    let s = (0usize..4, prop::collection::vec(0u16..=3, 4), raw_terms(4, 3, 5));
    check(128, s, |(k, q, g)| {
        let w = WeylAlgebra::new(Rationals, 2, 1, orders(2)[k].clone()).unwrap();
        let g = op_of(&w, &g, rational);
        prop_assume!(!g.is_zero());
        let qm = w.monomial(monomial_of(2, false, &q, 0));
        let lhs = w.mul(&qm, &g);
        let rhs = w.mul(&qm, &w.monomial(g.lm().unwrap().clone()));
        prop_assert_eq!(lhs.lm(), rhs.lm());
        Ok(())
    })
}

pub fn strict_total_orders() -> Outcome {
    let e = || prop::collection::vec(0u16..=3, 4);
    check(256, (0usize..4, e(), e(), e()), |(k, a, b, c)| {
        let o = &orders(2)[k];
        let [a, b, c] = [a, b, c].map(|e| monomial_of(2, false, &e, 0));
        prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
        prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
        if o.cmp(&a, &b) == Ordering::Less && o.cmp(&b, &c) == Ordering::Less {
            prop_assert_eq!(o.cmp(&a, &c), Ordering::Less);
        }
        let one = monomial_of(2, false, &[0, 0, 0, 0], 0);
        prop_assert_ne!(o.cmp(&one, &a), Ordering::Greater);
        Ok(())
    })
}

pub fn print_parse_round_trip() -> Outcome {
    check(200, (raw_terms(6, 4, 6), -3i64..=3), |(a, s)| {
        let w = airy_algebra();
        let names = names(&["x", "y", "z"]);
        let a = qt_op(&w, &a, s);
        let text = print_operator(&w, &names, &a);
        prop_assert_eq!(parse_operator(&w, &names, &text).unwrap(), a, "{}", text);
        Ok(())
    })
}
