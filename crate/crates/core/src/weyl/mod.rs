//! Sparse operator arithmetic in Weyl algebras `W_x^r` and `W_{t,x}^r`,
//! monomial orders, and the action on polynomials.

mod algebra;
mod monomial;
mod order;

pub use algebra::{evaluate_and_reduce, Op, WeylAlgebra, WeylOperator};
pub use monomial::{Exps, Monomial};
pub use order::{compositions, ComponentRule, MonomialOrder, OrderKind};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qt, Field, PrimeField, Rationals};

    fn q1() -> WeylAlgebra<Rationals> {
        WeylAlgebra::new(Rationals, 1, 1, MonomialOrder::grevlex()).unwrap()
    }

    #[test]
    fn commutation() {
        let w = q1();
        let (x, d) = (w.x(0), w.d(0));
        let p = w.mul(&d, &x);
        assert_eq!(p, w.add(&w.mul(&x, &d), &w.one()));
        let k = Rationals;
        let p2 = w.mul(&w.pow(&d, 2), &w.pow(&x, 2));
        let xd = w.mul(&x, &d);
        let expect = w.add(
            &w.add(&w.mul(&w.pow(&x, 2), &w.pow(&d, 2)), &w.scale(&k.from_i64(4), &xd)),
            &w.constant(k.from_i64(2)),
        );
        assert_eq!(p2, expect);
        let (lm, _, _) = w.leading_data(&p).unwrap();
        assert_eq!(lm, Monomial::from_parts(&[1], &[1], None, 0));
        assert!(w.leading_data(&WeylOperator::zero()).is_err());
    }

    #[test]
    fn polynomial_action() {
        let w = q1();
        let (x, d) = (w.x(0), w.d(0));
        let x3 = w.pow(&x, 3);
        let k = Rationals;
        assert_eq!(w.apply_to_polynomial(&w.mul(&x, &d), &x3).unwrap(), w.scale(&k.from_i64(3), &x3));
        assert_eq!(w.apply_to_polynomial(&w.mul(&d, &x), &x3).unwrap(), w.scale(&k.from_i64(4), &x3));
        assert_eq!(w.apply_to_polynomial(&w.one(), &x3).unwrap(), x3);
    }

    #[test]
    fn t_derivative_and_evaluation() {
        let k = qt();
        let w = WeylAlgebra::new(k.clone(), 1, 1, MonomialOrder::grevlex()).unwrap();
        let t = k.parameter().unwrap();
        let a = w.scale(&k.mul(&t, &t), &w.x(0));
        assert_eq!(w.coefficientwise_dt(&a).unwrap(), w.scale(&k.add(&t, &t), &w.x(0)));
        let fp = PrimeField::new(7);
        let wp = w.over(fp).unwrap();
        let b = w.scale(&k.add(&t, &k.one()), &w.x(0));
        assert_eq!(evaluate_and_reduce(&w, &wp, &b, 2).unwrap(), wp.scale(&3, &wp.x(0)));
        let pole = w.scale(&k.inv(&k.sub(&t, &k.from_i64(2))).unwrap(), &w.d(0));
        assert!(evaluate_and_reduce(&w, &wp, &pole, 2).is_err());
        assert!(q1().coefficientwise_dt(&q1().x(0)).is_err());
    }

    #[test]
    fn dt_twist() {
        let k = qt();
        let w = WeylAlgebra::with_dt(k.clone(), 0, 1, MonomialOrder::grevlex()).unwrap();
        let t = w.constant(k.parameter().unwrap());
        let dt = w.dt().unwrap();
        // ∂_t·t = t∂_t + 1
        assert_eq!(w.mul(&dt, &t), w.add(&w.mul(&t, &dt), &w.one()));
    }
}
