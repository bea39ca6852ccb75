use num_rational::BigRational;

use super::field::{CoeffText, Field};
use super::poly::UniPoly;

/// A rational function in `t`: coprime numerator and monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun<E> {
    num: UniPoly<E>,
    den: UniPoly<E>,
}

impl<E: Clone + PartialEq> RatFun<E> {
    pub fn num(&self) -> &UniPoly<E> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<E> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
}

/// The field K(t) of rational functions over a base field K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunField<F> {
    base: F,
}

impl<F: Field> RatFunField<F> {
    pub fn new(base: F) -> Self {
        RatFunField { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// Builds `num/den` in lowest terms; panics on a zero denominator.
    pub fn frac(&self, num: UniPoly<F::Elem>, den: UniPoly<F::Elem>) -> RatFun<F::Elem> {
        let k = &self.base;
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun {
                num,
                den: UniPoly::one(k),
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(k, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(k, &g), den.exact_div(k, &g))
            }
        };
        let c = k.inv(den.lc().unwrap()).unwrap();
        RatFun {
            num: num.scale(k, &c),
            den: den.scale(k, &c),
        }
    }

    pub fn from_poly(&self, p: UniPoly<F::Elem>) -> RatFun<F::Elem> {
        RatFun {
            num: p,
            den: UniPoly::one(&self.base),
        }
    }

    pub fn from_base(&self, c: F::Elem) -> RatFun<F::Elem> {
        self.from_poly(UniPoly::constant(&self.base, c))
    }

    /// Evaluates at `t = a`; `None` if the denominator vanishes there.
    pub fn eval(&self, f: &RatFun<F::Elem>, a: &F::Elem) -> Option<F::Elem> {
        let k = &self.base;
        let d = f.den.eval(k, a);
        k.inv(&d).map(|di| k.mul(&f.num.eval(k, a), &di))
    }

    fn poly_text(&self, p: &UniPoly<F::Elem>) -> (bool, String) {
        let k = &self.base;
        let terms = p.coeffs().iter().filter(|c| !k.is_zero(c)).count();
        if terms == 1 {
            let d = p.degree().unwrap();
            let ct = k.coeff_text(p.lc().unwrap());
            let mono = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            let body = if mono.is_empty() {
                ct.body
            } else if ct.body == "1" {
                mono
            } else {
                format!("{}*{}", ct.body, mono)
            };
            (ct.negative, body)
        } else {
            (false, format!("({})", p.to_text(k, "t")))
        }
    }
}

impl<F: Field> Field for RatFunField<F> {
    type Elem = RatFun<F::Elem>;

    fn zero(&self) -> Self::Elem {
        self.from_poly(UniPoly::zero())
    }
    fn one(&self) -> Self::Elem {
        self.from_poly(UniPoly::one(&self.base))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            if a.den.is_constant() {
                return self.from_poly(a.num.add(k, &b.num));
            }
            return self.frac(a.num.add(k, &b.num), a.den.clone());
        }
        let num = a.num.mul(k, &b.den).add(k, &b.num.mul(k, &a.den));
        self.frac(num, a.den.mul(k, &b.den))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFun {
            num: a.num.neg(&self.base),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        if a.den.is_constant() && b.den.is_constant() {
            return self.from_poly(a.num.mul(k, &b.num));
        }
        // Cross-cancel before multiplying to keep sizes small.
        let g1 = a.num.gcd(k, &b.den);
        let g2 = b.num.gcd(k, &a.den);
        let n = a
            .num
            .exact_div(k, &g1)
            .mul(k, &b.num.exact_div(k, &g2));
        let d = a
            .den
            .exact_div(k, &g2)
            .mul(k, &b.den.exact_div(k, &g1));
        let c = k.inv(d.lc().unwrap()).unwrap();
        RatFun {
            num: n.scale(k, &c),
            den: d.scale(k, &c),
        }
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.num.is_zero() {
            return None;
        }
        let k = &self.base;
        let c = k.inv(a.num.lc().unwrap()).unwrap();
        Some(RatFun {
            num: a.den.scale(k, &c),
            den: a.num.scale(k, &c),
        })
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_base(self.base.from_i64(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        self.base.from_rational(q).map(|c| self.from_base(c))
    }
    fn coeff_text(&self, a: &Self::Elem) -> CoeffText {
        let (neg, num) = self.poly_text(&a.num);
        if a.den.is_constant() {
            return CoeffText {
                negative: neg,
                body: num,
            };
        }
        let (_, den) = self.poly_text(&a.den);
        CoeffText {
            negative: neg,
            body: format!("{num}/{den}"),
        }
    }
    fn parameter(&self) -> Option<Self::Elem> {
        Some(self.from_poly(UniPoly::monomial(&self.base, self.base.one(), 1)))
    }
    fn derivative(&self, a: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.den.is_constant() {
            return self.from_poly(a.num.derivative(k));
        }
        let num = a
            .num
            .derivative(k)
            .mul(k, &a.den)
            .sub(k, &a.num.mul(k, &a.den.derivative(k)));
        self.frac(num, a.den.mul(k, &a.den))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
}
