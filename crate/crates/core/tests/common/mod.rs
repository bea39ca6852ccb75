#![allow(dead_code)]

use weyl_ct::arith::{qt, QT};
use weyl_ct::format::parse_operator;
use weyl_ct::telescoping::DerivedPresentation;
use weyl_ct::weyl::{MonomialOrder, Op, WeylAlgebra};

pub fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

pub fn airy_algebra() -> WeylAlgebra<QT> {
    WeylAlgebra::new(qt(), 3, 1, MonomialOrder::block()).unwrap()
}

pub fn xyz(w: &WeylAlgebra<QT>, s: &str) -> Op<QT> {
    parse_operator(w, &names(&["x", "y", "z"]), s).unwrap()
}

/// The Airy-type presentation with `L(m) = m(∂_z − y)/2` and integrand 1.
pub fn airy_presentation() -> DerivedPresentation<QT> {
    let w = airy_algebra();
    let gens = ["dx - (x^2 - t - 2*z)", "dy - (y^2 - t - z)", "dz - (-2*x - y)"]
        .iter()
        .map(|s| xyz(&w, s))
        .collect();
    let lambda = vec![vec![xyz(&w, "(dz - y)/2")]];
    let one = w.one();
    DerivedPresentation::new(w, gens, lambda, one).unwrap()
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use weyl_ct::arith::{Field, RatFun, Rationals, UniPoly};
use weyl_ct::weyl::Monomial;

/// Raw terms: an exponent vector and a small integer coefficient.
pub type RawTerms = Vec<(Vec<u16>, i64)>;

/// Up to `len` terms, `width` exponents each, total degree at most `deg`.
pub fn raw_terms(width: usize, deg: u16, len: usize) -> impl Strategy<Value = RawTerms> {
    // Each slot picks a variable or nothing, so the cap holds by construction.
    let term = (prop::collection::vec(0..=width, deg as usize), -5i64..=5).prop_map(move |(slots, c)| {
        let mut e = vec![0u16; width];
        for s in slots.into_iter().filter(|&s| s < width) {
            e[s] += 1;
        }
        (e, c)
    });
    prop::collection::vec(term, 0..=len).prop_map(|v| v.into_iter().filter(|(_, c)| *c != 0).collect())
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// `width` is `2n` (plus one when `dt` is present, stored last).
pub fn monomial_of(n: usize, dt: bool, e: &[u16], comp: usize) -> Monomial {
    Monomial::from_parts(&e[..n], &e[n..2 * n], dt.then(|| e[2 * n]), comp)
}

pub fn op_of<K: Field>(alg: &WeylAlgebra<K>, raw: &RawTerms, coeff: impl Fn(i64) -> K::Elem) -> Op<K> {
    let n = alg.n();
    alg.from_terms(
        raw.iter()
            .map(|(e, c)| (monomial_of(n, alg.has_dt(), e, 0), coeff(*c))),
    )
}

pub fn rational(c: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}

/// A small element of ℚ(t): `(a + b t) / (1 + d t)`.
pub fn qt_elem() -> impl Strategy<Value = RatFun<BigRational>> {
    (-4i64..=4, -3i64..=3, 0i64..=2).prop_map(|(a, b, d)| {
        let q = Rationals;
        let num = UniPoly::from_coeffs(&q, vec![rational(a), rational(b)]);
        let den = UniPoly::from_coeffs(&q, vec![rational(1), rational(d)]);
        qt().frac(num, den)
    })
}

/// Operator over ℚ(t) whose coefficients are `c·(1 + s t)`.
pub fn qt_op(alg: &WeylAlgebra<QT>, raw: &RawTerms, s: i64) -> Op<QT> {
    op_of(alg, raw, |c| {
        let q = Rationals;
        qt().from_poly(UniPoly::from_coeffs(&q, vec![rational(c), rational(c * s)]))
    })
}
