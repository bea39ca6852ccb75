use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// How a coefficient should be rendered in front of a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffText {
    pub negative: bool,
    /// Magnitude, already safe to use as a factor of a product.
    pub body: String,
}

/// A coefficient field. Elements carry no field tag; the field value is the
/// context every operation goes through.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `None` when the denominator is not invertible (e.g. divisible by p).
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn coeff_text(&self, a: &Self::Elem) -> CoeffText;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        match i64::try_from(n) {
            Ok(v) => self.from_i64(v),
            Err(_) => self
                .from_rational(&BigRational::from_integer(BigInt::from(n)))
                .expect("integers are always representable"),
        }
    }

    /// The distinguished variable `t`, when the field contains it.
    fn parameter(&self) -> Option<Self::Elem> {
        None
    }

    /// Derivative with respect to `t`; zero on constant fields.
    fn derivative(&self, _a: &Self::Elem) -> Self::Elem {
        self.zero()
    }

    fn has_parameter(&self) -> bool {
        self.parameter().is_some()
    }

    /// Characteristic of the field (0 for ℚ).
    fn characteristic(&self) -> u64;
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn coeff_text(&self, a: &BigRational) -> CoeffText {
        CoeffText {
            negative: a.is_negative(),
            body: a.abs().to_string(),
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// The prime field 𝔽_p for an odd prime p < 2³¹; elements live in [0, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31), "prime out of range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i64) as u64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_bigint(q.denom());
        let n = self.reduce_bigint(q.numer());
        self.inv(&d).map(|di| n * di % self.p)
    }
    fn coeff_text(&self, a: &u64) -> CoeffText {
        CoeffText {
            negative: false,
            body: a.to_string(),
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}
