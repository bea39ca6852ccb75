use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::field::{Field, PrimeField};
use super::poly::UniPoly;
use super::ratfun::{RatFun, RatFunField};
use crate::error::{Error, Result};

/// Combines residues `(v mod p)` into `(value, N)` with `0 ≤ value < N = Π p`.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<(BigInt, BigInt)> {
    let mut seen = HashSet::new();
    let mut acc = (BigInt::zero(), BigInt::one());
    for &(v, p) in residues {
        if !seen.insert(p) {
            return Err(Error::DuplicatePrime(p));
        }
        acc = crt_extend(&acc.0, &acc.1, v, p);
    }
    Ok(acc)
}

/// Extends `u mod n` by `v mod p` (p coprime to n).
pub fn crt_extend(u: &BigInt, n: &BigInt, v: u64, p: u64) -> (BigInt, BigInt) {
    let k = PrimeField::new(p);
    let u_p = k.reduce_bigint(u);
    let n_inv = k.inv(&k.reduce_bigint(n)).expect("moduli must be coprime");
    let h = k.mul(&k.sub(&(v % p), &u_p), &n_inv);
    let m = n * BigInt::from(p);
    (u + n * BigInt::from(h), m)
}

/// Finds `a/b` with `b·u ≡ a (mod n)`, `|a|, b ≤ √(n/2)`, `gcd(b, n) = 1`.
pub fn rational_reconstruct(u: &BigInt, n: &BigInt) -> Option<BigRational> {
    let bound = (n / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (n.clone(), u.mod_floor(n));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !s1.gcd(n).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Rational function through `points` with numerator degree ≤ `dn` and
/// denominator degree ≤ `dd`. `Ok(None)` signals inconsistent data.
pub fn cauchy_interpolate(
    k: &PrimeField,
    points: &[(u64, u64)],
    (dn, dd): (usize, usize),
) -> Result<Option<RatFun<u64>>> {
    let need = dn + dd + 1;
    if points.len() < need {
        return Err(Error::NotEnoughPoints {
            need,
            have: points.len(),
        });
    }
    let mut seen = HashSet::new();
    for &(a, _) in points {
        if !seen.insert(a) {
            return Err(Error::RepeatedAbscissa(a));
        }
    }
    let used = &points[..need];
    let (interp, modulus) = newton_interpolate(k, used);
    // Extended Euclid on (modulus, interp) until the remainder degree drops to dn.
    let (mut r0, mut r1) = (modulus, interp);
    let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one(k));
    while r1.degree().is_some_and(|d| d > dn) {
        let (q, r) = r0.divrem(k, &r1);
        let s2 = s0.sub(k, &q.mul(k, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.degree().is_some_and(|d| d > dd) {
        return Ok(None);
    }
    let kt = RatFunField::new(*k);
    for &(a, _) in used {
        if k.is_zero(&s1.eval(k, &a)) {
            return Ok(None);
        }
    }
    let f = kt.frac(r1, s1);
    for &(a, v) in points {
        match kt.eval(&f, &a) {
            Some(x) if x == v % k.modulus() => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(f))
}

/// Like [`cauchy_interpolate`] but tolerates one wrong value among the
/// first `dn + dd + 3` points: the fit with bounds `(dn + 1, dd + 1)` carries
/// the error locator `t − a_bad` in both numerator and denominator, which
/// cancels. Returns the fit and the index of the outlier, if any.
pub fn cauchy_interpolate_one_error(
    k: &PrimeField,
    points: &[(u64, u64)],
    (dn, dd): (usize, usize),
) -> Result<Option<(RatFun<u64>, Option<usize>)>> {
    let need = dn + dd + 3;
    if points.len() < need {
        return Err(Error::NotEnoughPoints {
            need,
            have: points.len(),
        });
    }
    let (interp, modulus) = newton_interpolate(k, &points[..need]);
    let (mut r0, mut r1) = (modulus, interp);
    let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one(k));
    while r1.degree().is_some_and(|d| d > dn + 1) {
        let (q, r) = r0.divrem(k, &r1);
        let s2 = s0.sub(k, &q.mul(k, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() {
        return Ok(None);
    }
    let kt = RatFunField::new(*k);
    let f = kt.frac(r1, s1);
    if f.num().degree().is_some_and(|d| d > dn) || f.den().degree().is_some_and(|d| d > dd) {
        return Ok(None);
    }
    let mut bad = None;
    for (i, &(a, v)) in points.iter().enumerate() {
        if kt.eval(&f, &a) != Some(v % k.modulus()) {
            if bad.is_some() {
                return Ok(None);
            }
            bad = Some(i);
        }
    }
    Ok(Some((f, bad)))
}

/// Newton interpolation; returns the interpolant and Π (t − a_i).
fn newton_interpolate(k: &PrimeField, pts: &[(u64, u64)]) -> (UniPoly<u64>, UniPoly<u64>) {
    let mut poly = UniPoly::zero();
    let mut basis = UniPoly::one(k);
    for &(a, v) in pts {
        let cur = poly.eval(k, &a);
        let b = basis.eval(k, &a);
        let c = k.div(&k.sub(&v, &cur), &b);
        poly = poly.add(k, &basis.scale(k, &c));
        basis = basis.mul(k, &UniPoly::from_coeffs(k, vec![k.neg(&a), 1]));
    }
    (poly, basis)
}

/// Outcome of feeding one evaluation to an [`AdaptiveReconstructor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feed {
    NeedMore,
    /// The candidate was contradicted by a fresh value and discarded.
    Rejected,
    Done,
}

/// Recovers a rational function in 𝔽_p(t) from a stream of evaluations by
/// doubling degree bounds and confirming each candidate on fresh points.
#[derive(Clone, Debug)]
pub struct AdaptiveReconstructor {
    field: PrimeField,
    bounds: (usize, usize),
    points: Vec<(u64, u64)>,
    candidate: Option<RatFun<u64>>,
    confirmations: usize,
    required: usize,
    rejections: usize,
    discarded: Vec<(u64, u64)>,
}

impl AdaptiveReconstructor {
    pub fn new(field: PrimeField) -> Self {
        Self::with_confirmations(field, 1)
    }

    pub fn with_confirmations(field: PrimeField, required: usize) -> Self {
        AdaptiveReconstructor {
            field,
            bounds: (1, 1),
            points: Vec::new(),
            candidate: None,
            confirmations: 0,
            required: required.max(1),
            rejections: 0,
            discarded: Vec::new(),
        }
    }

    pub fn result(&self) -> Option<&RatFun<u64>> {
        (self.confirmations >= self.required)
            .then_some(self.candidate.as_ref())
            .flatten()
    }

    pub fn best_candidate(&self) -> Option<&RatFun<u64>> {
        self.candidate.as_ref()
    }

    pub fn rejections(&self) -> usize {
        self.rejections
    }

    pub fn points_used(&self) -> usize {
        self.points.len()
    }

    pub fn is_done(&self) -> bool {
        self.result().is_some()
    }

    pub fn feed(&mut self, a: u64, v: u64) -> Result<Feed> {
        if self.is_done() {
            return Ok(Feed::Done);
        }
        if self.points.iter().chain(&self.discarded).any(|&(b, _)| b == a) {
            return Err(Error::RepeatedAbscissa(a));
        }
        self.points.push((a, v));
        let kt = RatFunField::new(self.field);
        if let Some(c) = &self.candidate {
            if kt.eval(c, &a) == Some(v) {
                self.confirmations += 1;
                return Ok(if self.is_done() {
                    Feed::Done
                } else {
                    Feed::NeedMore
                });
            }
            self.candidate = None;
            self.confirmations = 0;
            self.rejections += 1;
            self.grow();
            self.try_candidate()?;
            return Ok(Feed::Rejected);
        }
        self.try_candidate()?;
        Ok(Feed::NeedMore)
    }

    fn grow(&mut self) {
        self.bounds = (self.bounds.0 * 2, self.bounds.1 * 2);
    }

    fn try_candidate(&mut self) -> Result<()> {
        loop {
            let sum = self.bounds.0 + self.bounds.1;
            if self.points.len() <= sum {
                return Ok(());
            }
            if let Some(f) = cauchy_interpolate(&self.field, &self.points, self.bounds)? {
                self.candidate = Some(f);
                self.confirmations = 0;
                return Ok(());
            }
            // Either the bounds are too small or one value is bad; telling the
            // two apart needs two spare points.
            if self.points.len() < sum + 3 {
                return Ok(());
            }
            if let Some((f, bad)) = cauchy_interpolate_one_error(&self.field, &self.points, self.bounds)? {
                if let Some(i) = bad {
                    let dropped = self.points.remove(i);
                    self.discarded.push(dropped);
                }
                self.candidate = Some(f);
                self.confirmations = 0;
                return Ok(());
            }
            self.grow();
        }
    }

    /// Points dropped as outliers.
    pub fn discarded(&self) -> &[(u64, u64)] {
        &self.discarded
    }
}

/// Lifts a vector of residues across primes to rationals, accepting a
/// reconstruction only after one further prime agrees with it.
#[derive(Clone, Debug, Default)]
pub struct RationalLifter {
    residues: Vec<BigInt>,
    modulus: BigInt,
    candidate: Option<Vec<BigRational>>,
    confirmed: bool,
    primes: Vec<u64>,
}

impl RationalLifter {
    pub fn new() -> Self {
        RationalLifter {
            modulus: BigInt::one(),
            ..Default::default()
        }
    }

    pub fn result(&self) -> Option<&[BigRational]> {
        if self.confirmed {
            self.candidate.as_deref()
        } else {
            None
        }
    }

    pub fn best_candidate(&self) -> Option<&[BigRational]> {
        self.candidate.as_deref()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Adds the image of the target vector modulo `p`; returns true once done.
    pub fn feed(&mut self, p: u64, values: &[u64]) -> Result<bool> {
        if self.primes.contains(&p) {
            return Err(Error::DuplicatePrime(p));
        }
        if !self.primes.is_empty() && values.len() != self.residues.len() {
            return Err(Error::Inconsistent("residue vector length changed".into()));
        }
        let k = PrimeField::new(p);
        if let Some(c) = &self.candidate {
            let agrees = c
                .iter()
                .zip(values)
                .all(|(q, &v)| k.from_rational(q) == Some(v));
            if agrees {
                self.confirmed = true;
                return Ok(true);
            }
            self.candidate = None;
        }
        if self.primes.is_empty() {
            self.residues = vec![BigInt::zero(); values.len()];
        }
        for (r, &v) in self.residues.iter_mut().zip(values) {
            *r = crt_extend(r, &self.modulus, v, p).0;
        }
        self.modulus *= BigInt::from(p);
        self.primes.push(p);
        let lifted: Option<Vec<_>> = self
            .residues
            .iter()
            .map(|r| rational_reconstruct(r, &self.modulus))
            .collect();
        self.candidate = lifted;
        Ok(false)
    }
}

/// Deterministic Miller–Rabin, valid for n < 3·10⁹.
pub fn is_prime_u32_range(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly random odd prime in [2³⁰, 2³¹).
pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let n = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime_u32_range(n) {
            return n;
        }
    }
}
