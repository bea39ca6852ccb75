use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weyl_ct::arith::{
    cauchy_interpolate, crt_combine, qt, random_prime, rational_reconstruct, AdaptiveReconstructor, Field,
    PrimeField, RatFun, RatFunField, RationalLifter, UniPoly,
};

use super::{check, Outcome};
use crate::common::*;

fn primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::new();
    while out.len() < count {
        let p = random_prime(&mut rng);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// `num/den` over 𝔽_p; `None` for a zero denominator.
fn fp_ratfun(k: &PrimeField, num: &[u64], den: &[u64]) -> Option<RatFun<u64>> {
    let n = UniPoly::from_coeffs(k, num.iter().map(|&c| c % k.modulus()).collect());
    let d = UniPoly::from_coeffs(k, den.iter().map(|&c| c % k.modulus()).collect());
    (!d.is_zero()).then(|| RatFunField::new(*k).frac(n, d))
}

/// `p/q` with `|p|, q < 2¹⁵` through three 31-bit primes.
pub fn crt_reconstruction() -> Outcome {
    let s = (-(1i64 << 15) + 1..(1i64 << 15), 1i64..(1 << 15), any::<u64>());
    check(100, s, |(p, q, seed)| {
        let target = BigRational::new(BigInt::from(p), BigInt::from(q));
        let residues: Vec<(u64, u64)> = primes(seed, 3)
            .into_iter()
            .map(|m| (PrimeField::new(m).from_rational(&target).unwrap(), m))
            .collect();
        let (u, n) = crt_combine(&residues).unwrap();
        prop_assert_eq!(rational_reconstruct(&u, &n), Some(target));
        Ok(())
    })
}

pub fn vector_lifting() -> Outcome {
    let s = (prop::collection::vec((-30000i64..30000, 1i64..30000), 1..5), any::<u64>());
    check(100, s, |(v, seed)| {
        let target: Vec<BigRational> = v.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect();
        let mut lifter = RationalLifter::new();
        for m in primes(seed, 8) {
            let k = PrimeField::new(m);
            let img: Vec<u64> = target.iter().map(|x| k.from_rational(x).unwrap()).collect();
            if lifter.feed(m, &img).unwrap() {
                break;
            }
        }
        prop_assert_eq!(lifter.result(), Some(&target[..]));
        Ok(())
    })
}

/// Degrees up to 5/5 from 12 points, and through the adaptive reconstructor.
pub fn cauchy_round_trip() -> Outcome {
    let c = || prop::collection::vec(any::<u64>(), 0..=6);
    check(100, (c(), c(), any::<u64>(), 0u64..1_000_000), |(num, den, seed, start)| {
        let k = PrimeField::new(primes(seed, 1)[0]);
        let f = fp_ratfun(&k, &num, &den);
        prop_assume!(f.is_some());
        let f = f.unwrap();
        let kt = RatFunField::new(k);
        let pts: Vec<(u64, u64)> = (start..)
            .filter_map(|a| kt.eval(&f, &a).map(|v| (a, v)))
            .take(12)
            .collect();
        prop_assert_eq!(cauchy_interpolate(&k, &pts, (5, 5)).unwrap(), Some(f.clone()));

        let mut rec = AdaptiveReconstructor::new(k);
        let mut a = start + 1_000_000;
        while !rec.is_done() {
            if let Some(v) = kt.eval(&f, &a) {
                rec.feed(a, v).unwrap();
            }
            a += 1;
        }
        prop_assert_eq!(rec.result(), Some(&f));
        Ok(())
    })
}

pub fn field_axioms() -> Outcome {
    check(100, (qt_elem(), qt_elem(), qt_elem()), |(a, b, c)| {
        let k = qt();
        prop_assert_eq!(k.add(&k.add(&a, &b), &c), k.add(&a, &k.add(&b, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.add(&a, &b), k.add(&b, &a));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert!(k.is_zero(&k.add(&a, &k.neg(&a))));
        match k.inv(&a) {
            Some(inv) => prop_assert!(k.is_one(&k.mul(&a, &inv))),
            None => prop_assert!(k.is_zero(&a)),
        }
        // Normalization is idempotent.
        prop_assert_eq!(k.frac(a.num().clone(), a.den().clone()), a);
        Ok(())
    })
}
