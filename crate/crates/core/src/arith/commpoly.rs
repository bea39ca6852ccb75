use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sparse commutative polynomial over ℚ in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::term(nvars, vec![0; nvars], c)
    }

    pub fn term(nvars: usize, exps: Vec<u32>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable with index `i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, e, BigRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        CommPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_truncated(o, &vec![1; self.nvars], u32::MAX)
    }

    /// Product keeping only terms of weighted degree ≤ `max`.
    pub fn mul_truncated(&self, o: &Self, weights: &[u32], max: u32) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let w: u64 = e.iter().zip(weights).map(|(a, b)| *a as u64 * *b as u64).sum();
                if w <= max as u64 {
                    r.add_term(e, c1 * c2);
                }
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(self.nvars, BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * BigRational::from_integer(e[i].into()));
            }
        }
        r
    }

    /// Substitutes `x_i ↦ s_i·x_i`.
    pub fn scale_vars(&self, s: &[BigRational]) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (k, &d) in e.iter().enumerate() {
                for _ in 0..d {
                    v *= &s[k];
                }
            }
            r.add_term(e.clone(), v);
        }
        r
    }

    /// Leading term under grevlex with x₁ > x₂ > …
    pub fn leading_grevlex(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().max_by(|a, b| grevlex(a.0, b.0))
    }
}

/// Grevlex comparison of exponent vectors with the first variable largest.
pub fn grevlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        std::cmp::Ordering::Equal
    })
}
