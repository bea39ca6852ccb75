use super::field::Field;

/// Dense univariate polynomial in `t`, little-endian, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UniPoly<E> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(k: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, c: E) -> Self {
        Self::from_coeffs(k, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self::constant(k, k.one())
    }

    /// `c·t^d`.
    pub fn monomial<F: Field<Elem = E>>(k: &F, c: E, d: usize) -> Self {
        if k.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![k.zero(); d + 1];
        coeffs[d] = c;
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(k, c)
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        self.add(k, &o.neg(k))
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        if k.is_zero(c) {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| k.mul(a, c)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = k.add(&c[i + j], &k.mul(a, b));
            }
        }
        Self::from_coeffs(k, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem<F: Field<Elem = E>>(&self, k: &F, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = k.inv(d.lc().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if k.is_zero(&r[i]) {
                continue;
            }
            let c = k.mul(&r[i], &inv);
            for (j, b) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = k.sub(&r[idx], &k.mul(&c, b));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(k, q), Self::from_coeffs(k, r))
    }

    /// Division known to be exact.
    pub fn exact_div<F: Field<Elem = E>>(&self, k: &F, d: &Self) -> Self {
        let (q, r) = self.divrem(k, d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(c) => self.scale(k, &k.inv(c).unwrap()),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(k), o.monic(k));
        while !b.is_zero() {
            let r = a.divrem(k, &b).1;
            a = b;
            b = r.monic(k);
        }
        a
    }

    pub fn eval<F: Field<Elem = E>>(&self, k: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(&k.from_u64(i as u64), c))
            .collect();
        Self::from_coeffs(k, c)
    }

    /// Maps coefficients into another field.
    pub fn map<G: Field>(&self, g: &G, f: impl Fn(&E) -> G::Elem) -> UniPoly<G::Elem> {
        UniPoly::from_coeffs(g, self.coeffs.iter().map(f).collect())
    }

    /// Renders with `var` as the variable, descending degree.
    pub fn to_text<F: Field<Elem = E>>(&self, k: &F, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let ct = k.coeff_text(c);
            if out.is_empty() {
                if ct.negative {
                    out.push('-');
                }
            } else {
                out.push_str(if ct.negative { " - " } else { " + " });
            }
            let unit = ct.body == "1";
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&ct.body);
            } else if unit {
                out.push_str(&mono);
            } else {
                out.push_str(&ct.body);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}
