use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::monomial::{Exps, Monomial};
use super::order::MonomialOrder;
use crate::arith::{Field, PrimeField, QT};
use crate::error::{Error, Result};

/// A sparse operator: terms sorted strictly descending under the algebra's
/// order, no zero coefficients. Only meaningful together with its algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOperator<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E> WeylOperator<E> {
    pub fn zero() -> Self {
        WeylOperator { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&E> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|t| &t.0)
    }

    /// `max |α|+|β|` over the support (0 for the zero operator).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Largest `∂_t` exponent (0 for the zero operator).
    pub fn dt_degree(&self) -> u16 {
        self.terms.iter().map(|t| t.0.dt()).max().unwrap_or(0)
    }
}

/// The algebra `W_x^r` (optionally with `∂_t`) over a field `K`, with a fixed
/// monomial order. All operator arithmetic goes through this context.
#[derive(Clone, Debug)]
pub struct WeylAlgebra<K: Field> {
    field: K,
    n: usize,
    rank: usize,
    dt: bool,
    order: MonomialOrder,
}

pub type Op<K> = WeylOperator<<K as Field>::Elem>;

/// `C(b,k)·C(a,k)·k!`
fn commutation_factor(b: u16, a: u16, k: u16) -> u128 {
    let mut v: u128 = 1;
    for i in 0..k as u128 {
        // b!/(b-k)! · C(a,k): build both falling factorial and binomial.
        v *= b as u128 - i;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (a as u128 - i) / (i + 1);
    }
    v.checked_mul(c).expect("commutation coefficient overflow")
}

impl<K: Field> WeylAlgebra<K> {
    pub fn new(field: K, n: usize, rank: usize, order: MonomialOrder) -> Result<Self> {
        Self::build(field, n, rank, false, order)
    }

    /// The algebra `W_{t,x}` with `∂_t` as an extra generator.
    pub fn with_dt(field: K, n: usize, rank: usize, order: MonomialOrder) -> Result<Self> {
        Self::build(field, n, rank, true, order)
    }

    fn build(field: K, n: usize, rank: usize, dt: bool, order: MonomialOrder) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        if !order.validate(n) {
            return Err(Error::Invalid("order does not match the variable count".into()));
        }
        if dt && !field.has_parameter() {
            return Err(Error::NoParameter);
        }
        Ok(WeylAlgebra {
            field,
            n,
            rank,
            dt,
            order,
        })
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn has_dt(&self) -> bool {
        self.dt
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Same algebra with a different order (operators must be re-sorted
    /// with [`Self::resort`]).
    pub fn with_order(&self, order: MonomialOrder) -> Result<Self> {
        Self::build(self.field.clone(), self.n, self.rank, self.dt, order)
    }

    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        Self::build(self.field.clone(), self.n, rank, self.dt, self.order.clone())
    }

    /// Same variables and order over another field (no `∂_t`).
    pub fn over<L: Field>(&self, field: L) -> Result<WeylAlgebra<L>> {
        WeylAlgebra::build(field, self.n, self.rank, false, self.order.clone())
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.n, self.dt)
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.exps().len() != 2 * self.n + self.dt as usize || m.comp() >= self.rank {
            return Err(Error::Mismatch(format!("monomial {m:?} outside the algebra")));
        }
        Ok(())
    }

    // ---- construction ----

    /// Sorts and merges arbitrary terms.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, K::Elem)>) -> Op<K> {
        let mut map: HashMap<Monomial, K::Elem> = HashMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => *v = self.field.add(v, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        self.from_map(map)
    }

    fn from_map(&self, map: HashMap<Monomial, K::Elem>) -> Op<K> {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !self.field.is_zero(c)).collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        WeylOperator { terms }
    }

    /// Trusts that `terms` are strictly descending and nonzero.
    pub fn from_sorted_unchecked(&self, terms: Vec<(Monomial, K::Elem)>) -> Op<K> {
        debug_assert!(terms.windows(2).all(|w| self.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        WeylOperator { terms }
    }

    pub fn term(&self, m: Monomial, c: K::Elem) -> Op<K> {
        if self.field.is_zero(&c) {
            WeylOperator::zero()
        } else {
            WeylOperator { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(&self, m: Monomial) -> Op<K> {
        self.term(m, self.field.one())
    }

    pub fn constant(&self, c: K::Elem) -> Op<K> {
        self.term(self.one_monomial(), c)
    }

    pub fn one(&self) -> Op<K> {
        self.constant(self.field.one())
    }

    fn unit_exps(&self, idx: usize) -> Monomial {
        let mut e: Exps = self.one_monomial().exps().iter().copied().collect();
        e[idx] = 1;
        Monomial::from_exps(e, 0)
    }

    pub fn x(&self, i: usize) -> Op<K> {
        self.monomial(self.unit_exps(i))
    }

    pub fn d(&self, i: usize) -> Op<K> {
        self.monomial(self.unit_exps(self.n + i))
    }

    pub fn dt(&self) -> Result<Op<K>> {
        if !self.dt {
            return Err(Error::NoParameter);
        }
        Ok(self.monomial(self.unit_exps(2 * self.n)))
    }

    /// The basis vector `e_c` (0-based).
    pub fn unit(&self, c: usize) -> Op<K> {
        self.monomial(self.one_monomial().with_comp(c))
    }

    // ---- linear structure ----

    pub fn add(&self, a: &Op<K>, b: &Op<K>) -> Op<K> {
        self.combine(a, b, |x, y| self.field.add(x, y), |y| y.clone())
    }

    pub fn sub(&self, a: &Op<K>, b: &Op<K>) -> Op<K> {
        self.combine(a, b, |x, y| self.field.sub(x, y), |y| self.field.neg(y))
    }

    /// `a + c·b`.
    pub fn add_scaled(&self, a: &Op<K>, c: &K::Elem, b: &Op<K>) -> Op<K> {
        if self.field.is_zero(c) {
            return a.clone();
        }
        self.combine(
            a,
            b,
            |x, y| self.field.add(x, &self.field.mul(c, y)),
            |y| self.field.mul(c, y),
        )
    }

    fn combine(
        &self,
        a: &Op<K>,
        b: &Op<K>,
        both: impl Fn(&K::Elem, &K::Elem) -> K::Elem,
        only_b: impl Fn(&K::Elem) -> K::Elem,
    ) -> Op<K> {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = only_b(&b.terms[j].1);
                    if !self.field.is_zero(&c) {
                        out.push((b.terms[j].0.clone(), c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = both(&a.terms[i].1, &b.terms[j].1);
                    if !self.field.is_zero(&c) {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        for t in &b.terms[j..] {
            let c = only_b(&t.1);
            if !self.field.is_zero(&c) {
                out.push((t.0.clone(), c));
            }
        }
        WeylOperator { terms: out }
    }

    pub fn neg(&self, a: &Op<K>) -> Op<K> {
        WeylOperator {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    /// Left scalar multiple `c·a`.
    pub fn scale(&self, c: &K::Elem, a: &Op<K>) -> Op<K> {
        if self.field.is_zero(c) {
            return WeylOperator::zero();
        }
        WeylOperator {
            terms: a.terms.iter().map(|(m, v)| (m.clone(), self.field.mul(c, v))).collect(),
        }
    }

    pub fn coeff(&self, a: &Op<K>, m: &Monomial) -> K::Elem {
        a.terms
            .binary_search_by(|t| self.cmp(m, &t.0))
            .map(|i| a.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, a: &Op<K>) -> Op<K> {
        match a.lc() {
            None => WeylOperator::zero(),
            Some(c) => self.scale(&self.field.inv(c).unwrap(), a),
        }
    }

    pub fn leading_data(&self, a: &Op<K>) -> Result<(Monomial, K::Elem, Op<K>)> {
        let (m, c) = a.terms.first().ok_or(Error::ZeroOperator)?;
        Ok((m.clone(), c.clone(), self.term(m.clone(), c.clone())))
    }

    /// Re-sorts an operator after an order change.
    pub fn resort(&self, a: &Op<K>) -> Op<K> {
        let mut terms = a.terms.clone();
        terms.sort_by(|x, y| self.cmp(&y.0, &x.0));
        WeylOperator { terms }
    }

    /// Splits a module element into its scalar components.
    pub fn components(&self, a: &Op<K>) -> Vec<Op<K>> {
        let mut parts = vec![Vec::new(); self.rank];
        for (m, c) in &a.terms {
            parts[m.comp()].push((m.with_comp(0), c.clone()));
        }
        parts.into_iter().map(|terms| WeylOperator { terms }).collect()
    }

    /// Places a scalar operator into component `c`.
    pub fn embed(&self, a: &Op<K>, c: usize) -> Op<K> {
        self.resort(&WeylOperator {
            terms: a.terms.iter().map(|(m, v)| (m.with_comp(c), v.clone())).collect(),
        })
    }

    // ---- products ----

    fn int_elem(&self, v: u128) -> K::Elem {
        match u64::try_from(v) {
            Ok(x) => self.field.from_u64(x),
            Err(_) => self
                .field
                .from_rational(&BigRational::from_integer(BigInt::from(v)))
                .expect("integer image"),
        }
    }

    /// Accumulates `(c₁ m₁)·(c₂ m₂)` into `acc`.
    fn mul_terms_into(
        &self,
        c1: &K::Elem,
        m1: &Monomial,
        c2: &K::Elem,
        m2: &Monomial,
        acc: &mut HashMap<Monomial, K::Elem>,
    ) -> Result<()> {
        if m1.comp() > 0 && m2.comp() > 0 {
            return Err(Error::ComponentClash);
        }
        let n = self.n;
        let comp = m1.comp() + m2.comp();
        let (a, b) = (m1.alpha(), m1.beta());
        let (al, be) = (m2.alpha(), m2.beta());
        // ∂_t^k · c₂ = Σ_j C(k,j) c₂^{(j)} ∂_t^{k−j}
        let k = m1.dt();
        let mut twisted: Vec<(u16, K::Elem)> = Vec::with_capacity(k as usize + 1);
        {
            let mut deriv = c2.clone();
            let mut binom: u128 = 1;
            for j in 0..=k {
                if self.field.is_zero(&deriv) {
                    break;
                }
                twisted.push((k - j, self.field.mul(c1, &self.field.mul(&self.int_elem(binom), &deriv))));
                if j < k {
                    binom = binom * (k - j) as u128 / (j as u128 + 1);
                    deriv = self.field.derivative(&deriv);
                }
            }
        }
        // Enumerate κ ≤ min(b, α') componentwise.
        let lim: Vec<u16> = (0..n).map(|i| b[i].min(al[i])).collect();
        let mut kappa = vec![0u16; n];
        loop {
            let mut factor: u128 = 1;
            for i in 0..n {
                if kappa[i] > 0 {
                    factor = factor
                        .checked_mul(commutation_factor(b[i], al[i], kappa[i]))
                        .expect("commutation coefficient overflow");
                }
            }
            let fe = self.int_elem(factor);
            let mut e: Exps = Exps::with_capacity(2 * n + self.dt as usize);
            for i in 0..n {
                e.push(a[i] + al[i] - kappa[i]);
            }
            for i in 0..n {
                e.push(b[i] - kappa[i] + be[i]);
            }
            for (kr, c) in &twisted {
                let mut ee = e.clone();
                if self.dt {
                    ee.push(kr + m2.dt());
                }
                let m = Monomial::from_exps(ee, comp);
                let v = self.field.mul(c, &fe);
                match acc.get_mut(&m) {
                    Some(x) => *x = self.field.add(x, &v),
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
            // next κ
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(());
                }
                if kappa[i] < lim[i] {
                    kappa[i] += 1;
                    break;
                }
                kappa[i] = 0;
                i += 1;
            }
        }
    }

    /// The product `P·Q`; at most one factor may carry nonzero components.
    pub fn try_mul(&self, p: &Op<K>, q: &Op<K>) -> Result<Op<K>> {
        let mut acc = HashMap::new();
        for (m1, c1) in &p.terms {
            for (m2, c2) in &q.terms {
                self.mul_terms_into(c1, m1, c2, m2, &mut acc)?;
            }
        }
        Ok(self.from_map(acc))
    }

    pub fn mul(&self, p: &Op<K>, q: &Op<K>) -> Op<K> {
        self.try_mul(p, q).expect("incompatible factors")
    }

    /// `c·m·Q` for a scalar monomial `m`.
    pub fn mul_term_left(&self, c: &K::Elem, m: &Monomial, q: &Op<K>) -> Op<K> {
        let mut acc = HashMap::new();
        for (m2, c2) in &q.terms {
            self.mul_terms_into(c, m, c2, m2, &mut acc).expect("incompatible factors");
        }
        self.from_map(acc)
    }

    pub fn pow(&self, p: &Op<K>, e: u32) -> Op<K> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, p))
    }

    pub fn commutator(&self, p: &Op<K>, q: &Op<K>) -> Op<K> {
        self.sub(&self.mul(p, q), &self.mul(q, p))
    }

    // ---- t-structure and actions ----

    /// Coefficient-wise `∂/∂t`.
    pub fn coefficientwise_dt(&self, a: &Op<K>) -> Result<Op<K>> {
        if !self.field.has_parameter() {
            return Err(Error::NoParameter);
        }
        Ok(WeylOperator {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.derivative(c)))
                .filter(|(_, c)| !self.field.is_zero(c))
                .collect(),
        })
    }

    /// The natural action on `K[x]`, polynomials being ∂-free scalar operators.
    pub fn apply_to_polynomial(&self, p: &Op<K>, q: &Op<K>) -> Result<Op<K>> {
        if q.terms.iter().any(|(m, _)| !m.is_d_free() || m.comp() > 0) {
            return Err(Error::Invalid("target is not a polynomial".into()));
        }
        let mut acc = HashMap::new();
        for (m1, c1) in &p.terms {
            if m1.dt() > 0 {
                return Err(Error::Invalid("∂_t does not act on K[x]".into()));
            }
            'terms: for (m2, c2) in &q.terms {
                let mut factor: u128 = 1;
                let mut e: Exps = m2.exps().iter().copied().collect();
                for i in 0..self.n {
                    let (b, g) = (m1.beta()[i], m2.alpha()[i]);
                    if b > g {
                        continue 'terms;
                    }
                    for j in 0..b {
                        factor *= (g - j) as u128;
                    }
                    e[i] = g - b + m1.alpha()[i];
                }
                let m = Monomial::from_exps(e, 0);
                let v = self.field.mul(&self.field.mul(c1, c2), &self.int_elem(factor));
                match acc.get_mut(&m) {
                    Some(x) => *x = self.field.add(x, &v),
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        Ok(self.from_map(acc))
    }

    /// Maps coefficients into another algebra with identical layout and order.
    pub fn map_coeffs<L: Field>(
        &self,
        target: &WeylAlgebra<L>,
        a: &Op<K>,
        f: impl Fn(&K::Elem) -> Option<L::Elem>,
    ) -> Option<Op<L>> {
        let mut terms = Vec::with_capacity(a.terms.len());
        for (m, c) in &a.terms {
            let v = f(c)?;
            if !target.field.is_zero(&v) {
                terms.push((m.clone(), v));
            }
        }
        Some(target.resort(&WeylOperator { terms }))
    }
}

/// Substitutes `t = a` and reduces modulo `p`.
pub fn evaluate_and_reduce(
    src: &WeylAlgebra<QT>,
    target: &WeylAlgebra<PrimeField>,
    op: &Op<QT>,
    a: u64,
) -> Result<Op<PrimeField>> {
    let fp = *target.field();
    src.map_coeffs(target, op, |c| {
        let num = c.num().map(&fp, |q| fp.from_rational(q).unwrap_or(u64::MAX));
        let den = c.den().map(&fp, |q| fp.from_rational(q).unwrap_or(u64::MAX));
        if num.coeffs().contains(&u64::MAX) || den.coeffs().contains(&u64::MAX) {
            return None;
        }
        let d = den.eval(&fp, &a);
        fp.inv(&d).map(|di| fp.mul(&num.eval(&fp, &a), &di))
    })
    .ok_or(Error::Unlucky)
}
