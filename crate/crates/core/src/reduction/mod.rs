//! Normal forms modulo `S + ∂W^r`: the reduced form `[a]`, the spaces
//! `E_≤η` of irreducible elements, and the strengthened reduction `[a]_η`.

mod gd;

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::groebner::{rrem, rrem_certified, DivisionCertificate, GroebnerBasis};
use crate::weyl::{Monomial, Op, WeylAlgebra, WeylOperator};

pub use gd::{commutative_groebner, gd_irreducibility_oracle, GdOracle};

/// A Gröbner basis of `S` under an order with the finiteness property.
#[derive(Clone, Debug)]
pub struct ReductionContext<K: Field> {
    gb: GroebnerBasis<K>,
}

impl<K: Field> ReductionContext<K> {
    pub fn new(gb: GroebnerBasis<K>) -> Result<Self> {
        let alg = gb.algebra();
        if alg.has_dt() {
            return Err(Error::Invalid("reductions act on W_x(t), not W_{t,x}".into()));
        }
        if !alg.order().satisfies_finiteness(alg.n()) {
            return Err(Error::OrderNotFinite);
        }
        Ok(ReductionContext { gb })
    }

    pub fn basis(&self) -> &GroebnerBasis<K> {
        &self.gb
    }

    pub fn algebra(&self) -> &WeylAlgebra<K> {
        self.gb.algebra()
    }

    /// Largest monomial of degree `s` under the ambient order.
    pub fn largest_of_degree(&self, s: u32) -> Monomial {
        let alg = self.algebra();
        alg.order().largest_of_degree(alg.n(), alg.rank(), s)
    }

    /// Irreducible for both rewriting rules: ∂-free and not in lm(S).
    pub fn is_irreducible_monomial(&self, m: &Monomial) -> bool {
        m.is_d_free() && !self.gb.is_reducible(m)
    }

    pub fn is_irreducible(&self, a: &Op<K>) -> bool {
        a.support().all(|m| self.is_irreducible_monomial(m))
    }

    /// `[a]`: alternate `RRem` and `LRem` until irreducible.
    pub fn reduced_form(&self, a: &Op<K>) -> Op<K> {
        let alg = self.algebra();
        let mut cur = a.clone();
        while !self.is_irreducible(&cur) {
            cur = rrem(alg, &cur);
            cur = self.gb.lrem(&cur);
        }
        cur
    }

    /// `[a]` with `a = [a] + Σ q_g g + Σ ∂_j w_j`.
    pub fn reduced_form_certified(&self, a: &Op<K>) -> DivisionCertificate<K::Elem> {
        let alg = self.algebra();
        let k = alg.field();
        let mut cert = DivisionCertificate::empty(self.gb.generators().len(), alg.n(), WeylOperator::zero());
        let mut cur = a.clone();
        while !self.is_irreducible(&cur) {
            let r = rrem_certified(alg, &cur);
            for (acc, w) in cert.dw_parts.iter_mut().zip(&r.dw_parts) {
                *acc = alg.add(acc, w);
            }
            let l = self.gb.lrem_certified(&r.remainder);
            cert.add_scaled_parts(
                alg,
                &k.one(),
                &DivisionCertificate {
                    quotients: l.quotients,
                    dw_parts: vec![WeylOperator::zero(); alg.n()],
                    remainder: WeylOperator::zero(),
                },
            );
            cur = l.remainder;
        }
        cert.remainder = cur;
        cert
    }

    /// The set `H` used by [`Self::compute_eta_basis`] with, for each element, the generator and
    /// the shift `γ` producing it. Sorted ascending.
    fn candidate_monomials(&self, eta: &Monomial) -> Vec<(Monomial, usize, Vec<u16>)> {
        let alg = self.algebra();
        let n = alg.n();
        let gens = self.gb.generators();
        let mut found: HashMap<Monomial, (usize, Vec<u16>)> = HashMap::new();
        for (gi, g) in gens.iter().enumerate() {
            let lm = g.lm().unwrap();
            if lm.beta().iter().all(|&b| b == 0) {
                continue;
            }
            let mut seen: HashSet<Vec<u16>> = HashSet::new();
            let mut queue = VecDeque::from([vec![0u16; n]]);
            while let Some(gamma) = queue.pop_front() {
                if !seen.insert(gamma.clone()) {
                    continue;
                }
                let m = lm.shift_x(&gamma);
                if alg.cmp(&m, eta) == std::cmp::Ordering::Greater {
                    continue;
                }
                found.entry(m).or_insert((gi, gamma.clone()));
                for i in 0..n {
                    let mut next = gamma.clone();
                    next[i] += 1;
                    queue.push_back(next);
                }
            }
        }
        let lms: Vec<&Monomial> = gens.iter().map(|g| g.lm().unwrap()).collect();
        let mut out: Vec<_> = found
            .into_iter()
            .filter(|(m, _)| {
                // Drop lm(∂_i q g): divisible by some lm with a strictly larger ∂-part.
                !lms.iter().any(|l| l.divides(m) && l.beta() != m.beta())
            })
            .map(|(m, (gi, gamma))| (m, gi, gamma))
            .collect();
        out.sort_by(|a, b| alg.cmp(&a.0, &b.0));
        out
    }

    /// Basis of `E_≤η`. With `replay`, skips the candidates the
    /// tracer marks as non-contributing and fails if another one vanishes.
    pub fn compute_eta_basis(
        &self,
        eta: &Monomial,
        replay: Option<&Tracer>,
        certify: bool,
    ) -> Result<EtaBasis<K>> {
        let alg = self.algebra();
        let k = alg.field();
        let n = alg.n();
        let gens = self.gb.generators();
        let mut basis = EtaBasis {
            eta: eta.clone(),
            rows: Vec::new(),
            tracer: Tracer::default(),
        };
        for (m, gi, gamma) in self.candidate_monomials(eta) {
            if replay.is_some_and(|t| t.skips(&m)) {
                basis.tracer.skipped.push(m);
                continue;
            }
            let g = &gens[gi];
            let lm = g.lm().unwrap();
            let lc = g.lc().unwrap().clone();
            let xg = Monomial::from_parts(&gamma, &vec![0; n], None, 0);
            let shifted = alg.mul_term_left(&k.one(), &xg, g);
            // ∂^β x^{α+γ} e_j
            let d_part = Monomial::from_parts(&vec![0; n], lm.beta(), None, 0);
            let x_part = Monomial::from_parts(lm.shift_x(&gamma).alpha(), &vec![0; n], None, lm.comp());
            let dx = alg.mul_term_left(&k.one(), &d_part, &alg.monomial(x_part.clone()));
            let cand = alg.sub(&shifted, &alg.scale(&lc, &dx));
            let (reduced, mut cert) = if certify {
                let c = self.reduced_form_certified(&cand);
                // cand = x^γ g − lc·∂_i(∂^{β−ε_i} x^{α+γ} e_j)
                let i = lm.beta().iter().position(|&b| b > 0).unwrap();
                let mut lowered = lm.beta().to_vec();
                lowered[i] -= 1;
                let d_low = Monomial::from_parts(&vec![0; n], &lowered, None, 0);
                let w = alg.scale(&k.neg(&lc), &alg.mul_term_left(&k.one(), &d_low, &alg.monomial(x_part)));
                let mut own = DivisionCertificate::empty(gens.len(), n, WeylOperator::zero());
                own.quotients[gi] = alg.monomial(xg);
                own.dw_parts[i] = w;
                own.add_scaled_parts(alg, &k.neg(&k.one()), &c);
                (c.remainder, Some(own))
            } else {
                (self.reduced_form(&cand), None)
            };
            let mut row = reduced;
            for r in &basis.rows {
                let c = alg.coeff(&row, r.op.lm().unwrap());
                if !k.is_zero(&c) {
                    row = alg.add_scaled(&row, &k.neg(&c), &r.op);
                    if let (Some(own), Some(rc)) = (cert.as_mut(), r.cert.as_ref()) {
                        own.add_scaled_parts(alg, &k.neg(&c), rc);
                    }
                }
            }
            if row.is_zero() {
                if replay.is_some() {
                    return Err(Error::UnluckyTracer);
                }
                basis.tracer.skipped.push(m);
                continue;
            }
            let inv = k.inv(row.lc().unwrap()).unwrap();
            row = alg.scale(&inv, &row);
            if let Some(own) = cert.as_mut() {
                let zero = DivisionCertificate::empty(gens.len(), n, WeylOperator::zero());
                let mut scaled = zero.clone();
                scaled.add_scaled_parts(alg, &inv, own);
                *own = scaled;
            }
            // Keep rows fully reduced against the new pivot.
            let pivot = row.lm().unwrap().clone();
            for r in basis.rows.iter_mut() {
                let c = alg.coeff(&r.op, &pivot);
                if !k.is_zero(&c) {
                    r.op = alg.add_scaled(&r.op, &k.neg(&c), &row);
                    if let (Some(rc), Some(own)) = (r.cert.as_mut(), cert.as_ref()) {
                        rc.add_scaled_parts(alg, &k.neg(&c), own);
                    }
                }
            }
            basis.rows.push(EtaRow { op: row, cert });
        }
        Ok(basis)
    }

    /// `[a]_η`.
    pub fn reduce_eta(&self, a: &Op<K>, basis: &EtaBasis<K>) -> Op<K> {
        basis.reduce(self.algebra(), &self.reduced_form(a))
    }

    /// `[a]_η` with a certificate; rows must carry certificates.
    pub fn reduce_eta_certified(&self, a: &Op<K>, basis: &EtaBasis<K>) -> Result<DivisionCertificate<K::Elem>> {
        let alg = self.algebra();
        let k = alg.field();
        let mut cert = self.reduced_form_certified(a);
        let mut cur = std::mem::replace(&mut cert.remainder, WeylOperator::zero());
        for r in &basis.rows {
            let c = alg.coeff(&cur, r.op.lm().unwrap());
            if !k.is_zero(&c) {
                let rc = r
                    .cert
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("rows were built without certificates".into()))?;
                cur = alg.add_scaled(&cur, &k.neg(&c), &r.op);
                cert.add_scaled_parts(alg, &c, rc);
            }
        }
        cert.remainder = cur;
        Ok(cert)
    }
}

/// Candidate monomials whose reduction contributed nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tracer {
    skipped: Vec<Monomial>,
}

impl Tracer {
    pub fn skips(&self, m: &Monomial) -> bool {
        self.skipped.contains(m)
    }

    pub fn skipped(&self) -> &[Monomial] {
        &self.skipped
    }

    pub fn from_skipped(skipped: Vec<Monomial>) -> Self {
        Tracer { skipped }
    }

    /// The tracer shared by at least two of three runs.
    pub fn majority(t: [&Tracer; 3]) -> Option<Tracer> {
        if t[0] == t[1] || t[0] == t[2] {
            Some(t[0].clone())
        } else if t[1] == t[2] {
            Some(t[1].clone())
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct EtaRow<K: Field> {
    pub op: Op<K>,
    /// `op = Σ q_g g + Σ ∂_j w_j` (remainder field unused).
    pub cert: Option<DivisionCertificate<K::Elem>>,
}

/// Echelon basis of `E_≤η`: monic rows with distinct leading monomials, each
/// free of the other rows' pivots.
#[derive(Clone, Debug)]
pub struct EtaBasis<K: Field> {
    pub eta: Monomial,
    pub rows: Vec<EtaRow<K>>,
    pub tracer: Tracer,
}

impl<K: Field> EtaBasis<K> {
    pub fn operators(&self) -> Vec<Op<K>> {
        self.rows.iter().map(|r| r.op.clone()).collect()
    }

    /// Eliminates every row pivot from an irreducible element.
    pub fn reduce(&self, alg: &WeylAlgebra<K>, a: &Op<K>) -> Op<K> {
        let k = alg.field();
        let mut cur = a.clone();
        for r in &self.rows {
            let c = alg.coeff(&cur, r.op.lm().unwrap());
            if !k.is_zero(&c) {
                cur = alg.add_scaled(&cur, &k.neg(&c), &r.op);
            }
        }
        cur
    }
}
