//! Buchberger's algorithm for left submodules of `W^r`, certified left
//! division (`lrem`) and the right reduction modulo `∂W^r` (`rrem`).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::arith::Field;
use crate::weyl::{Monomial, Op, WeylAlgebra, WeylOperator};

/// Records how an input decomposes as
/// `input = remainder + Σ q_g·g + Σ ∂_j·w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionCertificate<E> {
    /// One cofactor per basis generator.
    pub quotients: Vec<WeylOperator<E>>,
    /// One part per x-direction.
    pub dw_parts: Vec<WeylOperator<E>>,
    pub remainder: WeylOperator<E>,
}

impl<E: Clone> DivisionCertificate<E> {
    pub fn empty(generators: usize, n: usize, remainder: WeylOperator<E>) -> Self {
        DivisionCertificate {
            quotients: vec![WeylOperator::zero(); generators],
            dw_parts: vec![WeylOperator::zero(); n],
            remainder,
        }
    }
}

impl<E: Clone + PartialEq> DivisionCertificate<E> {
    /// Re-expands the identity and compares it with `input`.
    pub fn verify<K: Field<Elem = E>>(
        &self,
        alg: &WeylAlgebra<K>,
        generators: &[Op<K>],
        input: &Op<K>,
    ) -> bool {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(generators) {
            acc = alg.add(&acc, &alg.mul(q, g));
        }
        for (j, w) in self.dw_parts.iter().enumerate() {
            acc = alg.add(&acc, &alg.mul(&alg.d(j), w));
        }
        acc == *input
    }

    /// `self + c·other` on the S- and ∂W-parts; the remainder is left alone.
    pub fn add_scaled_parts<K: Field<Elem = E>>(&mut self, alg: &WeylAlgebra<K>, c: &E, o: &Self) {
        for (a, b) in self.quotients.iter_mut().zip(&o.quotients) {
            *a = alg.add_scaled(a, c, b);
        }
        for (a, b) in self.dw_parts.iter_mut().zip(&o.dw_parts) {
            *a = alg.add_scaled(a, c, b);
        }
    }

    /// Largest `∂_t`-index `ind(q_g) + ind(g)` among the multiples used.
    pub fn max_multiple_index(&self, generators: &[WeylOperator<E>]) -> u16 {
        self.quotients
            .iter()
            .zip(generators)
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, g)| q.dt_degree() + g.dt_degree())
            .max()
            .unwrap_or(0)
    }
}

/// A reduced, monic left Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    alg: WeylAlgebra<K>,
    generators: Vec<Op<K>>,
    original: Vec<Op<K>>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn algebra(&self) -> &WeylAlgebra<K> {
        &self.alg
    }

    pub fn generators(&self) -> &[Op<K>] {
        &self.generators
    }

    pub fn original_generators(&self) -> &[Op<K>] {
        &self.original
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.lm().unwrap().clone()).collect()
    }

    /// Wraps generators already known to form a reduced basis.
    pub fn from_reduced(alg: WeylAlgebra<K>, generators: Vec<Op<K>>) -> Self {
        GroebnerBasis {
            alg,
            original: generators.clone(),
            generators,
        }
    }

    /// Index of the first generator whose leading monomial divides `m`.
    pub fn reducer(&self, m: &Monomial) -> Option<usize> {
        find_reducer(&self.generators, m)
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.reducer(m).is_some()
    }

    pub fn lrem(&self, a: &Op<K>) -> Op<K> {
        left_divide(&self.alg, &self.generators, a, false).0
    }

    pub fn lrem_certified(&self, a: &Op<K>) -> DivisionCertificate<K::Elem> {
        left_divide(&self.alg, &self.generators, a, true).1.unwrap()
    }

    pub fn ideal_membership(&self, a: &Op<K>) -> bool {
        self.lrem(a).is_zero()
    }
}

fn find_reducer<E>(gens: &[WeylOperator<E>], m: &Monomial) -> Option<usize> {
    gens.iter().position(|g| g.lm().is_some_and(|l| l.divides(m)))
}

/// Merges `rest - c·p_tail` where both are sorted descending.
fn sub_scaled_sorted<K: Field>(
    alg: &WeylAlgebra<K>,
    rest: &[(Monomial, K::Elem)],
    c: &K::Elem,
    p: &[(Monomial, K::Elem)],
) -> Vec<(Monomial, K::Elem)> {
    let k = alg.field();
    let mut out = Vec::with_capacity(rest.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < rest.len() && j < p.len() {
        match alg.cmp(&rest[i].0, &p[j].0) {
            Ordering::Greater => {
                out.push(rest[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((p[j].0.clone(), k.neg(&k.mul(c, &p[j].1))));
                j += 1;
            }
            Ordering::Equal => {
                let v = k.sub(&rest[i].1, &k.mul(c, &p[j].1));
                if !k.is_zero(&v) {
                    out.push((rest[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&rest[i..]);
    for t in &p[j..] {
        out.push((t.0.clone(), k.neg(&k.mul(c, &t.1))));
    }
    out
}

/// Full left division, always reducing the largest reducible monomial.
pub fn left_divide<K: Field>(
    alg: &WeylAlgebra<K>,
    gens: &[Op<K>],
    a: &Op<K>,
    track: bool,
) -> (Op<K>, Option<DivisionCertificate<K::Elem>>) {
    let k = alg.field();
    let mut work: Vec<(Monomial, K::Elem)> = a.terms().to_vec();
    let mut rem: Vec<(Monomial, K::Elem)> = Vec::new();
    let mut quot: Vec<Vec<(Monomial, K::Elem)>> = vec![Vec::new(); gens.len()];
    let mut pos = 0;
    while pos < work.len() {
        let (m, c) = &work[pos];
        match find_reducer(gens, m) {
            None => {
                rem.push(work[pos].clone());
                pos += 1;
            }
            Some(gi) => {
                let g = &gens[gi];
                let q = g.lm().unwrap().quotient_of(m);
                let coef = k.div(c, g.lc().unwrap());
                let prod = alg.mul_term_left(&k.one(), &q, g);
                debug_assert_eq!(prod.lm(), Some(m));
                let tail = sub_scaled_sorted(alg, &work[pos + 1..], &coef, &prod.terms()[1..]);
                if track {
                    quot[gi].push((q, coef));
                }
                // Terms before `pos` were already moved to `rem`.
                work = tail;
                pos = 0;
            }
        }
    }
    let remainder = alg.from_sorted_unchecked(rem);
    let cert = track.then(|| DivisionCertificate {
        quotients: quot.into_iter().map(|t| alg.from_terms(t)).collect(),
        dw_parts: vec![WeylOperator::zero(); alg.n()],
        remainder: remainder.clone(),
    });
    (remainder, cert)
}

/// Right reduction modulo `∂W^r`:
/// `x^α ∂^β e ↦ (−1)^{|β|} ∂^β(x^α) e`.
pub fn rrem<K: Field>(alg: &WeylAlgebra<K>, a: &Op<K>) -> Op<K> {
    let k = alg.field();
    let mut terms = Vec::new();
    for (m, c) in a.terms() {
        let (al, be) = (m.alpha(), m.beta());
        if al.iter().zip(be).any(|(x, y)| y > x) {
            continue;
        }
        let mut v = c.clone();
        let mut sign = false;
        let mut e: Vec<u16> = Vec::with_capacity(al.len());
        for (&x, &y) in al.iter().zip(be) {
            for j in 0..y {
                v = k.mul(&v, &k.from_u64((x - j) as u64));
            }
            sign ^= y % 2 == 1;
            e.push(x - y);
        }
        if sign {
            v = k.neg(&v);
        }
        let zeros = vec![0u16; al.len()];
        let dt = m.has_dt().then_some(m.dt());
        terms.push((Monomial::from_parts(&e, &zeros, dt, m.comp()), v));
    }
    alg.from_terms(terms)
}

/// `rrem` with a certificate, by iterating
/// `x^α∂^β = ∂_i(x^α∂^{β−ε_i}) − α_i x^{α−ε_i}∂^{β−ε_i}`.
pub fn rrem_certified<K: Field>(alg: &WeylAlgebra<K>, a: &Op<K>) -> DivisionCertificate<K::Elem> {
    let k = alg.field();
    let n = alg.n();
    let mut dw: Vec<Vec<(Monomial, K::Elem)>> = vec![Vec::new(); n];
    let mut rem = Vec::new();
    let mut stack: Vec<(Monomial, K::Elem)> = a.terms().to_vec();
    while let Some((m, c)) = stack.pop() {
        let Some(i) = m.beta().iter().position(|&b| b > 0) else {
            rem.push((m, c));
            continue;
        };
        let mut e = m.exps().to_vec();
        e[n + i] -= 1;
        let lowered = Monomial::from_exps(e.iter().copied().collect(), m.comp());
        dw[i].push((lowered.clone(), c.clone()));
        let ai = m.alpha()[i];
        if ai > 0 {
            e[i] -= 1;
            let next = Monomial::from_exps(e.into_iter().collect(), m.comp());
            stack.push((next, k.neg(&k.mul(&k.from_u64(ai as u64), &c))));
        }
    }
    DivisionCertificate {
        quotients: Vec::new(),
        dw_parts: dw.into_iter().map(|t| alg.from_terms(t)).collect(),
        remainder: alg.from_terms(rem),
    }
}

/// Shadow degree used by the normal selection strategy.
fn shadow_degree(m: &Monomial) -> u32 {
    m.exps().iter().map(|&e| e as u32).sum()
}

/// Reduced monic left Gröbner basis of the submodule generated by `gens`.
pub fn buchberger<K: Field>(alg: &WeylAlgebra<K>, gens: &[Op<K>]) -> GroebnerBasis<K> {
    let k = alg.field();
    let mut basis: Vec<Op<K>> = Vec::new();
    // (i, j, lcm, fifo sequence)
    let mut pairs: Vec<(usize, usize, Monomial, usize)> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut seq = 0usize;

    let mut insert = |basis: &mut Vec<Op<K>>,
                      pairs: &mut Vec<(usize, usize, Monomial, usize)>,
                      pending: &mut HashSet<(usize, usize)>,
                      g: Op<K>| {
        let g = alg.monic(&g);
        let lm = g.lm().unwrap().clone();
        let j = basis.len();
        for (i, h) in basis.iter().enumerate() {
            let hm = h.lm().unwrap();
            if hm.comp() == lm.comp() {
                pairs.push((i, j, hm.lcm(&lm), seq));
                pending.insert((i, j));
                seq += 1;
            }
        }
        basis.push(g);
    };

    for g in gens {
        let r = left_divide(alg, &basis, g, false).0;
        if !r.is_zero() {
            insert(&mut basis, &mut pairs, &mut pending, r);
        }
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by_key(|&p| (shadow_degree(&pairs[p].2), pairs[p].3))
            .unwrap();
        let (i, j, lcm, _) = pairs.swap_remove(best);
        pending.remove(&(i, j));
        // Chain criterion: some g_l divides the lcm and both pairs with it are done.
        let chain = (0..basis.len()).any(|l| {
            l != i
                && l != j
                && basis[l].lm().unwrap().divides(&lcm)
                && !pending.contains(&(i.min(l), i.max(l)))
                && !pending.contains(&(j.min(l), j.max(l)))
        });
        if chain {
            continue;
        }
        let (gi, gj) = (&basis[i], &basis[j]);
        let qi = gi.lm().unwrap().quotient_of(&lcm);
        let qj = gj.lm().unwrap().quotient_of(&lcm);
        let s = alg.sub(
            &alg.mul_term_left(&k.one(), &qi, gi),
            &alg.mul_term_left(&k.one(), &qj, gj),
        );
        let r = left_divide(alg, &basis, &s, false).0;
        if !r.is_zero() {
            insert(&mut basis, &mut pairs, &mut pending, r);
        }
    }

    GroebnerBasis {
        alg: alg.clone(),
        generators: inter_reduce(alg, basis),
        original: gens.to_vec(),
    }
}

/// Drops redundant elements, tail-reduces, and sorts ascending by lm.
pub fn inter_reduce<K: Field>(alg: &WeylAlgebra<K>, basis: Vec<Op<K>>) -> Vec<Op<K>> {
    let mut keep: Vec<Op<K>> = Vec::new();
    let mut seen: HashMap<Monomial, ()> = HashMap::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.lm().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.lm().unwrap();
            j != i && hm.divides(lm) && (hm != lm || j < i)
        });
        if !redundant && seen.insert(lm.clone(), ()).is_none() {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Op<K>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &keep[i];
        let (lm, lc, lt) = alg.leading_data(g).unwrap();
        let tail = alg.sub(g, &lt);
        let r = left_divide(alg, &others, &tail, false).0;
        out.push(alg.monic(&alg.add(&alg.term(lm, lc), &r)));
    }
    out.sort_by(|a, b| alg.cmp(a.lm().unwrap(), b.lm().unwrap()));
    out
}
