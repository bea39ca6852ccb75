//! From a presentation `W_{t,x}^s / J` to `W_x(t)^r / S` with its derivation
//! matrix.
//!
//! The basis element `∂_t^h e_i` of `W_x(t) B_ℓ` is sent to `e_{h·s+i}`.

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::telescoping::DerivedPresentation;
use crate::weyl::{ComponentRule, Monomial, Op, WeylAlgebra};

/// Default ceiling for [`compute_ell`].
pub const DEFAULT_ELL_CEILING: usize = 20;

/// `H = W_{t,x}^s / J` with coefficients in `K(t)`.
#[derive(Clone, Debug)]
pub struct ParametricPresentation<K: Field> {
    alg: WeylAlgebra<K>,
    generators: Vec<Op<K>>,
}

impl<K: Field> ParametricPresentation<K> {
    /// `alg` must carry `∂_t`. Its order compares `∂_t`-exponents before
    /// anything else as long as components are compared after terms.
    pub fn new(alg: WeylAlgebra<K>, generators: Vec<Op<K>>) -> Result<Self> {
        if !alg.has_dt() {
            return Err(Error::Invalid("the presentation needs dt".into()));
        }
        if !alg.field().has_parameter() {
            return Err(Error::NoParameter);
        }
        if alg.rank() > 1 && alg.order().components == ComponentRule::PositionOverTerm {
            return Err(Error::Invalid("position-over-term does not eliminate dt".into()));
        }
        Ok(ParametricPresentation { alg, generators })
    }

    pub fn algebra(&self) -> &WeylAlgebra<K> {
        &self.alg
    }

    pub fn generators(&self) -> &[Op<K>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }
}

/// Output of [`build_extension`].
#[derive(Clone, Debug)]
pub struct ExtensionResult<K: Field> {
    pub ell: usize,
    pub s: usize,
    pub r: usize,
    /// Basis of `J(t)` for the `∂_t`-eliminating order.
    pub basis: GroebnerBasis<K>,
    /// `W_x(t)^r`, without `∂_t`.
    pub target: WeylAlgebra<K>,
    pub s_generators: Vec<Op<K>>,
    /// Row `i` is `L(e_i)` split into components.
    pub lambda: Vec<Vec<Op<K>>>,
}

impl<K: Field> ExtensionResult<K> {
    pub fn presentation(&self, f: Op<K>) -> Result<DerivedPresentation<K>> {
        DerivedPresentation::new(
            self.target.clone(),
            self.s_generators.clone(),
            self.lambda.clone(),
            f,
        )
    }

    /// Image of an element of `W_x(t) B_ℓ` in `W_x(t)^r`.
    pub fn flatten(&self, a: &Op<K>) -> Result<Op<K>> {
        flatten(&self.target, self.s, self.ell, a)
    }
}

/// The `∂_t`-degree of `a`.
pub fn index<E>(a: &crate::weyl::WeylOperator<E>) -> usize {
    a.dt_degree() as usize
}

/// `ind(LRem(a, G))`.
pub fn index_mod<K: Field>(a: &Op<K>, g: &GroebnerBasis<K>) -> usize {
    index(&g.lrem(a))
}

/// Smallest `ℓ` with `ind_J(∂_t^{ℓ+1} e_i) ≤ ℓ` for every `i`.
pub fn compute_ell<K: Field>(g: &GroebnerBasis<K>, ceiling: usize) -> Result<usize> {
    let alg = g.algebra();
    let dt = alg.dt()?;
    let mut power = dt.clone();
    for ell in 0..=ceiling {
        let ok = (0..alg.rank()).all(|i| index_mod(&alg.mul(&power, &alg.unit(i)), g) <= ell);
        if ok {
            return Ok(ell);
        }
        power = alg.mul(&dt, &power);
    }
    Err(Error::BudgetExhausted(format!(
        "no stabilization index up to {ceiling}; the input may not be holonomic"
    )))
}

fn flatten<K: Field>(target: &WeylAlgebra<K>, s: usize, ell: usize, a: &Op<K>) -> Result<Op<K>> {
    let mut terms = Vec::with_capacity(a.len());
    for (m, c) in a.terms() {
        let h = m.dt() as usize;
        if h > ell {
            return Err(Error::Inconsistent(format!("index {h} exceeds {ell}")));
        }
        terms.push((Monomial::from_parts(m.alpha(), m.beta(), None, h * s + m.comp()), c.clone()));
    }
    Ok(target.from_terms(terms))
}

pub fn build_extension<K: Field>(p: &ParametricPresentation<K>, ceiling: usize) -> Result<ExtensionResult<K>> {
    let alg = &p.alg;
    let basis = buchberger(alg, &p.generators);
    let ell = compute_ell(&basis, ceiling)?;
    let s = alg.rank();
    let r = (ell + 1) * s;
    let target = WeylAlgebra::new(alg.field().clone(), alg.n(), r, alg.order().clone())?;
    let dt = alg.dt()?;

    let mut s_generators = Vec::new();
    for g in basis.generators() {
        let mut m = g.clone();
        for _ in index(g)..=ell {
            s_generators.push(flatten(&target, s, ell, &m)?);
            m = alg.mul(&dt, &m);
        }
    }

    let mut lambda = Vec::with_capacity(r);
    for h in 0..=ell {
        for i in 0..s {
            let e = alg.mul(&alg.pow(&dt, h as u32 + 1), &alg.unit(i));
            let row = flatten(&target, s, ell, &basis.lrem(&e))?;
            lambda.push(target.components(&row));
        }
    }
    Ok(ExtensionResult {
        ell,
        s,
        r,
        basis,
        target,
        s_generators,
        lambda,
    })
}
