//! Confinement, integration by reduction and the modular driver.

mod modular;
mod relation;
mod telescoper;

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::arith::{Field, RatFun, RatFunField, UniPoly, QT};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::reduction::{EtaBasis, ReductionContext, Tracer};
use crate::weyl::{Monomial, Op, WeylAlgebra, WeylOperator};

pub use modular::{telescope_modular, FaultPlan, ModularConfig, ModularOutcome};
pub use relation::{normalize_relation, relation_search, RelationSearch};
pub use telescoper::Telescoper;

/// Default ceiling on the degree `s` of `η` in [`confine`].
pub const DEFAULT_DEGREE_CEILING: u32 = 40;

/// `M = W_x(t)^r / S` with the derivation `∂_t·pr(a) = pr(∂a/∂t + a·Λ)` and
/// an integrand `f`.
#[derive(Debug)]
pub struct DerivedPresentation<K: Field> {
    alg: WeylAlgebra<K>,
    generators: Vec<Op<K>>,
    lambda: Vec<Vec<Op<K>>>,
    f: Op<K>,
    ctx: OnceLock<ReductionContext<K>>,
}

impl<K: Field> Clone for DerivedPresentation<K> {
    fn clone(&self) -> Self {
        let ctx = OnceLock::new();
        if let Some(c) = self.ctx.get() {
            let _ = ctx.set(c.clone());
        }
        DerivedPresentation {
            alg: self.alg.clone(),
            generators: self.generators.clone(),
            lambda: self.lambda.clone(),
            f: self.f.clone(),
            ctx,
        }
    }
}

impl<K: Field> DerivedPresentation<K> {
    /// `lambda` is `r × r` with scalar entries; the Gröbner basis of the
    /// generators is computed on first use.
    pub fn new(alg: WeylAlgebra<K>, generators: Vec<Op<K>>, lambda: Vec<Vec<Op<K>>>, f: Op<K>) -> Result<Self> {
        if alg.has_dt() {
            return Err(Error::Invalid("the presentation lives in W_x(t), without dt".into()));
        }
        if !alg.order().satisfies_finiteness(alg.n()) {
            return Err(Error::OrderNotFinite);
        }
        let r = alg.rank();
        if lambda.len() != r || lambda.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid(format!("the derivation matrix must be {r}×{r}")));
        }
        if lambda.iter().flatten().any(|e| e.support().any(|m| m.comp() > 0)) {
            return Err(Error::Invalid("matrix entries must be scalar operators".into()));
        }
        Ok(DerivedPresentation {
            alg,
            generators,
            lambda,
            f,
            ctx: OnceLock::new(),
        })
    }

    /// Uses an already computed basis of `S`.
    pub fn with_context(ctx: ReductionContext<K>, lambda: Vec<Vec<Op<K>>>, f: Op<K>) -> Result<Self> {
        let p = Self::new(ctx.algebra().clone(), ctx.basis().generators().to_vec(), lambda, f)?;
        let _ = p.ctx.set(ctx);
        Ok(p)
    }

    pub fn algebra(&self) -> &WeylAlgebra<K> {
        &self.alg
    }

    pub fn generators(&self) -> &[Op<K>] {
        &self.generators
    }

    pub fn lambda(&self) -> &[Vec<Op<K>>] {
        &self.lambda
    }

    pub fn integrand(&self) -> &Op<K> {
        &self.f
    }

    pub fn with_integrand(&self, f: Op<K>) -> Self {
        let mut p = self.clone();
        p.f = f;
        p
    }

    pub fn context(&self) -> &ReductionContext<K> {
        self.ctx.get_or_init(|| {
            let gb = buchberger(&self.alg, &self.generators);
            ReductionContext::new(gb).expect("order checked at construction")
        })
    }

    pub fn basis(&self) -> &GroebnerBasis<K> {
        self.context().basis()
    }

    /// `L(a) = a·Λ` in the row-vector convention.
    pub fn apply_l(&self, a: &Op<K>) -> Op<K> {
        let alg = &self.alg;
        let mut out = WeylOperator::zero();
        for (i, ai) in alg.components(a).iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, lam) in self.lambda[i].iter().enumerate() {
                if lam.is_zero() {
                    continue;
                }
                let prod = alg.mul(ai, lam);
                out = alg.add(&out, &if alg.rank() == 1 { prod } else { alg.embed(&prod, j) });
            }
        }
        out
    }

    /// Whether `S` is stable under `a ↦ ∂a/∂t + L(a)`, checked on the basis.
    pub fn is_stable(&self) -> Result<bool> {
        let gb = self.basis();
        for g in gb.generators() {
            let d = self.alg.coefficientwise_dt(g)?;
            if !gb.lrem(&self.alg.add(&d, &self.apply_l(g))).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(η, B)` with `supp([f]_η) ⊆ B` and `supp([L(m)]_η) ⊆ B` for `m ∈ B`,
/// plus the coordinates of those reduced forms.
#[derive(Clone, Debug)]
pub struct Confinement<K: Field> {
    pub eta: Monomial,
    /// `B`, ascending.
    pub support: Vec<Monomial>,
    /// `images[i][j]`: coefficient of `B[j]` in `[L(B[i])]_η`.
    pub images: Vec<Vec<K::Elem>>,
    /// Coordinates of `[f]_η` on `B`.
    pub initial: Vec<K::Elem>,
    pub rho: u32,
    /// The degrees `s` tried, in order.
    pub trace: Vec<u32>,
    pub eta_basis: EtaBasis<K>,
}

impl<K: Field> Confinement<K> {
    pub fn to_operator(&self, alg: &WeylAlgebra<K>, coords: &[K::Elem]) -> Op<K> {
        alg.from_terms(self.support.iter().cloned().zip(coords.iter().cloned()))
    }

    /// Coordinates of an element supported on `B`.
    pub fn coordinates(&self, alg: &WeylAlgebra<K>, a: &Op<K>) -> Result<Vec<K::Elem>> {
        if let Some(m) = a.support().find(|m| !self.support.contains(m)) {
            return Err(Error::Mismatch(format!("monomial {m:?} escapes the confinement")));
        }
        Ok(self.support.iter().map(|m| alg.coeff(a, m)).collect())
    }

    /// Checks the defining property against fresh reductions.
    pub fn is_effective(&self, pres: &DerivedPresentation<K>) -> bool {
        let ctx = pres.context();
        let inside = |a: &Op<K>| a.support().all(|m| self.support.contains(m));
        inside(&ctx.reduce_eta(pres.integrand(), &self.eta_basis))
            && self
                .support
                .iter()
                .all(|m| inside(&ctx.reduce_eta(&pres.apply_l(&pres.alg.monomial(m.clone())), &self.eta_basis)))
    }
}

#[derive(Clone, Debug)]
pub struct ConfineOptions {
    pub degree_ceiling: u32,
}

impl Default for ConfineOptions {
    fn default() -> Self {
        ConfineOptions {
            degree_ceiling: DEFAULT_DEGREE_CEILING,
        }
    }
}

fn smallest<'a, K: Field>(alg: &WeylAlgebra<K>, it: impl Iterator<Item = &'a Monomial>) -> Option<&'a Monomial> {
    it.min_by(|a, b| alg.cmp(a, b))
}

/// Searches an effective confinement, restarting with a larger `η` whenever a
/// monomial of degree above `s − ρ` shows up. Picks the smallest pending
/// monomial first.
pub fn confine<K: Field>(pres: &DerivedPresentation<K>, rho: u32, opts: &ConfineOptions) -> Result<Confinement<K>> {
    let alg = &pres.alg;
    let ctx = pres.context();
    // [L(m)] does not depend on η; keep it across restarts.
    let mut memo: HashMap<Monomial, Op<K>> = HashMap::new();
    let f_red = ctx.reduced_form(&pres.f);
    let mut trace = Vec::new();
    let mut s = rho;
    'restart: loop {
        if s > opts.degree_ceiling {
            return Err(Error::DegreeCeiling(opts.degree_ceiling as usize));
        }
        trace.push(s);
        let eta = ctx.largest_of_degree(s);
        let eb = ctx.compute_eta_basis(&eta, None, false)?;
        let mut queue: HashSet<Monomial> = eb.reduce(alg, &f_red).support().cloned().collect();
        let mut done: HashSet<Monomial> = HashSet::new();
        while let Some(m) = smallest(alg, queue.iter().filter(|m| !done.contains(*m))).cloned() {
            if m.degree() + rho > s {
                s += 1;
                continue 'restart;
            }
            let red = memo
                .entry(m.clone())
                .or_insert_with(|| ctx.reduced_form(&pres.apply_l(&alg.monomial(m.clone()))));
            queue.extend(eb.reduce(alg, red).support().cloned());
            done.insert(m);
        }
        let mut support: Vec<Monomial> = done.into_iter().collect();
        support.sort_by(|a, b| alg.cmp(a, b));
        return build_confinement(pres, eb, support, rho, trace, |m| memo.get(m).cloned());
    }
}

/// Recomputes the coordinates of a known `(η, B)`, replaying a tracer.
/// Fails with `Mismatch` if some support leaves `B`.
pub fn confinement_at<K: Field>(
    pres: &DerivedPresentation<K>,
    eta: &Monomial,
    support: &[Monomial],
    rho: u32,
    tracer: Option<&Tracer>,
) -> Result<Confinement<K>> {
    let eb = pres.context().compute_eta_basis(eta, tracer, false)?;
    build_confinement(pres, eb, support.to_vec(), rho, vec![eta.degree()], |_| None)
}

fn build_confinement<K: Field>(
    pres: &DerivedPresentation<K>,
    eb: EtaBasis<K>,
    support: Vec<Monomial>,
    rho: u32,
    trace: Vec<u32>,
    cached: impl Fn(&Monomial) -> Option<Op<K>>,
) -> Result<Confinement<K>> {
    let alg = &pres.alg;
    let ctx = pres.context();
    let mut conf = Confinement {
        eta: eb.eta.clone(),
        support,
        images: Vec::new(),
        initial: Vec::new(),
        rho,
        trace,
        eta_basis: eb,
    };
    conf.initial = conf.coordinates(alg, &ctx.reduce_eta(&pres.f, &conf.eta_basis))?;
    for m in conf.support.clone() {
        let red = match cached(&m) {
            Some(r) => r,
            None => ctx.reduced_form(&pres.apply_l(&alg.monomial(m.clone()))),
        };
        let img = conf.eta_basis.reduce(alg, &red);
        conf.images.push(conf.coordinates(alg, &img)?);
    }
    Ok(conf)
}

/// `g ↦ ∂g/∂t + [L(g)]_η` in coordinates on `B`.
pub fn derivative_sequence_step<K: Field>(k: &K, g: &[K::Elem], conf: &Confinement<K>) -> Result<Vec<K::Elem>> {
    step(k, g, &conf.images)
}

fn step<K: Field>(k: &K, g: &[K::Elem], images: &[Vec<K::Elem>]) -> Result<Vec<K::Elem>> {
    let n = images.len();
    if g.len() != n {
        return Err(Error::Invalid(format!("expected {n} coordinates, got {}", g.len())));
    }
    let mut out: Vec<K::Elem> = g.iter().map(|c| k.derivative(c)).collect();
    for (gi, row) in g.iter().zip(images) {
        if k.is_zero(gi) {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !k.is_zero(r) {
                *o = k.add(o, &k.mul(gi, r));
            }
        }
    }
    Ok(out)
}

/// The reductions `g_0, g_1, …` until the first dependency; returns the
/// normalized polynomial relation `(c_0, …, c_N)`.
pub fn relation_from_confinement<F: Field>(
    kt: &RatFunField<F>,
    conf: &Confinement<RatFunField<F>>,
) -> Result<Vec<UniPoly<F::Elem>>> {
    relation_from_matrix(kt, &conf.initial, &conf.images)
}

/// Same, from the coordinates of `g_0` and the matrix of `[L(·)]_η` on `B`.
pub fn relation_from_matrix<F: Field>(
    kt: &RatFunField<F>,
    initial: &[RatFun<F::Elem>],
    images: &[Vec<RatFun<F::Elem>>],
) -> Result<Vec<UniPoly<F::Elem>>> {
    let mut search = RelationSearch::new(kt.base().clone());
    let mut g = initial.to_vec();
    for _ in 0..=images.len() {
        if let Some(rel) = search.push(&g) {
            return Ok(rel);
        }
        g = step(kt, &g, images)?;
    }
    Err(Error::Inconsistent("no relation within dim span(B) + 1 steps".into()))
}

/// Telescoper relation over `F(t)`: confinement, then the derivative sequence until a dependency.
pub fn telescope_relation<F: Field>(
    pres: &DerivedPresentation<RatFunField<F>>,
    rho: u32,
    opts: &ConfineOptions,
) -> Result<(Confinement<RatFunField<F>>, Vec<UniPoly<F::Elem>>)> {
    let conf = confine(pres, rho, opts)?;
    let rel = relation_from_confinement(pres.alg.field(), &conf)?;
    Ok((conf, rel))
}

/// Telescoper over `ℚ(t)` by direct computation.
pub fn telescope_direct(pres: &DerivedPresentation<QT>, rho: u32, opts: &ConfineOptions) -> Result<Telescoper> {
    let (_, rel) = telescope_relation(pres, rho, opts)?;
    Telescoper::from_rational(&rel)
}

/// Converts a telescoper into an operator of an algebra containing `∂_t`.
pub fn telescoper_operator<K: Field>(alg: &WeylAlgebra<K>, p: &Telescoper) -> Result<Op<K>> {
    let k = alg.field();
    let t = k.parameter().ok_or(Error::NoParameter)?;
    let dt = alg.dt()?;
    let mut out = WeylOperator::zero();
    let mut dpow = alg.one();
    for c in p.coefficient_polys() {
        let mut val = k.zero();
        for coef in c.coeffs().iter().rev() {
            val = k.add(&k.mul(&val, &t), &k.from_rational(coef).ok_or(Error::Unlucky)?);
        }
        out = alg.add(&out, &alg.scale(&val, &dpow));
        dpow = alg.mul(&dt, &dpow);
    }
    Ok(out)
}
