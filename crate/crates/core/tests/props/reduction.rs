use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use weyl_ct::arith::{CommPoly, Field, Rationals, QT};
use weyl_ct::groebner::{buchberger, rrem, rrem_certified};
use weyl_ct::reduction::{gd_irreducibility_oracle, EtaBasis, GdOracle, ReductionContext};
use weyl_ct::telescoping::{confine, ConfineOptions, DerivedPresentation};
use weyl_ct::weyl::{Monomial, MonomialOrder, Op, WeylAlgebra, WeylOperator};

use super::{check, Outcome};
use crate::common::*;

/// How far past the input degree the escalation check looks.
pub const D_MAX: u32 = 6;

fn airy() -> &'static DerivedPresentation<QT> {
    static P: OnceLock<DerivedPresentation<QT>> = OnceLock::new();
    P.get_or_init(airy_presentation)
}

fn ctx() -> &'static ReductionContext<QT> {
    airy().context()
}

fn eta_basis(d: u32) -> EtaBasis<QT> {
    static CACHE: OnceLock<Mutex<HashMap<u32, EtaBasis<QT>>>> = OnceLock::new();
    let mut m = CACHE.get_or_init(Default::default).lock().unwrap();
    m.entry(d)
        .or_insert_with(|| ctx().compute_eta_basis(&ctx().largest_of_degree(d), None, true).unwrap())
        .clone()
}

/// `S = ⟨∂_i − 3x_i²⟩` for `f = x₁³ + x₂³`, with the Jacobian oracle up to degree 8.
fn gd() -> &'static (ReductionContext<Rationals>, GdOracle) {
    static G: OnceLock<(ReductionContext<Rationals>, GdOracle)> = OnceLock::new();
    G.get_or_init(|| {
        let w = WeylAlgebra::new(Rationals, 2, 1, MonomialOrder::block()).unwrap();
        let three = w.field().from_i64(3);
        let gens: Vec<Op<Rationals>> = (0..2)
            .map(|i| w.sub(&w.d(i), &w.scale(&three, &w.mul(&w.x(i), &w.x(i)))))
            .collect();
        let ctx = ReductionContext::new(buchberger(&w, &gens)).unwrap();
        let f = CommPoly::var(2, 0).pow(3).add(&CommPoly::var(2, 1).pow(3));
        (ctx, gd_irreducibility_oracle(&f, 8).unwrap())
    })
}

fn op(a: &RawTerms, s: i64) -> Op<QT> {
    qt_op(&airy_algebra(), a, s)
}

/// `Σ q_i g_i` over the reduced basis.
fn member(cofactors: &[RawTerms]) -> Op<QT> {
    let w = airy_algebra();
    let mut acc: Op<QT> = WeylOperator::zero();
    for (q, g) in cofactors.iter().zip(ctx().basis().generators()) {
        acc = w.add(&acc, &w.mul(&op(q, 1), g));
    }
    acc
}

fn cofactors(deg: u16, count: usize) -> impl Strategy<Value = Vec<RawTerms>> {
    prop::collection::vec(raw_terms(6, deg, 2), count)
}

pub fn ideal_members_reduce_to_zero() -> Outcome {
    check(100, cofactors(3, 5), |q| {
        let a = member(&q);
        prop_assert!(ctx().basis().lrem(&a).is_zero());
        prop_assert!(ctx().basis().ideal_membership(&a));
        Ok(())
    })
}

pub fn normal_form_ignores_ideal_members() -> Outcome {
    check(100, (raw_terms(6, 3, 4), cofactors(2, 5)), |(a, q)| {
        let w = airy_algebra();
        let gb = ctx().basis();
        let a = op(&a, 2);
        prop_assert_eq!(gb.lrem(&w.add(&a, &member(&q))), gb.lrem(&a));
        Ok(())
    })
}

/// `rrem` is ∂-free, idempotent and linear.
pub fn right_remainder_laws() -> Outcome {
    check(100, (raw_terms(6, 4, 4), raw_terms(6, 4, 4), qt_elem()), |(a, b, l)| {
        let w = airy_algebra();
        let (a, b) = (op(&a, 1), op(&b, -1));
        let r = rrem(&w, &a);
        prop_assert!(r.support().all(|m| m.is_d_free()));
        prop_assert_eq!(rrem(&w, &r), r.clone());
        let lhs = rrem(&w, &w.add(&w.scale(&l, &a), &b));
        prop_assert_eq!(lhs, w.add(&w.scale(&l, &r), &rrem(&w, &b)));
        Ok(())
    })
}

pub fn certificates_re_expand() -> Outcome {
    check(100, (raw_terms(6, 4, 5), -2i64..=2), |(a, s)| {
        let w = airy_algebra();
        let gens = ctx().basis().generators();
        let a = op(&a, s);
        prop_assert!(ctx().basis().lrem_certified(&a).verify(&w, gens, &a));
        prop_assert!(rrem_certified(&w, &a).verify(&w, &[], &a));
        let c = ctx().reduced_form_certified(&a);
        prop_assert!(c.verify(&w, gens, &a));
        prop_assert!(ctx().is_irreducible(&c.remainder));
        let eb = eta_basis(2);
        let c = ctx().reduce_eta_certified(&a, &eb).unwrap();
        prop_assert!(c.verify(&w, gens, &a));
        prop_assert_eq!(c.remainder, ctx().reduce_eta(&a, &eb));
        Ok(())
    })
}

pub fn reductions_are_linear() -> Outcome {
    check(100, (raw_terms(6, 4, 4), raw_terms(6, 4, 4), qt_elem()), |(a, b, l)| {
        let w = airy_algebra();
        let (a, b) = (op(&a, 1), op(&b, 0));
        let comb = w.add(&w.scale(&l, &a), &b);
        let c = ctx();
        prop_assert_eq!(
            c.reduced_form(&comb),
            w.add(&w.scale(&l, &c.reduced_form(&a)), &c.reduced_form(&b))
        );
        let eb = eta_basis(2);
        prop_assert_eq!(
            c.reduce_eta(&comb, &eb),
            w.add(&w.scale(&l, &c.reduce_eta(&a, &eb)), &c.reduce_eta(&b, &eb))
        );
        Ok(())
    })
}

pub fn confinements_are_effective() -> Outcome {
    check(100, (raw_terms(6, 2, 3), -1i64..=1, 1u32..=2), |(f, s, rho)| {
        let w = airy_algebra();
        let f = op(&f, s);
        prop_assume!(!f.is_zero());
        let pres = airy().with_integrand(f);
        let conf = confine(&pres, rho, &ConfineOptions::default()).unwrap();
        prop_assert!(conf.is_effective(&pres));
        prop_assert_eq!(conf.rho, rho);
        let fe = ctx().reduce_eta(pres.integrand(), &conf.eta_basis);
        prop_assert!(conf.coordinates(&w, &fe).is_ok());
        Ok(())
    })
}

/// Elements of `S + ∂W` vanish under `[.]_η` once `η` is large enough. The
/// required degree is not effective, so misses are reported, not failed.
pub fn escalation_vanishing() -> Outcome {
    let w = airy_algebra();
    let strategy = (cofactors(2, 3), prop::collection::vec(raw_terms(6, 2, 2), 3));
    let mut runner = TestRunner::new(config(100));
    let (mut hits, mut flagged) = (0, 0);
    for _ in 0..100 {
        let (q, dw) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let mut a = member(&q);
        for (j, part) in dw.iter().enumerate() {
            a = w.add(&a, &w.mul(&w.d(j), &op(part, 1)));
        }
        let start = a.degree();
        match (start..=start + D_MAX).find(|&d| ctx().reduce_eta(&a, &eta_basis(d)).is_zero()) {
            Some(_) => hits += 1,
            None => flagged += 1,
        }
    }
    if hits == 0 {
        return Err("no input vanished".into());
    }
    Ok(format!("100 cases, {hits} vanished, {flagged} flagged at D_MAX = {D_MAX}"))
}

/// A monomial is irreducible iff it is ∂-free and standard for the Jacobian ideal.
pub fn griffiths_dwork() -> Outcome {
    let s = (prop::collection::vec(0u16..=8, 2), prop::collection::vec(0u16..=2, 2));
    check(200, s, |(a, b)| {
        prop_assume!(a.iter().chain(&b).sum::<u16>() <= 8);
        let (ctx, oracle) = gd();
        let m = Monomial::from_parts(&a, &b, None, 0);
        let e: Vec<u32> = a.iter().map(|&v| v as u32).collect();
        let expect = b.iter().all(|&v| v == 0) && oracle.is_standard(&e);
        prop_assert_eq!(ctx.is_irreducible_monomial(&m), expect);
        Ok(())
    })
}
