mod common;


use common::{airy_presentation, xyz};
use num_rational::BigRational;
use weyl_ct::arith::{qt, Field, PrimeField, RatFun, RatFunField, UniPoly, QT};
use weyl_ct::telescoping::{
    confine, derivative_sequence_step, relation_search, telescope_direct, telescope_modular, ConfineOptions,
    FaultPlan, ModularConfig,
};
use weyl_ct::kregular::ScalarProductInput;
use weyl_ct::telescoping::DerivedPresentation;
use weyl_ct::weyl::{Monomial, Op, WeylOperator};

fn mono(a: [u16; 3]) -> Monomial {
    Monomial::from_parts(&a, &[0, 0, 0], None, 0)
}

#[test]
fn airy_presentation_is_stable() {
    assert!(airy_presentation().is_stable().unwrap());
}

#[test]
fn airy_confinement_trace() {
    let pres = airy_presentation();
    let conf = confine(&pres, 1, &ConfineOptions::default()).unwrap();
    assert_eq!(conf.eta, mono([2, 0, 0]));
    assert_eq!(conf.support, vec![mono([0, 0, 0]), mono([0, 1, 0])]);
    assert_eq!(conf.trace, vec![1, 2]);
    assert!(conf.is_effective(&pres));

    let k = qt();
    let w = pres.algebra();
    let g1 = derivative_sequence_step(&k, &conf.initial, &conf).unwrap();
    assert_eq!(conf.to_operator(w, &g1), xyz(w, "-y/2"));
    // Matrix path against the direct path on the confinement.
    let g2 = derivative_sequence_step(&k, &g1, &conf).unwrap();
    let op1 = conf.to_operator(w, &g1);
    let direct = w.add(
        &w.coefficientwise_dt(&op1).unwrap(),
        &pres.context().reduce_eta(&pres.apply_l(&op1), &conf.eta_basis),
    );
    assert_eq!(conf.to_operator(w, &g2), direct);
    assert_eq!(conf.to_operator(w, &g2), xyz(w, "t/7"));
}

#[test]
fn airy_telescoper_direct() {
    let p = telescope_direct(&airy_presentation(), 1, &ConfineOptions::default()).unwrap();
    assert_eq!(p.to_text(), "7*dt^2 - t");
    assert_eq!((p.order(), p.degree()), (2, 1));
}

#[test]
fn integrand_in_the_module_gives_order_zero() {
    let pres = airy_presentation();
    let g = pres.generators()[2].clone();
    let p = telescope_direct(&pres.with_integrand(g), 1, &ConfineOptions::default()).unwrap();
    assert_eq!(p.order(), 0);
    assert_eq!(p.to_text(), "1");
}

#[test]
fn airy_telescoper_modular_matches_direct() {
    let pres = airy_presentation();
    let direct = telescope_direct(&pres, 1, &ConfineOptions::default()).unwrap();
    let mut runs = Vec::new();
    for workers in [1, 8] {
        let cfg = ModularConfig {
            seed: 7,
            workers,
            ..ModularConfig::default()
        };
        let out = telescope_modular(&pres, &cfg).unwrap();
        assert_eq!(out.telescoper, direct);
        runs.push(out.transcript);
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn faults_do_not_change_the_result() {
    let pres = airy_presentation();
    let clean = telescope_modular(&pres, &ModularConfig::default()).unwrap();
    let cfg = ModularConfig {
        faults: FaultPlan {
            corrupt_value: Some((0, 1)),
            corrupt_tracer: Some(0),
        },
        ..ModularConfig::default()
    };
    let out = telescope_modular(&pres, &cfg).unwrap();
    assert_eq!(out.telescoper, clean.telescoper);
    assert_eq!(out.outvoted, 1);
    assert_eq!(out.discarded_values, 1);
}

#[test]
fn relation_search_examples() {
    let k = PrimeField::new(101);
    let kt = RatFunField::new(k);
    let t = kt.parameter().unwrap();
    let c = |x: u64| kt.from_u64(x);
    // {v, 2v}: 2 g0 − g1 = 0, normalized with c_1 monic.
    let v = vec![c(1), t.clone()];
    let w = vec![c(2), kt.mul(&c(2), &t)];
    let rel = relation_search(k, &[v, w]).unwrap();
    assert_eq!(rel, vec![UniPoly::constant(&k, k.neg(&2)), UniPoly::one(&k)]);
    // {e1, e2}: independent.
    assert!(relation_search(k, &[vec![c(1), c(0)], vec![c(0), c(1)]]).is_none());
    // {(1, t), (t, t²), (0, 1)}: t g0 − g1 = 0.
    let rel = relation_search(
        k,
        &[
            vec![c(1), t.clone()],
            vec![t.clone(), kt.mul(&t, &t)],
            vec![c(0), c(1)],
        ],
    )
    .unwrap();
    assert_eq!(rel, vec![UniPoly::monomial(&k, k.neg(&1), 1), UniPoly::one(&k)]);
}

fn k_regular(k: usize) -> DerivedPresentation<QT> {
    ScalarProductInput::model(k).unwrap().presentation().unwrap()
}

#[test]
fn zero_integrand_confines_to_the_empty_set() {
    let pres = airy_presentation().with_integrand(WeylOperator::zero());
    let conf = confine(&pres, 1, &ConfineOptions::default()).unwrap();
    assert_eq!(conf.eta, pres.context().largest_of_degree(1));
    assert!(conf.support.is_empty());
    assert_eq!(conf.trace, vec![1]);
    let k = qt();
    assert!(derivative_sequence_step(&k, &[], &conf).unwrap().is_empty());
}

#[test]
fn zero_vector_steps_to_zero() {
    let pres = airy_presentation();
    let conf = confine(&pres, 1, &ConfineOptions::default()).unwrap();
    let k = qt();
    let z = vec![k.zero(); conf.support.len()];
    assert!(derivative_sequence_step(&k, &z, &conf).unwrap().iter().all(|c| k.is_zero(c)));
}

#[test]
fn two_regular_confinement() {
    // Every leading monomial of the basis is free of derivatives, so [.] lands
    // in the constants and B = {1}.
    let pres = k_regular(2);
    let conf = confine(&pres, 1, &ConfineOptions::default()).unwrap();
    assert_eq!(conf.support, vec![Monomial::from_parts(&[0, 0], &[0, 0], None, 0)]);
    assert_eq!(conf.eta, pres.context().largest_of_degree(1));
    assert_eq!(conf.trace, vec![1]);
    assert!(conf.is_effective(&pres));
}

#[test]
fn matrix_step_matches_direct_step() {
    let k = qt();
    let t = k.parameter().unwrap();
    let c = |n: i64| k.from_i64(n);
    for pres in [airy_presentation(), k_regular(2), k_regular(3)] {
        let conf = confine(&pres, 1, &ConfineOptions::default()).unwrap();
        let w = pres.algebra();
        let n = conf.support.len();
        // A few fixed vectors mixing polynomials and a proper fraction.
        let frac = k.div(&c(1), &k.add(&c(1), &t));
        let samples: Vec<Vec<_>> = vec![
            (0..n).map(|i| c(i as i64 + 1)).collect(),
            (0..n).map(|i| if i % 2 == 0 { t.clone() } else { frac.clone() }).collect(),
            (0..n).map(|i| k.mul(&c(3 - i as i64), &k.mul(&t, &t))).collect(),
        ];
        for g in samples {
            let op = conf.to_operator(w, &g);
            let direct = w.add(
                &w.coefficientwise_dt(&op).unwrap(),
                &pres.context().reduce_eta(&pres.apply_l(&op), &conf.eta_basis),
            );
            let via_matrix = derivative_sequence_step(&k, &g, &conf).unwrap();
            assert_eq!(conf.to_operator(w, &via_matrix), direct);
        }
    }
}

#[test]
fn larger_rho_never_lowers_the_order() {
    for pres in [airy_presentation(), k_regular(2), k_regular(3)] {
        let mut last = 0;
        for rho in 1..=3 {
            let p = telescope_direct(&pres, rho, &ConfineOptions::default()).unwrap();
            assert!(p.order() >= last, "rho {rho}: order {} after {last}", p.order());
            last = p.order();
        }
    }
}

/// `Σ c_i a_i` with `a_0 = f` and `a_{i+1} = ∂a_i/∂t + L(a_i)`, no reduction.
fn unreduced_image(pres: &DerivedPresentation<QT>, coeffs: &[RatFun<BigRational>]) -> Op<QT> {
    let w = pres.algebra();
    let mut a = pres.integrand().clone();
    let mut out = WeylOperator::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            a = w.add(&w.coefficientwise_dt(&a).unwrap(), &pres.apply_l(&a));
        }
        out = w.add(&out, &w.scale(c, &a));
    }
    out
}

#[test]
fn telescoper_image_lies_in_the_module() {
    let k = qt();
    for pres in [airy_presentation(), k_regular(2), k_regular(3)] {
        let w = pres.algebra();
        let p = telescope_direct(&pres, 1, &ConfineOptions::default()).unwrap();
        let coeffs: Vec<_> = p.coefficient_polys().into_iter().map(|c| k.from_poly(c)).collect();
        let image = unreduced_image(&pres, &coeffs);
        let ctx = pres.context();
        let start = confine(&pres, 1, &ConfineOptions::default()).unwrap().eta.degree();
        let found = (start..start + 6).any(|d| {
            let eb = ctx.compute_eta_basis(&ctx.largest_of_degree(d), None, true).unwrap();
            let cert = ctx.reduce_eta_certified(&image, &eb).unwrap();
            cert.remainder.is_zero() && cert.verify(w, ctx.basis().generators(), &image)
        });
        assert!(found, "no certificate for {p}");
    }
}
