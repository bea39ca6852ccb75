use weyl_ct::arith::{qt, CommPoly, QT};
use weyl_ct::format::parse_operator;
use weyl_ct::groebner::buchberger;
use weyl_ct::reduction::{gd_irreducibility_oracle, ReductionContext};
use weyl_ct::weyl::{compositions, Monomial, MonomialOrder, Op, WeylAlgebra, WeylOperator};
use weyl_ct::Error;

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn airy() -> (WeylAlgebra<QT>, ReductionContext<QT>) {
    let w = WeylAlgebra::new(qt(), 3, 1, MonomialOrder::block()).unwrap();
    let gens: Vec<Op<QT>> = ["dx - (x^2 - t - 2*z)", "dy - (y^2 - t - z)", "dz - (-2*x - y)"]
        .iter()
        .map(|s| parse_operator(&w, &names(&["x", "y", "z"]), s).unwrap())
        .collect();
    let ctx = ReductionContext::new(buchberger(&w, &gens)).unwrap();
    (w, ctx)
}

fn x2() -> Monomial {
    Monomial::from_parts(&[2, 0, 0], &[0, 0, 0], None, 0)
}

#[test]
fn airy_reduced_form() {
    let (w, ctx) = airy();
    let p = |s: &str| parse_operator(&w, &names(&["x", "y", "z"]), s).unwrap();
    assert_eq!(ctx.reduced_form(&p("y^2")), p("z + t"));
    assert_eq!(ctx.reduced_form(&p("dx*y")), WeylOperator::zero());
    let c = ctx.reduced_form_certified(&p("y^2*z + x*dy"));
    assert!(c.verify(&w, ctx.basis().generators(), &p("y^2*z + x*dy")));
    assert!(ctx.is_irreducible(&c.remainder));
}

#[test]
fn airy_eta_space_and_strong_reduction() {
    let (w, ctx) = airy();
    let p = |s: &str| parse_operator(&w, &names(&["x", "y", "z"]), s).unwrap();
    let eb = ctx.compute_eta_basis(&x2(), None, true).unwrap();
    assert_eq!(eb.rows.len(), 1);
    assert_eq!(eb.rows[0].op, w.monic(&p("7*z + 3*t")));
    for r in &eb.rows {
        // Each row lies in S + ∂W.
        assert!(r.cert.as_ref().unwrap().verify(&w, ctx.basis().generators(), &r.op));
        assert!(ctx.reduce_eta(&r.op, &eb).is_zero());
    }
    assert_eq!(ctx.reduce_eta(&p("y^2"), &eb), p("4/7*t"));
    let c = ctx.reduce_eta_certified(&p("y^2"), &eb).unwrap();
    assert!(c.verify(&w, ctx.basis().generators(), &p("y^2")));
    assert_eq!(c.remainder, p("4/7*t"));
}

#[test]
fn tracer_replay_is_stable() {
    let (_, ctx) = airy();
    let eb = ctx.compute_eta_basis(&x2(), None, false).unwrap();
    let again = ctx.compute_eta_basis(&x2(), Some(&eb.tracer), false).unwrap();
    assert_eq!(again.operators(), eb.operators());
    assert_eq!(again.tracer, eb.tracer);
}

#[test]
fn lex_order_with_two_variables_is_refused() {
    let w = WeylAlgebra::new(qt(), 2, 1, MonomialOrder::lex(vec![0, 1, 2, 3])).unwrap();
    let gens = vec![w.d(0), w.d(1)];
    let gb = buchberger(&w, &gens);
    assert!(matches!(ReductionContext::new(gb), Err(Error::OrderNotFinite)));
}

#[test]
fn griffiths_dwork_irreducibles_match_jacobian_standard_monomials() {
    let q = weyl_ct::arith::Rationals;
    let n = names(&["x1", "x2"]);
    let w = WeylAlgebra::new(q, 2, 1, MonomialOrder::block()).unwrap();
    let p = |s: &str| parse_operator(&w, &n, s).unwrap();
    let gb = buchberger(&w, &[p("dx1 - 3*x1^2"), p("dx2 - 3*x2^2")]);
    let ctx = ReductionContext::new(gb).unwrap();
    let f = CommPoly::var(2, 0).pow(3).add(&CommPoly::var(2, 1).pow(3));
    let oracle = gd_irreducibility_oracle(&f, 6).unwrap();
    for d in 0..=6 {
        for a in compositions(2, d) {
            let m = Monomial::from_parts(&a, &[0, 0], None, 0);
            let e: Vec<u32> = a.iter().map(|&v| v as u32).collect();
            assert_eq!(ctx.is_irreducible_monomial(&m), oracle.is_standard(&e), "{a:?}");
        }
    }
}

#[test]
fn single_variable_lex_eta_space_is_all_lower_powers() {
    let w = WeylAlgebra::new(qt(), 1, 1, MonomialOrder::lex(vec![0, 1])).unwrap();
    let ctx = ReductionContext::new(buchberger(&w, &[w.d(0)])).unwrap();
    for d in 1..6u16 {
        let eta = Monomial::from_parts(&[d], &[0], None, 0);
        let eb = ctx.compute_eta_basis(&eta, None, true).unwrap();
        // Brute force: x^γ∂ reduces to −γ x^{γ−1}, so the span is {x^i : i ≤ d − 2}.
        let lms: Vec<u16> = eb.rows.iter().map(|r| r.op.lm().unwrap().alpha()[0]).collect();
        let expect: Vec<u16> = (0..d.saturating_sub(1)).collect();
        assert_eq!(lms, expect, "d = {d}");
        for r in &eb.rows {
            assert_eq!(r.op.len(), 1);
            assert!(r.cert.as_ref().unwrap().verify(&w, ctx.basis().generators(), &r.op));
        }
    }
}
