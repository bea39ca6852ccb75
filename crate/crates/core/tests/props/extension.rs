use std::sync::OnceLock;

use proptest::prelude::*;
use weyl_ct::arith::{qt, QT};
use weyl_ct::extension::{index, index_mod};
use weyl_ct::format::parse_operator;
use weyl_ct::groebner::{buchberger, GroebnerBasis};
use weyl_ct::weyl::{MonomialOrder, WeylAlgebra};

use super::{check, Outcome};
use crate::common::*;

/// The parametric Airy ideal (three variables) and `⟨∂_t² − t, ∂_x⟩`.
fn bases() -> &'static [GroebnerBasis<QT>; 2] {
    static B: OnceLock<[GroebnerBasis<QT>; 2]> = OnceLock::new();
    B.get_or_init(|| {
        let w3 = WeylAlgebra::with_dt(qt(), 3, 1, MonomialOrder::block()).unwrap();
        let v3 = names(&["x", "y", "z"]);
        let airy: Vec<_> = ["dx - (x^2 - t - 2*z)", "dy - (y^2 - t - z)", "dz - (-2*x - y)", "dt + x + y"]
            .iter()
            .map(|s| parse_operator(&w3, &v3, s).unwrap())
            .collect();
        let w1 = WeylAlgebra::with_dt(qt(), 1, 1, MonomialOrder::block()).unwrap();
        let v1 = names(&["x"]);
        let second: Vec<_> = ["dt^2 - t", "dx"].iter().map(|s| parse_operator(&w1, &v1, s).unwrap()).collect();
        [buchberger(&w3, &airy), buchberger(&w1, &second)]
    })
}

/// `index_mod(a) ≤ index(a)`; the division is a congruence and only uses
/// multiples of index at most `index(a)`.
pub fn elimination_law() -> Outcome {
    check(100, (0usize..2, raw_terms(7, 4, 4), -2i64..=2), |(which, a, s)| {
        let gb = &bases()[which];
        let w = gb.algebra();
        let width = 2 * w.n() + 1;
        // Keep the x/∂ exponents that exist plus the ∂_t exponent (stored last).
        let a: RawTerms = a
            .into_iter()
            .map(|(e, c)| ([&e[..width - 1], &e[6..]].concat(), c))
            .collect();
        let a = qt_op(w, &a, s);
        prop_assert!(index_mod(&a, gb) <= index(&a));
        let cert = gb.lrem_certified(&a);
        prop_assert!(cert.verify(w, gb.generators(), &a));
        prop_assert!(cert.max_multiple_index(gb.generators()) as usize <= index(&a));
        Ok(())
    })
}
