use std::sync::OnceLock;

use proptest::prelude::*;
use weyl_ct::arith::Field;
use weyl_ct::kregular::ScalarProductInput;

use super::{check, Outcome};

fn models() -> &'static Vec<ScalarProductInput> {
    static M: OnceLock<Vec<ScalarProductInput>> = OnceLock::new();
    M.get_or_init(|| (2..=6).map(|k| ScalarProductInput::model(k).unwrap()).collect())
}

/// Random combinations `Σ c_i u_i` commute for every model up to k = 6.
pub fn u_commutation() -> Outcome {
    let c = || prop::collection::vec(-3i64..=3, 6);
    check(100, (2usize..=6, c(), c()), |(k, a, b)| {
        let m = &models()[k - 2];
        let w = m.algebra();
        let comb = |c: &[i64]| {
            m.u.iter().zip(c).fold(w.constant(w.field().zero()), |acc, (u, &x)| {
                w.add_scaled(&acc, &w.field().from_i64(x), u)
            })
        };
        prop_assert!(w.commutator(&comb(&a), &comb(&b)).is_zero());
        Ok(())
    })
}
