//! Exact coefficient arithmetic: ℚ, 𝔽_p, polynomials and rational functions
//! in `t`, and the modular reconstruction primitives.

mod commpoly;
mod field;
mod poly;
mod ratfun;
mod recon;

pub use commpoly::{grevlex, CommPoly};
pub use field::{CoeffText, Field, PrimeField, Rationals};
pub use poly::UniPoly;
pub use ratfun::{RatFun, RatFunField};
pub use recon::{
    cauchy_interpolate, crt_combine, crt_extend, is_prime_u32_range, random_prime,
    rational_reconstruct, AdaptiveReconstructor, Feed, RationalLifter,
};

/// ℚ(t).
pub type QT = RatFunField<Rationals>;
/// 𝔽_p(t).
pub type FpT = RatFunField<PrimeField>;

/// ℚ(t) as a field value.
pub fn qt() -> QT {
    RatFunField::new(Rationals)
}
