//! Exact arithmetic over prime fields.

pub mod bigindex;
pub mod bipoly;
pub mod field;
pub mod laurent;
pub mod ntt;
pub mod powmod;
pub mod rational;
pub mod upoly;

pub use bigindex::{radix_digits, BigIndex};
pub use bipoly::{bipoly_mul, BiPoly};
pub use field::{fp_inv, Fp, PrimeField};
pub use laurent::{laurent_split, LaurentUniPoly};
pub use powmod::{bipoly_powmod_y, FracFree, YModulus};
pub use rational::RationalFunction;
pub use upoly::UniPoly;

/// Section operator on univariate polynomials.
pub fn section_uni(f: &UniPoly, r: u64) -> crate::Result<UniPoly> {
    f.section(r)
}

/// Simultaneous section operator on bivariate polynomials.
pub fn section_bi(v: &BiPoly, r: u64) -> crate::Result<BiPoly> {
    v.section(r)
}

/// Product of univariate polynomials.
pub fn upoly_mul(u: &UniPoly, v: &UniPoly) -> UniPoly {
    u.mul(v)
}

/// Inverse of `u` modulo `x^n`.
pub fn upoly_series_inv(u: &UniPoly, n: usize) -> crate::Result<UniPoly> {
    u.series_inv(n)
}
