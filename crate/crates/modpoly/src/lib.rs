//! Modular polynomials φ_ℓ(x, y) computed directly modulo p by walking the
//! supersingular ℓ-isogeny graph, lifted to the integers by CRT, and
//! cross-checked against the classical q-expansion construction.
//!
//! Pipeline: a supersingular j₀ comes from a Hilbert class polynomial with
//! (D/p) = −1 ([`ssinit`]); each node's column φ_ℓ(x, j) is the product over
//! the ℓ+1 quotients by order-ℓ subgroups, computed with Vélu's formulas
//! over a small tower extension ([`localphi`]); ℓ+1 distinct nodes pin down
//! every coefficient of φ_ℓ(x, y) by interpolation ([`globalphi`]); many
//! primes combine to the integer polynomial ([`crtlift`]). The [`classical`]
//! module is an independent oracle for small ℓ.

pub mod arith;
mod error;
pub mod bivariate;
pub mod curves;
pub mod torsion;
pub mod velu;
pub mod localphi;
pub mod ssinit;
pub mod globalphi;
pub mod crtlift;
pub mod bench;
pub mod classical;
pub(crate) mod poly;
pub mod fields;

pub use error::{Error, Result};
