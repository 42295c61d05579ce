//! Certified enclosures for Brun's constant, the sum of `1/p + 1/(p+2)` over
//! all twin primes.
//!
//! The lower bound is a partial sum `B(x)` computed in interval arithmetic,
//! either by sieving ([`sieve`]) or by extending a sieved base point with
//! published twin-prime census tables ([`tables`]). The upper bound combines
//! that partial sum with an explicit upper bound for the twin-prime counting
//! function and a rigorous quadrature of the remaining tail ([`rv_bound`]),
//! fed by constants derived in [`divisor_error`] and [`euler_product`].

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decimal;
pub mod divisor_error;
pub mod euler_product;
pub mod error;
pub mod interval;
pub mod jet;
pub mod projection;
pub mod quadrature;
pub mod rv_bound;
pub mod sieve;
pub mod tables;

pub use error::{Error, Result};
pub use interval::Interval;
