//! Circular colorings of the plane built from shifted horizontal strips.
//!
//! The crate evaluates the strip colorings, certifies them with outward
//! interval arithmetic, cross-checks them by seeded sampling and adversarial
//! search, sweeps the distance-band family, and computes exact circular
//! chromatic numbers of small graphs. It is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod explore;
pub mod finite;
pub mod numerics;
pub mod render;
pub mod scheme;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{interval_mod_reduce, interval_mod_reduce_f64, mod_floor, mod_frac, OuterInterval};
pub use scheme::{r_of_eps, Family, Point, StripScheme};
