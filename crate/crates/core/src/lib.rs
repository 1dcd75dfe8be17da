//! KM-arcs of type `t` in `PG(2, q)`, `q = 2^m`, presented in polar
//! coordinates over `K = GF(q^2)`.
//!
//! The affine plane is identified with `K` itself: a point is a field element,
//! a line is `L(u, mu) = { x : <u, x> = mu }` with `u` on the unit circle and
//! `mu` in the base field `F = GF(q)`. Arcs whose nucleus sits at `0` are then
//! plain sets of field elements, and the KM property can be checked either by
//! a full line census or purely algebraically through power sums.
//!
//! Everything here is pure arithmetic on immutable values and builds without
//! `std` (an allocator is required).

#![no_std]

extern crate alloc;

pub mod arcs;
pub mod autos;
pub mod constructions;
mod error;
pub mod gf2tower;
pub mod plane;

pub use error::{Error, Result};
pub use gf2tower::{FieldElement, FieldTower, Level};
pub use plane::{Collineation, Line, ProjPoint};
