//! Exact computations with hyperfields and matroids over hyperfields.
//!
//! Elements of the ten registered hyperfields carry rational payloads, so
//! membership in hypersums is decided exactly. On top of that sit
//! Grassmann-Plucker checking, enumeration of Grassmannians over the sign
//! and Krasner hyperfields, weak-map posets, mod-2 homology of order
//! complexes, realization spaces and a high-precision dequantization layer.

#![no_std]

extern crate alloc;

pub mod combin;
pub mod dequant;
pub mod error;
pub mod grassmannian;
pub mod hyperfield;
pub mod num;
pub mod plucker;
pub mod poset;
pub mod realization;
pub mod search;
pub mod structures;
pub mod topology;

pub use error::Error;
pub use hyperfield::{Element, Field, SetValue};
