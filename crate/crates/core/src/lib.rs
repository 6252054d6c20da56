//! Local quantum uncertainty (LQU) of bipartite states, finite-temperature
//! amplitude damping channels, and the weak-measurement / reversal protocol
//! that protects correlations against them.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; randomized routines take explicit seeds.
//!
//! Tensor order is always `A ⊗ B` with computational basis `|00⟩, |01⟩, …`
//! in row-major order.
//!
//! Float math goes through `num_traits::Float` (libm). Whenever std ends up
//! in the crate graph (tests, std consumers) its inherent methods shadow the
//! trait, hence the `allow(unused_imports)` on those imports.

#![no_std]
// `!(x >= 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod basis;
pub mod channels;
mod error;
pub mod linalg;
pub mod lqu;
pub mod measure;
pub mod optimize;
pub mod protocol;
pub mod random;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use states::DensityMatrix;
