//! Exact-arithmetic engine for toric quotient stacks and their K-theoretic
//! I-functions.
//!
//! Everything in this crate is computed over arbitrary-precision integers and
//! rationals; there is no floating point anywhere. The crate is split into
//! five layers:
//!
//! * [`exactalg`] — integer/rational linear algebra (Smith and Hermite normal
//!   forms, kernels, minors, unimodular inverses),
//! * [`toric`] — charge-matrix data, Gale duality, fixed points, cones,
//!   chambers and character restrictions,
//! * [`qseries`] — rational functions in `q`, q-Pochhammer symbols, truncated
//!   multivariate Laurent series, shift operators and the parameter swap,
//! * [`ifunction`] — per-fixed-point I-function assembly,
//! * [`mirror`] — circuits, q-difference operators and the mirror
//!   verification driver.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `qmirror-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod exactalg;
pub mod ifunction;
pub mod qseries;
pub mod toric;
