//! Quadratic Liénard-type oscillators, their symmetries and their
//! Noether-preserving quantization.
//!
//! A model is fixed by an increasing function `h(x)`, a frequency `w` and an
//! inverse-square coupling `A`. The crate provides the classical flow and
//! its structure ([`model`], [`classical`], [`symmetry`]), closed-form and
//! numerical spectra of the associated Schrödinger operator ([`quantum`])
//! and the special functions behind them ([`polyspec`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod model;
pub mod polyspec;
pub mod quantum;
pub mod rng;
pub mod symmetry;

pub use error::{Error, Result};
pub use expr::{parse, Expr, ExprError};
pub use model::{Interval, Jet, LienardModel};
