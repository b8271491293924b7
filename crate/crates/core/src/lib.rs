//! Exact step-function toolkit for the Hartman-Mycielski construction over
//! finite spaces, and a harness showing that no multiplication `μ: H² -> H`
//! satisfying the monad unit laws and naturality can be continuous.
//!
//! Layers, bottom up:
//!
//! - [`rat`], [`space`]: exact rationals, finite metric spaces, test functions
//!   and windows;
//! - [`stepfn`]: canonical piecewise-constant functions on `[0,1)`;
//! - [`hm`]: the metric `d_HM`, functional coordinates, `HM f`, `η`, support;
//! - [`tower`]: `HM²`, `HM³`, `Hη`, `ηH`, and candidate multiplications;
//! - [`laws`]: law checkers, staircase witnesses, fiber oracle, probe;
//! - [`cli`]: report assembly and rendering.

pub mod cli;
pub mod error;
pub mod gen;
pub mod hm;
pub mod laws;
pub mod par;
pub mod rat;
pub mod space;
pub mod stepfn;
pub mod tower;

mod text;

pub use error::{Error, Result};
pub use hm::{HmFn, SpaceMap};
pub use rat::Rat;
pub use space::{FiniteSpace, Point, TestFn, Window};
pub use stepfn::StepFn;
pub use tower::{HmFn2, HmFn3, MuCandidate};
