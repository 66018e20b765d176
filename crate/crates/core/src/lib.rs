//! Exact discrete Hardy-Littlewood maximal transforms on `Z`.
//!
//! * [`sequence`]: finitely supported rational sequences, norms, variation.
//! * [`transform`]: centered, non-centered and one-sided maximal transforms.
//! * [`verify`]: exact checkers for the variation inequalities and the lemmas
//!   behind them.
//! * [`search`]: exhaustive and seeded stochastic search for extremal ratios.

pub mod error;
pub mod extrema;
pub mod rational;
pub mod search;
pub mod sequence;
pub mod transform;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use extrema::ExtremaChain;
pub use rational::Rational;
pub use sequence::{Exponent, NormValue, Sequence, WkpNorm};
pub use transform::{Kind, MaximalTransform, Side};
