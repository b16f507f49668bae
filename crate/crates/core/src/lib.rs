//! Product sets of bricks in the Heisenberg group H_n(F_p).
//!
//! A brick is `[X_1..X_n, Y_1..Y_n, Z]` with every `X_i`, `Y_i` a subset of
//! F_p^*. Its square is stored fiberwise over the (u, v) slices, which is
//! what the coset, period and growth analyses in [`structure`] work on.
//! [`sumprod`] handles the sum-product equation mZ + Σ X_j·Y_j = u,
//! both by exact counting and through the character sum in [`dft`].

pub mod brick;
pub mod convolution;
pub mod dft;
pub mod element_set;
pub mod error;
pub mod field;
pub mod heisenberg;
pub mod random;
pub mod residue_set;
pub mod structure;
pub mod sumprod;
pub mod verify;

pub use brick::{Brick, BrickSpec, FiberedProductSet, Slice};
pub use element_set::ElementSet;
pub use error::{Error, Result};
pub use field::PrimeField;
pub use heisenberg::{CoordinateSubgroup, Direction, HeisElement, HeisenbergGroup};
pub use residue_set::{ResidueSet, SetSpec};
pub use sumprod::{SumProdInstance, SumProdSpec};
pub use verify::{Caps, Report, Status};

pub type Rational = num_rational::BigRational;

pub type Spectrum64 = dft::Spectrum<f64>;
pub type Spectrum32 = dft::Spectrum<f32>;
pub type SolutionProfile64 = sumprod::SolutionProfile<f64>;
pub type SolutionProfile32 = sumprod::SolutionProfile<f32>;
