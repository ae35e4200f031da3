//! Exact invariants of strata of Abelian and quadratic differentials.
//!
//! * [`pattern`]: singularity patterns (`Q(-1,9)`, `H(2,4)`), genus,
//!   dimension, non-emptiness and connectedness facts.
//! * [`cover`]: the orientation double cover at the level of patterns.
//! * [`parity`]: spin parity by the closed form and the sum form, plus
//!   hyperelliptic component parities.
//! * [`arf`]: quadratic forms over Z/2, symplectic reduction, the Arf
//!   invariant, and the chain-form route to spin parity.
//! * [`billiard`]: unfolding of rational polygons and their pillowcase
//!   quadratic differentials.
//! * [`enumerate`] and [`selftest`]: exhaustive sweeps and the cross-route
//!   verification corpus, run through [`exec::Execution`].
//!
//! ```
//! use stratum_spin::{parity::spin_parity_closed, Pattern, SpinParity};
//!
//! let p: Pattern = "Q(-1,9)".parse().unwrap();
//! assert_eq!(p.genus(), 3);
//! assert_eq!(spin_parity_closed(&p).unwrap(), SpinParity::Even);
//! ```

pub mod arf;
pub mod billiard;
pub mod cli;
pub mod cover;
pub mod enumerate;
pub mod exec;
pub mod parity;
pub mod pattern;
pub mod selftest;

pub use billiard::BilliardTable;
pub use exec::Execution;
pub use parity::SpinParity;
pub use pattern::{Flavor, Pattern};
