//! Mechanical checks of quantum certainty claims.
//!
//! * [`exact_algebra`]: exact ℚ(√2) arithmetic and 3-vector geometry.
//! * [`peres_ks`]: the Peres ray set, basis completion, and an exhaustive
//!   search showing no Kochen-Specker value map exists.
//! * [`qsim`]: small dense quantum simulator (states, POVMs, instruments,
//!   preparation detection, preparation circuits, MUB tomography).
//! * [`stairs`]: steering on an entangled qutrit pair and the reduction of
//!   local pre-existing values to the coloring problem.
//! * [`cli`]: the `kscert` command-line front end.

pub mod cli;
pub mod exact_algebra;
pub mod json;
pub mod peres_ks;
pub mod qsim;
pub mod stairs;
