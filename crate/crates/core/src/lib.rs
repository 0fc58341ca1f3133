//! Numerical laboratory for entropy solutions of the multi-dimensional
//! Burgers equation `u_t + u u_{x_1} + … + u^d u_{x_d} = 0`.
//!
//! * [`equation`]: flux family and the two-parameter scaling group.
//! * [`exponents`]: exact-rational decay exponents and the dyadic compounding ledger.
//! * [`solver`]: monotone finite-volume scheme (Engquist–Osher / Godunov).
//! * [`oracle`]: exact 1-D solutions from the Lax–Oleinik formula.
//! * [`analysis`]: norms, decay fits and bound ratios.
//! * [`cli`]: experiment configs, commands and verification suites behind the binary.

pub mod analysis;
pub mod cli;
pub mod equation;
pub mod exponents;
pub mod oracle;
pub mod solver;
