//! Exact bounds, certified reductions, and audit sweeps for point-passing
//! problems on Brill-Noether curves in projective space.

pub mod json;
pub mod numerics;
pub mod reduction;
pub mod audit;
#[cfg(feature = "cli")]
pub mod cli;
