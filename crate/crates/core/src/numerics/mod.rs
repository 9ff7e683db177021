//! Numerical kernels shared by the distribution and bound code.

mod minimize;
mod quadrature;
mod root;

pub use minimize::minimize_unimodal;
pub use quadrature::{integrate_semi_infinite, QuadratureConfig};
pub use root::find_root_monotone;
