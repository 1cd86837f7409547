//! Holomorphic functional calculus for matrices of strip and sector type,
//! gamma-norms of finite-rank operators, square functions on quadrature
//! grids and the integral representations built on them.

pub mod error;
pub mod frames;
pub mod gauss_gamma;
pub mod grids;
pub mod numlin;
pub mod representations;
pub mod sqfun;
pub mod strip_calc;
pub mod suites;

pub use error::{Error, Result};
