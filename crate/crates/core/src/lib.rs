//! Restricted Cauchy sums for q-Whittaker and skew Schur polynomials.
//!
//! The crate evaluates both sides of the restricted Cauchy identity
//!
//! ```text
//!   sum_{mu_1 + nu_1 <= n} q^|nu| P_mu(a) Q_mu(b)  =  sum_{rho ⊂ lambda, lambda_1 <= n} q^|rho| s_{lambda/rho}(a) s_{lambda/rho}(b)
//! ```
//!
//! exactly, as truncated power series in `q` with rational coefficients, and
//! checks its probabilistic reformulations numerically: brute-force sums over
//! the q-Whittaker and periodic Schur measures against finite sections of the
//! two Fredholm determinants `det(1 - f K)` and `det(1 + f L)`.
//!
//! Module map:
//!
//! - [`partitions`]: partitions, containment, bounded enumeration.
//! - [`qseries`]: q-Pochhammer symbols, theta functions, exact truncated series.
//! - [`symfunc`]: skew Schur and q-Whittaker polynomials at specialized values.
//! - [`measures`]: q-Whittaker / periodic Schur measures, the variables chi and S.
//! - [`fredholm`]: kernels K, K_l, K_inf, L, their factorizations and determinants.
//! - [`cli`]: the batch driver behind the `qcauchy` binary.

pub mod cli;
pub mod error;
pub mod fredholm;
pub mod measures;
pub mod par;
pub mod partitions;
pub mod qseries;
pub mod scalar;
pub mod symfunc;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use qseries::QSeries;
