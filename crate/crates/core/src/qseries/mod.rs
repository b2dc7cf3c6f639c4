//! q-Pochhammer symbols, theta functions and q-series in two backends: exact
//! truncated series with rational coefficients ([`QSeries`]) and complex
//! double precision ([`numeric`]).

pub mod numeric;
mod series;

pub use numeric::{
    inv_qfactorial, pochhammer_lower_bound_constants, qfactorial, qpoch_inf, qpoch_inf_real,
    qpoch_n, ramanujan_theta_ratio, theta, theta_real,
};
pub use series::{rat, ratio, rational_to_string, QSeries};
