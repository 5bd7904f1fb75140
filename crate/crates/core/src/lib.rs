//! LAD-based unit root tests that stay valid under unconditional
//! heteroskedasticity and weak dependence.
//!
//! The test regresses `y_t` on `y_{t-1}` by least absolute deviations,
//! estimates the volatility path by kernel smoothing of the absolute
//! residuals, and obtains p-values from an adaptive block bootstrap that
//! rebuilds unit root pseudo series carrying the same volatility path and
//! short-run dependence as the data.
//!
//! ```
//! use heterour_core::{abb_test, dgp, TestConfig};
//!
//! let spec = dgp::DgpSpec { t_len: 60, ..Default::default() };
//! let y = dgp::simulate_series(&spec, 1)?;
//! let cfg = TestConfig { replications: 99, seed: 7, ..Default::default() };
//! let result = abb_test(y.values(), &cfg)?;
//! assert!(result.p_value.lt.is_some());
//! # Ok::<(), heterour_core::Error>(())
//! ```
//!
//! Bootstrap replications and Monte Carlo replications run on rayon when the
//! default `parallel` feature is enabled. Every replicate draws from its own
//! seed derived from `(master seed, index)`, so results do not depend on the
//! number of threads.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bootstrap;
pub mod config;
pub mod dgp;
pub mod error;
pub mod gls;
pub mod lad;
pub mod mc;
pub mod ols;
pub mod par;
pub mod seed;
pub mod series;
pub mod teststats;
pub mod volatility;

pub use baselines::{abb_m_test, m_statistics, MStats};
pub use bootstrap::{abb_test, abb_test_infeasible, AbbPlan};
pub use config::{
    BandwidthChoice, BlockChoice, StatChoice, TestConfig, TestResult, VolatilityMode,
};
pub use dgp::{DgpSpec, Innovation, VolCase};
pub use error::{Error, Result};
pub use gls::{gls_adjust, DeterministicKind, DeterministicSpec, GlsFit};
pub use lad::{lad_fit, lad_objective, sgn, LadFit};
pub use mc::{mc_size_power, McReport};
pub use series::TimeSeries;
pub use teststats::{compute_stats, density_at_zero, StatPair};
pub use volatility::{cv_bandwidth, estimate_volatility, KernelSpec, VolatilityEstimate};
