//! Fixed-step Adams-Bashforth-Moulton integration of neutral delay
//! differential equations with constant delays, forward and backward in time.
//!
//! ```
//! use abmd::{integrate, IntegratorConfig, InitialValue, FnSystem};
//!
//! // x'(t) = -x(t - 1)
//! let sys = FnSystem::new(1, vec![1.0], |_, _, d| Ok(vec![-d[0].state[0]]));
//! let cfg = IntegratorConfig::default().with_order(6).with_step(1.0 / 16.0);
//! let traj = integrate(&sys, &InitialValue::new(0.0, vec![1.0]), 2.0, &cfg).unwrap();
//! assert_eq!(traj.len(), 33);
//! ```

// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod csv;
pub mod driver;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod history;
pub mod interp;
pub mod models;
pub mod nested;
pub mod rk;
pub mod system;
pub mod testkit;

pub use coeffs::CoefficientTable;
pub use driver::{integrate, integrate_logged, Abmd, DelayedQuery, IntegratorConfig, Retrieval};
pub use error::{Error, Result};
pub use history::{SampleKind, Trajectory};
pub use system::{DdeSystem, DelayedValue, FnSystem, InitialValue};
