//! Numerics for generalized Bernstein functions: incomplete gamma and beta
//! functions, gamma smoothing, the sharp inequalities between them, the
//! g_λ auxiliary function, complete monotonicity probes and large-x
//! expansions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cm_probe;
pub mod error;
pub mod glambda;
pub mod inequality;
pub mod measures;
pub mod quadrature;
pub mod smoothing;
pub mod special;

pub use error::{Error, Result};
pub use inequality::{Axis, GridSpec, MarginReport, Spacing};
pub use measures::{evaluate_gbf, laplace_transform, Atom, Density, GBFRep, KernelForm, MeasureSpec};
pub use quadrature::{IntegralResult, Integrator};
