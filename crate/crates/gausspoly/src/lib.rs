//! Exact, asymptotic and Monte Carlo evaluation of expected volumes of
//! Gaussian-type random polytopes and of the intrinsic volumes and external
//! angles of the regular polytope families they correspond to.
//!
//! The crate is organized around a log-space adaptive quadrature core
//! ([`quad`]) feeding closed-form prefactors ([`regular`], [`expectations`],
//! [`hetero`], [`orderstats`]), a two-term extreme-value expansion layer
//! ([`asymptotics`]), and an independent Monte Carlo oracle ([`mc`]) with
//! reproducible parallel sampling. The `gausspoly` binary exposes everything
//! as subcommands emitting JSON-lines or CSV records.

pub mod asymptotics;
pub mod combinatorics;
pub mod hetero;
pub mod error;
pub mod expectations;
pub mod orderstats;
pub mod quad;
pub mod regular;
pub mod special;

pub use error::{Error, Result};
pub use quad::{GaussianPowerIntegrand, QuadResult};
