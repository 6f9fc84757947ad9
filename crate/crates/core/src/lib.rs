//! Clifford-algebra numerics with a discrete surface-calculus layer.
//!
//! The crate is organised around one value type, [`algebra::Multivector`],
//! and a sampled-surface type, [`calculus::SurfaceGrid`].  On top of those:
//!
//! * [`zoo`] generates analytic test surfaces with known properties,
//! * [`calculus`] provides differentials, induced metrics, Hodge stars and
//!   the residual operators for conformality, minimality, harmonicity and
//!   holomorphicity,
//! * [`transforms`] builds spin and Darboux transforms and their flat
//!   connections,
//! * [`connections`] sweeps the circle and complex families of flat
//!   connections attached to harmonic sphere maps,
//! * [`duality`] computes polar/bipolar duals, the minimal-immersion
//!   sequence and the spinor-bundle degree formula.

pub mod algebra;
pub mod calculus;
pub mod connections;
pub mod duality;
pub mod error;
pub mod report;
pub mod transforms;
pub mod zoo;

pub use algebra::{AlgebraContext, BladeMask, Membership, Multivector};
pub use calculus::{MetricField, OneFormField, ResidualField, SurfaceGrid, TwoFormField};
pub use error::{Error, Result};
pub use report::ResidualReport;
