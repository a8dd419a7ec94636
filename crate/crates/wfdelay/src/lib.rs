//! Two-charge delay dynamics with advanced and retarded Coulomb forces.
//!
//! The model couples two relativistic point charges through Coulomb fields
//! evaluated at the intersections of each particle's worldline with the
//! future and past light cones of the other. Solutions are represented as
//! piecewise Chebyshev worldlines and are grown from strip initial data by
//! a light-cone method of steps, one exchange at a time.
//!
//! The crate provides:
//!
//! * [`kinematics`] — relativistic momentum/velocity maps and the central
//!   force field together with its global inverse;
//! * [`trajectory`] — piecewise polynomial worldlines with dense derivative
//!   output, fitting and monotone reparameterization;
//! * [`delay`] — light-cone delay-time solving, delayed Coulomb and full
//!   Liénard-Wiechert field evaluation;
//! * [`initial_data`] / [`construction`] — validation and generation of strip
//!   initial data, and the method-of-steps extension into future and past;
//! * [`energy`] — the conserved two-time energy functional and drift audits;
//! * [`schild`] — closed-form circular counter-orbit solutions;
//! * [`scenario`] — the JSON scenario runner backing the `wfdelay` CLI.
//!
//! Units: the speed of light is 1 throughout.

pub mod chebyshev;
pub mod construction;
pub mod delay;
pub mod energy;
pub mod error;
pub mod guards;
pub mod initial_data;
pub mod jets;
pub mod kinematics;
pub mod quadrature;
pub mod rootfind;
pub mod scenario;
pub mod schild;
pub mod trajectory;
pub mod vec3;

pub use error::{Error, Result};
pub use guards::GuardParams;
pub use kinematics::{ChargeParams, ParticleLabel, PhasePoint};
pub use vec3::Vec3;
