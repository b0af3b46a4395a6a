//! Substitution dynamics and Salem number toolkit.
//!
//! Layers, bottom up: [`hp`] and [`poly`] provide arithmetic, [`substitution`]
//! extracts Perron data, [`numberfield`] does exact arithmetic in Q(α),
//! [`orbit`] handles trace orbits and equidistribution, [`approx`] builds the
//! extremal trigonometric polynomials, [`flow`] evaluates twisted integrals
//! over the suspension flow and [`bounds`] assembles the explicit constants.

pub mod approx;
pub mod bounds;
pub mod cf;
pub mod error;
pub mod flow;
pub mod hp;
pub mod numberfield;
pub mod orbit;
pub mod poly;
pub mod substitution;

pub use error::{Error, Result};
