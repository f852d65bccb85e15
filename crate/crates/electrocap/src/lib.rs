//! Equilibrium shapes of electrically charged fluid interfaces under
//! curvature-dependent (Tolman-like) surface tension.
//!
//! The crate covers two configurations:
//!
//! * charged conducting spherical droplets in equilibrium with their vapour
//!   ([`droplet`]): normalized pressure balance, equilibrium/minimal radii;
//! * pendant electrocapillary menisci at the mouth of a conducting capillary
//!   held at a potential drop against a grounded plate ([`meniscus`]):
//!   free-boundary Young–Laplace profiles solved by shooting, with the normal
//!   electric field supplied in closed form from parabolic-coordinate
//!   electrostatics ([`efield`]) and an independent variational cross-check
//!   on parabolic trial shapes ([`variational`]).
//!
//! Four surface-tension laws are supported ([`tolman`]): the constant law and
//! three curvature-dependent corrections that deviate from the flat-interface
//! value when the mean curvature radius approaches the minimal nucleation
//! radius.

pub mod cli;
pub mod droplet;
pub mod efield;
pub mod error;
pub mod meniscus;
pub mod numerics;
pub mod tolman;
pub mod variational;

pub use error::{Error, Result};
pub use tolman::{TensionKind, TolmanModel};
