//! Numerical toolkit for the planar problem of two fixed gravitating centers.
//!
//! The Earth (mass `1 - mu`) sits at `(-1/2, 0)` and the Moon (mass `mu`) at
//! `(1/2, 0)`. The problem separates in elliptic coordinates; everything here
//! works with the energy `c = H` and the separation integral `g = G`.
//!
//! * [`params`]: mass ratio and the critical energies `cJ < cE < cH`.
//! * [`coords`]: Cartesian, elliptic and doubled elliptic charts.
//! * [`bifurcation`]: the `(g, c)` diagram, critical orbits and molecules.
//! * [`dynamics`]: the regularized separable flow and its integrator.
//! * [`quadrature`]: subsystem periods, rotation numbers, torus families.
//! * [`homoclinic`]: Lyapunov orbits and their homoclinic leaves.
//! * [`knots`]: closure of periodic orbits and winding counts.
//! * [`cli`]: the `twocenters` command line.

pub mod bifurcation;
pub mod cli;
pub mod coords;
pub mod dynamics;
pub mod error;
pub mod homoclinic;
pub mod knots;
pub mod params;
pub mod quadrature;

pub use error::{Error, Result};
pub use params::SystemParams;
