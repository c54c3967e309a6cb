//! Mass ratio and the critical constants derived from it.
//!
//! The heavier primary (the Earth) sits at `E = (-1/2, 0)` and carries mass
//! `1 - mu`; the Moon sits at `M = (1/2, 0)` and carries `mu`. A mass ratio
//! above one half is normalized by relabeling the primaries, which mirrors
//! the configuration in `q1`.

use serde::Serialize;

use crate::coords::{Chart, PhaseState};
use crate::error::{Error, Result};

/// Position of the Earth.
pub const EARTH: [f64; 2] = [-0.5, 0.0];
/// Position of the Moon.
pub const MOON: [f64; 2] = [0.5, 0.0];

/// Mass ratio with its derived constants. Immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    mu: f64,
    mirrored: bool,
    delta: f64,
    c_j: f64,
    c_e: f64,
    c_h: f64,
    saddle_q1: f64,
}

impl SystemParams {
    /// Builds the parameters for a mass ratio in `(0, 1)`.
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::Domain(mu));
        }
        let (mu, mirrored) = if mu > 0.5 { (1.0 - mu, true) } else { (mu, false) };
        let delta = 1.0 - 2.0 * mu;
        let root = (mu * (1.0 - mu)).sqrt();
        // 0/0 at equal masses; the symmetric limit is the midpoint.
        let saddle_q1 = if delta == 0.0 {
            0.0
        } else {
            (1.0 - 2.0 * root) / (2.0 * delta)
        };
        Ok(Self {
            mu,
            mirrored,
            delta,
            c_j: -1.0 - 2.0 * root,
            c_e: -1.0,
            c_h: -1.0 + 2.0 * mu,
            saddle_q1,
        })
    }

    /// Normalized mass ratio, always in `(0, 1/2]`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Whether the caller's mass ratio exceeded one half.
    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// `1 - 2 mu`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Critical Jacobi energy, the value of `H` at the saddle point.
    pub fn c_j(&self) -> f64 {
        self.c_j
    }

    /// Energy where the elliptic orbit appears.
    pub fn c_e(&self) -> f64 {
        self.c_e
    }

    /// Energy where the hyperbolic (Lyapunov) orbit disappears.
    pub fn c_h(&self) -> f64 {
        self.c_h
    }

    /// Abscissa of the saddle point `L = (l, 0, 0, 0)` in the normalized frame.
    pub fn saddle_q1(&self) -> f64 {
        self.saddle_q1
    }

    pub fn is_equal_mass(&self) -> bool {
        self.delta == 0.0
    }

    /// Brings a Cartesian state from the caller's frame into the normalized
    /// frame (a no-op unless the params are mirrored).
    pub fn normalize_cartesian(&self, state: &PhaseState) -> PhaseState {
        let mut out = *state;
        if self.mirrored && state.chart == Chart::Cartesian {
            out.coords[0] = -out.coords[0];
            out.coords[2] = -out.coords[2];
        }
        out
    }
}

/// `H(q, p) = |p|^2 / 2 - (1 - mu)/|q - E| - mu/|q - M|` for a Cartesian state
/// given in the caller's frame.
pub fn hamiltonian_cartesian(params: &SystemParams, state: &PhaseState) -> Result<f64> {
    if state.chart != Chart::Cartesian {
        return Err(Error::Validation(format!(
            "hamiltonian_cartesian needs a Cartesian state, got {:?}",
            state.chart
        )));
    }
    let [q1, q2, p1, p2] = params.normalize_cartesian(state).coords;
    let r_e = (q1 - EARTH[0]).hypot(q2);
    let r_m = (q1 - MOON[0]).hypot(q2);
    if r_e == 0.0 || r_m == 0.0 {
        return Err(Error::Singularity(state.coords[0], state.coords[1]));
    }
    let mu = params.mu;
    Ok(0.5 * (p1 * p1 + p2 * p2) - (1.0 - mu) / r_e - mu / r_m)
}
