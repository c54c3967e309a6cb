//! The regularized flow in the doubled chart.
//!
//! At energy `c` orbits of `H` are, after the time change
//! `ds = dt / (cosh^2 lambda - cos^2 nu)`, the zero-level orbits of
//!
//! ```text
//! Q = Q_lambda + Q_nu
//! Q_lambda = 2 p_lambda^2 - 2 cosh(lambda) - c cosh^2(lambda)
//! Q_nu     = 2 p_nu^2 + 2 delta cos(nu) + c cos^2(nu)
//! ```
//!
//! which is smooth through both primaries and separable, with
//! `Q_lambda = g` and `Q_nu = -g` on the leaf `(g, c)`.

pub mod rk;
mod trajectory;

pub use trajectory::{wrap_angle, Sample, Trajectory};

use serde::{Deserialize, Serialize};

use crate::bifurcation::{Component, EnergyMomentum};
use crate::coords::{Chart, PhaseState, Sign};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::quadrature::cell_geometry;

/// Largest `|Q|` accepted for an initial state.
pub const INITIAL_Q_TOL: f64 = 1e-10;

pub fn q_lambda(c: f64, lambda: f64, p_lambda: f64) -> f64 {
    let ch = lambda.cosh();
    2.0 * p_lambda * p_lambda - 2.0 * ch - c * ch * ch
}

pub fn q_nu(delta: f64, c: f64, nu: f64, p_nu: f64) -> f64 {
    let cn = nu.cos();
    2.0 * p_nu * p_nu + 2.0 * delta * cn + c * cn * cn
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizedEnergy {
    pub c: f64,
    pub q_lambda: f64,
    pub q_nu: f64,
}

impl RegularizedEnergy {
    pub fn total(&self) -> f64 {
        self.q_lambda + self.q_nu
    }
}

fn require_doubled(state: &PhaseState) -> Result<[f64; 4]> {
    if state.chart != Chart::Doubled {
        return Err(Error::Validation(format!("expected a Doubled state, got {:?}", state.chart)));
    }
    Ok(state.coords)
}

pub fn regularized_energy(state: &PhaseState, params: &SystemParams, c: f64) -> Result<RegularizedEnergy> {
    let [l, n, pl, pn] = require_doubled(state)?;
    Ok(RegularizedEnergy { c, q_lambda: q_lambda(c, l, pl), q_nu: q_nu(params.delta(), c, n, pn) })
}

/// Hamiltonian vector field of `Q` on raw doubled coordinates.
#[inline]
pub fn field(delta: f64, c: f64, y: &[f64; 4]) -> [f64; 4] {
    let [l, n, pl, pn] = *y;
    [
        4.0 * pl,
        4.0 * pn,
        2.0 * l.sinh() * (1.0 + c * l.cosh()),
        2.0 * n.sin() * (delta + c * n.cos()),
    ]
}

/// `(lambda', nu', p_lambda', p_nu')` at a Doubled state.
pub fn vector_field(state: &PhaseState, params: &SystemParams, c: f64) -> Result<[f64; 4]> {
    Ok(field(params.delta(), c, &require_doubled(state)?))
}

/// Where on the leaf to start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseChoice {
    /// Which torus when Earth and Moon tori share `(g, c)`.
    pub component: Component,
    /// Position inside the `lambda` cell, `0` = lower turning point,
    /// `1` = upper.
    pub lambda_phase: f64,
    /// Position inside the `nu` cell, same convention.
    pub nu_phase: f64,
    pub p_lambda_sign: Sign,
    pub p_nu_sign: Sign,
}

impl Default for PhaseChoice {
    fn default() -> Self {
        Self {
            component: Component::Earth,
            lambda_phase: 0.5,
            nu_phase: 0.5,
            p_lambda_sign: Sign::Plus,
            p_nu_sign: Sign::Plus,
        }
    }
}

impl PhaseChoice {
    pub fn with_component(component: Component) -> Self {
        Self { component, ..Self::default() }
    }
}

/// Doubled state at `(lambda, nu)` on the leaf `(g, c)` with momenta from
/// the separated equations and the given signs.
pub fn state_on_leaf(
    point: &EnergyMomentum,
    params: &SystemParams,
    lambda: f64,
    nu: f64,
    signs: (Sign, Sign),
) -> Result<PhaseState> {
    let (g, c, d) = (point.g, point.c, params.delta());
    let (ch, cn) = (lambda.cosh(), nu.cos());
    let pl2 = (c * ch * ch + 2.0 * ch + g) / 2.0;
    let pn2 = -(c * cn * cn + 2.0 * d * cn + g) / 2.0;
    let slack = 1e-12 * (1.0 + ch * ch);
    if pl2 < -slack || pn2 < -1e-12 {
        return Err(Error::InadmissiblePoint {
            g,
            c,
            reason: format!("(lambda, nu) = ({lambda}, {nu}) lies outside the admissible cells"),
        });
    }
    Ok(PhaseState::doubled(
        lambda,
        nu,
        signs.0.value() * pl2.max(0.0).sqrt(),
        signs.1.value() * pn2.max(0.0).sqrt(),
    ))
}

/// Initial state inside the admissible cells of `point`.
pub fn initial_state(point: &EnergyMomentum, params: &SystemParams, choice: &PhaseChoice) -> Result<PhaseState> {
    for phase in [choice.lambda_phase, choice.nu_phase] {
        if !(0.0..=1.0).contains(&phase) {
            return Err(Error::Validation(format!("phase {phase} outside [0, 1]")));
        }
    }
    let (lc, nc) = cell_geometry(point, params, choice.component)?;
    let at = |iv: crate::bifurcation::Interval, t: f64| {
        if t == 0.0 {
            iv.lo
        } else if t == 1.0 {
            iv.hi
        } else {
            iv.lo + t * iv.width()
        }
    };
    let lambda = at(lc.turning_values, choice.lambda_phase);
    let nu = at(nc.turning_values, choice.nu_phase);
    state_on_leaf(point, params, lambda, nu, (choice.p_lambda_sign, choice.p_nu_sign))
}

/// Integrates the regularized flow at energy `c` over `s in [0, s_span]`
/// (negative spans run backwards). Every accepted step is recorded, and
/// the run fails if `|Q|` exceeds `10 tol |s_span|` anywhere.
pub fn integrate(
    initial: &PhaseState,
    params: &SystemParams,
    c: f64,
    s_span: f64,
    tol: f64,
) -> Result<Trajectory> {
    let y0 = require_doubled(initial)?;
    let start = regularized_energy(initial, params, c)?;
    if start.total().abs() > INITIAL_Q_TOL {
        return Err(Error::NonzeroQ(start.total().abs()));
    }
    if !s_span.is_finite() {
        return Err(Error::Validation(format!("span must be finite, got {s_span}")));
    }
    let point = EnergyMomentum::new(start.q_lambda, c)?;
    let delta = params.delta();
    integrate_field(|y| field(delta, c, y), y0, params, point, s_span, tol)
}

/// Integrates an arbitrary field on the doubled variables, recording the
/// trajectory and monitoring `Q` as [`integrate`] does.
pub(crate) fn integrate_field(
    f: impl Fn(&[f64; 4]) -> [f64; 4],
    y0: [f64; 4],
    params: &SystemParams,
    point: EnergyMomentum,
    s_span: f64,
    tol: f64,
) -> Result<Trajectory> {
    let bound = 10.0 * tol * s_span.abs();
    let mut traj = Trajectory::new(*params, point, y0);
    let mut failure = None;
    rk::integrate(
        |_, y| f(y),
        0.0,
        y0,
        s_span,
        &rk::Options { per_unit_step: true, ..rk::Options::new(tol) },
        |step| {
            let sample = traj.push(step);
            if sample.q.abs() > bound {
                failure = Some(Error::ToleranceExceeded { s: sample.s, q: sample.q.abs(), bound });
                return false;
            }
            true
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}
