//! The Lyapunov orbit on the hyperbolic leaf and its homoclinic orbits.
//!
//! For `c` in `(cJ, cH)` the leaf `g_c = delta^2 / c` makes
//! `c eta^2 + 2 delta eta + g_c = c (eta - eta*)^2` a perfect square with
//! `eta* = -delta / c`. Its `nu` motion then has the hyperbolic equilibria
//! `nu = +-nu*` (`cos nu* = eta*`) and, on either side of them,
//! `p_nu = sigma sqrt(-c/2) |cos nu - eta*|`: every other orbit of the leaf
//! leaves one equilibrium and approaches the other while `lambda` keeps
//! oscillating, i.e. it is homoclinic to the Lyapunov orbit `nu = +-nu*`.
//!
//! Such separatrix motion cannot be followed by the generic flow for long,
//! because rounding pushes the orbit off the leaf and the saddle amplifies
//! the error. Leaf orbits are therefore integrated with `nu'` taken from
//! the leaf relation above and `lambda`, `p_lambda`, `p_nu` from the full
//! field, and each one is compared with the full flow up to the point
//! where it gets within [`CROSS_CHECK_DISTANCE`] of the equilibrium.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use roots::{find_root_brent, SimpleConvergency};
use serde::{Serialize, Serializer};

use crate::bifurcation::{Component, EnergyMomentum, Focus};
use crate::coords::{doubled_position, PhaseState, Sign};
use crate::dynamics::{self, field, integrate_field, wrap_angle, Trajectory};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::quadrature::lambda_cell;

/// Checkpoint times, used in both directions.
pub const CHECKPOINTS: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];
/// Largest accepted distance to the Lyapunov orbit at the last checkpoint.
pub const FINAL_DISTANCE: f64 = 1e-4;
/// Slack in the monotone-decrease check; distances bottom out near rounding.
pub const MONOTONE_FLOOR: f64 = 1e-12;
/// Smallest accepted `|nu'|` where an orbit passes its primary.
pub const TANGENCY_MIN: f64 = 1e-6;
/// The full-flow comparison runs until the leaf orbit is this close.
pub const CROSS_CHECK_DISTANCE: f64 = 1e-5;
/// Accepted max-norm gap between leaf orbit and full flow.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Accepted `|nu - nu*|` along the Lyapunov orbit.
pub const STATIONARITY_TOL: f64 = 1e-8;

fn check_band(c: f64, params: &SystemParams) -> Result<()> {
    if params.is_equal_mass() {
        return Err(Error::ExplicitlyDegenerate("equal masses have no Lyapunov orbit with g_c < 0"));
    }
    if !(c > params.c_j() && c < params.c_h()) {
        return Err(Error::Band { c, lo: params.c_j(), hi: params.c_h() });
    }
    Ok(())
}

/// `nu*` moved by at most 64 ulps to where the computed `nu` force is
/// smallest, so that the Lyapunov orbit is stationary in floating point.
fn snap_nu_star(delta: f64, c: f64) -> f64 {
    let exact = (-delta / c).acos();
    let force = |nu: f64| (delta + c * nu.cos()).abs();
    let mut best = exact;
    let mut x = exact;
    for _ in 0..64 {
        x = x.next_up();
        if force(x) < force(best) {
            best = x;
        }
    }
    x = exact;
    for _ in 0..64 {
        x = x.next_down();
        if force(x) < force(best) {
            best = x;
        }
    }
    best
}

/// The hyperbolic leaf at energy `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Leaf {
    pub c: f64,
    pub g_c: f64,
    pub nu_star: f64,
    /// `cos(nu*)`.
    pub eta_star: f64,
    /// Half-width of the `lambda` cell.
    pub lambda_max: f64,
}

impl Leaf {
    pub fn new(c: f64, params: &SystemParams) -> Result<Self> {
        check_band(c, params)?;
        let d = params.delta();
        let g_c = d * d / c;
        let nu_star = snap_nu_star(d, c);
        let cell = lambda_cell(&EnergyMomentum::new(g_c, c)?, params)?;
        Ok(Self { c, g_c, nu_star, eta_star: -d / c, lambda_max: cell.turning_values.hi })
    }

    pub fn point(&self) -> EnergyMomentum {
        EnergyMomentum { g: self.g_c, c: self.c }
    }

    /// `sqrt(-c/2)`, the slope of `|p_nu|` in `|cos nu - eta*|`.
    fn slope(&self) -> f64 {
        (-self.c / 2.0).sqrt()
    }

    /// Distance in `nu` to the nearer of `+-nu*`, on the circle.
    pub fn distance(&self, nu: f64) -> f64 {
        wrap_angle(nu - self.nu_star).abs().min(wrap_angle(nu + self.nu_star).abs())
    }

    /// Where the component's orbits pass their primary.
    fn passage(component: Component) -> f64 {
        if component == Component::Moon {
            0.0
        } else {
            PI
        }
    }

    /// `p_lambda^2` at `lambda` on this leaf.
    fn p_lambda_sq(&self, lambda: f64) -> f64 {
        let ch = lambda.cosh();
        (self.c * ch * ch + 2.0 * ch + self.g_c) / 2.0
    }
}

/// One period of the periodic orbit `nu = nu*` on the hyperbolic leaf.
#[derive(Debug, Clone)]
pub struct LyapunovOrbit {
    pub leaf: Leaf,
    /// `lambda` period.
    pub period: f64,
    /// Largest `|nu - nu*|` over the period.
    pub stationarity: f64,
    pub trajectory: Trajectory,
}

impl LyapunovOrbit {
    /// `h(eta*)` and `h'(eta*)`; both vanish at a double root.
    pub fn double_root_residuals(&self, params: &SystemParams) -> (f64, f64) {
        let (c, d, e) = (self.leaf.c, params.delta(), self.leaf.nu_star.cos());
        (c * e * e + 2.0 * d * e + self.leaf.g_c, 2.0 * c * e + 2.0 * d)
    }

    /// Second derivative of `2 delta cos(nu) + c cos^2(nu)` at `nu*`.
    pub fn potential_curvature(&self) -> f64 {
        2.0 * self.leaf.c * self.leaf.nu_star.sin().powi(2)
    }

    pub fn cartesian_points(&self) -> Vec<[f64; 2]> {
        self.trajectory
            .samples()
            .iter()
            .map(|x| doubled_position(x.state[0], x.state[1]))
            .collect()
    }

    /// Largest distance between two points of the orbit.
    pub fn cartesian_diameter(&self) -> f64 {
        let pts = self.cartesian_points();
        let mut best: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                best = best.max((a[0] - b[0]).hypot(a[1] - b[1]));
            }
        }
        best
    }

    /// Largest distance of the orbit from `target`.
    pub fn max_distance_from(&self, target: [f64; 2]) -> f64 {
        self.cartesian_points()
            .iter()
            .map(|p| (p[0] - target[0]).hypot(p[1] - target[1]))
            .fold(0.0, f64::max)
    }
}

/// Builds the Lyapunov orbit and checks that `nu` stays at `nu*` for one
/// `lambda` period under the full flow.
pub fn lyapunov_orbit(c: f64, params: &SystemParams) -> Result<LyapunovOrbit> {
    lyapunov_orbit_with(c, params, 1e-12)
}

pub fn lyapunov_orbit_with(c: f64, params: &SystemParams, tol: f64) -> Result<LyapunovOrbit> {
    let leaf = Leaf::new(c, params)?;
    let point = leaf.point();
    let period = lambda_cell(&point, params)?.period(&point, params)?;
    let start = PhaseState::doubled(0.0, leaf.nu_star, leaf.p_lambda_sq(0.0).sqrt(), 0.0);
    let trajectory = dynamics::integrate(&start, params, c, period, tol)?;
    let stationarity = trajectory
        .samples()
        .iter()
        .map(|x| (x.state[1] - leaf.nu_star).abs())
        .fold(0.0, f64::max);
    if stationarity > STATIONARITY_TOL {
        return Err(Error::VerificationFailure(format!(
            "nu drifted {stationarity:e} from nu* over one lambda period at c = {c}"
        )));
    }
    Ok(LyapunovOrbit { leaf, period, stationarity, trajectory })
}

fn leaf_component(component: Component) -> Result<Component> {
    match component {
        Component::Both => Err(Error::Validation("a leaf orbit needs the Earth or the Moon component".into())),
        other => Ok(other),
    }
}

fn integrate_leaf(leaf: &Leaf, params: &SystemParams, y0: [f64; 4], sign: Sign, s_span: f64, tol: f64) -> Result<Trajectory> {
    let (delta, c, eta_star) = (params.delta(), leaf.c, leaf.eta_star);
    let nu_speed = 4.0 * sign.value() * leaf.slope();
    integrate_field(
        |y| {
            let mut v = field(delta, c, y);
            v[1] = nu_speed * (y[1].cos() - eta_star).abs();
            v
        },
        y0,
        params,
        leaf.point(),
        s_span,
        tol,
    )
}

/// Start of a leaf orbit: `lambda` at `phase` across its cell, `nu` where
/// the component passes its primary, `p_nu` with the given sign.
fn leaf_start(leaf: &Leaf, component: Component, phase: f64, sign: Sign) -> Result<[f64; 4]> {
    if !(0.0..=1.0).contains(&phase) {
        return Err(Error::Validation(format!("phase {phase} outside [0, 1]")));
    }
    let lambda = leaf.lambda_max * (2.0 * phase - 1.0);
    let nu = Leaf::passage(component);
    let p_nu = sign.value() * leaf.slope() * (nu.cos() - leaf.eta_star).abs();
    Ok([lambda, nu, leaf.p_lambda_sq(lambda).max(0.0).sqrt(), p_nu])
}

/// An orbit on the hyperbolic leaf, integrated over `s_span` (negative
/// spans run backwards).
pub fn leaf_orbit(
    c: f64,
    params: &SystemParams,
    component: Component,
    phase: f64,
    sign: Sign,
    s_span: f64,
) -> Result<Trajectory> {
    let leaf = Leaf::new(c, params)?;
    let y0 = leaf_start(&leaf, leaf_component(component)?, phase, sign)?;
    integrate_leaf(&leaf, params, y0, sign, s_span, 1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(if *self == Verdict::Pass { "pass" } else { "fail" })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub phase: f64,
    pub sign: Sign,
    pub checkpoints_fwd: Vec<f64>,
    pub checkpoints_bwd: Vec<f64>,
    pub rotation_count: u32,
    pub collision_flag: bool,
    /// `|nu'|` at the passage of the primary.
    pub tangency_speed: f64,
    /// Max-norm gap to the full flow, worse of the two directions.
    pub cross_check_residual: f64,
    pub pass: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomoclinicReport {
    pub mu: f64,
    pub c: f64,
    pub component: Component,
    pub orbits: Vec<OrbitReport>,
    pub verdict: Verdict,
}

impl HomoclinicReport {
    fn new(params: &SystemParams, c: f64, component: Component, orbits: Vec<OrbitReport>) -> Self {
        let verdict = if orbits.iter().all(|o| o.pass) { Verdict::Pass } else { Verdict::Fail };
        Self { mu: params.mu(), c, component, orbits, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn into_checked(self) -> Result<Self> {
        match self.orbits.iter().find(|o| !o.pass) {
            None => Ok(self),
            Some(o) => Err(Error::VerificationFailure(
                serde_json::to_string(o).unwrap_or_else(|_| format!("{o:?}")),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomoclinicOptions {
    pub checkpoints: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
}

impl Default for HomoclinicOptions {
    fn default() -> Self {
        Self { checkpoints: CHECKPOINTS.to_vec(), tol: 1e-12, seed: 0 }
    }
}

/// Passages of `nu` through `target` across the whole orbit, with `|nu'|`
/// and `|lambda|` at each.
fn passages(bwd: &Trajectory, fwd: &Trajectory, target: f64) -> Vec<(f64, f64)> {
    let offset = |y: &[f64; 4]| wrap_angle(y[1] - target);
    let mut out = Vec::new();
    if offset(&fwd.samples()[0].state) == 0.0 {
        let y = fwd.samples()[0].state;
        out.push((4.0 * y[3].abs(), y[0].abs()));
    }
    for traj in [bwd, fwd] {
        for st in traj.steps() {
            let (a, b) = (offset(&st.y0()), offset(&st.y1()));
            if a * b < 0.0 && (a - b).abs() < PI {
                let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
                let (lo, hi) = (st.t0, st.t1());
                let t = find_root_brent(lo, hi, |t| offset(&st.eval(t)), &mut conv).unwrap_or(0.5 * (lo + hi));
                let y = st.eval(t);
                out.push((4.0 * y[3].abs(), y[0].abs()));
            }
        }
    }
    out
}

/// Max-norm gap between the leaf orbit and the full flow from the same
/// start, at the first sample within [`CROSS_CHECK_DISTANCE`].
fn cross_check(leaf: &Leaf, params: &SystemParams, y0: [f64; 4], traj: &Trajectory, tol: f64) -> Result<f64> {
    let Some(reach) = traj.samples().iter().find(|x| leaf.distance(x.state[1]) < CROSS_CHECK_DISTANCE) else {
        return Ok(f64::INFINITY);
    };
    let full = dynamics::integrate(&PhaseState::doubled_from(y0), params, leaf.c, reach.s, tol)?;
    let end = full.final_state();
    Ok((0..4).map(|i| (end[i] - reach.state[i]).abs()).fold(0.0, f64::max))
}

fn check_orbit(
    leaf: &Leaf,
    params: &SystemParams,
    component: Component,
    y0: [f64; 4],
    phase: f64,
    sign: Sign,
    opts: &HomoclinicOptions,
    collision_start: bool,
) -> Result<OrbitReport> {
    let horizon = opts.checkpoints.iter().copied().fold(0.0, f64::max);
    let fwd = integrate_leaf(leaf, params, y0, sign, horizon, opts.tol)?;
    let bwd = integrate_leaf(leaf, params, y0, sign, -horizon, opts.tol)?;
    let distances = |traj: &Trajectory, dir: f64| -> Vec<f64> {
        opts.checkpoints
            .iter()
            .map(|&s| traj.eval(dir * s).map_or(f64::NAN, |y| leaf.distance(y[1])))
            .collect()
    };
    let checkpoints_fwd = distances(&fwd, 1.0);
    let checkpoints_bwd = distances(&bwd, -1.0);

    let mut reasons = Vec::new();
    for (name, d) in [("forward", &checkpoints_fwd), ("backward", &checkpoints_bwd)] {
        if d.windows(2).any(|w| !(w[1] <= w[0] + MONOTONE_FLOOR)) {
            reasons.push(format!("{name} distances not decreasing: {d:?}"));
        }
        match d.last() {
            Some(&last) if last <= FINAL_DISTANCE => {}
            last => reasons.push(format!("{name} final distance {last:?} above {FINAL_DISTANCE:e}")),
        }
    }

    let pass_list = passages(&bwd, &fwd, Leaf::passage(component));
    let rotation_count = pass_list.len() as u32;
    if rotation_count != 1 {
        reasons.push(format!("rotation count {rotation_count}, expected 1"));
    }
    let tangency_speed = pass_list.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if tangency_speed < TANGENCY_MIN {
        reasons.push(format!("tangential passage, |nu'| = {tangency_speed:e}"));
    }
    let collision_flag = collision_start || pass_list.iter().any(|p| p.1 < 1e-8);

    let cross_check_residual = cross_check(leaf, params, y0, &fwd, opts.tol)?
        .max(cross_check(leaf, params, y0, &bwd, opts.tol)?);
    if !(cross_check_residual <= CROSS_CHECK_TOL) {
        reasons.push(format!("full flow departs from the leaf orbit by {cross_check_residual:e}"));
    }

    Ok(OrbitReport {
        phase,
        sign,
        checkpoints_fwd,
        checkpoints_bwd,
        rotation_count,
        collision_flag,
        tangency_speed,
        cross_check_residual,
        pass: reasons.is_empty(),
        reasons,
    })
}

/// Runs `n_orbits` leaf orbits with seeded random `lambda` phases and
/// alternating `p_nu` signs and reports on each. The report is returned
/// whatever the verdict.
pub fn homoclinic_report(
    c: f64,
    params: &SystemParams,
    component: Component,
    n_orbits: usize,
    opts: &HomoclinicOptions,
) -> Result<HomoclinicReport> {
    let component = leaf_component(component)?;
    if opts.checkpoints.is_empty() || opts.checkpoints.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::Validation("checkpoints must be positive and finite".into()));
    }
    let leaf = Leaf::new(c, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let runs: Vec<(f64, Sign)> = (0..n_orbits)
        .map(|i| (rng.random::<f64>(), if i % 2 == 0 { Sign::Plus } else { Sign::Minus }))
        .collect();
    let orbits = runs
        .par_iter()
        .map(|&(phase, sign)| {
            let y0 = leaf_start(&leaf, component, phase, sign)?;
            check_orbit(&leaf, params, component, y0, phase, sign, opts, false)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomoclinicReport::new(params, c, component, orbits))
}

/// As [`homoclinic_report`] with default options, failing with the data
/// of the first failing orbit.
pub fn verify_homoclinic(c: f64, params: &SystemParams, component: Component, n_orbits: usize) -> Result<HomoclinicReport> {
    homoclinic_report(c, params, component, n_orbits, &HomoclinicOptions::default())?.into_checked()
}

/// Squared momenta of the leaf `g_c` at the primaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionMomenta {
    /// At `lambda = 0`: `(c^2 + 2c + delta^2) / (2c)`.
    pub p_lambda_sq: f64,
    /// At `cos nu = 1`: `(c + delta)^2 / (-2c)`.
    pub p_nu_sq_moon: f64,
    /// At `cos nu = -1`: `(c - delta)^2 / (-2c)`.
    pub p_nu_sq_earth: f64,
}

pub fn collision_momenta(c: f64, params: &SystemParams) -> Result<CollisionMomenta> {
    check_band(c, params)?;
    let d = params.delta();
    Ok(CollisionMomenta {
        p_lambda_sq: (c * c + 2.0 * c + d * d) / (2.0 * c),
        p_nu_sq_moon: (c + d).powi(2) / (-2.0 * c),
        p_nu_sq_earth: (c - d).powi(2) / (-2.0 * c),
    })
}

#[derive(Debug, Clone)]
pub struct CollisionHomoclinic {
    pub start: PhaseState,
    pub forward: Trajectory,
    pub backward: Trajectory,
    pub report: HomoclinicReport,
}

/// The leaf orbit through a primary, started exactly at the collision with
/// momenta from [`collision_momenta`] and the given signs.
pub fn collision_homoclinic(
    c: f64,
    params: &SystemParams,
    focus: Focus,
    signs: (Sign, Sign),
) -> Result<CollisionHomoclinic> {
    let leaf = Leaf::new(c, params)?;
    let m = collision_momenta(c, params)?;
    let (component, nu, p_nu_sq) = match focus {
        Focus::Earth => (Component::Earth, PI, m.p_nu_sq_earth),
        Focus::Moon => (Component::Moon, 0.0, m.p_nu_sq_moon),
    };
    let y0 = [0.0, nu, signs.0.value() * m.p_lambda_sq.sqrt(), signs.1.value() * p_nu_sq.sqrt()];
    let opts = HomoclinicOptions::default();
    let orbit = check_orbit(&leaf, params, component, y0, 0.5, signs.1, &opts, true)?;
    let horizon = CHECKPOINTS[CHECKPOINTS.len() - 1];
    let forward = integrate_leaf(&leaf, params, y0, signs.1, horizon, opts.tol)?;
    let backward = integrate_leaf(&leaf, params, y0, signs.1, -horizon, opts.tol)?;
    let report = HomoclinicReport::new(params, c, component, vec![orbit]).into_checked()?;
    Ok(CollisionHomoclinic { start: PhaseState::doubled_from(y0), forward, backward, report })
}
