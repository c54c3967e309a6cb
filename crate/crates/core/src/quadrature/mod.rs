//! Periods of the two separated oscillations, rotation numbers, and
//! torus families.
//!
//! In the doubled chart each subsystem is a one-degree-of-freedom motion
//! with `lambda' = 4 p_lambda` and `nu' = 4 p_nu`, so a libration between
//! simple turning points `a < b` has period
//!
//! ```text
//! T = 2 * integral_a^b dx / (4 |p(x)|)
//! ```
//!
//! Writing `p(x)^2 = (x - a)(b - x) R(x)` with `R > 0` on `[a, b]` and
//! substituting `x = m + w sin(theta)` turns this into
//! `2 * integral_{-pi/2}^{pi/2} dtheta / (4 sqrt(R))`, a smooth integrand.
//! `R` is assembled from `sinh(u)/u` and `sin(u)/u` factors so that no
//! difference of nearly equal numbers is taken near the turning points.

mod family;

pub use family::{gcd, solve_family, FamilySample, NoRootNote, TorusFamily};

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use crate::bifurcation::{
    classify, quadratic_roots, solve_roots, Component, EnergyMomentum, Region, RootPair,
};
use crate::bifurcation::Interval;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Relative accuracy of the period quadratures.
pub const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subsystem {
    Lambda,
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CellKind {
    /// Symmetric libration through `0` (`lambda` whenever `xi` reaches 1;
    /// `nu` on the Moon side).
    ThroughOrigin,
    /// One-sided `lambda` libration `[lambda1, lambda2]`, `lambda1 > 0`.
    OnArc,
    /// `nu` libration through `pi` on the Earth side.
    ThroughPi,
    /// `nu` circulating through the whole circle.
    Rotation,
}

/// Where one subsystem moves, without its period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellGeometry {
    pub which: Subsystem,
    pub kind: CellKind,
    /// Turning values in the subsystem coordinate; `[-pi, pi]` for rotations.
    pub turning_values: Interval,
    /// The root of the momentum polynomial that is not a turning point:
    /// `xi1 - 1` for a `lambda` cell through 0, `eta2` on the Earth side,
    /// `eta1` on the Moon side; unused otherwise.
    aux: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsystemCell {
    pub which: Subsystem,
    pub kind: CellKind,
    pub turning_values: Interval,
    /// Full period in the regularized time `s`.
    pub period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationNumber {
    pub value: f64,
    pub point: EnergyMomentum,
    pub component: Component,
}

fn acosh_1p(u: f64) -> f64 {
    let u = u.max(0.0);
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// `sinh(u) / u`.
fn shc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 + u * u / 6.0 * (1.0 + u * u / 20.0)
    } else {
        u.sinh() / u
    }
}

/// `sin(u) / u`.
fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0 * (1.0 - u * u / 20.0)
    } else {
        u.sin() / u
    }
}

fn sorted_real(pair: RootPair) -> Option<(f64, f64)> {
    match pair {
        RootPair::Real(a, b) => Some((a, b)),
        RootPair::Complex => None,
    }
}

/// The `lambda` cell alone. It only depends on `p(xi)`, so it is regular
/// on the leaves where the `nu` cell degenerates.
pub fn lambda_cell(point: &EnergyMomentum, params: &SystemParams) -> Result<CellGeometry> {
    let (g, c) = (point.g, point.c);
    let inadmissible = |reason: &str| Error::InadmissiblePoint { g, c, reason: reason.to_string() };
    let xi = solve_roots(point, params)
        .xi_range
        .ok_or_else(|| inadmissible("no admissible xi (region Forbidden)"))?;
    // xi - 1 as roots of p(1 + u), accurate near xi = 1
    let (u1, u2) = sorted_real(quadratic_roots(c, c + 1.0, c + 2.0 + g))
        .ok_or_else(|| inadmissible("complex xi roots"))?;
    Ok(if xi.lo == 1.0 {
        let l2 = acosh_1p(u2);
        CellGeometry {
            which: Subsystem::Lambda,
            kind: CellKind::ThroughOrigin,
            turning_values: Interval { lo: -l2, hi: l2 },
            aux: u1,
        }
    } else {
        CellGeometry {
            which: Subsystem::Lambda,
            kind: CellKind::OnArc,
            turning_values: Interval { lo: acosh_1p(u1), hi: acosh_1p(u2) },
            aux: 0.0,
        }
    })
}

/// Cells of both subsystems at `point`. Critical points are not screened
/// out here; see [`subsystem_cells`] for the checked version.
pub fn cell_geometry(
    point: &EnergyMomentum,
    params: &SystemParams,
    component: Component,
) -> Result<(CellGeometry, CellGeometry)> {
    let (g, c, d) = (point.g, point.c, params.delta());
    let roots = solve_roots(point, params);
    let inadmissible = |reason: &str| Error::InadmissiblePoint { g, c, reason: reason.to_string() };
    let lambda = lambda_cell(point, params)?;
    if roots.eta_ranges.is_empty() {
        return Err(inadmissible("no admissible eta (region Forbidden)"));
    }

    let nu = if roots.eta_full() {
        CellGeometry {
            which: Subsystem::Nu,
            kind: CellKind::Rotation,
            turning_values: Interval { lo: -PI, hi: PI },
            aux: 0.0,
        }
    } else {
        let RootPair::Real(eta1, eta2) = roots.eta_roots else {
            unreachable!("partial eta set needs real roots")
        };
        let side = match component {
            Component::Both => match (roots.earth_eta(), roots.moon_eta()) {
                (Some(_), Some(_)) => {
                    return Err(Error::Validation(format!(
                        "(g, c) = ({g}, {c}) has Earth and Moon tori; choose a component"
                    )))
                }
                (Some(_), None) => Component::Earth,
                _ => Component::Moon,
            },
            other => other,
        };
        match side {
            Component::Earth => {
                roots.earth_eta().ok_or_else(|| inadmissible("no Earth-side eta interval"))?;
                // eta + 1 as roots of q(-1 + v)
                let (v1, _) = sorted_real(quadratic_roots(c, d - c, c - 2.0 * d + g))
                    .ok_or_else(|| inadmissible("complex eta roots"))?;
                let nu1 = PI - 2.0 * (0.5 * v1.max(0.0)).sqrt().asin();
                CellGeometry {
                    which: Subsystem::Nu,
                    kind: CellKind::ThroughPi,
                    turning_values: Interval { lo: nu1, hi: TAU - nu1 },
                    aux: eta2,
                }
            }
            _ => {
                roots.moon_eta().ok_or_else(|| inadmissible("no Moon-side eta interval"))?;
                // 1 - eta as roots of q(1 - w)
                let (w2, _) = sorted_real(quadratic_roots(c, -(c + d), c + 2.0 * d + g))
                    .ok_or_else(|| inadmissible("complex eta roots"))?;
                let nu2 = 2.0 * (0.5 * w2.max(0.0)).sqrt().asin();
                CellGeometry {
                    which: Subsystem::Nu,
                    kind: CellKind::ThroughOrigin,
                    turning_values: Interval { lo: -nu2, hi: nu2 },
                    aux: eta1,
                }
            }
        }
    };
    Ok((lambda, nu))
}

impl CellGeometry {
    /// Whether a turning point is a double root (or the cell has no width),
    /// so that the period is infinite or meaningless.
    pub fn is_degenerate(&self, point: &EnergyMomentum, params: &SystemParams) -> bool {
        const EPS: f64 = 1e-14;
        let iv = self.turning_values;
        match (self.which, self.kind) {
            (Subsystem::Lambda, CellKind::ThroughOrigin) => iv.hi <= EPS || self.aux >= -EPS,
            (Subsystem::Lambda, _) => iv.lo <= EPS || iv.width() <= EPS,
            (Subsystem::Nu, CellKind::Rotation) => {
                let q = |eta: f64| point.c * eta * eta + 2.0 * params.delta() * eta + point.g;
                let vertex = -params.delta() / point.c;
                let interior_min = if vertex.abs() < 1.0 { q(vertex) } else { f64::NEG_INFINITY };
                q(-1.0) >= -EPS || q(1.0) >= -EPS || interior_min >= -EPS
            }
            (Subsystem::Nu, CellKind::ThroughPi) => iv.width() <= EPS || iv.lo.cos() - self.aux >= -EPS,
            (Subsystem::Nu, _) => iv.width() <= EPS || iv.hi.cos() - self.aux <= EPS,
        }
    }

    /// `p^2 / ((x - a)(b - x))` for librations, `p^2` for rotations.
    fn reduced(&self, point: &EnergyMomentum, params: &SystemParams, x: f64) -> f64 {
        let c = point.c;
        let Interval { lo: a, hi: b } = self.turning_values;
        match (self.which, self.kind) {
            (Subsystem::Lambda, CellKind::ThroughOrigin) => {
                let cosh_m1 = 2.0 * (0.5 * x).sinh().powi(2);
                (-c / 4.0) * (cosh_m1 - self.aux) * shc(0.5 * (x + b)) * shc(0.5 * (x - b))
            }
            (Subsystem::Lambda, _) => {
                (-c / 2.0)
                    * (0.5 * (x + a)).sinh()
                    * (0.5 * (x + b)).sinh()
                    * shc(0.5 * (x - a))
                    * shc(0.5 * (x - b))
            }
            (Subsystem::Nu, CellKind::Rotation) => {
                let e = x.cos();
                -(c * e * e + 2.0 * params.delta() * e + point.g) / 2.0
            }
            (Subsystem::Nu, CellKind::ThroughPi) => {
                (c / 4.0) * (x.cos() - self.aux) * sinc(0.5 * (b - x)) * sinc(0.5 * (x - a))
            }
            (Subsystem::Nu, _) => {
                (-c / 4.0) * (x.cos() - self.aux) * sinc(0.5 * (b - x)) * sinc(0.5 * (x - a))
            }
        }
    }

    /// Integrand of the period after the turning-point substitution, as a
    /// function of `theta` in `[-pi/2, pi/2]` (librations) or of `nu`
    /// (rotations).
    pub fn integrand(&self, point: &EnergyMomentum, params: &SystemParams, theta: f64) -> f64 {
        let iv = self.turning_values;
        if self.kind == CellKind::Rotation {
            return 1.0 / (4.0 * self.reduced(point, params, theta).sqrt());
        }
        let x = iv.mid() + 0.5 * iv.width() * theta.sin();
        2.0 / (4.0 * self.reduced(point, params, x).sqrt())
    }

    /// Period in `s`; fails with [`Error::DegenerateCell`] on a double root.
    pub fn period(&self, point: &EnergyMomentum, params: &SystemParams) -> Result<f64> {
        if self.is_degenerate(point, params) {
            return Err(Error::DegenerateCell(format!(
                "{:?} cell {:?} at (g, c) = ({}, {})",
                self.which, self.turning_values, point.g, point.c
            )));
        }
        let f = |t: f64| self.integrand(point, params, t);
        let value = if self.kind == CellKind::Rotation {
            adaptive_gauss(&f, -PI, PI, QUAD_TOL)
        } else {
            adaptive_gauss(&f, -FRAC_PI_2, FRAC_PI_2, QUAD_TOL)
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::DegenerateCell(format!("period {value} at (g, c) = ({}, {})", point.g, point.c)));
        }
        Ok(value)
    }
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20.try_into().expect("nonzero")))
}

/// Globally adaptive bisection with a 20-point Gauss–Legendre rule.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let gl = rule();
    let mut stack = vec![(a, b, gl.integrate(a, b, f), 0u32)];
    let mut total = 0.0;
    let mut compensation = 0.0;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl.integrate(lo, mid, f);
        let right = gl.integrate(mid, hi, f);
        let refined = left + right;
        if (refined - whole).abs() <= rel_tol * refined.abs() || depth >= 48 {
            // Kahan summation keeps the many small pieces exact.
            let y = refined - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}

/// Cells with periods at a regular point.
pub fn subsystem_cells(
    point: &EnergyMomentum,
    params: &SystemParams,
    component: Component,
) -> Result<(SubsystemCell, SubsystemCell)> {
    let label = classify(point, params);
    if label.kind == Region::Forbidden {
        return Err(Error::InadmissiblePoint {
            g: point.g,
            c: point.c,
            reason: "region Forbidden".into(),
        });
    }
    if matches!(label.kind, Region::OnCurve(_) | Region::SaddleValue) {
        return Err(Error::CriticalPoint { g: point.g, c: point.c, label: label.name() });
    }
    let (lg, ng) = cell_geometry(point, params, component)?;
    let lp = lg.period(point, params)?;
    let np = ng.period(point, params)?;
    let cell = |geo: CellGeometry, period| SubsystemCell {
        which: geo.which,
        kind: geo.kind,
        turning_values: geo.turning_values,
        period,
    };
    Ok((cell(lg, lp), cell(ng, np)))
}

/// Period of a cell; provided for symmetry with [`subsystem_cells`].
pub fn cell_period(cell: &CellGeometry, point: &EnergyMomentum, params: &SystemParams) -> Result<f64> {
    cell.period(point, params)
}

/// `R = T_nu / T_lambda`, both full periods in the doubled chart.
pub fn rotation_number(
    point: &EnergyMomentum,
    params: &SystemParams,
    component: Component,
) -> Result<RotationNumber> {
    let (lc, nc) = subsystem_cells(point, params, component)?;
    let resolved = match nc.kind {
        CellKind::ThroughPi => Component::Earth,
        CellKind::ThroughOrigin => Component::Moon,
        _ => Component::Both,
    };
    Ok(RotationNumber { value: nc.period / lc.period, point: *point, component: resolved })
}

fn refine(step: &crate::dynamics::rk::DenseStep<4>, f: impl Fn(&[f64; 4]) -> f64) -> f64 {
    let (a, b) = (step.t0, step.t1());
    let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
    find_root_brent(a, b, |t| f(&step.eval(t)), &mut conv).unwrap_or_else(|_| {
        // linear fallback on the step chord
        let (fa, fb) = (f(&step.y0()), f(&step.y1()));
        a + (b - a) * fa / (fa - fb)
    })
}

/// Times where coordinate `index` crosses zero downwards, refined on the
/// dense output.
pub fn descending_crossings(traj: &Trajectory, index: usize) -> Vec<f64> {
    traj.steps()
        .iter()
        .filter(|st| st.y0()[index] > 0.0 && st.y1()[index] <= 0.0)
        .map(|st| refine(st, |y| y[index]))
        .collect()
}

/// Times where the unwrapped `nu` passes a multiple of `2 pi`.
pub fn full_turn_crossings(traj: &Trajectory) -> Vec<f64> {
    let mut out = Vec::new();
    for st in traj.steps() {
        let (k0, k1) = ((st.y0()[1] / TAU).floor(), (st.y1()[1] / TAU).floor());
        if k0 != k1 {
            let target = TAU * k0.max(k1);
            out.push(refine(st, |y| y[1] - target));
        }
    }
    out
}

fn mean_gap(times: &[f64], what: &str) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::Validation(format!(
            "trajectory too short: {} {what} crossings",
            times.len()
        )));
    }
    Ok((times[times.len() - 1] - times[0]).abs() / (times.len() - 1) as f64)
}

/// `lambda` period measured from descending zeros of `p_lambda`.
pub fn measured_lambda_period(traj: &Trajectory) -> Result<f64> {
    mean_gap(&descending_crossings(traj, 2), "p_lambda")
}

/// `nu` period: descending zeros of `p_nu` for librations, full turns of
/// the unwrapped angle for rotations.
pub fn measured_nu_period(traj: &Trajectory, kind: CellKind) -> Result<f64> {
    if kind == CellKind::Rotation {
        mean_gap(&full_turn_crossings(traj), "full-turn")
    } else {
        mean_gap(&descending_crossings(traj, 3), "p_nu")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quarter() -> SystemParams {
        SystemParams::new(0.25).unwrap()
    }

    fn pt(g: f64, c: f64) -> EnergyMomentum {
        EnergyMomentum::new(g, c).unwrap()
    }

    /// Direct period integral by tanh-sinh-free brute force: midpoint rule in
    /// `theta` on the naive `|p|` (no cancellation-free factors).
    fn naive_period(lo: f64, hi: f64, p2: impl Fn(f64) -> f64) -> f64 {
        let n = 400_000;
        let (m, w) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut acc = 0.0;
        for k in 0..n {
            let th = -FRAC_PI_2 + PI * (k as f64 + 0.5) / n as f64;
            let x = m + w * th.sin();
            acc += w * th.cos() / (4.0 * p2(x).max(1e-300).sqrt());
        }
        2.0 * acc * PI / n as f64
    }

    #[test]
    fn satellite_cells() {
        let p = quarter();
        let point = pt(0.3, -2.2);
        let (l, n) = subsystem_cells(&point, &p, Component::Earth).unwrap();
        assert_eq!(l.kind, CellKind::ThroughOrigin);
        let xi2 = (-1.0 - 1.66f64.sqrt()) / -2.2;
        assert_relative_eq!(l.turning_values.hi, xi2.acosh(), epsilon = 1e-12);
        assert_relative_eq!(l.turning_values.lo, -xi2.acosh(), epsilon = 1e-12);
        assert_eq!(n.kind, CellKind::ThroughPi);
        let eta1 = (-0.5 + 0.91f64.sqrt()) / -2.2;
        assert_relative_eq!(n.turning_values.lo, eta1.acos(), epsilon = 1e-12);
        assert_relative_eq!(n.turning_values.mid(), PI, epsilon = 1e-14);
        // eta = -1 is admissible as well: q(-1) = c - 2 delta + g < 0
        assert!(point.c - 2.0 * p.delta() + point.g < 0.0);

        let (_, moon) = subsystem_cells(&point, &p, Component::Moon).unwrap();
        assert_eq!(moon.kind, CellKind::ThroughOrigin);
    }

    #[test]
    fn lemniscate_and_planetary_cells() {
        let p = quarter();
        let (_, n) = subsystem_cells(&pt(-0.3, -1.2), &p, Component::Both).unwrap();
        assert_eq!(n.kind, CellKind::Rotation);
        let (l, n) = subsystem_cells(&pt(-1.7, -0.5 + 1e-3), &p, Component::Both).unwrap();
        assert_eq!(l.kind, CellKind::OnArc);
        assert!(l.turning_values.lo > 0.0);
        assert_eq!(n.kind, CellKind::Rotation);
    }

    #[test]
    fn both_components_need_a_choice() {
        assert!(matches!(
            subsystem_cells(&pt(0.3, -2.2), &quarter(), Component::Both),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn periods_match_naive_quadrature() {
        let p = quarter();
        let (g, c, d) = (0.3, -2.2, p.delta());
        let point = pt(g, c);
        let (lg, ng) = cell_geometry(&point, &p, Component::Earth).unwrap();
        let tl = lg.period(&point, &p).unwrap();
        let naive_l = naive_period(lg.turning_values.lo, lg.turning_values.hi, |l: f64| {
            (c * l.cosh().powi(2) + 2.0 * l.cosh() + g) / 2.0
        });
        assert_relative_eq!(tl, naive_l, max_relative = 1e-6);
        let tn = ng.period(&point, &p).unwrap();
        let naive_n = naive_period(ng.turning_values.lo, ng.turning_values.hi, |n: f64| {
            -(c * n.cos().powi(2) + 2.0 * d * n.cos() + g) / 2.0
        });
        assert_relative_eq!(tn, naive_n, max_relative = 1e-6);
    }

    #[test]
    fn harmonic_limit_near_ellipse() {
        let p = quarter();
        let c: f64 = -0.7;
        let limit = PI / (2.0 * (c * c - 1.0) / c).sqrt();
        let mut prev = f64::INFINITY;
        for off in [1e-2, 1e-4, 1e-6] {
            let point = pt(1.0 / c + off, c);
            let (l, _) = subsystem_cells(&point, &p, Component::Both).unwrap();
            assert_eq!(l.kind, CellKind::OnArc);
            let err = (l.period - limit).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev / limit < 1e-5);
    }

    #[test]
    fn period_diverges_at_hyperbolic_orbit() {
        let p = quarter();
        let c = -1.2;
        let gc = p.delta().powi(2) / c;
        let periods: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|off| subsystem_cells(&pt(gc + off, c), &p, Component::Earth).unwrap().1.period)
            .collect();
        assert!(periods[0] < periods[1] && periods[1] < periods[2]);
        // logarithmic growth: equal increments per decade
        let (d1, d2) = (periods[1] - periods[0], periods[2] - periods[1]);
        assert_relative_eq!(d1, d2, max_relative = 0.05);
    }

    #[test]
    fn on_curve_is_rejected() {
        let p = quarter();
        let c = -1.2;
        let on = pt(p.delta().powi(2) / c, c);
        assert!(matches!(
            subsystem_cells(&on, &p, Component::Earth),
            Err(Error::CriticalPoint { .. })
        ));
        assert!(matches!(
            subsystem_cells(&pt(-2.0, -1.2), &p, Component::Earth),
            Err(Error::InadmissiblePoint { .. })
        ));
    }

    #[test]
    fn substituted_integrand_is_bounded_at_ends() {
        let p = quarter();
        for (g, c, comp) in [(0.3, -2.2, Component::Earth), (0.3, -2.2, Component::Moon), (-1.7, -0.499, Component::Both)] {
            let point = pt(g, c);
            let (l, n) = cell_geometry(&point, &p, comp).unwrap();
            for cell in [l, n] {
                if cell.kind == CellKind::Rotation {
                    continue;
                }
                let inner = cell.integrand(&point, &p, 0.0);
                for th in [FRAC_PI_2, FRAC_PI_2 - 1e-9, -FRAC_PI_2 + 1e-12, -FRAC_PI_2] {
                    let v = cell.integrand(&point, &p, th);
                    assert!(v.is_finite() && v > 0.0 && v < 100.0 * inner, "{cell:?} {th} {v}");
                }
            }
        }
    }

    #[test]
    fn equal_mass_components_agree() {
        let p = SystemParams::new(0.5).unwrap();
        for (g, c) in [(1.0, -2.5), (1.5, -3.0), (0.1, -2.05)] {
            let e = rotation_number(&pt(g, c), &p, Component::Earth).unwrap().value;
            let m = rotation_number(&pt(g, c), &p, Component::Moon).unwrap().value;
            assert_relative_eq!(e, m, max_relative = 1e-10);
        }
    }

    #[test]
    fn adaptive_gauss_handles_peaks() {
        let f = |x: f64| 1.0 / (x * x + 1e-6);
        let exact = 2.0 * (1.0 / 1e-3) * (1.0f64 / 1e-3).atan();
        assert_relative_eq!(adaptive_gauss(&f, -1.0, 1.0, 1e-13), exact, max_relative = 1e-11);
    }
}
