//! Closure and winding counts of periodic orbits on rational tori.
//!
//! On a torus with rotation number `R = T_nu / T_lambda = k / l` (`k`, `l`
//! coprime) every orbit closes after `k` periods of `lambda` and `l`
//! periods of `nu`. Closure is located on the dense output near the
//! predicted time and the cycles are then counted twice, by zero crossings
//! of the momentum and by the winding angle in the phase plane.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::bifurcation::{classify, Component, EnergyMomentum, Region};
use crate::dynamics::{initial_state, integrate, wrap_angle, PhaseChoice, Trajectory};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::quadrature::{cell_geometry, gcd, rotation_number, subsystem_cells, CellKind};

/// Max-norm closure tolerance.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Accepted `|k/l - R|`.
pub const ROTATION_TOL: f64 = 1e-8;
/// Half-width of the closure search window, relative to the predicted time.
pub const CLOSURE_WINDOW: f64 = 0.05;

/// Max-norm distance between doubled states, `nu` compared on the circle.
pub fn phase_distance(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (a[0] - b[0])
        .abs()
        .max(wrap_angle(a[1] - b[1]).abs())
        .max((a[2] - b[2]).abs())
        .max((a[3] - b[3]).abs())
}

fn squared_gap(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let d = [a[0] - b[0], wrap_angle(a[1] - b[1]), a[2] - b[2], a[3] - b[3]];
    d.iter().map(|x| x * x).sum()
}

/// Distance from the start at time `s`, or `None` outside the trajectory.
pub fn closure_residual_at(traj: &Trajectory, s: f64) -> Option<f64> {
    Some(phase_distance(&traj.eval(s)?, &traj.samples()[0].state))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Closure {
    pub time: f64,
    pub residual: f64,
}

/// Nearest return to the initial state within `predicted (1 +- 5%)`.
pub fn detect_closure(traj: &Trajectory, predicted: f64, tol: f64) -> Result<Closure> {
    if !(predicted > 0.0 && predicted.is_finite()) {
        return Err(Error::Validation(format!("predicted closure time {predicted} must be positive")));
    }
    let y0 = traj.samples()[0].state;
    let (lo, hi) = (predicted * (1.0 - CLOSURE_WINDOW), predicted * (1.0 + CLOSURE_WINDOW));
    if traj.final_s() < hi {
        return Err(Error::Validation(format!(
            "trajectory ends at s = {} before the closure window [{lo}, {hi}]",
            traj.final_s()
        )));
    }
    let gap = |s: f64| traj.eval(s).map_or(f64::INFINITY, |y| squared_gap(&y, &y0));
    // coarse scan, then golden-section refinement around the best node
    let n = 4000;
    let h = (hi - lo) / n as f64;
    let best = (0..=n)
        .map(|i| lo + h * i as f64)
        .min_by(|a, b| gap(*a).total_cmp(&gap(*b)))
        .expect("nonempty scan");
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - r * (b - a), a + r * (b - a));
    let (mut f1, mut f2) = (gap(x1), gap(x2));
    for _ in 0..100 {
        if f1 < f2 {
            (b, x2, f2) = (x2, x1, f1);
            x1 = b - r * (b - a);
            f1 = gap(x1);
        } else {
            (a, x1, f1) = (x1, x2, f2);
            x2 = a + r * (b - a);
            f2 = gap(x2);
        }
    }
    let time = if gap(best) < f1.min(f2) { best } else if f1 < f2 { x1 } else { x2 };
    let residual = closure_residual_at(traj, time).unwrap_or(f64::INFINITY);
    if residual > tol {
        return Err(Error::NoClosure { residual, tol });
    }
    Ok(Closure { time, residual })
}

/// Cycle counts of both subsystems over `[0, closure_time]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindingCounts {
    /// Completed `(lambda, p_lambda)` cycles.
    pub k: u32,
    /// Completed `(nu, p_nu)` cycles.
    pub l: u32,
}

/// Times in `(0, end]` where coordinate `index` changes sign downwards.
fn descending_zeros(traj: &Trajectory, index: usize, end: f64) -> u32 {
    traj.steps()
        .iter()
        .filter(|st| st.t0 < end)
        .map(|st| {
            let y1 = if st.t1() <= end { st.y1() } else { st.eval(end) };
            u32::from(st.y0()[index] > 0.0 && y1[index] <= 0.0)
        })
        .sum()
}

/// Net turns of `(x - center, p)` around `(center, 0)` over `[0, end]`.
fn phase_turns(traj: &Trajectory, x: usize, p: usize, center: f64, end: f64) -> f64 {
    let angle = |y: &[f64; 4]| (-y[p]).atan2(wrap_angle(y[x] - center));
    let mut prev = angle(&traj.samples()[0].state);
    let mut total = 0.0;
    for st in traj.steps().iter().filter(|st| st.t0 < end) {
        // a few dense points per step keep each increment below pi
        for j in 1..=4 {
            let s = (st.t0 + st.h * j as f64 / 4.0).min(end);
            let a = angle(&st.eval(s));
            total += wrap_angle(a - prev);
            prev = a;
        }
    }
    total / TAU
}

fn integral_count(turns: f64, what: &str) -> Result<u32> {
    let n = turns.abs().round();
    if (turns.abs() - n).abs() > 0.05 {
        return Err(Error::InconsistentCounts(format!("{what}: {turns} turns is not a whole number")));
    }
    Ok(n as u32)
}

/// Counts `lambda` and `nu` cycles over one closure, each by two methods,
/// failing with [`Error::InconsistentCounts`] when they disagree. Counts are
/// returned as measured, not reduced.
pub fn winding_counts(
    traj: &Trajectory,
    closure_time: f64,
    params: &SystemParams,
    component: Component,
) -> Result<WindingCounts> {
    let point = traj.start;
    let (lc, nc) = cell_geometry(&point, params, component)?;

    let k_zeros = descending_zeros(traj, 2, closure_time);
    let k_turns = integral_count(phase_turns(traj, 0, 2, lc.turning_values.mid(), closure_time), "lambda")?;
    if k_zeros != k_turns {
        return Err(Error::InconsistentCounts(format!(
            "lambda: {k_zeros} p_lambda zeros but {k_turns} phase turns"
        )));
    }

    let (l_a, l_b) = if nc.kind == CellKind::Rotation {
        let end = traj.eval(closure_time).ok_or_else(|| Error::Validation("closure past the end".into()))?;
        let unwrapped = integral_count((end[1] - traj.samples()[0].state[1]) / TAU, "nu")?;
        let crossings = crate::quadrature::full_turn_crossings(traj).iter().filter(|&&s| s <= closure_time).count();
        (unwrapped, crossings as u32)
    } else {
        let zeros = descending_zeros(traj, 3, closure_time);
        let center = if nc.kind == CellKind::ThroughPi { PI } else { 0.0 };
        (zeros, integral_count(phase_turns(traj, 1, 3, center, closure_time), "nu")?)
    };
    if l_a != l_b {
        return Err(Error::InconsistentCounts(format!("nu: {l_a} by one count, {l_b} by the other")));
    }
    Ok(WindingCounts { k: k_zeros, l: l_a })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotCertificate {
    pub point: EnergyMomentum,
    pub component: Component,
    /// The torus family, `R = k / l`.
    pub k: u32,
    pub l: u32,
    pub k_observed: u32,
    pub l_observed: u32,
    pub rotation_number: f64,
    pub closure_time: f64,
    pub closure_residual: f64,
    pub rotation_residual: f64,
    pub pass: bool,
}

/// Integrates an orbit on the torus `point` (which should carry `R = k/l`),
/// finds its closure and counts its windings. Only energies below `cJ`
/// are accepted.
pub fn certify_knot(
    point: &EnergyMomentum,
    params: &SystemParams,
    k: u32,
    l: u32,
    choice: &PhaseChoice,
    tol: f64,
) -> Result<KnotCertificate> {
    if point.c >= params.c_j() {
        return Err(Error::Band { c: point.c, lo: f64::NEG_INFINITY, hi: params.c_j() });
    }
    if k == 0 || l == 0 || gcd(k, l) != 1 {
        return Err(Error::Validation(format!("(k, l) = ({k}, {l}) must be coprime positive integers")));
    }
    let label = classify(point, params);
    if !matches!(label.kind, Region::S | Region::SPrime) {
        return Err(Error::InadmissiblePoint {
            g: point.g,
            c: point.c,
            reason: format!("knot certificates need a torus of S or S', got {}", label.name()),
        });
    }
    let component = choice.component;
    let r = rotation_number(point, params, component)?;
    let (lambda_cell, _) = subsystem_cells(point, params, component)?;
    let predicted = k as f64 * lambda_cell.period;
    let start = initial_state(point, params, choice)?;
    let traj = integrate(&start, params, point.c, predicted * (1.0 + 2.0 * CLOSURE_WINDOW), tol)?;
    let closure = detect_closure(&traj, predicted, CLOSURE_TOL)?;
    let counts = winding_counts(&traj, closure.time, params, component)?;
    let rotation_residual = (counts.k as f64 / counts.l.max(1) as f64 - r.value).abs();
    let pass = counts.l > 0
        && gcd(counts.k, counts.l) == 1
        && closure.residual <= CLOSURE_TOL
        && rotation_residual <= ROTATION_TOL;
    Ok(KnotCertificate {
        point: *point,
        component,
        k,
        l,
        k_observed: counts.k,
        l_observed: counts.l,
        rotation_number: r.value,
        closure_time: closure.time,
        closure_residual: closure.residual,
        rotation_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::solve_family;

    fn quarter() -> SystemParams {
        SystemParams::new(0.25).unwrap()
    }

    fn torus(k: u32, l: u32) -> EnergyMomentum {
        let fam = solve_family(k, l, &quarter(), &[-2.2], Component::Earth).unwrap();
        let s = fam.samples[0];
        EnergyMomentum::new(s.g, s.c).unwrap()
    }

    #[test]
    fn certifies_attainable_family() {
        let p = quarter();
        let point = torus(12, 11);
        let cert = certify_knot(&point, &p, 12, 11, &PhaseChoice::default(), 1e-12).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert_eq!((cert.k_observed, cert.l_observed), (12, 11));
        assert!(cert.closure_residual <= CLOSURE_TOL);
    }

    #[test]
    fn counts_do_not_depend_on_phase() {
        let p = quarter();
        let point = torus(10, 9);
        for (a, b) in [(0.2, 0.7), (0.8, 0.3), (0.45, 0.55)] {
            let choice = PhaseChoice { lambda_phase: a, nu_phase: b, ..Default::default() };
            let cert = certify_knot(&point, &p, 10, 9, &choice, 1e-12).unwrap();
            assert_eq!((cert.k_observed, cert.l_observed), (10, 9));
        }
    }

    #[test]
    fn irrational_torus_does_not_close() {
        let p = quarter();
        let point = EnergyMomentum::new(0.3, -2.2).unwrap();
        let (lc, _) = subsystem_cells(&point, &p, Component::Earth).unwrap();
        let start = initial_state(&point, &p, &PhaseChoice::default()).unwrap();
        let traj = integrate(&start, &p, point.c, 11.0 * lc.period, 1e-12).unwrap();
        for n in 1..=10 {
            assert!(matches!(
                detect_closure(&traj, n as f64 * lc.period, CLOSURE_TOL),
                Err(Error::NoClosure { .. })
            ));
        }
    }

    #[test]
    fn half_period_is_not_a_closure() {
        let p = quarter();
        let point = torus(10, 9);
        let (lc, _) = subsystem_cells(&point, &p, Component::Earth).unwrap();
        let start = initial_state(&point, &p, &PhaseChoice::default()).unwrap();
        let traj = integrate(&start, &p, point.c, 11.0 * lc.period, 1e-12).unwrap();
        assert!(closure_residual_at(&traj, 5.0 * lc.period).unwrap() > 1e-2);
    }

    #[test]
    fn refuses_energies_above_cj() {
        let p = quarter();
        let point = EnergyMomentum::new(-0.3, -1.2).unwrap();
        assert!(matches!(
            certify_knot(&point, &p, 1, 1, &PhaseChoice::default(), 1e-12),
            Err(Error::Band { .. })
        ));
    }
}
