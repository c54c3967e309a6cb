//! Rotation numbers from the period integrals, checked against periods
//! measured on integrated orbits.

use twocenters::bifurcation::{classify, Component, EnergyMomentum};
use twocenters::dynamics::{initial_state, integrate, PhaseChoice};
use twocenters::quadrature::{measured_lambda_period, measured_nu_period, rotation_number, subsystem_cells};
use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    let params = SystemParams::new(0.25)?;
    let points = [(1.0, -2.5, Component::Earth), (1.0, -2.5, Component::Moon), (0.3, -1.2, Component::Both), (-0.5, -0.8, Component::Both)];
    for (g, c, component) in points {
        let point = EnergyMomentum::new(g, c)?;
        println!("g = {g}, c = {c}, {} ({})", component.name(), classify(&point, &params).name());
        let (lc, nc) = subsystem_cells(&point, &params, component)?;
        let r = rotation_number(&point, &params, component)?;
        println!("  T_lambda = {:.12} ({:?}), T_nu = {:.12} ({:?})", lc.period, lc.kind, nc.period, nc.kind);

        let start = initial_state(&point, &params, &PhaseChoice::with_component(component))?;
        let span = 100f64.max(6.0 * lc.period.max(nc.period));
        let traj = integrate(&start, &params, c, span, 1e-12)?;
        let measured = measured_nu_period(&traj, nc.kind)? / measured_lambda_period(&traj)?;
        println!("  R = {:.12}, measured {:.12}, gap {:.1e}", r.value, measured, (measured - r.value).abs());
    }
    Ok(())
}
