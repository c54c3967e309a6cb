//! Integrates one orbit in the regularized time and reports how well the
//! regularized energy and the separation constant are kept.

use twocenters::bifurcation::{classify, Component, EnergyMomentum};
use twocenters::dynamics::{initial_state, integrate, regularized_energy, PhaseChoice};
use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    let params = SystemParams::new(0.25)?;
    let point = EnergyMomentum::new(1.0, -2.5)?;
    let label = classify(&point, &params);
    println!("point {point:?} is {}", label.name());

    // S carries a torus around each primary; follow the Earth one
    let component = match label.component_hint {
        Some(Component::Both) | None => Component::Earth,
        Some(c) => c,
    };
    let choice = PhaseChoice::with_component(component);
    let start = initial_state(&point, &params, &choice)?;
    let energy = regularized_energy(&start, &params, point.c)?;
    println!("start {:?}, Q = {:.2e}", start.coords, energy.total());

    let traj = integrate(&start, &params, point.c, 100.0, 1e-12)?;
    println!("{} steps, {} samples", traj.steps().len(), traj.samples().len());
    println!("max |Q| = {:.3e}", traj.max_abs_q());
    println!("max |Q_lambda - g| = {:.3e}", traj.max_q_lambda_drift());
    for (s, q) in traj.drift_log(10) {
        println!("  s = {s:8.3}  |Q| = {q:.3e}");
    }
    if let Some(y) = traj.eval(50.0) {
        println!("dense output at s = 50: {y:?}");
    }
    Ok(())
}
