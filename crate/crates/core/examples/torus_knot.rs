//! Finds a resonant torus and certifies that its orbits close as a
//! `(k, l)` torus knot.

use twocenters::bifurcation::{Component, EnergyMomentum};
use twocenters::dynamics::PhaseChoice;
use twocenters::knots::certify_knot;
use twocenters::quadrature::solve_family;
use twocenters::SystemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SystemParams::new(0.25)?;
    let c = -2.2;
    for (k, l) in [(21, 20), (10, 9), (1, 2)] {
        let family = solve_family(k, l, &params, &[c], Component::Both)?;
        let Some(s) = family.samples.first() else {
            println!("({k},{l}): no torus with R = {:.4} at c = {c}", family.target());
            continue;
        };
        let point = EnergyMomentum::new(s.g, s.c)?;
        let cert = certify_knot(&point, &params, k, l, &PhaseChoice::with_component(s.component), 1e-12)?;
        println!(
            "({k},{l}) on g = {:.10}: observed ({},{}), closes at s = {:.4} with residual {:.1e}, pass {}",
            s.g, cert.k_observed, cert.l_observed, cert.closure_time, cert.closure_residual, cert.pass
        );
    }
    Ok(())
}
