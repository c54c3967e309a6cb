//! The Lyapunov orbit of the hyperbolic band and the certificate that its
//! stable and unstable manifolds coincide.

use twocenters::bifurcation::{Component, Focus};
use twocenters::coords::Sign;
use twocenters::homoclinic::{collision_homoclinic, collision_momenta, lyapunov_orbit, verify_homoclinic};
use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    let params = SystemParams::new(0.25)?;
    let c = -1.2;

    let orbit = lyapunov_orbit(c, &params)?;
    let (value, slope) = orbit.double_root_residuals(&params);
    println!("g_c = {:.9}, nu* = {:.9}", orbit.leaf.g_c, orbit.leaf.nu_star);
    println!("period {:.9}, stationarity {:.1e}", orbit.period, orbit.stationarity);
    println!("double root residuals {value:.1e} {slope:.1e}, curvature {:.4}", orbit.potential_curvature());
    println!("Cartesian diameter {:.6}", orbit.cartesian_diameter());

    for component in [Component::Earth, Component::Moon] {
        let report = verify_homoclinic(c, &params, component, 4)?;
        println!("{} side: {:?}", component.name(), report.verdict);
        for o in &report.orbits {
            let last = |v: &[f64]| v.last().copied().unwrap_or(f64::NAN);
            println!(
                "  phase {:.3} {:?}: final distances {:.1e} / {:.1e}, rotations {}, cross-check {:.1e}",
                o.phase,
                o.sign,
                last(&o.checkpoints_fwd),
                last(&o.checkpoints_bwd),
                o.rotation_count,
                o.cross_check_residual
            );
        }
    }

    let m = collision_momenta(c, &params)?;
    println!("collision momenta: p_lambda^2 = {:.9}, p_nu^2 = {:.9} / {:.9}", m.p_lambda_sq, m.p_nu_sq_moon, m.p_nu_sq_earth);
    let hit = collision_homoclinic(c, &params, Focus::Moon, (Sign::Plus, Sign::Plus))?;
    println!("collision orbit through the Moon: {:?}", hit.report.verdict);
    Ok(())
}
