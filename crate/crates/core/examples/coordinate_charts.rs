//! A Cartesian state through the elliptic and doubled charts and back,
//! with the two integrals evaluated in each chart.

use twocenters::coords::{evaluate_h_g, to_cartesian, to_doubled, to_elliptic, Branch, PhaseState};
use twocenters::params::hamiltonian_cartesian;
use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    let params = SystemParams::new(0.25)?;
    let cart = PhaseState::cartesian(0.3, 0.8, -0.4, 0.2);

    let ell = to_elliptic(&cart)?;
    let dbl = to_doubled(&cart, Branch::PLUS)?;
    let back = to_cartesian(&dbl)?;

    for (name, s) in [("cartesian", &cart), ("elliptic", &ell), ("doubled", &dbl), ("round trip", &back)] {
        let hg = evaluate_h_g(s, &params)?;
        println!(
            "{name:>10}: q = {:?} p = {:?}  H = {:.15} G = {:.15}",
            s.positions(),
            s.momenta(),
            hg.h_value,
            hg.g_value
        );
    }
    println!("direct H = {:.15}", hamiltonian_cartesian(&params, &cart)?);

    // the axis q2 = 0 is where the elliptic momenta degenerate
    match to_elliptic(&PhaseState::cartesian(0.0, 0.0, 0.1, 0.1)) {
        Ok(s) => println!("on the axis: {s:?}"),
        Err(e) => println!("on the axis: {e}"),
    }
    Ok(())
}
