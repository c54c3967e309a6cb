//! Solves for the tori with a prescribed rotation number along a range
//! of energies.

use twocenters::bifurcation::Component;
use twocenters::quadrature::solve_family;
use twocenters::SystemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SystemParams::new(0.25)?;
    let grid: Vec<f64> = (0..12).map(|i| -2.45 + 0.05 * i as f64).collect();
    let family = solve_family(12, 11, &params, &grid, Component::Both)?;
    println!("R = {}/{} = {:.6}", family.k, family.l, family.target());
    for note in &family.no_root {
        println!("  c = {:.3}  no torus", note.c);
    }

    let mut csv = Vec::new();
    family.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}
