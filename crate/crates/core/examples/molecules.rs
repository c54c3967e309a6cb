//! Molecule graphs of the energy surface in each band.

use twocenters::bifurcation::{energy_band, molecule};
use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    let p = SystemParams::new(0.25)?;
    for c in [p.c_j() - 0.5, 0.5 * (p.c_j() + p.c_e()), 0.5 * (p.c_e() + p.c_h()), -0.1] {
        println!("c = {c:.4} ({:?})", energy_band(c, &p)?);
        for graph in molecule(c, &p)? {
            println!("  component {}", graph.component.name());
            for (i, node) in graph.nodes.iter().enumerate() {
                println!("    [{i}] {} {:?} at g = {:.6}", node.atom.symbol(), node.kind, node.g_at_c);
            }
            for (a, b) in &graph.edges {
                println!("    {a} -- {b}");
            }
            assert!(graph.degrees_consistent());
        }
    }
    Ok(())
}
