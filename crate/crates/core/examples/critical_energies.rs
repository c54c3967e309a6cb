//! Critical energies and the collinear saddle for a few mass ratios.

use twocenters::SystemParams;

fn main() -> twocenters::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "mu", "cJ", "cE", "cH", "saddle");
    for mu in [0.01, 0.1, 0.25, 0.4, 0.5] {
        let p = SystemParams::new(mu)?;
        println!(
            "{:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            mu,
            p.c_j(),
            p.c_e(),
            p.c_h(),
            p.saddle_q1()
        );
    }

    // mu > 1/2 is folded back by swapping the primaries
    let p = SystemParams::new(0.75)?;
    println!("mu 0.75 -> {} (mirrored: {})", p.mu(), p.mirrored());
    Ok(())
}
