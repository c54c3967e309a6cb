//! Classifies a grid over the `(g, c)` plane and writes CSV and SVG.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;

use twocenters::bifurcation::{classify, classify_grid, render_svg, write_csv, DiagramWindow, EnergyMomentum};
use twocenters::SystemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SystemParams::new(0.25)?;
    let window = DiagramWindow::default();
    let n = 200;
    let cells = classify_grid(&params, &window, n, n)?;

    let mut counts = BTreeMap::new();
    for cell in &cells {
        *counts.entry(cell.label.name()).or_insert(0usize) += 1;
    }
    for (name, count) in &counts {
        println!("{name:>12} {count}");
    }

    for (g, c) in [(1.0, -2.5), (0.3, -1.2), (-0.5, -0.8), (-2.0, -0.5)] {
        let label = classify(&EnergyMomentum::new(g, c)?, &params);
        println!("g = {g:5}, c = {c:5}: {}", label.name());
    }

    let dir = std::env::temp_dir().join("twocenters-diagram");
    std::fs::create_dir_all(&dir)?;
    write_csv(BufWriter::new(File::create(dir.join("diagram.csv"))?), &params, &cells)?;
    std::fs::write(dir.join("diagram.svg"), render_svg(&params, &window, &cells, n, n, 600))?;
    println!("wrote {}", dir.display());
    Ok(())
}
