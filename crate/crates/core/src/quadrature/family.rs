//! Tori with a prescribed rational rotation number.

use std::io::Write;

use rayon::prelude::*;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use super::rotation_number;
use crate::bifurcation::{
    classify, energy_band, molecule, Component, EnergyMomentum, MoleculeGraph, OrbitKind, Region,
};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Accepted `|R - k/l|` at a solved torus.
pub const FAMILY_RESIDUAL: f64 = 1e-10;
/// Scan points per molecule edge.
const SCAN: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySample {
    pub c: f64,
    pub g: f64,
    pub residual: f64,
    pub component: Component,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoRootNote {
    pub c: f64,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusFamily {
    pub k: u32,
    pub l: u32,
    pub samples: Vec<FamilySample>,
    /// Energies of the grid where no torus with `R = k/l` was found.
    pub no_root: Vec<NoRootNote>,
}

impl TorusFamily {
    pub fn target(&self) -> f64 {
        self.k as f64 / self.l as f64
    }

    /// Writes `k,l,c,g,residual` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,l,c,g,residual")?;
        for s in &self.samples {
            writeln!(out, "{},{},{},{},{:e}", self.k, self.l, s.c, s.g, s.residual)?;
        }
        Ok(())
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The torus family carried by one molecule edge: its open `g` interval
/// and which component's tori it describes.
fn edge_families(graph: &MoleculeGraph, params: &SystemParams) -> Vec<(f64, f64, Component)> {
    graph
        .edges
        .iter()
        .map(|&(a, b)| {
            let (lo, hi) = (graph.nodes[a].g_at_c, graph.nodes[b].g_at_c);
            let comp = if graph.component != Component::Both {
                graph.component
            } else {
                let mid = EnergyMomentum { g: 0.5 * (lo + hi), c: graph.c };
                match classify(&mid, params).kind {
                    Region::L | Region::P => Component::Both,
                    _ => {
                        let moon = OrbitKind::ExteriorCollision(crate::bifurcation::Focus::Moon);
                        if graph.nodes[a].kind == moon || graph.nodes[b].kind == moon {
                            Component::Moon
                        } else {
                            Component::Earth
                        }
                    }
                }
            };
            (lo, hi, comp)
        })
        .collect()
}

fn solve_at_energy(
    c: f64,
    target: f64,
    params: &SystemParams,
    component: Component,
) -> Result<Vec<FamilySample>> {
    let mut out: Vec<FamilySample> = Vec::new();
    for graph in molecule(c, params)? {
        for (lo, hi, comp) in edge_families(&graph, params) {
            if component != Component::Both && comp != component {
                continue;
            }
            let residual = |g: f64| -> f64 {
                EnergyMomentum::new(g, c)
                    .and_then(|pt| rotation_number(&pt, params, comp))
                    .map_or(f64::NAN, |r| r.value - target)
            };
            // Chebyshev spacing resolves the ends of the edge.
            let (m, w) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            let gs: Vec<f64> = (0..SCAN)
                .map(|i| m - w * (std::f64::consts::PI * (i as f64 + 0.5) / SCAN as f64).cos())
                .collect();
            let vals: Vec<f64> = gs.iter().map(|&g| residual(g)).collect();
            for i in 0..SCAN - 1 {
                let (fa, fb) = (vals[i], vals[i + 1]);
                if !(fa.is_finite() && fb.is_finite()) || fa * fb > 0.0 {
                    continue;
                }
                let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
                let Ok(g) = find_root_brent(gs[i], gs[i + 1], residual, &mut conv) else {
                    continue;
                };
                let r = residual(g).abs();
                if r <= FAMILY_RESIDUAL && !out.iter().any(|s| (s.g - g).abs() < 1e-12 && s.component == comp) {
                    out.push(FamilySample { c, g, residual: r, component: comp });
                }
            }
        }
    }
    Ok(out)
}

/// Solves `R(g, c) = k / l` along each energy of `c_grid`.
///
/// Every molecule edge at that energy is a one-parameter family of tori and
/// is scanned for sign changes of `R - k/l`, each then refined by Brent's
/// method. `component` restricts the search to Earth or Moon tori (`Both`
/// keeps all). Energies without a root are listed in `no_root`.
pub fn solve_family(
    k: u32,
    l: u32,
    params: &SystemParams,
    c_grid: &[f64],
    component: Component,
) -> Result<TorusFamily> {
    if k == 0 || l == 0 || gcd(k, l) != 1 {
        return Err(Error::Validation(format!("(k, l) = ({k}, {l}) must be coprime positive integers")));
    }
    if let Some(&c0) = c_grid.first() {
        let band = energy_band(c0, params)?;
        for &c in c_grid {
            if energy_band(c, params)? != band {
                return Err(Error::Validation("energy grid spans more than one band".into()));
            }
        }
    }
    let target = k as f64 / l as f64;
    let per_c: Vec<Result<Vec<FamilySample>>> = c_grid
        .par_iter()
        .map(|&c| solve_at_energy(c, target, params, component))
        .collect();
    let mut samples = Vec::new();
    let mut no_root = Vec::new();
    for (&c, found) in c_grid.iter().zip(per_c) {
        let found = found?;
        if found.is_empty() {
            no_root.push(NoRootNote { c, target });
        }
        samples.extend(found);
    }
    Ok(TorusFamily { k, l, samples, no_root })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_coprime() {
        let p = SystemParams::new(0.25).unwrap();
        assert!(solve_family(2, 4, &p, &[-2.2], Component::Earth).is_err());
        assert!(solve_family(0, 1, &p, &[-2.2], Component::Earth).is_err());
    }

    #[test]
    fn rejects_mixed_bands() {
        let p = SystemParams::new(0.25).unwrap();
        assert!(solve_family(1, 2, &p, &[-2.2, -1.2], Component::Earth).is_err());
    }

    #[test]
    fn round_trip_residual() {
        let p = SystemParams::new(0.25).unwrap();
        let fam = solve_family(21, 20, &p, &[-2.2, -2.3], Component::Earth).unwrap();
        assert!(!fam.samples.is_empty());
        for s in &fam.samples {
            let r = rotation_number(&EnergyMomentum::new(s.g, s.c).unwrap(), &p, Component::Earth).unwrap();
            assert!((r.value - 21.0 / 20.0).abs() <= FAMILY_RESIDUAL);
        }
        let mut buf = Vec::new();
        fam.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("k,l,c,g,residual\n"));
    }

    #[test]
    fn unreachable_ratio_reports_no_root() {
        let p = SystemParams::new(0.25).unwrap();
        let fam = solve_family(1, 2, &p, &[-2.2], Component::Earth).unwrap();
        assert!(fam.samples.is_empty());
        assert_eq!(fam.no_root.len(), 1);
    }
}
