//! Critical periodic orbits on a fixed energy level and the molecule they
//! form.

use std::fmt;

use serde::Serialize;

use super::{Component, Curve, CURVE_TOL};
use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Focus {
    Earth,
    Moon,
}

/// Sense of circulation of the elliptic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitKind {
    /// Along the axis segment between the two primaries, one side only.
    InteriorCollision(Focus),
    /// Along the axis ray beyond a primary.
    ExteriorCollision(Focus),
    /// Along the whole segment, bouncing off both primaries.
    DoubleCollision,
    /// The Lyapunov orbit on the hyperbola `eta = -delta / c`.
    Hyperbolic,
    /// On the ellipse `xi = -1 / c`.
    Elliptic(Orientation),
}

impl OrbitKind {
    /// The critical curve carrying this orbit.
    pub fn curve(self) -> Curve {
        match self {
            OrbitKind::InteriorCollision(_) | OrbitKind::DoubleCollision => Curve::L3,
            OrbitKind::ExteriorCollision(Focus::Earth) => Curve::L1,
            OrbitKind::ExteriorCollision(Focus::Moon) => Curve::L2,
            OrbitKind::Hyperbolic => Curve::L4,
            OrbitKind::Elliptic(_) => Curve::L5,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            OrbitKind::InteriorCollision(Focus::Earth) => "interior collision (Earth)",
            OrbitKind::InteriorCollision(Focus::Moon) => "interior collision (Moon)",
            OrbitKind::ExteriorCollision(Focus::Earth) => "exterior collision (Earth)",
            OrbitKind::ExteriorCollision(Focus::Moon) => "exterior collision (Moon)",
            OrbitKind::DoubleCollision => "double collision",
            OrbitKind::Hyperbolic => "hyperbolic",
            OrbitKind::Elliptic(Orientation::Positive) => "elliptic (+)",
            OrbitKind::Elliptic(Orientation::Negative) => "elliptic (-)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Atom {
    A,
    B,
    AStar,
}

impl Atom {
    pub fn degree(self) -> usize {
        match self {
            Atom::A => 1,
            Atom::B => 3,
            Atom::AStar => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Atom::A => "A",
            Atom::B => "B",
            Atom::AStar => "A*",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalOrbit {
    pub kind: OrbitKind,
    pub g_at_c: f64,
    pub atom: Atom,
    pub component: Component,
}

/// The open energy intervals separated by `cJ < cE < cH < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EnergyBand {
    BelowJ,
    JToE,
    EToH,
    AboveH,
}

/// Band containing `c`; energies within [`CURVE_TOL`] of a transition are
/// rejected.
pub fn energy_band(c: f64, params: &SystemParams) -> Result<EnergyBand> {
    if !(c < 0.0) {
        return Err(Error::Validation(format!("energy must be negative, got {c}")));
    }
    for edge in [params.c_j(), params.c_e(), params.c_h()] {
        if (c - edge).abs() <= CURVE_TOL {
            return Err(Error::BandEdge { c, edge });
        }
    }
    Ok(if c < params.c_j() {
        EnergyBand::BelowJ
    } else if c < params.c_e() {
        EnergyBand::JToE
    } else if c < params.c_h() {
        EnergyBand::EToH
    } else {
        EnergyBand::AboveH
    })
}

fn orbit(kind: OrbitKind, atom: Atom, component: Component, c: f64, p: &SystemParams) -> CriticalOrbit {
    let g_at_c = kind.curve().g_at(c, p).expect("curve exists in this band");
    CriticalOrbit { kind, g_at_c, atom, component }
}

/// Critical orbits at energy `c`, sorted by `g` (Earth before Moon below
/// `cJ`, where the two components are listed separately).
pub fn critical_orbits_at_energy(c: f64, params: &SystemParams) -> Result<Vec<CriticalOrbit>> {
    use Atom::*;
    use OrbitKind::*;
    let p = params;
    let whole = Component::Both;
    let ell = |o| orbit(Elliptic(o), A, whole, c, p);
    let mut out = match energy_band(c, p)? {
        EnergyBand::BelowJ => {
            return Ok(vec![
                orbit(InteriorCollision(Focus::Earth), A, Component::Earth, c, p),
                orbit(ExteriorCollision(Focus::Earth), A, Component::Earth, c, p),
                orbit(InteriorCollision(Focus::Moon), A, Component::Moon, c, p),
                orbit(ExteriorCollision(Focus::Moon), A, Component::Moon, c, p),
            ]);
        }
        EnergyBand::JToE => vec![
            orbit(DoubleCollision, A, whole, c, p),
            orbit(Hyperbolic, B, whole, c, p),
            orbit(ExteriorCollision(Focus::Moon), A, whole, c, p),
            orbit(ExteriorCollision(Focus::Earth), A, whole, c, p),
        ],
        EnergyBand::EToH => vec![
            ell(Orientation::Positive),
            ell(Orientation::Negative),
            orbit(DoubleCollision, B, whole, c, p),
            orbit(Hyperbolic, B, whole, c, p),
            orbit(ExteriorCollision(Focus::Moon), A, whole, c, p),
            orbit(ExteriorCollision(Focus::Earth), A, whole, c, p),
        ],
        EnergyBand::AboveH => vec![
            ell(Orientation::Positive),
            ell(Orientation::Negative),
            orbit(DoubleCollision, B, whole, c, p),
            orbit(ExteriorCollision(Focus::Moon), AStar, whole, c, p),
            orbit(ExteriorCollision(Focus::Earth), A, whole, c, p),
        ],
    };
    out.sort_by(|a, b| a.g_at_c.total_cmp(&b.g_at_c));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoleculeGraph {
    pub c: f64,
    pub component: Component,
    /// Sorted by `g`.
    pub nodes: Vec<CriticalOrbit>,
    /// Index pairs into `nodes`, each with the lower `g` first.
    pub edges: Vec<(usize, usize)>,
}

impl MoleculeGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == node || *b == node).count()
    }

    pub fn index_of(&self, kind: OrbitKind) -> Option<usize> {
        self.nodes.iter().position(|n| n.kind == kind)
    }

    /// Degrees match the atom types.
    pub fn degrees_consistent(&self) -> bool {
        (0..self.nodes.len()).all(|i| self.degree(i) == self.nodes[i].atom.degree())
    }

    /// Torus families of this energy level: one per edge, spanning the open
    /// `g` interval between its endpoints.
    pub fn edge_intervals(&self) -> Vec<(f64, f64)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].g_at_c, self.nodes[b].g_at_c))
            .collect()
    }
}

impl fmt::Display for MoleculeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "molecule at c = {} ({})", self.c, self.component.name())?;
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(
                f,
                "  [{i}] {:<2} {:<27} g = {:.9}",
                n.atom.symbol(),
                n.kind.describe(),
                n.g_at_c
            )?;
        }
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(a, b)| format!("{}[{a}]-{}[{b}]", self.nodes[a].atom.symbol(), self.nodes[b].atom.symbol()))
            .collect();
        writeln!(f, "  edges: {}", edges.join(" "))
    }
}

/// Molecule of the energy level `c`: two graphs below `cJ` (Earth, Moon),
/// one graph otherwise.
pub fn molecule(c: f64, params: &SystemParams) -> Result<Vec<MoleculeGraph>> {
    use OrbitKind::*;
    let band = energy_band(c, params)?;
    let orbits = critical_orbits_at_energy(c, params)?;
    let graph = |component: Component, mut nodes: Vec<CriticalOrbit>, links: &[(OrbitKind, OrbitKind)]| {
        nodes.sort_by(|a, b| a.g_at_c.total_cmp(&b.g_at_c));
        let idx = |k: OrbitKind| nodes.iter().position(|n| n.kind == k).expect("node present");
        let mut edges: Vec<(usize, usize)> = links
            .iter()
            .map(|&(a, b)| {
                let (i, j) = (idx(a), idx(b));
                (i.min(j), i.max(j))
            })
            .collect();
        edges.sort_unstable();
        MoleculeGraph { c, component, nodes, edges }
    };
    let ell_p = Elliptic(Orientation::Positive);
    let ell_n = Elliptic(Orientation::Negative);
    let ext_e = ExteriorCollision(Focus::Earth);
    let ext_m = ExteriorCollision(Focus::Moon);
    Ok(match band {
        EnergyBand::BelowJ => {
            let side = |comp: Component| -> Vec<CriticalOrbit> {
                orbits.iter().copied().filter(|o| o.component == comp).collect()
            };
            vec![
                graph(
                    Component::Earth,
                    side(Component::Earth),
                    &[(InteriorCollision(Focus::Earth), ext_e)],
                ),
                graph(
                    Component::Moon,
                    side(Component::Moon),
                    &[(InteriorCollision(Focus::Moon), ext_m)],
                ),
            ]
        }
        EnergyBand::JToE => vec![graph(
            Component::Both,
            orbits,
            &[(DoubleCollision, Hyperbolic), (Hyperbolic, ext_m), (Hyperbolic, ext_e)],
        )],
        EnergyBand::EToH => vec![graph(
            Component::Both,
            orbits,
            &[
                (ell_p, DoubleCollision),
                (ell_n, DoubleCollision),
                (DoubleCollision, Hyperbolic),
                (Hyperbolic, ext_m),
                (Hyperbolic, ext_e),
            ],
        )],
        EnergyBand::AboveH => vec![graph(
            Component::Both,
            orbits,
            &[(ell_p, DoubleCollision), (ell_n, DoubleCollision), (DoubleCollision, ext_m), (ext_m, ext_e)],
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::{discriminants, EnergyMomentum};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn quarter() -> SystemParams {
        SystemParams::new(0.25).unwrap()
    }

    #[test]
    fn orbits_between_j_and_e() {
        let p = quarter();
        let orbits = critical_orbits_at_energy(-1.2, &p).unwrap();
        let kinds: Vec<_> = orbits.iter().map(|o| (o.kind, o.atom)).collect();
        assert_eq!(
            kinds,
            vec![
                (OrbitKind::DoubleCollision, Atom::A),
                (OrbitKind::Hyperbolic, Atom::B),
                (OrbitKind::ExteriorCollision(Focus::Moon), Atom::A),
                (OrbitKind::ExteriorCollision(Focus::Earth), Atom::A),
            ]
        );
        assert_relative_eq!(orbits[0].g_at_c, -0.8, epsilon = 1e-12);
        assert_relative_eq!(orbits[1].g_at_c, -0.208_333_3, epsilon = 1e-7);
        assert_relative_eq!(orbits[2].g_at_c, 0.2, epsilon = 1e-12);
        assert_relative_eq!(orbits[3].g_at_c, 2.2, epsilon = 1e-12);
    }

    #[test]
    fn orbits_between_e_and_h() {
        let p = quarter();
        let orbits = critical_orbits_at_energy(-0.8, &p).unwrap();
        assert_eq!(orbits.len(), 6);
        let find = |k| orbits.iter().find(|o| o.kind == k).unwrap();
        for o in [Orientation::Positive, Orientation::Negative] {
            let e = find(OrbitKind::Elliptic(o));
            assert_relative_eq!(e.g_at_c, -1.25, epsilon = 1e-12);
            assert_eq!(e.atom, Atom::A);
        }
        let dc = find(OrbitKind::DoubleCollision);
        assert_relative_eq!(dc.g_at_c, -1.2, epsilon = 1e-12);
        assert_eq!(dc.atom, Atom::B);
        let hyp = find(OrbitKind::Hyperbolic);
        assert_relative_eq!(hyp.g_at_c, -0.3125, epsilon = 1e-12);
        assert_eq!(hyp.atom, Atom::B);
        assert_relative_eq!(find(OrbitKind::ExteriorCollision(Focus::Moon)).g_at_c, -0.2, epsilon = 1e-12);
        assert_relative_eq!(find(OrbitKind::ExteriorCollision(Focus::Earth)).g_at_c, 1.8, epsilon = 1e-12);
        let g = &molecule(-0.8, &p).unwrap()[0];
        assert!(g.degrees_consistent());
        assert_eq!(g.edges.len(), 5);
    }

    #[test]
    fn below_cj_only_collisions() {
        let orbits = critical_orbits_at_energy(-2.2, &quarter()).unwrap();
        assert_eq!(orbits.len(), 4);
        assert!(orbits.iter().all(|o| o.atom == Atom::A));
        assert!(orbits.iter().all(|o| matches!(
            o.kind,
            OrbitKind::InteriorCollision(_) | OrbitKind::ExteriorCollision(_)
        )));
    }

    #[test]
    fn moon_exterior_turns_nonorientable() {
        let orbits = critical_orbits_at_energy(-0.4, &quarter()).unwrap();
        let m = orbits
            .iter()
            .find(|o| o.kind == OrbitKind::ExteriorCollision(Focus::Moon))
            .unwrap();
        assert_eq!(m.atom, Atom::AStar);
    }

    #[test]
    fn band_edges_rejected() {
        let p = quarter();
        for edge in [p.c_j(), p.c_e(), p.c_h()] {
            assert!(matches!(
                critical_orbits_at_energy(edge, &p),
                Err(Error::BandEdge { .. })
            ));
        }
    }

    #[test]
    fn molecule_below_cj() {
        let graphs = molecule(-2.2, &quarter()).unwrap();
        assert_eq!(graphs.len(), 2);
        for g in &graphs {
            assert_eq!(g.nodes.len(), 2);
            assert_eq!(g.edges, vec![(0, 1)]);
        }
        let span = |g: &MoleculeGraph| g.nodes[1].g_at_c - g.nodes[0].g_at_c;
        assert!(span(&graphs[0]) > span(&graphs[1]));
    }

    #[test]
    fn molecule_between_j_and_e() {
        let graphs = molecule(-1.5, &quarter()).unwrap();
        assert_eq!(graphs.len(), 1);
        let g = &graphs[0];
        let hyp = g.index_of(OrbitKind::Hyperbolic).unwrap();
        assert_eq!(g.degree(hyp), 3);
        assert!(g.degrees_consistent());
    }

    #[test]
    fn molecule_above_h_has_a_star_chain() {
        let g = &molecule(-0.3, &quarter()).unwrap()[0];
        let m = g.index_of(OrbitKind::ExteriorCollision(Focus::Moon)).unwrap();
        let e = g.index_of(OrbitKind::ExteriorCollision(Focus::Earth)).unwrap();
        let dc = g.index_of(OrbitKind::DoubleCollision).unwrap();
        assert!(g.edges.contains(&(dc.min(m), dc.max(m))));
        assert!(g.edges.contains(&(m.min(e), m.max(e))));
        assert!(g.degrees_consistent());
        assert!(g.to_string().contains("A*"));
    }

    proptest! {
        #[test]
        fn orbits_lie_on_their_curves(mu in 0.01f64..0.49, c in -4.0f64..-0.01) {
            let p = SystemParams::new(mu).unwrap();
            let Ok(orbits) = critical_orbits_at_energy(c, &p) else { return Ok(()) };
            for o in &orbits {
                let pt = EnergyMomentum::new(o.g_at_c, c).unwrap();
                let (dxi, deta) = discriminants(&pt, &p);
                let vanishing = match o.kind.curve() {
                    Curve::L3 | Curve::L5 => dxi,
                    _ => deta,
                };
                prop_assert!(vanishing.abs() < 1e-10, "{:?}: {}", o.kind, vanishing);
            }
            for w in orbits.windows(2) {
                let twins = matches!((w[0].kind, w[1].kind), (OrbitKind::Elliptic(_), OrbitKind::Elliptic(_)));
                let split = w[0].component != w[1].component;
                prop_assert!(twins || split || w[0].g_at_c < w[1].g_at_c);
            }
            for graph in molecule(c, &p).unwrap() {
                prop_assert!(graph.degrees_consistent());
            }
        }
    }
}
