//! Root analysis of the separated polynomials and classification of the
//! `(g, c)` plane.
//!
//! With `p(xi) = c xi^2 + 2 xi + g` and `q(eta) = c eta^2 + 2 delta eta + g`,
//! motion is possible where
//!
//! ```text
//! f(xi)  = p(xi)  (xi^2 - 1)  >= 0,   xi  >= 1
//! h(eta) = q(eta) (eta^2 - 1) >= 0,   |eta| <= 1
//! ```
//!
//! so the admissible `xi` set is where `p >= 0` and the admissible `eta` set
//! is where `q <= 0`.

mod diagram;
mod molecule;

pub use diagram::{classify_grid, render_svg, write_csv, DiagramCell, DiagramWindow};
pub use molecule::{
    critical_orbits_at_energy, energy_band, molecule, Atom, CriticalOrbit, EnergyBand, Focus,
    MoleculeGraph, OrbitKind, Orientation,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Distance in the `(g, c)` plane below which a point counts as lying on a
/// critical curve.
pub const CURVE_TOL: f64 = 1e-9;

/// A point `(g, c)` of the integral plane with negative energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyMomentum {
    pub g: f64,
    pub c: f64,
}

impl EnergyMomentum {
    pub fn new(g: f64, c: f64) -> Result<Self> {
        if !(c < 0.0) || !g.is_finite() {
            return Err(Error::Validation(format!(
                "energy must be negative and g finite, got (g, c) = ({g}, {c})"
            )));
        }
        Ok(Self { g, c })
    }
}

/// Which side of the configuration space. `Both` is used where a region or
/// molecule covers the two components at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Earth,
    Moon,
    Both,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Earth => "earth",
            Component::Moon => "moon",
            Component::Both => "both",
        }
    }
}

impl std::str::FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "earth" | "e" => Ok(Component::Earth),
            "moon" | "m" => Ok(Component::Moon),
            "both" => Ok(Component::Both),
            _ => Err(Error::Validation(format!("unknown component {s:?}"))),
        }
    }
}

/// Roots of a real quadratic factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RootPair {
    /// Ordered `lo <= hi`.
    Real(f64, f64),
    /// Complex-conjugate pair.
    Complex,
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootData {
    pub xi_roots: RootPair,
    pub eta_roots: RootPair,
    /// Admissible `xi` values, `None` when empty.
    pub xi_range: Option<Interval>,
    /// Admissible `eta` intervals, ordered left to right (at most two).
    pub eta_ranges: Vec<Interval>,
}

impl RootData {
    /// The `eta` interval touching `-1` (Earth side), if any.
    pub fn earth_eta(&self) -> Option<Interval> {
        self.eta_ranges.iter().copied().find(|iv| iv.lo == -1.0)
    }

    /// The `eta` interval touching `+1` (Moon side), if any.
    pub fn moon_eta(&self) -> Option<Interval> {
        self.eta_ranges.iter().copied().find(|iv| iv.hi == 1.0)
    }

    /// Whether the `eta` set is all of `[-1, 1]`.
    pub fn eta_full(&self) -> bool {
        matches!(self.eta_ranges.as_slice(), [iv] if iv.lo == -1.0 && iv.hi == 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl Curve {
    pub const ALL: [Curve; 5] = [Curve::L1, Curve::L2, Curve::L3, Curve::L4, Curve::L5];

    pub fn name(self) -> &'static str {
        match self {
            Curve::L1 => "l1",
            Curve::L2 => "l2",
            Curve::L3 => "l3",
            Curve::L4 => "l4",
            Curve::L5 => "l5",
        }
    }

    /// The `g` value of the curve at energy `c`, where the curve exists.
    pub fn g_at(self, c: f64, params: &SystemParams) -> Option<f64> {
        let d = params.delta();
        match self {
            Curve::L1 => Some(2.0 * d - c),
            Curve::L2 => Some(-c - 2.0 * d),
            Curve::L3 => Some(-c - 2.0),
            Curve::L4 => (params.c_j() < c && c < params.c_h()).then(|| d * d / c),
            Curve::L5 => (params.c_e() < c && c < 0.0).then(|| 1.0 / c),
        }
    }

    /// Approximate Euclidean distance from `(g, c)` to the curve.
    fn distance(self, pt: &EnergyMomentum, params: &SystemParams) -> f64 {
        let d = params.delta();
        let (g, c) = (pt.g, pt.c);
        let s2 = std::f64::consts::SQRT_2;
        match self {
            Curve::L1 => (c + g - 2.0 * d).abs() / s2,
            Curve::L2 => (c + g + 2.0 * d).abs() / s2,
            Curve::L3 => (c + g + 2.0).abs() / s2,
            Curve::L4 | Curve::L5 => {
                let (lo, hi, k) = if self == Curve::L4 {
                    (params.c_j(), params.c_h(), d * d)
                } else {
                    (params.c_e(), 0.0, 1.0)
                };
                if c <= lo - CURVE_TOL || c >= hi + CURVE_TOL {
                    return f64::INFINITY;
                }
                // first-order distance to the level set g c = k
                (g * c - k).abs() / g.hypot(c)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Forbidden,
    /// Only the Earth-side `eta` interval survives.
    SPrime,
    /// Satellite motion around one primary; see the component hint.
    S,
    /// Lemniscate motion around both primaries.
    L,
    /// Planetary motion around both primaries, away from the segment.
    P,
    OnCurve(Curve),
    /// The saddle value `(-cJ - 2, cJ)`, where l3 touches l4.
    SaddleValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionLabel {
    pub kind: Region,
    pub component_hint: Option<Component>,
}

impl RegionLabel {
    fn plain(kind: Region) -> Self {
        Self { kind, component_hint: None }
    }

    /// Short name used in CSV output.
    pub fn name(&self) -> String {
        match self.kind {
            Region::Forbidden => "Forbidden".into(),
            Region::SPrime => "SPrime".into(),
            Region::S => match self.component_hint {
                Some(Component::Earth) => "S_Earth".into(),
                Some(Component::Moon) => "S_Moon".into(),
                _ => "S".into(),
            },
            Region::L => "L".into(),
            Region::P => "P".into(),
            Region::OnCurve(curve) => format!("OnCurve({})", curve.name()),
            Region::SaddleValue => "SaddleValue".into(),
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.kind, Region::SPrime | Region::S | Region::L | Region::P)
    }
}

/// `f(xi) = (c xi^2 + 2 xi + g)(xi^2 - 1)`.
pub fn poly_f(point: &EnergyMomentum, xi: f64) -> f64 {
    (point.c * xi * xi + 2.0 * xi + point.g) * (xi * xi - 1.0)
}

/// `h(eta) = (c eta^2 + 2 delta eta + g)(eta^2 - 1)`.
pub fn poly_h(point: &EnergyMomentum, params: &SystemParams, eta: f64) -> f64 {
    (point.c * eta * eta + 2.0 * params.delta() * eta + point.g) * (eta * eta - 1.0)
}

/// `dh/deta`.
pub fn poly_h_prime(point: &EnergyMomentum, params: &SystemParams, eta: f64) -> f64 {
    let d = params.delta();
    let q = point.c * eta * eta + 2.0 * d * eta + point.g;
    (2.0 * point.c * eta + 2.0 * d) * (eta * eta - 1.0) + 2.0 * eta * q
}

/// `(Delta_xi, Delta_eta)`, each vanishing exactly on its critical curves.
pub fn discriminants(point: &EnergyMomentum, params: &SystemParams) -> (f64, f64) {
    let (g, c, d) = (point.g, point.c, params.delta());
    let sq = |x: f64| x * x;
    let dxi = 16.0 * sq(c + g + 2.0) * sq(c + g - 2.0) * sq(g * c - 1.0);
    let deta = 16.0 * sq(c + g + 2.0 * d) * sq(c + g - 2.0 * d) * sq(g * c - d * d);
    (dxi, deta)
}

/// Roots of `c x^2 + 2 b x + g`, computed without cancellation.
pub(crate) fn quadratic_roots(c: f64, b: f64, g: f64) -> RootPair {
    let disc = b * b - c * g;
    if disc < 0.0 {
        return RootPair::Complex;
    }
    let s = disc.sqrt();
    let q = -(b + if b >= 0.0 { s } else { -s });
    let (r1, r2) = if q == 0.0 { (-b / c, -b / c) } else { (q / c, g / q) };
    RootPair::Real(r1.min(r2), r1.max(r2))
}

pub fn solve_roots(point: &EnergyMomentum, params: &SystemParams) -> RootData {
    let (g, c) = (point.g, point.c);
    let xi_roots = quadratic_roots(c, 1.0, g);
    let eta_roots = quadratic_roots(c, params.delta(), g);

    // p >= 0 between its roots (c < 0)
    let xi_range = match xi_roots {
        RootPair::Real(lo, hi) if hi >= 1.0 => Some(Interval { lo: lo.max(1.0), hi }),
        _ => None,
    };

    // q <= 0 outside its roots
    let eta_ranges = match eta_roots {
        RootPair::Complex => vec![Interval { lo: -1.0, hi: 1.0 }],
        RootPair::Real(lo, hi) => {
            let mut out = Vec::with_capacity(2);
            if hi < -1.0 || lo > 1.0 {
                out.push(Interval { lo: -1.0, hi: 1.0 });
            } else {
                if lo >= -1.0 {
                    out.push(Interval { lo: -1.0, hi: lo });
                }
                if hi <= 1.0 {
                    out.push(Interval { lo: hi, hi: 1.0 });
                }
            }
            out
        }
    };

    RootData { xi_roots, eta_roots, xi_range, eta_ranges }
}

/// Region from the root pattern alone, without curve proximity.
pub(crate) fn pattern_label(roots: &RootData) -> RegionLabel {
    let Some(xi) = roots.xi_range else {
        return RegionLabel::plain(Region::Forbidden);
    };
    if roots.eta_ranges.is_empty() {
        return RegionLabel::plain(Region::Forbidden);
    }
    if roots.eta_full() {
        return RegionLabel::plain(if xi.lo == 1.0 { Region::L } else { Region::P });
    }
    match (roots.earth_eta(), roots.moon_eta()) {
        (Some(_), Some(_)) => RegionLabel { kind: Region::S, component_hint: Some(Component::Both) },
        (Some(_), None) => RegionLabel { kind: Region::SPrime, component_hint: Some(Component::Earth) },
        (None, Some(_)) => RegionLabel { kind: Region::S, component_hint: Some(Component::Moon) },
        (None, None) => unreachable!("non-empty eta set touches an endpoint"),
    }
}

pub fn classify(point: &EnergyMomentum, params: &SystemParams) -> RegionLabel {
    let saddle = (-params.c_j() - 2.0, params.c_j());
    if (point.g - saddle.0).hypot(point.c - saddle.1) < CURVE_TOL {
        return RegionLabel::plain(Region::SaddleValue);
    }
    let label = pattern_label(&solve_roots(point, params));
    let near = Curve::ALL
        .into_iter()
        .filter(|curve| curve.distance(point, params) < CURVE_TOL)
        .min_by(|a, b| a.distance(point, params).total_cmp(&b.distance(point, params)));
    if let Some(curve) = near {
        // Curve pieces buried inside the forbidden region bound nothing.
        let probe = 4.0 * CURVE_TOL;
        let allowed_nearby = [(probe, 0.0), (-probe, 0.0), (0.0, probe), (0.0, -probe)]
            .into_iter()
            .filter(|(dg, dc)| point.c + dc < 0.0 && (*dg != 0.0 || *dc != 0.0))
            .any(|(dg, dc)| {
                let p = EnergyMomentum { g: point.g + dg, c: point.c + dc };
                pattern_label(&solve_roots(&p, params)).kind != Region::Forbidden
            });
        if allowed_nearby || label.kind != Region::Forbidden {
            return RegionLabel::plain(Region::OnCurve(curve));
        }
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn quarter() -> SystemParams {
        SystemParams::new(0.25).unwrap()
    }

    fn pt(g: f64, c: f64) -> EnergyMomentum {
        EnergyMomentum::new(g, c).unwrap()
    }

    #[test]
    fn rejects_nonnegative_energy() {
        assert!(EnergyMomentum::new(0.1, 0.0).is_err());
        assert!(EnergyMomentum::new(0.1, 0.5).is_err());
    }

    #[test]
    fn polynomials_vanish_at_unit() {
        let p = quarter();
        for (g, c) in [(0.3, -2.2), (-1.0, -0.3), (5.0, -7.0)] {
            assert_eq!(poly_f(&pt(g, c), 1.0), 0.0);
            assert_eq!(poly_h(&pt(g, c), &p, -1.0), 0.0);
        }
    }

    #[test]
    fn double_root_on_l4() {
        let p = quarter();
        let c = -1.2;
        let point = pt(0.25 / c, c);
        let eta = -p.delta() / c;
        assert_relative_eq!(eta, 0.416_666_7, epsilon = 1e-7);
        assert!(poly_h(&point, &p, eta).abs() < 1e-12);
        assert!(poly_h_prime(&point, &p, eta).abs() < 1e-12);
    }

    #[test]
    fn discriminant_examples() {
        let p = quarter();
        let (dxi, _) = discriminants(&pt(0.8, -2.8), &p);
        assert!(dxi.abs() < 1e-12);
        let (dxi, _) = discriminants(&pt(1.0 / -1.7, -1.7), &p);
        assert!(dxi.abs() < 1e-12);
        let (dxi, deta) = discriminants(&pt(0.3, -2.2), &p);
        assert!(dxi > 0.0 && deta > 0.0);
    }

    /// The algebraic discriminant of a quartic is `lead^6 prod (r_i - r_j)^2`.
    /// The displayed forms carry one extra factor of `1 - gc` (resp.
    /// `delta^2 - gc`).
    #[test]
    fn discriminants_match_root_products() {
        let p = quarter();
        for (g, c) in [(0.3, -2.2), (-0.1, -1.2), (0.5, -0.7), (2.0, -3.5)] {
            let point = pt(g, c);
            let roots = solve_roots(&point, &p);
            let (dxi, deta) = discriminants(&point, &p);
            let product = |pair: RootPair| -> f64 {
                let RootPair::Real(a, b) = pair else { panic!("complex") };
                let r = [-1.0, 1.0, a, b];
                let mut acc = c.powi(6);
                for i in 0..4 {
                    for j in i + 1..4 {
                        acc *= (r[i] - r[j]).powi(2);
                    }
                }
                acc
            };
            let d2 = p.delta() * p.delta();
            assert_relative_eq!(dxi, product(roots.xi_roots) * (1.0 - g * c), max_relative = 1e-10);
            assert_relative_eq!(deta, product(roots.eta_roots) * (d2 - g * c), max_relative = 1e-10);
        }
    }

    #[test]
    fn roots_satellite_example() {
        let p = quarter();
        let r = solve_roots(&pt(0.3, -2.2), &p);
        let RootPair::Real(x1, x2) = r.xi_roots else { panic!() };
        let RootPair::Real(e1, e2) = r.eta_roots else { panic!() };
        assert_relative_eq!(x1, (-1.0 + 1.66f64.sqrt()) / -2.2, epsilon = 1e-15);
        assert_relative_eq!(x1, -0.131_095_4, epsilon = 1e-7);
        assert_relative_eq!(x2, (-1.0 - 1.66f64.sqrt()) / -2.2, epsilon = 1e-15);
        assert_relative_eq!(x2, 1.040_186_3, epsilon = 1e-7);
        assert_relative_eq!(e1, (-0.5 + 0.91f64.sqrt()) / -2.2, epsilon = 1e-15);
        assert_relative_eq!(e2, (-0.5 - 0.91f64.sqrt()) / -2.2, epsilon = 1e-15);
        assert_relative_eq!(e1, -0.206_336_0, epsilon = 1e-7);
        assert_relative_eq!(e2, 0.660_881_5, epsilon = 1e-7);
        assert_eq!(r.xi_range, Some(Interval { lo: 1.0, hi: x2 }));
        assert_eq!(r.eta_ranges, vec![Interval { lo: -1.0, hi: e1 }, Interval { lo: e2, hi: 1.0 }]);
    }

    #[test]
    fn roots_lemniscate_example() {
        let p = quarter();
        let r = solve_roots(&pt(-0.3, -1.2), &p);
        assert_eq!(r.eta_roots, RootPair::Complex);
        let RootPair::Real(x1, x2) = r.xi_roots else { panic!() };
        assert_relative_eq!(x1, 1.0 / 6.0, epsilon = 1e-12);
        assert_relative_eq!(x2, 1.5, epsilon = 1e-12);
        assert!(r.eta_full());
    }

    #[test]
    fn classify_examples() {
        let p = quarter();
        let s = classify(&pt(0.3, -2.2), &p);
        assert_eq!(s.kind, Region::S);
        assert_eq!(s.component_hint, Some(Component::Both));
        assert_eq!(classify(&pt(-0.3, -1.2), &p).kind, Region::L);
        assert_eq!(classify(&pt(-2.0, -1.2), &p).kind, Region::Forbidden);
        assert_eq!(classify(&pt(2.0, -2.2), &p).kind, Region::SPrime);
        // ξ1 > 1, no η roots in range: planetary
        assert_eq!(classify(&pt(-1.7, -0.5), &p).kind, Region::P);
        assert_eq!(classify(&pt(0.25 / -1.2, -1.2), &p).kind, Region::OnCurve(Curve::L4));
        assert_eq!(classify(&pt(-p.c_j() - 2.0, p.c_j()), &p).kind, Region::SaddleValue);
    }

    #[test]
    fn satellite_band_at_quarter_mass() {
        let p = quarter();
        for g in [0.21, 0.7, 1.19] {
            assert_eq!(classify(&pt(g, -2.2), &p).kind, Region::S);
        }
        for g in [1.21, 2.0, 3.19] {
            assert_eq!(classify(&pt(g, -2.2), &p).kind, Region::SPrime);
        }
        assert_eq!(classify(&pt(3.21, -2.2), &p).kind, Region::Forbidden);
        assert_eq!(classify(&pt(0.19, -2.2), &p).kind, Region::Forbidden);
    }

    #[test]
    fn equal_mass_has_no_s_prime() {
        let p = SystemParams::new(0.5).unwrap();
        for i in 0..200 {
            for j in 1..100 {
                let point = pt(-3.0 + 0.03 * i as f64, -0.03 * j as f64);
                assert_ne!(classify(&point, &p).kind, Region::SPrime);
            }
        }
    }

    proptest! {
        #[test]
        fn admissible_intervals_have_right_sign(
            mu in 0.01f64..0.5, g in -3.0f64..3.0, c in -3.0f64..-0.05,
        ) {
            let p = SystemParams::new(mu).unwrap();
            let point = pt(g, c);
            let r = solve_roots(&point, &p);
            if let RootPair::Real(a, b) = r.xi_roots { prop_assert!(a <= b); }
            if let RootPair::Real(a, b) = r.eta_roots { prop_assert!(a <= b); }
            if let Some(iv) = r.xi_range {
                for k in 1..=32 {
                    let x = iv.lo + iv.width() * k as f64 / 33.0;
                    prop_assert!(poly_f(&point, x) >= -1e-12);
                }
            }
            for iv in &r.eta_ranges {
                for k in 1..=32 {
                    let x = iv.lo + iv.width() * k as f64 / 33.0;
                    prop_assert!(poly_h(&point, &p, x) >= -1e-12);
                }
            }
        }

        #[test]
        fn l4_double_root(mu in 0.01f64..0.49, t in 0.01f64..0.99) {
            let p = SystemParams::new(mu).unwrap();
            let c = p.c_j() + t * (p.c_h() - p.c_j());
            let g = Curve::L4.g_at(c, &p).unwrap();
            let point = pt(g, c);
            let eta = -p.delta() / c;
            prop_assert!(poly_h(&point, &p, eta).abs() < 1e-10);
            prop_assert!(poly_h_prime(&point, &p, eta).abs() < 1e-10);
        }
    }
}
