//! Charts on phase space and the transformations among them.
//!
//! * Cartesian `(q1, q2, p1, p2)`.
//! * Elliptic `(xi, eta, p_xi, p_eta)` with `xi = |q-E| + |q-M| >= 1` and
//!   `eta = |q-E| - |q-M| in [-1, 1]`. The position map folds the upper and
//!   lower half planes together; converting back yields the upper preimage.
//! * Doubled `(lambda, nu, p_lambda, p_nu)` with `xi = cosh lambda`,
//!   `eta = cos nu`. `q1 + i q2 = cosh(lambda + i nu) / 2`, a two-to-one cover
//!   branched at the primaries; `(lambda, nu)` and `(-lambda, -nu)` project to
//!   the same point.
//!
//! Momenta are always transported so that `p . dq` is preserved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{hamiltonian_cartesian, SystemParams, EARTH, MOON};

/// Rounding slack when clipping into the arccos / arccosh domains.
pub const DOMAIN_CLIP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    Cartesian,
    Elliptic,
    Doubled,
}

/// One point of phase space, tagged with its chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub chart: Chart,
    /// Positions then momenta, in the chart's own variables.
    pub coords: [f64; 4],
}

impl PhaseState {
    pub fn cartesian(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        Self { chart: Chart::Cartesian, coords: [q1, q2, p1, p2] }
    }

    pub fn elliptic(xi: f64, eta: f64, p_xi: f64, p_eta: f64) -> Self {
        Self { chart: Chart::Elliptic, coords: [xi, eta, p_xi, p_eta] }
    }

    pub fn doubled(lambda: f64, nu: f64, p_lambda: f64, p_nu: f64) -> Self {
        Self { chart: Chart::Doubled, coords: [lambda, nu, p_lambda, p_nu] }
    }

    pub fn doubled_from(coords: [f64; 4]) -> Self {
        Self { chart: Chart::Doubled, coords }
    }

    pub fn positions(&self) -> [f64; 2] {
        [self.coords[0], self.coords[1]]
    }

    pub fn momenta(&self) -> [f64; 2] {
        [self.coords[2], self.coords[3]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Which preimage of the double cover to pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Branch {
    pub lambda: Sign,
    pub nu: Sign,
}

impl Branch {
    pub const PLUS: Branch = Branch { lambda: Sign::Plus, nu: Sign::Plus };
}

/// Values of the energy and the separation integral at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedPair {
    pub h_value: f64,
    pub g_value: f64,
}

fn clip_unit(eta: f64) -> f64 {
    if eta > 1.0 && eta <= 1.0 + DOMAIN_CLIP {
        1.0
    } else if eta < -1.0 && eta >= -1.0 - DOMAIN_CLIP {
        -1.0
    } else {
        eta
    }
}

fn clip_xi(xi: f64) -> f64 {
    if xi < 1.0 && xi >= 1.0 - DOMAIN_CLIP {
        1.0
    } else {
        xi
    }
}

fn distances(q1: f64, q2: f64) -> Result<(f64, f64)> {
    let r_e = (q1 - EARTH[0]).hypot(q2 - EARTH[1]);
    let r_m = (q1 - MOON[0]).hypot(q2 - MOON[1]);
    if r_e == 0.0 || r_m == 0.0 {
        return Err(Error::Singularity(q1, q2));
    }
    Ok((r_e, r_m))
}

/// Converts a Cartesian or Doubled state to the Elliptic chart.
///
/// Fails with [`Error::ChartSingularity`] (carrying `(xi, eta)`) on the axis
/// `q2 = 0`, where `xi = 1` or `|eta| = 1` and the momentum map degenerates.
pub fn to_elliptic(state: &PhaseState) -> Result<PhaseState> {
    match state.chart {
        Chart::Elliptic => Ok(*state),
        Chart::Cartesian => {
            let [q1, q2, p1, p2] = state.coords;
            let (r_e, r_m) = distances(q1, q2)?;
            let xi = clip_xi(r_e + r_m);
            let eta = clip_unit(r_e - r_m);
            let u = [(q1 - EARTH[0]) / r_e, (q2 - EARTH[1]) / r_e];
            let v = [(q1 - MOON[0]) / r_m, (q2 - MOON[1]) / r_m];
            let grad_xi = [u[0] + v[0], u[1] + v[1]];
            let grad_eta = [u[0] - v[0], u[1] - v[1]];
            // p = p_xi grad_xi + p_eta grad_eta
            let det = grad_xi[0] * grad_eta[1] - grad_xi[1] * grad_eta[0];
            if det.abs() < 1e-14 {
                return Err(Error::ChartSingularity { position: [xi, eta] });
            }
            let p_xi = (p1 * grad_eta[1] - p2 * grad_eta[0]) / det;
            let p_eta = (grad_xi[0] * p2 - grad_xi[1] * p1) / det;
            Ok(PhaseState::elliptic(xi, eta, p_xi, p_eta))
        }
        Chart::Doubled => {
            let [lambda, nu, p_lambda, p_nu] = state.coords;
            let xi = lambda.cosh();
            let eta = nu.cos();
            let (sh, sn) = (lambda.sinh(), nu.sin());
            if sh == 0.0 || sn == 0.0 {
                return Err(Error::ChartSingularity { position: [xi, eta] });
            }
            Ok(PhaseState::elliptic(xi, eta, p_lambda / sh, -p_nu / sn))
        }
    }
}

/// Converts an Elliptic or Cartesian state to the Doubled chart.
///
/// From the Elliptic chart both signs come from `branch`. From the Cartesian
/// chart only the sign of `lambda` is free; the sign of `nu` follows from
/// `q2 = sinh(lambda) sin(nu) / 2` and `branch.nu` is used on the axis.
pub fn to_doubled(state: &PhaseState, branch: Branch) -> Result<PhaseState> {
    match state.chart {
        Chart::Doubled => Ok(*state),
        Chart::Elliptic => {
            let [xi, eta, p_xi, p_eta] = state.coords;
            let xi = clip_xi(xi);
            let eta = clip_unit(eta);
            if xi < 1.0 || !(-1.0..=1.0).contains(&eta) {
                return Err(Error::Validation(format!(
                    "elliptic positions out of range: xi = {xi}, eta = {eta}"
                )));
            }
            let lambda = branch.lambda.value() * xi.acosh();
            let nu = branch.nu.value() * eta.acos();
            // Jacobian factors vanish on the axis; the product is then zero
            // by continuity even though p_xi or p_eta may be unbounded.
            let (sh, sn) = (lambda.sinh(), nu.sin());
            let p_lambda = if sh == 0.0 { 0.0 } else { p_xi * sh };
            let p_nu = if sn == 0.0 { 0.0 } else { -p_eta * sn };
            Ok(PhaseState::doubled(lambda, nu, p_lambda, p_nu))
        }
        Chart::Cartesian => {
            let [q1, q2, p1, p2] = state.coords;
            let (r_e, r_m) = distances(q1, q2)?;
            let xi = clip_xi(r_e + r_m);
            let eta = clip_unit(r_e - r_m);
            let lambda = branch.lambda.value() * xi.acosh();
            let mut nu = eta.acos();
            let nu_sign = if q2 != 0.0 && lambda != 0.0 {
                q2.signum() * lambda.signum()
            } else {
                branch.nu.value()
            };
            nu *= nu_sign;
            let (sh, ch) = (lambda.sinh(), lambda.cosh());
            let (sn, cn) = (nu.sin(), nu.cos());
            // p_lambda = p . dq/dlambda, p_nu = p . dq/dnu
            let p_lambda = 0.5 * (p1 * sh * cn + p2 * ch * sn);
            let p_nu = 0.5 * (-p1 * ch * sn + p2 * sh * cn);
            Ok(PhaseState::doubled(lambda, nu, p_lambda, p_nu))
        }
    }
}

/// Converts a Doubled or Elliptic state to the Cartesian chart.
///
/// Fails with [`Error::ChartSingularity`] (carrying `q`) at the primaries.
pub fn to_cartesian(state: &PhaseState) -> Result<PhaseState> {
    match state.chart {
        Chart::Cartesian => Ok(*state),
        Chart::Elliptic => to_cartesian(&to_doubled(state, Branch::PLUS)?),
        Chart::Doubled => {
            let [lambda, nu, p_lambda, p_nu] = state.coords;
            let (sh, ch) = (lambda.sinh(), lambda.cosh());
            let (sn, cn) = (nu.sin(), nu.cos());
            let q = [0.5 * ch * cn, 0.5 * sh * sn];
            let denom = ch * ch - cn * cn;
            if denom == 0.0 {
                return Err(Error::ChartSingularity { position: q });
            }
            let p1 = 2.0 * (sh * cn * p_lambda - ch * sn * p_nu) / denom;
            let p2 = 2.0 * (ch * sn * p_lambda + sh * cn * p_nu) / denom;
            Ok(PhaseState::cartesian(q[0], q[1], p1, p2))
        }
    }
}

/// Cartesian position of a Doubled-chart configuration.
pub fn doubled_position(lambda: f64, nu: f64) -> [f64; 2] {
    [0.5 * lambda.cosh() * nu.cos(), 0.5 * lambda.sinh() * nu.sin()]
}

/// Evaluates `(H, G)` in whatever chart the state is in. Cartesian states are
/// read in the caller's frame.
pub fn evaluate_h_g(state: &PhaseState, params: &SystemParams) -> Result<ConservedPair> {
    let delta = params.delta();
    match state.chart {
        Chart::Elliptic => {
            let [xi, eta, p_xi, p_eta] = state.coords;
            let h_xi = 2.0 * (xi * xi - 1.0) * p_xi * p_xi - 2.0 * xi;
            let h_eta = 2.0 * (1.0 - eta * eta) * p_eta * p_eta + 2.0 * delta * eta;
            let denom = xi * xi - eta * eta;
            if denom == 0.0 {
                return Err(Error::ChartSingularity { position: [xi, eta] });
            }
            Ok(ConservedPair {
                h_value: (h_xi + h_eta) / denom,
                g_value: -(eta * eta * h_xi + xi * xi * h_eta) / denom,
            })
        }
        Chart::Doubled => {
            let [lambda, nu, p_lambda, p_nu] = state.coords;
            let (ch, cn) = (lambda.cosh(), nu.cos());
            let h_lambda = 2.0 * p_lambda * p_lambda - 2.0 * ch;
            let h_nu = 2.0 * p_nu * p_nu + 2.0 * delta * cn;
            let denom = ch * ch - cn * cn;
            if denom == 0.0 {
                return Err(Error::ChartSingularity { position: doubled_position(lambda, nu) });
            }
            Ok(ConservedPair {
                h_value: (h_lambda + h_nu) / denom,
                g_value: -(cn * cn * h_lambda + ch * ch * h_nu) / denom,
            })
        }
        Chart::Cartesian => {
            let h_value = hamiltonian_cartesian(params, state)?;
            let normalized = params.normalize_cartesian(state);
            let doubled = to_doubled(&normalized, Branch::PLUS)?;
            let g_value = evaluate_h_g(&doubled, params)?.g_value;
            Ok(ConservedPair { h_value, g_value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn elliptic_of_vertical_point() {
        let s = to_elliptic(&PhaseState::cartesian(0.0, 1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(s.coords[0], 2.0 * 1.25f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s.coords[0], 2.236_068_0, epsilon = 1e-7);
        assert_eq!(s.coords[1], 0.0);
        assert_eq!(s.coords[2], 0.0);
        assert_eq!(s.coords[3], 0.0);
    }

    #[test]
    fn axis_point_is_chart_singular() {
        match to_elliptic(&PhaseState::cartesian(1.0, 0.0, 0.1, 0.2)) {
            Err(Error::ChartSingularity { position }) => {
                assert_relative_eq!(position[0], 2.0, epsilon = 1e-15);
                assert_relative_eq!(position[1], 1.0, epsilon = 1e-15);
            }
            other => panic!("expected chart singularity, got {other:?}"),
        }
    }

    #[test]
    fn doubled_of_focus() {
        let s = to_doubled(&PhaseState::elliptic(1.0, 1.0, 3.0, -2.0), Branch::PLUS).unwrap();
        assert_eq!(s.coords, [0.0, 0.0, 0.0, 0.0]);
        let s = to_doubled(
            &PhaseState::elliptic(1.0, 1.0, 3.0, -2.0),
            Branch { lambda: Sign::Minus, nu: Sign::Minus },
        )
        .unwrap();
        assert_eq!(s.coords[2], 0.0);
        assert_eq!(s.coords[3], 0.0);
    }

    #[test]
    fn doubled_chain_rule_example() {
        let s = to_doubled(&PhaseState::elliptic(2.0, 0.0, 0.3, -0.1), Branch::PLUS).unwrap();
        assert_relative_eq!(s.coords[0], 1.316_957_896_924_816_6, epsilon = 1e-14);
        assert_relative_eq!(s.coords[1], std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(s.coords[2], 0.3 * 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(s.coords[2], 0.519_615_2, epsilon = 1e-7);
        assert_relative_eq!(s.coords[3], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn h_g_elliptic_example() {
        let p = SystemParams::new(0.25).unwrap();
        let pair = evaluate_h_g(&PhaseState::elliptic(2.0, 0.0, 0.0, 0.0), &p).unwrap();
        assert_relative_eq!(pair.h_value, -1.0, epsilon = 1e-15);
        assert_eq!(pair.g_value, 0.0);
        let cart = to_cartesian(&PhaseState::elliptic(2.0, 0.0, 0.0, 0.0)).unwrap();
        let h = hamiltonian_cartesian(&p, &cart).unwrap();
        assert_relative_eq!(h, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn h_vanishes_far_away() {
        let p = SystemParams::new(0.3).unwrap();
        let pair = evaluate_h_g(&PhaseState::elliptic(1e9, 0.2, 0.0, 0.0), &p).unwrap();
        assert!(pair.h_value < 0.0 && pair.h_value > -1e-8);
    }

    #[test]
    fn foci_are_singular_for_h_g() {
        let p = SystemParams::new(0.3).unwrap();
        assert!(matches!(
            evaluate_h_g(&PhaseState::doubled(0.0, 0.0, 0.1, 0.1), &p),
            Err(Error::ChartSingularity { .. })
        ));
        assert!(to_cartesian(&PhaseState::doubled(0.0, std::f64::consts::PI, 0.1, 0.1)).is_err());
    }

    fn random_elliptic() -> impl Strategy<Value = PhaseState> {
        (1.05f64..6.0, -0.95f64..0.95, -2.0f64..2.0, -2.0f64..2.0)
            .prop_map(|(xi, eta, a, b)| PhaseState::elliptic(xi, eta, a, b))
    }

    fn random_doubled() -> impl Strategy<Value = PhaseState> {
        (-2.5f64..2.5, -3.1f64..3.1, -2.0f64..2.0, -2.0f64..2.0)
            .prop_filter("off the axis", |(l, n, _, _)| l.abs() > 0.05 && n.sin().abs() > 0.05)
            .prop_map(|(l, n, a, b)| PhaseState::doubled(l, n, a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn elliptic_roundtrip(s in random_elliptic()) {
            let back = to_elliptic(&to_cartesian(&to_doubled(&s, Branch::PLUS).unwrap()).unwrap()).unwrap();
            for i in 0..4 {
                prop_assert!(close(back.coords[i], s.coords[i], 1e-10), "{:?} vs {:?}", back, s);
            }
        }

        #[test]
        fn doubled_roundtrip(s in random_doubled()) {
            let branch = Branch { lambda: if s.coords[0] < 0.0 { Sign::Minus } else { Sign::Plus }, nu: Sign::Plus };
            let back = to_doubled(&to_cartesian(&s).unwrap(), branch).unwrap();
            for i in 0..4 {
                prop_assert!(close(back.coords[i], s.coords[i], 1e-9), "{:?} vs {:?}", back, s);
            }
        }

        #[test]
        fn double_cover_consistency(s in random_doubled(), mu in 0.05f64..0.5) {
            let p = SystemParams::new(mu).unwrap();
            let [l, n, pl, pn] = s.coords;
            let mirror = PhaseState::doubled(-l, -n, -pl, -pn);
            let a = to_cartesian(&s).unwrap();
            let b = to_cartesian(&mirror).unwrap();
            for i in 0..4 {
                prop_assert!(close(a.coords[i], b.coords[i], 1e-12));
            }
            let ha = evaluate_h_g(&s, &p).unwrap();
            let hb = evaluate_h_g(&mirror, &p).unwrap();
            prop_assert!(close(ha.h_value, hb.h_value, 1e-12));
            prop_assert!(close(ha.g_value, hb.g_value, 1e-12));
        }

        #[test]
        fn h_g_chart_independent(s in random_doubled(), mu in 0.05f64..0.5) {
            let p = SystemParams::new(mu).unwrap();
            let d = evaluate_h_g(&s, &p).unwrap();
            let c = evaluate_h_g(&to_cartesian(&s).unwrap(), &p).unwrap();
            let e = evaluate_h_g(&to_elliptic(&s).unwrap(), &p).unwrap();
            prop_assert!(close(d.h_value, c.h_value, 1e-10));
            prop_assert!(close(d.h_value, e.h_value, 1e-10));
            prop_assert!(close(d.g_value, c.g_value, 1e-10));
            prop_assert!(close(d.g_value, e.g_value, 1e-10));
        }

        /// p . dq computed from finite differences of the position map agrees
        /// with p_lambda dlambda + p_nu dnu (and with p_xi dxi + p_eta deta).
        #[test]
        fn canonical_one_form(s in random_doubled(), dl in -1.0f64..1.0, dn in -1.0f64..1.0) {
            let [l, n, pl, pn] = s.coords;
            let cart = to_cartesian(&s).unwrap();
            let h = 1e-6;
            let qp = doubled_position(l + h * dl, n + h * dn);
            let qm = doubled_position(l - h * dl, n - h * dn);
            let dq = [(qp[0] - qm[0]) / (2.0 * h), (qp[1] - qm[1]) / (2.0 * h)];
            let lhs = cart.coords[2] * dq[0] + cart.coords[3] * dq[1];
            let rhs = pl * dl + pn * dn;
            // central differences lose ~eps/h relative to the summed magnitudes
            let scale = 1.0 + (cart.coords[2] * dq[0]).abs() + (cart.coords[3] * dq[1]).abs();
            prop_assert!((lhs - rhs).abs() <= 1e-8 * scale, "{lhs} vs {rhs}");

            let ell = to_elliptic(&s).unwrap();
            let dxi = ((l + h * dl).cosh() - (l - h * dl).cosh()) / (2.0 * h);
            let deta = ((n + h * dn).cos() - (n - h * dn).cos()) / (2.0 * h);
            let ell_form = ell.coords[2] * dxi + ell.coords[3] * deta;
            let scale = 1.0 + (ell.coords[2] * dxi).abs() + (ell.coords[3] * deta).abs();
            prop_assert!((ell_form - rhs).abs() <= 1e-8 * scale, "{ell_form} vs {rhs}");
        }
    }
}
