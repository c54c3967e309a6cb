//! Dormand–Prince 5(4) with PI step-size control and the quartic continuous
//! extension, over fixed-size state vectors.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const BETA: f64 = 0.04;
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn y0(&self) -> [f64; N] {
        self.rcont[0]
    }

    pub fn y1(&self) -> [f64; N] {
        std::array::from_fn(|i| self.rcont[0][i] + self.rcont[1][i])
    }

    /// Interpolated state at `t` (meant for `t` within the step).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
        })
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = if self.h >= 0.0 { (self.t0, self.t1()) } else { (self.t1(), self.t0) };
        a <= t && t <= b
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Used as both relative and absolute tolerance.
    pub tol: f64,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
    pub max_steps: usize,
    /// Upper bound on `|h|`.
    pub h_max: f64,
    /// Control the local error per unit of `t` (`err <= tol |h|`) rather
    /// than per step, so that the global error grows like `tol * span`.
    pub per_unit_step: bool,
}

impl Options {
    pub fn new(tol: f64) -> Self {
        Self { tol, h0: None, max_steps: 50_000_000, h_max: f64::INFINITY, per_unit_step: false }
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

fn rms_norm<const N: usize>(e: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: f64) -> f64 {
    let s: f64 = (0..N)
        .map(|i| {
            let sk = tol + tol * y0[i].abs().max(y1[i].abs());
            (e[i] / sk).powi(2)
        })
        .sum();
    (s / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], dir: f64, tol: f64, h_max: f64) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let sk = |i: usize| tol + tol * y0[i].abs();
    let dnf = (0..N).map(|i| (f0[i] / sk(i)).powi(2)).sum::<f64>() / N as f64;
    let dny = (0..N).map(|i| (y0[i] / sk(i)).powi(2)).sum::<f64>() / N as f64;
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
    h = h.min(h_max);
    let y1 = axpy(y0, dir * h, &[(1.0, f0)]);
    let f1 = f(t0 + dir * h, &y1);
    let der2 = ((0..N).map(|i| ((f1[i] - f0[i]) / sk(i)).powi(2)).sum::<f64>() / N as f64).sqrt() / h;
    let der12 = der2.abs().max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(h_max)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction).
///
/// `observer` sees every accepted step and may stop the integration early
/// by returning `false`. Returns the final time and state.
pub fn integrate<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    mut observer: O,
) -> Result<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&DenseStep<N>) -> bool,
{
    let tol = opts.tol;
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tolerance must be positive, got {tol}")));
    }
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    if span == 0.0 {
        return Ok((t0, y0));
    }
    // local error is O(h^5), or O(h^4) once divided by h
    let order = if opts.per_unit_step { 4.0 } else { 5.0 };
    let expo1 = 1.0 / order - BETA * 0.75;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let h_max = opts.h_max.min(span);
    let mut h = opts.h0.map(f64::abs).unwrap_or_else(|| initial_step(&f, t, &y, &k1, dir, tol, h_max));
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            return Err(Error::Validation(format!("step limit {} reached at t = {t}", opts.max_steps)));
        }
        steps += 1;
        let mut last = false;
        if (t + dir * h - t_end) * dir >= 0.0 {
            h = (t_end - t).abs();
            last = true;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow(t));
        }
        let hs = dir * h;

        let y2 = axpy(&y, hs, &[(A21, &k1)]);
        let k2 = f(t + C2 * hs, &y2);
        let y3 = axpy(&y, hs, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + C3 * hs, &y3);
        let y4 = axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + C4 * hs, &y4);
        let y5 = axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + C5 * hs, &y5);
        let y6 = axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + hs, &y6);
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + hs, &y_new);

        let e: [f64; N] = std::array::from_fn(|i| {
            hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let mut err = rms_norm(&e, &y, &y_new, tol);
        if opts.per_unit_step {
            err /= h;
        }
        if !err.is_finite() {
            rejected = true;
            h *= FAC_MIN;
            continue;
        }
        let fac11 = err.powf(expo1);
        let fac = (fac11 / err_old.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if err <= 1.0 {
            err_old = err.max(1e-4);
            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| hs * k1[i] - ydiff[i]);
            let step = DenseStep {
                t0: t,
                h: hs,
                rcont: [
                    y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - hs * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ],
            };
            t = if last { t_end } else { t + hs };
            y = y_new;
            k1 = k7;
            if !observer(&step) || last {
                return Ok((t, y));
            }
            if rejected {
                h_new = h_new.min(h);
            }
            rejected = false;
            h = h_new.min(h_max);
        } else {
            h = h / (1.0 / FAC_MIN).min(fac11 / SAFE);
            rejected = true;
        }
    }
}
