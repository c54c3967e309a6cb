use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::rk::DenseStep;
use super::{q_lambda, q_nu};
use crate::bifurcation::EnergyMomentum;
use crate::params::SystemParams;

/// State at the end of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    /// `(lambda, nu, p_lambda, p_nu)` with `nu` unwrapped.
    pub state: [f64; 4],
    pub q: f64,
    pub q_lambda: f64,
}

#[derive(Serialize)]
struct Row {
    s: f64,
    lambda: f64,
    nu_wrapped: f64,
    nu_unwrapped: f64,
    p_lambda: f64,
    p_nu: f64,
    #[serde(rename = "Q")]
    q: f64,
    #[serde(rename = "Q_lambda")]
    q_lambda: f64,
}

/// `nu` reduced to `(-pi, pi]`.
pub fn wrap_angle(nu: f64) -> f64 {
    let w = nu.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// An integrated orbit of the regularized flow.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: SystemParams,
    pub start: EnergyMomentum,
    samples: Vec<Sample>,
    steps: Vec<DenseStep<4>>,
}

impl Trajectory {
    pub(crate) fn new(params: SystemParams, start: EnergyMomentum, y0: [f64; 4]) -> Self {
        let mut t = Self { params, start, samples: Vec::new(), steps: Vec::new() };
        let s0 = t.sample_at(0.0, y0);
        t.samples.push(s0);
        t
    }

    fn sample_at(&self, s: f64, y: [f64; 4]) -> Sample {
        let c = self.start.c;
        let ql = q_lambda(c, y[0], y[2]);
        Sample { s, state: y, q: ql + q_nu(self.params.delta(), c, y[1], y[3]), q_lambda: ql }
    }

    pub(crate) fn push(&mut self, step: &DenseStep<4>) -> Sample {
        let sample = self.sample_at(step.t1(), step.y1());
        self.steps.push(*step);
        self.samples.push(sample);
        sample
    }

    pub fn c(&self) -> f64 {
        self.start.c
    }

    pub fn g(&self) -> f64 {
        self.start.g
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn steps(&self) -> &[DenseStep<4>] {
        &self.steps
    }

    pub fn final_s(&self) -> f64 {
        self.samples.last().map_or(0.0, |x| x.s)
    }

    pub fn final_state(&self) -> [f64; 4] {
        self.samples.last().expect("a trajectory holds its initial sample").state
    }

    /// Dense state at `s`, or `None` outside the integrated span.
    pub fn eval(&self, s: f64) -> Option<[f64; 4]> {
        if s == 0.0 {
            return Some(self.samples[0].state);
        }
        let forward = self.final_s() >= 0.0;
        let i = self.steps.partition_point(|st| if forward { st.t1() < s } else { st.t1() > s });
        self.steps.get(i).filter(|st| st.contains(s)).map(|st| st.eval(s))
    }

    pub fn max_abs_q(&self) -> f64 {
        self.samples.iter().map(|x| x.q.abs()).fold(0.0, f64::max)
    }

    /// Largest `|Q_lambda - g|`.
    pub fn max_q_lambda_drift(&self) -> f64 {
        let g = self.start.g;
        self.samples.iter().map(|x| (x.q_lambda - g).abs()).fold(0.0, f64::max)
    }

    /// `(s, |Q|)` at roughly `count` evenly spaced samples.
    pub fn drift_log(&self, count: usize) -> Vec<(f64, f64)> {
        let stride = (self.samples.len() / count.max(1)).max(1);
        self.samples.iter().step_by(stride).map(|x| (x.s, x.q.abs())).collect()
    }

    /// One JSON object per sample.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> crate::Result<()> {
        for x in &self.samples {
            let [lambda, nu, p_lambda, p_nu] = x.state;
            let row = Row {
                s: x.s,
                lambda,
                nu_wrapped: wrap_angle(nu),
                nu_unwrapped: nu,
                p_lambda,
                p_nu,
                q: x.q,
                q_lambda: x.q_lambda,
            };
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n").map_err(|source| crate::Error::Io { path: "<stream>".into(), source })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{initial_state, integrate, PhaseChoice};

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn dense_eval_and_jsonl() {
        let p = SystemParams::new(0.25).unwrap();
        let pt = EnergyMomentum::new(0.3, -2.2).unwrap();
        let s0 = initial_state(&pt, &p, &PhaseChoice::default()).unwrap();
        let traj = integrate(&s0, &p, pt.c, 5.0, 1e-12).unwrap();
        let mid = traj.samples()[3];
        let e = traj.eval(mid.s).unwrap();
        for i in 0..4 {
            assert!((e[i] - mid.state[i]).abs() < 1e-12);
        }
        assert!(traj.eval(6.0).is_none());
        assert!(traj.max_q_lambda_drift() < 1e-9);

        let mut buf = Vec::new();
        traj.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in ["s", "lambda", "nu_wrapped", "nu_unwrapped", "p_lambda", "p_nu", "Q", "Q_lambda"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert_eq!(text.lines().count(), traj.samples().len());
    }
}
