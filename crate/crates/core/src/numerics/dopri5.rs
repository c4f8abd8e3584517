//! Embedded Runge-Kutta 5(4) stepper (Dormand-Prince coefficients) on
//! complex states over a real time axis, with PI step-size control and an
//! explicit propose/commit interface so callers can reject steps for
//! reasons the error estimate cannot see (root collisions).

use crate::error::{Error, Result};
use crate::scalar::Complex64;

use super::ToleranceConfig;

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// difference between the 5th- and 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2; // strongest shrink per retry
const FAC_MAX: f64 = 10.0; // strongest growth per step

/// A step the error estimator already accepted; the caller may still
/// reject it externally.
pub struct Proposal {
    pub t_new: f64,
    pub y_new: Vec<Complex64>,
    k_last: Vec<Complex64>,
    err: f64,
    h_used: f64,
}

pub struct Dopri5<F>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    f: F,
    pub t: f64,
    pub y: Vec<Complex64>,
    t_end: f64,
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
    facold: f64,
    k1: Vec<Complex64>,
    scratch: Vec<Vec<Complex64>>,
}

impl<F> Dopri5<F>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    pub fn new(mut f: F, t0: f64, y0: Vec<Complex64>, t_end: f64, cfg: &ToleranceConfig) -> Self {
        let dim = y0.len();
        let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
        f(t0, &y0, &mut k1);
        // rough first step from the scaled norms of y and f
        let sc: Vec<f64> = y0
            .iter()
            .map(|z| cfg.abs_tol + cfg.rel_tol * z.norm())
            .collect();
        let d0 = rms(y0.iter().map(|z| z.norm()), &sc);
        let d1 = rms(k1.iter().map(|z| z.norm()), &sc);
        let mut h0 = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let span = (t_end - t0).abs();
        h0 = h0.min(span).min(cfg.max_step).max(1e-12);
        Dopri5 {
            f,
            t: t0,
            y: y0,
            t_end,
            h: h0,
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            max_step: cfg.max_step,
            facold: 1e-4,
            k1,
            scratch: vec![vec![Complex64::new(0.0, 0.0); dim]; 7],
        }
    }

    pub fn done(&self) -> bool {
        let scale = self.t.abs().max(self.t_end.abs()).max(1.0);
        self.t_end - self.t <= 8.0 * f64::EPSILON * scale
    }

    /// Force the next proposal to land exactly on `t_target` if it would
    /// otherwise step past it.
    fn effective_h(&self, t_target: f64) -> f64 {
        let mut h = self.h.min(self.max_step);
        if self.t + h > t_target {
            h = t_target - self.t;
        }
        h
    }

    /// Attempt steps (shrinking on error-estimate rejections) until one
    /// passes the embedded error test; does not advance the state.
    pub fn propose(&mut self, t_target: f64) -> Result<Proposal> {
        let dim = self.y.len();
        for _attempt in 0..100 {
            let h = self.effective_h(t_target);
            if h <= f64::EPSILON * self.t.abs().max(1.0) * 4.0 {
                return Err(Error::StepSizeUnderflow(self.t));
            }
            // stages
            let mut k = std::mem::take(&mut self.scratch);
            k[0].copy_from_slice(&self.k1);
            let mut y_stage = vec![Complex64::new(0.0, 0.0); dim];
            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = A[s - 1][j];
                        if a != 0.0 {
                            acc += kj[i] * a;
                        }
                    }
                    y_stage[i] = self.y[i] + acc * h;
                }
                let t_stage = self.t + C[s - 1] * h;
                (self.f)(t_stage, &y_stage, &mut k[s]);
            }
            // 5th-order solution is stage 7's argument (FSAL)
            let mut y_new = vec![Complex64::new(0.0, 0.0); dim];
            for i in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate().take(6) {
                    let a = A[5][j];
                    if a != 0.0 {
                        acc += kj[i] * a;
                    }
                }
                y_new[i] = self.y[i] + acc * h;
            }
            // error estimate
            let mut err_acc = 0.0;
            for i in 0..dim {
                let mut e = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        e += kj[i] * E[j];
                    }
                }
                let sc = self.abs_tol + self.rel_tol * self.y[i].norm().max(y_new[i].norm());
                let r = (e.norm() * h.abs()) / sc;
                err_acc += r * r;
            }
            let err = (err_acc / dim as f64).sqrt();
            let k_last = k[6].clone();
            self.scratch = k;

            if !err.is_finite() {
                // blow-up inside the stages; shrink hard
                self.h = h * FAC_MIN;
                continue;
            }
            if err <= 1.0 {
                return Ok(Proposal {
                    t_new: self.t + h,
                    y_new,
                    k_last,
                    err: err.max(1e-4),
                    h_used: h,
                });
            }
            let fac11 = err.powf(EXPO1);
            self.h = h / (fac11 / SAFE).min(1.0 / FAC_MIN);
        }
        Err(Error::StepSizeUnderflow(self.t))
    }

    /// Advance to an accepted proposal and update the controller.
    pub fn commit(&mut self, p: Proposal) {
        let fac11 = p.err.powf(EXPO1);
        let fac = (fac11 / self.facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        self.h = (p.h_used / fac).min(self.max_step);
        self.facold = p.err;
        self.t = p.t_new;
        self.y = p.y_new;
        self.k1 = p.k_last;
    }

    /// External rejection: shrink the step and try again.
    pub fn refine(&mut self, factor: f64) {
        self.h *= factor;
    }
}

fn rms(values: impl Iterator<Item = f64>, sc: &[f64]) -> f64 {
    let mut acc = 0.0;
    let mut n = 0usize;
    for (v, s) in values.zip(sc) {
        let r = v / s;
        acc += r * r;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        (acc / n as f64).sqrt()
    }
}
