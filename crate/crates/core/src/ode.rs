//! Adaptive Dormand–Prince 5(4) integrator with continuous (dense) output.
//!
//! Coefficients and the fourth-order continuous extension follow Hairer,
//! Nørsett & Wanner, *Solving Ordinary Differential Equations I*.

use crate::error::{BeamError, Result};

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

// error estimate: difference between 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Mixed relative/absolute local error tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

/// One accepted step with the data needed to interpolate inside it.
#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        std::array::from_fn(|i| {
            r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])))
        })
    }
}

/// Integration result with dense output over `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    t_start: f64,
    y_start: [f64; N],
    t_end: f64,
    y_end: [f64; N],
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> [f64; N] {
        self.y_end
    }

    /// Interpolated state at `t`, clamped to the integration interval.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t <= self.t_start {
            return self.y_start;
        }
        if t >= self.t_end {
            return self.y_end;
        }
        let idx = self
            .steps
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }
}

/// Dormand–Prince 5(4) stepper configuration.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub tol: Tolerances,
    pub max_steps: usize,
    /// Upper bound on |h|; `None` means the full interval.
    pub h_max: Option<f64>,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            max_steps: 100_000,
            h_max: None,
        }
    }
}

impl Dopri5 {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Integrates `dy/dt = f(t, y)` forward from `t0` to `t_end`.
    ///
    /// The integrator restarts exactly at each interior breakpoint, which
    /// keeps the error control honest across kinks in the right-hand side.
    pub fn integrate<const N: usize, F>(
        &self,
        mut f: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        breakpoints: &[f64],
    ) -> Result<DenseSolution<N>>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        if !(t0.is_finite() && t_end.is_finite()) || t_end < t0 {
            return Err(BeamError::Integration(format!(
                "invalid interval [{t0}, {t_end}]"
            )));
        }
        let mut sol = DenseSolution {
            steps: Vec::new(),
            t_start: t0,
            y_start: y0,
            t_end: t0,
            y_end: y0,
            accepted_steps: 0,
            rejected_steps: 0,
            evaluations: 0,
        };
        if t_end == t0 {
            return Ok(sol);
        }

        let mut stops: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&b| b > t0 && b < t_end)
            .collect();
        stops.sort_by(f64::total_cmp);
        stops.push(t_end);

        let mut t = t0;
        let mut y = y0;
        for stop in stops {
            if stop <= t {
                continue;
            }
            self.segment(&mut f, &mut t, &mut y, stop, &mut sol)?;
        }
        sol.t_end = t;
        sol.y_end = y;
        Ok(sol)
    }

    fn segment<const N: usize, F>(
        &self,
        f: &mut F,
        t: &mut f64,
        y: &mut [f64; N],
        t_stop: f64,
        sol: &mut DenseSolution<N>,
    ) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let Tolerances { rtol, atol } = self.tol;
        let span = t_stop - *t;
        let h_max = self.h_max.unwrap_or(span).min(span);

        let mut k1 = f(*t, y);
        sol.evaluations += 1;
        let mut h = self.initial_step(f, *t, y, &k1, h_max, sol);
        let mut last_rejected = false;

        loop {
            if sol.accepted_steps + sol.rejected_steps >= self.max_steps {
                return Err(BeamError::Integration(format!(
                    "step limit {} reached at t = {}",
                    self.max_steps, *t
                )));
            }
            let remaining = t_stop - *t;
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            if h <= f64::EPSILON * t.abs().max(1.0) {
                return Err(BeamError::Integration(format!(
                    "step size underflow at t = {}",
                    *t
                )));
            }

            let stage = |coeffs: &[(f64, &[f64; N])]| -> [f64; N] {
                std::array::from_fn(|i| {
                    y[i] + h * coeffs.iter().map(|(a, k)| a * k[i]).sum::<f64>()
                })
            };
            let k2 = f(*t + C2 * h, &stage(&[(A21, &k1)]));
            let k3 = f(*t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)]));
            let k4 = f(*t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                *t + C5 * h,
                &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                *t + h,
                &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = stage(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if last { t_stop } else { *t + h };
            let k7 = f(t_new, &y_new);
            sol.evaluations += 6;

            let mut err_sq = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / sc).powi(2);
            }
            let err = (err_sq / N as f64).sqrt();

            if err <= 1.0 {
                let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
                let rcont = [
                    *y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i])
                    }),
                ];
                sol.steps.push(DenseStep { t0: *t, h, rcont });
                sol.accepted_steps += 1;

                *t = t_new;
                *y = y_new;
                k1 = k7;
                if last {
                    return Ok(());
                }
                let mut factor = 0.9 * err.max(1e-10).powf(-0.2);
                factor = factor.clamp(0.2, 5.0);
                if last_rejected {
                    factor = factor.min(1.0);
                }
                h = (h * factor).min(h_max);
                last_rejected = false;
            } else {
                sol.rejected_steps += 1;
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).max(0.2)
                } else {
                    0.1
                };
                h *= factor;
                last_rejected = true;
            }
        }
    }

    fn initial_step<const N: usize, F>(
        &self,
        f: &mut F,
        t: f64,
        y: &[f64; N],
        k1: &[f64; N],
        h_max: f64,
        sol: &mut DenseSolution<N>,
    ) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let Tolerances { rtol, atol } = self.tol;
        let norm = |v: &[f64; N]| -> f64 {
            let s: f64 = (0..N)
                .map(|i| (v[i] / (atol + rtol * y[i].abs())).powi(2))
                .sum();
            (s / N as f64).sqrt()
        };
        let d0 = norm(y);
        let d1 = norm(k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
        .min(h_max);
        let y1: [f64; N] = std::array::from_fn(|i| y[i] + h0 * k1[i]);
        let k2 = f(t + h0, &y1);
        sol.evaluations += 1;
        let diff: [f64; N] = std::array::from_fn(|i| k2[i] - k1[i]);
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(h_max)
    }
}
