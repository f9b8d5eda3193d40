//! Dormand–Prince 5(4) integrator for small autonomous systems, with cubic
//! Hermite dense output between accepted steps.

use crate::error::{Error, Result};

/// Accepted steps of an integration: times, states and state derivatives.
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
}

impl<const N: usize> OdeSolution<N> {
    /// Cubic Hermite interpolation between the bracketing accepted steps.
    /// Times outside the integrated span are clamped to the end points.
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let last = self.t.len() - 1;
        if t <= self.t[0] {
            return self.y[0];
        }
        if t >= self.t[last] {
            return self.y[last];
        }
        let i = self.t.partition_point(|&ti| ti <= t) - 1;
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let mut out = [0.0; N];
        for (k, o) in out.iter_mut().enumerate() {
            *o = h00 * self.y[i][k] + h10 * h * self.dy[i][k] + h01 * self.y[i + 1][k] + h11 * h * self.dy[i + 1][k];
        }
        out
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: f64) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = tol + tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Integrates `y' = f(y)` from `t0` to `t_end` with mixed absolute/relative
/// tolerance `tol` on the local error of every accepted step.
pub fn dopri5<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t_end: f64, tol: f64) -> Result<OdeSolution<N>>
where
    F: FnMut(&[f64; N]) -> [f64; N],
{
    dopri5_capped(f, t0, y0, t_end, tol, f64::INFINITY)
}

/// As [`dopri5`], with steps no longer than `max_step`. Capping the step keeps
/// the cubic Hermite dense output accurate when the local error allows very
/// long steps.
pub fn dopri5_capped<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: f64,
    max_step: f64,
) -> Result<OdeSolution<N>>
where
    F: FnMut(&[f64; N]) -> [f64; N],
{
    if !(max_step > 0.0) {
        return Err(Error::InvalidParameter { name: "max_step", value: max_step, reason: "must be > 0" });
    }
    if !(t_end > t0) {
        return Err(Error::InvalidParameter { name: "t_end", value: t_end, reason: "must exceed the start time" });
    }
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidParameter { name: "tol", value: tol, reason: "must lie in (0, 1e-3]" });
    }

    let span = t_end - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(&y);

    let mut sol = OdeSolution { t: vec![t], y: vec![y], dy: vec![k[0]] };

    let scale = |v: &[f64; N]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let d0 = scale(&y);
    let d1 = scale(&k[0]);
    let mut h = if d0 > 1e-5 && d1 > 1e-5 { 0.01 * d0 / d1 } else { 1e-6 * span.max(1e-3) };
    h = h.min(span).min(max_step);

    loop {
        h = h.min(max_step);
        if t + h > t_end {
            h = t_end - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(&ys);
            debug_assert!(C[s] >= 0.0);
        }
        // Stage 7 is evaluated at the fifth-order solution (FSAL).
        let mut y_new = y;
        for i in 0..N {
            y_new[i] += h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
        }
        let k_new = f(&y_new);
        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h * ((0..6).map(|j| E[j] * k[j][i]).sum::<f64>() + E[6] * k_new[i]);
        }
        let norm = error_norm(&err, &y, &y_new, tol);
        if !norm.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
        } else if norm <= 1.0 {
            t += h;
            y = y_new;
            k[0] = k_new;
            sol.t.push(t);
            sol.y.push(y);
            sol.dy.push(k_new);
            if t >= t_end {
                return Ok(sol);
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * norm.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h < 1e-13 * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_phase() {
        let sol = dopri5(|y| [y[1], -y[0]], 0.0, [1.0, 0.0], 10.0, 1e-12).unwrap();
        let end = *sol.y.last().unwrap();
        assert!((end[0] - 10f64.cos()).abs() < 1e-10);
        assert!((end[1] + 10f64.sin()).abs() < 1e-10);
        let mid = sol.interpolate(3.3);
        assert!((mid[0] - 3.3f64.cos()).abs() < 1e-6);
    }

    #[test]
    fn fifth_order_convergence() {
        // Global error should shrink by roughly tol ratio; check monotone decrease.
        let run = |tol: f64| {
            let sol = dopri5(|y| [-y[0] * y[0]], 0.0, [1.0], 5.0, tol).unwrap();
            (sol.y.last().unwrap()[0] - 1.0 / 6.0).abs()
        };
        let coarse = run(1e-6);
        let fine = run(1e-10);
        assert!(fine < coarse * 1e-2, "{coarse:e} -> {fine:e}");
        assert!(fine < 1e-10);
    }

    #[test]
    fn finite_time_blow_up_reports_underflow() {
        // y' = y², y(0) = 1 blows up at t = 1.
        let err = dopri5(|y| [y[0] * y[0]], 0.0, [1.0], 2.0, 1e-8).unwrap_err();
        match err {
            Error::StepSizeUnderflow { t } => assert!((t - 1.0).abs() < 1e-3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_cap_is_respected() {
        let sol = dopri5_capped(|_| [1.0], 0.0, [0.0], 1.0, 1e-8, 0.1).unwrap();
        assert!(sol.t.windows(2).all(|w| w[1] - w[0] <= 0.1 + 1e-15));
        assert!(sol.t.len() >= 11);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(dopri5(|y| [y[0]], 0.0, [1.0], 0.0, 1e-8).is_err());
        assert!(dopri5(|y| [y[0]], 0.0, [1.0], 1.0, 1e-2).is_err());
    }
}
