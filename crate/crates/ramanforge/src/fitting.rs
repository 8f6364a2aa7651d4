//! Nonlinear least-squares fits of decay curves.
//!
//! Levenberg-Marquardt with analytic Jacobians for the handful of model
//! shapes the benchmarks produce. Convergence means a relative parameter
//! step below 1e-9; parameter uncertainties come from the covariance
//! `(J^T J)^{-1} * s^2` at the optimum.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;
const STEP_TOLERANCE: f64 = 1e-9;

/// Model shapes understood by [`fit_decay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// `a * exp(-x / tau) + c`, params `[a, tau, c]`.
    Exponential,
    /// `a * exp(-(x / tau)^2) + c`, params `[a, tau, c]`; `tau` is the 1/e
    /// point.
    Gaussian,
    /// `a * exp(-x / tau) * cos(2 pi f x + phi) + c`,
    /// params `[a, tau, f, phi, c]`.
    DampedCosine,
    /// `a / sqrt(1 + (d x)^2)`, params `[a, d]`: the dephasing envelope of
    /// an exponentially distributed quasi-static detuning with mean `d`.
    RamseyEnvelope,
}

impl DecayModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Exponential => "exponential",
            Self::Gaussian => "gaussian",
            Self::DampedCosine => "damped_cosine",
            Self::RamseyEnvelope => "ramsey_envelope",
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Self::Exponential | Self::Gaussian => &["amplitude", "tau", "offset"],
            Self::DampedCosine => &["amplitude", "tau", "frequency", "phase", "offset"],
            Self::RamseyEnvelope => &["amplitude", "detuning_mean"],
        }
    }

    fn param_count(&self) -> usize {
        self.param_names().len()
    }

    fn eval(&self, p: &[f64], x: f64) -> f64 {
        match self {
            Self::Exponential => p[0] * (-x / p[1]).exp() + p[2],
            Self::Gaussian => {
                let u = x / p[1];
                p[0] * (-u * u).exp() + p[2]
            }
            Self::DampedCosine => {
                let phase = std::f64::consts::TAU * p[2] * x + p[3];
                p[0] * (-x / p[1]).exp() * phase.cos() + p[4]
            }
            Self::RamseyEnvelope => {
                let u = p[1] * x;
                p[0] / (1.0 + u * u).sqrt()
            }
        }
    }

    fn jacobian_row(&self, p: &[f64], x: f64, row: &mut [f64]) {
        match self {
            Self::Exponential => {
                let e = (-x / p[1]).exp();
                row[0] = e;
                row[1] = p[0] * x / (p[1] * p[1]) * e;
                row[2] = 1.0;
            }
            Self::Gaussian => {
                let u = x / p[1];
                let e = (-u * u).exp();
                row[0] = e;
                row[1] = p[0] * 2.0 * x * x / (p[1] * p[1] * p[1]) * e;
                row[2] = 1.0;
            }
            Self::DampedCosine => {
                let e = (-x / p[1]).exp();
                let phase = std::f64::consts::TAU * p[2] * x + p[3];
                let (s, c) = phase.sin_cos();
                row[0] = e * c;
                row[1] = p[0] * x / (p[1] * p[1]) * e * c;
                row[2] = -p[0] * e * s * std::f64::consts::TAU * x;
                row[3] = -p[0] * e * s;
                row[4] = 1.0;
            }
            Self::RamseyEnvelope => {
                let u = p[1] * x;
                let g = 1.0 / (1.0 + u * u).sqrt();
                row[0] = g;
                row[1] = -p[0] * p[1] * x * x * g * g * g;
            }
        }
    }

    fn initial_guess(&self, xs: &[f64], ys: &[f64]) -> Vec<f64> {
        let span = xs.last().unwrap() - xs[0];
        let span = if span > 0.0 { span } else { 1.0 };
        match self {
            Self::Exponential | Self::Gaussian => {
                let tail = (ys.len() / 10).max(1);
                let c = ys[ys.len() - tail..].iter().sum::<f64>() / tail as f64;
                let a = ys[0] - c;
                let target = c + a / std::f64::consts::E;
                let mut tau = span / 3.0;
                if a.abs() > 1e-12 {
                    for w in xs.windows(2).zip(ys.windows(2)) {
                        let ((x0, x1), (y0, y1)) = ((w.0[0], w.0[1]), (w.1[0], w.1[1]));
                        if (y0 - target) * (y1 - target) <= 0.0 && y0 != y1 {
                            tau = x0 + (target - y0) / (y1 - y0) * (x1 - x0);
                            break;
                        }
                    }
                }
                vec![a, tau.max(span * 1e-3), c]
            }
            Self::DampedCosine => {
                let n = ys.len() as f64;
                let c = ys.iter().sum::<f64>() / n;
                // coarse periodogram over resolvable frequencies
                let mut best = (0.5 / span, 0.0, num_complex::Complex64::new(0.0, 0.0));
                let f_max = 0.5 * n / span;
                let grid = (4.0 * n) as usize;
                for i in 1..=grid {
                    let f = f_max * i as f64 / grid as f64;
                    let mut acc = num_complex::Complex64::new(0.0, 0.0);
                    for (&x, &y) in xs.iter().zip(ys) {
                        acc += (y - c)
                            * num_complex::Complex64::from_polar(
                                1.0,
                                -std::f64::consts::TAU * f * x,
                            );
                    }
                    if acc.norm() > best.1 {
                        best = (f, acc.norm(), acc);
                    }
                }
                let amplitude = 2.0 * best.1 / n;
                vec![amplitude.max(1e-6), span, best.0, best.2.arg(), c]
            }
            Self::RamseyEnvelope => {
                let a = ys[0].max(1e-6);
                let target = 0.5 * a;
                let mut d = 1.0 / span;
                for (&x, &y) in xs.iter().zip(ys) {
                    if y <= target && x > 0.0 {
                        d = 3.0f64.sqrt() / x;
                        break;
                    }
                }
                vec![a, d]
            }
        }
    }
}

/// A converged fit with covariance-derived one-sigma uncertainties.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: DecayModel,
    pub params: Vec<f64>,
    pub uncertainties: Vec<f64>,
    pub iterations: usize,
    pub residual_rms: f64,
}

impl FitResult {
    /// The characteristic decay parameter of the model: `tau` for the decay
    /// shapes, the 1/e time of the envelope for the Ramsey model.
    pub fn decay_time(&self) -> f64 {
        match self.model {
            DecayModel::Exponential | DecayModel::Gaussian | DecayModel::DampedCosine => {
                self.params[1]
            }
            // 1 / sqrt(1 + (d t)^2) = 1/e  =>  t = sqrt(e^2 - 1) / d
            DecayModel::RamseyEnvelope => {
                (std::f64::consts::E.powi(2) - 1.0).sqrt() / self.params[1]
            }
        }
    }
}

/// Fits `model` to `(xs, ys)` by damped least squares.
pub fn fit_decay(xs: &[f64], ys: &[f64], model: DecayModel) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::Domain(format!(
            "mismatched data lengths {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 5 {
        return Err(Error::Domain(format!(
            "fit needs at least 5 points, got {}",
            xs.len()
        )));
    }
    if ys.iter().any(|y| !(-0.1..=1.1).contains(y)) {
        return Err(Error::Domain(
            "signal values outside [-0.1, 1.1]; fits expect normalized signals".into(),
        ));
    }
    let p_count = model.param_count();
    let mut params = model.initial_guess(xs, ys);
    let mut ssr = sum_squared_residuals(&model, &params, xs, ys);
    let mut lambda = 1e-3;
    let n = xs.len();

    let mut converged_at = None;
    for iteration in 0..MAX_ITERATIONS {
        // normal equations
        let mut jtj = vec![0.0; p_count * p_count];
        let mut jtr = vec![0.0; p_count];
        let mut row = vec![0.0; p_count];
        for (&x, &y) in xs.iter().zip(ys) {
            model.jacobian_row(&params, x, &mut row);
            let r = model.eval(&params, x) - y;
            for j in 0..p_count {
                jtr[j] += row[j] * r;
                for k in j..p_count {
                    jtj[j * p_count + k] += row[j] * row[k];
                }
            }
        }
        for j in 0..p_count {
            for k in 0..j {
                jtj[j * p_count + k] = jtj[k * p_count + j];
            }
        }

        let mut step = vec![0.0; p_count];
        let mut accepted = false;
        for _ in 0..24 {
            let mut damped = jtj.clone();
            for j in 0..p_count {
                let d = jtj[j * p_count + j].max(1e-30);
                damped[j * p_count + j] += lambda * d;
            }
            let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let Some(delta) = solve_dense(&damped, &rhs, p_count) else {
                lambda *= 3.0;
                continue;
            };
            let candidate: Vec<f64> =
                params.iter().zip(&delta).map(|(p, d)| p + d).collect();
            let candidate_ssr = sum_squared_residuals(&model, &candidate, xs, ys);
            if candidate_ssr.is_finite() && candidate_ssr <= ssr {
                params = candidate;
                ssr = candidate_ssr;
                step = delta;
                lambda = (lambda / 3.0).max(1e-14);
                accepted = true;
                break;
            }
            lambda *= 3.0;
            if lambda > 1e14 {
                break;
            }
        }

        let rel_step = step
            .iter()
            .zip(&params)
            .map(|(d, p)| d.abs() / p.abs().max(1e-12))
            .fold(0.0, f64::max);
        if !accepted || rel_step < STEP_TOLERANCE {
            converged_at = Some(iteration + 1);
            break;
        }
    }

    let residual_rms = (ssr / n as f64).sqrt();
    let Some(iterations) = converged_at else {
        return Err(Error::FitDidNotConverge {
            iterations: MAX_ITERATIONS,
            residual_rms,
        });
    };

    // covariance at the optimum
    let mut jtj = vec![0.0; p_count * p_count];
    let mut row = vec![0.0; p_count];
    for &x in xs {
        model.jacobian_row(&params, x, &mut row);
        for j in 0..p_count {
            for k in 0..p_count {
                jtj[j * p_count + k] += row[j] * row[k];
            }
        }
    }
    let dof = (n - p_count).max(1);
    let variance = ssr / dof as f64;
    let uncertainties = match invert_dense(&jtj, p_count) {
        Some(inv) => (0..p_count)
            .map(|j| (inv[j * p_count + j].max(0.0) * variance).sqrt())
            .collect(),
        None => vec![f64::NAN; p_count],
    };

    Ok(FitResult {
        model,
        params,
        uncertainties,
        iterations,
        residual_rms,
    })
}

fn sum_squared_residuals(model: &DecayModel, params: &[f64], xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = model.eval(params, x) - y;
            r * r
        })
        .sum()
}

/// Gauss-Jordan solve of `m x = rhs` for small dense systems.
fn solve_dense(m: &[f64], rhs: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            a[i * n + col].abs().total_cmp(&a[j * n + col].abs())
        })?;
        if a[pivot_row * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= pivot;
        }
        b[col] /= pivot;
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != 0.0 {
                    for k in 0..n {
                        a[r * n + k] -= f * a[col * n + k];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some(b)
}

fn invert_dense(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let x = solve_dense(m, &e, n)?;
        for row in 0..n {
            inv[row * n + col] = x[row];
        }
    }
    Some(inv)
}
