//! Adaptive Dormand-Prince integrator for small complex-valued systems.
//!
//! The stiff frequency ratios of the dynamics layer (detuning over Rabi
//! frequency up to 1e4) need an adaptive step; a fixed-step scheme either
//! crawls or drifts. Output samples are produced by clamping steps onto the
//! requested times, so sampled states carry no interpolation error.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Right-hand side of `dy/dt = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn deriv(&self, t: f64, y: &[Complex64], dydt: &mut [Complex64]);
}

pub struct AdaptiveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 200_000_000,
        }
    }
}

// Dormand-Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-minus-4th order error weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// Integrates from `t0`, recording the state at each time in `samples`.
///
/// `samples` must be non-decreasing and start at or after `t0`.
pub fn integrate_sampled<S: OdeSystem>(
    system: &S,
    t0: f64,
    y0: &[Complex64],
    samples: &[f64],
    options: &AdaptiveOptions,
) -> Result<Vec<Vec<Complex64>>> {
    let dim = system.dim();
    if y0.len() != dim {
        return Err(Error::Integration(format!(
            "initial state has dimension {}, system expects {dim}",
            y0.len()
        )));
    }
    if samples.is_empty() {
        return Err(Error::Integration("empty sample grid".into()));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) || samples[0] < t0 {
        return Err(Error::Integration(
            "sample times must be non-decreasing and start at or after t0".into(),
        ));
    }
    let t_end = *samples.last().unwrap();

    let mut out = Vec::with_capacity(samples.len());
    let mut sample_iter = samples.iter().peekable();
    let mut t = t0;
    let mut y = y0.to_vec();

    // emit any samples coinciding with the start
    while let Some(&&ts) = sample_iter.peek() {
        if ts <= t {
            out.push(y.clone());
            sample_iter.next();
        } else {
            break;
        }
    }
    if sample_iter.peek().is_none() {
        return Ok(out);
    }

    let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut k5 = k1.clone();
    let mut k6 = k1.clone();
    let mut k7 = k1.clone();
    let mut stage = k1.clone();
    let mut y_next = k1.clone();

    system.deriv(t, &y, &mut k1);
    let mut h = initial_step(system, t, &y, &k1, options);
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > options.max_steps {
            return Err(Error::Integration(format!(
                "step budget {} exhausted at t = {t:.6e} (h = {h:.3e})",
                options.max_steps
            )));
        }
        let next_sample = **sample_iter.peek().expect("loop guarded by t < t_end");
        let mut clamped = false;
        if t + h >= next_sample {
            h = next_sample - t;
            clamped = true;
        }
        if h <= f64::EPSILON * t.abs().max(1.0) {
            // degenerate interval; emit current state for the sample
            out.push(y.clone());
            sample_iter.next();
            h = initial_step(system, t, &y, &k1, options);
            if sample_iter.peek().is_none() {
                break;
            }
            continue;
        }

        for i in 0..dim {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        system.deriv(t + C2 * h, &stage, &mut k2);
        for i in 0..dim {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        system.deriv(t + C3 * h, &stage, &mut k3);
        for i in 0..dim {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        system.deriv(t + C4 * h, &stage, &mut k4);
        for i in 0..dim {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        system.deriv(t + C5 * h, &stage, &mut k5);
        for i in 0..dim {
            stage[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        system.deriv(t + h, &stage, &mut k6);
        for i in 0..dim {
            y_next[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        system.deriv(t + h, &y_next, &mut k7);

        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = options.atol + options.rtol * y[i].norm().max(y_next[i].norm());
            err = err.max(e.norm() / scale);
        }

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y_next);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            if clamped {
                out.push(y.clone());
                sample_iter.next();
                if sample_iter.peek().is_none() {
                    break;
                }
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(t_end - t + f64::EPSILON).max(1e-300);
    }
    Ok(out)
}

fn initial_step<S: OdeSystem>(
    system: &S,
    t: f64,
    y: &[Complex64],
    dy: &[Complex64],
    options: &AdaptiveOptions,
) -> f64 {
    // standard two-probe heuristic (Hairer-Norsett-Wanner)
    let d0 = rms_norm(y);
    let d1 = rms_norm(dy);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let mut probe = vec![Complex64::new(0.0, 0.0); y.len()];
    let y1: Vec<Complex64> = y
        .iter()
        .zip(dy)
        .map(|(yi, di)| yi + h0 * di)
        .collect();
    system.deriv(t + h0, &y1, &mut probe);
    let d2 = probe
        .iter()
        .zip(dy)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1) * options.rtol.powf(0.2) / 1e-10f64.powf(0.2)
}

fn rms_norm(v: &[Complex64]) -> f64 {
    (v.iter().map(|x| x.norm_sqr()).sum::<f64>() / v.len() as f64).sqrt()
}
