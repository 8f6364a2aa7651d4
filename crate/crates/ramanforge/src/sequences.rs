//! Qubit pulse sequences and their Monte-Carlo simulation under scattering,
//! quasi-static detuning, amplitude miscalibration and idle relaxation.
//!
//! Pulses are instantaneous rotations; finite pulse duration belongs to the
//! dynamics layer. A scattered or relaxed atom is depolarized: its
//! measurement returns either outcome with probability one half, which is
//! the upper bound on the damage a scattering event can do and reproduces
//! the convergence of opposite-closer signals to 0.5.
//!
//! Reproducibility contract: every stochastic quantity derives from the
//! noise-model seed through per-(scan-point, shot) streams, so results are
//! bit-identical across runs and independent of shot execution order;
//! parallel and serial execution agree exactly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitting::{fit_decay, DecayModel, FitResult};
use crate::format::format_g12;

/// An instantaneous rotation about an equatorial axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    /// Azimuth of the rotation axis in the equatorial plane, radians.
    pub axis_phase: f64,
    /// Rotation angle in `(0, 2*pi]`.
    pub angle: f64,
    /// Nominal duration (bookkeeping only at this level).
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceElement {
    Pulse(Pulse),
    FreeEvolution { duration: f64 },
}

/// A timed list of rotations and free-evolution gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub elements: Vec<SequenceElement>,
    pub label: String,
}

impl PulseSequence {
    pub fn pulse_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, SequenceElement::Pulse(_)))
            .count()
    }

    pub fn total_duration(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                SequenceElement::Pulse(p) => p.duration,
                SequenceElement::FreeEvolution { duration } => *duration,
            })
            .sum()
    }

    fn total_free_time(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                SequenceElement::FreeEvolution { duration } => *duration,
                _ => 0.0,
            })
            .sum()
    }
}

/// Axis of the closing `pi/2` pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloserSign {
    PlusX,
    MinusX,
}

impl CloserSign {
    fn phase(&self) -> f64 {
        match self {
            Self::PlusX => 0.0,
            Self::MinusX => std::f64::consts::PI,
        }
    }
}

/// The named sequences of the benchmark suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceKind {
    /// A single resonant drive of the given duration.
    Rabi { drive_time: f64 },
    /// `(pi/2)_x . gap . (pi/2)_phase`.
    Ramsey { gap: f64, final_phase: f64 },
    /// `(pi/2)_x . [gap/2 . pi_y . gap/2]^n . (pi/2)_closer`.
    Cpmg {
        pi_pulses: usize,
        gap: f64,
        closer: CloserSign,
    },
    /// The self-correcting 16-phase pattern, repeated; 16 repeats give the
    /// 256-pulse benchmark sequence.
    Xy16 {
        repeats: usize,
        gap: f64,
        closer: CloserSign,
    },
    /// Same timing as a decoupling train but every pulse about +x; the
    /// non-robust reference for error-accumulation comparisons.
    FixedPhaseTrain {
        pi_pulses: usize,
        gap: f64,
        closer: CloserSign,
    },
}

/// XY16 axis pattern: XY8 followed by its phase-inverted mirror.
const XY16_PHASES: [f64; 16] = {
    const X: f64 = 0.0;
    const Y: f64 = std::f64::consts::FRAC_PI_2;
    const PI: f64 = std::f64::consts::PI;
    [
        X,
        Y,
        X,
        Y,
        Y,
        X,
        Y,
        X,
        X + PI,
        Y + PI,
        X + PI,
        Y + PI,
        Y + PI,
        X + PI,
        Y + PI,
        X + PI,
    ]
};

/// Builds one of the named sequences with pi pulses of length `pi_time`.
pub fn build_sequence(kind: &SequenceKind, pi_time: f64) -> Result<PulseSequence> {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};
    if !(pi_time > 0.0) {
        return Err(Error::Config(format!(
            "pi_time must be positive, got {pi_time}"
        )));
    }
    let pi_2 = |phase: f64| {
        SequenceElement::Pulse(Pulse {
            axis_phase: phase,
            angle: FRAC_PI_2,
            duration: pi_time / 2.0,
        })
    };
    let pi_pulse = |phase: f64| {
        SequenceElement::Pulse(Pulse {
            axis_phase: phase,
            angle: PI,
            duration: pi_time,
        })
    };
    let check_gap = |gap: f64| {
        if gap < 0.0 {
            Err(Error::Config(format!("gap must be non-negative, got {gap}")))
        } else {
            Ok(())
        }
    };
    match kind {
        SequenceKind::Rabi { drive_time } => {
            if !(*drive_time > 0.0) {
                return Err(Error::Config(format!(
                    "drive time must be positive, got {drive_time}"
                )));
            }
            let mut angle = (PI * drive_time / pi_time) % TAU;
            if angle == 0.0 {
                angle = TAU;
            }
            Ok(PulseSequence {
                elements: vec![SequenceElement::Pulse(Pulse {
                    axis_phase: 0.0,
                    angle,
                    duration: *drive_time,
                })],
                label: "rabi".into(),
            })
        }
        SequenceKind::Ramsey { gap, final_phase } => {
            check_gap(*gap)?;
            Ok(PulseSequence {
                elements: vec![
                    pi_2(0.0),
                    SequenceElement::FreeEvolution { duration: *gap },
                    pi_2(*final_phase),
                ],
                label: "ramsey".into(),
            })
        }
        SequenceKind::Cpmg {
            pi_pulses,
            gap,
            closer,
        } => {
            if *pi_pulses == 0 {
                return Err(Error::Config("CPMG needs at least one pi pulse".into()));
            }
            check_gap(*gap)?;
            let mut elements = vec![pi_2(0.0)];
            for _ in 0..*pi_pulses {
                elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
                elements.push(pi_pulse(FRAC_PI_2));
                elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
            }
            elements.push(pi_2(closer.phase()));
            Ok(PulseSequence {
                elements,
                label: format!("cpmg-{pi_pulses}"),
            })
        }
        SequenceKind::Xy16 {
            repeats,
            gap,
            closer,
        } => {
            if *repeats == 0 {
                return Err(Error::Config("XY16 needs at least one repeat".into()));
            }
            check_gap(*gap)?;
            let mut elements = vec![pi_2(0.0)];
            for _ in 0..*repeats {
                for phase in XY16_PHASES {
                    elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
                    elements.push(pi_pulse(phase));
                    elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
                }
            }
            elements.push(pi_2(closer.phase()));
            Ok(PulseSequence {
                elements,
                label: format!("xy16-{}", repeats * 16),
            })
        }
        SequenceKind::FixedPhaseTrain {
            pi_pulses,
            gap,
            closer,
        } => {
            if *pi_pulses == 0 {
                return Err(Error::Config("train needs at least one pi pulse".into()));
            }
            check_gap(*gap)?;
            let mut elements = vec![pi_2(0.0)];
            for _ in 0..*pi_pulses {
                elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
                elements.push(pi_pulse(0.0));
                elements.push(SequenceElement::FreeEvolution { duration: gap / 2.0 });
            }
            elements.push(pi_2(closer.phase()));
            Ok(PulseSequence {
                elements,
                label: format!("pi-train-{pi_pulses}"),
            })
        }
    }
}

/// Quasi-static detuning drawn once per shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningDistribution {
    /// Every shot sees the same detuning.
    Delta { value: f64 },
    /// Zero-mean normal with the given width, rad/s.
    Gaussian { sigma: f64 },
    /// One-sided exponential with the given mean, rad/s (thermal light-shift
    /// distribution).
    Exponential { mean: f64 },
}

impl DetuningDistribution {
    fn is_random(&self) -> bool {
        !matches!(self, Self::Delta { .. })
    }

    /// Inverse CDF; `u` uniform in (0, 1).
    fn quantile(&self, u: f64) -> f64 {
        match self {
            Self::Delta { value } => *value,
            Self::Gaussian { sigma } => sigma * inverse_normal_cdf(u),
            Self::Exponential { mean } => -mean * (1.0 - u).ln(),
        }
    }
}

/// Per-shot noise channels of a sequence run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Depolarization probability per applied pulse.
    pub per_pulse_scatter_prob: f64,
    pub static_detuning: DetuningDistribution,
    /// Fractional rotation-angle miscalibration (0.01 = every pulse 1% long).
    pub amplitude_error: f64,
    /// Idle population-mixing time; `f64::INFINITY` disables the channel.
    pub idle_t1: f64,
    pub rng_seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            per_pulse_scatter_prob: 0.0,
            static_detuning: DetuningDistribution::Delta { value: 0.0 },
            amplitude_error: 0.0,
            idle_t1: f64::INFINITY,
            rng_seed: 0,
        }
    }
}

impl NoiseModel {
    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.per_pulse_scatter_prob) {
            return Err(Error::Config(format!(
                "per-pulse scatter probability {} outside [0, 1)",
                self.per_pulse_scatter_prob
            )));
        }
        if !(self.idle_t1 > 0.0) {
            return Err(Error::Config(format!(
                "idle T1 must be positive (or infinite), got {}",
                self.idle_t1
            )));
        }
        match self.static_detuning {
            DetuningDistribution::Gaussian { sigma } if sigma < 0.0 => Err(Error::Config(
                format!("gaussian detuning width {sigma} is negative"),
            )),
            DetuningDistribution::Exponential { mean } if mean < 0.0 => Err(Error::Config(
                format!("exponential detuning mean {mean} is negative"),
            )),
            _ => Ok(()),
        }
    }

    /// A run is deterministic when no channel consumes randomness.
    fn is_deterministic(&self, seq: &PulseSequence) -> bool {
        self.per_pulse_scatter_prob == 0.0
            && !self.static_detuning.is_random()
            && (self.idle_t1.is_infinite() || seq.total_free_time() == 0.0)
    }
}

/// Signal estimate of one simulated sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequencePoint {
    /// Mean measured population of `|1>`.
    pub signal: f64,
    /// Standard error of the mean (0 for deterministic runs).
    pub stderr: f64,
}

/// A scan of one sequence family against its scan variable.
#[derive(Debug, Clone)]
pub struct SequenceResult {
    pub label: String,
    pub scan_values: Vec<f64>,
    pub signal: Vec<f64>,
    pub stderr: Vec<f64>,
    pub shots: usize,
    pub seed: u64,
    pub fitted: Option<FitResult>,
}

impl SequenceResult {
    /// CSV export, header `scan_value,signal,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scan_value,signal,stderr\n");
        for ((v, s), e) in self.scan_values.iter().zip(&self.signal).zip(&self.stderr) {
            out.push_str(&format!(
                "{},{},{}\n",
                format_g12(*v),
                format_g12(*s),
                format_g12(*e)
            ));
        }
        out
    }

    /// Fits `model` to the scan and stores the result.
    pub fn fit(&mut self, model: DecayModel) -> Result<&FitResult> {
        let fit = fit_decay(&self.scan_values, &self.signal, model)?;
        self.fitted = Some(fit);
        Ok(self.fitted.as_ref().unwrap())
    }
}

type Unitary = [[Complex64; 2]; 2];

fn rotation(axis_phase: f64, angle: f64) -> Unitary {
    let (s, c) = (0.5 * angle).sin_cos();
    let off = Complex64::new(0.0, -s);
    [
        [
            Complex64::new(c, 0.0),
            off * Complex64::from_polar(1.0, -axis_phase),
        ],
        [
            off * Complex64::from_polar(1.0, axis_phase),
            Complex64::new(c, 0.0),
        ],
    ]
}

fn apply(u: &Unitary, psi: &mut [Complex64; 2]) {
    let a = u[0][0] * psi[0] + u[0][1] * psi[1];
    let b = u[1][0] * psi[0] + u[1][1] * psi[1];
    *psi = [a, b];
}

fn matmul(a: &Unitary, b: &Unitary) -> Unitary {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Total unitary of a sequence under a fixed detuning and amplitude error
/// (in the frame rotating at the drive frequency).
pub fn compose_sequence_unitary(
    seq: &PulseSequence,
    detuning: f64,
    amplitude_error: f64,
) -> Unitary {
    let mut total = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    for element in &seq.elements {
        let u = match element {
            SequenceElement::Pulse(p) => {
                rotation(p.axis_phase, p.angle * (1.0 + amplitude_error))
            }
            SequenceElement::FreeEvolution { duration } => [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [
                    Complex64::new(0.0, 0.0),
                    Complex64::from_polar(1.0, -detuning * duration),
                ],
            ],
        };
        total = matmul(&u, &total);
    }
    total
}

/// Mixes `base` with per-stream and per-index words (splitmix64 finalizer).
fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error below 1.2e-9, ample for sampling).
pub(crate) fn inverse_normal_cdf(u: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const U_LOW: f64 = 0.02425;
    let u = u.clamp(1e-300, 1.0 - 1e-16);
    if u < U_LOW {
        let q = (-2.0 * u.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if u <= 1.0 - U_LOW {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - u).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// One Monte-Carlo shot; returns the measured `|1>` population.
fn run_shot(
    seq: &PulseSequence,
    noise: &NoiseModel,
    stream: u64,
    shot: u64,
    shots: usize,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(noise.rng_seed, stream, shot));
    // stratified quantile draw: shot index picks the stratum
    let detuning = if noise.static_detuning.is_random() {
        let u = (shot as f64 + rng.gen::<f64>()) / shots as f64;
        noise.static_detuning.quantile(u)
    } else {
        noise.static_detuning.quantile(0.5)
    };
    let mut psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    for element in &seq.elements {
        match element {
            SequenceElement::Pulse(p) => {
                let u = rotation(p.axis_phase, p.angle * (1.0 + noise.amplitude_error));
                apply(&u, &mut psi);
                if noise.per_pulse_scatter_prob > 0.0
                    && rng.gen::<f64>() < noise.per_pulse_scatter_prob
                {
                    return 0.5;
                }
            }
            SequenceElement::FreeEvolution { duration } => {
                if *duration > 0.0 {
                    psi[1] *= Complex64::from_polar(1.0, -detuning * duration);
                    if noise.idle_t1.is_finite()
                        && rng.gen::<f64>() < 1.0 - (-duration / noise.idle_t1).exp()
                    {
                        return 0.5;
                    }
                }
            }
        }
    }
    psi[1].norm_sqr()
}

/// Simulates one sequence; `stream` isolates the randomness of different
/// scan points sharing a seed.
pub fn simulate_sequence_stream(
    seq: &PulseSequence,
    noise: &NoiseModel,
    shots: usize,
    stream: u64,
) -> Result<SequencePoint> {
    noise.validate()?;
    if noise.is_deterministic(seq) {
        let detuning = noise.static_detuning.quantile(0.5);
        let u = compose_sequence_unitary(seq, detuning, noise.amplitude_error);
        return Ok(SequencePoint {
            signal: u[1][0].norm_sqr(),
            stderr: 0.0,
        });
    }
    if shots == 0 {
        return Err(Error::Config(
            "stochastic noise model needs at least one shot".into(),
        ));
    }
    // scattering as the only random channel: the unitary composition is
    // common to all shots, so sample each shot's first-scatter pulse from
    // the geometric distribution and reuse the composed signal
    let scatter_only = !noise.static_detuning.is_random()
        && (noise.idle_t1.is_infinite() || seq.total_free_time() == 0.0);
    let signals: Vec<f64> = if scatter_only {
        let detuning = noise.static_detuning.quantile(0.5);
        let u = compose_sequence_unitary(seq, detuning, noise.amplitude_error);
        let coherent = u[1][0].norm_sqr();
        let pulses = seq.pulse_count() as f64;
        let log_survive = (1.0 - noise.per_pulse_scatter_prob).ln();
        (0..shots as u64)
            .into_par_iter()
            .map(|shot| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(noise.rng_seed, stream, shot));
                let draw: f64 = rng.gen();
                let first_scatter = ((1.0 - draw).ln() / log_survive).floor() + 1.0;
                if first_scatter <= pulses {
                    0.5
                } else {
                    coherent
                }
            })
            .collect()
    } else {
        (0..shots as u64)
            .into_par_iter()
            .map(|shot| run_shot(seq, noise, stream, shot, shots))
            .collect()
    };
    // deterministic reduction order
    let mean = signals.iter().sum::<f64>() / shots as f64;
    let stderr = if shots > 1 {
        let var =
            signals.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (shots - 1) as f64;
        (var / shots as f64).sqrt()
    } else {
        0.0
    };
    Ok(SequencePoint {
        signal: mean,
        stderr,
    })
}

/// Simulates one sequence under the noise model.
pub fn simulate_sequence(
    seq: &PulseSequence,
    noise: &NoiseModel,
    shots: usize,
) -> Result<SequencePoint> {
    simulate_sequence_stream(seq, noise, shots, 0)
}

/// Simulates a family of sequences against their scan variable; scan point
/// `i` draws from stream `i` of the seed.
pub fn scan_sequences(
    label: &str,
    scan_values: &[f64],
    sequences: &[PulseSequence],
    noise: &NoiseModel,
    shots: usize,
) -> Result<SequenceResult> {
    if scan_values.len() != sequences.len() || scan_values.is_empty() {
        return Err(Error::Config(format!(
            "scan needs matching non-empty values and sequences, got {} and {}",
            scan_values.len(),
            sequences.len()
        )));
    }
    let mut signal = Vec::with_capacity(sequences.len());
    let mut stderr = Vec::with_capacity(sequences.len());
    for (i, seq) in sequences.iter().enumerate() {
        let point = simulate_sequence_stream(seq, noise, shots, i as u64)?;
        signal.push(point.signal);
        stderr.push(point.stderr);
    }
    Ok(SequenceResult {
        label: label.to_string(),
        scan_values: scan_values.to_vec(),
        signal,
        stderr,
        shots,
        seed: noise.rng_seed,
        fitted: None,
    })
}

/// Ramsey fringe contrast against the free-evolution gap.
///
/// Four fringe phases are measured per gap with shared per-shot noise draws
/// and combined in quadrature, so the contrast tracks the magnitude of the
/// dephasing envelope even when the detuning distribution is one-sided.
pub fn ramsey_contrast(noise: &NoiseModel, gaps: &[f64], shots: usize) -> Result<SequenceResult> {
    use std::f64::consts::{FRAC_PI_2, PI};
    noise.validate()?;
    if gaps.is_empty() {
        return Err(Error::Config("contrast scan needs at least one gap".into()));
    }
    if shots == 0 {
        return Err(Error::Config("contrast scan needs at least one shot".into()));
    }
    let phases = [0.0, FRAC_PI_2, PI, 1.5 * PI];
    let mut signal = Vec::with_capacity(gaps.len());
    let mut stderr = Vec::with_capacity(gaps.len());
    for (gap_index, &gap) in gaps.iter().enumerate() {
        if gap < 0.0 {
            return Err(Error::Config(format!("gap must be non-negative, got {gap}")));
        }
        let per_shot: Vec<[f64; 4]> = (0..shots as u64)
            .into_par_iter()
            .map(|shot| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(noise.rng_seed, gap_index as u64, shot));
                let detuning = if noise.static_detuning.is_random() {
                    let u = (shot as f64 + rng.gen::<f64>()) / shots as f64;
                    noise.static_detuning.quantile(u)
                } else {
                    noise.static_detuning.quantile(0.5)
                };
                // shared event draws: scatter on each pulse, relaxation in the gap
                let p = noise.per_pulse_scatter_prob;
                let scatter_first = p > 0.0 && rng.gen::<f64>() < p;
                let relaxed = gap > 0.0
                    && noise.idle_t1.is_finite()
                    && rng.gen::<f64>() < 1.0 - (-gap / noise.idle_t1).exp();
                let scatter_last = p > 0.0 && rng.gen::<f64>() < p;
                let mut out = [0.5; 4];
                if !(scatter_first || relaxed || scatter_last) {
                    for (k, &phase) in phases.iter().enumerate() {
                        let seq = build_sequence(
                            &SequenceKind::Ramsey {
                                gap,
                                final_phase: phase,
                            },
                            1.0,
                        )
                        .expect("ramsey construction is valid");
                        let u = compose_sequence_unitary(&seq, detuning, noise.amplitude_error);
                        out[k] = u[1][0].norm_sqr();
                    }
                }
                out
            })
            .collect();
        let mut means = [0.0; 4];
        for shot in &per_shot {
            for k in 0..4 {
                means[k] += shot[k];
            }
        }
        for m in means.iter_mut() {
            *m /= shots as f64;
        }
        let cos_amp = means[0] - means[2];
        let sin_amp = means[3] - means[1];
        let contrast = (cos_amp * cos_amp + sin_amp * sin_amp).sqrt();
        signal.push(contrast.min(1.0));
        // propagate shot scatter of both quadratures through the magnitude
        let (mut var_c, mut var_s) = (0.0, 0.0);
        for shot in &per_shot {
            let c = shot[0] - shot[2];
            let s = shot[3] - shot[1];
            var_c += (c - cos_amp) * (c - cos_amp);
            var_s += (s - sin_amp) * (s - sin_amp);
        }
        let n = shots.max(2) as f64;
        var_c /= (n - 1.0) * n;
        var_s /= (n - 1.0) * n;
        let err = if contrast > 0.0 {
            ((cos_amp * cos_amp * var_c + sin_amp * sin_amp * var_s).sqrt()) / contrast
        } else {
            (var_c + var_s).sqrt()
        };
        stderr.push(err);
    }
    let mut result = SequenceResult {
        label: "ramsey-contrast".into(),
        scan_values: gaps.to_vec(),
        signal,
        stderr,
        shots,
        seed: noise.rng_seed,
        fitted: None,
    };
    if gaps.len() >= 5 {
        // envelope fit is part of the measurement contract
        result.fit(DecayModel::RamseyEnvelope)?;
    }
    Ok(result)
}
