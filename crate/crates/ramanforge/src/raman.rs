//! Driven three-level dynamics, its two-level reduction, and the
//! scattering-rate tradeoff.
//!
//! The integrator works in the interaction picture: the diagonal rotations
//! at the qubit frequency and the intermediate detuning are applied
//! analytically and only the coupling is integrated numerically. This keeps
//! the norm honest over runs spanning millions of fast-phase radians, which
//! a lab-frame stepper cannot do at any sane step count. Populations are
//! frame-invariant; reported coherences are rotated back to the lab frame.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::format_g12;
use crate::ode::{integrate_sampled, AdaptiveOptions, OdeSystem};
use crate::spectrum::SidebandSpectrum;

/// Maximum norm deviation tolerated over a closed-system run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Default number of output samples of an evolution.
pub const DEFAULT_SAMPLES: usize = 1024;

/// Relative tolerance mismatch accepted when matching spectrum spacing to a
/// subharmonic of the qubit frequency.
const SPACING_TOLERANCE: f64 = 1e-9;

/// Parameters of the driven Lambda system.
#[derive(Debug, Clone)]
pub struct ThreeLevelParams {
    /// Qubit splitting omega_q, rad/s.
    pub qubit_frequency: f64,
    /// Laser detuning from the excited state, rad/s (signed).
    pub detuning: f64,
    /// Drive field; `carrier_power_scale` is `|Omega_0|^2`.
    pub spectrum: SidebandSpectrum,
    /// Effective excited-state linewidth, rad/s (zero for closed runs).
    pub excited_linewidth: f64,
}

impl ThreeLevelParams {
    /// Subharmonic order `k` such that `k * mod_frequency = omega_q`.
    pub fn subharmonic_index(&self) -> Result<usize> {
        let omega = self.spectrum.mod_frequency();
        let ratio = self.qubit_frequency / omega;
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > SPACING_TOLERANCE * ratio.max(1.0) {
            return Err(Error::Config(format!(
                "spectrum spacing {omega} is not a subharmonic of the qubit frequency {}",
                self.qubit_frequency
            )));
        }
        Ok(k as usize)
    }

    /// Two-level reduction is trusted only when the detuning dwarfs the
    /// spectral span.
    fn check_tls_validity(&self) -> Result<()> {
        let span = 10.0 * self.spectrum.effective_n_max() as f64 * self.qubit_frequency;
        if self.detuning.abs() < span {
            return Err(Error::Config(format!(
                "|detuning| = {} below 10 * n_max * omega_q = {span}; two-level reduction invalid",
                self.detuning.abs()
            )));
        }
        Ok(())
    }
}

/// Pure qubit state; construction normalizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub amp0: Complex64,
    pub amp1: Complex64,
}

impl QubitState {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("qubit state cannot be the zero vector".into()));
        }
        Ok(Self {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    pub fn ground() -> Self {
        Self {
            amp0: Complex64::new(1.0, 0.0),
            amp1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            amp0: Complex64::new(0.0, 0.0),
            amp1: Complex64::new(1.0, 0.0),
        }
    }
}

/// Sampled populations and ground-state coherence of an evolution.
#[derive(Debug, Clone)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    /// `(p0, p1, p2)` per sample; `p2 = 0` for two-level runs.
    pub populations: Vec<[f64; 3]>,
    /// Lab-frame coherence `<0|psi>^* <1|psi>` per sample.
    pub coherences: Vec<Complex64>,
}

impl StateTrajectory {
    pub fn final_populations(&self) -> [f64; 3] {
        *self.populations.last().expect("trajectory is never empty")
    }

    /// CSV export, header `t,p0,p1,p2,re_coh,im_coh`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,p0,p1,p2,re_coh,im_coh\n");
        for ((t, p), c) in self.times.iter().zip(&self.populations).zip(&self.coherences) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_g12(*t),
                format_g12(p[0]),
                format_g12(p[1]),
                format_g12(p[2]),
                format_g12(c.re),
                format_g12(c.im)
            ));
        }
        out
    }
}

/// Knobs of an evolution run.
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Output samples over the run (uniform, endpoint included).
    pub samples: usize,
    /// Relative tolerance override; `None` auto-tightens with run length so
    /// the accumulated norm drift stays within [`NORM_DRIFT_LIMIT`].
    pub rtol: Option<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            rtol: None,
        }
    }
}

/// Base relative tolerance of the dynamics integrator.
const BASE_RTOL: f64 = 1e-10;

/// Local tolerance for a run accumulating `radians` of fast phase. Measured
/// drift at the base tolerance stays two orders below [`NORM_DRIFT_LIMIT`]
/// for runs up to a few million radians; beyond that the tolerance tightens
/// with the square root of the run length.
fn auto_rtol(radians: f64) -> f64 {
    (1e-7 / radians.max(1.0).sqrt()).clamp(1e-12, BASE_RTOL)
}

/// Raman Rabi frequency `|Omega_0|^2 / (2 |Delta|) * |sum_n a_n^* a_{n+k}|`
/// (magnitude convention; the drive phase is reported separately).
pub fn raman_rabi_frequency(params: &ThreeLevelParams) -> Result<f64> {
    if params.detuning == 0.0 {
        return Err(Error::Singularity("zero detuning".into()));
    }
    let k = params.subharmonic_index()?;
    let overlap = params.spectrum.pair_overlap(k);
    Ok(params.spectrum.carrier_power_scale() / (2.0 * params.detuning.abs()) * overlap.norm())
}

/// Phase of the effective drive, `arg(sum_n a_n^* a_{n+k})`.
pub fn raman_drive_phase(params: &ThreeLevelParams) -> Result<f64> {
    let k = params.subharmonic_index()?;
    Ok(params.spectrum.pair_overlap(k).arg())
}

/// Drive envelope trimmed to its numerically relevant sidebands.
struct CouplingEnvelope {
    amps: Vec<Complex64>,
    n_min: i64,
    omega: f64,
    /// Carrier coupling strength `|Omega_0|`.
    amplitude: f64,
}

impl CouplingEnvelope {
    fn new(spectrum: &SidebandSpectrum) -> Self {
        let n_eff = spectrum.effective_n_max() as i64;
        let amps = (-n_eff..=n_eff).map(|n| spectrum.amplitude(n)).collect();
        Self {
            amps,
            n_min: -n_eff,
            omega: spectrum.mod_frequency(),
            amplitude: spectrum.carrier_power_scale().sqrt(),
        }
    }

    /// `Omega(t) = Omega_0 * sum_n a_n exp(i n omega t)`.
    #[inline]
    fn field(&self, t: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, self.omega * t);
        let mut phase = Complex64::from_polar(1.0, self.n_min as f64 * self.omega * t);
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &self.amps {
            sum += a * phase;
            phase *= step;
        }
        self.amplitude * sum
    }

    fn max_harmonic(&self) -> f64 {
        (self.amps.len() as f64 / 2.0) * self.omega
    }
}

/// Interaction-picture two-level system driven by the intensity envelope,
/// `Omega_TLS(t) = |Omega(t)|^2 / (2 Delta)`.
struct TlsSystem {
    env: CouplingEnvelope,
    qubit_frequency: f64,
    detuning: f64,
}

impl OdeSystem for TlsSystem {
    fn dim(&self) -> usize {
        2
    }

    #[inline]
    fn deriv(&self, t: f64, z: &[Complex64], dzdt: &mut [Complex64]) {
        let rabi = self.env.field(t).norm_sqr() / (2.0 * self.detuning);
        // W01 = -(rabi/2) e^{-i wq t}; dz = -i W z
        let w01 = Complex64::from_polar(-0.5 * rabi, -self.qubit_frequency * t);
        let mi = Complex64::new(0.0, -1.0);
        dzdt[0] = mi * w01 * z[1];
        dzdt[1] = mi * w01.conj() * z[0];
    }
}

/// Interaction-picture Lambda system with equal couplings of both ground
/// states to the excited state.
struct ThreeLevelSystem {
    env: CouplingEnvelope,
    qubit_frequency: f64,
    detuning: f64,
}

impl OdeSystem for ThreeLevelSystem {
    fn dim(&self) -> usize {
        3
    }

    #[inline]
    fn deriv(&self, t: f64, z: &[Complex64], dzdt: &mut [Complex64]) {
        let omega = self.env.field(t);
        let e_det = Complex64::from_polar(1.0, self.detuning * t);
        let e_qub = Complex64::from_polar(1.0, self.qubit_frequency * t);
        // W02 = -(Omega^*/2) e^{-i Delta t}, W12 = W02 * e^{i wq t}
        let w02 = -0.5 * omega.conj() * e_det.conj();
        let w12 = w02 * e_qub;
        let mi = Complex64::new(0.0, -1.0);
        dzdt[0] = mi * w02 * z[2];
        dzdt[1] = mi * w12 * z[2];
        dzdt[2] = mi * (w02.conj() * z[0] + w12.conj() * z[1]);
    }
}

fn sample_grid(duration: f64, samples: usize) -> Result<Vec<f64>> {
    if !(duration > 0.0) {
        return Err(Error::Domain(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let n = samples.max(2);
    Ok((0..n)
        .map(|i| duration * i as f64 / (n - 1) as f64)
        .collect())
}

fn run_closed<S: OdeSystem>(
    system: &S,
    initial: &[Complex64],
    times: &[f64],
    fast_scale: f64,
    rtol: Option<f64>,
) -> Result<Vec<Vec<Complex64>>> {
    let duration = *times.last().unwrap() - times[0];
    let rtol = rtol.unwrap_or_else(|| auto_rtol(fast_scale * duration));
    let options = AdaptiveOptions {
        rtol,
        atol: rtol * 1e-2,
        ..AdaptiveOptions::default()
    };
    let states = integrate_sampled(system, times[0], initial, times, &options)?;
    let mut drift: f64 = 0.0;
    for state in &states {
        let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        drift = drift.max((norm - 1.0).abs());
    }
    if drift >= NORM_DRIFT_LIMIT {
        return Err(Error::Integration(format!(
            "norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:.0e} (rtol {rtol:.1e}); \
             tighten EvolveOptions::rtol"
        )));
    }
    Ok(states)
}

/// Evolves the effective two-level system for `duration` seconds.
pub fn evolve_tls(
    params: &ThreeLevelParams,
    duration: f64,
    initial: &QubitState,
) -> Result<StateTrajectory> {
    evolve_tls_with(params, duration, initial, &EvolveOptions::default())
}

pub fn evolve_tls_with(
    params: &ThreeLevelParams,
    duration: f64,
    initial: &QubitState,
    options: &EvolveOptions,
) -> Result<StateTrajectory> {
    if params.detuning == 0.0 {
        return Err(Error::Singularity(
            "zero detuning: effective coupling undefined".into(),
        ));
    }
    params.check_tls_validity()?;
    let times = sample_grid(duration, options.samples)?;
    let env = CouplingEnvelope::new(&params.spectrum);
    // the drive envelope oscillates at every intensity harmonic
    let fast_scale = params.qubit_frequency + 2.0 * env.max_harmonic();
    let system = TlsSystem {
        env,
        qubit_frequency: params.qubit_frequency,
        detuning: params.detuning,
    };
    let z0 = [initial.amp0, initial.amp1];
    let states = run_closed(&system, &z0, &times, fast_scale, options.rtol)?;
    let (populations, coherences) = states
        .iter()
        .zip(&times)
        .map(|(z, &t)| {
            let coh = z[0].conj() * z[1] * Complex64::from_polar(1.0, -params.qubit_frequency * t);
            ([z[0].norm_sqr(), z[1].norm_sqr(), 0.0], coh)
        })
        .unzip();
    Ok(StateTrajectory {
        times,
        populations,
        coherences,
    })
}

/// Evolves the full three-level system for `duration` seconds; the excited
/// state starts unpopulated.
pub fn evolve_three_level(
    params: &ThreeLevelParams,
    duration: f64,
    initial: &QubitState,
) -> Result<StateTrajectory> {
    evolve_three_level_with(params, duration, initial, &EvolveOptions::default())
}

pub fn evolve_three_level_with(
    params: &ThreeLevelParams,
    duration: f64,
    initial: &QubitState,
    options: &EvolveOptions,
) -> Result<StateTrajectory> {
    let times = sample_grid(duration, options.samples)?;
    let env = CouplingEnvelope::new(&params.spectrum);
    let fast_scale = params.detuning.abs() + params.qubit_frequency + env.max_harmonic();
    let system = ThreeLevelSystem {
        env,
        qubit_frequency: params.qubit_frequency,
        detuning: params.detuning,
    };
    let z0 = [
        initial.amp0,
        initial.amp1,
        Complex64::new(0.0, 0.0),
    ];
    let states = run_closed(&system, &z0, &times, fast_scale, options.rtol)?;
    let (populations, coherences) = states
        .iter()
        .zip(&times)
        .map(|(z, &t)| {
            let coh = z[0].conj() * z[1] * Complex64::from_polar(1.0, -params.qubit_frequency * t);
            (
                [z[0].norm_sqr(), z[1].norm_sqr(), z[2].norm_sqr()],
                coh,
            )
        })
        .unzip();
    Ok(StateTrajectory {
        times,
        populations,
        coherences,
    })
}

/// Photon-scattering figures at an operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringFigures {
    /// Scattering rate `Gamma * <|Omega(t)|^2> / (4 Delta^2)`, 1/s.
    pub scattering_rate: f64,
    /// Number of pi pulses per scattering event, `(Omega_eff / pi) / rate`.
    pub pi_pulses_per_scatter: f64,
}

/// Evaluates the tradeoff between Raman Rabi frequency and photon
/// scattering. Doubling the detuning at a fixed spectrum halves the Rabi
/// frequency but quarters the scattering rate, doubling the pulses per
/// scatter.
pub fn scattering_figures(params: &ThreeLevelParams) -> Result<ScatteringFigures> {
    if params.detuning == 0.0 {
        return Err(Error::Singularity("zero detuning".into()));
    }
    if !(params.excited_linewidth > 0.0) {
        return Err(Error::Domain(format!(
            "excited linewidth must be positive, got {}",
            params.excited_linewidth
        )));
    }
    let mean_intensity = params.spectrum.carrier_power_scale() * params.spectrum.total_power();
    let rate = params.excited_linewidth * mean_intensity / (4.0 * params.detuning.powi(2));
    let rabi = raman_rabi_frequency(params)?;
    Ok(ScatteringFigures {
        scattering_rate: rate,
        pi_pulses_per_scatter: (rabi / std::f64::consts::PI) / rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conversion::{method_metrics, optimize_beta, ConversionMethod};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn carrier_only(scale: f64) -> SidebandSpectrum {
        SidebandSpectrum::from_components(&[(0, Complex64::new(1.0, 0.0))], 1.0, scale).unwrap()
    }

    fn dispersed(beta: f64, alpha: f64, omega: f64, scale: f64) -> SidebandSpectrum {
        SidebandSpectrum::phase_modulate(beta, omega, 40)
            .unwrap()
            .apply_quadratic_phase(alpha)
            .with_carrier_power_scale(scale)
            .unwrap()
    }

    #[test]
    fn rabi_frequency_of_a_single_pair() {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let spectrum = SidebandSpectrum::from_components(&[(0, a), (1, a)], 1.0, 1.0).unwrap();
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 250.0,
            spectrum,
            excited_linewidth: 0.0,
        };
        let rabi = raman_rabi_frequency(&params).unwrap();
        assert!((rabi - 1.0 / (4.0 * 250.0)).abs() < 1e-15);
    }

    #[test]
    fn pure_phase_modulation_cannot_drive() {
        let spectrum = SidebandSpectrum::phase_modulate(1.5, 1.0, 40).unwrap();
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 300.0,
            spectrum,
            excited_linewidth: 0.0,
        };
        let rabi = raman_rabi_frequency(&params).unwrap();
        assert!(rabi < 1e-12 / 300.0);
    }

    #[test]
    fn dispersed_rabi_matches_identity() {
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 200.0,
            spectrum: dispersed(1.336, 0.76, 1.0, 1.0),
            excited_linewidth: 0.0,
        };
        let rabi = raman_rabi_frequency(&params).unwrap();
        let want = 0.582 / (2.0 * 200.0);
        assert!((rabi - want).abs() < 0.01 * want);
    }

    #[test]
    fn rabi_frequency_scales_with_power_and_ignores_global_phase() {
        let base = dispersed(1.336, 0.76, 1.0, 1.0);
        let rotated: Vec<(i64, Complex64)> = base
            .components()
            .map(|(n, a)| (n, a * Complex64::from_polar(1.0, 1.234)))
            .collect();
        let rotated = SidebandSpectrum::from_components(&rotated, 1.0, 1.0).unwrap();
        let mk = |spectrum| ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 150.0,
            spectrum,
            excited_linewidth: 0.0,
        };
        let r0 = raman_rabi_frequency(&mk(base.clone())).unwrap();
        let r1 = raman_rabi_frequency(&mk(rotated)).unwrap();
        assert!((r0 - r1).abs() < 1e-15);
        let scaled = raman_rabi_frequency(&mk(base.with_carrier_power_scale(3.0).unwrap()))
            .unwrap();
        assert!((scaled - 3.0 * r0).abs() < 1e-12);
    }

    #[test]
    fn spacing_mismatch_is_a_configuration_error() {
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 100.0,
            spectrum: carrier_only(1.0).with_carrier_power_scale(1.0).unwrap(),
            excited_linewidth: 0.0,
        };
        let mut bad = params;
        bad.qubit_frequency = 0.37;
        assert!(matches!(
            raman_rabi_frequency(&bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn constant_drive_pi_pulse() {
        // carrier-only drive on a degenerate qubit: clean resonant flopping
        let params = ThreeLevelParams {
            qubit_frequency: 0.0,
            detuning: 50.0,
            spectrum: carrier_only(1.0),
            excited_linewidth: 0.0,
        };
        let rabi_tls = 1.0 / (2.0 * 50.0);
        let traj = evolve_tls(&params, PI / rabi_tls, &QubitState::ground()).unwrap();
        let p = traj.final_populations();
        assert!((p[1] - 1.0).abs() < 1e-6, "p1 = {}", p[1]);
    }

    #[test]
    fn pure_pm_drive_leaves_qubit_idle() {
        let spectrum = SidebandSpectrum::phase_modulate(1.2, 1.0, 40).unwrap();
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 2000.0,
            spectrum,
            excited_linewidth: 0.0,
        };
        let traj = evolve_tls(&params, 50.0, &QubitState::ground()).unwrap();
        let max_p1 = traj.populations.iter().map(|p| p[1]).fold(0.0, f64::max);
        assert!(max_p1 <= 1e-6, "max p1 = {max_p1}");
    }

    #[test]
    fn dispersed_drive_oscillates_at_the_predicted_rate() {
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 120.0,
            spectrum: dispersed(1.336, 0.76, 1.0, 1.0),
            excited_linewidth: 0.0,
        };
        let rabi = raman_rabi_frequency(&params).unwrap();
        let traj = evolve_tls(&params, 2.0 * PI / rabi, &QubitState::ground()).unwrap();
        // the first population maximum sits half a Rabi period in
        let peak = traj
            .populations
            .iter()
            .enumerate()
            .max_by(|a, b| a.1[1].total_cmp(&b.1[1]))
            .unwrap()
            .0;
        let measured = PI / traj.times[peak];
        assert!(
            (measured - rabi).abs() < 0.01 * rabi,
            "measured {measured}, predicted {rabi}"
        );
    }

    #[test]
    fn undriven_three_level_populations_are_constant() {
        let spectrum = SidebandSpectrum::from_components(
            &[(0, Complex64::new(1.0, 0.0))],
            1.0,
            1e-300,
        )
        .unwrap();
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 100.0,
            spectrum,
            excited_linewidth: 0.0,
        };
        let initial = QubitState::new(
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        )
        .unwrap();
        let traj = evolve_three_level(&params, 10.0, &initial).unwrap();
        for p in &traj.populations {
            assert!((p[0] - 0.36).abs() < 1e-9);
            assert!((p[1] - 0.64).abs() < 1e-9);
            assert!(p[2] < 1e-12);
        }
    }

    #[test]
    fn tls_validity_guard_trips() {
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 5.0,
            spectrum: SidebandSpectrum::phase_modulate(1.2, 1.0, 40).unwrap(),
            excited_linewidth: 0.0,
        };
        assert!(matches!(
            evolve_tls(&params, 1.0, &QubitState::ground()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn scattering_tradeoff_with_detuning() {
        let mk = |detuning: f64| ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning,
            spectrum: dispersed(1.336, 0.76, 1.0, 1.0),
            excited_linewidth: 0.5,
        };
        let near = scattering_figures(&mk(100.0)).unwrap();
        let far = scattering_figures(&mk(200.0)).unwrap();
        assert!((near.scattering_rate / far.scattering_rate - 4.0).abs() < 1e-12);
        let rabi_ratio = raman_rabi_frequency(&mk(100.0)).unwrap()
            / raman_rabi_frequency(&mk(200.0)).unwrap();
        assert!((rabi_ratio - 2.0).abs() < 1e-12);
        assert!(
            (far.pi_pulses_per_scatter / near.pi_pulses_per_scatter - 2.0).abs() < 1e-12
        );
    }

    #[test]
    fn pure_pm_gives_zero_pulses_per_scatter() {
        let params = ThreeLevelParams {
            qubit_frequency: 1.0,
            detuning: 100.0,
            spectrum: SidebandSpectrum::phase_modulate(1.5, 1.0, 40).unwrap(),
            excited_linewidth: 0.5,
        };
        let figs = scattering_figures(&params).unwrap();
        assert!(figs.pi_pulses_per_scatter < 1e-10);
    }

    #[test]
    fn equal_rabi_pulse_ratio_equals_coherence_ratio() {
        // pick the detuning per method so every method drives at the same
        // Rabi frequency from the same available power
        let target_rabi = 1e-3;
        let methods = [
            ConversionMethod::FilterCarrier,
            ConversionMethod::Dispersive { alpha: 0.76 },
        ];
        let mut pulses = Vec::new();
        let mut coherences = Vec::new();
        for method in methods {
            let (beta, _) = optimize_beta(method, 2.0 * PI).unwrap();
            let spectrum = method.output_spectrum(beta, 1.0).unwrap();
            let k = method.am_order();
            let overlap = spectrum.pair_overlap(k).norm();
            let detuning = overlap / (2.0 * target_rabi);
            let params = ThreeLevelParams {
                qubit_frequency: k as f64,
                detuning,
                spectrum,
                excited_linewidth: 0.8,
            };
            let rabi = raman_rabi_frequency(&params).unwrap();
            assert!((rabi - target_rabi).abs() < 1e-12);
            pulses.push(scattering_figures(&params).unwrap().pi_pulses_per_scatter);
            coherences.push(method_metrics(method, beta).unwrap().coherence);
        }
        let pratio = pulses[0] / pulses[1];
        let cratio = coherences[0] / coherences[1];
        assert!(
            (pratio / cratio - 1.0).abs() < 1e-6,
            "pulse ratio {pratio}, coherence ratio {cratio}"
        );
    }

    #[test]
    fn trajectory_csv_shape() {
        let params = ThreeLevelParams {
            qubit_frequency: 0.0,
            detuning: 50.0,
            spectrum: carrier_only(1.0),
            excited_linewidth: 0.0,
        };
        let traj = evolve_tls_with(
            &params,
            1.0,
            &QubitState::ground(),
            &EvolveOptions {
                samples: 8,
                rtol: None,
            },
        )
        .unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,p0,p1,p2,re_coh,im_coh");
        assert_eq!(csv.lines().count(), 9);
    }
}
