//! Phase-to-amplitude conversion methods, their figures of merit, and
//! operating-point optimizers.
//!
//! Every method is scored by three numbers at a modulation depth `beta`:
//! the optical transmission `T`, the amplitude-modulation efficiency
//! `eta`, and the coherence metric `C = T * eta^2`, which is proportional
//! to the number of pi pulses available per scattering event at fixed laser
//! power and target Rabi frequency. Each figure exists in two independent
//! routes: closed forms in Bessel functions ([`method_metrics`]) and a
//! direct measurement on the constructed sideband spectrum
//! ([`method_metrics_numeric`]); the two must agree to 1e-8.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::bessel::{bessel_j, bessel_j_sequence};
use crate::error::{Error, Result};
use crate::format::format_g12;
use crate::spectrum::{FilterKind, SidebandSpectrum};

/// Default truncation for spectra built internally; ample for `beta <= 2*pi`.
const SPECTRUM_TRUNC: usize = 40;
/// Scan step of the coarse maximization stage.
const SCAN_STEP: f64 = 1e-3;
/// Golden-section interval tolerance of the refinement stage.
const REFINE_XTOL: f64 = 1e-9;

/// Search window default: depths beyond `pi` are hard to reach with a
/// resonant electro-optic modulator.
pub const DEFAULT_BETA_MAX: f64 = PI;

/// A way of turning phase modulation into amplitude modulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConversionMethod {
    /// Remove the carrier with a filter cavity; modulation at `omega_q / 2`.
    FilterCarrier,
    /// Remove all odd sidebands with a Mach-Zehnder interferometer;
    /// modulation at `omega_q / 2`.
    FilterMachZehnderInterferometer,
    /// Mach-Zehnder intensity modulator biased to half transmission,
    /// modulated at `omega_q`.
    MzModulatorHalfTransmission,
    /// Mach-Zehnder intensity modulator biased to minimum transmission,
    /// modulated at `omega_q / 2`.
    MzModulatorMinTransmission,
    /// Reflection from a dispersive element with per-sideband quadratic
    /// phase coefficient `alpha` (radians).
    Dispersive { alpha: f64 },
}

impl ConversionMethod {
    pub fn slug(&self) -> &'static str {
        match self {
            Self::FilterCarrier => "filter_carrier",
            Self::FilterMachZehnderInterferometer => "filter_mz_interferometer",
            Self::MzModulatorHalfTransmission => "mz_modulator_half",
            Self::MzModulatorMinTransmission => "mz_modulator_min",
            Self::Dispersive { .. } => "dispersive",
        }
    }

    /// All methods of the comparison table, the dispersive one at `alpha`.
    pub fn all(alpha: f64) -> [ConversionMethod; 5] {
        [
            Self::FilterCarrier,
            Self::FilterMachZehnderInterferometer,
            Self::MzModulatorHalfTransmission,
            Self::MzModulatorMinTransmission,
            Self::Dispersive { alpha },
        ]
    }

    /// Order of the pair sum driving the qubit: 2 when the method modulates
    /// at half the qubit frequency, 1 otherwise.
    pub fn am_order(&self) -> usize {
        match self {
            Self::FilterCarrier
            | Self::FilterMachZehnderInterferometer
            | Self::MzModulatorMinTransmission => 2,
            Self::MzModulatorHalfTransmission | Self::Dispersive { .. } => 1,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::Dispersive { alpha } => Some(*alpha),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Self::Dispersive { alpha } = self {
            if !(*alpha > 0.0 && *alpha < PI) {
                return Err(Error::Domain(format!(
                    "dispersive alpha {alpha} outside (0, pi)"
                )));
            }
        }
        Ok(())
    }

    /// Builds the post-conversion sideband spectrum at depth `beta`.
    ///
    /// Filtered spectra keep their amplitudes relative to the input carrier,
    /// so their total power equals the method transmission.
    pub fn output_spectrum(&self, beta: f64, mod_frequency: f64) -> Result<SidebandSpectrum> {
        self.validate()?;
        match self {
            Self::FilterCarrier => SidebandSpectrum::phase_modulate(beta, mod_frequency, SPECTRUM_TRUNC)?
                .apply_filter(&FilterKind::RemoveCarrier),
            Self::FilterMachZehnderInterferometer => {
                SidebandSpectrum::phase_modulate(beta, mod_frequency, SPECTRUM_TRUNC)?
                    .apply_filter(&FilterKind::RemoveOddSidebands)
            }
            Self::MzModulatorHalfTransmission => mz_output_spectrum(beta, mod_frequency, true),
            Self::MzModulatorMinTransmission => mz_output_spectrum(beta, mod_frequency, false),
            Self::Dispersive { alpha } => {
                Ok(SidebandSpectrum::phase_modulate(beta, mod_frequency, SPECTRUM_TRUNC)?
                    .apply_quadratic_phase(*alpha))
            }
        }
    }
}

/// Output field of a balanced Mach-Zehnder modulator,
/// `E(t) = (1 - exp(i phi(t))) / 2`, as a sideband spectrum.
///
/// Half-transmission bias: `phi = pi/2 + beta sin(omega_q t)`. Minimum
/// bias: `phi = beta sin(omega_q t / 2)`; the passed `mod_frequency` is the
/// spacing actually produced, i.e. the drive frequency.
fn mz_output_spectrum(beta: f64, mod_frequency: f64, half_bias: bool) -> Result<SidebandSpectrum> {
    let table = bessel_j_sequence(SPECTRUM_TRUNC, beta)?;
    let bias = if half_bias {
        Complex64::new(0.0, 1.0) // exp(i pi/2)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut components = Vec::with_capacity(2 * SPECTRUM_TRUNC + 2);
    components.push((0, Complex64::new(0.5, 0.0)));
    for n in -(SPECTRUM_TRUNC as i64)..=SPECTRUM_TRUNC as i64 {
        let idx = n.unsigned_abs() as usize;
        let mut jn = table[idx];
        if n < 0 && idx % 2 == 1 {
            jn = -jn;
        }
        components.push((n, -0.5 * bias * jn));
    }
    SidebandSpectrum::from_components(&components, mod_frequency, 1.0)
}

/// Figures of merit of one conversion method at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodReport {
    pub method: ConversionMethod,
    pub beta: f64,
    /// Fraction of optical power surviving the conversion.
    pub transmission: f64,
    /// Amplitude-modulation efficiency of the surviving light, in `[0, 1]`.
    pub am_efficiency: f64,
    /// Coherence metric `C = T * eta^2`.
    pub coherence: f64,
}

impl MethodReport {
    fn new(method: ConversionMethod, beta: f64, transmission: f64, am_efficiency: f64) -> Self {
        Self {
            method,
            beta,
            transmission,
            am_efficiency,
            coherence: transmission * am_efficiency * am_efficiency,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        self.method.alpha()
    }

    pub const CSV_HEADER: &'static str = "method,beta,alpha,T,eta,C";

    pub fn csv_row(&self) -> String {
        let alpha = self.alpha().map(format_g12).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.method.slug(),
            format_g12(self.beta),
            alpha,
            format_g12(self.transmission),
            format_g12(self.am_efficiency),
            format_g12(self.coherence)
        )
    }
}

fn check_beta(method: &ConversionMethod, beta: f64) -> Result<()> {
    if beta == 0.0 {
        match method {
            ConversionMethod::FilterCarrier | ConversionMethod::MzModulatorMinTransmission => {
                return Err(Error::DegenerateInput(format!(
                    "{} efficiency is 0/0 at beta = 0",
                    method.slug()
                )))
            }
            _ => {}
        }
    }
    if !(beta > 0.0 && beta <= 2.0 * PI) {
        return Err(Error::Domain(format!(
            "modulation depth {beta} outside (0, 2*pi]"
        )));
    }
    Ok(())
}

/// Closed-form figures of merit at depth `beta`.
pub fn method_metrics(method: ConversionMethod, beta: f64) -> Result<MethodReport> {
    method.validate()?;
    check_beta(&method, beta)?;
    let (t, eta) = match method {
        ConversionMethod::FilterCarrier => {
            let j0 = bessel_j(0, beta)?;
            let j2 = bessel_j(2, beta)?;
            let t = 1.0 - j0 * j0;
            (t, (2.0 * j0 * j2 / t).abs())
        }
        ConversionMethod::FilterMachZehnderInterferometer => {
            let j0 = bessel_j(0, 2.0 * beta)?;
            let j2 = bessel_j(2, 2.0 * beta)?;
            let t = 0.5 * (1.0 + j0);
            (t, (j2 / (1.0 + j0)).abs())
        }
        ConversionMethod::MzModulatorHalfTransmission => (0.5, bessel_j(1, beta)?.abs()),
        ConversionMethod::MzModulatorMinTransmission => {
            let j0 = bessel_j(0, beta)?;
            let j2 = bessel_j(2, beta)?;
            ((1.0 - j0) / 2.0, (j2 / (1.0 - j0)).abs())
        }
        ConversionMethod::Dispersive { alpha } => {
            (1.0, bessel_j(1, 2.0 * beta * alpha.sin())?.abs())
        }
    };
    Ok(MethodReport::new(method, beta, t, eta))
}

/// Spectrum-level figures of merit: builds the actual output spectrum and
/// measures transmission and pair overlap numerically.
pub fn method_metrics_numeric(method: ConversionMethod, beta: f64) -> Result<MethodReport> {
    check_beta(&method, beta)?;
    let spec = method.output_spectrum(beta, 1.0)?;
    let t = spec.total_power();
    let eta = spec.am_efficiency(method.am_order());
    Ok(MethodReport::new(method, beta, t, eta))
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut b = hi - INV_PHI * (hi - lo);
    let mut c = lo + INV_PHI * (hi - lo);
    let mut fb = f(b);
    let mut fc = f(c);
    while hi - lo > xtol {
        if fb > fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + INV_PHI * (hi - lo);
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}

/// Argument of the first maximum of `J_1`, located numerically.
pub fn j1_peak_argument() -> f64 {
    static PEAK: OnceLock<f64> = OnceLock::new();
    *PEAK.get_or_init(|| {
        golden_max(
            |x| bessel_j(1, x).expect("argument within window"),
            0.5,
            3.0,
            1e-12,
        )
    })
}

/// Finds the depth maximizing the coherence metric on `(0, beta_max]`.
///
/// Dense scan (step 1e-3) followed by golden-section refinement; the
/// objective is oscillatory, so the scan picks the right lobe and the
/// refinement sharpens it.
pub fn optimize_beta(method: ConversionMethod, beta_max: f64) -> Result<(f64, MethodReport)> {
    method.validate()?;
    if !(beta_max > 0.0 && beta_max <= 2.0 * PI) {
        return Err(Error::Domain(format!(
            "beta_max {beta_max} outside (0, 2*pi]"
        )));
    }
    let coherence = |beta: f64| {
        method_metrics(method, beta)
            .map(|r| r.coherence)
            .unwrap_or(0.0)
    };
    let steps = (beta_max / SCAN_STEP).floor() as usize;
    let mut best = (SCAN_STEP, coherence(SCAN_STEP));
    for i in 2..=steps {
        let beta = i as f64 * SCAN_STEP;
        let c = coherence(beta);
        if c > best.1 {
            best = (beta, c);
        }
    }
    let lo = (best.0 - SCAN_STEP).max(SCAN_STEP * 0.5);
    let hi = (best.0 + SCAN_STEP).min(beta_max);
    let beta_star = golden_max(coherence, lo, hi, REFINE_XTOL);
    let report = method_metrics(method, beta_star)?;
    Ok((beta_star, report))
}

/// Jointly optimal dispersive operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOptimum {
    pub beta: f64,
    pub alpha: f64,
    pub report: MethodReport,
}

/// Maximizes the dispersive efficiency over both the depth (up to
/// `beta_max`) and the curvature.
///
/// At fixed curvature the best depth is the smaller of `beta_max` and the
/// depth putting the Bessel argument at its numerically located peak, so a
/// single curvature scan covers the plane. The optimum is degenerate along
/// the ridge `2 beta sin(alpha) = const`; the first curvature reaching the
/// ridge is reported.
pub fn optimize_dispersive_joint(beta_max: f64) -> Result<JointOptimum> {
    if !(beta_max > 0.0 && beta_max <= 2.0 * PI) {
        return Err(Error::Domain(format!(
            "beta_max {beta_max} outside (0, 2*pi]"
        )));
    }
    let peak_arg = j1_peak_argument();
    let grid = 4000;
    let mut best: Option<(f64, f64, f64)> = None; // (eta, beta, alpha)
    for i in 1..grid {
        let alpha = PI * i as f64 / grid as f64;
        let s = alpha.sin();
        if s <= 0.0 {
            continue;
        }
        let beta = (peak_arg / (2.0 * s)).min(beta_max);
        let eta = bessel_j(1, 2.0 * beta * s)?.abs();
        if best.map_or(true, |(e, _, _)| eta > e) {
            best = Some((eta, beta, alpha));
        }
    }
    let (_, beta, alpha) = best.expect("grid is non-empty");
    let report = method_metrics(ConversionMethod::Dispersive { alpha }, beta)?;
    Ok(JointOptimum {
        beta,
        alpha,
        report,
    })
}

/// An optical element with quadratic spectral phase.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersiveElement {
    /// Group-delay dispersion in fs^2 (may be negative, never zero).
    pub gdd_fs2: f64,
    /// Reflective/transmissive bandwidth in rad/s.
    pub bandwidth: f64,
    /// Laser frequency minus element center frequency, rad/s.
    pub center_offset: f64,
    pub label: String,
}

impl DispersiveElement {
    pub fn new(label: &str, gdd_fs2: f64, bandwidth: f64, center_offset: f64) -> Result<Self> {
        if gdd_fs2 == 0.0 || !gdd_fs2.is_finite() {
            return Err(Error::Domain("element GDD must be finite and nonzero".into()));
        }
        if !(bandwidth > 0.0) {
            return Err(Error::Domain("element bandwidth must be positive".into()));
        }
        Ok(Self {
            gdd_fs2,
            bandwidth,
            center_offset,
            label: label.to_string(),
        })
    }

    /// Reflects `spec` from the element `reflections` times: amplitudes
    /// outside the reflectivity window are dropped (transmission loss), the
    /// rest pick up quadratic phase.
    pub fn apply_to_spectrum(
        &self,
        spec: &SidebandSpectrum,
        reflections: u32,
    ) -> Result<SidebandSpectrum> {
        if reflections == 0 {
            return Err(Error::Domain("reflections must be at least 1".into()));
        }
        let keep: BTreeSet<i64> = spec
            .components()
            .filter(|(n, _)| {
                (self.center_offset + *n as f64 * spec.mod_frequency()).abs()
                    <= 0.5 * self.bandwidth
            })
            .map(|(n, _)| n)
            .collect();
        if keep.is_empty() {
            return Err(Error::DegenerateSpectrum(format!(
                "no sideband falls inside the {} bandwidth",
                self.label
            )));
        }
        let windowed = spec.apply_filter(&FilterKind::KeepIndices(keep))?;
        let alpha =
            reflections as f64 * self.gdd_fs2 * 1e-30 * spec.mod_frequency().powi(2) / 2.0;
        Ok(windowed.apply_quadratic_phase(alpha))
    }
}

/// Quadratic phase coefficient of an element at a given sideband spacing.
///
/// The efficiency depends on `alpha` only through `sin(alpha)`, so the
/// coefficient is reported folded into `[0, pi)` together with the number of
/// half-turns it wrapped; `sin(folded) = |sin(total)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCurvature {
    /// Signed, unfolded coefficient in radians.
    pub total: f64,
    /// `|total|` reduced mod pi.
    pub folded: f64,
    /// Number of whole half-turns removed by the folding.
    pub wraps: u64,
}

/// `alpha = reflections * GDD * omega_q^2 / 2`, with GDD given in fs^2.
pub fn alpha_from_gdd(
    element: &DispersiveElement,
    qubit_frequency: f64,
    reflections: u32,
) -> Result<PhaseCurvature> {
    if !(qubit_frequency > 0.0) {
        return Err(Error::Domain(format!(
            "qubit frequency must be positive, got {qubit_frequency}"
        )));
    }
    if reflections == 0 {
        return Err(Error::Domain("reflections must be at least 1".into()));
    }
    let total = reflections as f64 * element.gdd_fs2 * 1e-30 * qubit_frequency.powi(2) / 2.0;
    let magnitude = total.abs();
    Ok(PhaseCurvature {
        total,
        folded: magnitude % PI,
        wraps: (magnitude / PI).floor() as u64,
    })
}

/// Depth at which a dispersive element with coefficient `alpha` reaches its
/// efficiency maximum: the numerically located peak of `J_1`, divided by
/// `2 sin(alpha)`.
pub fn required_beta_for_optimum(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, pi)")));
    }
    let s = alpha.sin();
    if s == 0.0 {
        return Err(Error::UnreachableOptimum(
            "sin(alpha) = 0: no depth reaches the efficiency maximum".into(),
        ));
    }
    Ok(j1_peak_argument() / (2.0 * s))
}

/// One row of the dispersion-requirement comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRequirement {
    pub label: String,
    pub gdd_fs2: f64,
    pub alpha: f64,
    pub required_beta: f64,
    /// Whether the optimum sits inside the accessible window `beta <= pi`.
    pub reachable: bool,
}

impl DispersionRequirement {
    pub const CSV_HEADER: &'static str = "label,gdd_fs2,alpha_rad,required_beta_rad,reachable";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.label,
            format_g12(self.gdd_fs2),
            format_g12(self.alpha),
            format_g12(self.required_beta),
            self.reachable
        )
    }
}

/// Evaluates the modulation depth each element would need for optimal
/// conversion at the given qubit frequency.
pub fn fig1e_dataset(
    elements: &[DispersiveElement],
    qubit_frequency: f64,
) -> Result<Vec<DispersionRequirement>> {
    if elements.is_empty() {
        return Err(Error::Domain("element list must be non-empty".into()));
    }
    elements
        .iter()
        .map(|element| {
            let curvature = alpha_from_gdd(element, qubit_frequency, 1)?;
            let required_beta = required_beta_for_optimum(curvature.folded)?;
            Ok(DispersionRequirement {
                label: element.label.clone(),
                gdd_fs2: element.gdd_fs2,
                alpha: curvature.folded,
                required_beta,
                reachable: required_beta <= PI,
            })
        })
        .collect()
}

/// The dispersive elements compared in the requirement analysis. The
/// double-bounce entry carries the doubled GDD of two grating reflections.
pub fn standard_catalogue() -> Vec<DispersiveElement> {
    let cbg_bandwidth = 2.0 * PI * 50e9;
    vec![
        DispersiveElement::new("cbg_double_bounce", 8e8, cbg_bandwidth, 0.0).unwrap(),
        DispersiveElement::new("cbg_single_bounce", 4e8, cbg_bandwidth, 0.0).unwrap(),
        DispersiveElement::new("fiber_10m", 4e5, f64::INFINITY, 0.0).unwrap(),
        DispersiveElement::new("fiber_1m", 4e4, f64::INFINITY, 0.0).unwrap(),
        DispersiveElement::new("chirped_mirror", 1300.0, f64::INFINITY, 0.0).unwrap(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidebandBoundKind {
    /// `N` components of equal weight.
    Uniform,
    /// Weights chosen to maximize the pair overlap.
    Optimal,
}

/// Upper bound on the amplitude-modulation efficiency of an `n`-component
/// spectrum: `(n-1)/n` for uniform weights, `cos(pi/(n+1))` for optimal ones.
pub fn n_sideband_bound(n: u32, kind: SidebandBoundKind) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "sideband bound needs n >= 2 components, got {n}"
        )));
    }
    Ok(match kind {
        SidebandBoundKind::Uniform => (n as f64 - 1.0) / n as f64,
        SidebandBoundKind::Optimal => (PI / (n as f64 + 1.0)).cos(),
    })
}
