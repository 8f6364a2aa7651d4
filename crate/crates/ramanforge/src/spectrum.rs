//! Sideband spectra: the discrete frequency components of a modulated laser
//! and the operations that reshape them.
//!
//! A spectrum stores complex amplitudes `a_n` on the uniform grid
//! `n * mod_frequency` around the carrier, normalized so an unfiltered field
//! has unit total power. `carrier_power_scale` carries the square of the
//! carrier coupling strength so the dynamics layer can reconstruct absolute
//! intensities. All operations are value-semantic: they return new spectra.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j_sequence;
use crate::error::{Error, Result};

/// Amplitudes below this are treated as numerically absent when deciding the
/// dynamically relevant extent of a spectrum.
const NEGLIGIBLE_AMPLITUDE: f64 = 1e-12;

/// Samples per beat period used by the default waveform grid; resolves every
/// harmonic a supported spectrum can carry without aliasing.
pub const DEFAULT_WAVEFORM_SAMPLES: usize = 4096;

/// A laser field as complex sideband amplitudes on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandSpectrum {
    /// Dense amplitudes over `[-n_max, n_max]`, index `i` holding `n = i - n_max`.
    amplitudes: Vec<Complex64>,
    n_max: usize,
    mod_frequency: f64,
    carrier_power_scale: f64,
}

/// Spectral filters acting on sideband indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterKind {
    /// Drop the carrier (`n = 0`) component.
    RemoveCarrier,
    /// Drop every odd-index sideband.
    RemoveOddSidebands,
    /// Keep exactly the listed indices.
    KeepIndices(BTreeSet<i64>),
}

impl SidebandSpectrum {
    /// Builds a spectrum from `(index, amplitude)` pairs. Unlisted indices
    /// within the implied symmetric range are zero.
    pub fn from_components(
        components: &[(i64, Complex64)],
        mod_frequency: f64,
        carrier_power_scale: f64,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("spectrum needs at least one component".into()));
        }
        check_scales(mod_frequency, carrier_power_scale)?;
        let n_max = components
            .iter()
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * n_max + 1];
        for &(n, a) in components {
            amplitudes[(n + n_max as i64) as usize] += a;
        }
        let spec = Self {
            amplitudes,
            n_max,
            mod_frequency,
            carrier_power_scale,
        };
        if spec.total_power() <= 0.0 {
            return Err(Error::DegenerateSpectrum(
                "spectrum has zero total power".into(),
            ));
        }
        Ok(spec)
    }

    /// Sinusoidal phase modulation at depth `beta`: `a_n = J_n(beta)`.
    ///
    /// `trunc` must be at least `ceil(beta) + 20`, which keeps the discarded
    /// tail below 1e-12 in total power.
    pub fn phase_modulate(beta: f64, mod_frequency: f64, trunc: usize) -> Result<Self> {
        if !(0.0..=std::f64::consts::TAU).contains(&beta) {
            return Err(Error::Domain(format!(
                "modulation depth {beta} outside [0, 2*pi]"
            )));
        }
        let min = beta.ceil() as usize + 20;
        if trunc < min {
            return Err(Error::Truncation { got: trunc, min });
        }
        check_scales(mod_frequency, 1.0)?;
        let table = bessel_j_sequence(trunc, beta)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * trunc + 1];
        for n in -(trunc as i64)..=trunc as i64 {
            let idx = n.unsigned_abs() as usize;
            let mut v = table[idx];
            if n < 0 && idx % 2 == 1 {
                v = -v;
            }
            amplitudes[(n + trunc as i64) as usize] = Complex64::new(v, 0.0);
        }
        Ok(Self {
            amplitudes,
            n_max: trunc,
            mod_frequency,
            carrier_power_scale: 1.0,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mod_frequency(&self) -> f64 {
        self.mod_frequency
    }

    pub fn carrier_power_scale(&self) -> f64 {
        self.carrier_power_scale
    }

    /// Returns a copy with a different carrier power scale.
    pub fn with_carrier_power_scale(mut self, scale: f64) -> Result<Self> {
        check_scales(self.mod_frequency, scale)?;
        self.carrier_power_scale = scale;
        Ok(self)
    }

    /// Amplitude at sideband index `n` (zero outside the stored range).
    pub fn amplitude(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[(n + self.n_max as i64) as usize]
        }
    }

    /// Iterates `(index, amplitude)` over the stored range.
    pub fn components(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n_max = self.n_max as i64;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, &a)| (i as i64 - n_max, a))
    }

    /// Total normalized power `sum |a_n|^2`; 1 for an unfiltered field.
    pub fn total_power(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest `|n|` carrying a non-negligible amplitude.
    pub fn effective_n_max(&self) -> usize {
        self.components()
            .filter(|(_, a)| a.norm() > NEGLIGIBLE_AMPLITUDE)
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Applies quadratic spectral phase: `a_n -> a_n * exp(i * alpha * n^2)`.
    /// Magnitudes, and therefore total power, are unchanged.
    pub fn apply_quadratic_phase(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        for (i, a) in out.amplitudes.iter_mut().enumerate() {
            let n = i as f64 - self.n_max as f64;
            *a *= Complex64::from_polar(1.0, alpha * n * n);
        }
        out
    }

    /// Zeroes the indices selected by `filter`. The returned spectrum's total
    /// power is the transmission of the filter.
    pub fn apply_filter(&self, filter: &FilterKind) -> Result<Self> {
        if let FilterKind::KeepIndices(set) = filter {
            if set.is_empty() {
                return Err(Error::Domain("KeepIndices set must be non-empty".into()));
            }
        }
        let mut out = self.clone();
        for (i, a) in out.amplitudes.iter_mut().enumerate() {
            let n = i as i64 - self.n_max as i64;
            let removed = match filter {
                FilterKind::RemoveCarrier => n == 0,
                FilterKind::RemoveOddSidebands => n.rem_euclid(2) == 1,
                FilterKind::KeepIndices(set) => !set.contains(&n),
            };
            if removed {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if out.total_power() <= 0.0 {
            return Err(Error::DegenerateSpectrum(
                "filter removed all optical power".into(),
            ));
        }
        Ok(out)
    }

    /// Unnormalized pair overlap `sum_n a_n^* a_{n+k}`.
    pub fn pair_overlap(&self, k: usize) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let n_max = self.n_max as i64;
        for n in -n_max..=n_max - k as i64 {
            sum += self.amplitude(n).conj() * self.amplitude(n + k as i64);
        }
        sum
    }

    /// Amplitude-modulation efficiency of order `k`:
    /// `|sum_n a_n^* a_{n+k}| / sum_n |a_n|^2`, in `[0, 1]`.
    ///
    /// Order `k > 1` covers subharmonic modulation where the spectrum spacing
    /// is `omega_q / k`.
    pub fn am_efficiency(&self, k: usize) -> f64 {
        self.pair_overlap(k).norm() / self.total_power()
    }

    /// Rescales amplitudes to unit total power.
    pub fn normalize_power(&self) -> Result<Self> {
        let power = self.total_power();
        if power <= 0.0 {
            return Err(Error::DegenerateSpectrum(
                "cannot normalize a zero-power spectrum".into(),
            ));
        }
        let mut out = self.clone();
        let s = power.sqrt().recip();
        for a in out.amplitudes.iter_mut() {
            *a *= s;
        }
        Ok(out)
    }

    /// Dimensionless field envelope `sum_n a_n exp(i n omega t)`.
    pub fn field_envelope(&self, t: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, self.mod_frequency * t);
        // walk up from n = -n_max with a running power of exp(i w t)
        let mut phase = Complex64::from_polar(1.0, -(self.n_max as f64) * self.mod_frequency * t);
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &self.amplitudes {
            sum += a * phase;
            phase *= step;
        }
        sum
    }

    /// Laser intensity `|Omega(t)|^2 = carrier_power_scale * |envelope|^2`
    /// sampled at `times`.
    pub fn intensity_waveform(&self, times: &[f64]) -> Vec<f64> {
        times
            .iter()
            .map(|&t| self.carrier_power_scale * self.field_envelope(t).norm_sqr())
            .collect()
    }

    /// One beat period of the spectrum.
    pub fn beat_period(&self) -> f64 {
        std::f64::consts::TAU / self.mod_frequency
    }

    /// Uniform grid of [`DEFAULT_WAVEFORM_SAMPLES`] samples covering one beat
    /// period, endpoint excluded.
    pub fn default_time_grid(&self) -> Vec<f64> {
        let dt = self.beat_period() / DEFAULT_WAVEFORM_SAMPLES as f64;
        (0..DEFAULT_WAVEFORM_SAMPLES).map(|i| i as f64 * dt).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpectrumRecord::from(self)).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SpectrumRecord =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        record.try_into()
    }
}

fn check_scales(mod_frequency: f64, carrier_power_scale: f64) -> Result<()> {
    if !(mod_frequency > 0.0) {
        return Err(Error::Domain(format!(
            "mod_frequency must be positive, got {mod_frequency}"
        )));
    }
    if !(carrier_power_scale > 0.0) {
        return Err(Error::Domain(format!(
            "carrier_power_scale must be positive, got {carrier_power_scale}"
        )));
    }
    Ok(())
}

/// Wire format: `{mod_frequency_rad_s, carrier_power_scale, amplitudes: [[n, re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SpectrumRecord {
    mod_frequency_rad_s: f64,
    carrier_power_scale: f64,
    amplitudes: Vec<(i64, f64, f64)>,
}

impl From<&SidebandSpectrum> for SpectrumRecord {
    fn from(spec: &SidebandSpectrum) -> Self {
        Self {
            mod_frequency_rad_s: spec.mod_frequency,
            carrier_power_scale: spec.carrier_power_scale,
            amplitudes: spec.components().map(|(n, a)| (n, a.re, a.im)).collect(),
        }
    }
}

impl TryFrom<SpectrumRecord> for SidebandSpectrum {
    type Error = Error;

    fn try_from(record: SpectrumRecord) -> Result<Self> {
        let components: Vec<(i64, Complex64)> = record
            .amplitudes
            .iter()
            .map(|&(n, re, im)| (n, Complex64::new(re, im)))
            .collect();
        SidebandSpectrum::from_components(
            &components,
            record.mod_frequency_rad_s,
            record.carrier_power_scale,
        )
    }
}
