//! Tweezer-array ensemble signals under an elliptical Gaussian beam, plus
//! the idle population-decay model.
//!
//! Geometry convention: the beam is cylindrically focused and propagates in
//! the array plane, so its minor waist points out of the plane (every atom
//! sits at minor-axis coordinate zero and only a beam pointing offset moves
//! them off it), its major waist runs along the row-stacking direction, and
//! columns line up with the propagation axis, which carries no attenuation.
//! The local Raman Rabi frequency is proportional to the local intensity:
//! `rabi = peak * exp(-dx^2/w_minor^2 - dy^2/w_major^2)` with `dx` the
//! out-of-plane beam offset and `dy` the row position relative to the beam
//! center. Ensemble reductions use pairwise summation so results do not
//! depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fitting::{fit_decay, DecayModel, FitResult};
use crate::format::format_g12;

/// Which sites to occupy.
#[derive(Debug, Clone, PartialEq)]
pub enum FillPattern {
    /// Every site holds an atom.
    Full,
    /// Row-major occupancy mask, length `rows * cols`.
    Mask(Vec<bool>),
    /// Independent Bernoulli loading with a seeded draw per site.
    Probability { p: f64, seed: u64 },
}

/// Rectangular tweezer grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub rows: usize,
    pub cols: usize,
    /// Column spacing along the beam propagation axis, m.
    pub pitch_x: f64,
    /// Row spacing along the beam major axis, m.
    pub pitch_y: f64,
    pub fill: FillPattern,
}

impl ArrayGeometry {
    pub fn full(rows: usize, cols: usize, pitch_x: f64, pitch_y: f64) -> Result<Self> {
        let geometry = Self {
            rows,
            cols,
            pitch_x,
            pitch_y,
            fill: FillPattern::Full,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    fn validate(&self) -> Result<()> {
        if self.rows * self.cols == 0 {
            return Err(Error::Domain("array needs at least one site".into()));
        }
        if !(self.pitch_x > 0.0 && self.pitch_y > 0.0) {
            return Err(Error::Domain("array pitches must be positive".into()));
        }
        if let FillPattern::Mask(mask) = &self.fill {
            if mask.len() != self.rows * self.cols {
                return Err(Error::Domain(format!(
                    "mask length {} does not match {} sites",
                    mask.len(),
                    self.rows * self.cols
                )));
            }
        }
        if let FillPattern::Probability { p, .. } = self.fill {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("fill probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Occupied sites with centered coordinates.
    pub fn sites(&self) -> Result<Vec<Site>> {
        self.validate()?;
        let mut rng = match self.fill {
            FillPattern::Probability { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut sites = Vec::with_capacity(self.rows * self.cols);
        for row in 0..self.rows {
            for col in 0..self.cols {
                let occupied = match &self.fill {
                    FillPattern::Full => true,
                    FillPattern::Mask(mask) => mask[row * self.cols + col],
                    FillPattern::Probability { p, .. } => {
                        rng.as_mut().unwrap().gen::<f64>() < *p
                    }
                };
                if occupied {
                    sites.push(Site {
                        row,
                        col,
                        x: (col as f64 - (self.cols as f64 - 1.0) / 2.0) * self.pitch_x,
                        y: (row as f64 - (self.rows as f64 - 1.0) / 2.0) * self.pitch_y,
                    });
                }
            }
        }
        if sites.is_empty() {
            return Err(Error::Domain("no occupied site in the array".into()));
        }
        Ok(sites)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub row: usize,
    pub col: usize,
    /// Position along the beam propagation axis, m.
    pub x: f64,
    /// Position along the beam major axis, m.
    pub y: f64,
}

/// Elliptical Gaussian illumination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProfile {
    /// Minor-axis waist, normal to the array plane, m.
    pub waist_minor: f64,
    /// Major-axis waist, along the row-stacking direction, m.
    pub waist_major: f64,
    /// Beam center offset `[out of plane, along major axis]`, m.
    pub center: [f64; 2],
    /// Raman Rabi frequency at the beam center, rad/s.
    pub peak_rabi: f64,
}

impl BeamProfile {
    fn validate(&self) -> Result<()> {
        if !(self.waist_minor > 0.0 && self.waist_major > 0.0) {
            return Err(Error::Domain("beam waists must be positive".into()));
        }
        if !(self.peak_rabi > 0.0) {
            return Err(Error::Domain("peak Rabi frequency must be positive".into()));
        }
        Ok(())
    }

    /// Local Rabi frequency at a site. Atoms sit at minor-axis coordinate
    /// zero, so only the out-of-plane pointing offset enters that factor.
    pub fn rabi_at(&self, site: &Site) -> f64 {
        let dx = self.center[0] / self.waist_minor;
        let dy = (site.y - self.center[1]) / self.waist_major;
        self.peak_rabi * (-dx * dx - dy * dy).exp()
    }
}

/// Local Rabi frequency per occupied site.
pub fn per_atom_rabi(geometry: &ArrayGeometry, beam: &BeamProfile) -> Result<Vec<(Site, f64)>> {
    beam.validate()?;
    Ok(geometry
        .sites()?
        .into_iter()
        .map(|site| (site, beam.rabi_at(&site)))
        .collect())
}

/// Row subset entering the ensemble average.
#[derive(Debug, Clone, PartialEq)]
pub enum RowSelection {
    All,
    /// The `count` rows closest to the array center.
    MiddleRows(usize),
    Rows(Vec<usize>),
}

impl RowSelection {
    fn selected(&self, rows: usize) -> Result<Vec<usize>> {
        let list = match self {
            Self::All => (0..rows).collect::<Vec<_>>(),
            Self::MiddleRows(count) => {
                if *count == 0 || *count > rows {
                    return Err(Error::Domain(format!(
                        "middle-row count {count} outside 1..={rows}"
                    )));
                }
                let start = (rows - count) / 2;
                (start..start + count).collect()
            }
            Self::Rows(list) => {
                if list.is_empty() || list.iter().any(|&r| r >= rows) {
                    return Err(Error::Domain("row selection out of range".into()));
                }
                list.clone()
            }
        };
        Ok(list)
    }
}

/// Optional ensemble-level imperfections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleOptions {
    /// Fractional rms of a per-shot global drive-amplitude fluctuation;
    /// 0 disables the channel.
    pub power_fluctuation_sigma: f64,
    /// Shots averaged when the fluctuation channel is on.
    pub shots: usize,
    pub seed: u64,
    /// Signal samples over the scan.
    pub samples: usize,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self {
            power_fluctuation_sigma: 0.0,
            shots: 1,
            seed: 0,
            samples: 1024,
        }
    }
}

/// Row-resolved and averaged Rabi signals with a damped-cosine fit.
#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub per_atom_rabi: Vec<(Site, f64)>,
    pub times: Vec<f64>,
    /// `(row index, averaged signal)` for each selected row.
    pub row_signals: Vec<(usize, Vec<f64>)>,
    /// Average over all selected atoms.
    pub mean_signal: Vec<f64>,
    pub fitted: Option<FitResult>,
    /// Fractional spread (max-min over mean) of the selected Rabi
    /// frequencies.
    pub rabi_spread: f64,
}

impl EnsembleResult {
    /// CSV export, header `t,signal_row<K>...,signal_mean`.
    pub fn to_csv(&self) -> String {
        let mut header = String::from("t");
        for (row, _) in &self.row_signals {
            header.push_str(&format!(",signal_row{row}"));
        }
        header.push_str(",signal_mean\n");
        let mut out = header;
        for (i, &t) in self.times.iter().enumerate() {
            out.push_str(&format_g12(t));
            for (_, signal) in &self.row_signals {
                out.push(',');
                out.push_str(&format_g12(signal[i]));
            }
            out.push(',');
            out.push_str(&format_g12(self.mean_signal[i]));
            out.push('\n');
        }
        out
    }
}

/// Order-independent sum.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Average Rabi signal `(1 - cos(rabi * t)) / 2` of a set of atoms.
pub fn ensemble_signal(rabis: &[f64], times: &[f64]) -> Vec<f64> {
    let mut buffer = vec![0.0; rabis.len()];
    times
        .iter()
        .map(|&t| {
            for (slot, &rabi) in buffer.iter_mut().zip(rabis) {
                *slot = 0.5 * (1.0 - (rabi * t).cos());
            }
            pairwise_sum(&buffer) / rabis.len() as f64
        })
        .collect()
}

fn ensemble_signal_with_fluctuations(
    rabis: &[f64],
    times: &[f64],
    options: &EnsembleOptions,
) -> Vec<f64> {
    if options.power_fluctuation_sigma == 0.0 || options.shots <= 1 {
        return ensemble_signal(rabis, times);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut total = vec![0.0; times.len()];
    for _ in 0..options.shots {
        // Box-Muller draw of the per-shot global scale
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let scale = 1.0 + options.power_fluctuation_sigma * (-2.0 * u1.ln()).sqrt() * u2.cos();
        let scaled: Vec<f64> = rabis.iter().map(|r| r * scale.max(0.0)).collect();
        for (acc, v) in total.iter_mut().zip(ensemble_signal(&scaled, times)) {
            *acc += v;
        }
    }
    total.iter().map(|v| v / options.shots as f64).collect()
}

/// Simulates row-resolved Rabi oscillations of the illuminated array.
pub fn ensemble_rabi(
    geometry: &ArrayGeometry,
    beam: &BeamProfile,
    duration: f64,
    rows: &RowSelection,
) -> Result<EnsembleResult> {
    ensemble_rabi_with(geometry, beam, duration, rows, &EnsembleOptions::default())
}

pub fn ensemble_rabi_with(
    geometry: &ArrayGeometry,
    beam: &BeamProfile,
    duration: f64,
    rows: &RowSelection,
    options: &EnsembleOptions,
) -> Result<EnsembleResult> {
    if !(duration > 0.0) {
        return Err(Error::Domain(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let atoms = per_atom_rabi(geometry, beam)?;
    let selected_rows = rows.selected(geometry.rows)?;
    let samples = options.samples.max(16);
    let times: Vec<f64> = (0..samples)
        .map(|i| duration * i as f64 / (samples - 1) as f64)
        .collect();

    let mut row_signals = Vec::new();
    for &row in &selected_rows {
        let rabis: Vec<f64> = atoms
            .iter()
            .filter(|(site, _)| site.row == row)
            .map(|(_, r)| *r)
            .collect();
        if rabis.is_empty() {
            continue;
        }
        row_signals.push((
            row,
            ensemble_signal_with_fluctuations(&rabis, &times, options),
        ));
    }
    let selected: Vec<f64> = atoms
        .iter()
        .filter(|(site, _)| selected_rows.contains(&site.row))
        .map(|(_, r)| *r)
        .collect();
    if selected.is_empty() {
        return Err(Error::Domain("row selection contains no atoms".into()));
    }
    let mean_signal = ensemble_signal_with_fluctuations(&selected, &times, options);

    let (lo, hi) = selected
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    let mean_rabi = pairwise_sum(&selected) / selected.len() as f64;

    let fitted = fit_decay(&times, &mean_signal, DecayModel::DampedCosine).ok();
    Ok(EnsembleResult {
        per_atom_rabi: atoms,
        times,
        row_signals,
        mean_signal,
        fitted,
        rabi_spread: (hi - lo) / mean_rabi,
    })
}

/// One row of the idle-decay table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdleDecayRow {
    pub hold: f64,
    /// Probability of being found in the pushout-surviving state having
    /// started there.
    pub p_f1_start0: f64,
    /// Same, having started in the other state.
    pub p_f1_start1: f64,
    /// Probability the atom is still trapped (background loss only).
    pub survival: f64,
    /// Measured signals: survival times state probability.
    pub signal_start0: f64,
    pub signal_start1: f64,
}

impl IdleDecayRow {
    pub const CSV_HEADER: &'static str =
        "hold_s,p_f1_start0,p_f1_start1,survival,signal_start0,signal_start1";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            format_g12(self.hold),
            format_g12(self.p_f1_start0),
            format_g12(self.p_f1_start1),
            format_g12(self.survival),
            format_g12(self.signal_start0),
            format_g12(self.signal_start1)
        )
    }
}

/// Two-curve idle decay: exponential population mixing at rate `1/t1`
/// toward the fully mixed state, atom loss at `1/background_lifetime`.
/// The difference of the two state-preparation curves decays with constant
/// `t1` exactly.
pub fn idle_decay(t1: f64, background_lifetime: f64, holds: &[f64]) -> Result<Vec<IdleDecayRow>> {
    if !(t1 > 0.0) || !(background_lifetime > 0.0) {
        return Err(Error::Domain(
            "t1 and background lifetime must be positive".into(),
        ));
    }
    holds
        .iter()
        .map(|&hold| {
            if hold < 0.0 {
                return Err(Error::Domain(format!(
                    "hold time must be non-negative, got {hold}"
                )));
            }
            let mixing = (-hold / t1).exp();
            let survival = (-hold / background_lifetime).exp();
            let p0 = 0.5 * (1.0 + mixing);
            let p1 = 0.5 * (1.0 - mixing);
            Ok(IdleDecayRow {
                hold,
                p_f1_start0: p0,
                p_f1_start1: p1,
                survival,
                signal_start0: survival * p0,
                signal_start1: survival * p1,
            })
        })
        .collect()
}
