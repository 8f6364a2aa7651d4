//! Vector light shifts: the fictitious magnetic field of an off-resonant
//! laser and the spin transitions it can drive.
//!
//! An off-resonant beam acts on the ground manifold like a magnetic field
//! proportional to `Im[eps* x eps]`, weighted by the two-line detuning
//! bracket `1/(w_D2 - w) - 1/(w_D1 - w)`. Amplitude-modulating the beam
//! modulates this field, which is what actually drives the hyperfine
//! transition. The absolute dipole prefactor of the field is not fixed
//! here: magnitudes are reported in units of [`FIELD_SCALE_UNIT`], a
//! documented hook left at 1 so callers can attach real atomic constants.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Stand-in for the `mu_B g_J` times dipole-matrix-element prefactor of the
/// fictitious-field Hamiltonian. Kept at 1: every magnitude this module
/// reports is proportional to the physical field with this single constant.
pub const FIELD_SCALE_UNIT: f64 = 1.0;

/// Angle below which two directions count as parallel/orthogonal.
const ANGLE_TOLERANCE: f64 = 1e-6;

/// Unit Jones vector on the quantization frame (z is the quantization axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector {
    jones: [Complex64; 3],
}

impl PolarizationVector {
    /// Normalizes the given components; the zero vector is rejected.
    pub fn new(jones: [Complex64; 3]) -> Result<Self> {
        let norm = jones.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("polarization cannot be the zero vector".into()));
        }
        Ok(Self {
            jones: [jones[0] / norm, jones[1] / norm, jones[2] / norm],
        })
    }

    pub fn jones(&self) -> [Complex64; 3] {
        self.jones
    }

    /// `sigma^+` light propagating along z: `(x + i y) / sqrt(2)`.
    pub fn sigma_plus_z() -> Self {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        Self { jones: [r, i, Complex64::new(0.0, 0.0)] }
    }

    /// `sigma^-` light propagating along z: `(x - i y) / sqrt(2)`.
    pub fn sigma_minus_z() -> Self {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
        Self { jones: [r, i, Complex64::new(0.0, 0.0)] }
    }

    /// Circular light propagating along x: `(y + i z) / sqrt(2)`.
    pub fn circular_about_x() -> Self {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        Self { jones: [Complex64::new(0.0, 0.0), r, i] }
    }

    /// Linear polarization along an arbitrary real direction.
    pub fn linear(direction: [f64; 3]) -> Result<Self> {
        Self::new([
            Complex64::new(direction[0], 0.0),
            Complex64::new(direction[1], 0.0),
            Complex64::new(direction[2], 0.0),
        ])
    }

    /// `Im[eps* x eps]`: a real vector, zero exactly for linear light.
    pub fn helicity_vector(&self) -> [f64; 3] {
        let e = &self.jones;
        let cross = [
            e[1].conj() * e[2] - e[2].conj() * e[1],
            e[2].conj() * e[0] - e[0].conj() * e[2],
            e[0].conj() * e[1] - e[1].conj() * e[0],
        ];
        [cross[0].im, cross[1].im, cross[2].im]
    }
}

/// The effective magnetic field an off-resonant beam applies to the ground
/// manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FictitiousField {
    /// Unit direction, or the zero vector when no field is present.
    pub direction: [f64; 3],
    /// `intensity * |Im[eps* x eps]| * detuning_factor`, in units of
    /// [`FIELD_SCALE_UNIT`]; carries the sign of the detuning factor.
    pub magnitude_scale: f64,
    /// Two-line interference bracket `1/(w_D2 - w) - 1/(w_D1 - w)`.
    pub detuning_factor: f64,
}

/// Which spin transitions a modulated field drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionClass {
    /// Field along the quantization axis: `pi`-polarized transitions.
    Pi,
    /// Field orthogonal to the axis: `sigma^+-` transitions.
    Sigma,
    /// Tilted field: both kinds.
    Mixed,
    /// No vector light shift at all.
    None,
}

impl TransitionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pi => "pi",
            Self::Sigma => "sigma",
            Self::Mixed => "mixed",
            Self::None => "none",
        }
    }
}

/// Interference bracket of the two fine-structure lines.
///
/// Positive (constructive) between the lines, decaying as
/// `(d2 - d1)/detuning^2` far outside them.
pub fn detuning_interference(omega: f64, d1: f64, d2: f64) -> Result<f64> {
    if omega == d1 || omega == d2 {
        return Err(Error::Singularity(
            "laser frequency sits on an atomic line".into(),
        ));
    }
    Ok(1.0 / (d2 - omega) - 1.0 / (d1 - omega))
}

/// Fictitious field of a beam with the given polarization, intensity and
/// frequency relative to the two lines `d1 < d2`.
pub fn fictitious_field(
    eps: &PolarizationVector,
    intensity: f64,
    laser_freq: f64,
    d1: f64,
    d2: f64,
) -> Result<FictitiousField> {
    if !(intensity >= 0.0) {
        return Err(Error::Domain(format!(
            "intensity must be non-negative, got {intensity}"
        )));
    }
    let factor = detuning_interference(laser_freq, d1, d2)?;
    let helicity = eps.helicity_vector();
    let h_norm = norm3(&helicity);
    let direction = if h_norm > 0.0 {
        [
            helicity[0] / h_norm,
            helicity[1] / h_norm,
            helicity[2] / h_norm,
        ]
    } else {
        [0.0; 3]
    };
    Ok(FictitiousField {
        direction,
        magnitude_scale: FIELD_SCALE_UNIT * intensity * h_norm * factor,
        detuning_factor: factor,
    })
}

/// Classifies the spin transitions a field drives relative to the
/// quantization axis.
pub fn transition_class(field: &FictitiousField, quantization_axis: [f64; 3]) -> TransitionClass {
    let axis_norm = norm3(&quantization_axis);
    let axis = [
        quantization_axis[0] / axis_norm,
        quantization_axis[1] / axis_norm,
        quantization_axis[2] / axis_norm,
    ];
    if norm3(&field.direction) == 0.0 || field.magnitude_scale == 0.0 {
        return TransitionClass::None;
    }
    let dot = field.direction[0] * axis[0]
        + field.direction[1] * axis[1]
        + field.direction[2] * axis[2];
    // |dot| = cos(angle); compare against the angular tolerance
    if dot.abs() >= 1.0 - 0.5 * ANGLE_TOLERANCE * ANGLE_TOLERANCE {
        TransitionClass::Pi
    } else if dot.abs() <= ANGLE_TOLERANCE {
        TransitionClass::Sigma
    } else {
        TransitionClass::Mixed
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D1: f64 = 2.0 * std::f64::consts::PI * 377.107e12;
    const D2: f64 = 2.0 * std::f64::consts::PI * 384.230e12;
    const MIDPOINT: f64 = 0.5 * (D1 + D2);

    #[test]
    fn circular_about_z_points_along_z() {
        let field =
            fictitious_field(&PolarizationVector::sigma_plus_z(), 1.0, MIDPOINT, D1, D2).unwrap();
        assert!((field.direction[2] - 1.0).abs() < 1e-12);
        assert_eq!(transition_class(&field, [0.0, 0.0, 1.0]), TransitionClass::Pi);
    }

    #[test]
    fn linear_light_gives_no_field() {
        for dir in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.3, -0.4, 0.8]] {
            let eps = PolarizationVector::linear(dir).unwrap();
            let field = fictitious_field(&eps, 1.0, MIDPOINT, D1, D2).unwrap();
            assert!(field.magnitude_scale.abs() < 1e-12);
            assert_eq!(
                transition_class(&field, [0.0, 0.0, 1.0]),
                TransitionClass::None
            );
        }
    }

    #[test]
    fn circular_about_x_drives_sigma() {
        let field =
            fictitious_field(&PolarizationVector::circular_about_x(), 1.0, MIDPOINT, D1, D2)
                .unwrap();
        assert!((field.direction[0] - 1.0).abs() < 1e-12);
        assert_eq!(
            transition_class(&field, [0.0, 0.0, 1.0]),
            TransitionClass::Sigma
        );
    }

    #[test]
    fn tilted_field_is_mixed() {
        let eps = PolarizationVector::new([
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.6),
            Complex64::new(0.52915026, 0.0),
        ])
        .unwrap();
        let field = fictitious_field(&eps, 1.0, MIDPOINT, D1, D2).unwrap();
        assert_eq!(
            transition_class(&field, [0.0, 0.0, 1.0]),
            TransitionClass::Mixed
        );
    }

    #[test]
    fn between_the_lines_is_constructive() {
        let bracket = detuning_interference(MIDPOINT, D1, D2).unwrap();
        assert!(bracket > 0.0);
        assert!(1.0 / (D2 - MIDPOINT) > 0.0 && -1.0 / (D1 - MIDPOINT) > 0.0);
    }

    #[test]
    fn far_detuned_bracket_collapses() {
        let split = D2 - D1;
        let far = D2 + 100.0 * split;
        let mid = detuning_interference(MIDPOINT, D1, D2).unwrap();
        let bracket = detuning_interference(far, D1, D2).unwrap();
        assert!(bracket.abs() < 1e-2 * mid.abs());
        // leading order: (d2 - d1) / Delta^2
        let delta = far - MIDPOINT;
        assert!((bracket.abs() - split / (delta * delta)).abs() < 0.03 * split / (delta * delta));
    }

    #[test]
    fn degenerate_lines_never_interfere() {
        for omega in [0.5 * D1, 2.0 * D1, MIDPOINT] {
            assert_eq!(detuning_interference(omega, D1, D1).unwrap(), 0.0);
        }
    }

    #[test]
    fn on_resonance_is_singular() {
        assert!(matches!(
            detuning_interference(D1, D1, D2),
            Err(Error::Singularity(_))
        ));
        assert!(matches!(
            fictitious_field(&PolarizationVector::sigma_plus_z(), 1.0, D2, D1, D2),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn zero_polarization_is_rejected() {
        assert!(PolarizationVector::new([Complex64::new(0.0, 0.0); 3]).is_err());
    }

    fn arb_jones() -> impl Strategy<Value = PolarizationVector> {
        proptest::collection::vec(-1.0f64..1.0, 6).prop_filter_map("nonzero", |v| {
            PolarizationVector::new([
                Complex64::new(v[0], v[1]),
                Complex64::new(v[2], v[3]),
                Complex64::new(v[4], v[5]),
            ])
            .ok()
        })
    }

    proptest! {
        #[test]
        fn global_phase_leaves_field_unchanged(eps in arb_jones(), theta in 0.0f64..std::f64::consts::TAU) {
            let rotated = PolarizationVector::new(
                eps.jones().map(|c| c * Complex64::from_polar(1.0, theta)),
            )
            .unwrap();
            let f0 = fictitious_field(&eps, 2.0, MIDPOINT, D1, D2).unwrap();
            let f1 = fictitious_field(&rotated, 2.0, MIDPOINT, D1, D2).unwrap();
            for i in 0..3 {
                prop_assert!((f0.direction[i] - f1.direction[i]).abs() < 1e-9);
            }
            prop_assert!((f0.magnitude_scale - f1.magnitude_scale).abs()
                <= 1e-9 * f0.magnitude_scale.abs().max(1e-30));
        }

        #[test]
        fn conjugation_flips_the_field(eps in arb_jones()) {
            let conj = PolarizationVector::new(eps.jones().map(|c| c.conj())).unwrap();
            let f0 = fictitious_field(&eps, 1.0, MIDPOINT, D1, D2).unwrap();
            let f1 = fictitious_field(&conj, 1.0, MIDPOINT, D1, D2).unwrap();
            for i in 0..3 {
                prop_assert!((f0.direction[i] + f1.direction[i]).abs() < 1e-9);
            }
        }

        #[test]
        fn magnitude_is_linear_in_intensity(eps in arb_jones(), intensity in 0.0f64..50.0) {
            let f1 = fictitious_field(&eps, 1.0, MIDPOINT, D1, D2).unwrap();
            let fs = fictitious_field(&eps, intensity, MIDPOINT, D1, D2).unwrap();
            prop_assert!((fs.magnitude_scale - intensity * f1.magnitude_scale).abs()
                <= 1e-12 * f1.magnitude_scale.abs().max(1e-30));
        }
    }
}
