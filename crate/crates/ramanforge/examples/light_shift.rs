//! Which spin transitions a laser polarization can drive, read off the
//! fictitious magnetic field of its vector light shift.

use num_complex::Complex64;
use ramanforge::light_shift::{
    detuning_interference, fictitious_field, transition_class, PolarizationVector,
};

fn main() -> ramanforge::Result<()> {
    let d1 = 2.0 * std::f64::consts::PI * 377.107e12;
    let d2 = 2.0 * std::f64::consts::PI * 384.230e12;
    let laser = 2.0 * std::f64::consts::PI * 377.2e12;
    let axis = [0.0, 0.0, 1.0];

    let cases = [
        ("circular about z", PolarizationVector::sigma_plus_z()),
        ("circular about x", PolarizationVector::circular_about_x()),
        ("linear, tilted", PolarizationVector::linear([0.6, 0.0, 0.8])?),
        (
            "elliptical",
            PolarizationVector::new([
                Complex64::new(0.8, 0.0),
                Complex64::new(0.0, 0.6),
                Complex64::new(0.0, 0.0),
            ])?,
        ),
    ];
    for (name, eps) in cases {
        let field = fictitious_field(&eps, 1.0, laser, d1, d2)?;
        println!(
            "{name:<18} -> direction [{:+.3} {:+.3} {:+.3}], class {:?}",
            field.direction[0],
            field.direction[1],
            field.direction[2],
            transition_class(&field, axis)
        );
    }

    println!("\ntwo-line interference bracket:");
    for (label, omega) in [
        ("blue of D1 (benchmark)", laser),
        ("between the lines", 0.5 * (d1 + d2)),
        ("far red of both", 0.5 * d1),
    ] {
        println!(
            "  {label:<24} {:+.3e}",
            detuning_interference(omega, d1, d2)?
        );
    }
    Ok(())
}
