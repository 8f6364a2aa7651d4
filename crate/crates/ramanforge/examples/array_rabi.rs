//! Global Rabi driving of a tweezer array under an elliptical Gaussian
//! beam: per-row frequencies, ensemble damping from inhomogeneity, and the
//! fitted drive frequency.

use ramanforge::ensemble::{ensemble_rabi, ArrayGeometry, BeamProfile, RowSelection};

fn main() -> ramanforge::Result<()> {
    let geometry = ArrayGeometry::full(20, 30, 200e-6 / 29.0, 100e-6 / 19.0)?;
    let beam = BeamProfile {
        waist_minor: 40e-6,
        waist_major: 560e-6,
        center: [0.0, 0.0],
        peak_rabi: 2.0 * std::f64::consts::PI * 1.95e6,
    };

    let result = ensemble_rabi(&geometry, &beam, 4e-6, &RowSelection::MiddleRows(4))?;
    println!(
        "{} atoms selected, fractional Rabi spread {:.2e}",
        result.per_atom_rabi.len(),
        result.rabi_spread
    );
    if let Some(fit) = &result.fitted {
        println!(
            "fitted Rabi frequency: {:.4} MHz (drive set to 1.95 MHz at the beam center)",
            fit.params[2] / 1e6
        );
    }

    let full = ensemble_rabi(&geometry, &beam, 4e-6, &RowSelection::All)?;
    println!(
        "full-array spread {:.2e}: inhomogeneous damping sets in sooner than on the middle rows",
        full.rabi_spread
    );

    println!("\nt (us)   middle-rows signal   full-array signal");
    for i in (0..result.times.len()).step_by(result.times.len() / 8) {
        println!(
            "{:>6.2} {:>20.4} {:>19.4}",
            result.times[i] * 1e6,
            result.mean_signal[i],
            full.mean_signal[i]
        );
    }
    Ok(())
}
