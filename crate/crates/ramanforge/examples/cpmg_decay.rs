//! CPMG pulse-train benchmark: Monte-Carlo scattering decay and the fitted
//! 1/e pulse count, which should match -1/ln(1-p).

use ramanforge::fitting::DecayModel;
use ramanforge::report::cpmg_closer_difference;
use ramanforge::sequences::NoiseModel;

fn main() -> ramanforge::Result<()> {
    let p = 1.0 / 7852.0;
    let noise = NoiseModel {
        per_pulse_scatter_prob: p,
        rng_seed: 1,
        ..NoiseModel::default()
    };
    let counts: Vec<usize> = (0..24)
        .map(|i| (250.0 * (25_000.0f64 / 250.0).powf(i as f64 / 23.0)).round() as usize)
        .collect();
    let shots = 8000;
    let mut result = cpmg_closer_difference(&counts, 1e-5, 2.5641e-7, &noise, shots)?;
    println!("pulses   closer difference (+- stderr)");
    for ((n, s), e) in result
        .scan_values
        .iter()
        .zip(&result.signal)
        .step_by(4)
        .zip(result.stderr.iter().step_by(4))
    {
        println!("{n:>7.0}  {s:.4} +- {e:.4}");
    }
    let fit = result.fit(DecayModel::Exponential)?;
    println!(
        "\nfitted 1/e constant: {:.0} +- {:.0} pulses (configured rate gives {:.1})",
        fit.params[1],
        fit.uncertainties[1],
        -1.0 / (1.0 - p).ln()
    );
    Ok(())
}
