//! Ramsey dephasing from a thermal (one-sided exponential) distribution of
//! quasi-static light shifts: Monte-Carlo contrast against the analytic
//! envelope, and the fitted coherence time.

use ramanforge::sequences::{ramsey_contrast, DetuningDistribution, NoiseModel};

fn main() -> ramanforge::Result<()> {
    let mean = 2161.0; // rad/s
    let noise = NoiseModel {
        static_detuning: DetuningDistribution::Exponential { mean },
        rng_seed: 2,
        ..NoiseModel::default()
    };
    let gaps: Vec<f64> = (0..30).map(|i| i as f64 * 5e-3 / 29.0).collect();
    let result = ramsey_contrast(&noise, &gaps, 2000)?;

    println!("gap (ms)   contrast   analytic envelope");
    for (&gap, &contrast) in gaps.iter().zip(&result.signal).step_by(5) {
        let envelope = 1.0 / (1.0 + (mean * gap) * (mean * gap)).sqrt();
        println!("{:>8.3} {contrast:>10.4} {envelope:>19.4}", gap * 1e3);
    }
    let fit = result.fitted.as_ref().expect("envelope fit");
    println!(
        "\nfitted detuning scale: {:.0} rad/s (configured {mean})",
        fit.params[1]
    );
    println!("fitted T2* = {:.4} ms", fit.decay_time() * 1e3);
    Ok(())
}
