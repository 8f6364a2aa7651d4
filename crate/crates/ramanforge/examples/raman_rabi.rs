//! From sideband amplitudes to a simulated Rabi oscillation: the pair-sum
//! prediction against the integrated two-level dynamics, plus the
//! scattering budget of the operating point.

use ramanforge::fitting::{fit_decay, DecayModel};
use ramanforge::raman::{
    evolve_tls, raman_rabi_frequency, scattering_figures, QubitState, ThreeLevelParams,
};
use ramanforge::spectrum::SidebandSpectrum;

fn main() -> ramanforge::Result<()> {
    // dispersed drive at the benchmark operating point, scaled units
    let spectrum = SidebandSpectrum::phase_modulate(1.336, 1.0, 40)?.apply_quadratic_phase(0.76);
    let params = ThreeLevelParams {
        qubit_frequency: 1.0,
        detuning: 150.0,
        spectrum,
        excited_linewidth: 0.5,
    };

    let predicted = raman_rabi_frequency(&params)?;
    println!("pair-sum Rabi frequency: {predicted:.6e} (units of the carrier coupling)");

    let trajectory = evolve_tls(
        &params,
        2.0 * std::f64::consts::PI / predicted,
        &QubitState::ground(),
    )?;
    let p1: Vec<f64> = trajectory.populations.iter().map(|p| p[1]).collect();
    let fit = fit_decay(&trajectory.times, &p1, DecayModel::DampedCosine)?;
    let simulated = 2.0 * std::f64::consts::PI * fit.params[2];
    println!(
        "simulated Rabi frequency: {simulated:.6e} ({:+.4}% from prediction)",
        (simulated / predicted - 1.0) * 100.0
    );

    let figures = scattering_figures(&params)?;
    println!("scattering rate:          {:.3e}", figures.scattering_rate);
    println!("pi pulses per scatter:    {:.1}", figures.pi_pulses_per_scatter);

    let mut far = params;
    far.detuning *= 2.0;
    let figures_far = scattering_figures(&far)?;
    println!(
        "doubled detuning:         {:.1} pulses per scatter (x{:.2})",
        figures_far.pi_pulses_per_scatter,
        figures_far.pi_pulses_per_scatter / figures.pi_pulses_per_scatter
    );
    Ok(())
}
