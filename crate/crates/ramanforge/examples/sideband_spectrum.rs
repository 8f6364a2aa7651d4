//! Phase-modulate a carrier, reflect it from a dispersive element, and
//! watch amplitude modulation appear in the intensity waveform.

use ramanforge::spectrum::{FilterKind, SidebandSpectrum};

fn main() -> ramanforge::Result<()> {
    let omega = 2.0 * std::f64::consts::PI * 6.8e9;
    let pm = SidebandSpectrum::phase_modulate(1.336, omega, 40)?;
    println!("phase-modulated spectrum at beta = 1.336:");
    for n in -4i64..=4 {
        println!("  a_{n:+} = {:+.6}", pm.amplitude(n).re);
    }
    println!("  total power   = {:.12}", pm.total_power());
    println!("  am efficiency = {:.3e}  (pure PM cannot drive)", pm.am_efficiency(1));

    let dispersed = pm.apply_quadratic_phase(0.76);
    println!("\nafter quadratic phase alpha = 0.76:");
    println!("  total power   = {:.12}", dispersed.total_power());
    println!("  am efficiency = {:.6}", dispersed.am_efficiency(1));

    let times = dispersed.default_time_grid();
    let intensity = dispersed.intensity_waveform(&times);
    let (min, max) = intensity
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    println!("  intensity swing over one beat: {min:.4} .. {max:.4}");

    let filtered = pm.apply_filter(&FilterKind::RemoveCarrier)?;
    println!("\ncarrier-filtered alternative:");
    println!("  transmission  = {:.6}", filtered.total_power());
    println!("  am efficiency = {:.6} (order 2)", filtered.am_efficiency(2));

    println!("\nwire format: {}", &pm.to_json()[..80]);
    Ok(())
}
