//! Amplitude-modulation efficiency versus modulation depth for a dispersive
//! element, measured on the constructed spectra: the curve follows
//! J1(2 beta sin alpha) and peaks at the depth the curvature demands.

use ramanforge::conversion::{
    method_metrics_numeric, required_beta_for_optimum, ConversionMethod,
};

fn main() -> ramanforge::Result<()> {
    let alpha = 0.73;
    let required = required_beta_for_optimum(alpha)?;
    println!("curvature alpha = {alpha}: optimal depth beta = {required:.4}\n");
    println!("beta     efficiency");
    let mut peak = (0.0, 0.0);
    for i in 1..=30 {
        let beta = std::f64::consts::PI * i as f64 / 30.0;
        let eta = method_metrics_numeric(ConversionMethod::Dispersive { alpha }, beta)?
            .am_efficiency;
        if eta > peak.1 {
            peak = (beta, eta);
        }
        let bar = "#".repeat((eta * 60.0) as usize);
        println!("{beta:5.3}  {eta:.4} {bar}");
    }
    println!("\ngrid peak at beta = {:.3} (expected {required:.3})", peak.0);
    Ok(())
}
