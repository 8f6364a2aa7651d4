//! The three sideband interference identities, evaluated with explicit
//! residuals: pure phase modulation interferes to nothing, quadratic phase
//! resurrects a single Bessel weight, and even-only spectra have closed
//! power and pair sums.

use ramanforge::bessel::{identity_even_sidebands, identity_pure_pm, identity_quadratic};

fn main() -> ramanforge::Result<()> {
    println!("pure phase modulation: sum_n J_n J_n+k = [k == 0]");
    for (beta, k) in [(1.0, 0), (1.336, 1), (2.5, 1), (3.574, 2)] {
        let r = identity_pure_pm(beta, k, 40)?;
        println!(
            "  beta = {beta:5.3}, k = {k}: lhs = {:+.12}, residual = {:.2e}",
            r.lhs.re, r.abs_error
        );
    }

    println!("\nquadratic phase: J_k(2 z sin phi) from the dispersed pair sum");
    for (z, phi, k) in [(1.0, std::f64::consts::FRAC_PI_2, 0), (1.336, 0.76, 1), (2.0, 0.3, 2)] {
        let r = identity_quadratic(z, phi, k, 40)?;
        println!(
            "  z = {z:5.3}, phi = {phi:5.3}, k = {k}: |J_k| = {:.6}, residual = {:.2e}",
            r.lhs.norm(),
            r.abs_error
        );
    }

    println!("\neven sidebands: power and pair sums");
    for beta in [0.8, 1.664, 3.0] {
        let (power, pairs) = identity_even_sidebands(beta, 40)?;
        println!(
            "  beta = {beta:5.3}: T = {:.6} (residual {:.2e}), pair sum = {:+.6} (residual {:.2e})",
            power.lhs.re, power.abs_error, pairs.lhs.re, pairs.abs_error
        );
    }
    Ok(())
}
