//! How much modulation depth each dispersive element demands: the grating
//! reaches the optimum inside the accessible window, fibers and chirped
//! mirrors overshoot it by orders of magnitude.

use ramanforge::conversion::{
    alpha_from_gdd, fig1e_dataset, required_beta_for_optimum, standard_catalogue,
    DispersiveElement,
};

fn main() -> ramanforge::Result<()> {
    let qubit = 2.0 * std::f64::consts::PI * 6.8e9;

    let cbg = DispersiveElement::new("cbg", 4e8, 2.0 * std::f64::consts::PI * 50e9, 0.0)?;
    for reflections in [1, 2] {
        let curvature = alpha_from_gdd(&cbg, qubit, reflections)?;
        println!(
            "grating x{reflections}: alpha = {:.4} rad -> optimal depth beta = {:.4} rad",
            curvature.folded,
            required_beta_for_optimum(curvature.folded)?
        );
    }

    println!(
        "\n{:<18} {:>12} {:>12} {:>14} {:>10}",
        "element", "GDD (fs^2)", "alpha (rad)", "beta needed", "reachable"
    );
    for row in fig1e_dataset(&standard_catalogue(), qubit)? {
        println!(
            "{:<18} {:>12.3e} {:>12.3e} {:>14.4e} {:>10}",
            row.label, row.gdd_fs2, row.alpha, row.required_beta, row.reachable
        );
    }
    Ok(())
}
