//! Pulse-error robustness: the self-correcting XY16 pattern against a
//! fixed-phase train of equal length, swept over amplitude miscalibration.

use ramanforge::sequences::{
    build_sequence, simulate_sequence, CloserSign, NoiseModel, SequenceKind,
};

fn main() -> ramanforge::Result<()> {
    let pi_time = 2.5641e-7;
    println!("amplitude error   XY16-256 return   fixed-phase return");
    for amplitude_error in [0.0, 0.005, 0.01, 0.02, 0.05] {
        let noise = NoiseModel {
            amplitude_error,
            ..NoiseModel::default()
        };
        let xy16 = build_sequence(
            &SequenceKind::Xy16 {
                repeats: 16,
                gap: 0.0,
                closer: CloserSign::PlusX,
            },
            pi_time,
        )?;
        let train = build_sequence(
            &SequenceKind::FixedPhaseTrain {
                pi_pulses: 256,
                gap: 0.0,
                closer: CloserSign::PlusX,
            },
            pi_time,
        )?;
        println!(
            "{amplitude_error:>15.3} {:>17.6} {:>20.6}",
            simulate_sequence(&xy16, &noise, 1)?.signal,
            simulate_sequence(&train, &noise, 1)?.signal
        );
    }
    Ok(())
}
