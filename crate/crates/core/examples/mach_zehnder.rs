// A photon entering port 1 of the p = 2 array wired as a Mach-Zehnder
// interferometer (balanced splitters on the diagonal, mirrors elsewhere)
// always leaves through channel 3.

use splitmesh::simulator::{detector_readout_with_labels, DetectorLabels};
use splitmesh::{evolve, mach_zehnder_spec, PureState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out = evolve(&mach_zehnder_spec(), &PureState::basis(1, 2)?)?;
    for (d, probs) in out.trace.stages().iter().enumerate() {
        println!("stage {d}: {probs:.3?}");
    }
    println!(
        "final amplitude on channel 3: {:.3}",
        out.state.amplitude(3)?
    );

    // channels 3 and 4 are the interferometer's two detectors
    let labels = DetectorLabels::default()
        .with(1, "ch1")
        .with(2, "ch2")
        .with(3, "D1")
        .with(4, "D2");
    println!("{}", detector_readout_with_labels(&out.state, &labels));
    assert!((out.state.probabilities()[2] - 1.0).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
