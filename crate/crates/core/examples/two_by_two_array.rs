// Four balanced splitters: the mirrors of the Mach-Zehnder layout are
// replaced by beam splitters, and channel 4 goes dark.

use splitmesh::oracle::two_by_two_output;
use splitmesh::{detector_readout, evolve, uniform_spec, MixingAngle, PureState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = uniform_spec(2, MixingAngle::BALANCED)?;
    let out = evolve(&spec, &PureState::basis(1, 2)?)?;

    println!("simulated   : {:.4?}", out.state.amplitudes());
    println!(
        "closed form : {:.4?}",
        two_by_two_output(std::f64::consts::FRAC_PI_4)
    );

    let readout = detector_readout(&out.state);
    println!("{readout}");
    assert!(readout.entries[3].probability < 1e-15);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
