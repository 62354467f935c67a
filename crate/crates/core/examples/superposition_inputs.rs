// Inputs spread over two neighbouring channels of a balanced p = 50 array.

use splitmesh::{detector_readout, evolve, uniform_spec, InputSpec, MixingAngle};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = uniform_spec(50, MixingAngle::BALANCED)?;
    for literal in [
        "1:0.70710678,2:0.70710678",
        "49:0.70710678,50:0.70710678",
        "1:0.70710678,2:0-0.70710678i",
    ] {
        let input: InputSpec = literal.parse()?;
        let out = evolve(&spec, &input.to_state(50)?)?;
        let readout = detector_readout(&out.state);
        let (best, p) = readout
            .entries
            .iter()
            .map(|e| (e.channel, e.probability))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        println!(
            "{literal:<32} most likely channel {best} ({p:.4}), right mass {:.4}",
            readout.right_mass()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
