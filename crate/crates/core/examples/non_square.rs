// A non-square layout carved out of a 4 x 4 array: devices outside a 2 x 4
// band are set transparent (angle 0) through a theta map, so photons pass
// them untouched.

use splitmesh::{detector_readout, evolve, MixingAngle, PureState, ThetaMap};

const MAP: &str = "\
# rows 1-2 hold balanced splitters; rows 3-4 are left empty
1 1 pi/4
1 2 pi/4
1 3 pi/4
1 4 pi/4
2 1 T:50
2 2 T:50
2 3 T:50
2 4 T:50
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ThetaMap::parse(MAP)?.resolve(4, Some(MixingAngle::TRANSPARENT))?;
    let out = evolve(&spec, &PureState::basis(1, 4)?)?;
    println!("{}", detector_readout(&out.state));
    // nothing ever reaches the row channels of the empty rows
    assert_eq!(out.state.probabilities()[4], 0.0);
    assert_eq!(out.state.probabilities()[6], 0.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
