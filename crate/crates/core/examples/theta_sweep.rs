// Detection probabilities of the uniform p = 2 array as the common mixing
// angle goes from transparent (0) to mirror (pi/2).

use splitmesh::cli::parse_grid;
use splitmesh::export::curves_csv;
use splitmesh::{detector_curves, PureState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = parse_grid("0:pi/2:9")?;
    let rows = detector_curves(2, &grid, &PureState::basis(1, 2)?, 4)?;
    print!("{}", curves_csv(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
