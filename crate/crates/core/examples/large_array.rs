// Balanced arrays of growing size. Writes the p = 50 trace as CSV and as a
// graymap into the system temp directory.

use splitmesh::export::{trace_csv, trace_pgm};
use splitmesh::{detector_readout, evolve, uniform_spec, MixingAngle, PureState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [3, 10, 50] {
        let out = evolve(
            &uniform_spec(p, MixingAngle::BALANCED)?,
            &PureState::basis(1, p)?,
        )?;
        let readout = detector_readout(&out.state);
        println!(
            "p={p:>2}: {} devices, right column {:.4}, bottom row {:.4}",
            out.rotations,
            readout.right_mass(),
            readout.bottom_mass()
        );
        if p == 50 {
            let dir = std::env::temp_dir();
            std::fs::write(dir.join("splitmesh_p50.csv"), trace_csv(&out.trace))?;
            std::fs::write(dir.join("splitmesh_p50.pgm"), trace_pgm(&out.trace))?;
            println!("wrote {}", dir.join("splitmesh_p50.{csv,pgm}").display());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
