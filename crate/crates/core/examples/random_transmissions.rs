// Imperfect splitters: each of the 2500 devices of a p = 50 array draws its
// transmission from N(50%, 10%). Reports how the output mass splits
// between the right column and the bottom row across seeds.

use splitmesh::{detector_readout, evolve, random_spec, PureState, RandomThetaPolicy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let input = PureState::basis(1, 50)?;
    let mut right = Vec::new();
    for seed in 0..20 {
        let policy = RandomThetaPolicy::new(50.0, 10.0, seed)?;
        let (spec, sampled) = random_spec(50, &policy)?;
        let mean = sampled.iter().sum::<f64>() / sampled.len() as f64;
        let readout = detector_readout(&evolve(&spec, &input)?.state);
        println!(
            "seed {seed:>2}: mean T {mean:.2}%, right column mass {:.4}",
            readout.right_mass()
        );
        right.push(readout.right_mass());
    }
    let avg = right.iter().sum::<f64>() / right.len() as f64;
    println!(
        "average right column mass over {} seeds: {avg:.4}",
        right.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
