// Cross-checks the two-amplitude evolution against explicit dense matrix
// products and reports the residuals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splitmesh::cli::{random_angle_spec, random_state};
use splitmesh::oracle::{amplitude_defect, dense_evolve, unitarity_defect};
use splitmesh::{compose_total, evolve};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [1, 2, 4, 8, 16] {
        let spec = random_angle_spec(p, &mut rng);
        let input = random_state(p, &mut rng);
        let fast = evolve(&spec, &input)?.state;
        let slow = dense_evolve(&spec, &input)?;
        let total = compose_total(&spec)?;
        println!(
            "p={p:>2}: |fast - dense| = {:.1e}, |U'U - 1| = {:.1e}",
            amplitude_defect(fast.amplitudes(), slow.amplitudes()).value(),
            unitarity_defect(&total).value()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
