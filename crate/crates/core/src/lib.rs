//! Single-photon simulation of square beam splitter arrays.
//!
//! A `p x p` array has `2p` positional channels. Device `(m,n)` mixes row
//! channel `2m-1` with column channel `2n` by the rotation
//! `[[cos t, i sin t], [i sin t, cos t]]` and leaves every other channel
//! alone. Devices are applied one anti-diagonal at a time from `(1,1)` to
//! `(p,p)`; the simulator records the channel probabilities after each
//! anti-diagonal.
//!
//! ```
//! use splitmesh::{evolve, mach_zehnder_spec, PureState};
//!
//! let out = evolve(&mach_zehnder_spec(), &PureState::basis(1, 2).unwrap()).unwrap();
//! assert!((out.state.probabilities()[2] - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod export;
pub mod operators;
pub mod oracle;
pub mod scheduler;
pub mod simulator;
pub mod state;

pub use error::{Error, Result};
pub use operators::{
    apply_bs, bs_dense, coupled_channels, mach_zehnder_output, single_bs_output,
    theta_from_transmission, transmission_from_theta, BeamSplitterSpec, DenseOperator, MixingAngle,
    TransmissionPercent,
};
pub use scheduler::{
    anti_diagonal_len, diagonal_schedule, mach_zehnder_spec, random_spec, uniform_spec, ArraySpec,
    DiagonalSchedule, RandomThetaPolicy, ThetaMap,
};
pub use simulator::{
    compose_total, compose_with_schedule, detector_curves, detector_readout, evolve,
    evolve_with_schedule, DetectorReadout, Evolution, EvolutionTrace, Side,
};
pub use state::{ChannelIndex, InputSpec, PureState};
