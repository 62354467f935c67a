//! State evolution through a whole array.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{rotate_pair, DenseOperator, MixingAngle, DENSE_CAP};
use crate::scheduler::{uniform_spec, ArraySpec, DiagonalSchedule};
use crate::state::{probabilities_of, PureState};

/// Channel probabilities before the first diagonal (stage 0) and after
/// each diagonal `d = 1..=2p-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    p: usize,
    stages: Vec<Vec<f64>>,
}

impl EvolutionTrace {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn stages(&self) -> &[Vec<f64>] {
        &self.stages
    }

    pub fn stage(&self, d: usize) -> Option<&[f64]> {
        self.stages.get(d).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Largest `|sum_k P_k - 1|` over all stages.
    pub fn max_norm_drift(&self) -> f64 {
        self.stages
            .iter()
            .map(|s| (s.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, crate::operators::nan_max)
    }
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: PureState,
    pub trace: EvolutionTrace,
    /// Number of two-amplitude rotations performed, one per device.
    pub rotations: usize,
}

/// Runs `input` through every device of `spec` in anti-diagonal order.
pub fn evolve(spec: &ArraySpec, input: &PureState) -> Result<Evolution> {
    evolve_with_schedule(spec, &DiagonalSchedule::anti_diagonal(spec.p())?, input)
}

/// Runs `input` through `spec` in the order given by `schedule`, recording
/// one trace stage per schedule group.
pub fn evolve_with_schedule(
    spec: &ArraySpec,
    schedule: &DiagonalSchedule,
    input: &PureState,
) -> Result<Evolution> {
    check_sizes(spec, schedule, input.dim())?;
    let mut state = input.clone();
    let mut stages = Vec::with_capacity(schedule.len() + 1);
    stages.push(state.probabilities());
    let mut rotations = 0;
    let amps = state.amplitudes_mut();
    for diagonal in schedule.diagonals() {
        for &(m, n) in diagonal {
            rotate_pair(amps, m, n, spec.theta_unchecked(m, n));
            rotations += 1;
        }
        stages.push(probabilities_of(amps));
    }
    Ok(Evolution {
        state,
        trace: EvolutionTrace {
            p: spec.p(),
            stages,
        },
        rotations,
    })
}

fn check_sizes(spec: &ArraySpec, schedule: &DiagonalSchedule, dim: usize) -> Result<()> {
    if schedule.p() != spec.p() {
        return Err(Error::DimensionMismatch {
            expected: spec.p(),
            found: schedule.p(),
        });
    }
    if dim != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: dim,
        });
    }
    Ok(())
}

/// The whole-array operator: the product of every device matrix, later
/// diagonals on the left.
///
/// Each factor is two-level, so left-multiplying by it rewrites two rows of
/// the running product; the result equals the explicit dense chain.
pub fn compose_total(spec: &ArraySpec) -> Result<DenseOperator> {
    compose_with_schedule(spec, &DiagonalSchedule::anti_diagonal(spec.p())?)
}

pub fn compose_with_schedule(
    spec: &ArraySpec,
    schedule: &DiagonalSchedule,
) -> Result<DenseOperator> {
    check_sizes(spec, schedule, spec.dim())?;
    if spec.p() > DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            p: spec.p(),
            cap: DENSE_CAP,
        });
    }
    let mut total = DenseOperator::identity(spec.dim());
    for (m, n) in schedule.flatten() {
        total.rotate_rows(2 * m - 2, 2 * n - 1, spec.theta_unchecked(m, n));
    }
    Ok(total)
}

/// Where a channel leaves the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Odd channels exit through the right column.
    Right,
    /// Even channels exit through the bottom row.
    Bottom,
}

impl Side {
    pub fn of_channel(k: usize) -> Self {
        if k % 2 == 1 {
            Side::Right
        } else {
            Side::Bottom
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Bottom => "bottom",
        })
    }
}

/// Display names for detectors. Channel `k` is `D{k}` unless overridden.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DetectorLabels {
    overrides: BTreeMap<usize, String>,
}

impl DetectorLabels {
    pub fn with(mut self, channel: usize, label: impl Into<String>) -> Self {
        self.overrides.insert(channel, label.into());
        self
    }

    pub fn label(&self, channel: usize) -> String {
        self.overrides
            .get(&channel)
            .cloned()
            .unwrap_or_else(|| format!("D{channel}"))
    }

    /// Parses `3=D1,4=D2`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut labels = Self::default();
        for item in s.split(',').filter(|t| !t.is_empty()) {
            let (k, label) = item.split_once('=').ok_or_else(|| {
                crate::error::parse_error("detector label", item, "expected `channel=label`")
            })?;
            let k = k
                .parse::<usize>()
                .map_err(|e| crate::error::parse_error("detector label", item, e.to_string()))?;
            labels.overrides.insert(k, label.to_string());
        }
        Ok(labels)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorEntry {
    pub label: String,
    pub channel: usize,
    pub side: Side,
    pub probability: f64,
}

/// Final detection probabilities, one entry per channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorReadout {
    pub entries: Vec<DetectorEntry>,
}

impl DetectorReadout {
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    /// Probability mass leaving through the right column (odd channels).
    pub fn right_mass(&self) -> f64 {
        self.side_mass(Side::Right)
    }

    /// Probability mass leaving through the bottom row (even channels).
    pub fn bottom_mass(&self) -> f64 {
        self.side_mass(Side::Bottom)
    }

    fn side_mass(&self, side: Side) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.side == side)
            .map(|e| e.probability)
            .sum()
    }
}

impl fmt::Display for DetectorReadout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "detector\tchannel\tside\tprobability")?;
        for e in &self.entries {
            writeln!(
                f,
                "{}\t{}\t{}\t{:.17e}",
                e.label, e.channel, e.side, e.probability
            )?;
        }
        write!(
            f,
            "right\t{:.17e}\nbottom\t{:.17e}",
            self.right_mass(),
            self.bottom_mass()
        )
    }
}

pub fn detector_readout(state: &PureState) -> DetectorReadout {
    detector_readout_with_labels(state, &DetectorLabels::default())
}

pub fn detector_readout_with_labels(state: &PureState, labels: &DetectorLabels) -> DetectorReadout {
    let entries = state
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(i, probability)| DetectorEntry {
            label: labels.label(i + 1),
            channel: i + 1,
            side: Side::of_channel(i + 1),
            probability,
        })
        .collect();
    DetectorReadout { entries }
}

/// Final probabilities for one angle of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub theta: MixingAngle,
    pub probabilities: Vec<f64>,
}

/// Evolves `input` through `uniform_spec(p, theta)` for each grid angle.
///
/// Grid points are split over at most `threads` workers; rows come back in
/// grid order regardless.
pub fn detector_curves(
    p: usize,
    grid: &[MixingAngle],
    input: &PureState,
    threads: usize,
) -> Result<Vec<CurveRow>> {
    if grid.is_empty() {
        return Err(crate::error::parse_error("theta grid", "", "grid is empty"));
    }
    if input.dim() != 2 * p {
        return Err(Error::DimensionMismatch {
            expected: 2 * p,
            found: input.dim(),
        });
    }
    let row = |&theta: &MixingAngle| -> Result<CurveRow> {
        let out = evolve(&uniform_spec(p, theta)?, input)?;
        Ok(CurveRow {
            theta,
            probabilities: out.state.probabilities(),
        })
    };
    let threads = threads.clamp(1, grid.len());
    if threads == 1 {
        return grid.iter().map(row).collect();
    }
    let chunk = grid.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(row).collect::<Result<Vec<_>>>()))
            .collect();
        let mut rows = Vec::with_capacity(grid.len());
        for h in handles {
            rows.extend(h.join().expect("sweep worker panicked")?);
        }
        Ok(rows)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::mach_zehnder_spec;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn assert_vec_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn mach_zehnder_trace() {
        let out = evolve(&mach_zehnder_spec(), &PureState::basis(1, 2).unwrap()).unwrap();
        let expect = [
            [1.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.5],
            [0.0, 0.0, 1.0, 0.0],
        ];
        assert_eq!(out.trace.len(), 4);
        for (stage, e) in out.trace.stages().iter().zip(expect) {
            assert_vec_close(stage, &e, 1e-12);
        }
        let a3 = out.state.amplitude(3).unwrap();
        assert!((a3 - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert_eq!(out.rotations, 4);
    }

    #[test]
    fn balanced_two_by_two() {
        let out = evolve(
            &uniform_spec(2, MixingAngle::BALANCED).unwrap(),
            &PureState::basis(1, 2).unwrap(),
        )
        .unwrap();
        let expect = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        for (a, e) in out.state.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-15, "{a} vs {e}");
        }
        assert_vec_close(&out.state.probabilities(), &[0.25, 0.25, 0.5, 0.0], 1e-15);
    }

    #[test]
    fn transparent_array_is_identity() {
        let spec = uniform_spec(4, MixingAngle::TRANSPARENT).unwrap();
        for k in 1..=8 {
            let input = PureState::basis(k, 4).unwrap();
            let out = evolve(&spec, &input).unwrap();
            assert_eq!(out.state, input);
            assert!(out
                .trace
                .stages()
                .iter()
                .all(|s| s == &input.probabilities()));
        }
        assert_eq!(compose_total(&spec).unwrap(), DenseOperator::identity(8));
    }

    #[test]
    fn evolve_rejects_wrong_dimension() {
        let spec = uniform_spec(3, MixingAngle::BALANCED).unwrap();
        assert!(matches!(
            evolve(&spec, &PureState::basis(1, 2).unwrap()),
            Err(Error::DimensionMismatch {
                expected: 6,
                found: 4
            })
        ));
    }

    #[test]
    fn compose_single_device() {
        let t = 0.4;
        let spec = uniform_spec(1, MixingAngle::new(t).unwrap()).unwrap();
        let u = compose_total(&spec).unwrap();
        assert_eq!(u.entry(1, 1), Complex64::new(t.cos(), 0.0));
        assert_eq!(u.entry(1, 2), Complex64::new(0.0, t.sin()));
        assert_eq!(u.entry(2, 1), Complex64::new(0.0, t.sin()));
        assert_eq!(u.entry(2, 2), Complex64::new(t.cos(), 0.0));
    }

    #[test]
    fn readouts() {
        let mz = evolve(&mach_zehnder_spec(), &PureState::basis(1, 2).unwrap()).unwrap();
        let labels = DetectorLabels::default().with(3, "D1").with(4, "D2");
        let r = detector_readout_with_labels(&mz.state, &labels);
        assert_eq!(r.entries[2].label, "D1");
        assert_eq!(r.entries[2].side, Side::Right);
        assert!((r.entries[2].probability - 1.0).abs() < 1e-12);
        assert_eq!(r.entries[3].label, "D2");
        assert_eq!(r.entries[3].side, Side::Bottom);
        assert!(r.entries[3].probability.abs() < 1e-12);

        let bal = evolve(
            &uniform_spec(2, MixingAngle::BALANCED).unwrap(),
            &PureState::basis(1, 2).unwrap(),
        )
        .unwrap();
        let r = detector_readout(&bal.state);
        let zeros: Vec<usize> = r
            .entries
            .iter()
            .filter(|e| e.probability < 1e-15)
            .map(|e| e.channel)
            .collect();
        assert_eq!(zeros, [4]);
        assert!((r.right_mass() - 0.75).abs() < 1e-15);
        assert!((r.bottom_mass() - 0.25).abs() < 1e-15);

        let id = detector_readout(&PureState::basis(5, 3).unwrap());
        assert_eq!(id.probabilities(), [0., 0., 0., 0., 1., 0.]);
        assert_eq!(id.entries[4].label, "D5");
    }

    #[test]
    fn label_parsing() {
        let l = DetectorLabels::parse("3=D1,4=D2").unwrap();
        assert_eq!(l.label(3), "D1");
        assert_eq!(l.label(1), "D1");
        assert!(DetectorLabels::parse("3D1").is_err());
        assert!(DetectorLabels::parse("x=D1").is_err());
    }

    #[test]
    fn curves_match_closed_forms() {
        let input = PureState::basis(1, 2).unwrap();
        let grid: Vec<MixingAngle> = [0.0, FRAC_PI_4, FRAC_PI_2, 0.3, 1.1]
            .into_iter()
            .map(|t| MixingAngle::new(t).unwrap())
            .collect();
        let rows = detector_curves(2, &grid, &input, 3).unwrap();
        assert_eq!(rows.len(), grid.len());
        for row in &rows {
            let (s, c) = row.theta.radians().sin_cos();
            let expect = [
                c.powi(4),
                s * s * c * c,
                4.0 * s.powi(4) * c * c,
                s * s * (c * c - s * s).powi(2),
            ];
            assert_vec_close(&row.probabilities, &expect, 1e-12);
        }
        assert_vec_close(&rows[0].probabilities, &[1., 0., 0., 0.], 1e-15);
        assert_vec_close(&rows[1].probabilities, &[0.25, 0.25, 0.5, 0.], 1e-15);
        assert_vec_close(&rows[2].probabilities, &[0., 0., 0., 1.], 1e-15);
        assert_eq!(rows, detector_curves(2, &grid, &input, 1).unwrap());
        assert!(detector_curves(2, &[], &input, 1).is_err());
    }

    #[test]
    fn three_mirror_cascade_amplitude() {
        let out = evolve(
            &uniform_spec(2, MixingAngle::MIRROR).unwrap(),
            &PureState::basis(1, 2).unwrap(),
        )
        .unwrap();
        assert!((out.state.amplitude(4).unwrap() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
