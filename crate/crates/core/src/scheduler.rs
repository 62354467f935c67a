//! Array layout: which angle each device carries and the order in which
//! devices act on the photon.
//!
//! Devices are applied one anti-diagonal at a time, starting from `(1,1)`
//! and ending at `(p,p)`. Devices on one anti-diagonal (`m + n` constant)
//! couple pairwise disjoint channels, so they commute.

use std::collections::HashSet;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    check_device, theta_from_transmission, BeamSplitterSpec, MixingAngle, TransmissionPercent,
};

/// Identifies the device ordering written into run manifests.
pub const SCHEDULE_VERSION: &str = "antidiagonal/v1: m+n ascending, m descending within a diagonal";

/// A `p x p` array with one mixing angle per device.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySpec {
    p: usize,
    // row-major, (m,n) at (m-1)*p + (n-1)
    thetas: Vec<MixingAngle>,
}

impl ArraySpec {
    pub fn from_fn(p: usize, mut theta: impl FnMut(usize, usize) -> MixingAngle) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        let thetas = (1..=p)
            .flat_map(|m| (1..=p).map(move |n| (m, n)))
            .map(|(m, n)| theta(m, n))
            .collect();
        Ok(Self { p, thetas })
    }

    /// Takes angles in row-major grid order.
    pub fn from_row_major(p: usize, thetas: Vec<MixingAngle>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        if thetas.len() != p * p {
            return Err(Error::DimensionMismatch {
                expected: p * p,
                found: thetas.len(),
            });
        }
        Ok(Self { p, thetas })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        2 * self.p
    }

    pub fn theta(&self, m: usize, n: usize) -> Result<MixingAngle> {
        check_device(m, n, self.p)?;
        Ok(self.thetas[(m - 1) * self.p + (n - 1)])
    }

    pub fn set_theta(&mut self, m: usize, n: usize, theta: MixingAngle) -> Result<()> {
        check_device(m, n, self.p)?;
        self.thetas[(m - 1) * self.p + (n - 1)] = theta;
        Ok(())
    }

    pub(crate) fn theta_unchecked(&self, m: usize, n: usize) -> MixingAngle {
        self.thetas[(m - 1) * self.p + (n - 1)]
    }

    pub fn device(&self, m: usize, n: usize) -> Result<BeamSplitterSpec> {
        Ok(BeamSplitterSpec::new(m, n, self.theta(m, n)?))
    }

    /// All devices in row-major order.
    pub fn devices(&self) -> impl Iterator<Item = BeamSplitterSpec> + '_ {
        self.thetas
            .iter()
            .enumerate()
            .map(move |(i, &theta)| BeamSplitterSpec::new(i / self.p + 1, i % self.p + 1, theta))
    }

    pub fn thetas_row_major(&self) -> &[MixingAngle] {
        &self.thetas
    }
}

/// Every device gets the same angle.
pub fn uniform_spec(p: usize, theta: MixingAngle) -> Result<ArraySpec> {
    ArraySpec::from_fn(p, |_, _| theta)
}

/// The `p = 2` array wired as a Mach-Zehnder interferometer: balanced
/// splitters at `(1,1)` and `(2,2)`, mirrors at `(1,2)` and `(2,1)`.
pub fn mach_zehnder_spec() -> ArraySpec {
    ArraySpec::from_fn(2, |m, n| {
        if m == n {
            MixingAngle::BALANCED
        } else {
            MixingAngle::MIRROR
        }
    })
    .expect("p = 2 is valid")
}

/// Normally distributed transmission coefficients, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomThetaPolicy {
    pub mean_t: f64,
    pub sigma_t: f64,
    pub seed: u64,
}

impl RandomThetaPolicy {
    pub fn new(mean_t: f64, sigma_t: f64, seed: u64) -> Result<Self> {
        if !sigma_t.is_finite() || sigma_t < 0.0 || !mean_t.is_finite() {
            return Err(crate::error::parse_error(
                "random transmission policy",
                &format!("{mean_t},{sigma_t}"),
                "mean must be finite and sigma finite and non-negative",
            ));
        }
        Ok(Self {
            mean_t,
            sigma_t,
            seed,
        })
    }
}

/// Draws one transmission per device, i.i.d. `N(mean_t, sigma_t)` from a
/// ChaCha8 stream seeded with `policy.seed`, clamps each draw into
/// `[0, 100]` and converts it to an angle.
///
/// Returns the spec and the raw draws in row-major grid order.
pub fn random_spec(p: usize, policy: &RandomThetaPolicy) -> Result<(ArraySpec, Vec<f64>)> {
    if p == 0 {
        return Err(Error::InvalidSize(p));
    }
    let normal = Normal::new(policy.mean_t, policy.sigma_t).map_err(|e| {
        crate::error::parse_error(
            "random transmission policy",
            &format!("{policy:?}"),
            e.to_string(),
        )
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let sampled: Vec<f64> = (0..p * p).map(|_| normal.sample(&mut rng)).collect();
    let thetas = sampled
        .iter()
        .map(|&t| TransmissionPercent::new(t.clamp(0.0, 100.0)).map(theta_from_transmission))
        .collect::<Result<Vec<_>>>()?;
    Ok((ArraySpec::from_row_major(p, thetas)?, sampled))
}

/// Number of devices on the `r`-th anti-diagonal when counted from the
/// `(p,p)` corner: `r` for `r <= p`, `2p - r` beyond.
pub fn anti_diagonal_len(r: usize, p: usize) -> Result<usize> {
    if p == 0 || r == 0 || r > 2 * p - 1 {
        return Err(Error::DiagonalOutOfRange { r, p: p.max(1) });
    }
    Ok(if r <= p { r } else { 2 * p - r })
}

/// Groups of device coordinates, applied group by group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSchedule {
    p: usize,
    diagonals: Vec<Vec<(usize, usize)>>,
}

impl DiagonalSchedule {
    /// Anti-diagonal order: group `d` (1-based) holds the devices with
    /// `m + n = d + 1`, listed by descending `m`.
    pub fn anti_diagonal(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        let diagonals = (1..2 * p)
            .map(|d| {
                let hi = d.min(p);
                let lo = (d + 1).saturating_sub(p).max(1);
                (lo..=hi).rev().map(|m| (m, d + 1 - m)).collect()
            })
            .collect();
        Ok(Self { p, diagonals })
    }

    /// Custom grouping. Every grid device must appear exactly once.
    pub fn from_groups(p: usize, diagonals: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        let mut seen = HashSet::with_capacity(p * p);
        for &(m, n) in diagonals.iter().flatten() {
            check_device(m, n, p)?;
            if !seen.insert((m, n)) {
                return Err(Error::DuplicateDevice { m, n });
            }
        }
        if seen.len() != p * p {
            let (m, n) = (1..=p)
                .flat_map(|m| (1..=p).map(move |n| (m, n)))
                .find(|c| !seen.contains(c))
                .expect("some device is missing");
            return Err(Error::MissingDevice { m, n });
        }
        Ok(Self { p, diagonals })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn diagonals(&self) -> &[Vec<(usize, usize)>] {
        &self.diagonals
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    /// All coordinates in application order.
    pub fn flatten(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.diagonals.iter().flatten().copied()
    }
}

/// Shorthand for [`DiagonalSchedule::anti_diagonal`].
pub fn diagonal_schedule(p: usize) -> Result<DiagonalSchedule> {
    DiagonalSchedule::anti_diagonal(p)
}

/// Per-device angles read from a text file.
///
/// One device per line, `m n <angle>`, where the angle is plain radians,
/// a `pi/4`-style literal or `T:<percent>`. `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ThetaMap {
    pub entries: Vec<(usize, usize, MixingAngle)>,
}

impl ThetaMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::ThetaMap {
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [m, n, angle] = fields[..] else {
                return Err(bad(format!(
                    "expected `m n angle`, got {} fields",
                    fields.len()
                )));
            };
            let m = m
                .parse::<usize>()
                .map_err(|e| bad(format!("row `{m}`: {e}")))?;
            let n = n
                .parse::<usize>()
                .map_err(|e| bad(format!("column `{n}`: {e}")))?;
            let theta = angle
                .parse::<MixingAngle>()
                .map_err(|e| bad(e.to_string()))?;
            entries.push((m, n, theta));
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Builds a full array. Devices not listed take `default`; without a
    /// default every device must be listed.
    pub fn resolve(&self, p: usize, default: Option<MixingAngle>) -> Result<ArraySpec> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        let mut slots: Vec<Option<MixingAngle>> = vec![None; p * p];
        for &(m, n, theta) in &self.entries {
            check_device(m, n, p)?;
            let slot = &mut slots[(m - 1) * p + (n - 1)];
            if slot.replace(theta).is_some() {
                return Err(Error::DuplicateDevice { m, n });
            }
        }
        let thetas = slots
            .into_iter()
            .enumerate()
            .map(|(i, slot)| {
                slot.or(default).ok_or(Error::MissingDevice {
                    m: i / p + 1,
                    n: i % p + 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ArraySpec::from_row_major(p, thetas)
    }
}
