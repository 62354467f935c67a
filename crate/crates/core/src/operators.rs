//! Beam splitter operators.
//!
//! Every device `B(m,n)` of a `p x p` array is a two-level rotation on the
//! `2p`-dimensional channel space. It mixes the row channel `2m-1` with the
//! column channel `2n`:
//!
//! ```text
//! B(m,n) = 1 + (cos t - 1)(|2n><2n| + |2m-1><2m-1|) + i sin t (|2n><2m-1| + |2m-1><2n|)
//! ```
//!
//! and acts as the identity on every other channel. [`apply_bs`] updates
//! the two touched amplitudes in place; [`bs_dense`] materializes the full
//! matrix for verification.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{parse_error, Error, Result};
use crate::state::{ChannelIndex, PureState};

/// Largest array size for which a `2p x 2p` dense operator is built.
pub const DENSE_CAP: usize = 512;

/// Beam splitter mixing angle in radians.
///
/// Transmission is `cos^2` of the angle and reflection `sin^2`; `pi/4` is a
/// balanced splitter, `pi/2` a mirror and `0` a transparent slot.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixingAngle(f64);

impl MixingAngle {
    pub const TRANSPARENT: MixingAngle = MixingAngle(0.0);
    pub const BALANCED: MixingAngle = MixingAngle(PI / 4.0);
    pub const MIRROR: MixingAngle = MixingAngle(PI / 2.0);

    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFiniteAngle(radians));
        }
        Ok(Self(radians))
    }

    /// Skips the finiteness check. Only used to inject faults into the
    /// verification suites.
    pub(crate) fn new_unchecked(radians: f64) -> Self {
        Self(radians)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn from_transmission(t: TransmissionPercent) -> Self {
        theta_from_transmission(t)
    }

    pub fn transmission(self) -> TransmissionPercent {
        transmission_from_theta(self)
    }
}

impl fmt::Display for MixingAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `pi/4`-style multiples of pi (`pi`, `-pi/2`, `3pi/4`, `3*pi/4`),
/// plain radians (`0.7853981633974483`) or a transmission `T:<percent>`.
impl FromStr for MixingAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(t) = s.strip_prefix("T:").or_else(|| s.strip_prefix("t:")) {
            let t = t
                .parse::<f64>()
                .map_err(|e| parse_error("transmission", s, e.to_string()))?;
            return Ok(theta_from_transmission(TransmissionPercent::new(t)?));
        }
        if let Some(at) = s.find("pi") {
            let (head, tail) = (&s[..at], &s[at + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let coef = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h
                    .parse::<f64>()
                    .map_err(|e| parse_error("angle", s, format!("coefficient: {e}")))?,
            };
            let den = match tail {
                "" => 1.0,
                t => t
                    .strip_prefix('/')
                    .ok_or_else(|| parse_error("angle", s, "expected `/<denominator>` after pi"))?
                    .parse::<f64>()
                    .map_err(|e| parse_error("angle", s, format!("denominator: {e}")))?,
            };
            if den == 0.0 {
                return Err(parse_error("angle", s, "zero denominator"));
            }
            return MixingAngle::new(coef * PI / den);
        }
        let radians = s
            .parse::<f64>()
            .map_err(|e| parse_error("angle", s, e.to_string()))?;
        MixingAngle::new(radians)
    }
}

/// Transmission coefficient `T` in percent, `0 <= T <= 100`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransmissionPercent(f64);

impl TransmissionPercent {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=100.0).contains(&t) {
            return Err(Error::TransmissionOutOfRange(t));
        }
        Ok(Self(t))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Reflection `R = 100 - T`.
    pub fn reflection(self) -> f64 {
        100.0 - self.0
    }
}

/// `theta = arccos(sqrt(T/100))`, in `[0, pi/2]`.
pub fn theta_from_transmission(t: TransmissionPercent) -> MixingAngle {
    MixingAngle((t.0 / 100.0).sqrt().min(1.0).acos())
}

/// `T = 100 cos^2(theta)`.
pub fn transmission_from_theta(theta: MixingAngle) -> TransmissionPercent {
    let c = theta.0.cos();
    TransmissionPercent((100.0 * c * c).clamp(0.0, 100.0))
}

/// Grid position `(m, n)` (row, column, both 1-based) and mixing angle of
/// one device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    pub m: usize,
    pub n: usize,
    pub theta: MixingAngle,
}

impl BeamSplitterSpec {
    pub fn new(m: usize, n: usize, theta: MixingAngle) -> Self {
        Self { m, n, theta }
    }

    fn check(&self, p: usize) -> Result<()> {
        check_device(self.m, self.n, p)
    }
}

pub(crate) fn check_device(m: usize, n: usize, p: usize) -> Result<()> {
    if m == 0 || n == 0 || m > p || n > p {
        return Err(Error::DeviceOutOfGrid { m, n, p });
    }
    Ok(())
}

/// The row channel `2m-1` and column channel `2n` mixed by device `(m,n)`.
pub fn coupled_channels(m: usize, n: usize, p: usize) -> Result<(ChannelIndex, ChannelIndex)> {
    check_device(m, n, p)?;
    Ok((
        ChannelIndex::new(2 * m - 1, 2 * p)?,
        ChannelIndex::new(2 * n, 2 * p)?,
    ))
}

/// Square complex matrix acting on the channel space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self[(row - 1, col - 1)]
    }

    pub fn row_major(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.entries[j * d + i].conj());
            }
        }
        Self { dim: d, entries }
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &DenseOperator) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            let out = &mut entries[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Applies the operator to a state. The result is wrapped without a norm
    /// check so that non-unitary faults stay observable.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        Ok(PureState::from_amplitudes_unchecked(
            self.mul_vec(state.amplitudes())?,
        ))
    }

    /// Largest `|a_ij - b_ij|`. NaN if either side holds NaN.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, nan_max)
    }

    /// Left-multiplies in place by the two-level rotation of one device.
    /// Only rows `2m-1` and `2n` change.
    pub(crate) fn rotate_rows(&mut self, row_a: usize, row_b: usize, theta: MixingAngle) {
        let (c, s) = (theta.0.cos(), theta.0.sin());
        let is = Complex64::new(0.0, s);
        let d = self.dim;
        for j in 0..d {
            let a = self.entries[row_a * d + j];
            let b = self.entries[row_b * d + j];
            self.entries[row_a * d + j] = a * c + is * b;
            self.entries[row_b * d + j] = is * a + b * c;
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseOperator {
    type Output = Complex64;

    /// Zero-based `(row, col)`.
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

/// Max that propagates NaN instead of discarding it.
pub(crate) fn nan_max(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

/// Dense `2p x 2p` matrix of device `spec`.
pub fn bs_dense(spec: &BeamSplitterSpec, p: usize) -> Result<DenseOperator> {
    spec.check(p)?;
    if p > DENSE_CAP {
        return Err(Error::DenseCapExceeded { p, cap: DENSE_CAP });
    }
    let dim = 2 * p;
    let (row, col) = (2 * spec.m - 2, 2 * spec.n - 1);
    let (c, s) = (spec.theta.0.cos(), spec.theta.0.sin());
    let mut u = DenseOperator::identity(dim);
    u.entries[row * dim + row] = Complex64::new(c, 0.0);
    u.entries[col * dim + col] = Complex64::new(c, 0.0);
    u.entries[row * dim + col] = Complex64::new(0.0, s);
    u.entries[col * dim + row] = Complex64::new(0.0, s);
    Ok(u)
}

/// Applies device `spec` to `state` in place, touching only the two coupled
/// amplitudes `a = psi[2m-1]`, `b = psi[2n]`:
/// `a' = cos t a + i sin t b`, `b' = i sin t a + cos t b`.
pub fn apply_bs(state: &mut PureState, spec: &BeamSplitterSpec) -> Result<()> {
    let p = state.p();
    check_device(spec.m, spec.n, p).map_err(|_| Error::DimensionMismatch {
        expected: 2 * spec.m.max(spec.n),
        found: state.dim(),
    })?;
    rotate_pair(state.amplitudes_mut(), spec.m, spec.n, spec.theta);
    Ok(())
}

/// Unchecked kernel shared by [`apply_bs`] and the simulator.
#[inline]
pub(crate) fn rotate_pair(amps: &mut [Complex64], m: usize, n: usize, theta: MixingAngle) {
    let (c, s) = (theta.0.cos(), theta.0.sin());
    let is = Complex64::new(0.0, s);
    let (ia, ib) = (2 * m - 2, 2 * n - 1);
    let a = amps[ia];
    let b = amps[ib];
    amps[ia] = a * c + is * b;
    amps[ib] = is * a + b * c;
}

/// `B|1> = (cos t, i sin t)` for a lone splitter.
pub fn single_bs_output(theta: f64) -> [Complex64; 2] {
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(0.0, theta.sin()),
    ]
}

/// `B M B |1> = (-2 sin t cos t, i (cos^2 t - sin^2 t))` for a Mach-Zehnder
/// interferometer with two identical splitters around a mirror.
pub fn mach_zehnder_output(theta: f64) -> [Complex64; 2] {
    let (s, c) = theta.sin_cos();
    [
        Complex64::new(-2.0 * s * c, 0.0),
        Complex64::new(0.0, c * c - s * s),
    ]
}
