//! Single-photon states over the `2p` positional channels of a `p x p` array.
//!
//! Channels are numbered from 1 in the public API. Odd channels run along
//! rows (horizontal arms), even channels along columns (vertical arms).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{parse_error, Error, Result};

/// Norm tolerance applied when a state is constructed.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// A 1-based channel number `k` in `1..=2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelIndex(usize);

impl ChannelIndex {
    /// Checks `1 <= k <= dim`.
    pub fn new(k: usize, dim: usize) -> Result<Self> {
        if k == 0 || k > dim {
            return Err(Error::ChannelOutOfRange { k, dim });
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based storage offset.
    pub(crate) fn offset(self) -> usize {
        self.0 - 1
    }

    /// Odd channels travel along a row.
    pub fn is_horizontal(self) -> bool {
        self.0 % 2 == 1
    }
}

impl fmt::Display for ChannelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unit-norm amplitude vector over `2p` channels.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps raw amplitudes, checking even dimension and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > CONSTRUCTION_TOL || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm,
                tol: CONSTRUCTION_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Builds `|k>` for an array of size `p`.
    pub fn basis(k: usize, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        let dim = 2 * p;
        let k = ChannelIndex::new(k, dim)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k.offset()] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Assembles `sum_k c_k |k>` from `(k, c_k)` terms.
    ///
    /// With `auto_normalize` the vector is rescaled to unit norm; otherwise
    /// its norm must already be 1 within [`CONSTRUCTION_TOL`].
    pub fn superposition(
        terms: &[(usize, Complex64)],
        p: usize,
        auto_normalize: bool,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSize(p));
        }
        if terms.is_empty() {
            return Err(Error::EmptySuperposition);
        }
        let dim = 2 * p;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        let mut seen = vec![false; dim];
        for &(k, c) in terms {
            let k = ChannelIndex::new(k, dim)?;
            if std::mem::replace(&mut seen[k.offset()], true) {
                return Err(Error::DuplicateChannel(k.get()));
            }
            amplitudes[k.offset()] = c;
        }
        if auto_normalize {
            let norm = l2_norm(&amplitudes);
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::ZeroVector);
            }
            amplitudes.iter_mut().for_each(|a| *a /= norm);
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Array size `p = dim / 2`.
    pub fn p(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of 1-based channel `k`.
    pub fn amplitude(&self, k: usize) -> Result<Complex64> {
        let k = ChannelIndex::new(k, self.dim())?;
        Ok(self.amplitudes[k.offset()])
    }

    /// `|amplitude_k|^2` for every channel, in channel order.
    pub fn probabilities(&self) -> Vec<f64> {
        probabilities_of(&self.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Amplitude storage for the evolution kernels, which are unitary and
    /// therefore keep the norm invariant.
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: 2 * (dim / 2).max(1),
            found: dim,
        });
    }
    Ok(())
}

/// Euclidean norm of a raw amplitude vector.
pub fn l2_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn probabilities_of(amplitudes: &[Complex64]) -> Vec<f64> {
    amplitudes.iter().map(|a| a.norm_sqr()).collect()
}

/// An input state as written on the command line: either a bare channel
/// `k` or a superposition literal `k:re[+im i],...` such as
/// `1:0.70710678,2:0.70710678` or `3:0-1i`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Basis(usize),
    Terms(Vec<(usize, Complex64)>),
}

/// Literals typed by hand are rarely normalized to 1e-9; anything within
/// this distance of unit norm is rescaled, anything further is rejected.
pub const LITERAL_NORM_TOL: f64 = 1e-4;

impl InputSpec {
    /// Builds the state for an array of size `p`.
    pub fn to_state(&self, p: usize) -> Result<PureState> {
        match self {
            InputSpec::Basis(k) => PureState::basis(*k, p),
            InputSpec::Terms(terms) => {
                let raw = PureState::superposition(terms, p, true)?;
                let norm = terms.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > LITERAL_NORM_TOL {
                    return Err(Error::NotNormalized {
                        norm,
                        tol: LITERAL_NORM_TOL,
                    });
                }
                Ok(raw)
            }
        }
    }
}

impl FromStr for InputSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(parse_error("input", s, "empty"));
        }
        if !s.contains(':') {
            let k = s
                .parse::<usize>()
                .map_err(|e| parse_error("input", s, e.to_string()))?;
            return Ok(InputSpec::Basis(k));
        }
        let terms = s
            .split(',')
            .map(|term| {
                let (k, value) = term
                    .split_once(':')
                    .ok_or_else(|| parse_error("superposition term", term, "expected `k:value`"))?;
                let k = k
                    .parse::<usize>()
                    .map_err(|e| parse_error("channel", k, e.to_string()))?;
                Ok((k, parse_complex(value)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InputSpec::Terms(terms))
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSpec::Basis(k) => write!(f, "{k}"),
            InputSpec::Terms(terms) => {
                for (i, (k, c)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    if c.im == 0.0 {
                        write!(f, "{k}:{}", c.re)?;
                    } else {
                        write!(f, "{k}:{}{:+}i", c.re, c.im)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`, `i` or `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let real = |t: &str| {
        t.parse::<f64>()
            .map_err(|e| parse_error("complex amplitude", s, e.to_string()))
    };
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => real(t),
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    match split {
        Some(j) => Ok(Complex64::new(real(&body[..j])?, imag(&body[j..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_states() {
        let one = PureState::basis(1, 2).unwrap();
        assert_eq!(
            one.amplitudes(),
            &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]
        );
        let four = PureState::basis(4, 2).unwrap();
        assert_eq!(four.probabilities(), vec![0., 0., 0., 1.]);
        assert!(matches!(
            PureState::basis(3, 1),
            Err(Error::ChannelOutOfRange { k: 3, dim: 2 })
        ));
        assert!(PureState::basis(0, 1).is_err());
        assert!(matches!(PureState::basis(1, 0), Err(Error::InvalidSize(0))));
    }

    #[test]
    fn superposition_cases() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let s = PureState::superposition(&[(1, h), (2, h)], 50, false).unwrap();
        let probs = s.probabilities();
        assert!((probs[0] - 0.5).abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15);
        assert_eq!(s.dim(), 100);

        let s = PureState::superposition(&[(49, h), (50, h)], 50, false).unwrap();
        assert!((s.probabilities()[48] - 0.5).abs() < 1e-15);
        assert!((s.probabilities()[49] - 0.5).abs() < 1e-15);

        let s = PureState::superposition(&[(1, c(2.0, 0.0))], 2, true).unwrap();
        assert_eq!(s, PureState::basis(1, 2).unwrap());
    }

    #[test]
    fn superposition_errors() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert!(matches!(
            PureState::superposition(&[(1, h), (1, h)], 2, true),
            Err(Error::DuplicateChannel(1))
        ));
        assert!(matches!(
            PureState::superposition(&[(1, c(0., 0.))], 2, true),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            PureState::superposition(&[(1, c(2., 0.))], 2, false),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::superposition(&[], 2, true),
            Err(Error::EmptySuperposition)
        ));
        assert!(matches!(
            PureState::superposition(&[(5, h)], 2, true),
            Err(Error::ChannelOutOfRange { k: 5, dim: 4 })
        ));
    }

    #[test]
    fn probabilities_and_norm() {
        let (s, co) = (FRAC_PI_4.sin(), FRAC_PI_4.cos());
        let st = PureState::from_amplitudes(vec![c(co, 0.), c(0., s)]).unwrap();
        let p = st.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);

        assert_eq!(l2_norm(&[c(1., 0.), c(0., 0.)]), 1.0);
        let v = [c(0.5, 0.), c(0., 0.5), c(-FRAC_1_SQRT_2, 0.), c(0., 0.)];
        assert!((l2_norm(&v) - 1.0).abs() < 1e-15);
        assert_eq!(l2_norm(&[c(0., 0.); 4]), 0.0);
    }

    #[test]
    fn rejects_odd_dimension() {
        assert!(PureState::from_amplitudes(vec![c(1., 0.)]).is_err());
        assert!(PureState::from_amplitudes(vec![c(1., 0.), c(0., 0.), c(0., 0.)]).is_err());
    }

    #[test]
    fn channel_parity() {
        assert!(ChannelIndex::new(3, 4).unwrap().is_horizontal());
        assert!(!ChannelIndex::new(4, 4).unwrap().is_horizontal());
    }

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.));
        assert_eq!(parse_complex("0-1i").unwrap(), c(0., -1.));
        assert_eq!(parse_complex("1.5+2i").unwrap(), c(1.5, 2.));
        assert_eq!(parse_complex("-i").unwrap(), c(0., -1.));
        assert_eq!(parse_complex("2i").unwrap(), c(0., 2.));
        assert_eq!(parse_complex("1e-3+1e-2i").unwrap(), c(1e-3, 1e-2));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+xi").is_err());
    }

    #[test]
    fn parses_input_specs() {
        assert_eq!("3".parse::<InputSpec>().unwrap(), InputSpec::Basis(3));
        let spec: InputSpec = "1:0.70710678,2:0.70710678".parse().unwrap();
        let st = spec.to_state(2).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-12);
        assert!((st.probabilities()[0] - 0.5).abs() < 1e-12);
        let spec: InputSpec = "3:0-1i".parse().unwrap();
        assert_eq!(spec.to_state(2).unwrap().amplitude(3).unwrap(), c(0., -1.));
        assert!("1:1,2:1".parse::<InputSpec>().unwrap().to_state(2).is_err());
        assert!("".parse::<InputSpec>().is_err());
        assert!("1:".parse::<InputSpec>().is_err());
        assert!("x:1".parse::<InputSpec>().is_err());
    }

    #[test]
    fn input_spec_display_roundtrips() {
        for s in ["4", "1:0.5,2:0.5+0.5i,3:0-0.5i"] {
            let spec: InputSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<InputSpec>().unwrap(), spec);
        }
    }
}
