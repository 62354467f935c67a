//! Slow reference paths used to check the fast evolution kernels.
//!
//! Everything here goes through explicit `2p x 2p` matrices built by
//! [`bs_dense`], never through the two-amplitude update.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{bs_dense, nan_max, BeamSplitterSpec, DenseOperator, DENSE_CAP};
use crate::scheduler::{ArraySpec, DiagonalSchedule};
use crate::state::PureState;

/// Max-norm of a residual matrix.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Defect(pub f64);

impl Defect {
    pub fn value(self) -> f64 {
        self.0
    }

    /// False for NaN.
    pub fn within(self, tol: f64) -> bool {
        self.0 <= tol
    }
}

fn check_cap(p: usize) -> Result<()> {
    if p > DENSE_CAP {
        return Err(Error::DenseCapExceeded { p, cap: DENSE_CAP });
    }
    Ok(())
}

/// Multiplies `input` by each device matrix in anti-diagonal order.
pub fn dense_evolve(spec: &ArraySpec, input: &PureState) -> Result<PureState> {
    check_cap(spec.p())?;
    if input.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: input.dim(),
        });
    }
    let schedule = DiagonalSchedule::anti_diagonal(spec.p())?;
    let mut state = input.clone();
    for (m, n) in schedule.flatten() {
        state = bs_dense(&spec.device(m, n)?, spec.p())?.apply(&state)?;
    }
    Ok(state)
}

/// Explicit product of device matrices, later groups on the left.
pub fn dense_compose(spec: &ArraySpec, schedule: &DiagonalSchedule) -> Result<DenseOperator> {
    check_cap(spec.p())?;
    let mut total = DenseOperator::identity(spec.dim());
    for (m, n) in schedule.flatten() {
        total = bs_dense(&spec.device(m, n)?, spec.p())?.matmul(&total)?;
    }
    Ok(total)
}

/// `max |(U^dagger U - I)_ij|`.
pub fn unitarity_defect(u: &DenseOperator) -> Defect {
    let gram = u.adjoint().matmul(u).expect("square operator");
    Defect(gram.max_abs_diff(&DenseOperator::identity(u.dim())))
}

/// `max |(AB - BA)_ij|` for the dense matrices of two devices.
pub fn commutator_defect(a: &BeamSplitterSpec, b: &BeamSplitterSpec, p: usize) -> Result<Defect> {
    let (ua, ub) = (bs_dense(a, p)?, bs_dense(b, p)?);
    Ok(Defect(ua.matmul(&ub)?.max_abs_diff(&ub.matmul(&ua)?)))
}

/// Largest componentwise `|a_k - b_k|` between two amplitude vectors.
pub fn amplitude_defect(a: &[Complex64], b: &[Complex64]) -> Defect {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    Defect(
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, nan_max),
    )
}

/// Final amplitudes of `|1>` through the uniform `p = 2` array:
/// `(cos^2, i sin cos, -2 sin^2 cos, i (sin cos^2 - sin^3))`.
pub fn two_by_two_output(theta: f64) -> [Complex64; 4] {
    let (s, c) = theta.sin_cos();
    [
        Complex64::new(c * c, 0.0),
        Complex64::new(0.0, s * c),
        Complex64::new(-2.0 * s * s * c, 0.0),
        Complex64::new(0.0, s * c * c - s * s * s),
    ]
}
