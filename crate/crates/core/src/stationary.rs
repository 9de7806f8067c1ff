//! Embedded strategy-switch chain in the small-mutation limit and its
//! stationary distribution.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::strategy::Strategy;

/// Mass this far below zero is rounding noise and gets clamped; anything
/// lower is treated as a solver failure.
const NEGATIVE_MASS_TOL: f64 = 1e-12;
/// Bound on the infinity norm of `p T - p` after solving.
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum SolveError {
    Singular,
    NegativeMass { index: usize, value: f64 },
    ResidualTooLarge { residual: f64 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Singular => write!(f, "transition matrix system is singular"),
            SolveError::NegativeMass { index, value } => {
                write!(f, "stationary mass {value} at index {index} is below -{NEGATIVE_MASS_TOL}")
            }
            SolveError::ResidualTooLarge { residual } => {
                write!(f, "stationary residual {residual} exceeds {RESIDUAL_TOL}")
            }
        }
    }
}

impl core::error::Error for SolveError {}

/// A stationary distribution paired with the strategy order it was computed
/// over, so downstream consumers cannot mix up orderings.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDistribution {
    strategies: Vec<Strategy>,
    p: Vec<f64>,
}

impl StationaryDistribution {
    pub fn new(strategies: Vec<Strategy>, p: Vec<f64>) -> Self {
        assert_eq!(strategies.len(), p.len(), "one mass per strategy");
        debug_assert!(
            (p.iter().sum::<f64>() - 1.0).abs() < 1e-9 && p.iter().all(|&v| v >= 0.0),
            "mass vector must be a distribution"
        );
        StationaryDistribution { strategies, p }
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Mass of the strategy with this label, if present.
    pub fn mass_of(&self, label: &str) -> Option<f64> {
        self.strategies
            .iter()
            .position(|s| s.label() == label)
            .map(|i| self.p[i])
    }
}

/// Row-stochastic jump chain between homogeneous populations. Off-diagonal
/// entry `(i, j)` is `rho[i][j] / (q - 1)`: a mutant strategy is drawn
/// uniformly among the other `q - 1` and must then fixate. The diagonal
/// absorbs the rest of the row.
pub fn transition_matrix(rho: &[f64], q: usize) -> Vec<f64> {
    assert_eq!(rho.len(), q * q, "fixation matrix must be q x q");
    let mut t = vec![0.0f64; q * q];
    if q == 1 {
        t[0] = 1.0;
        return t;
    }
    let denom = (q - 1) as f64;
    for i in 0..q {
        let mut off = 0.0;
        for j in 0..q {
            if i != j {
                let v = rho[i * q + j] / denom;
                t[i * q + j] = v;
                off += v;
            }
        }
        t[i * q + i] = 1.0 - off;
    }
    t
}

/// Stationary distribution of a row-stochastic matrix: the left fixed vector
/// `p T = p` normalized to sum 1.
///
/// Solves `(T' - I) p = 0` with the last equation replaced by `sum(p) = 1`,
/// by Gaussian elimination with partial pivoting. Tiny negative entries from
/// rounding are clamped to zero and the vector renormalized; the result is
/// rejected if any entry is materially negative or the fixed-point residual
/// exceeds its bound.
pub fn stationary_distribution(transition: &[f64], q: usize) -> Result<Vec<f64>, SolveError> {
    assert_eq!(transition.len(), q * q, "transition matrix must be q x q");
    assert!(q >= 1, "chain needs at least one state");

    // A = T' - I, last row overwritten with ones; b = unit mass constraint
    let mut a = vec![0.0f64; q * q];
    for r in 0..q {
        for c in 0..q {
            a[r * q + c] = transition[c * q + r] - if r == c { 1.0 } else { 0.0 };
        }
    }
    for c in 0..q {
        a[(q - 1) * q + c] = 1.0;
    }
    let mut b = vec![0.0f64; q];
    b[q - 1] = 1.0;

    for col in 0..q {
        let mut pivot = col;
        for r in col + 1..q {
            if a[r * q + col].abs() > a[pivot * q + col].abs() {
                pivot = r;
            }
        }
        if a[pivot * q + col].abs() < 1e-250 {
            return Err(SolveError::Singular);
        }
        if pivot != col {
            for c in 0..q {
                a.swap(col * q + c, pivot * q + c);
            }
            b.swap(col, pivot);
        }
        let inv = 1.0 / a[col * q + col];
        for r in col + 1..q {
            let factor = a[r * q + col] * inv;
            if factor == 0.0 {
                continue;
            }
            a[r * q + col] = 0.0;
            for c in col + 1..q {
                a[r * q + c] -= factor * a[col * q + c];
            }
            b[r] -= factor * b[col];
        }
    }

    let mut p = vec![0.0f64; q];
    for r in (0..q).rev() {
        let mut v = b[r];
        for c in r + 1..q {
            v -= a[r * q + c] * p[c];
        }
        p[r] = v / a[r * q + r];
    }

    let mut sum = 0.0;
    for (i, v) in p.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v < -NEGATIVE_MASS_TOL {
                return Err(SolveError::NegativeMass { index: i, value: *v });
            }
            *v = 0.0;
        }
        sum += *v;
    }
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(SolveError::Singular);
    }
    for v in p.iter_mut() {
        *v /= sum;
    }

    let mut residual = 0.0f64;
    for j in 0..q {
        let mut pj = 0.0;
        for i in 0..q {
            pj += p[i] * transition[i * q + j];
        }
        let r = (pj - p[j]).abs();
        if r > residual {
            residual = r;
        }
    }
    if residual > RESIDUAL_TOL {
        return Err(SolveError::ResidualTooLarge { residual });
    }

    Ok(p)
}
