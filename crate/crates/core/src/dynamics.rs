//! Moran process with Fermi updating: pairwise fixation probabilities in the
//! small-mutation limit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fmath;
use crate::payoff::PayoffMatrix;

/// Population size and imitation selection strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicsParams {
    pub population: usize,
    pub selection: f64,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams { population: 100, selection: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DynamicsError {
    PopulationTooSmall(usize),
    SelectionInvalid(f64),
    StrategyOutOfRange { index: usize, count: usize },
    MutantCountOutOfRange { count: usize, population: usize },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::PopulationTooSmall(m) => {
                write!(f, "population must be at least 2, got {m}")
            }
            DynamicsError::SelectionInvalid(s) => {
                write!(f, "selection strength must be finite and >= 0, got {s}")
            }
            DynamicsError::StrategyOutOfRange { index, count } => {
                write!(f, "strategy index {index} out of range for {count} strategies")
            }
            DynamicsError::MutantCountOutOfRange { count, population } => write!(
                f,
                "mutant count must lie in 1..{population}, got {count}"
            ),
        }
    }
}

impl core::error::Error for DynamicsError {}

impl DynamicsParams {
    pub(crate) fn check(&self) -> Result<(), DynamicsError> {
        if self.population < 2 {
            return Err(DynamicsError::PopulationTooSmall(self.population));
        }
        if !self.selection.is_finite() || self.selection < 0.0 {
            return Err(DynamicsError::SelectionInvalid(self.selection));
        }
        Ok(())
    }
}

fn check_index(payoff: &PayoffMatrix, index: usize) -> Result<(), DynamicsError> {
    if index >= payoff.q() {
        return Err(DynamicsError::StrategyOutOfRange { index, count: payoff.q() });
    }
    Ok(())
}

/// Average payoffs `(mutant, resident)` in a well-mixed population holding
/// `mutant_count` copies of the mutant strategy and the rest residents. Each
/// player meets the other `M - 1`, so self-interaction is excluded.
pub fn group_payoffs(
    payoff: &PayoffMatrix,
    mutant: usize,
    resident: usize,
    mutant_count: usize,
    params: &DynamicsParams,
) -> Result<(f64, f64), DynamicsError> {
    params.check()?;
    check_index(payoff, mutant)?;
    check_index(payoff, resident)?;
    let m_total = params.population;
    if mutant_count == 0 || mutant_count >= m_total {
        return Err(DynamicsError::MutantCountOutOfRange {
            count: mutant_count,
            population: m_total,
        });
    }
    let m = mutant_count as f64;
    let big_m = m_total as f64;
    let denom = big_m - 1.0;
    let p_mut =
        ((m - 1.0) * payoff.get(mutant, mutant) + (big_m - m) * payoff.get(mutant, resident))
            / denom;
    let p_res =
        (m * payoff.get(resident, mutant) + (big_m - m - 1.0) * payoff.get(resident, resident))
            / denom;
    Ok((p_mut, p_res))
}

/// Fermi imitation probability: a focal player copies the model with
/// probability `1 / (1 + exp(s * (p_focal - p_model)))`. Extreme payoff gaps
/// saturate cleanly to 0 or 1 through f64 overflow of the exponential.
#[inline]
pub fn imitation_prob(selection: f64, payoff_focal: f64, payoff_model: f64) -> f64 {
    1.0 / (1.0 + fmath::exp(selection * (payoff_focal - payoff_model)))
}

/// Probability that a single mutant takes over a resident population.
///
/// The closed form is `rho = 1 / sum_{k=0}^{M-1} prod_{m=1}^{k} lambda_m` with
/// `lambda_m = exp(-s * (P_mut(m) - P_res(m)))`. Evaluated in the log domain:
/// with `c_k` the cumulative sum of the exponents (`c_0 = 0`) and `mx` their
/// maximum, `rho = exp(-mx) / sum_k exp(c_k - mx)`. Since `mx >= 0` every
/// summand is at most 1, so nothing overflows regardless of `s` or payoff
/// spread, and at `s = 0` the result is exactly `1 / M`.
pub fn fixation_probability(
    payoff: &PayoffMatrix,
    resident: usize,
    mutant: usize,
    params: &DynamicsParams,
) -> Result<f64, DynamicsError> {
    params.check()?;
    check_index(payoff, resident)?;
    check_index(payoff, mutant)?;
    let m_total = params.population;
    let mut c = Vec::with_capacity(m_total);
    c.push(0.0f64);
    let mut acc = 0.0f64;
    for m in 1..m_total {
        let (p_mut, p_res) = group_payoffs(payoff, mutant, resident, m, params)?;
        acc += -params.selection * (p_mut - p_res);
        c.push(acc);
    }
    let mx = c.iter().fold(0.0f64, |a, &b| if b > a { b } else { a });
    let sum: f64 = c.iter().map(|&ck| fmath::exp(ck - mx)).sum();
    Ok(fmath::exp(-mx) / sum)
}

/// All pairwise fixation probabilities, row-major: entry `(i, j)` is the
/// probability that a single `j`-mutant fixates in an all-`i` population.
/// Diagonal entries are 0 and never read downstream.
pub fn fixation_matrix(
    payoff: &PayoffMatrix,
    params: &DynamicsParams,
) -> Result<Vec<f64>, DynamicsError> {
    params.check()?;
    let q = payoff.q();
    let mut rho = vec![0.0f64; q * q];
    for i in 0..q {
        for j in 0..q {
            if i != j {
                rho[i * q + j] = fixation_probability(payoff, i, j, params)?;
            }
        }
    }
    Ok(rho)
}
