//! Agent-based Moran simulator: an independent estimate of fixation
//! probabilities and embedded-chain occupancy, used to cross-check the
//! analytic pipeline.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{group_payoffs, imitation_prob, DynamicsError, DynamicsParams};
use crate::fmath;
use crate::payoff::PayoffMatrix;

/// splitmix64: tiny, platform-independent, with a published reference
/// sequence. Every simulation draw in this crate flows through it, so a
/// (seed, config) pair reproduces bit-identical results anywhere.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in 0..n.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let i = (self.next_f64() * n as f64) as usize;
        i.min(n - 1)
    }
}

/// One simulation request: the game, the process parameters, and the budget.
#[derive(Clone, Debug)]
pub struct SimConfig<'a> {
    pub matrix: &'a PayoffMatrix,
    pub dynamics: DynamicsParams,
    pub runs: u64,
    pub seed: u64,
    pub max_steps_per_run: u64,
}

/// Absorption can take arbitrarily long in principle; this cap is generous
/// enough that hitting it signals a modelling problem, and doing so is a hard
/// error rather than silent censoring (which would bias the estimate).
pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;

impl<'a> SimConfig<'a> {
    pub fn new(matrix: &'a PayoffMatrix, dynamics: DynamicsParams, runs: u64, seed: u64) -> Self {
        SimConfig { matrix, dynamics, runs, seed, max_steps_per_run: DEFAULT_MAX_STEPS }
    }
}

/// Monte Carlo fixation estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixationEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub runs_used: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    ZeroRuns,
    ZeroMaxSteps,
    SameStrategy(usize),
    StrategyOutOfRange { index: usize, count: usize },
    Dynamics(DynamicsError),
    Truncated { run: u64, max_steps: u64 },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::ZeroRuns => write!(f, "runs must be at least 1"),
            SimError::ZeroMaxSteps => write!(f, "max steps per run must be at least 1"),
            SimError::SameStrategy(i) => {
                write!(f, "resident and mutant must differ, both are index {i}")
            }
            SimError::StrategyOutOfRange { index, count } => {
                write!(f, "strategy index {index} out of range for {count} strategies")
            }
            SimError::Dynamics(e) => write!(f, "{e}"),
            SimError::Truncated { run, max_steps } => {
                write!(f, "run {run} exceeded {max_steps} steps without absorbing")
            }
        }
    }
}

impl core::error::Error for SimError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SimError::Dynamics(e) => Some(e),
            _ => None,
        }
    }
}

impl From<DynamicsError> for SimError {
    fn from(e: DynamicsError) -> Self {
        SimError::Dynamics(e)
    }
}

/// Estimates the probability that a single mutant fixates, by simulating the
/// Moran process run by run.
///
/// Each run starts from 1 mutant among M − 1 residents (agents 0..count are
/// the mutants) and steps until the mutant count hits 0 or M. A step draws,
/// in this fixed order: a focal agent uniform over M, a model uniform over
/// the other M − 1, and an acceptance uniform. All three draws happen even
/// when focal and model share a strategy and the step cannot change anything;
/// this keeps the draw count per step constant, so changing the payoffs never
/// reshuffles the random stream.
///
/// Run r is driven by its own generator seeded with the r-th output of a
/// seeding generator over `cfg.seed`, which makes runs independent and lets a
/// caller partition them without changing results.
pub fn simulate_fixation(
    resident: usize,
    mutant: usize,
    cfg: &SimConfig<'_>,
) -> Result<FixationEstimate, SimError> {
    cfg.dynamics.check()?;
    let q = cfg.matrix.q();
    for index in [resident, mutant] {
        if index >= q {
            return Err(SimError::StrategyOutOfRange { index, count: q });
        }
    }
    if resident == mutant {
        return Err(SimError::SameStrategy(resident));
    }
    if cfg.runs == 0 {
        return Err(SimError::ZeroRuns);
    }
    if cfg.max_steps_per_run == 0 {
        return Err(SimError::ZeroMaxSteps);
    }

    let m_total = cfg.dynamics.population;
    let s = cfg.dynamics.selection;
    // acceptance probabilities by mutant count, fixed for the whole estimate:
    // grow[m] is a resident adopting the mutant strategy, shrink[m] the reverse
    let mut grow = vec![0.0f64; m_total];
    let mut shrink = vec![0.0f64; m_total];
    for m in 1..m_total {
        let (p_mut, p_res) = group_payoffs(cfg.matrix, mutant, resident, m, &cfg.dynamics)?;
        grow[m] = imitation_prob(s, p_res, p_mut);
        shrink[m] = imitation_prob(s, p_mut, p_res);
    }

    let mut seeder = SplitMix64::new(cfg.seed);
    let mut fixations = 0u64;
    for run in 0..cfg.runs {
        let mut rng = SplitMix64::new(seeder.next_u64());
        let mut count = 1usize;
        let mut steps = 0u64;
        while count > 0 && count < m_total {
            if steps == cfg.max_steps_per_run {
                return Err(SimError::Truncated { run, max_steps: cfg.max_steps_per_run });
            }
            steps += 1;
            let focal = rng.next_index(m_total);
            let k = rng.next_index(m_total - 1);
            let model = k + usize::from(k >= focal);
            let accept = rng.next_f64();
            let focal_is_mutant = focal < count;
            let model_is_mutant = model < count;
            if focal_is_mutant != model_is_mutant {
                if focal_is_mutant {
                    if accept < shrink[count] {
                        count -= 1;
                    }
                } else if accept < grow[count] {
                    count += 1;
                }
            }
        }
        if count == m_total {
            fixations += 1;
        }
    }

    let runs = cfg.runs as f64;
    let p_hat = fixations as f64 / runs;
    let stderr = fmath::sqrt(p_hat * (1.0 - p_hat) / runs);
    Ok(FixationEstimate { p_hat, stderr, runs_used: cfg.runs })
}

/// Visit counts of the homogeneous-state jump chain. Counts are integers so
/// their total equals the number of jumps exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainOccupancy {
    counts: Vec<u64>,
    jumps: u64,
}

impl ChainOccupancy {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn jumps(&self) -> u64 {
        self.jumps
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.jumps as f64).collect()
    }
}

/// Simulates the embedded strategy-switch chain directly on a fixation
/// matrix: from state i, propose one of the other q − 1 states uniformly and
/// move there with probability `fix[i][j]`, otherwise stay. Each jump counts
/// the state it leaves from, so self-loops are included in occupancy. Starts
/// in state 0; two draws per jump (proposal index, acceptance uniform).
pub fn simulate_embedded_chain(fix: &[f64], q: usize, jumps: u64, seed: u64) -> ChainOccupancy {
    assert!(q >= 2, "chain needs at least two states");
    assert_eq!(fix.len(), q * q, "fixation matrix must be q x q");
    assert!(jumps >= 1);
    let mut rng = SplitMix64::new(seed);
    let mut counts = vec![0u64; q];
    let mut state = 0usize;
    for _ in 0..jumps {
        counts[state] += 1;
        let j = rng.next_index(q - 1);
        let candidate = j + usize::from(j >= state);
        if rng.next_f64() < fix[state * q + candidate] {
            state = candidate;
        }
    }
    ChainOccupancy { counts, jumps }
}
