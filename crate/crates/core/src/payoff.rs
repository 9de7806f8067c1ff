//! Pairwise payoff construction: base game, commitment cost, incentive reward.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::strategy::{
    commitment_formed, enumerate_strategies, realized_action, Action, GameVariant, Strategy,
};

/// Institutional reward rule for committed players.
///
/// `StrictCom` pays a committed player whose Y slot is Cooperate; `FlexibleCom`
/// pays a committed player whose Y slot is anything but Defect. The reward
/// conditions on the Y slot (the action the player is committed to), not on
/// the realized outcome of a particular pairing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum IncentiveScheme {
    #[default]
    None,
    StrictCom,
    FlexibleCom,
}

impl IncentiveScheme {
    /// Whether a committed player with this Y slot collects the reward.
    pub fn rewards(self, when_committed: Action) -> bool {
        match self {
            IncentiveScheme::None => false,
            IncentiveScheme::StrictCom => when_committed == Action::Cooperate,
            IncentiveScheme::FlexibleCom => when_committed != Action::Defect,
        }
    }
}

/// Full parameter set for one game: base payoffs, exit payoff, commitment cost,
/// reward size, scheme, and variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub u: f64,
    pub scheme: IncentiveScheme,
    pub variant: GameVariant,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            r: 1.0,
            s: -1.0,
            t: 2.0,
            p: 0.0,
            sigma: 0.1,
            epsilon: 0.1,
            u: 0.5,
            scheme: IncentiveScheme::None,
            variant: GameVariant::Opd,
        }
    }
}

/// A parameter combination that is rejected outright.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamError {
    SigmaOutOfRange(f64),
    NegativeEpsilon(f64),
    NegativeReward(f64),
    NonFinite(&'static str),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::SigmaOutOfRange(v) => write!(f, "sigma must lie in [0, 1], got {v}"),
            ParamError::NegativeEpsilon(v) => write!(f, "epsilon must be >= 0, got {v}"),
            ParamError::NegativeReward(v) => write!(f, "u must be >= 0, got {v}"),
            ParamError::NonFinite(name) => write!(f, "parameter {name} must be finite"),
        }
    }
}

impl core::error::Error for ParamError {}

impl GameParams {
    /// Validates hard domain constraints and reports (without rejecting) a
    /// violated payoff ordering. The ordering T > R > σ > P > S is only
    /// meaningful for σ strictly inside (0, 1); sweeps legitimately touch the
    /// closed endpoints, so those never warn.
    pub fn validate(&self) -> Result<Option<String>, ParamError> {
        for (name, v) in [
            ("R", self.r),
            ("S", self.s),
            ("T", self.t),
            ("P", self.p),
            ("sigma", self.sigma),
            ("epsilon", self.epsilon),
            ("u", self.u),
        ] {
            if !v.is_finite() {
                return Err(ParamError::NonFinite(name));
            }
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(ParamError::SigmaOutOfRange(self.sigma));
        }
        if self.epsilon < 0.0 {
            return Err(ParamError::NegativeEpsilon(self.epsilon));
        }
        if self.u < 0.0 {
            return Err(ParamError::NegativeReward(self.u));
        }
        let interior = self.sigma > 0.0 && self.sigma < 1.0;
        let ordered = self.t > self.r
            && (!interior || (self.r > self.sigma && self.sigma > self.p))
            && self.p > self.s;
        if !ordered {
            let mut msg = String::from("payoff ordering T > R > sigma > P > S is violated (");
            msg.push_str(&alloc::format!(
                "T={}, R={}, sigma={}, P={}, S={})",
                self.t, self.r, self.sigma, self.p, self.s
            ));
            return Ok(Some(msg));
        }
        Ok(None)
    }

    /// Same parameters with the incentive scheme switched off. Welfare
    /// accounting uses this: the reward u is a transfer from the institution,
    /// so it cancels out of the population total, while the commitment cost
    /// epsilon is real and stays.
    pub fn without_rewards(mut self) -> GameParams {
        self.scheme = IncentiveScheme::None;
        self
    }
}

/// Square pairwise-payoff matrix over an ordered strategy list. Entry `(i, j)`
/// is the payoff of the row strategy `i` against the column strategy `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffMatrix {
    strategies: Vec<Strategy>,
    values: Vec<f64>,
}

impl PayoffMatrix {
    pub fn q(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.strategies.len() + col]
    }

    /// Restriction to a subset (or reordering) of the strategies, preserving
    /// the pairwise values. Indices refer to this matrix's current order.
    pub fn sub_game(&self, indices: &[usize]) -> PayoffMatrix {
        let strategies: Vec<Strategy> = indices.iter().map(|&i| self.strategies[i]).collect();
        let mut values = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            for &j in indices {
                values.push(self.get(i, j));
            }
        }
        PayoffMatrix { strategies, values }
    }

    /// A matrix built from explicit values, for tests and small constructed
    /// games. `values` is row-major and must be `strategies.len()²` long.
    pub fn from_values(strategies: Vec<Strategy>, values: Vec<f64>) -> PayoffMatrix {
        assert_eq!(values.len(), strategies.len() * strategies.len());
        PayoffMatrix { strategies, values }
    }
}

/// The base one-shot game on realized actions: mutual cooperation pays R,
/// mutual defection P, a cooperator against a defector S against T, and any
/// pairing involving Exit pays both players sigma.
pub fn base_opd_payoff(a: Action, b: Action, params: &GameParams) -> f64 {
    if a == Action::Exit || b == Action::Exit {
        return params.sigma;
    }
    match (a, b) {
        (Action::Cooperate, Action::Cooperate) => params.r,
        (Action::Cooperate, _) => params.s,
        (_, Action::Cooperate) => params.t,
        _ => params.p,
    }
}

/// Payoff of strategy `i` against strategy `j`: the base payoff on realized
/// actions, minus the commitment cost when a commitment forms, plus the reward
/// when the scheme qualifies `i`'s Y slot.
pub fn pair_payoff(i: Strategy, j: Strategy, params: &GameParams) -> f64 {
    let committed = commitment_formed(i, j);
    let a = realized_action(i, j);
    let b = realized_action(j, i);
    let mut v = base_opd_payoff(a, b, params);
    if committed {
        v -= params.epsilon;
        if params.scheme.rewards(i.when_committed) {
            v += params.u;
        }
    }
    v
}

/// The full q×q matrix over the variant's canonical strategy order.
pub fn build_matrix(params: &GameParams) -> PayoffMatrix {
    let strategies = enumerate_strategies(params.variant);
    let q = strategies.len();
    let mut values = Vec::with_capacity(q * q);
    for &i in strategies {
        for &j in strategies {
            values.push(pair_payoff(i, j, params));
        }
    }
    PayoffMatrix { strategies: strategies.to_vec(), values }
}

/// The matrix used for welfare accounting: identical to [`build_matrix`] with
/// the scheme forced to `None` (epsilon retained, u stripped).
pub fn welfare_matrix(params: &GameParams) -> PayoffMatrix {
    build_matrix(&params.without_rewards())
}
