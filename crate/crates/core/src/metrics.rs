//! Population-level quantities derived from a stationary distribution.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::DynamicsParams;
use crate::payoff::{GameParams, PayoffMatrix};
use crate::stationary::StationaryDistribution;
use crate::strategy::{Action, CommitDisposition, Strategy};

/// The action a homogeneous population of this strategy realizes: two Accept
/// players always form the commitment, so the Y slot plays; otherwise the
/// Z slot does.
pub fn homogeneous_action(s: Strategy) -> Action {
    match s.disposition {
        CommitDisposition::Accept => s.when_committed,
        CommitDisposition::NotAccept => s.when_uncommitted,
    }
}

/// Stationary mass aggregated by homogeneous action. Sums to 1; `exit` is
/// identically 0 for the exit-free variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BehaviourFrequencies {
    pub cooperation: f64,
    pub defection: f64,
    pub exit: f64,
}

pub fn behaviour_frequencies(dist: &StationaryDistribution) -> BehaviourFrequencies {
    let mut b = BehaviourFrequencies { cooperation: 0.0, defection: 0.0, exit: 0.0 };
    for (s, &p) in dist.strategies().iter().zip(dist.p()) {
        match homogeneous_action(*s) {
            Action::Cooperate => b.cooperation += p,
            Action::Defect => b.defection += p,
            Action::Exit => b.exit += p,
        }
    }
    b
}

/// Stationary mass on strategies that accept the commitment.
pub fn commitment_acceptance(dist: &StationaryDistribution) -> f64 {
    dist.strategies()
        .iter()
        .zip(dist.p())
        .filter(|(s, _)| s.disposition == CommitDisposition::Accept)
        .map(|(_, &p)| p)
        .sum()
}

/// Expected self-play payoff under the stationary distribution, using the
/// reward-free welfare matrix: the reward is a transfer from the institution
/// and cancels against its cost, while the commitment fee does not.
pub fn social_welfare(dist: &StationaryDistribution, welfare: &PayoffMatrix) -> f64 {
    assert_eq!(
        dist.strategies(),
        welfare.strategies(),
        "distribution and welfare matrix must share the strategy order"
    );
    dist.p()
        .iter()
        .enumerate()
        .map(|(n, &p)| p * welfare.get(n, n))
        .sum()
}

/// Argmax of the three behaviour frequencies. Ties resolve to the earlier
/// entry in the order Cooperate, Defect, Exit; the strictly-greater
/// replacement below is exactly that rule.
pub fn dominant_behaviour(b: &BehaviourFrequencies) -> Action {
    let mut best = Action::Cooperate;
    let mut val = b.cooperation;
    if b.defection > val {
        best = Action::Defect;
        val = b.defection;
    }
    if b.exit > val {
        best = Action::Exit;
    }
    best
}

/// Strategies holding more than `threshold` stationary mass, sorted by
/// descending mass with position in the distribution's order as the
/// deterministic tie-break.
pub fn prevalent_strategies(
    dist: &StationaryDistribution,
    threshold: f64,
) -> Vec<(Strategy, f64)> {
    debug_assert!((0.0..=1.0).contains(&threshold));
    let mut hits: Vec<(usize, Strategy, f64)> = dist
        .strategies()
        .iter()
        .zip(dist.p())
        .enumerate()
        .filter(|(_, (_, &p))| p > threshold)
        .map(|(i, (&s, &p))| (i, s, p))
        .collect();
    hits.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then(a.0.cmp(&b.0)));
    hits.into_iter().map(|(_, s, p)| (s, p)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricsError {
    ZeroBaselineAcceptance,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::ZeroBaselineAcceptance => {
                write!(f, "improvement percentage undefined: baseline acceptance is 0")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

/// Relative acceptance gain of the exit-enabled game over the exit-free
/// baseline, in percent.
pub fn improvement_percentage(opd_accept: f64, pd_accept: f64) -> Result<f64, MetricsError> {
    if pd_accept == 0.0 {
        return Err(MetricsError::ZeroBaselineAcceptance);
    }
    Ok(100.0 * (opd_accept - pd_accept) / pd_accept)
}

/// Everything reported for one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub game: GameParams,
    pub dynamics: DynamicsParams,
    pub stationary: StationaryDistribution,
    pub behaviour: BehaviourFrequencies,
    pub acceptance: f64,
    pub social_welfare: f64,
    pub dominant: Action,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{welfare_matrix, IncentiveScheme};
    use crate::strategy::{parse_strategy, OPD_STRATEGIES};
    use alloc::vec;

    fn point_mass(label: &str) -> StationaryDistribution {
        let i = OPD_STRATEGIES
            .iter()
            .position(|s| s.label() == label)
            .unwrap();
        let mut p = vec![0.0; 18];
        p[i] = 1.0;
        StationaryDistribution::new(OPD_STRATEGIES.to_vec(), p)
    }

    fn masses(pairs: &[(&str, f64)]) -> StationaryDistribution {
        let mut p = vec![0.0; 18];
        for (label, mass) in pairs {
            let i = OPD_STRATEGIES
                .iter()
                .position(|s| s.label() == *label)
                .unwrap();
            p[i] = *mass;
        }
        StationaryDistribution::new(OPD_STRATEGIES.to_vec(), p)
    }

    #[test]
    fn homogeneous_action_picks_the_live_slot() {
        let s = |l: &str| parse_strategy(l).unwrap();
        assert_eq!(homogeneous_action(s("ACD")), Action::Cooperate);
        assert_eq!(homogeneous_action(s("NCD")), Action::Defect);
        assert_eq!(homogeneous_action(s("ALD")), Action::Exit);
    }

    #[test]
    fn behaviour_frequency_examples() {
        let b = behaviour_frequencies(&point_mass("ACC"));
        assert_eq!((b.cooperation, b.defection, b.exit), (1.0, 0.0, 0.0));

        let uniform =
            StationaryDistribution::new(OPD_STRATEGIES.to_vec(), vec![1.0 / 18.0; 18]);
        let b = behaviour_frequencies(&uniform);
        assert!((b.cooperation - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.defection - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.exit - 1.0 / 3.0).abs() < 1e-15);

        let b = behaviour_frequencies(&masses(&[("ACL", 0.6), ("ALL", 0.4)]));
        assert_eq!((b.cooperation, b.defection, b.exit), (0.6, 0.0, 0.4));
    }

    #[test]
    fn acceptance_examples() {
        assert_eq!(commitment_acceptance(&point_mass("NDD")), 0.0);
        assert_eq!(commitment_acceptance(&point_mass("ALL")), 1.0);
        let uniform =
            StationaryDistribution::new(OPD_STRATEGIES.to_vec(), vec![1.0 / 18.0; 18]);
        assert!((commitment_acceptance(&uniform) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn social_welfare_uses_reward_free_diagonal() {
        let mut gp = GameParams { epsilon: 0.2, sigma: 0.4, ..GameParams::default() };
        gp.scheme = IncentiveScheme::StrictCom;
        gp.u = 1.3;
        let w = welfare_matrix(&gp);
        assert!((social_welfare(&point_mass("NLL"), &w) - 0.4).abs() < 1e-15);
        assert!((social_welfare(&point_mass("ACC"), &w) - 0.8).abs() < 1e-15);

        gp.epsilon = 0.1;
        let w = welfare_matrix(&gp);
        let half = masses(&[("ACC", 0.5), ("ADD", 0.5)]);
        assert!((social_welfare(&half, &w) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn dominance_tie_breaks() {
        let b = |c, d, e| BehaviourFrequencies { cooperation: c, defection: d, exit: e };
        assert_eq!(dominant_behaviour(&b(0.8, 0.1, 0.1)), Action::Cooperate);
        assert_eq!(dominant_behaviour(&b(0.4, 0.4, 0.2)), Action::Cooperate);
        assert_eq!(dominant_behaviour(&b(0.1, 0.2, 0.7)), Action::Exit);
        assert_eq!(dominant_behaviour(&b(0.2, 0.4, 0.4)), Action::Defect);
    }

    #[test]
    fn prevalence_threshold_and_ordering() {
        let uniform =
            StationaryDistribution::new(OPD_STRATEGIES.to_vec(), vec![1.0 / 18.0; 18]);
        assert!(prevalent_strategies(&uniform, 0.1).is_empty());

        let solo = prevalent_strategies(&point_mass("ACD"), 0.1);
        assert_eq!(solo.len(), 1);
        assert_eq!(solo[0].0.label(), "ACD");
        assert_eq!(solo[0].1, 1.0);

        // threshold 0 keeps everything; equal masses fall back to list order
        let all = prevalent_strategies(&uniform, 0.0);
        assert_eq!(all.len(), 18);
        for (k, (s, _)) in all.iter().enumerate() {
            assert_eq!(*s, OPD_STRATEGIES[k]);
        }

        let mixed = masses(&[("ADD", 0.3), ("ACC", 0.5), ("NLL", 0.2)]);
        let top = prevalent_strategies(&mixed, 0.1);
        let labels: Vec<_> = top.iter().map(|(s, _)| s.label()).collect();
        assert_eq!(labels, ["ACC", "ADD", "NLL"]);
    }

    #[test]
    fn improvement_percentage_examples() {
        assert!((improvement_percentage(0.6, 0.5).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(improvement_percentage(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(improvement_percentage(0.25, 0.5).unwrap(), -50.0);
        assert!(improvement_percentage(0.4, 0.0).is_err());
    }
}
