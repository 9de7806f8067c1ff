//! Parameter grids, figure presets, and the per-point analytic pipeline.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{fixation_matrix, DynamicsError, DynamicsParams};
use crate::metrics::{
    behaviour_frequencies, commitment_acceptance, dominant_behaviour, improvement_percentage,
    social_welfare, MetricsError, PointResult,
};
use crate::payoff::{build_matrix, welfare_matrix, GameParams, IncentiveScheme, ParamError};
use crate::stationary::{
    stationary_distribution, transition_matrix, SolveError, StationaryDistribution,
};
use crate::strategy::GameVariant;

/// Default grid density per axis: 0.02 spacing on a unit range, fine enough
/// that phase boundaries come out smooth while a full 2-D grid stays cheap.
pub const DEFAULT_GRID_STEPS: usize = 51;

/// Parameters that can serve as a sweep axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Sigma,
    Epsilon,
    U,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Sigma => "sigma",
            SweepParam::Epsilon => "epsilon",
            SweepParam::U => "u",
        }
    }

    pub fn parse(name: &str) -> Option<SweepParam> {
        match name {
            "sigma" => Some(SweepParam::Sigma),
            "epsilon" => Some(SweepParam::Epsilon),
            "u" => Some(SweepParam::U),
            _ => None,
        }
    }

    fn apply(self, game: &mut GameParams, value: f64) {
        match self {
            SweepParam::Sigma => game.sigma = value,
            SweepParam::Epsilon => game.epsilon = value,
            SweepParam::U => game.u = value,
        }
    }

    /// Whether a value lies in this parameter's hard domain.
    pub fn in_domain(self, value: f64) -> bool {
        match self {
            SweepParam::Sigma => (0.0..=1.0).contains(&value),
            SweepParam::Epsilon | SweepParam::U => value >= 0.0,
        }
    }
}

/// One linearly spaced sweep axis, inclusive of both endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, steps: usize) -> Axis {
        Axis { param, min, max, steps }
    }

    /// The i-th grid value. The convex form lands exactly on `min` at i = 0
    /// and exactly on `max` at the last step, so caption endpoints appear
    /// verbatim in the output.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert!(i < self.steps);
        let t = i as f64 / (self.steps - 1) as f64;
        self.min * (1.0 - t) + self.max * t
    }
}

/// Extra per-point computations beyond the single analytic run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Extras {
    #[default]
    None,
    /// Also run the exit-free baseline and report the acceptance gap;
    /// optionally as a percentage of the baseline.
    PdComparison { improvement: bool },
    /// Run both reward rules and report strict-minus-flexible differences.
    SchemeComparison,
}

/// A declarative grid: base parameters plus up to two axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub game: GameParams,
    pub dynamics: DynamicsParams,
    pub axes: Vec<Axis>,
    pub extras: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepError {
    Param(ParamError),
    Dynamics(DynamicsError),
    Solve(SolveError),
    Metrics(MetricsError),
    InvalidAxes(&'static str),
    UnknownPreset { name: String },
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::Param(e) => write!(f, "{e}"),
            SweepError::Dynamics(e) => write!(f, "{e}"),
            SweepError::Solve(e) => write!(f, "{e}"),
            SweepError::Metrics(e) => write!(f, "{e}"),
            SweepError::InvalidAxes(msg) => write!(f, "invalid axes: {msg}"),
            SweepError::UnknownPreset { name } => {
                write!(f, "unknown preset \"{name}\"; valid names:")?;
                for p in presets() {
                    write!(f, " {}", p.name)?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for SweepError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SweepError::Param(e) => Some(e),
            SweepError::Dynamics(e) => Some(e),
            SweepError::Solve(e) => Some(e),
            SweepError::Metrics(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ParamError> for SweepError {
    fn from(e: ParamError) -> Self {
        SweepError::Param(e)
    }
}
impl From<DynamicsError> for SweepError {
    fn from(e: DynamicsError) -> Self {
        SweepError::Dynamics(e)
    }
}
impl From<SolveError> for SweepError {
    fn from(e: SolveError) -> Self {
        SweepError::Solve(e)
    }
}
impl From<MetricsError> for SweepError {
    fn from(e: MetricsError) -> Self {
        SweepError::Metrics(e)
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        self.game.validate()?;
        self.dynamics.check()?;
        if self.axes.len() > 2 {
            return Err(SweepError::InvalidAxes("at most two axes"));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(SweepError::InvalidAxes("axis parameters must be distinct"));
        }
        for axis in &self.axes {
            if axis.steps < 2 {
                return Err(SweepError::InvalidAxes("axis needs at least 2 steps"));
            }
            if !(axis.min.is_finite() && axis.max.is_finite()) || axis.min > axis.max {
                return Err(SweepError::InvalidAxes("axis range must be finite with min <= max"));
            }
            if !(axis.param.in_domain(axis.min) && axis.param.in_domain(axis.max)) {
                return Err(SweepError::InvalidAxes("axis range leaves the parameter domain"));
            }
        }
        Ok(())
    }

    /// Number of grid points (1 when there are no axes).
    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// Rows emitted per grid point: comparisons add the companion run.
    pub fn rows_per_point(&self) -> usize {
        match self.extras {
            Extras::None => 1,
            Extras::PdComparison { .. } | Extras::SchemeComparison => 2,
        }
    }

    /// The game parameters at one flat grid index, row-major with the first
    /// axis outermost.
    pub fn game_at(&self, flat: usize) -> GameParams {
        debug_assert!(flat < self.point_count());
        let mut game = self.game;
        let mut rem = flat;
        let mut indices = [0usize; 2];
        for k in (0..self.axes.len()).rev() {
            indices[k] = rem % self.axes[k].steps;
            rem /= self.axes[k].steps;
        }
        for (k, axis) in self.axes.iter().enumerate() {
            axis.param.apply(&mut game, axis.value(indices[k]));
        }
        game
    }
}

/// Difference columns attached to the primary row of a comparison point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RowExtras {
    pub accept_opd_minus_pd: Option<f64>,
    pub improvement_pct: Option<f64>,
    pub coop_strict_minus_flexible: Option<f64>,
    pub exit_strict_minus_flexible: Option<f64>,
    pub welfare_strict_minus_flexible: Option<f64>,
}

/// One output row: a full per-point result plus any difference columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub result: PointResult,
    pub extras: RowExtras,
}

/// The full analytic pipeline at one parameter point: payoff matrix, pairwise
/// fixation probabilities, embedded-chain stationary distribution, metrics.
/// Pure and deterministic.
pub fn run_point(
    game: &GameParams,
    dynamics: &DynamicsParams,
) -> Result<PointResult, SweepError> {
    game.validate()?;
    let matrix = build_matrix(game);
    let q = matrix.q();
    let rho = fixation_matrix(&matrix, dynamics)?;
    let t = transition_matrix(&rho, q);
    let p = stationary_distribution(&t, q)?;
    let stationary = StationaryDistribution::new(matrix.strategies().to_vec(), p);
    let behaviour = behaviour_frequencies(&stationary);
    let acceptance = commitment_acceptance(&stationary);
    let welfare = social_welfare(&stationary, &welfare_matrix(game));
    let dominant = dominant_behaviour(&behaviour);
    Ok(PointResult {
        game: *game,
        dynamics: *dynamics,
        stationary,
        behaviour,
        acceptance,
        social_welfare: welfare,
        dominant,
    })
}

/// Evaluates one grid point, including its comparison companion when the
/// spec asks for one. Returns the row(s) in emission order; difference
/// columns sit on the primary row. Grid points are independent, so callers
/// may evaluate them concurrently and concatenate by flat index.
pub fn run_row(spec: &SweepSpec, flat: usize) -> Result<Vec<PointRecord>, SweepError> {
    let game = spec.game_at(flat);
    let mut rows = Vec::with_capacity(spec.rows_per_point());
    match spec.extras {
        Extras::None => {
            rows.push(PointRecord {
                result: run_point(&game, &spec.dynamics)?,
                extras: RowExtras::default(),
            });
        }
        Extras::PdComparison { improvement } => {
            let mut opd_game = game;
            opd_game.variant = GameVariant::Opd;
            let mut pd_game = game;
            pd_game.variant = GameVariant::Pd;
            let opd = run_point(&opd_game, &spec.dynamics)?;
            let pd = run_point(&pd_game, &spec.dynamics)?;
            let extras = RowExtras {
                accept_opd_minus_pd: Some(opd.acceptance - pd.acceptance),
                improvement_pct: if improvement {
                    Some(improvement_percentage(opd.acceptance, pd.acceptance)?)
                } else {
                    None
                },
                ..RowExtras::default()
            };
            rows.push(PointRecord { result: opd, extras });
            rows.push(PointRecord { result: pd, extras: RowExtras::default() });
        }
        Extras::SchemeComparison => {
            let mut strict_game = game;
            strict_game.scheme = IncentiveScheme::StrictCom;
            let mut flexible_game = game;
            flexible_game.scheme = IncentiveScheme::FlexibleCom;
            let strict = run_point(&strict_game, &spec.dynamics)?;
            let flexible = run_point(&flexible_game, &spec.dynamics)?;
            let extras = RowExtras {
                coop_strict_minus_flexible: Some(
                    strict.behaviour.cooperation - flexible.behaviour.cooperation,
                ),
                exit_strict_minus_flexible: Some(
                    strict.behaviour.exit - flexible.behaviour.exit,
                ),
                welfare_strict_minus_flexible: Some(
                    strict.social_welfare - flexible.social_welfare,
                ),
                ..RowExtras::default()
            };
            rows.push(PointRecord { result: strict, extras });
            rows.push(PointRecord { result: flexible, extras: RowExtras::default() });
        }
    }
    Ok(rows)
}

/// Evaluates the whole grid sequentially in row-major order, failing fast on
/// the first bad point. The output is identical to any concurrent evaluation
/// that concatenates `run_row` results by flat index.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<PointRecord>, SweepError> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.point_count() * spec.rows_per_point());
    for flat in 0..spec.point_count() {
        out.extend(run_row(spec, flat)?);
    }
    Ok(out)
}

/// A named, ready-made sweep with its assumed ranges spelled out, since the
/// headline plots fix only a few parameter values and leave grid bounds and
/// density to the harness.
#[derive(Clone, Copy, Debug)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "fig1a",
        description: "acceptance gap vs the exit-free baseline over epsilon x sigma in [0,1]^2 at u = 0, no reward scheme",
    },
    PresetInfo {
        name: "fig1b",
        description: "cooperation frequency over epsilon x sigma in [0,1]^2 at u = 0, no reward scheme",
    },
    PresetInfo {
        name: "fig1c",
        description: "exit frequency over epsilon x sigma in [0,1]^2 at u = 0, no reward scheme",
    },
    PresetInfo {
        name: "fig2a",
        description: "dominant behaviour under the strict rule over epsilon in [0,1] x u in [0,1.5] at sigma = 0.1",
    },
    PresetInfo {
        name: "fig2b",
        description: "strategy frequencies under the strict rule over epsilon in [0,1] x u in [0,1.5] at sigma = 0.1",
    },
    PresetInfo {
        name: "fig2c",
        description: "behaviour frequencies under the strict rule along u in [0,1.5] at epsilon = 0.1, sigma = 0.1",
    },
    PresetInfo {
        name: "fig2d",
        description: "behaviour frequencies under the strict rule along sigma in [0,1] at u = 0.5, epsilon = 0.1",
    },
    PresetInfo {
        name: "fig3a",
        description: "dominant behaviour under the flexible rule over epsilon in [0,1] x u in [0,1.5] at sigma = 0.1",
    },
    PresetInfo {
        name: "fig3b",
        description: "strategy frequencies under the flexible rule over epsilon in [0,1] x u in [0,1.5] at sigma = 0.1",
    },
    PresetInfo {
        name: "fig3c",
        description: "behaviour frequencies under the flexible rule along u in [0,1.5] at epsilon = 0.1, sigma = 0.1",
    },
    PresetInfo {
        name: "fig3d",
        description: "behaviour frequencies under the flexible rule along sigma in [0,1] at u = 0.5, epsilon = 0.1",
    },
    PresetInfo {
        name: "fig4a",
        description: "social welfare difference, strict minus flexible, over sigma in [0,1] x u in [0,1.5] at epsilon = 0.1",
    },
    PresetInfo {
        name: "fig4b",
        description: "cooperation difference, strict minus flexible, over sigma in [0,1] x u in [0,1.5] at epsilon = 0.1",
    },
    PresetInfo {
        name: "fig4c",
        description: "exit difference, strict minus flexible, over sigma in [0,1] x u in [0,1.5] at epsilon = 0.1",
    },
    PresetInfo {
        name: "fig4-3",
        description: "strict-minus-flexible differences over sigma in [0,1] x u in [0,1.5] at epsilon = 0.2",
    },
    PresetInfo {
        name: "figA1",
        description: "acceptance improvement percentage vs the exit-free baseline over epsilon x sigma in [0,1]^2 at u = 0",
    },
    PresetInfo {
        name: "figA2",
        description: "strict-rule grid over epsilon in [0,1] x u in [0,1.5] at sigma = 0.5",
    },
    PresetInfo {
        name: "figA3",
        description: "flexible-rule grid over epsilon in [0,1] x u in [0,1.5] at sigma = 0.5",
    },
    PresetInfo {
        name: "figA4",
        description: "strict-rule grid over epsilon in [0,1] x u in [0,1.5] at sigma = 0.9",
    },
    PresetInfo {
        name: "figA5",
        description: "flexible-rule grid over epsilon in [0,1] x u in [0,1.5] at sigma = 0.9",
    },
];

pub fn presets() -> &'static [PresetInfo] {
    PRESETS
}

fn eps_sigma_axes() -> Vec<Axis> {
    alloc::vec![
        Axis::new(SweepParam::Epsilon, 0.0, 1.0, DEFAULT_GRID_STEPS),
        Axis::new(SweepParam::Sigma, 0.0, 1.0, DEFAULT_GRID_STEPS),
    ]
}

fn eps_u_axes() -> Vec<Axis> {
    alloc::vec![
        Axis::new(SweepParam::Epsilon, 0.0, 1.0, DEFAULT_GRID_STEPS),
        Axis::new(SweepParam::U, 0.0, 1.5, DEFAULT_GRID_STEPS),
    ]
}

fn sigma_u_axes() -> Vec<Axis> {
    alloc::vec![
        Axis::new(SweepParam::Sigma, 0.0, 1.0, DEFAULT_GRID_STEPS),
        Axis::new(SweepParam::U, 0.0, 1.5, DEFAULT_GRID_STEPS),
    ]
}

/// The named sweep behind each headline plot. All presets share M = 100 and
/// s = 0.1; axis bounds and the 51-step density are harness defaults (see
/// each preset's description).
pub fn preset_figure(name: &str) -> Result<SweepSpec, SweepError> {
    let dynamics = DynamicsParams::default();
    let base = GameParams::default();

    let no_reward = GameParams {
        sigma: 0.0,
        epsilon: 0.0,
        u: 0.0,
        scheme: IncentiveScheme::None,
        ..base
    };
    let spec = match name {
        "fig1a" => SweepSpec {
            game: no_reward,
            dynamics,
            axes: eps_sigma_axes(),
            extras: Extras::PdComparison { improvement: false },
        },
        "fig1b" | "fig1c" => SweepSpec {
            game: no_reward,
            dynamics,
            axes: eps_sigma_axes(),
            extras: Extras::None,
        },
        "figA1" => SweepSpec {
            game: no_reward,
            dynamics,
            axes: eps_sigma_axes(),
            extras: Extras::PdComparison { improvement: true },
        },
        "fig2a" | "fig2b" | "fig3a" | "fig3b" | "figA2" | "figA3" | "figA4" | "figA5" => {
            let scheme = match name {
                "fig2a" | "fig2b" | "figA2" | "figA4" => IncentiveScheme::StrictCom,
                _ => IncentiveScheme::FlexibleCom,
            };
            let sigma = match name {
                "figA2" | "figA3" => 0.5,
                "figA4" | "figA5" => 0.9,
                _ => 0.1,
            };
            SweepSpec {
                game: GameParams { sigma, epsilon: 0.0, u: 0.0, scheme, ..base },
                dynamics,
                axes: eps_u_axes(),
                extras: Extras::None,
            }
        }
        "fig2c" | "fig3c" => SweepSpec {
            game: GameParams {
                sigma: 0.1,
                epsilon: 0.1,
                u: 0.0,
                scheme: if name == "fig2c" {
                    IncentiveScheme::StrictCom
                } else {
                    IncentiveScheme::FlexibleCom
                },
                ..base
            },
            dynamics,
            axes: alloc::vec![Axis::new(SweepParam::U, 0.0, 1.5, DEFAULT_GRID_STEPS)],
            extras: Extras::None,
        },
        "fig2d" | "fig3d" => SweepSpec {
            game: GameParams {
                sigma: 0.0,
                epsilon: 0.1,
                u: 0.5,
                scheme: if name == "fig2d" {
                    IncentiveScheme::StrictCom
                } else {
                    IncentiveScheme::FlexibleCom
                },
                ..base
            },
            dynamics,
            axes: alloc::vec![Axis::new(SweepParam::Sigma, 0.0, 1.0, DEFAULT_GRID_STEPS)],
            extras: Extras::None,
        },
        "fig4a" | "fig4b" | "fig4c" | "fig4-3" => SweepSpec {
            game: GameParams {
                sigma: 0.0,
                epsilon: if name == "fig4-3" { 0.2 } else { 0.1 },
                u: 0.0,
                scheme: IncentiveScheme::StrictCom,
                ..base
            },
            dynamics,
            axes: sigma_u_axes(),
            extras: Extras::SchemeComparison,
        },
        _ => {
            return Err(SweepError::UnknownPreset { name: String::from(name) });
        }
    };
    Ok(spec)
}
