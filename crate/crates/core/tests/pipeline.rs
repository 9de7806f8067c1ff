//! End-to-end regression anchors for the analytic pipeline: two fully pinned
//! parameter points plus structural properties of the full 18-strategy game.

use opdc_core::dynamics::DynamicsParams;
use opdc_core::payoff::{GameParams, IncentiveScheme};
use opdc_core::strategy::{Action, GameVariant, OPD_STRATEGIES};
use opdc_core::sweep::run_point;

const POINT_TOL: f64 = 1e-10;

fn strict_game(u: f64) -> GameParams {
    GameParams {
        sigma: 0.1,
        epsilon: 0.1,
        u,
        scheme: IncentiveScheme::StrictCom,
        ..GameParams::default()
    }
}

fn assert_point(
    u: f64,
    expected_p: [f64; 18],
    coop: f64,
    defect: f64,
    exit: f64,
    accept: f64,
    welfare: f64,
    dominant: Action,
) {
    let point = run_point(&strict_game(u), &DynamicsParams::default()).unwrap();
    for (k, (&got, want)) in point.stationary.p().iter().zip(expected_p).enumerate() {
        assert!(
            (got - want).abs() < POINT_TOL,
            "u={u} p[{}]: got {got}, want {want}",
            OPD_STRATEGIES[k]
        );
    }
    assert!((point.behaviour.cooperation - coop).abs() < POINT_TOL);
    assert!((point.behaviour.defection - defect).abs() < POINT_TOL);
    assert!((point.behaviour.exit - exit).abs() < POINT_TOL);
    assert!((point.acceptance - accept).abs() < POINT_TOL);
    assert!((point.social_welfare - welfare).abs() < POINT_TOL);
    assert_eq!(point.dominant, dominant);
    let total: f64 = point.stationary.p().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn pinned_strict_point_at_u_half() {
    assert_point(
        0.5,
        [
            0.026958748211528267,
            0.12317565392284488,
            0.1073567129916694,
            0.017446115814525045,
            0.13638361871923457,
            0.070555063344704991,
            0.0044760253854114712,
            0.03725200704038493,
            0.020587704874957374,
            0.012933091084095308,
            0.098905240960777632,
            0.040097784520040084,
            0.012933091084095308,
            0.098905240960777632,
            0.040097784520040084,
            0.012933091084095308,
            0.098905240960777632,
            0.040097784520040084,
        ],
        0.29629038837832847,
        0.5211005207607975,
        0.18260909086087403,
        0.54419165030526093,
        0.26013213243388978,
        Action::Defect,
    );
}

#[test]
fn pinned_strict_point_at_u_one() {
    assert_point(
        1.0,
        [
            0.073827045925487293,
            0.29523995867839657,
            0.27667400311016098,
            0.0088445697943242637,
            0.060278302293264396,
            0.033693055775972725,
            0.0017704324472857451,
            0.012409003389025131,
            0.0075282678978049481,
            0.0058423890636740949,
            0.052614525758194881,
            0.018121538740890342,
            0.0058423890636740949,
            0.052614525758194881,
            0.018121538740890342,
            0.0058423890636740949,
            0.052614525758194881,
            0.018121538740890342,
        ],
        0.66326817490506712,
        0.26065950513814603,
        0.07607231995678685,
        0.77026463931172205,
        0.5938489429695736,
        Action::Cooperate,
    );
}

// The non-accepting strategies that share a Z slot are payoff-identical in
// every pairing (only Z ever plays for them), so they must carry equal
// stationary mass.
#[test]
fn z_sharing_non_accepters_hold_equal_mass() {
    for (scheme, u) in [
        (IncentiveScheme::None, 0.0),
        (IncentiveScheme::StrictCom, 0.5),
        (IncentiveScheme::FlexibleCom, 0.7),
    ] {
        let game = GameParams { u, scheme, ..GameParams::default() };
        let point = run_point(&game, &DynamicsParams::default()).unwrap();
        for z in ["C", "D", "L"] {
            let triple: Vec<f64> = ["NC", "ND", "NL"]
                .iter()
                .map(|y| point.stationary.mass_of(&format!("{y}{z}")).unwrap())
                .collect();
            for &v in &triple[1..] {
                assert!(
                    (v - triple[0]).abs() < 1e-13,
                    "scheme {scheme:?}, Z={z}: {triple:?}"
                );
            }
        }
    }
}

#[test]
fn exit_free_variant_never_exits() {
    let game = GameParams {
        variant: GameVariant::Pd,
        scheme: IncentiveScheme::StrictCom,
        ..GameParams::default()
    };
    let point = run_point(&game, &DynamicsParams::default()).unwrap();
    assert_eq!(point.stationary.len(), 8);
    assert_eq!(point.behaviour.exit, 0.0);
    let sum = point.behaviour.cooperation + point.behaviour.defection;
    assert!((sum - 1.0).abs() < 1e-9);
    assert!((0.0..=1.0).contains(&point.acceptance));
}

// The exit payoff can only matter through exit actions, so the exit-free
// variant must be flat in sigma.
#[test]
fn exit_free_variant_ignores_sigma() {
    let dynamics = DynamicsParams { population: 40, selection: 0.1 };
    let a = run_point(
        &GameParams { variant: GameVariant::Pd, sigma: 0.0, ..GameParams::default() },
        &dynamics,
    )
    .unwrap();
    let b = run_point(
        &GameParams { variant: GameVariant::Pd, sigma: 0.9, ..GameParams::default() },
        &dynamics,
    )
    .unwrap();
    assert_eq!(a.stationary.p(), b.stationary.p());
    assert_eq!(a.acceptance, b.acceptance);
    assert_eq!(a.social_welfare, b.social_welfare);
}
