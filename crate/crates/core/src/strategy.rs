//! Strategy alphabet, commitment formation, and conditional action resolution.
//!
//! A strategy is a three-letter word `XYZ`: `X` is the pre-game commitment
//! disposition (`A`ccept / `N`ot accept), `Y` the in-game action used when a
//! mutual commitment formed, `Z` the action used when it did not.

use alloc::string::String;
use core::fmt;

/// In-game action. The ordering `Cooperate < Defect < Exit` is load-bearing:
/// tie-breaking and serialization depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Cooperate,
    Defect,
    Exit,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Cooperate, Action::Defect, Action::Exit];

    pub fn letter(self) -> char {
        match self {
            Action::Cooperate => 'C',
            Action::Defect => 'D',
            Action::Exit => 'L',
        }
    }

    fn from_letter(c: char) -> Option<Action> {
        match c {
            'C' => Some(Action::Cooperate),
            'D' => Some(Action::Defect),
            'L' => Some(Action::Exit),
            _ => None,
        }
    }
}

/// Pre-game stance on joining a commitment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommitDisposition {
    Accept,
    NotAccept,
}

impl CommitDisposition {
    fn letter(self) -> char {
        match self {
            CommitDisposition::Accept => 'A',
            CommitDisposition::NotAccept => 'N',
        }
    }
}

/// One conditional strategy: disposition plus the committed/uncommitted actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub disposition: CommitDisposition,
    /// The `Y` slot: action taken when a commitment formed.
    pub when_committed: Action,
    /// The `Z` slot: action taken when no commitment formed.
    pub when_uncommitted: Action,
}

/// Which game is being played: the full optional game (18 strategies) or the
/// exit-free restriction (8 strategies, both action slots limited to C/D).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameVariant {
    Opd,
    Pd,
}

const fn st(disposition: CommitDisposition, y: Action, z: Action) -> Strategy {
    Strategy { disposition, when_committed: y, when_uncommitted: z }
}

use Action::{Cooperate as C, Defect as D, Exit as L};
use CommitDisposition::{Accept as A, NotAccept as N};

/// The 18 strategies in canonical order. Matrix rows/columns, CSV columns, and
/// every fixture in the test suite index into this exact order.
pub const OPD_STRATEGIES: [Strategy; 18] = [
    st(A, C, C), st(A, C, D), st(A, C, L),
    st(A, D, C), st(A, D, D), st(A, D, L),
    st(A, L, C), st(A, L, D), st(A, L, L),
    st(N, C, C), st(N, C, D), st(N, C, L),
    st(N, D, C), st(N, D, D), st(N, D, L),
    st(N, L, C), st(N, L, D), st(N, L, L),
];

/// The 8 exit-free strategies in canonical order.
pub const PD_STRATEGIES: [Strategy; 8] = [
    st(A, C, C), st(A, C, D),
    st(A, D, C), st(A, D, D),
    st(N, C, C), st(N, C, D),
    st(N, D, C), st(N, D, D),
];

/// The strategy set of a variant, in canonical order.
pub fn enumerate_strategies(variant: GameVariant) -> &'static [Strategy] {
    match variant {
        GameVariant::Opd => &OPD_STRATEGIES,
        GameVariant::Pd => &PD_STRATEGIES,
    }
}

/// A commitment forms exactly when both players accept.
pub fn commitment_formed(a: Strategy, b: Strategy) -> bool {
    a.disposition == CommitDisposition::Accept && b.disposition == CommitDisposition::Accept
}

/// The action `focal` actually plays against `opponent`: the Y slot under a
/// formed commitment, the Z slot otherwise.
pub fn realized_action(focal: Strategy, opponent: Strategy) -> Action {
    if commitment_formed(focal, opponent) {
        focal.when_committed
    } else {
        focal.when_uncommitted
    }
}

/// Attempt to parse text that is not a canonical strategy label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseStrategyError {
    pub label: String,
}

impl fmt::Display for ParseStrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid strategy label {:?}: expected three uppercase letters X in {{A,N}}, Y/Z in {{C,D,L}}",
            self.label
        )
    }
}

impl core::error::Error for ParseStrategyError {}

/// Parses a canonical uppercase three-letter label. Inverse of [`Strategy::label`].
pub fn parse_strategy(label: &str) -> Result<Strategy, ParseStrategyError> {
    let err = || ParseStrategyError { label: String::from(label) };
    let mut chars = label.chars();
    let (x, y, z) = match (chars.next(), chars.next(), chars.next(), chars.next()) {
        (Some(x), Some(y), Some(z), None) => (x, y, z),
        _ => return Err(err()),
    };
    let disposition = match x {
        'A' => CommitDisposition::Accept,
        'N' => CommitDisposition::NotAccept,
        _ => return Err(err()),
    };
    let when_committed = Action::from_letter(y).ok_or_else(err)?;
    let when_uncommitted = Action::from_letter(z).ok_or_else(err)?;
    Ok(Strategy { disposition, when_committed, when_uncommitted })
}

impl Strategy {
    /// The canonical three-letter label, e.g. `ACD`.
    pub fn label(self) -> String {
        let mut s = String::with_capacity(3);
        s.push(self.disposition.letter());
        s.push(self.when_committed.letter());
        s.push(self.when_uncommitted.letter());
        s
    }

    /// True when neither action slot uses Exit (the strategy is playable in
    /// the exit-free variant).
    pub fn is_exit_free(self) -> bool {
        self.when_committed != Action::Exit && self.when_uncommitted != Action::Exit
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
