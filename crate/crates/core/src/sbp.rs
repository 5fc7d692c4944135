//! The repeated Sleeping Beauty experiment as a three-state chain.
//!
//! Each week a fair coin is tossed. Heads gives one awakening (Monday),
//! Tails gives two (Monday, then Tuesday). Recording the successive
//! awakenings as `MH` (Monday after Heads), `MT` (Monday after Tails) and
//! `TU` (Tuesday) yields a Markov chain on `(MH, MT, TU)`, always in that
//! order. Recording only the day (`M` / `TU`) loses nothing for complete
//! records: a Monday is a Heads Monday exactly when the next awakening is
//! another Monday.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::markov::{Chain, ChainError, DistributionVector, StateSpace};
use crate::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("input sequence is empty")]
    EmptyInput,
    #[error("token {position} `{token}` is not one of {expected}")]
    UnknownToken {
        position: usize,
        token: String,
        expected: &'static str,
    },
    #[error("symbol {position} is undetermined")]
    UndeterminedSymbol { position: usize },
    #[error("malformed observation at {position}: {reason}")]
    MalformedObservation { position: usize, reason: &'static str },
    #[error("malformed labeled sequence at {position}: {reason}")]
    MalformedLabels { position: usize, reason: &'static str },
}

/// One state of the awakening chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Awakening {
    #[serde(rename = "MH")]
    MondayHeads,
    #[serde(rename = "MT")]
    MondayTails,
    #[serde(rename = "TU")]
    Tuesday,
}

impl Awakening {
    pub const ALL: [Awakening; 3] = [Awakening::MondayHeads, Awakening::MondayTails, Awakening::Tuesday];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Awakening::MondayHeads => "MH",
            Awakening::MondayTails => "MT",
            Awakening::Tuesday => "TU",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coin {
    Heads,
    Tails,
}

impl Coin {
    /// Awakenings produced by one experiment with this toss.
    pub fn awakenings(self) -> &'static [Awakening] {
        match self {
            Coin::Heads => &[Awakening::MondayHeads],
            Coin::Tails => &[Awakening::MondayTails, Awakening::Tuesday],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabeledAwakening {
    MondayHeads,
    MondayTails,
    Tuesday,
    /// Trailing Monday of an incomplete record: Heads, or Tails with Tuesday still to come.
    Undetermined,
}

impl LabeledAwakening {
    pub fn state(self) -> Option<Awakening> {
        match self {
            LabeledAwakening::MondayHeads => Some(Awakening::MondayHeads),
            LabeledAwakening::MondayTails => Some(Awakening::MondayTails),
            LabeledAwakening::Tuesday => Some(Awakening::Tuesday),
            LabeledAwakening::Undetermined => None,
        }
    }
}

impl From<Awakening> for LabeledAwakening {
    fn from(a: Awakening) -> Self {
        match a {
            Awakening::MondayHeads => LabeledAwakening::MondayHeads,
            Awakening::MondayTails => LabeledAwakening::MondayTails,
            Awakening::Tuesday => LabeledAwakening::Tuesday,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservedAwakening {
    Monday,
    Tuesday,
}

fn tokenize<T>(
    text: &str,
    expected: &'static str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>, SequenceError> {
    text.split_whitespace()
        .enumerate()
        .map(|(position, token)| {
            parse(&token.to_ascii_uppercase()).ok_or_else(|| SequenceError::UnknownToken {
                position,
                token: token.to_string(),
                expected,
            })
        })
        .collect()
}

fn write_tokens<T>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    token: impl Fn(&T) -> &'static str,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(token(item))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoinSequence(Vec<Coin>);

impl CoinSequence {
    pub fn new(tosses: Vec<Coin>) -> Self {
        CoinSequence(tosses)
    }

    pub fn tosses(&self) -> &[Coin] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for CoinSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coins = tokenize(s, "H, T", |t| match t {
            "H" => Some(Coin::Heads),
            "T" => Some(Coin::Tails),
            _ => None,
        })?;
        Ok(CoinSequence(coins))
    }
}

impl fmt::Display for CoinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.0, |c| match c {
            Coin::Heads => "H",
            Coin::Tails => "T",
        })
    }
}

/// Awakenings with their coin labels.
///
/// Invariants: starts with `MH` or `MT`; every `MT` is immediately followed
/// by `TU` and every `TU` immediately preceded by `MT`; `Undetermined` may
/// only be the last symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LabeledSequence(Vec<LabeledAwakening>);

impl LabeledSequence {
    pub fn new(symbols: Vec<LabeledAwakening>) -> Result<Self, SequenceError> {
        use LabeledAwakening::*;
        let last = symbols.len().saturating_sub(1);
        for (i, s) in symbols.iter().enumerate() {
            let prev = i.checked_sub(1).map(|p| symbols[p]);
            let next = symbols.get(i + 1).copied();
            match s {
                Tuesday if prev != Some(MondayTails) => {
                    return Err(SequenceError::MalformedLabels {
                        position: i,
                        reason: "TU not preceded by MT",
                    })
                }
                MondayTails if next != Some(Tuesday) => {
                    return Err(SequenceError::MalformedLabels {
                        position: i,
                        reason: "MT not followed by TU",
                    })
                }
                Undetermined if i != last => {
                    return Err(SequenceError::MalformedLabels {
                        position: i,
                        reason: "undetermined symbol before the end",
                    })
                }
                _ => {}
            }
        }
        Ok(LabeledSequence(symbols))
    }

    pub fn symbols(&self) -> &[LabeledAwakening] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, state: Awakening) -> usize {
        self.0.iter().filter(|s| s.state() == Some(state)).count()
    }
}

impl FromStr for LabeledSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols = tokenize(s, "MH, MT, TU", |t| match t {
            "MH" => Some(LabeledAwakening::MondayHeads),
            "MT" => Some(LabeledAwakening::MondayTails),
            "TU" => Some(LabeledAwakening::Tuesday),
            _ => None,
        })?;
        LabeledSequence::new(symbols)
    }
}

impl fmt::Display for LabeledSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.0, |s| match s {
            LabeledAwakening::MondayHeads => "MH",
            LabeledAwakening::MondayTails => "MT",
            LabeledAwakening::Tuesday => "TU",
            LabeledAwakening::Undetermined => "?",
        })
    }
}

/// Recorded days only. Never starts with `TU`, never has two `TU` in a row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ObservedSequence(Vec<ObservedAwakening>);

impl ObservedSequence {
    pub fn new(days: Vec<ObservedAwakening>) -> Result<Self, SequenceError> {
        if days.first() == Some(&ObservedAwakening::Tuesday) {
            return Err(SequenceError::MalformedObservation {
                position: 0,
                reason: "sequence starts with TU",
            });
        }
        if let Some(i) = days
            .windows(2)
            .position(|w| w == [ObservedAwakening::Tuesday, ObservedAwakening::Tuesday])
        {
            return Err(SequenceError::MalformedObservation {
                position: i + 1,
                reason: "two consecutive TU",
            });
        }
        Ok(ObservedSequence(days))
    }

    pub fn days(&self) -> &[ObservedAwakening] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for ObservedSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let days = tokenize(s, "M, TU", |t| match t {
            "M" => Some(ObservedAwakening::Monday),
            "TU" => Some(ObservedAwakening::Tuesday),
            _ => None,
        })?;
        ObservedSequence::new(days)
    }
}

impl fmt::Display for ObservedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.0, |d| match d {
            ObservedAwakening::Monday => "M",
            ObservedAwakening::Tuesday => "TU",
        })
    }
}

/// The awakening chain: states `(MH, MT, TU)`, `P_{X_1} = [1/2, 1/2, 0]`.
pub fn sbp_chain() -> Chain {
    let states = StateSpace::new(Awakening::ALL.map(Awakening::label)).expect("distinct labels");
    let matrix = vec![
        vec![q!(1, 2), q!(1, 2), q!(0)],
        vec![q!(0), q!(0), q!(1)],
        vec![q!(1, 2), q!(1, 2), q!(0)],
    ];
    Chain::new(states, matrix, Some(vec![q!(1, 2), q!(1, 2), q!(0)])).expect("valid chain")
}

/// Closed form of `P_{X_n}`:
/// `[1/3 + s/(3·2^n), 1/3 + s/(3·2^n), 1/3 − s/(3·2^(n−1))]`, `s = (−1)^(n+1)`.
pub fn exact_distribution(n: u32) -> Result<DistributionVector, ChainError> {
    if n == 0 {
        return Err(ChainError::ZeroStep);
    }
    let third = q!(1, 3);
    let sign = if n % 2 == 1 { q!(1) } else { q!(-1) };
    let n = i32::try_from(n).expect("step count fits in i32");
    let monday = &third + &(&sign * &third * Rational::pow2(-n));
    let tuesday = &third - &(&sign * &third * Rational::pow2(1 - n));
    DistributionVector::new(vec![monday.clone(), monday, tuesday])
}

/// `tv(P_{X_n}, π) = 1/(3·2^(n−1))` for `n ≥ 1`.
pub fn stationary_gap(n: u32) -> Result<Rational, ChainError> {
    if n == 0 {
        return Err(ChainError::ZeroStep);
    }
    let n = i32::try_from(n).expect("step count fits in i32");
    Ok(q!(1, 3) * Rational::pow2(1 - n))
}

/// Heads ↦ `MH`; Tails ↦ `MT TU`.
pub fn encode_coins(coins: &CoinSequence) -> Result<LabeledSequence, SequenceError> {
    if coins.is_empty() {
        return Err(SequenceError::EmptyInput);
    }
    let symbols = coins
        .tosses()
        .iter()
        .flat_map(|c| c.awakenings().iter().copied().map(LabeledAwakening::from))
        .collect();
    Ok(LabeledSequence(symbols))
}

/// Forgets the coin labels.
pub fn project_labels(seq: &LabeledSequence) -> Result<ObservedSequence, SequenceError> {
    let days = seq
        .symbols()
        .iter()
        .enumerate()
        .map(|(position, s)| match s {
            LabeledAwakening::MondayHeads | LabeledAwakening::MondayTails => Ok(ObservedAwakening::Monday),
            LabeledAwakening::Tuesday => Ok(ObservedAwakening::Tuesday),
            LabeledAwakening::Undetermined => Err(SequenceError::UndeterminedSymbol { position }),
        })
        .collect::<Result<_, _>>()?;
    Ok(ObservedSequence(days))
}

/// Restores the coin labels from the right-neighbour rule.
///
/// A final `M` has no right neighbour: with `complete` it is a Heads Monday
/// (a Tails week cannot end on Monday), otherwise it is `Undetermined`.
pub fn decode_observations(obs: &ObservedSequence, complete: bool) -> LabeledSequence {
    let days = obs.days();
    let symbols = days
        .iter()
        .enumerate()
        .map(|(i, day)| match (day, days.get(i + 1)) {
            (ObservedAwakening::Tuesday, _) => LabeledAwakening::Tuesday,
            (ObservedAwakening::Monday, Some(ObservedAwakening::Monday)) => LabeledAwakening::MondayHeads,
            (ObservedAwakening::Monday, Some(ObservedAwakening::Tuesday)) => LabeledAwakening::MondayTails,
            (ObservedAwakening::Monday, None) if complete => LabeledAwakening::MondayHeads,
            (ObservedAwakening::Monday, None) => LabeledAwakening::Undetermined,
        })
        .collect();
    LabeledSequence(symbols)
}
