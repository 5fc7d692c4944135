//! Exact and Monte Carlo analysis of finite Markov chains, with the repeated
//! Sleeping Beauty experiment as the worked model.
//!
//! - [`markov`]: validation, powers, n-step laws, irreducibility, period,
//!   stationary distributions and convergence, all over [`Rational`].
//! - [`sbp`]: the three-state awakening chain, its closed-form n-step law and
//!   the coin / labeled / observed sequence correspondences.
//! - [`simulation`]: seeded, block-parallel simulation of many experiments
//!   with per-experiment and per-awakening Heads frequencies.

pub mod markov;
pub mod rational;
pub mod sbp;
pub mod simulation;

pub use markov::{
    analyze, convergence_report, expectation, is_aperiodic, is_ergodic, is_irreducible, matrix_power,
    n_step_distribution, period, stationary_distribution, total_variation_distance, Chain, ChainError,
    ConvergenceRow, DistributionVector, ErgodicityReport, StateSpace, TransitionMatrix,
};
pub use rational::{ParseRationalError, Rational};
pub use sbp::{
    decode_observations, encode_coins, exact_distribution, project_labels, sbp_chain, Awakening, Coin,
    CoinSequence, LabeledAwakening, LabeledSequence, ObservedAwakening, ObservedSequence, SequenceError,
};
pub use simulation::{
    forced_run, halfer_statistic, lln_trace, run_simulation, state_frequencies, thirder_statistic, LlnTrace,
    SimulationConfig, SimulationError, SimulationRecord,
};
