//! Seeded Monte Carlo for the repeated experiment.
//!
//! # Toss stream
//!
//! Experiments are grouped into blocks of [`BLOCK_EXPERIMENTS`]. Block `b`
//! of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)` with its
//! stream id set to `b` (rand_chacha 0.3). Each `next_u64` word supplies 64
//! tosses, least significant bit first, bit 1 = Heads; a block starts on a
//! fresh word. The stream depends only on the seed, never on thread count,
//! so blocks may be counted concurrently and merged in order.

use std::io::{self, Write};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::sbp::{Awakening, Coin, CoinSequence};
use crate::Rational;

/// Experiments per RNG block.
pub const BLOCK_EXPERIMENTS: u64 = 1 << 16;

/// Generator name embedded in every seeded record.
pub const GENERATOR: &str = "chacha8-block-stream-v1";

/// Generator name of records built from supplied tosses.
pub const FORCED_GENERATOR: &str = "forced";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("n_experiments must be at least 1")]
    NoExperiments,
    #[error("checkpoint_stride must be at least 1")]
    ZeroStride,
    #[error("coin sequence is empty")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct SimulationConfig {
    seed: u64,
    n_experiments: u64,
    checkpoint_stride: u64,
}

#[derive(Deserialize)]
struct RawConfig {
    seed: u64,
    n_experiments: u64,
    checkpoint_stride: u64,
}

impl TryFrom<RawConfig> for SimulationConfig {
    type Error = SimulationError;
    fn try_from(raw: RawConfig) -> Result<Self, Self::Error> {
        SimulationConfig::new(raw.seed, raw.n_experiments, raw.checkpoint_stride)
    }
}

impl SimulationConfig {
    pub fn new(seed: u64, n_experiments: u64, checkpoint_stride: u64) -> Result<Self, SimulationError> {
        if n_experiments == 0 {
            return Err(SimulationError::NoExperiments);
        }
        if checkpoint_stride == 0 {
            return Err(SimulationError::ZeroStride);
        }
        Ok(SimulationConfig {
            seed,
            n_experiments,
            checkpoint_stride,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_experiments(&self) -> u64 {
        self.n_experiments
    }

    pub fn checkpoint_stride(&self) -> u64 {
        self.checkpoint_stride
    }

    fn block_count(&self) -> u64 {
        self.n_experiments.div_ceil(BLOCK_EXPERIMENTS)
    }

    fn block_len(&self, block: u64) -> u64 {
        let start = block * BLOCK_EXPERIMENTS;
        BLOCK_EXPERIMENTS.min(self.n_experiments - start)
    }
}

/// Fair coin bits from one block's generator.
struct TossBits {
    rng: ChaCha8Rng,
    word: u64,
    available: u32,
}

impl TossBits {
    fn for_block(seed: u64, block: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        TossBits {
            rng,
            word: 0,
            available: 0,
        }
    }

    /// Consumes `len` tosses and returns how many were Heads.
    fn take_heads(&mut self, mut len: u64) -> u64 {
        let mut heads = 0;
        while len > 0 {
            if self.available == 0 {
                self.word = self.rng.next_u64();
                self.available = 64;
            }
            let take = len.min(self.available as u64) as u32;
            let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
            heads += (self.word & mask).count_ones() as u64;
            self.word = self.word.checked_shr(take).unwrap_or(0);
            self.available -= take;
            len -= take as u64;
        }
        heads
    }

    fn next_coin(&mut self) -> Coin {
        if self.take_heads(1) == 1 {
            Coin::Heads
        } else {
            Coin::Tails
        }
    }
}

/// The seeded toss sequence of a run, in experiment order.
pub struct TossStream {
    config: SimulationConfig,
    block: u64,
    left_in_block: u64,
    bits: Option<TossBits>,
}

impl TossStream {
    pub fn new(config: SimulationConfig) -> Self {
        TossStream {
            config,
            block: 0,
            left_in_block: 0,
            bits: None,
        }
    }
}

impl Iterator for TossStream {
    type Item = Coin;

    fn next(&mut self) -> Option<Coin> {
        if self.left_in_block == 0 {
            if self.block >= self.config.block_count() {
                return None;
            }
            self.bits = Some(TossBits::for_block(self.config.seed, self.block));
            self.left_in_block = self.config.block_len(self.block);
            self.block += 1;
        }
        self.left_in_block -= 1;
        self.bits.as_mut().map(TossBits::next_coin)
    }
}

/// Awakening stream of a seeded run; always ends on an experiment boundary.
pub fn awakening_stream(config: SimulationConfig) -> impl Iterator<Item = Awakening> {
    TossStream::new(config).flat_map(|c| c.awakenings().iter().copied())
}

/// Running statistics after a given number of experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct Checkpoint {
    pub experiments: u64,
    pub heads_experiments: u64,
    pub awakenings: u64,
}

impl Checkpoint {
    fn at(experiments: u64, heads: u64) -> Self {
        Checkpoint {
            experiments,
            heads_experiments: heads,
            awakenings: 2 * experiments - heads,
        }
    }

    pub fn halfer(&self) -> f64 {
        self.heads_experiments as f64 / self.experiments as f64
    }

    pub fn thirder(&self) -> f64 {
        self.heads_experiments as f64 / self.awakenings as f64
    }

    /// Occupation frequencies of `(MH, MT, TU)`.
    pub fn frequencies(&self) -> [f64; 3] {
        let tails = (self.experiments - self.heads_experiments) as f64 / self.awakenings as f64;
        [self.thirder(), tails, tails]
    }
}

impl Serialize for Checkpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Checkpoint", 5)?;
        st.serialize_field("experiments", &self.experiments)?;
        st.serialize_field("heads_experiments", &self.heads_experiments)?;
        st.serialize_field("awakenings", &self.awakenings)?;
        st.serialize_field("halfer", &self.halfer())?;
        st.serialize_field("thirder", &self.thirder())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StateCounts {
    #[serde(rename = "MH")]
    pub monday_heads: u64,
    #[serde(rename = "MT")]
    pub monday_tails: u64,
    #[serde(rename = "TU")]
    pub tuesday: u64,
}

impl StateCounts {
    pub fn get(&self, state: Awakening) -> u64 {
        match state {
            Awakening::MondayHeads => self.monday_heads,
            Awakening::MondayTails => self.monday_tails,
            Awakening::Tuesday => self.tuesday,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub config: SimulationConfig,
    pub generator: String,
    pub heads_experiments: u64,
    pub total_experiments: u64,
    pub heads_awakenings: u64,
    pub total_awakenings: u64,
    pub state_counts: StateCounts,
    pub checkpoints: Vec<Checkpoint>,
}

/// Counters for a contiguous range of experiments. Checkpoint marks carry
/// global experiment counts and heads counted within the range only.
#[derive(Debug, Default)]
struct Tally {
    experiments: u64,
    heads: u64,
    marks: Vec<(u64, u64)>,
}

impl Tally {
    fn merge(mut self, next: Tally) -> Tally {
        let offset = self.heads;
        self.marks
            .extend(next.marks.into_iter().map(|(e, h)| (e, h + offset)));
        self.experiments += next.experiments;
        self.heads += next.heads;
        self
    }
}

/// Global experiment counts in `(start, end]` at which a checkpoint fires.
fn marks_in(config: &SimulationConfig, start: u64, end: u64) -> impl Iterator<Item = u64> {
    let stride = config.checkpoint_stride;
    let first = (start / stride + 1) * stride;
    let total = config.n_experiments;
    let strided = (first..=end).step_by(stride as usize);
    let last = (end == total && !total.is_multiple_of(stride)).then_some(total);
    strided.chain(last)
}

fn tally_block(config: &SimulationConfig, block: u64) -> Tally {
    let start = block * BLOCK_EXPERIMENTS;
    let end = start + config.block_len(block);
    let mut bits = TossBits::for_block(config.seed, block);
    let mut tally = Tally::default();
    let mut position = start;
    for mark in marks_in(config, start, end) {
        tally.heads += bits.take_heads(mark - position);
        tally.marks.push((mark, tally.heads));
        position = mark;
    }
    tally.heads += bits.take_heads(end - position);
    tally.experiments = end - start;
    tally
}

fn finish(config: SimulationConfig, generator: &str, tally: Tally) -> SimulationRecord {
    let tails = tally.experiments - tally.heads;
    SimulationRecord {
        config,
        generator: generator.to_string(),
        heads_experiments: tally.heads,
        total_experiments: tally.experiments,
        heads_awakenings: tally.heads,
        total_awakenings: tally.heads + 2 * tails,
        state_counts: StateCounts {
            monday_heads: tally.heads,
            monday_tails: tails,
            tuesday: tails,
        },
        checkpoints: tally
            .marks
            .into_iter()
            .map(|(e, h)| Checkpoint::at(e, h))
            .collect(),
    }
}

/// Runs `config.n_experiments` seeded experiments, counting blocks in parallel.
pub fn run_simulation(config: SimulationConfig) -> SimulationRecord {
    let tallies: Vec<Tally> = (0..config.block_count())
        .into_par_iter()
        .map(|b| tally_block(&config, b))
        .collect();
    let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);
    finish(config, GENERATOR, tally)
}

/// Replays supplied tosses through the same counting pipeline.
pub fn forced_run(coins: &CoinSequence, checkpoint_stride: u64) -> Result<SimulationRecord, SimulationError> {
    if coins.is_empty() {
        return Err(SimulationError::EmptyInput);
    }
    let config = SimulationConfig::new(0, coins.len() as u64, checkpoint_stride)?;
    let mut tally = Tally::default();
    let mut marks = marks_in(&config, 0, config.n_experiments).peekable();
    for coin in coins.tosses() {
        tally.experiments += 1;
        tally.heads += u64::from(*coin == Coin::Heads);
        if marks.next_if_eq(&tally.experiments).is_some() {
            tally.marks.push((tally.experiments, tally.heads));
        }
    }
    Ok(finish(config, FORCED_GENERATOR, tally))
}

/// Fraction of experiments that came up Heads.
pub fn halfer_statistic(record: &SimulationRecord) -> f64 {
    record.heads_experiments as f64 / record.total_experiments as f64
}

/// Fraction of awakenings that are Heads awakenings.
pub fn thirder_statistic(record: &SimulationRecord) -> f64 {
    record.heads_awakenings as f64 / record.total_awakenings as f64
}

/// Occupation frequencies of `(MH, MT, TU)` over all awakenings.
pub fn state_frequencies(record: &SimulationRecord) -> [f64; 3] {
    let total = record.total_awakenings as f64;
    Awakening::ALL.map(|s| record.state_counts.get(s) as f64 / total)
}

impl SimulationRecord {
    pub fn halfer_exact(&self) -> Rational {
        Rational::from_bigints(self.heads_experiments.into(), self.total_experiments.into())
    }

    pub fn thirder_exact(&self) -> Rational {
        Rational::from_bigints(self.heads_awakenings.into(), self.total_awakenings.into())
    }

    /// `thirder = h / (2 − h)` with `h` the halfer statistic, checked in
    /// integers as `heads_awakenings · (2E − H) = H · total_awakenings`.
    pub fn camp_identity_holds(&self) -> bool {
        let (h, e) = (self.heads_experiments as u128, self.total_experiments as u128);
        self.heads_awakenings as u128 * (2 * e - h) == h * self.total_awakenings as u128
    }

    /// Counter invariants tying awakenings to experiments.
    pub fn is_consistent(&self) -> bool {
        let e = self.total_experiments;
        let h = self.heads_experiments;
        let c = &self.state_counts;
        h <= e
            && e == self.config.n_experiments
            && self.total_awakenings == h + 2 * (e - h)
            && self.heads_awakenings == h
            && c.monday_heads == h
            && c.monday_tails == e - h
            && c.tuesday == e - h
    }

    /// One row per checkpoint, preceded by a provenance comment line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# generator={} seed={}", self.generator, self.config.seed)?;
        writeln!(
            out,
            "experiments,awakenings,halfer,thirder,freq_MH,freq_MT,freq_TU"
        )?;
        for c in &self.checkpoints {
            let [mh, mt, tu] = c.frequencies();
            writeln!(
                out,
                "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                c.experiments,
                c.awakenings,
                c.halfer(),
                c.thirder(),
                mh,
                mt,
                tu
            )?;
        }
        Ok(())
    }
}

/// Running ergodic averages `(1/n) Σ f(X_i)` along the awakening stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlnTrace {
    /// Values of `f` on `(MH, MT, TU)`.
    pub f: [f64; 3],
    /// `(n, average over the first n awakenings)`, every `checkpoint_stride`
    /// awakenings and at the end of the stream.
    pub running_averages: Vec<(u64, f64)>,
}

impl LlnTrace {
    pub fn final_average(&self) -> Option<f64> {
        self.running_averages.last().map(|&(_, a)| a)
    }
}

/// Averages are computed from per-state counts and clamped to
/// `[min f, max f]`, so a constant `f` reproduces its value exactly.
pub fn lln_trace(config: SimulationConfig, f: [f64; 3]) -> LlnTrace {
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let average = |counts: &[u64; 3], n: u64| {
        let sum: f64 = counts.iter().zip(f).map(|(&c, v)| c as f64 * v).sum();
        (sum / n as f64).clamp(lo, hi)
    };
    let stride = config.checkpoint_stride;
    let mut counts = [0u64; 3];
    let mut n = 0u64;
    let mut running_averages = Vec::new();
    for state in awakening_stream(config) {
        counts[state.index()] += 1;
        n += 1;
        if n.is_multiple_of(stride) {
            running_averages.push((n, average(&counts, n)));
        }
    }
    if !n.is_multiple_of(stride) {
        running_averages.push((n, average(&counts, n)));
    }
    LlnTrace { f, running_averages }
}
