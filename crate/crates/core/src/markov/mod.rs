//! Finite-state, time-homogeneous Markov chains over exact rationals.
//!
//! Everything here is a pure function of immutable values. Matrices are
//! row-stochastic: `P[i][j]` is the probability of moving from state `i` to
//! state `j` in one step, and distributions are row vectors multiplied on the
//! left.

mod convergence;
mod stationary;
mod structure;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

pub use convergence::{convergence_report, expectation, total_variation_distance, ConvergenceRow};
pub use stationary::stationary_distribution;
pub use structure::{analyze, is_aperiodic, is_ergodic, is_irreducible, period, ErgodicityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("row {row}: {reason}")]
    NonStochasticRow { row: usize, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate state label `{0}`")]
    DuplicateState(String),
    #[error("state space must contain at least one state")]
    EmptyStateSpace,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("chain has no initial distribution")]
    MissingInitialDistribution,
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("chain is not ergodic")]
    NotErgodic,
    #[error("step count must be at least 1")]
    ZeroStep,
}

pub type Result<T> = std::result::Result<T, ChainError>;

/// Ordered, duplicate-free state labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(ChainError::EmptyStateSpace);
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(ChainError::DuplicateState(label.clone()));
            }
        }
        Ok(StateSpace { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Probability row vector: entries in `[0, 1]` summing to exactly 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DistributionVector {
    weights: Vec<Rational>,
}

impl DistributionVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(ChainError::InvalidDistribution("empty weight list".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_probability()) {
            return Err(ChainError::InvalidDistribution(format!(
                "weight {i} = {w} lies outside [0, 1]"
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(ChainError::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(DistributionVector { weights })
    }

    /// Uniform weights `1/k`.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(ChainError::EmptyStateSpace);
        }
        Ok(DistributionVector {
            weights: vec![Rational::new(1, k as i64); k],
        })
    }

    /// Point mass on `index`.
    pub fn point_mass(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(ChainError::DimensionMismatch {
                expected: k,
                found: index + 1,
            });
        }
        let mut weights = vec![Rational::zero(); k];
        weights[index] = Rational::one();
        Ok(DistributionVector { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.weights.get(index)
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    /// One step of the chain: `self · P`.
    pub fn step(&self, matrix: &TransitionMatrix) -> Result<Self> {
        if self.len() != matrix.dim() {
            return Err(ChainError::DimensionMismatch {
                expected: matrix.dim(),
                found: self.len(),
            });
        }
        let k = matrix.dim();
        let weights = (0..k)
            .map(|j| {
                self.weights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(i, w)| w * matrix.get(i, j))
                    .sum()
            })
            .collect();
        Ok(DistributionVector { weights })
    }
}

impl fmt::Debug for DistributionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.weights).finish()
    }
}

impl fmt::Display for DistributionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]")
    }
}

impl<'de> Deserialize<'de> for DistributionVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let weights = Vec::<Rational>::deserialize(d)?;
        DistributionVector::new(weights).map_err(serde::de::Error::custom)
    }
}

/// Square row-stochastic matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(ChainError::EmptyStateSpace);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(ChainError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            if let Some((c, v)) = row.iter().enumerate().find(|(_, v)| !v.is_probability()) {
                return Err(ChainError::NonStochasticRow {
                    row: r,
                    reason: format!("entry {c} = {v} lies outside [0, 1]"),
                });
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Err(ChainError::NonStochasticRow {
                    row: r,
                    reason: format!("entries sum to {total}, not 1"),
                });
            }
            entries.extend(row);
        }
        Ok(TransitionMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Rational::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Rational::one();
        }
        TransitionMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.rows().map(<[Rational]>::to_vec).collect()
    }

    /// Indices `j` with `P[i][j] > 0`.
    pub(crate) fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_positive())
            .map(|(j, _)| j)
    }

    /// Matrix product; stochastic times stochastic stays stochastic.
    pub fn multiply(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.dim != other.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let k = self.dim;
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let v: Rational = (0..k)
                    .filter(|&m| !self.get(i, m).is_zero())
                    .map(|m| self.get(i, m) * other.get(m, j))
                    .sum();
                entries.push(v);
            }
        }
        Ok(TransitionMatrix { dim: k, entries })
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.rows()
            .all(|row| row.iter().all(Rational::is_probability) && row.iter().sum::<Rational>().is_one())
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows())
    }
}

/// `P^n` by repeated squaring; `P^0` is the identity.
pub fn matrix_power(matrix: &TransitionMatrix, n: u32) -> TransitionMatrix {
    let mut result = TransitionMatrix::identity(matrix.dim());
    let mut base = matrix.clone();
    let mut exp = n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result.multiply(&base).expect("same dimension");
        }
        exp >>= 1;
        if exp > 0 {
            base = base.multiply(&base).expect("same dimension");
        }
    }
    result
}

/// State space, transition matrix and optional initial law `P_{X_1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    states: StateSpace,
    matrix: TransitionMatrix,
    initial: Option<DistributionVector>,
}

impl Chain {
    pub fn new(
        states: StateSpace,
        matrix: Vec<Vec<Rational>>,
        initial: Option<Vec<Rational>>,
    ) -> Result<Self> {
        if matrix.len() != states.len() {
            return Err(ChainError::DimensionMismatch {
                expected: states.len(),
                found: matrix.len(),
            });
        }
        let matrix = TransitionMatrix::new(matrix)?;
        let initial = initial
            .map(|w| {
                if w.len() != states.len() {
                    return Err(ChainError::DimensionMismatch {
                        expected: states.len(),
                        found: w.len(),
                    });
                }
                DistributionVector::new(w)
            })
            .transpose()?;
        Ok(Chain {
            states,
            matrix,
            initial,
        })
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn initial(&self) -> Option<&DistributionVector> {
        self.initial.as_ref()
    }

    /// Same chain started from `initial`.
    pub fn with_initial(&self, initial: DistributionVector) -> Result<Self> {
        if initial.len() != self.states.len() {
            return Err(ChainError::DimensionMismatch {
                expected: self.states.len(),
                found: initial.len(),
            });
        }
        Ok(Chain {
            initial: Some(initial),
            ..self.clone()
        })
    }
}

/// `P_{X_n} = P_{X_1} · P^{n-1}` for `n ≥ 1`.
pub fn n_step_distribution(chain: &Chain, n: u32) -> Result<DistributionVector> {
    let initial = chain.initial().ok_or(ChainError::MissingInitialDistribution)?;
    if n == 0 {
        return Err(ChainError::ZeroStep);
    }
    initial.step(&matrix_power(chain.matrix(), n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn sbp_rows() -> Vec<Vec<Rational>> {
        vec![
            vec![q!(1, 2), q!(1, 2), q!(0)],
            vec![q!(0), q!(0), q!(1)],
            vec![q!(1, 2), q!(1, 2), q!(0)],
        ]
    }

    fn sbp() -> Chain {
        let states = StateSpace::new(["MH", "MT", "TU"]).unwrap();
        Chain::new(states, sbp_rows(), Some(vec![q!(1, 2), q!(1, 2), q!(0)])).unwrap()
    }

    #[test]
    fn new_chain_accepts_valid_inputs() {
        let chain = sbp();
        assert_eq!(chain.matrix().row(1), &[q!(0), q!(0), q!(1)]);
        let single = Chain::new(StateSpace::new(["s"]).unwrap(), vec![vec![q!(1)]], None).unwrap();
        assert_eq!(single.matrix().dim(), 1);
    }

    #[test]
    fn new_chain_rejects_bad_rows() {
        let states = StateSpace::new(["a", "b"]).unwrap();
        let err = Chain::new(
            states.clone(),
            vec![vec![q!(1, 2), q!(1, 2)], vec![q!(1, 3), q!(1, 3)]],
            None,
        )
        .unwrap_err();
        assert!(
            matches!(err, ChainError::NonStochasticRow { row: 1, .. }),
            "{err}"
        );

        let err = Chain::new(states, vec![vec![q!(3, 2), q!(-1, 2)], vec![q!(0), q!(1)]], None).unwrap_err();
        assert!(matches!(err, ChainError::NonStochasticRow { row: 0, .. }));
    }

    #[test]
    fn new_chain_rejects_shape_and_label_problems() {
        assert_eq!(
            StateSpace::new(["a", "a"]).unwrap_err(),
            ChainError::DuplicateState("a".into())
        );
        assert_eq!(
            StateSpace::new(Vec::<String>::new()).unwrap_err(),
            ChainError::EmptyStateSpace
        );

        let states = StateSpace::new(["a", "b"]).unwrap();
        let err = Chain::new(states.clone(), vec![vec![q!(1)]], None).unwrap_err();
        assert!(matches!(err, ChainError::DimensionMismatch { .. }));
        let err = Chain::new(states.clone(), vec![vec![q!(1)], vec![q!(1)]], None).unwrap_err();
        assert!(matches!(err, ChainError::DimensionMismatch { .. }));
        let identity = vec![vec![q!(1), q!(0)], vec![q!(0), q!(1)]];
        let err = Chain::new(states, identity, Some(vec![q!(1)])).unwrap_err();
        assert!(matches!(
            err,
            ChainError::DimensionMismatch {
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn matrix_power_small_exponents() {
        let p = TransitionMatrix::new(sbp_rows()).unwrap();
        assert_eq!(matrix_power(&p, 0), TransitionMatrix::identity(3));
        assert_eq!(matrix_power(&p, 1), p);
        // hand product of the SBP matrix with itself
        let p2 = TransitionMatrix::new(vec![
            vec![q!(1, 4), q!(1, 4), q!(1, 2)],
            vec![q!(1, 2), q!(1, 2), q!(0)],
            vec![q!(1, 4), q!(1, 4), q!(1, 2)],
        ])
        .unwrap();
        assert_eq!(matrix_power(&p, 2), p2);
    }

    #[test]
    fn n_step_distribution_examples() {
        let chain = sbp();
        assert_eq!(
            n_step_distribution(&chain, 1).unwrap().weights(),
            &[q!(1, 2), q!(1, 2), q!(0)]
        );
        assert_eq!(
            n_step_distribution(&chain, 2).unwrap().weights(),
            &[q!(1, 4), q!(1, 4), q!(1, 2)]
        );
        assert_eq!(
            n_step_distribution(&chain, 3).unwrap().weights(),
            &[q!(3, 8), q!(3, 8), q!(1, 4)]
        );
        assert_eq!(n_step_distribution(&chain, 0).unwrap_err(), ChainError::ZeroStep);
    }

    #[test]
    fn n_step_distribution_needs_initial() {
        let chain = Chain::new(StateSpace::new(["MH", "MT", "TU"]).unwrap(), sbp_rows(), None).unwrap();
        assert_eq!(
            n_step_distribution(&chain, 1).unwrap_err(),
            ChainError::MissingInitialDistribution
        );
    }

    #[test]
    fn distribution_validation() {
        assert!(DistributionVector::new(vec![q!(1, 2), q!(1, 3)]).is_err());
        assert!(DistributionVector::new(vec![q!(3, 2), q!(-1, 2)]).is_err());
        assert!(DistributionVector::new(vec![]).is_err());
        assert_eq!(
            DistributionVector::uniform(3).unwrap().weights(),
            &[q!(1, 3), q!(1, 3), q!(1, 3)]
        );
    }
}
