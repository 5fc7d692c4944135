use serde::{Deserialize, Serialize};

use super::{is_ergodic, stationary_distribution, Chain, ChainError, DistributionVector, Result};
use crate::Rational;

/// `½ Σ |p_i − q_i|`.
pub fn total_variation_distance(p: &DistributionVector, q: &DistributionVector) -> Result<Rational> {
    if p.len() != q.len() {
        return Err(ChainError::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    let l1: Rational = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(l1 * Rational::new(1, 2))
}

/// `Σ f(x_i) π_i`, with `f` given by state index.
pub fn expectation<F>(f: F, pi: &DistributionVector) -> Rational
where
    F: Fn(usize) -> Rational,
{
    pi.weights().iter().enumerate().map(|(i, w)| f(i) * w).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub distribution: DistributionVector,
    pub tv_to_stationary: Rational,
}

/// `P_{X_n}` and its distance to `π` for `n = 1..=n_max`.
pub fn convergence_report(chain: &Chain, n_max: u32) -> Result<Vec<ConvergenceRow>> {
    let initial = chain.initial().ok_or(ChainError::MissingInitialDistribution)?;
    if !is_ergodic(chain.matrix()) {
        return Err(ChainError::NotErgodic);
    }
    let pi = stationary_distribution(chain.matrix())?;
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut current = initial.clone();
    for n in 1..=n_max {
        if n > 1 {
            current = current.step(chain.matrix())?;
        }
        let tv = total_variation_distance(&current, &pi)?;
        rows.push(ConvergenceRow {
            n,
            distribution: current.clone(),
            tv_to_stationary: tv,
        });
    }
    Ok(rows)
}
