//! Communication structure of the positive-entry digraph `{(i, j) : P[i][j] > 0}`.

use std::collections::VecDeque;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{stationary_distribution, ChainError, DistributionVector, Result, TransitionMatrix};

/// BFS distances from `source`, following edges forward or backward.
fn bfs_levels(matrix: &TransitionMatrix, source: usize, reverse: bool) -> Vec<Option<usize>> {
    let k = matrix.dim();
    let mut level = vec![None; k];
    level[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = level[u].map(|l| l + 1);
        let neighbours: Vec<usize> = if reverse {
            (0..k).filter(|&v| matrix.get(v, u).is_positive()).collect()
        } else {
            matrix.successors(u).collect()
        };
        for v in neighbours {
            if level[v].is_none() {
                level[v] = next;
                queue.push_back(v);
            }
        }
    }
    level
}

/// Every state reaches every other: strong connectivity, checked as
/// forward and backward reachability from state 0.
pub fn is_irreducible(matrix: &TransitionMatrix) -> bool {
    bfs_levels(matrix, 0, false).iter().all(Option::is_some)
        && bfs_levels(matrix, 0, true).iter().all(Option::is_some)
}

/// GCD of the return times to `state`.
///
/// With BFS levels `d` from `state`, every closed walk through `state` has
/// length divisible by `g = gcd{d(u) + 1 - d(v) : u -> v}`, and on a strongly
/// connected graph `g` is exactly the gcd of the cycle lengths.
pub fn period(matrix: &TransitionMatrix, state: usize) -> Result<u64> {
    if state >= matrix.dim() {
        return Err(ChainError::DimensionMismatch {
            expected: matrix.dim(),
            found: state + 1,
        });
    }
    if !is_irreducible(matrix) {
        return Err(ChainError::NotIrreducible);
    }
    let level = bfs_levels(matrix, state, false);
    let mut g: u64 = 0;
    for u in 0..matrix.dim() {
        let lu = level[u].expect("irreducible") as i64;
        for v in matrix.successors(u) {
            let lv = level[v].expect("irreducible") as i64;
            g = g.gcd(&(lu + 1 - lv).unsigned_abs());
        }
    }
    // Irreducible chains always have at least one cycle, so g > 0.
    Ok(g)
}

pub fn is_aperiodic(matrix: &TransitionMatrix) -> Result<bool> {
    Ok(period(matrix, 0)? == 1)
}

pub fn is_ergodic(matrix: &TransitionMatrix) -> bool {
    is_irreducible(matrix) && matches!(is_aperiodic(matrix), Ok(true))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErgodicityReport {
    pub irreducible: bool,
    pub period: Option<u64>,
    pub aperiodic: bool,
    pub ergodic: bool,
    pub stationary: Option<DistributionVector>,
}

/// Everything the structural checks can say about `matrix` in one pass.
pub fn analyze(matrix: &TransitionMatrix) -> ErgodicityReport {
    let irreducible = is_irreducible(matrix);
    let period = period(matrix, 0).ok();
    let aperiodic = period == Some(1);
    let stationary = stationary_distribution(matrix).ok();
    ErgodicityReport {
        irreducible,
        period,
        aperiodic,
        ergodic: irreducible && aperiodic,
        stationary,
    }
}
