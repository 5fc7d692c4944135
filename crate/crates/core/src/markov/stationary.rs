//! Exact stationary distribution via fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{is_irreducible, ChainError, DistributionVector, Result, TransitionMatrix};
use crate::Rational;

/// Unique `π` with `πP = π`, `π ≥ 0`, `Σπ = 1`.
///
/// Solves `(Pᵀ − I)πᵀ = 0` with the last equation replaced by `Σπ_i = 1`.
/// The columns of `Pᵀ − I` sum to zero, so any single equation is redundant
/// and the replaced system is non-singular exactly when the stationary law is
/// unique. Reducible inputs are refused.
pub fn stationary_distribution(matrix: &TransitionMatrix) -> Result<DistributionVector> {
    if !is_irreducible(matrix) {
        return Err(ChainError::NotIrreducible);
    }
    let k = matrix.dim();
    let mut system: Vec<Vec<Rational>> = (0..k - 1)
        .map(|i| {
            let mut row: Vec<Rational> = (0..k)
                .map(|j| {
                    if i == j {
                        matrix.get(j, i) - &Rational::one()
                    } else {
                        matrix.get(j, i).clone()
                    }
                })
                .collect();
            row.push(Rational::zero());
            row
        })
        .collect();
    system.push(vec![Rational::one(); k + 1]);

    let solution = solve_augmented(&system).expect("irreducible chain has a unique stationary law");
    DistributionVector::new(solution).map_err(|e| ChainError::InvalidDistribution(e.to_string()))
}

/// Scales a rational row to integers by the LCM of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// Solves the n×(n+1) augmented system `[A | b]` exactly. `None` if `A` is singular.
pub(crate) fn solve_augmented(system: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = system.len();
    let mut m: Vec<Vec<BigInt>> = system.iter().map(|r| integer_row(r)).collect();
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        for i in col + 1..n {
            for j in col + 1..=n {
                let v = &m[i][j] * &m[col][col] - &m[i][col] * &m[col][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_bigints(m[i][n].clone(), BigInt::one());
        for j in i + 1..n {
            acc = acc - Rational::from_bigints(m[i][j].clone(), BigInt::one()) * &x[j];
        }
        x[i] = acc / Rational::from_bigints(m[i][i].clone(), BigInt::one());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn sleeping_beauty_matrix() {
        let p = TransitionMatrix::new(vec![
            vec![q!(1, 2), q!(1, 2), q!(0)],
            vec![q!(0), q!(0), q!(1)],
            vec![q!(1, 2), q!(1, 2), q!(0)],
        ])
        .unwrap();
        let pi = stationary_distribution(&p).unwrap();
        assert_eq!(pi.weights(), &[q!(1, 3), q!(1, 3), q!(1, 3)]);
        assert_eq!(pi.step(&p).unwrap(), pi);
    }

    #[test]
    fn small_cases() {
        let swap = TransitionMatrix::new(vec![vec![q!(0), q!(1)], vec![q!(1), q!(0)]]).unwrap();
        assert_eq!(
            stationary_distribution(&swap).unwrap().weights(),
            &[q!(1, 2), q!(1, 2)]
        );
        assert_eq!(
            stationary_distribution(&TransitionMatrix::identity(1))
                .unwrap()
                .weights(),
            &[q!(1)]
        );
        assert_eq!(
            stationary_distribution(&TransitionMatrix::identity(2)),
            Err(ChainError::NotIrreducible)
        );
    }

    #[test]
    fn asymmetric_two_state() {
        // π = (b, a)/(a+b) for [[1-a, a], [b, 1-b]]
        let p = TransitionMatrix::new(vec![vec![q!(2, 3), q!(1, 3)], vec![q!(1, 4), q!(3, 4)]]).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        assert_eq!(pi.weights(), &[q!(3, 7), q!(4, 7)]);
    }

    #[test]
    fn solver_needs_row_swaps() {
        // first pivot column starts with zero
        let system = vec![vec![q!(0), q!(1), q!(2)], vec![q!(1, 2), q!(1), q!(3)]];
        assert_eq!(solve_augmented(&system).unwrap(), vec![q!(2), q!(2)]);
        let singular = vec![vec![q!(1), q!(1), q!(1)], vec![q!(2), q!(2), q!(2)]];
        assert!(solve_augmented(&singular).is_none());
    }
}
