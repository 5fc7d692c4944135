//! Fixtures shared by the criterion benches.

use sbchain::{Rational, TransitionMatrix};

/// Dense `k`-state chain with row `i` proportional to `(i + j) % 5 + 1`.
pub fn dense_chain(k: usize) -> TransitionMatrix {
    let rows = (0..k)
        .map(|i| {
            let raw: Vec<i64> = (0..k).map(|j| ((i + j) % 5 + 1) as i64).collect();
            let total: i64 = raw.iter().sum();
            raw.into_iter().map(|w| Rational::new(w, total)).collect()
        })
        .collect();
    TransitionMatrix::new(rows).expect("rows are normalized")
}
