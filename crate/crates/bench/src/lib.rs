//! Fixtures shared by the benchmarks.

use tweq_core::linalg::SparseVec;
use tweq_core::{frac, rat, Rational};

/// Images of a banded `n × n` map with rational entries and a kernel of dimension `n / 4`.
pub fn banded_images(n: usize) -> Vec<SparseVec> {
    (0..n)
        .map(|j| {
            if j % 4 == 3 {
                // a fixed combination of the three previous columns
                return (0..n).filter_map(|i| {
                    let v: Rational = band(i, j - 1) - band(i, j - 2) * frac(1, 2) + band(i, j - 3) * frac(2, 3);
                    (v != rat(0)).then_some((i, v))
                })
                .collect();
            }
            (0..n).filter_map(|i| {
                let v = band(i, j);
                (v != rat(0)).then_some((i, v))
            })
            .collect()
        })
        .collect()
}

fn band(i: usize, j: usize) -> Rational {
    if i.abs_diff(j) > 2 {
        return rat(0);
    }
    frac((i + 2 * j + 1) as i64, (i + j % 3 + 1) as i64)
}
