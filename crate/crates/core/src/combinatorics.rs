//! Exact combinatorial primitives over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// Stirling numbers of the second kind `S(a, b)` for `0 ≤ b ≤ a ≤ max`,
/// filled row by row from `S(a, b) = b·S(a-1, b) + S(a-1, b-1)`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
        rows.push(vec![BigInt::one()]);
        for a in 1..=max {
            let prev = &rows[a - 1];
            let mut row = vec![BigInt::zero(); a + 1];
            for b in 1..=a {
                let stay = if b < a { &prev[b] * b } else { BigInt::zero() };
                row[b] = stay + &prev[b - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(a, b)`; zero when `b > a`. Panics if `a` exceeds the table.
    pub fn get(&self, a: usize, b: usize) -> BigInt {
        self.rows[a].get(b).cloned().unwrap_or_default()
    }
}

/// Number of partitions of an `a`-set into `b` nonempty unlabeled blocks.
pub fn stirling2(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 || b < 0 {
        return Err(Error::invalid(format!("S({a}, {b}) needs nonnegative arguments")));
    }
    if b > a {
        return Ok(BigInt::zero());
    }
    Ok(StirlingTable::new(a as usize).get(a as usize, b as usize))
}

/// `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 {
        return Err(Error::invalid(format!("C({a}, {b}) needs a nonnegative top argument")));
    }
    if b < 0 || b > a {
        return Ok(BigInt::zero());
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        // acc = C(a, i) at loop entry, and C(a, i) * (a - i) is divisible by i + 1
        acc = acc * (a - i) / (i + 1);
    }
    Ok(acc)
}

/// Infallible binomial for callers that already hold nonnegative arguments.
pub(crate) fn choose(a: usize, b: usize) -> BigInt {
    binomial(a as i64, b as i64).expect("nonnegative arguments")
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn pow_conv(base: u64, exp: u32) -> BigInt {
    // BigInt::pow already yields 1 for a zero exponent
    Pow::pow(BigInt::from(base), exp)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}
