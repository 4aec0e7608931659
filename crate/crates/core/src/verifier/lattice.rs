//! Integer kernel vectors of an affine map.
//!
//! Two grid points `a`, `b` collide under `x -> c·x + bias` exactly when
//! `d = a - b` is a non-zero integer vector with `c·d = 0`. Along every axis
//! the difference is bounded by the scale (`|d_i| < s_i`) except possibly
//! along one "solved" axis, whose coordinate is recovered by divisibility.
//! Leaving that axis unbounded models growing it without limit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::domain::Point;
use crate::error::{Error, Result};

/// A non-zero integer difference vector in the kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelVector {
    pub diff: Vec<BigInt>,
    /// Off-axis difference vectors examined by the search.
    pub examined: u64,
}

impl KernelVector {
    /// The collision `(a, b)` with `a - b = diff`: `a` takes the positive
    /// parts, `b` the negated negative parts. `None` if a coordinate does not
    /// fit in `u64`.
    pub fn points(&self) -> Option<(Point, Point)> {
        let mut a = Vec::with_capacity(self.diff.len());
        let mut b = Vec::with_capacity(self.diff.len());
        for d in &self.diff {
            if d.is_negative() {
                a.push(0);
                b.push((-d).to_u64()?);
            } else {
                a.push(d.to_u64()?);
                b.push(0);
            }
        }
        Some((Point::new(a), Point::new(b)))
    }
}

/// Orients `d` so the solved coordinate is positive, or when it is zero, the
/// first non-zero coordinate.
fn orient(mut d: Vec<BigInt>, solved: usize) -> Vec<BigInt> {
    let pivot = if d[solved].is_zero() {
        d.iter().find(|x| !x.is_zero()).cloned().unwrap_or_default()
    } else {
        d[solved].clone()
    };
    if pivot.is_negative() {
        for x in &mut d {
            *x = -x.clone();
        }
    }
    d
}

/// Searches for a kernel vector of `weights` with `|d_i| < scales[i]` for
/// every `i != solved`, and `|d_solved| < bound` when a bound is given.
///
/// Among all solutions the one with the smallest `|d_solved|` is returned,
/// ties broken by the lexicographically least oriented vector. The search
/// visits every off-axis difference, so it is refused when their number
/// `prod(2 s_i - 1)` exceeds `budget`.
pub fn find_kernel_vector(
    weights: &[BigInt],
    scales: &[u64],
    solved: usize,
    bound: Option<u64>,
    budget: u64,
) -> Result<Option<KernelVector>> {
    let dims = scales.len();
    if weights.len() != dims {
        return Err(Error::InvalidWeights { expected: dims, got: weights.len() });
    }
    if solved >= dims {
        return Err(Error::InvalidDimension { dim: solved, dims });
    }
    let total = (0..dims)
        .filter(|&i| i != solved)
        .try_fold(1u64, |acc, i| acc.checked_mul(2 * scales[i] - 1));
    let total = match total {
        Some(t) if t <= budget => t,
        _ => {
            let needed = (0..dims)
                .filter(|&i| i != solved)
                .fold(num_bigint::BigUint::from(1u32), |acc, i| {
                    acc * num_bigint::BigUint::from(2 * scales[i] - 1)
                });
            return Err(Error::BudgetExceeded { what: "kernel search", needed, budget });
        }
    };

    let pivot = &weights[solved];
    let fits = |d_solved: &BigInt| bound.is_none_or(|b| d_solved.abs() < BigInt::from(b));
    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    let mut consider = |candidate: Vec<BigInt>| {
        let oriented = orient(candidate, solved);
        let key = (oriented[solved].abs(), oriented);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    };

    // odometer over off-axis differences, each in -(s_i - 1)..=(s_i - 1)
    let mut d: Vec<i64> = (0..dims)
        .map(|i| if i == solved { 0 } else { 1 - scales[i] as i64 })
        .collect();
    for _ in 0..total {
        let residual: BigInt = (0..dims)
            .filter(|&i| i != solved)
            .map(|i| &weights[i] * d[i])
            .sum();
        let off_axis_zero = d.iter().all(|&x| x == 0);
        let as_big = |solved_value: BigInt| -> Vec<BigInt> {
            (0..dims)
                .map(|i| if i == solved { solved_value.clone() } else { BigInt::from(d[i]) })
                .collect()
        };
        if pivot.is_zero() {
            if residual.is_zero() {
                if !off_axis_zero {
                    consider(as_big(BigInt::zero()));
                } else if fits(&BigInt::from(1)) {
                    consider(as_big(BigInt::from(1)));
                }
            }
        } else if !off_axis_zero {
            let (quot, rem) = (-residual).div_rem(pivot);
            if rem.is_zero() && fits(&quot) {
                consider(as_big(quot));
            }
        }
        for i in (0..dims).rev() {
            if i == solved {
                continue;
            }
            if d[i] < scales[i] as i64 - 1 {
                d[i] += 1;
                break;
            }
            d[i] = 1 - scales[i] as i64;
        }
    }

    Ok(best.map(|(_, diff)| KernelVector { diff, examined: total }))
}
