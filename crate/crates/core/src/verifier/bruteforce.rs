//! Exhaustive evaluation of the subset condition.
//!
//! Points are indexed in lexicographic order and subsets are bitmasks over
//! those indices. Seen subsets are visited by their complement: shortest
//! complement first, then lexicographically. The first failing `X_S` in that
//! order is the reported witness.

use std::collections::BTreeMap;

use super::{
    check_dims, CheckStats, ConditionReport, Method, Reading, SubsetPolicy, SubsetWitness, Verdict,
};
use crate::domain::{DiscreteDomain, Point};
use crate::error::{Error, Result};
use crate::model::Model;

/// Subsets are `u32` masks, and the image table has `2^n` entries.
const MAX_POINTS: u64 = 24;

/// Largest domain cardinality each reading is checked on by default.
pub fn default_bruteforce_budget(reading: Reading) -> u64 {
    match reading {
        Reading::Literal => 12,
        Reading::Noncontainment => 16,
    }
}

fn related(reading: Reading, seen: u32, unseen: u32) -> bool {
    match reading {
        Reading::Literal => {
            let sym = seen ^ unseen;
            sym != seen && sym != unseen
        }
        Reading::Noncontainment => unseen & !seen != 0 && seen & !unseen != 0,
    }
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }

    fn next_mask(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u32, |m, &i| m | (1 << i));
        let k = self.idx.len();
        match (0..k).rev().find(|&i| self.idx[i] < self.n - k + i) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(mask)
    }
}

/// Evaluates the quantified condition over every admissible `(X_S, X_N)`.
///
/// `budget` caps the domain cardinality; see [`default_bruteforce_budget`].
/// The work is `O(3^|D|)` in the worst case.
pub fn check_s_bruteforce(
    model: &Model,
    domain: &DiscreteDomain,
    reading: Reading,
    policy: SubsetPolicy,
    budget: u64,
) -> Result<ConditionReport> {
    check_dims(model.domain(), domain)?;
    let cap = budget.min(MAX_POINTS);
    let points: Vec<Point> = domain
        .enumerate(cap)
        .map_err(|_| Error::BudgetExceeded {
            what: "subset enumeration",
            needed: domain.cardinality(),
            budget: cap,
        })?
        .collect();
    let n = points.len();

    let mut ids = BTreeMap::new();
    let mut value_bit = Vec::with_capacity(n);
    for p in &points {
        let v = model.eval(p)?;
        let next = ids.len();
        let id = *ids.entry(v).or_insert(next);
        value_bit.push(1u32 << id);
    }

    let full: u32 = (1u32 << n) - 1;
    let mut image = vec![0u32; 1usize << n];
    for mask in 1..image.len() {
        image[mask] = image[mask & (mask - 1)] | value_bit[mask.trailing_zeros() as usize];
    }

    let allow_empty = policy == SubsetPolicy::AllowEmpty;
    let mut stats = CheckStats {
        evaluations: n as u64,
        ..CheckStats::default()
    };

    for k in 1..=n {
        let mut combos = Combinations::new(n, k);
        while let Some(complement) = combos.next_mask() {
            let seen = full ^ complement;
            if seen == 0 && !allow_empty {
                continue;
            }
            stats.subsets_examined += 1;
            let seen_image = image[seen as usize];
            let mut found = false;
            let mut sub = complement;
            loop {
                if sub != 0 || allow_empty {
                    stats.candidates_examined += 1;
                    if related(reading, seen_image, image[sub as usize]) {
                        found = true;
                        break;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & complement;
            }
            if !found {
                let witness = (0..n)
                    .filter(|&i| seen & (1 << i) != 0)
                    .map(|i| points[i].clone())
                    .collect();
                return Ok(ConditionReport {
                    verdict: Verdict::Fail,
                    reading,
                    policy,
                    method: Method::BruteForce,
                    failing_subset: Some(SubsetWitness::Explicit(witness)),
                    collision: None,
                    stats,
                });
            }
        }
    }

    Ok(ConditionReport {
        verdict: Verdict::Pass,
        reading,
        policy,
        method: Method::BruteForce,
        failing_subset: None,
        collision: None,
        stats,
    })
}
