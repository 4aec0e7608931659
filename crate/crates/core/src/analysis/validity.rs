//! Hypothesis validity: how well a guessed mapping reproduces the preimages of
//! the true mapping, block by block over the output space.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use super::jaccard;
use crate::domain::{DiscreteDomain, Point};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::value::OutputValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockValidity {
    pub block: BTreeSet<OutputValue>,
    /// Preimage of the block under the true mapping.
    pub truth: BTreeSet<Point>,
    /// Preimage of the block under the hypothesis.
    pub guess: BTreeSet<Point>,
    pub jaccard: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub blocks: Vec<BlockValidity>,
    pub mean: BigRational,
}

/// Scores `hypothesis` against `truth` on every point of `domain`.
///
/// With `blocks = None` each value of the true mapping's range forms its own
/// block. Explicit blocks must be non-empty, pairwise disjoint, and cover
/// every value either mapping takes on the domain.
pub fn hypothesis_validity(
    truth: &Model,
    hypothesis: &Model,
    domain: &DiscreteDomain,
    blocks: Option<&[BTreeSet<OutputValue>]>,
    budget: u64,
) -> Result<ValidityReport> {
    for m in [truth, hypothesis] {
        if m.domain().dims() != domain.dims() {
            return Err(Error::DomainMismatch(format!(
                "model domain {} does not match {domain}",
                m.domain()
            )));
        }
    }
    let mut graph = Vec::new();
    for p in domain.enumerate(budget)? {
        let u = truth.eval(&p)?;
        let h = hypothesis.eval(&p)?;
        graph.push((p, u, h));
    }

    let blocks: Vec<BTreeSet<OutputValue>> = match blocks {
        None => graph
            .iter()
            .map(|(_, u, _)| u.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|v| BTreeSet::from([v]))
            .collect(),
        Some(bs) => {
            validate_blocks(bs, &graph)?;
            bs.to_vec()
        }
    };
    if blocks.is_empty() {
        return Err(Error::EmptyBlockPartition);
    }

    let mut owner: BTreeMap<&OutputValue, usize> = BTreeMap::new();
    for (i, b) in blocks.iter().enumerate() {
        for v in b {
            owner.insert(v, i);
        }
    }
    let mut truth_sets = vec![BTreeSet::new(); blocks.len()];
    let mut guess_sets = vec![BTreeSet::new(); blocks.len()];
    for (p, u, h) in &graph {
        if let Some(&i) = owner.get(u) {
            truth_sets[i].insert(p.clone());
        }
        if let Some(&i) = owner.get(h) {
            guess_sets[i].insert(p.clone());
        }
    }

    let scored: Vec<BlockValidity> = blocks
        .into_iter()
        .zip(truth_sets.into_iter().zip(guess_sets))
        .map(|(block, (truth, guess))| BlockValidity {
            jaccard: jaccard(&truth, &guess),
            block,
            truth,
            guess,
        })
        .collect();
    let total = scored
        .iter()
        .fold(BigRational::zero(), |acc, b| acc + &b.jaccard);
    let mean = total / BigRational::from_integer(scored.len().into());
    Ok(ValidityReport { blocks: scored, mean })
}

fn validate_blocks(
    blocks: &[BTreeSet<OutputValue>],
    graph: &[(Point, OutputValue, OutputValue)],
) -> Result<()> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlockPartition);
    }
    let mut seen = BTreeSet::new();
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::InvalidBlocks(format!("block {i} is empty")));
        }
        for v in b {
            if !seen.insert(v) {
                return Err(Error::InvalidBlocks(format!("value {v} appears in more than one block")));
            }
        }
    }
    for (p, u, h) in graph {
        for v in [u, h] {
            if !seen.contains(v) {
                return Err(Error::InvalidBlocks(format!(
                    "value {v} taken at {p} is not covered by any block"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn table(d: &DiscreteDomain, values: &[i64]) -> Model {
        Model::table(
            d.clone(),
            values.iter().enumerate().map(|(i, &v)| (Point::new(vec![i as u64]), OutputValue::int(v))),
            OutputValue::null(),
        )
        .unwrap()
    }

    #[test]
    fn identical_hypothesis_scores_one() {
        let d = DiscreteDomain::new(vec![5]).unwrap();
        let u = Model::affine(d.clone(), vec![q(2, 1)], q(0, 1)).unwrap();
        let r = hypothesis_validity(&u, &u, &d, None, 100).unwrap();
        assert!(r.blocks.iter().all(|b| b.jaccard.is_one()));
        assert!(r.mean.is_one());
    }

    #[test]
    fn one_point_off() {
        let d = DiscreteDomain::new(vec![5]).unwrap();
        let u = Model::affine(d.clone(), vec![q(2, 1)], q(0, 1)).unwrap();
        let h = table(&d, &[0, 2, 4, 6, 0]);
        let r = hypothesis_validity(&u, &h, &d, None, 100).unwrap();
        let js: Vec<_> = r.blocks.iter().map(|b| b.jaccard.clone()).collect();
        assert_eq!(js, vec![q(1, 2), q(1, 1), q(1, 1), q(1, 1), q(0, 1)]);
        assert_eq!(r.mean, q(7, 10));
    }

    #[test]
    fn constant_hypothesis() {
        let d = DiscreteDomain::new(vec![4]).unwrap();
        let u = table(&d, &[0, 1, 2, 3]);
        let h = table(&d, &[0, 0, 0, 0]);
        let r = hypothesis_validity(&u, &h, &d, None, 100).unwrap();
        assert_eq!(r.blocks[0].jaccard, q(1, 4));
        assert_eq!(r.mean, q(1, 16));
    }

    #[test]
    fn explicit_blocks() {
        let d = DiscreteDomain::new(vec![4]).unwrap();
        let u = table(&d, &[0, 1, 2, 3]);
        let h = table(&d, &[1, 0, 3, 2]);
        let coarse = [
            BTreeSet::from([OutputValue::int(0), OutputValue::int(1)]),
            BTreeSet::from([OutputValue::int(2), OutputValue::int(3)]),
        ];
        assert!(hypothesis_validity(&u, &h, &d, Some(&coarse), 100).unwrap().mean.is_one());

        let missing = [BTreeSet::from([OutputValue::int(0), OutputValue::int(1)])];
        assert!(matches!(hypothesis_validity(&u, &h, &d, Some(&missing), 100), Err(Error::InvalidBlocks(_))));
        let overlapping = [
            BTreeSet::from([OutputValue::int(0), OutputValue::int(1), OutputValue::int(2)]),
            BTreeSet::from([OutputValue::int(2), OutputValue::int(3)]),
        ];
        assert!(matches!(
            hypothesis_validity(&u, &h, &d, Some(&overlapping), 100),
            Err(Error::InvalidBlocks(_))
        ));
        assert!(matches!(hypothesis_validity(&u, &h, &d, Some(&[]), 100), Err(Error::EmptyBlockPartition)));
        assert!(matches!(hypothesis_validity(&u, &h, &d, None, 3), Err(Error::BudgetExceeded { .. })));
    }
}
