//! Reachable output sets: exact by enumeration, or a symbolic size bound that
//! holds on every extension of the domain.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use super::{Model, ModelKind};
use crate::domain::DiscreteDomain;
use crate::error::{Error, Result};
use crate::value::OutputValue;

/// Upper bound on the number of distinct outputs, valid on every extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeBound {
    pub size: BigUint,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeInfo {
    Exact(BTreeSet<OutputValue>),
    Bounded(RangeBound),
}

impl RangeInfo {
    /// Exact size, or the bound.
    pub fn size_bound(&self) -> BigUint {
        match self {
            RangeInfo::Exact(set) => BigUint::from(set.len()),
            RangeInfo::Bounded(b) => b.size.clone(),
        }
    }
}

impl Model {
    /// Domain-independent bound on the number of distinct outputs, when the
    /// model kind admits one. Affine maps with a non-zero weight and the
    /// injective pairing have unbounded range on extensions.
    pub fn range_bound(&self) -> Option<RangeBound> {
        match &self.kind {
            ModelKind::Table(t) => {
                let mut values: BTreeSet<&OutputValue> = t.entries.values().collect();
                values.insert(&t.default);
                Some(RangeBound {
                    size: BigUint::from(values.len()),
                    justification: format!(
                        "table with {} entries and a default takes {} distinct values",
                        t.entries.len(),
                        values.len()
                    ),
                })
            }
            ModelKind::Affine(a) if a.is_constant() => Some(RangeBound {
                size: BigUint::one(),
                justification: "affine map with all weights zero is constant".into(),
            }),
            ModelKind::Affine(_) | ModelKind::OracleInjective => None,
            ModelKind::Classifier(c) => Some(RangeBound {
                size: BigUint::from(c.output_bound()),
                justification: format!(
                    "{} indicators x ({} + 1) quantized scores",
                    c.indicators.len(),
                    c.q
                ),
            }),
            ModelKind::Piecewise(p) => {
                let pieces: BigUint = p
                    .pieces
                    .iter()
                    .map(|(region, sub)| bounded_on(sub, region.cardinality()))
                    .sum();
                Some(RangeBound {
                    size: pieces + BigUint::one(),
                    justification: format!(
                        "{} fixed pieces plus the fallback value",
                        p.pieces.len()
                    ),
                })
            }
            ModelKind::Restricted(r) => Some(RangeBound {
                size: bounded_on(&r.inner, r.region.cardinality()) + BigUint::one(),
                justification: format!("fixed box {} plus the outside value", r.region),
            }),
        }
    }
}

fn bounded_on(model: &Model, points: BigUint) -> BigUint {
    match model.range_bound() {
        Some(b) if b.size < points => b.size,
        _ => points,
    }
}

/// Reachable outputs of `model` on `domain` (the model's domain or an
/// extension of it). Exact when the domain can be enumerated within `budget`,
/// otherwise a symbolic bound when the model kind provides one.
pub fn range_of(model: &Model, domain: &DiscreteDomain, budget: u64) -> Result<RangeInfo> {
    if domain.dims() != model.domain().dims() {
        return Err(Error::DomainMismatch(format!(
            "domain {domain} does not match model domain {}",
            model.domain()
        )));
    }
    match domain.enumerate(budget) {
        Ok(points) => {
            let mut set = BTreeSet::new();
            for p in points {
                set.insert(model.eval(&p)?);
            }
            Ok(RangeInfo::Exact(set))
        }
        Err(err @ Error::BudgetExceeded { .. }) => {
            model.range_bound().map(RangeInfo::Bounded).ok_or(err)
        }
        Err(other) => Err(other),
    }
}
