//! Separation and merge of information generators.
//!
//! Splitting a subset in two and computing generators on each part is the
//! separation view; computing them on the union is the merge view. A merged
//! generator is a fiber of the union that draws points from both parts, i.e.
//! one representation the parts would have treated as two.

use std::collections::BTreeSet;

use crate::domain::Point;
use crate::error::{Error, Result};
use crate::generator::{fibers, InformationGenerator};
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMergeReport {
    pub part1: Vec<InformationGenerator>,
    pub part2: Vec<InformationGenerator>,
    pub union: Vec<InformationGenerator>,
    pub merged: Vec<InformationGenerator>,
}

pub fn split_experiment(
    model: &Model,
    subset: &BTreeSet<Point>,
    part1: &BTreeSet<Point>,
    part2: &BTreeSet<Point>,
) -> Result<SplitMergeReport> {
    if let Some(p) = part1.intersection(part2).next() {
        return Err(Error::InvalidPartition(format!("{p} lies in both parts")));
    }
    let joined: BTreeSet<Point> = part1.union(part2).cloned().collect();
    if &joined != subset {
        return Err(Error::InvalidPartition(format!(
            "parts cover {} points, subset has {}",
            joined.len(),
            subset.len()
        )));
    }
    let g1 = fibers(model, part1)?;
    let g2 = fibers(model, part2)?;
    let union = fibers(model, subset)?;
    let merged = union
        .iter()
        .filter(|g| !g.fiber.is_disjoint(part1) && !g.fiber.is_disjoint(part2))
        .cloned()
        .collect();
    Ok(SplitMergeReport { part1: g1, part2: g2, union, merged })
}
