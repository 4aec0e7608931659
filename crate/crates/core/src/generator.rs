//! Information generators: the preimage classes a model induces on a subset of
//! its domain, each paired with the single value all of its points map to.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::Point;
use crate::error::Result;
use crate::model::Model;
use crate::value::OutputValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationGenerator {
    pub representation: OutputValue,
    pub fiber: BTreeSet<Point>,
    /// One representation shared by at least two appearances.
    pub invariant: bool,
}

/// Partitions `subset` by output value. Generators come back sorted by
/// representation. Every point must belong to the model's own domain.
pub fn fibers<'a>(
    model: &Model,
    subset: impl IntoIterator<Item = &'a Point>,
) -> Result<Vec<InformationGenerator>> {
    let mut classes: BTreeMap<OutputValue, BTreeSet<Point>> = BTreeMap::new();
    for p in subset {
        model.domain().check_point(p)?;
        classes.entry(model.eval(p)?).or_default().insert(p.clone());
    }
    Ok(classes
        .into_iter()
        .map(|(representation, fiber)| InformationGenerator {
            invariant: fiber.len() >= 2,
            representation,
            fiber,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DiscreteDomain;
    use crate::error::Error;
    use num_rational::BigRational;

    fn pts(xs: &[u64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::new(vec![x])).collect()
    }

    #[test]
    fn parity_model_has_two_invariant_generators() {
        let d = DiscreteDomain::new(vec![4]).unwrap();
        let m = Model::table(
            d,
            (0..4).map(|x| (Point::new(vec![x]), OutputValue::int(x % 2))),
            OutputValue::null(),
        )
        .unwrap();
        let subset = pts(&[0, 1, 2, 3]);
        let gens = fibers(&m, &subset).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].representation, OutputValue::int(0));
        assert_eq!(gens[0].fiber, pts(&[0, 2]).into_iter().collect());
        assert!(gens[0].invariant);
        assert_eq!(gens[1].fiber, pts(&[1, 3]).into_iter().collect());
        assert!(gens[1].invariant);
    }

    #[test]
    fn injective_model_has_singleton_generators() {
        let d = DiscreteDomain::new(vec![3]).unwrap();
        let m = Model::affine(d, vec![BigRational::from_integer(2.into())], BigRational::from_integer(0.into()))
            .unwrap();
        let subset = pts(&[0, 1, 2]);
        let gens = fibers(&m, &subset).unwrap();
        let reps: Vec<_> = gens.iter().map(|g| g.representation.clone()).collect();
        assert_eq!(reps, vec![OutputValue::int(0), OutputValue::int(2), OutputValue::int(4)]);
        assert!(gens.iter().all(|g| g.fiber.len() == 1 && !g.invariant));
    }

    #[test]
    fn empty_subset_and_mismatch() {
        let d = DiscreteDomain::new(vec![3]).unwrap();
        let m = Model::oracle_injective(d);
        assert!(fibers(&m, &[]).unwrap().is_empty());
        assert!(matches!(fibers(&m, &pts(&[3])), Err(Error::DomainMismatch(_))));
        assert!(matches!(fibers(&m, &[Point::new(vec![0, 0])]), Err(Error::DomainMismatch(_))));
    }
}
