//! Compiling a model into a lookup table that stores its graph.

use crate::domain::{DiscreteDomain, Point};
use crate::error::Result;
use crate::model::Model;
use crate::value::OutputValue;

/// Outcome of the point-by-point comparison between a model and its table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceRecord {
    pub points_checked: u64,
    pub agreements: u64,
    pub distinct_values: usize,
    pub first_disagreement: Option<Point>,
}

impl EquivalenceRecord {
    pub fn is_equivalent(&self) -> bool {
        self.points_checked == self.agreements
    }
}

/// Tabulates `model` on every point of `domain` (default `NULL`) and checks
/// the table against the model everywhere on the domain.
pub fn compile_memory(model: &Model, domain: &DiscreteDomain, budget: u64) -> Result<(Model, EquivalenceRecord)> {
    let mut entries = Vec::new();
    for p in domain.enumerate(budget)? {
        let v = model.eval(&p)?;
        entries.push((p, v));
    }
    let table = Model::table(domain.clone(), entries, OutputValue::null())?;

    let mut record = EquivalenceRecord {
        points_checked: 0,
        agreements: 0,
        distinct_values: 0,
        first_disagreement: None,
    };
    let mut values = std::collections::BTreeSet::new();
    for p in domain.enumerate(budget)? {
        let original = model.eval(&p)?;
        let stored = table.eval(&p)?;
        record.points_checked += 1;
        if original == stored {
            record.agreements += 1;
        } else if record.first_disagreement.is_none() {
            record.first_disagreement = Some(p);
        }
        values.insert(stored);
    }
    record.distinct_values = values.len();
    Ok((table, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind;
    use crate::verifier::{check_s_star, StarOptions, StarVerdict};
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn base_three_encoder_compiles_to_nine_entries() {
        let d = DiscreteDomain::new(vec![3, 3]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 3]), BigRational::from_integer(0.into())).unwrap();
        let (table, record) = compile_memory(&m, &d, 100).unwrap();
        match table.kind() {
            ModelKind::Table(t) => {
                assert_eq!(t.entries.len(), 9);
                assert!(t.default.is_null());
            }
            _ => panic!("expected a table"),
        }
        assert!(record.is_equivalent());
        assert_eq!(record.points_checked, 9);
        assert_eq!(record.distinct_values, 9);

        for dim in 0..2 {
            let e = check_s_star(&table, &d, dim, &StarOptions::default()).unwrap();
            assert_eq!(e.verdict, StarVerdict::Fail);
            assert_eq!(e.certificate.name(), "pigeonhole");
        }
    }

    #[test]
    fn constant_model() {
        let d = DiscreteDomain::new(vec![4, 2]).unwrap();
        let m = Model::table(d.clone(), [], OutputValue::atom("x")).unwrap();
        let (_, record) = compile_memory(&m, &d, 100).unwrap();
        assert!(record.is_equivalent());
        assert_eq!(record.distinct_values, 1);
    }

    #[test]
    fn budget() {
        let d = DiscreteDomain::new(vec![100, 100]).unwrap();
        let m = Model::oracle_injective(d.clone());
        assert!(compile_memory(&m, &d, 1000).is_err());
    }
}
