//! The noncontainment reading over non-empty proper subsets holds exactly when
//! the model is injective on the domain:
//!
//! * injective: for any seen `X_S` pick one unseen point `p`; `{F(p)}` and
//!   `F(X_S)` are disjoint and both non-empty;
//! * collision `F(a) = F(b)`, `a != b`: the seen set `D \ {a}` leaves only
//!   `X_N = {a}`, whose image is already contained in the seen image.
//!
//! So the check reduces to a collision search.

use num_traits::ToPrimitive;

use super::{
    check_dims, find_collision, find_kernel_vector, CheckStats, ConditionReport, Method, Reading,
    SubsetPolicy, SubsetWitness, Verdict,
};
use crate::domain::{DiscreteDomain, Point};
use crate::error::{Error, Result};
use crate::model::{integer_weights, Model, ModelKind, TableModel};

/// Decides the noncontainment condition over non-empty proper subsets.
///
/// Domains of at most `budget` points are scanned exhaustively and a failure
/// carries the lexicographically least collision `(a, b)` with the failing
/// seen subset `D \ {a}`. Larger domains are handled symbolically for the
/// pairing oracle, affine maps (bounded kernel search) and tables.
pub fn check_s_fast(model: &Model, domain: &DiscreteDomain, budget: u64) -> Result<ConditionReport> {
    check_dims(model.domain(), domain)?;
    let mut stats = CheckStats::default();
    let collision = match domain.cardinality_u64() {
        Some(n) if n <= budget => {
            stats.evaluations = n;
            find_collision(model, domain, budget, 0)?
        }
        _ => symbolic_collision(model, domain, budget, &mut stats)?,
    };
    let (verdict, failing_subset) = match &collision {
        Some((a, _)) => (Verdict::Fail, Some(SubsetWitness::AllBut(a.clone()))),
        None => (Verdict::Pass, None),
    };
    Ok(ConditionReport {
        verdict,
        reading: Reading::Noncontainment,
        policy: SubsetPolicy::NonemptyProper,
        method: Method::Fast,
        failing_subset,
        collision,
        stats,
    })
}

fn symbolic_collision(
    model: &Model,
    domain: &DiscreteDomain,
    budget: u64,
    stats: &mut CheckStats,
) -> Result<Option<(Point, Point)>> {
    match model.kind() {
        ModelKind::OracleInjective => Ok(None),
        ModelKind::Affine(a) if a.is_constant() => {
            let mut pts = domain.lex_points();
            Ok(pts.next().zip(pts.next()))
        }
        ModelKind::Affine(a) => {
            let weights = integer_weights(&a.weights);
            let scales = domain.scales();
            let solved = (0..scales.len())
                .filter(|&i| weights[i] != 0.into())
                .max_by_key(|&i| (scales[i], std::cmp::Reverse(i)))
                .expect("non-constant map has a non-zero weight");
            match find_kernel_vector(&weights, scales, solved, Some(scales[solved]), budget)? {
                Some(k) => {
                    stats.candidates_examined = k.examined;
                    let (a, b) = k.points().expect("bounded differences fit the grid");
                    Ok(Some(if a < b { (a, b) } else { (b, a) }))
                }
                None => Ok(None),
            }
        }
        ModelKind::Table(t) => table_collision(t, domain, budget, stats),
        _ => Err(Error::Undecidable(format!(
            "{} model on {domain} exceeds the enumeration budget {budget}",
            model.kind_name()
        ))),
    }
}

/// Least collision of a table on a large grid. Every point outside the first
/// `|entries| + 2` reads the default, so the least colliding point lies in
/// that prefix.
fn table_collision(
    t: &TableModel,
    domain: &DiscreteDomain,
    budget: u64,
    stats: &mut CheckStats,
) -> Result<Option<(Point, Point)>> {
    let prefix_len = t.entries.len() as u64 + 2;
    if prefix_len > budget {
        return Err(Error::BudgetExceeded {
            what: "table prefix scan",
            needed: prefix_len.into(),
            budget,
        });
    }
    let prefix: Vec<Point> = domain.lex_points().take(prefix_len as usize).collect();
    stats.evaluations = prefix.len() as u64;
    let non_entry_count = domain.cardinality() - t.entries.len();
    let default_is_shared = non_entry_count >= 2u32.into();
    for p in &prefix {
        let value = t.entries.get(p).unwrap_or(&t.default);
        let entry_partner = t
            .entries
            .iter()
            .find(|(q, v)| *q != p && *v == value)
            .map(|(q, _)| q.clone());
        let default_partner = (value == &t.default && (default_is_shared || t.entries.contains_key(p)))
            .then(|| {
                prefix
                    .iter()
                    .find(|q| *q != p && !t.entries.contains_key(*q))
                    .cloned()
            })
            .flatten();
        let partner = match (entry_partner, default_partner) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        if let Some(q) = partner {
            return Ok(Some((p.clone(), q)));
        }
    }
    debug_assert!(non_entry_count.to_u64().is_some_and(|n| n < 2));
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::OutputValue;
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn zero() -> BigRational {
        BigRational::from_integer(0.into())
    }

    #[test]
    fn base_three_encoder_passes() {
        let d = DiscreteDomain::new(vec![3, 3]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 3]), zero()).unwrap();
        let r = check_s_fast(&m, &d, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.stats.evaluations, 9);
    }

    #[test]
    fn coordinate_sum_fails_with_least_pair() {
        let d = DiscreteDomain::new(vec![2, 2]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 1]), zero()).unwrap();
        let r = check_s_fast(&m, &d, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.collision, Some(([0, 1].into(), [1, 0].into())));
        assert_eq!(r.failing_subset, Some(SubsetWitness::AllBut([0, 1].into())));
    }

    #[test]
    fn table_defaults_fail() {
        let d = DiscreteDomain::new(vec![5]).unwrap();
        let m = Model::table(d.clone(), [([0].into(), OutputValue::int(10))], OutputValue::int(0)).unwrap();
        let r = check_s_fast(&m, &d, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.failing_subset, Some(SubsetWitness::AllBut([1].into())));
    }

    #[test]
    fn symbolic_table_matches_exhaustive() {
        let d = DiscreteDomain::new(vec![6, 5]).unwrap();
        let tables = [
            vec![([0, 0], 1), ([0, 1], 2), ([0, 2], 3)],
            vec![([0, 0], 7), ([3, 3], 7)],
            vec![([0, 0], 0), ([0, 1], 1)],
            vec![([0, 3], 0)],
            vec![],
        ];
        for entries in tables {
            let m = Model::table(
                d.clone(),
                entries.iter().map(|&(p, v)| (Point::from(p), OutputValue::int(v))),
                OutputValue::int(0),
            )
            .unwrap();
            let exhaustive = check_s_fast(&m, &d, 1000).unwrap();
            let symbolic = check_s_fast(&m, &d, 10).unwrap();
            assert_eq!(exhaustive.collision, symbolic.collision, "entries {entries:?}");
        }
    }

    #[test]
    fn symbolic_affine_on_huge_domain() {
        // mixed-radix encoder: injective
        let d = DiscreteDomain::new(vec![1 << 20, 4, 5]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 1 << 20, 1 << 22]), zero()).unwrap();
        assert_eq!(check_s_fast(&m, &d, 1_000_000).unwrap().verdict, Verdict::Pass);

        let m = Model::affine(d.clone(), ints(&[1, 3, 0]), zero()).unwrap();
        let r = check_s_fast(&m, &d, 1_000_000).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let (a, b) = r.collision.unwrap();
        assert_eq!(m.eval(&a).unwrap(), m.eval(&b).unwrap());
        assert!(d.contains(&a) && d.contains(&b));
    }

    #[test]
    fn oracle_passes_symbolically() {
        let d = DiscreteDomain::new(vec![256; 50]).unwrap();
        let m = Model::oracle_injective(d.clone());
        assert_eq!(check_s_fast(&m, &d, 1000).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn classifier_on_huge_domain_is_undecidable_here() {
        let d = DiscreteDomain::new(vec![256; 50]).unwrap();
        let ind = crate::model::Indicator {
            name: "a".into(),
            anchor: Point::new(vec![0; 50]),
            slope: BigRational::new(1.into(), 2.into()),
        };
        let m = Model::classifier(d.clone(), vec![ind], 2).unwrap();
        assert!(matches!(check_s_fast(&m, &d, 1000), Err(Error::Undecidable(_))));
    }
}
