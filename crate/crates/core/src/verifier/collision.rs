//! Collision search: two distinct points with the same output.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_dims;
use crate::domain::{DiscreteDomain, Point};
use crate::error::Result;
use crate::model::Model;
use crate::value::OutputValue;

/// Looks for `a != b` with `eval(a) == eval(b)` on `domain`, which may be an
/// extension of the model's domain.
///
/// Domains with at most `budget` points are scanned exhaustively and the
/// lexicographically least pair is returned. Larger domains are probed with
/// `budget` uniformly random points drawn from a ChaCha stream keyed by `seed`;
/// the first repeat value found is returned, ordered `(min, max)`.
pub fn find_collision(
    model: &Model,
    domain: &DiscreteDomain,
    budget: u64,
    seed: u64,
) -> Result<Option<(Point, Point)>> {
    check_dims(model.domain(), domain)?;
    match domain.cardinality_u64() {
        Some(n) if n <= budget => exhaustive(model, domain, budget),
        _ => probe(model, domain, budget, seed),
    }
}

fn exhaustive(model: &Model, domain: &DiscreteDomain, budget: u64) -> Result<Option<(Point, Point)>> {
    // first two points of every fiber, in enumeration order
    let mut firsts: HashMap<OutputValue, (Point, Option<Point>)> = HashMap::new();
    for p in domain.enumerate(budget)? {
        let v = model.eval(&p)?;
        firsts
            .entry(v)
            .and_modify(|(_, second)| {
                if second.is_none() {
                    *second = Some(p.clone());
                }
            })
            .or_insert((p, None));
    }
    Ok(firsts
        .into_values()
        .filter_map(|(a, b)| b.map(|b| (a, b)))
        .min())
}

fn probe(model: &Model, domain: &DiscreteDomain, samples: u64, seed: u64) -> Result<Option<(Point, Point)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashMap<OutputValue, Point> = HashMap::new();
    for _ in 0..samples {
        let p = Point::new(domain.scales().iter().map(|&s| rng.random_range(0..s)).collect());
        let v = model.eval(&p)?;
        match seen.get(&v) {
            Some(q) if *q != p => {
                let pair = if *q < p { (q.clone(), p) } else { (p, q.clone()) };
                return Ok(Some(pair));
            }
            Some(_) => {}
            None => {
                seen.insert(v, p);
            }
        }
    }
    Ok(None)
}

/// Re-evaluates a claimed collision. Returns the shared value when the pair is
/// a genuine collision.
pub fn verify_collision(model: &Model, a: &Point, b: &Point) -> Result<Option<OutputValue>> {
    if a == b {
        return Ok(None);
    }
    let va = model.eval(a)?;
    let vb = model.eval(b)?;
    Ok((va == vb).then_some(va))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn zero() -> BigRational {
        BigRational::from_integer(0.into())
    }

    #[test]
    fn sum_of_coordinates_collides() {
        let d = DiscreteDomain::new(vec![2, 2]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 1]), zero()).unwrap();
        assert_eq!(
            find_collision(&m, &d, 100, 0).unwrap(),
            Some(([0, 1].into(), [1, 0].into()))
        );
    }

    #[test]
    fn doubling_has_no_collision() {
        let d = DiscreteDomain::new(vec![10]).unwrap();
        let m = Model::affine(d.clone(), ints(&[2]), zero()).unwrap();
        assert_eq!(find_collision(&m, &d, 100, 0).unwrap(), None);
    }

    #[test]
    fn table_defaults_collide_at_least_pair() {
        let d = DiscreteDomain::new(vec![5]).unwrap();
        let m = Model::table(
            d.clone(),
            [([0].into(), OutputValue::int(1)), ([2].into(), OutputValue::int(2))],
            OutputValue::null(),
        )
        .unwrap();
        assert_eq!(find_collision(&m, &d, 100, 0).unwrap(), Some(([1].into(), [3].into())));
    }

    #[test]
    fn least_pair_minimises_first_point() {
        // values: 0->a 1->b 2->b 3->a ; least pair is (0,3), not (1,2)
        let d = DiscreteDomain::new(vec![4]).unwrap();
        let m = Model::table(
            d.clone(),
            [
                ([0].into(), OutputValue::atom("a")),
                ([1].into(), OutputValue::atom("b")),
                ([2].into(), OutputValue::atom("b")),
                ([3].into(), OutputValue::atom("a")),
            ],
            OutputValue::null(),
        )
        .unwrap();
        assert_eq!(find_collision(&m, &d, 100, 0).unwrap(), Some(([0].into(), [3].into())));
    }

    #[test]
    fn probing_is_seeded_and_sound() {
        let d = DiscreteDomain::new(vec![1000, 1000, 1000]).unwrap();
        let m = Model::affine(d.clone(), ints(&[1, 1, 1]), zero()).unwrap();
        let a = find_collision(&m, &d, 5000, 7).unwrap();
        let b = find_collision(&m, &d, 5000, 7).unwrap();
        assert_eq!(a, b);
        let (p, q) = a.expect("range 2998 is far below 5000 samples");
        assert!(p < q);
        assert!(verify_collision(&m, &p, &q).unwrap().is_some());
    }

    #[test]
    fn verify_rejects_identical_points() {
        let d = DiscreteDomain::new(vec![3]).unwrap();
        let m = Model::table(d, [], OutputValue::null()).unwrap();
        assert_eq!(verify_collision(&m, &[1].into(), &[1].into()).unwrap(), None);
        assert_eq!(verify_collision(&m, &[1].into(), &[2].into()).unwrap(), Some(OutputValue::null()));
    }
}
