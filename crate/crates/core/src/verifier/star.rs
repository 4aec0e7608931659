//! Per-dimension growth check.
//!
//! Growing one dimension without bound is approximated by a finite schedule of
//! larger scales. Verdicts are three-valued and always carry a certificate:
//!
//! 1. pigeonhole: the model's output count is bounded by `B` on every
//!    extension, and some scheduled extension has more than `B` points;
//! 2. symbolic: affine maps are decided by a kernel search whose grown axis is
//!    left unbounded, and the pairing oracle is injective on every grid;
//! 3. collision search on each scheduled extension;
//! 4. otherwise unknown.
//!
//! A pass is only ever reported from step 2.

use std::fmt;

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_dims, find_collision, find_kernel_vector, verify_collision};
use crate::domain::{DiscreteDomain, Point};
use crate::error::{Error, Result};
use crate::model::{integer_weights, Model, ModelKind};
use crate::value::OutputValue;

/// Number of scales in the default schedule.
pub const DEFAULT_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarOptions {
    /// Explicit scales for the grown dimension; `None` uses
    /// [`default_schedule`] per dimension.
    pub schedule: Option<Vec<u64>>,
    /// Random probes per scheduled extension in the collision search.
    pub sample_budget: u64,
    pub seed: u64,
    /// Extensions up to this many points are scanned exhaustively when a
    /// pigeonhole witness is confirmed.
    pub enum_budget: u64,
    /// Off-axis difference vectors the affine kernel search may visit.
    pub lattice_budget: u64,
}

impl Default for StarOptions {
    fn default() -> Self {
        Self {
            schedule: None,
            sample_budget: 100_000,
            seed: 0,
            enum_budget: 1_000_000,
            lattice_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarVerdict {
    Pass,
    Fail,
    Unknown,
}

impl StarVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StarVerdict::Pass => "pass",
            StarVerdict::Fail => "fail",
            StarVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Pigeonhole {
        bound: BigUint,
        justification: String,
        extension_scale: u64,
        extension_cardinality: BigUint,
        /// A concrete collision on the flagged extension, when one was found.
        witness: Option<(Point, Point, OutputValue)>,
    },
    SymbolicInjective {
        reason: String,
    },
    CollisionWitness {
        a: Point,
        b: Point,
        value: OutputValue,
        /// Scale of the grown dimension on which both points exist.
        extension_scale: u64,
    },
    SamplingExhausted {
        samples: u64,
        extensions: usize,
    },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::Pigeonhole { .. } => "pigeonhole",
            Certificate::SymbolicInjective { .. } => "symbolic-injective",
            Certificate::CollisionWitness { .. } => "collision-witness",
            Certificate::SamplingExhausted { .. } => "sampling-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarEntry {
    pub dim: usize,
    pub verdict: StarVerdict,
    pub certificate: Certificate,
    pub schedule: Vec<u64>,
}

impl fmt::Display for StarEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = self.verdict.as_str().to_uppercase();
        write!(f, "dim {}: {verdict} (", self.dim)?;
        match &self.certificate {
            Certificate::Pigeonhole { bound, extension_cardinality, .. } => {
                write!(f, "pigeonhole: range<={bound} < extension {extension_cardinality}")?
            }
            Certificate::SymbolicInjective { .. } => write!(f, "symbolic-injective")?,
            Certificate::CollisionWitness { a, b, value, .. } => {
                write!(f, "collision-witness {a} ~ {b} -> {value}")?
            }
            Certificate::SamplingExhausted { .. } => write!(f, "sampling-exhausted")?,
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Overall {
    CompleteLearning,
    NonLearning,
    Undetermined,
}

impl Overall {
    pub fn as_str(self) -> &'static str {
        match self {
            Overall::CompleteLearning => "complete-learning",
            Overall::NonLearning => "non-learning",
            Overall::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub entries: Vec<StarEntry>,
    pub overall: Overall,
}

/// Powers of two above `scale`: the first one strictly greater, then
/// [`DEFAULT_STEPS`] - 1 doublings.
pub fn default_schedule(scale: u64) -> Vec<u64> {
    let first = scale.checked_add(1).and_then(u64::checked_next_power_of_two);
    std::iter::successors(first, |s| s.checked_mul(2))
        .take(DEFAULT_STEPS)
        .collect()
}

fn validate_schedule(schedule: &[u64], current: u64) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule(format!(
            "{schedule:?} is not strictly increasing"
        )));
    }
    if schedule[0] < current {
        return Err(Error::InvalidSchedule(format!(
            "first scale {} is below the current scale {current}",
            schedule[0]
        )));
    }
    Ok(())
}

/// Seed for the collision search on one scheduled extension, drawn from a
/// ChaCha stream keyed by the user seed and selected by `(dim, step)`.
fn step_seed(seed: u64, dim: usize, step: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 32) | step as u64);
    rng.next_u64()
}

/// Checks growth of dimension `dim` of `domain`.
pub fn check_s_star(
    model: &Model,
    domain: &DiscreteDomain,
    dim: usize,
    opts: &StarOptions,
) -> Result<StarEntry> {
    check_dims(model.domain(), domain)?;
    let current = domain.scale(dim)?;
    let schedule = opts.schedule.clone().unwrap_or_else(|| default_schedule(current));
    validate_schedule(&schedule, current)?;
    let entry = |verdict, certificate| StarEntry {
        dim,
        verdict,
        certificate,
        schedule: schedule.clone(),
    };

    if let Some(bound) = model.range_bound() {
        for (step, &scale) in schedule.iter().enumerate() {
            let ext = domain.extend(dim, scale)?;
            let card = ext.cardinality();
            if card > bound.size {
                let budget = if card <= opts.enum_budget.into() {
                    opts.enum_budget
                } else {
                    opts.sample_budget
                };
                let witness = match find_collision(model, &ext, budget, step_seed(opts.seed, dim, step))? {
                    Some((a, b)) => {
                        let value = verify_collision(model, &a, &b)?
                            .expect("collision search returns verified pairs");
                        Some((a, b, value))
                    }
                    None => None,
                };
                return Ok(entry(
                    StarVerdict::Fail,
                    Certificate::Pigeonhole {
                        bound: bound.size,
                        justification: bound.justification,
                        extension_scale: scale,
                        extension_cardinality: card,
                        witness,
                    },
                ));
            }
        }
    }

    match model.kind() {
        ModelKind::OracleInjective => {
            return Ok(entry(
                StarVerdict::Pass,
                Certificate::SymbolicInjective {
                    reason: "iterated Cantor pairing is injective on every grid".into(),
                },
            ))
        }
        ModelKind::Affine(a) => {
            let weights = integer_weights(&a.weights);
            match find_kernel_vector(&weights, domain.scales(), dim, None, opts.lattice_budget) {
                Ok(Some(k)) => {
                    let (a, b) = k
                        .points()
                        .ok_or_else(|| Error::Undecidable("kernel witness exceeds u64 coordinates".into()))?;
                    let value = verify_collision(model, &a, &b)?
                        .expect("kernel vectors yield collisions");
                    let extension_scale = current.max(a.coords()[dim] + 1);
                    return Ok(entry(
                        StarVerdict::Fail,
                        Certificate::CollisionWitness { a, b, value, extension_scale },
                    ));
                }
                Ok(None) => {
                    return Ok(entry(
                        StarVerdict::Pass,
                        Certificate::SymbolicInjective {
                            reason: format!(
                                "no non-zero integer kernel vector with bounded off-axis differences ({} examined)",
                                off_axis_count(domain, dim)
                            ),
                        },
                    ))
                }
                Err(Error::BudgetExceeded { .. }) => {}
                Err(other) => return Err(other),
            }
        }
        _ => {}
    }

    for (step, &scale) in schedule.iter().enumerate() {
        let ext = domain.extend(dim, scale)?;
        if let Some((a, b)) = find_collision(model, &ext, opts.sample_budget, step_seed(opts.seed, dim, step))? {
            let value = verify_collision(model, &a, &b)?.expect("collision search returns verified pairs");
            return Ok(entry(
                StarVerdict::Fail,
                Certificate::CollisionWitness { a, b, value, extension_scale: scale },
            ));
        }
    }

    Ok(entry(
        StarVerdict::Unknown,
        Certificate::SamplingExhausted {
            samples: opts.sample_budget.saturating_mul(schedule.len() as u64),
            extensions: schedule.len(),
        },
    ))
}

fn off_axis_count(domain: &DiscreteDomain, dim: usize) -> BigUint {
    domain
        .scales()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dim)
        .fold(BigUint::from(1u32), |acc, (_, &s)| acc * BigUint::from(2 * s - 1))
}

/// Runs [`check_s_star`] on every dimension and combines the verdicts: any
/// failure makes the model non-learning, all passes make it complete-learning.
pub fn classify(model: &Model, domain: &DiscreteDomain, opts: &StarOptions) -> Result<StarReport> {
    let card = domain.cardinality();
    if card < BigUint::from(2u32) {
        return Err(Error::DegenerateDomain(card));
    }
    let entries = (0..domain.dims())
        .map(|dim| check_s_star(model, domain, dim, opts))
        .collect::<Result<Vec<_>>>()?;
    let overall = if entries.iter().any(|e| e.verdict == StarVerdict::Fail) {
        Overall::NonLearning
    } else if entries.iter().all(|e| e.verdict == StarVerdict::Pass) {
        Overall::CompleteLearning
    } else {
        Overall::Undetermined
    };
    Ok(StarReport { entries, overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Indicator;
    use num_rational::BigRational;

    fn dom(s: &[u64]) -> DiscreteDomain {
        DiscreteDomain::new(s.to_vec()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn zero() -> BigRational {
        BigRational::from_integer(0.into())
    }

    #[test]
    fn schedule_defaults() {
        assert_eq!(default_schedule(3), vec![4, 8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(default_schedule(10)[..2], [16, 32]);
        assert_eq!(default_schedule(4)[0], 8);
        assert_eq!(default_schedule(1)[0], 2);
        assert!(default_schedule(u64::MAX).is_empty());
    }

    #[test]
    fn schedule_validation() {
        let d = dom(&[3, 3]);
        let m = Model::oracle_injective(d.clone());
        let with = |s: Vec<u64>| StarOptions { schedule: Some(s), ..StarOptions::default() };
        assert!(matches!(check_s_star(&m, &d, 0, &with(vec![])), Err(Error::EmptySchedule)));
        assert!(matches!(check_s_star(&m, &d, 0, &with(vec![8, 4])), Err(Error::InvalidSchedule(_))));
        assert!(matches!(check_s_star(&m, &d, 0, &with(vec![2, 4])), Err(Error::InvalidSchedule(_))));
        assert!(matches!(
            check_s_star(&m, &d, 2, &StarOptions::default()),
            Err(Error::InvalidDimension { dim: 2, dims: 2 })
        ));
    }

    #[test]
    fn base_three_encoder_per_dimension() {
        let d = dom(&[3, 3]);
        let m = Model::affine(d.clone(), ints(&[1, 3]), zero()).unwrap();
        let opts = StarOptions::default();
        let e0 = check_s_star(&m, &d, 0, &opts).unwrap();
        assert_eq!(e0.verdict, StarVerdict::Fail);
        assert_eq!(
            e0.certificate,
            Certificate::CollisionWitness {
                a: [3, 0].into(),
                b: [0, 1].into(),
                value: OutputValue::int(3),
                extension_scale: 4,
            }
        );
        assert_eq!(e0.to_string(), "dim 0: FAIL (collision-witness (3,0) ~ (0,1) -> 3)");
        let e1 = check_s_star(&m, &d, 1, &opts).unwrap();
        assert_eq!(e1.verdict, StarVerdict::Pass);
        assert_eq!(e1.to_string(), "dim 1: PASS (symbolic-injective)");
        assert_eq!(classify(&m, &d, &opts).unwrap().overall, Overall::NonLearning);
    }

    #[test]
    fn doubling_is_complete_learning() {
        let d = dom(&[10]);
        let m = Model::affine(d.clone(), ints(&[2]), zero()).unwrap();
        let r = classify(&m, &d, &StarOptions::default()).unwrap();
        assert_eq!(r.overall, Overall::CompleteLearning);
        assert_eq!(r.entries[0].certificate.name(), "symbolic-injective");
    }

    #[test]
    fn classifier_fails_by_pigeonhole() {
        let d = dom(&[10, 10]);
        let inds = vec![
            Indicator { name: "human".into(), anchor: [0, 0].into(), slope: BigRational::new(1.into(), 20.into()) },
            Indicator { name: "cat".into(), anchor: [9, 9].into(), slope: BigRational::new(1.into(), 20.into()) },
        ];
        let m = Model::classifier(d.clone(), inds, 100).unwrap();
        let r = classify(&m, &d, &StarOptions::default()).unwrap();
        assert_eq!(r.overall, Overall::NonLearning);
        for e in &r.entries {
            match &e.certificate {
                Certificate::Pigeonhole { bound, extension_scale, extension_cardinality, witness, .. } => {
                    assert_eq!(*bound, BigUint::from(202u32));
                    assert_eq!(*extension_scale, 32);
                    assert_eq!(*extension_cardinality, BigUint::from(320u32));
                    let (a, b, v) = witness.as_ref().expect("320 points are enumerated");
                    assert_eq!(m.eval(a).unwrap(), *v);
                    assert_eq!(m.eval(b).unwrap(), *v);
                }
                other => panic!("expected pigeonhole, got {other:?}"),
            }
        }
        assert_eq!(r.entries[1].to_string(), "dim 1: FAIL (pigeonhole: range<=202 < extension 320)");
    }

    #[test]
    fn table_is_non_learning() {
        let d = dom(&[5]);
        let m = Model::table(d.clone(), [([0].into(), OutputValue::int(10)), ([1].into(), OutputValue::int(20))], OutputValue::null())
            .unwrap();
        assert_eq!(classify(&m, &d, &StarOptions::default()).unwrap().overall, Overall::NonLearning);
    }

    #[test]
    fn degenerate_domain_is_rejected() {
        let d = dom(&[1]);
        let m = Model::oracle_injective(d.clone());
        assert!(matches!(classify(&m, &d, &StarOptions::default()), Err(Error::DegenerateDomain(_))));
    }

    #[test]
    fn oversized_affine_falls_back_to_sampling() {
        let d = dom(&[1000, 1000, 1000]);
        let opts = StarOptions { lattice_budget: 10, sample_budget: 2000, ..StarOptions::default() };
        let colliding = Model::affine(d.clone(), ints(&[1, 1, 1]), zero()).unwrap();
        let e = check_s_star(&colliding, &d, 0, &opts).unwrap();
        assert_eq!(e.verdict, StarVerdict::Fail);
        assert_eq!(e.certificate.name(), "collision-witness");

        let injective = Model::affine(d.clone(), ints(&[1, 1 << 20, 1 << 40]), zero()).unwrap();
        let opts = StarOptions { lattice_budget: 10, sample_budget: 200, ..StarOptions::default() };
        let e = check_s_star(&injective, &d, 0, &opts).unwrap();
        assert_eq!(e.verdict, StarVerdict::Unknown);
        assert_eq!(
            e.certificate,
            Certificate::SamplingExhausted { samples: 1600, extensions: 8 }
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let d = dom(&[1000, 1000, 1000]);
        let m = Model::affine(d.clone(), ints(&[1, 1, 1]), zero()).unwrap();
        let opts = StarOptions { lattice_budget: 10, sample_budget: 2000, seed: 42, ..StarOptions::default() };
        assert_eq!(classify(&m, &d, &opts).unwrap(), classify(&m, &d, &opts).unwrap());
    }
}
