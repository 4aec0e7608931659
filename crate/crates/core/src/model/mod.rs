//! Model adapters behind one pure evaluation interface.
//!
//! Every [`Model`] is total on its domain and on any extension of it: the
//! evaluator only requires the point to have the right number of coordinates.
//! How each kind behaves on points outside the original grid:
//!
//! * table: entries are fixed, new points read the default;
//! * affine, classifier, oracle-injective: the same formula on the larger grid;
//! * piecewise, restricted: regions are fixed, new points fall outside them.

mod range;

pub use range::{range_of, RangeBound, RangeInfo};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::domain::{DiscreteDomain, Point, Region};
use crate::error::{Error, Result};
use crate::value::OutputValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    domain: DiscreteDomain,
    kind: ModelKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind {
    Table(TableModel),
    Affine(AffineModel),
    Classifier(ClassifierModel),
    Piecewise(PiecewiseModel),
    Restricted(RestrictedModel),
    /// Bijective pairing of grid points onto the naturals.
    OracleInjective,
}

/// Finite lookup table with a default for unmatched points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableModel {
    pub entries: BTreeMap<Point, OutputValue>,
    pub default: OutputValue,
}

/// `sum(w_i * x_i) + bias`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineModel {
    pub weights: Vec<BigRational>,
    pub bias: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicator {
    pub name: String,
    pub anchor: Point,
    pub slope: BigRational,
}

/// Scores every indicator as `1 - slope * |x - anchor|_1`, clamps to `[0, 1]`,
/// rounds the best score to the grid `k/q` and reports it with the winning
/// indicator. Ties go to the earliest indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierModel {
    pub indicators: Vec<Indicator>,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseModel {
    pub pieces: Vec<(Region, Model)>,
    pub fallback: OutputValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedModel {
    pub region: Region,
    pub inner: Box<Model>,
    pub outside: OutputValue,
}

impl Model {
    pub fn table(
        domain: DiscreteDomain,
        entries: impl IntoIterator<Item = (Point, OutputValue)>,
        default: OutputValue,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (point, value) in entries {
            if !domain.contains(&point) {
                return Err(Error::InvalidEntry(format!(
                    "entry point {point} lies outside domain {domain}"
                )));
            }
            if let Some(prev) = map.get(&point) {
                if prev != &value {
                    return Err(Error::InvalidEntry(format!(
                        "point {point} is bound to both {prev} and {value}"
                    )));
                }
            }
            map.insert(point, value);
        }
        Ok(Self {
            domain,
            kind: ModelKind::Table(TableModel { entries: map, default }),
        })
    }

    pub fn affine(domain: DiscreteDomain, weights: Vec<BigRational>, bias: BigRational) -> Result<Self> {
        if weights.len() != domain.dims() {
            return Err(Error::InvalidWeights {
                expected: domain.dims(),
                got: weights.len(),
            });
        }
        Ok(Self {
            domain,
            kind: ModelKind::Affine(AffineModel { weights, bias }),
        })
    }

    pub fn classifier(domain: DiscreteDomain, indicators: Vec<Indicator>, q: u64) -> Result<Self> {
        if indicators.is_empty() {
            return Err(Error::InvalidClassifier("indicator set is empty".into()));
        }
        if q == 0 {
            return Err(Error::InvalidClassifier("quantization denominator must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for ind in &indicators {
            if !seen.insert(ind.name.as_str()) {
                return Err(Error::InvalidClassifier(format!("duplicate indicator `{}`", ind.name)));
            }
            if !domain.contains(&ind.anchor) {
                return Err(Error::InvalidClassifier(format!(
                    "anchor {} of `{}` lies outside domain {domain}",
                    ind.anchor, ind.name
                )));
            }
        }
        Ok(Self {
            domain,
            kind: ModelKind::Classifier(ClassifierModel { indicators, q }),
        })
    }

    pub fn piecewise(
        domain: DiscreteDomain,
        pieces: Vec<(Region, Model)>,
        fallback: OutputValue,
    ) -> Result<Self> {
        for (region, sub) in &pieces {
            region.check_within(&domain)?;
            if sub.domain != domain {
                return Err(Error::DomainMismatch(format!(
                    "piece model is defined on {}, composite on {domain}",
                    sub.domain
                )));
            }
        }
        Ok(Self {
            domain,
            kind: ModelKind::Piecewise(PiecewiseModel { pieces, fallback }),
        })
    }

    /// Wraps `inner` so that it only answers inside `region`.
    pub fn restricted(inner: Model, region: Region, outside: OutputValue) -> Result<Self> {
        region.check_within(&inner.domain)?;
        Ok(Self {
            domain: inner.domain.clone(),
            kind: ModelKind::Restricted(RestrictedModel {
                region,
                inner: Box::new(inner),
                outside,
            }),
        })
    }

    pub fn oracle_injective(domain: DiscreteDomain) -> Self {
        Self {
            domain,
            kind: ModelKind::OracleInjective,
        }
    }

    pub fn domain(&self) -> &DiscreteDomain {
        &self.domain
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModelKind::Table(_) => "table",
            ModelKind::Affine(_) => "affine",
            ModelKind::Classifier(_) => "classifier",
            ModelKind::Piecewise(_) => "piecewise",
            ModelKind::Restricted(_) => "restricted",
            ModelKind::OracleInjective => "oracle-injective",
        }
    }

    /// Evaluates the model at `point`, which may lie in any extension of the
    /// model's domain.
    pub fn eval(&self, point: &Point) -> Result<OutputValue> {
        if point.dims() != self.domain.dims() {
            return Err(Error::DomainMismatch(format!(
                "point {point} has {} coordinates, model domain {} has {}",
                point.dims(),
                self.domain,
                self.domain.dims()
            )));
        }
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &Point) -> OutputValue {
        match &self.kind {
            ModelKind::Table(t) => t.entries.get(point).unwrap_or(&t.default).clone(),
            ModelKind::Affine(a) => {
                let sum = a
                    .weights
                    .iter()
                    .zip(point.coords())
                    .fold(a.bias.clone(), |acc, (w, &x)| acc + w * BigRational::from_integer(x.into()));
                OutputValue::rational(sum)
            }
            ModelKind::Classifier(c) => c.eval(point),
            ModelKind::Piecewise(p) => p
                .pieces
                .iter()
                .find(|(region, _)| region.contains(point))
                .map(|(_, sub)| sub.eval_unchecked(point))
                .unwrap_or_else(|| p.fallback.clone()),
            ModelKind::Restricted(r) => {
                if r.region.contains(point) {
                    r.inner.eval_unchecked(point)
                } else {
                    r.outside.clone()
                }
            }
            ModelKind::OracleInjective => OutputValue::Int(pair_all(point.coords())),
        }
    }
}

impl ClassifierModel {
    fn eval(&self, point: &Point) -> OutputValue {
        let one = BigRational::one();
        let zero = BigRational::zero();
        let mut best: Option<(BigRational, &str)> = None;
        for ind in &self.indicators {
            let dist: u64 = point
                .coords()
                .iter()
                .zip(ind.anchor.coords())
                .map(|(&a, &b)| a.abs_diff(b))
                .sum();
            let raw = &one - &ind.slope * BigRational::from_integer(dist.into());
            let score = raw.clamp(zero.clone(), one.clone());
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, &ind.name));
            }
        }
        let (score, name) = best.expect("classifier has at least one indicator");
        OutputValue::pair(quantize(&score, self.q), name)
    }

    /// Number of distinct values the classifier can ever emit is at most this.
    pub fn output_bound(&self) -> u64 {
        self.indicators.len() as u64 * (self.q + 1)
    }
}

/// Rounds `score` to the nearest multiple of `1/q`, halves rounding up.
pub fn quantize(score: &BigRational, q: u64) -> BigRational {
    let q_int = BigInt::from(q);
    let scaled = score * BigRational::from_integer(q_int.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let k = (scaled + half).floor().to_integer();
    BigRational::new(k, q_int)
}

/// Cantor pairing `(a, b) -> (a+b)(a+b+1)/2 + b`, a bijection N x N -> N.
fn cantor(a: &BigInt, b: &BigInt) -> BigInt {
    let s: BigInt = a + b;
    (&s * (&s + 1u32)).div_floor(&BigInt::from(2)) + b
}

/// Folds the pairing over all coordinates; a bijection N^n -> N for fixed n.
fn pair_all(coords: &[u64]) -> BigInt {
    let mut iter = coords.iter();
    let first = BigInt::from(*iter.next().expect("points have at least one coordinate"));
    iter.fold(first, |acc, &c| cantor(&acc, &BigInt::from(c)))
}

/// Integer weights proportional to the affine weights (denominators cleared).
/// Two points collide under the affine map iff they collide under these.
pub fn integer_weights(weights: &[BigRational]) -> Vec<BigInt> {
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    weights
        .iter()
        .map(|w| (w * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

impl AffineModel {
    pub fn is_constant(&self) -> bool {
        self.weights.iter().all(|w| w.is_zero())
    }
}
