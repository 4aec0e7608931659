//! Finite N-dimensional integer grids.
//!
//! A [`DiscreteDomain`] with scales `[s_0, .., s_{n-1}]` is the product
//! `{0..s_0-1} x .. x {0..s_{n-1}-1}`. Points are enumerated in lexicographic
//! order, which is also the derived [`Ord`] on [`Point`], so every witness the
//! crate reports is reproducible.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteDomain {
    scales: Vec<u64>,
    labels: Vec<Option<String>>,
}

impl DiscreteDomain {
    pub fn new(scales: Vec<u64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidDomain("at least one dimension is required".into()));
        }
        if let Some(dim) = scales.iter().position(|&s| s == 0) {
            return Err(Error::InvalidDomain(format!(
                "scale of dimension {dim} must be at least 1"
            )));
        }
        let labels = vec![None; scales.len()];
        Ok(Self { scales, labels })
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Self> {
        if labels.len() != self.scales.len() {
            return Err(Error::InvalidDomain(format!(
                "{} labels given for {} dimensions",
                labels.len(),
                self.scales.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn dims(&self) -> usize {
        self.scales.len()
    }

    pub fn scale(&self, dim: usize) -> Result<u64> {
        self.scales
            .get(dim)
            .copied()
            .ok_or(Error::InvalidDimension { dim, dims: self.dims() })
    }

    /// Exact number of points.
    pub fn cardinality(&self) -> BigUint {
        self.scales
            .iter()
            .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s))
    }

    /// Cardinality as a `u64`, when it fits.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.scales
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s))
    }

    /// Decimal logarithm of the cardinality, for display only.
    pub fn log10_cardinality(&self) -> f64 {
        self.scales.iter().map(|&s| (s as f64).log10()).sum()
    }

    /// A single-point grid: every condition on it is vacuous.
    pub fn is_degenerate(&self) -> bool {
        self.scales.iter().all(|&s| s == 1)
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.dims() == self.dims()
            && point
                .coords()
                .iter()
                .zip(&self.scales)
                .all(|(&c, &s)| c < s)
    }

    pub fn check_point(&self, point: &Point) -> Result<()> {
        if self.contains(point) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "point {point} is not in domain {self}"
            )))
        }
    }

    /// Lexicographic enumeration of every point, refused when the domain is
    /// larger than `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Points> {
        match self.cardinality_u64() {
            Some(n) if n <= budget => Ok(Points::new(self.scales.clone())),
            _ => Err(Error::BudgetExceeded {
                what: "point enumeration",
                needed: self.cardinality(),
                budget,
            }),
        }
    }

    /// Lexicographic walk over the points with no size check; callers stop
    /// early.
    pub(crate) fn lex_points(&self) -> Points {
        Points::new(self.scales.clone())
    }

    /// Copy of this domain with dimension `dim` widened to `new_scale`.
    pub fn extend(&self, dim: usize, new_scale: u64) -> Result<Self> {
        let current = self.scale(dim)?;
        if new_scale < current {
            return Err(Error::InvalidExtension {
                dim,
                current,
                requested: new_scale,
            });
        }
        let mut scales = self.scales.clone();
        scales[dim] = new_scale;
        Ok(Self {
            scales,
            labels: self.labels.clone(),
        })
    }

    /// True when `other` has the same dimensions and no smaller scale.
    pub fn is_extended_by(&self, other: &DiscreteDomain) -> bool {
        self.dims() == other.dims()
            && self.scales.iter().zip(&other.scales).all(|(a, b)| a <= b)
    }

    /// The whole grid as a region.
    pub fn full_region(&self) -> Region {
        Region {
            lo: vec![0; self.dims()],
            hi: self.scales.iter().map(|&s| s - 1).collect(),
        }
    }
}

impl fmt::Display for DiscreteDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.scales.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// A grid point. Ordering is lexicographic on coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<u64>);

impl Point {
    pub fn new(coords: Vec<u64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

impl From<Vec<u64>> for Point {
    fn from(coords: Vec<u64>) -> Self {
        Self(coords)
    }
}

impl<const N: usize> From<[u64; N]> for Point {
    fn from(coords: [u64; N]) -> Self {
        Self(coords.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Odometer over a grid in lexicographic order (last coordinate fastest).
#[derive(Debug, Clone)]
pub struct Points {
    scales: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Points {
    fn new(scales: Vec<u64>) -> Self {
        let next = Some(vec![0; scales.len()]);
        Self { scales, next }
    }
}

impl Iterator for Points {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.scales[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Point(current))
    }
}

/// Axis-aligned box with inclusive bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub lo: Vec<u64>,
    pub hi: Vec<u64>,
}

impl Region {
    pub fn new(lo: Vec<u64>, hi: Vec<u64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::InvalidRegion(format!(
                "lower corner has {} coordinates, upper corner has {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(d) = lo.iter().zip(&hi).position(|(l, h)| l > h) {
            return Err(Error::InvalidRegion(format!(
                "empty along dimension {d}: {} > {}",
                lo[d], hi[d]
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.dims() == self.lo.len()
            && point
                .coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }

    /// Checks that the box lies inside `domain`.
    pub fn check_within(&self, domain: &DiscreteDomain) -> Result<()> {
        if self.lo.len() != domain.dims() {
            return Err(Error::InvalidRegion(format!(
                "box has {} dimensions, domain has {}",
                self.lo.len(),
                domain.dims()
            )));
        }
        if let Some(d) = self.hi.iter().zip(domain.scales()).position(|(h, s)| h >= s) {
            return Err(Error::InvalidRegion(format!(
                "box reaches {} along dimension {d}, domain scale is {}",
                self.hi[d],
                domain.scales()[d]
            )));
        }
        Ok(())
    }

    pub fn cardinality(&self) -> BigUint {
        self.lo
            .iter()
            .zip(&self.hi)
            .fold(BigUint::one(), |acc, (l, h)| acc * BigUint::from(h - l + 1))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", Point(self.lo.clone()), Point(self.hi.clone()))
    }
}
