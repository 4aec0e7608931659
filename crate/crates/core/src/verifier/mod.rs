//! Condition checkers.
//!
//! The subset condition asks, for every seen subset `X_S` of the domain with
//! image `Y_S`, for an unseen subset `X_N` of the complement whose image `Y_N`
//! relates to `Y_S` in a prescribed way. Two readings of that relation are
//! supported (see [`Reading`]) together with two quantifier scopes
//! (see [`SubsetPolicy`]).
//!
//! [`check_s_bruteforce`] evaluates the quantifiers literally over all subsets
//! and serves as the oracle for [`check_s_fast`], which decides the
//! noncontainment reading by searching for a single collision.
//! [`check_s_star`] and [`classify`] extend the check to unbounded growth of
//! one dimension, returning three-valued verdicts with certificates.

mod bruteforce;
mod collision;
mod fast;
mod lattice;
mod star;

pub use bruteforce::{check_s_bruteforce, default_bruteforce_budget};
pub use collision::{find_collision, verify_collision};
pub use fast::check_s_fast;
pub use lattice::{find_kernel_vector, KernelVector};
pub use star::{
    check_s_star, classify, default_schedule, Certificate, Overall, StarEntry, StarOptions,
    StarReport, StarVerdict,
};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::domain::{DiscreteDomain, Point};
use crate::error::{Error, Result};

/// How the relation between `Y_N` and `Y_S` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reading {
    /// `Y_N △ Y_S` differs from both `Y_S` and `Y_N`.
    Literal,
    /// Neither image contains the other: `Y_N \ Y_S` and `Y_S \ Y_N` are both
    /// non-empty.
    Noncontainment,
}

/// Which subsets the quantifiers range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetPolicy {
    /// `X_S` ranges over all proper subsets including the empty set, and
    /// `X_N` may be empty.
    AllowEmpty,
    /// `X_S` ranges over non-empty proper subsets and `X_N` must be non-empty.
    NonemptyProper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

/// A failing seen subset. `AllBut(a)` stands for `D \ {a}` so that witnesses
/// on domains too large to list stay compact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetWitness {
    Explicit(BTreeSet<Point>),
    AllBut(Point),
}

impl SubsetWitness {
    /// Lists the subset's points.
    pub fn to_explicit(&self, domain: &DiscreteDomain, budget: u64) -> Result<BTreeSet<Point>> {
        match self {
            SubsetWitness::Explicit(s) => Ok(s.clone()),
            SubsetWitness::AllBut(a) => Ok(domain.enumerate(budget)?.filter(|p| p != a).collect()),
        }
    }
}

impl fmt::Display for SubsetWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetWitness::Explicit(s) => {
                write!(f, "{{")?;
                for (i, p) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            SubsetWitness::AllBut(a) => write!(f, "D \\ {{{a}}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Fast,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Seen subsets `X_S` examined.
    pub subsets_examined: u64,
    /// Candidate `X_N` examined across all seen subsets.
    pub candidates_examined: u64,
    /// Model evaluations performed.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub reading: Reading,
    pub policy: SubsetPolicy,
    pub method: Method,
    pub failing_subset: Option<SubsetWitness>,
    pub collision: Option<(Point, Point)>,
    pub stats: CheckStats,
}

impl Reading {
    pub fn as_str(self) -> &'static str {
        match self {
            Reading::Literal => "literal",
            Reading::Noncontainment => "noncontainment",
        }
    }
}

impl SubsetPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            SubsetPolicy::AllowEmpty => "allow-empty",
            SubsetPolicy::NonemptyProper => "nonempty-proper",
        }
    }
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "brute-force",
            Method::Fast => "fast",
        }
    }
}

impl FromStr for Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Reading::Literal),
            "noncontainment" => Ok(Reading::Noncontainment),
            other => Err(Error::UnknownName { kind: "reading", value: other.into() }),
        }
    }
}

impl FromStr for SubsetPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allow-empty" => Ok(SubsetPolicy::AllowEmpty),
            "nonempty-proper" => Ok(SubsetPolicy::NonemptyProper),
            other => Err(Error::UnknownName { kind: "subset policy", value: other.into() }),
        }
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for SubsetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_dims(model_domain: &DiscreteDomain, domain: &DiscreteDomain) -> Result<()> {
    if model_domain.dims() == domain.dims() {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!(
            "domain {domain} does not match model domain {model_domain}"
        )))
    }
}
