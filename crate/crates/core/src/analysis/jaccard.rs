use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

/// `|a ∩ b| / |a ∪ b|` in lowest terms, with `J(∅, ∅) = 1`.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> BigRational {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return BigRational::one();
    }
    BigRational::new(inter.into(), union.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn worked_values() {
        assert_eq!(jaccard(&set(&[1, 2]), &set(&[2, 3])), BigRational::new(1.into(), 3.into()));
        assert_eq!(jaccard(&set(&[4, 5]), &set(&[4, 5])), BigRational::one());
        assert!(jaccard(&set(&[1]), &set(&[2])).is_zero());
        assert_eq!(jaccard(&set(&[]), &set(&[])), BigRational::one());
        assert!(jaccard(&set(&[]), &set(&[1])).is_zero());
        assert_eq!(jaccard(&set(&[1, 2, 3, 4]), &set(&[1, 2])), BigRational::new(1.into(), 2.into()));
    }
}
