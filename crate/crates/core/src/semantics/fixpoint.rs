//! Least and greatest fixpoints of monotone maps on finite powersets.

use super::stateset::StateSet;
use super::EvalError;

/// Kleene iteration from the empty set. A non-increasing step or a chain
/// longer than the lattice height reports non-monotonicity.
pub fn lfp<F>(n: usize, mut f: F) -> Result<StateSet, EvalError>
where
    F: FnMut(&StateSet) -> Result<StateSet, EvalError>,
{
    let mut cur = StateSet::empty(n);
    for _ in 0..=n + 1 {
        let next = f(&cur)?;
        if next == cur {
            return Ok(cur);
        }
        if !cur.is_subset(&next) {
            return Err(EvalError::NonMonotone);
        }
        cur = next;
    }
    Err(EvalError::NonMonotone)
}

/// Kleene iteration from the full set downwards.
pub fn gfp<F>(n: usize, mut f: F) -> Result<StateSet, EvalError>
where
    F: FnMut(&StateSet) -> Result<StateSet, EvalError>,
{
    let mut cur = StateSet::full(n);
    for _ in 0..=n + 1 {
        let next = f(&cur)?;
        if next == cur {
            return Ok(cur);
        }
        if !next.is_subset(&cur) {
            return Err(EvalError::NonMonotone);
        }
        cur = next;
    }
    Err(EvalError::NonMonotone)
}

/// Largest universe the exhaustive oracles accept.
pub const ORACLE_MAX_STATES: usize = 16;

fn all_subsets(n: usize) -> impl Iterator<Item = StateSet> {
    assert!(n <= ORACLE_MAX_STATES, "oracle limited to {} states", ORACLE_MAX_STATES);
    (0u32..(1 << n)).map(move |m| StateSet::from_fn(n, |i| m >> i & 1 == 1))
}

/// Intersection of all pre-fixpoints, by exhaustive search.
pub fn lfp_oracle(n: usize, f: impl Fn(&StateSet) -> StateSet) -> StateSet {
    all_subsets(n).filter(|d| f(d).is_subset(d)).fold(StateSet::full(n), |acc, d| acc.intersection(&d))
}

/// Union of all post-fixpoints, by exhaustive search.
pub fn gfp_oracle(n: usize, f: impl Fn(&StateSet) -> StateSet) -> StateSet {
    all_subsets(n).filter(|d| d.is_subset(&f(d))).fold(StateSet::empty(n), |acc, d| acc.union(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map() {
        assert!(lfp(5, |d| Ok(d.clone())).unwrap().is_empty());
        assert!(gfp(5, |d| Ok(d.clone())).unwrap().is_full());
    }

    #[test]
    fn antitone_map_is_reported() {
        assert!(matches!(lfp(3, |d| Ok(d.complement())), Err(EvalError::NonMonotone)));
    }

    #[test]
    fn agrees_with_oracle_on_small_maps() {
        // f(D) = {0} ∪ (D shifted by one), a chain 0 -> 1 -> 2 ...
        let n = 6;
        let f = |d: &StateSet| {
            let mut out = StateSet::from_indices(n, [0]);
            for i in d.iter() {
                if i + 1 < n {
                    out.insert(i + 1);
                }
            }
            out
        };
        assert_eq!(lfp(n, |d| Ok(f(d))).unwrap(), lfp_oracle(n, f));
        assert_eq!(gfp(n, |d| Ok(f(d))).unwrap(), gfp_oracle(n, f));
    }
}
