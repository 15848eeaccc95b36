//! Subsets of a host with at most 64 elements, packed into a `u64`.

use crate::{Error, Result};

pub type Subset = u64;

/// Largest host size supported by set-valued constructions.
pub const MAX_HOST: usize = 64;

pub fn check_host(n: usize) -> Result<()> {
    if n > MAX_HOST {
        Err(Error::HostTooLarge(n))
    } else {
        Ok(())
    }
}

#[inline]
pub fn full(n: usize) -> Subset {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn singleton(x: usize) -> Subset {
    1u64 << x
}

#[inline]
pub fn contains(s: Subset, x: usize) -> bool {
    s >> x & 1 == 1
}

#[inline]
pub fn is_subset(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

#[inline]
pub fn len(s: Subset) -> usize {
    s.count_ones() as usize
}

pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> Subset {
    elems.into_iter().fold(0, |acc, x| acc | singleton(x))
}

/// Iterate over the elements of `s` in increasing order.
pub fn iter(s: Subset) -> Elems {
    Elems(s)
}

#[derive(Clone, Copy, Debug)]
pub struct Elems(Subset);

impl Iterator for Elems {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let x = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(x)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elems {}

/// All subsets of `s`, including the empty set and `s` itself.
pub fn subsets_of(s: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == s { None } else { Some((cur.wrapping_sub(s)) & s) };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterates_in_order() {
        assert_eq!(iter(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(iter(0).count(), 0);
        assert_eq!(iter(full(64)).count(), 64);
    }

    #[test]
    fn subsets_enumeration() {
        let all: Vec<_> = subsets_of(0b101).collect();
        assert_eq!(all, vec![0, 1, 4, 5]);
        assert_eq!(subsets_of(full(5)).count(), 32);
    }
}
