//! Subsets of a ground set `[n] = {1, ..., n}` with `n <= 64`, stored as
//! bit patterns (element `e` lives in bit `e - 1`), and the colexicographic
//! codec used to index layers of the subset lattice.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::combinatorics::binomial_u64;
use crate::error::{Error, Result};

pub const MAX_GROUND: u32 = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetWord(u64);

impl SubsetWord {
    pub const EMPTY: SubsetWord = SubsetWord(0);

    pub const fn from_bits(bits: u64) -> Self {
        SubsetWord(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::invalid(format!("element {e} outside 1..=64")));
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::invalid(format!("element {e} repeated")));
            }
            bits |= bit;
        }
        Ok(SubsetWord(bits))
    }

    /// The full ground set `[n]`.
    pub fn ground(n: u32) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == 64 {
            SubsetWord(u64::MAX)
        } else {
            SubsetWord((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: u32) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&e));
        SubsetWord(1u64 << (e - 1))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        e >= 1 && e <= MAX_GROUND && self.0 & (1u64 << (e - 1)) != 0
    }

    pub fn is_subset_of(self, other: SubsetWord) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: SubsetWord) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: SubsetWord) -> Self {
        SubsetWord(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetWord) -> Self {
        SubsetWord(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetWord) -> Self {
        SubsetWord(self.0 & !other.0)
    }

    pub fn with(self, e: u32) -> Self {
        self.union(SubsetWord::singleton(e))
    }

    pub fn without(self, e: u32) -> Self {
        self.difference(SubsetWord::singleton(e))
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    /// Elements in increasing order (1-based).
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// Exchanges the roles of elements `a` and `b`.
    pub fn swap_elements(self, a: u32, b: u32) -> Self {
        if a == b || self.contains(a) == self.contains(b) {
            return self;
        }
        SubsetWord(self.0 ^ SubsetWord::singleton(a).0 ^ SubsetWord::singleton(b).0)
    }

    /// All subsets of `self` with exactly `size` elements, in colex order.
    pub fn subsets_of_size(self, size: u32) -> impl Iterator<Item = SubsetWord> {
        let elems: Vec<u32> = self.elements().collect();
        KSubsets::new(elems.len() as u32, size).map(move |pattern| {
            let mut bits = 0u64;
            for pos in pattern.elements() {
                bits |= 1u64 << (elems[(pos - 1) as usize] - 1);
            }
            SubsetWord(bits)
        })
    }
}

impl fmt::Debug for SubsetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SubsetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SubsetWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

/// The `k`-subsets of `[n]` in colex order (Gosper's hack).
pub struct KSubsets {
    current: Option<u128>,
    limit: u128,
}

impl KSubsets {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n <= MAX_GROUND, "ground set too large");
        let current = (k <= n).then(|| (1u128 << k) - 1);
        KSubsets {
            current,
            limit: 1u128 << n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = SubsetWord;

    fn next(&mut self) -> Option<SubsetWord> {
        let x = self.current?;
        if x >= self.limit && x != 0 {
            self.current = None;
            return None;
        }
        self.current = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            Some((((r ^ x) >> 2) / c) | r)
        };
        Some(SubsetWord(x as u64))
    }
}

/// Colexicographic rank of a subset among all subsets of the same size:
/// `sum_i C(c_i, i)` over the 0-based elements `c_1 < c_2 < ...`.
pub fn colex_rank(set: SubsetWord) -> u64 {
    set.elements()
        .enumerate()
        .map(|(i, e)| binomial_u64(u64::from(e - 1), i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for `k`-subsets of `[ground]`.
pub fn colex_unrank(rank: u64, k: u32, ground: u32) -> Result<SubsetWord> {
    if ground > MAX_GROUND {
        return Err(Error::invalid(format!("ground {ground} exceeds 64")));
    }
    let total = binomial_u64(u64::from(ground), u64::from(k));
    if rank >= total {
        return Err(Error::invalid(format!(
            "rank {rank} out of range for C({ground},{k}) = {total}"
        )));
    }
    let mut rest = rank;
    let mut bits = 0u64;
    let mut upper = ground;
    for i in (1..=k).rev() {
        // largest c < upper with C(c, i) <= rest
        let mut c = upper - 1;
        while binomial_u64(u64::from(c), u64::from(i)) > rest {
            c -= 1;
        }
        rest -= binomial_u64(u64::from(c), u64::from(i));
        bits |= 1u64 << c;
        upper = c;
    }
    Ok(SubsetWord(bits))
}
