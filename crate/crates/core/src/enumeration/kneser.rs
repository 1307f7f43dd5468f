//! Intersecting families as independent sets of the Kneser graph on
//! `C([n], k)`, whose vertices are `k`-sets and whose edges join disjoint
//! sets.

use std::collections::BTreeMap;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u64, BigCount};
use crate::error::{Error, Result};
use crate::families::{classify_family, hilton_milner_bound, KFamily};
use crate::subset::{KSubsets, SubsetWord};

use super::{thread_pool, Timing};

/// Largest vertex count (`C(n, k)`) the branch-and-count accepts.
pub const KNESER_CAP: u64 = 24;
/// Largest vertex count for the raw `2^C(n,k)` subset iterator.
pub const RAW_CAP: u64 = 20;

/// Branch levels that fork parallel tasks.
const PARALLEL_DEPTH: u32 = 6;

/// Kneser graph on the `k`-subsets of `[n]`, vertices in colex order.
#[derive(Clone, Debug)]
pub struct KneserGraph {
    pub n: u32,
    pub k: u32,
    pub sets: Vec<SubsetWord>,
    /// `adj[i]`: vertices disjoint from vertex `i`, as a bit mask.
    pub adj: Vec<u32>,
}

impl KneserGraph {
    pub fn new(n: u32, k: u32, cap: u64) -> Result<Self> {
        if k == 0 || k > n || n > 64 {
            return Err(Error::invalid(format!("need 1 <= k <= n <= 64, got n={n}, k={k}")));
        }
        let size = binomial_u64(u64::from(n), u64::from(k));
        if size > cap {
            return Err(Error::CapExceeded {
                what: "C(n, k) vertices",
                limit: cap,
                actual: size,
            });
        }
        let sets: Vec<SubsetWord> = KSubsets::new(n, k).collect();
        let adj = sets
            .iter()
            .map(|&a| {
                sets.iter()
                    .enumerate()
                    .filter(|(_, &b)| !a.intersects(b))
                    .fold(0u32, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(KneserGraph { n, k, sets, adj })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn full_mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    pub fn is_independent(&self, mask: u32) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.adj[v] & mask != 0 {
                return false;
            }
        }
        true
    }

    pub fn family(&self, mask: u32) -> KFamily {
        let members = (0..self.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.sets[i])
            .collect();
        KFamily::from_sorted(self.n, self.k, members)
    }

    /// Connected component of `start` inside `mask`.
    fn component(&self, mask: u32, start: usize) -> u32 {
        let mut reached = 1u32 << start;
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            next &= mask & !reached;
            reached |= next;
            frontier = next;
        }
        reached
    }
}

struct Counter<'g> {
    graph: &'g KneserGraph,
    memo: DashMap<u32, u64>,
}

impl Counter<'_> {
    /// Independent sets of the subgraph induced by `mask`.
    fn count(&self, mask: u32, depth: u32) -> u64 {
        if mask == 0 {
            return 1;
        }
        if let Some(hit) = self.memo.get(&mask) {
            return *hit;
        }
        let first = self.graph.component(mask, mask.trailing_zeros() as usize);
        let value = if first != mask {
            let rest = mask & !first;
            if depth < PARALLEL_DEPTH {
                let (a, b) = rayon::join(|| self.count_connected(first, depth + 1), || self.count(rest, depth + 1));
                a * b
            } else {
                self.count_connected(first, depth + 1) * self.count(rest, depth + 1)
            }
        } else {
            self.count_connected(mask, depth)
        };
        self.memo.entry(mask).or_insert(value);
        value
    }

    /// Branches on the lowest vertex of a connected `mask`.
    fn count_connected(&self, mask: u32, depth: u32) -> u64 {
        let v = mask.trailing_zeros() as usize;
        let without = mask & !(1 << v);
        let with = without & !self.graph.adj[v];
        if without == 0 {
            return 2;
        }
        if depth < PARALLEL_DEPTH {
            let (a, b) = rayon::join(|| self.count(without, depth + 1), || self.count(with, depth + 1));
            a + b
        } else {
            self.count(without, depth + 1) + self.count(with, depth + 1)
        }
    }
}

/// Parameters echoed in every enumeration report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub n: u32,
    pub k: u32,
    /// `n - 2k`; may be zero or negative.
    pub r: i64,
}

impl FamilyParams {
    fn new(n: u32, k: u32) -> Self {
        FamilyParams {
            n,
            k,
            r: i64::from(n) - 2 * i64::from(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub params: FamilyParams,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub total: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub trivial: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub nontrivial: BigCount,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_profile: Option<MaximalProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Families contained in some full star, by inclusion–exclusion over the
/// set `T` of forced common elements:
/// `sum_{T != ∅} (-1)^{|T|+1} 2^{C(n-|T|, k-|T|)}`.
/// Includes the empty family.
pub fn trivial_count(n: u32, k: u32) -> BigCount {
    let mut acc = BigInt::from(0);
    for t in 1..=u64::from(n) {
        let star = if t > u64::from(k) {
            0
        } else {
            binomial_u64(u64::from(n) - t, u64::from(k) - t)
        };
        let term = BigInt::from(binomial(u64::from(n), t)) << star;
        if t % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    assert!(!acc.is_negative());
    acc.to_biguint().expect("non-negative")
}

/// Exact number of intersecting families in `C([n], k)` by branching on the
/// lowest vertex with connected-component factorization and a shared memo.
pub fn count_intersecting(n: u32, k: u32, workers: usize) -> Result<CountReport> {
    let graph = KneserGraph::new(n, k, KNESER_CAP)?;
    let counter = Counter {
        graph: &graph,
        memo: DashMap::new(),
    };
    let total = thread_pool(workers)?.install(|| counter.count(graph.full_mask(), 0));
    let total = BigCount::from(total);
    let trivial = trivial_count(n, k);
    let nontrivial = &total - &trivial;
    Ok(CountReport {
        params: FamilyParams::new(n, k),
        total,
        trivial,
        nontrivial,
        maximal_profile: None,
        timing: None,
    })
}

/// The same totals by iterating every subset of `C([n], k)`.
pub fn count_intersecting_raw(n: u32, k: u32) -> Result<CountReport> {
    let graph = KneserGraph::new(n, k, RAW_CAP)?;
    let (mut total, mut trivial) = (0u64, 0u64);
    for mask in 0..=graph.full_mask() {
        if graph.is_independent(mask) {
            total += 1;
            let common = (0..graph.len())
                .filter(|&i| mask >> i & 1 == 1)
                .fold(SubsetWord::ground(n), |acc, i| acc.intersection(graph.sets[i]));
            if !common.is_empty() {
                trivial += 1;
            }
        }
    }
    Ok(CountReport {
        params: FamilyParams::new(n, k),
        total: total.into(),
        trivial: trivial.into(),
        nontrivial: (total - trivial).into(),
        maximal_profile: None,
        timing: None,
    })
}

/// Visits every intersecting family in `C([n], k)` once, in a fixed order.
pub fn for_each_intersecting<F: FnMut(&KFamily)>(n: u32, k: u32, mut visit: F) -> Result<()> {
    let graph = KneserGraph::new(n, k, KNESER_CAP)?;
    fn walk<F: FnMut(&KFamily)>(g: &KneserGraph, v: usize, chosen: u32, forbidden: u32, visit: &mut F) {
        if v == g.len() {
            visit(&g.family(chosen));
            return;
        }
        walk(g, v + 1, chosen, forbidden, visit);
        if forbidden >> v & 1 == 0 {
            walk(g, v + 1, chosen | 1 << v, forbidden | g.adj[v], visit);
        }
    }
    walk(&graph, 0, 0, 0, &mut visit);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HiltonMilnerCheck {
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub bound: BigCount,
    /// Largest non-trivial maximal family, if any exists.
    pub largest_nontrivial: Option<u64>,
    pub respected: bool,
    pub attained: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BollobasCheck {
    /// `n C(2k, k) / 2`, the base-2 log of the bound.
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub log2_bound: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub sum: BigCount,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalProfile {
    pub params: FamilyParams,
    pub maximal_total: u64,
    pub trivial_maximal: u64,
    pub nontrivial_maximal: u64,
    /// `ell -> M_ell` for non-trivial maximal families, with deficiency
    /// `ell = C(n-1, k-1) - |F|`.
    #[serde(serialize_with = "crate::report::big_map_as_strings")]
    pub profile: BTreeMap<u64, BigCount>,
    /// `None` when `n < 2k + 1`, where the bound is not defined.
    pub hilton_milner: Option<HiltonMilnerCheck>,
    pub bollobas: BollobasCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Maximal cliques of the "intersects" graph (the complement of the Kneser
/// graph) by Bron–Kerbosch with pivoting.
pub fn maximal_families(n: u32, k: u32) -> Result<Vec<KFamily>> {
    let graph = KneserGraph::new(n, k, KNESER_CAP)?;
    let full = graph.full_mask();
    let compat: Vec<u32> = (0..graph.len())
        .map(|v| full & !graph.adj[v] & !(1 << v))
        .collect();
    let mut found = Vec::new();
    fn bron_kerbosch(compat: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot_pool = p | x;
        let mut pivot = pivot_pool.trailing_zeros() as usize;
        let mut best = 0;
        let mut scan = pivot_pool;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let reach = (p & compat[u]).count_ones();
            if reach >= best {
                best = reach;
                pivot = u;
            }
        }
        let mut candidates = p & !compat[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            bron_kerbosch(compat, r | 1 << v, p & compat[v], x & compat[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    bron_kerbosch(&compat, 0, full, 0, &mut found);
    found.sort_unstable();
    Ok(found.into_iter().map(|m| graph.family(m)).collect())
}

/// Maximal families by testing each intersecting family for maximality.
pub fn maximal_families_raw(n: u32, k: u32) -> Result<Vec<KFamily>> {
    let graph = KneserGraph::new(n, k, RAW_CAP)?;
    let full = graph.full_mask();
    let mut out = Vec::new();
    for mask in 0..=full {
        if !graph.is_independent(mask) {
            continue;
        }
        let extendable = (0..graph.len()).any(|v| mask >> v & 1 == 0 && graph.adj[v] & mask == 0);
        if !extendable {
            out.push(mask);
        }
    }
    out.sort_unstable();
    Ok(out.into_iter().map(|m| graph.family(m)).collect())
}

pub fn maximal_profile(n: u32, k: u32) -> Result<MaximalProfile> {
    let families = maximal_families(n, k)?;
    let star = binomial_u64(u64::from(n - 1), u64::from(k - 1));
    let mut profile: BTreeMap<u64, BigCount> = BTreeMap::new();
    let mut trivial_maximal = 0;
    let mut largest_nontrivial = None;
    for family in &families {
        if classify_family(family).trivial {
            trivial_maximal += 1;
        } else {
            let size = family.len() as u64;
            *profile.entry(star - size).or_default() += 1u32;
            largest_nontrivial = largest_nontrivial.max(Some(size));
        }
    }
    let nontrivial_maximal = families.len() as u64 - trivial_maximal;
    let hilton_milner = hilton_milner_bound(n, k).ok().map(|bound| {
        let size = largest_nontrivial.map(BigCount::from);
        HiltonMilnerCheck {
            respected: size.as_ref().is_none_or(|s| s <= &bound),
            attained: size.as_ref() == Some(&bound),
            bound,
            largest_nontrivial,
        }
    });
    let log2_bound = BigCount::from(n) * binomial(2 * u64::from(k), u64::from(k)) / 2u32;
    let sum = BigCount::from(nontrivial_maximal);
    // sum fits in 64 bits, so any exponent of at least 64 is slack
    let holds = match log2_bound.to_u64() {
        Some(e) if e < 64 => sum <= BigCount::from(1u64 << e),
        _ => true,
    };
    Ok(MaximalProfile {
        params: FamilyParams::new(n, k),
        maximal_total: families.len() as u64,
        trivial_maximal,
        nontrivial_maximal,
        profile,
        hilton_milner,
        bollobas: BollobasCheck { log2_bound, sum, holds },
        timing: None,
    })
}
