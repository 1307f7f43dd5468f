//! Shadows of uniform families and the lower bounds on them: the Lovász
//! form of Kruskal–Katona and the two isoperimetric estimates for the
//! layer graph.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u64, real_binomial, real_binomial_root, BigCount};
use crate::enumeration::{thread_pool, Timing};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, LayerGraph, LayerGraphParams, Side};
use crate::subset::{KSubsets, SubsetWord};
use crate::vertex_set::VertexSet;

/// Largest top layer the exhaustive sweep accepts (`2^20` subsets).
pub const EXHAUSTIVE_CAP: u64 = 20;

/// Relative slack granted to every real-valued bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// `actual >= bound` up to [`BOUND_SLACK`] on the bound side.
pub fn meets_bound(actual: f64, bound: f64) -> bool {
    actual >= bound - BOUND_SLACK * bound.abs().max(1.0)
}

/// Number of `target`-subsets of members of `family`. Members must share
/// one size `m >= target`.
pub fn shadow_size(family: &[SubsetWord], target: u32) -> Result<BigCount> {
    let Some(first) = family.first() else {
        return Ok(BigCount::from(0u8));
    };
    let m = first.len();
    if target > m || family.iter().any(|s| s.len() != m) {
        return Err(Error::invalid(format!(
            "shadow needs equal-size members of size >= {target}"
        )));
    }
    let shadow: HashSet<SubsetWord> = family.iter().flat_map(|s| s.subsets_of_size(target)).collect();
    Ok(BigCount::from(shadow.len()))
}

/// The first `size` members of the `m`-subsets of `[ground]` in colex order.
pub fn colex_segment(m: u32, ground: u32, size: usize) -> Vec<SubsetWord> {
    KSubsets::new(ground, m).take(size).collect()
}

/// `C(x, target)` where `C(x, m) = size`.
pub fn lovasz_bound(size: f64, m: u32, target: u32) -> Result<f64> {
    if !(size >= 1.0) {
        return Err(Error::invalid("lovasz bound needs size >= 1"));
    }
    let x = real_binomial_root(m, size)?;
    Ok(real_binomial(x, target))
}

/// `a (1 + c/(k+r-c-1)) ... (1 + c/(k-c))`.
pub fn iso_bound_i(a: f64, k: u32, r: u32, c: u32) -> Result<f64> {
    if c >= k {
        return Err(Error::invalid(format!("part (i) needs c < k, got c={c}, k={k}")));
    }
    let (k, c) = (f64::from(k), f64::from(c));
    Ok((0..r).fold(a, |acc, j| acc * (1.0 + c / (k - c + f64::from(j)))))
}

/// Size precondition of part (i): `a <= C(n-2-c, k+r-1)`.
pub fn iso_bound_i_applies(a: u64, params: LayerGraphParams, c: u32) -> bool {
    let top = u64::from(params.n);
    c >= 1 && c < params.k && top >= 2 + u64::from(c) && {
        let limit = binomial(top - 2 - u64::from(c), u64::from(params.top_level()));
        BigCount::from(a) <= limit
    }
}

/// `d a / (5e)^r`, valid for `a <= d^3`.
pub fn iso_bound_ii(a: f64, k: u32, r: u32) -> Result<f64> {
    let d = binomial_u64(u64::from(k + r - 1), u64::from(k - 1)) as f64;
    if a > d.powi(3) {
        return Err(Error::invalid(format!("part (ii) needs a <= d^3 = {}", d.powi(3))));
    }
    Ok(d * a / (5.0 * std::f64::consts::E).powi(r as i32))
}

/// The theorem assumes `1 <= r <= 2 + 2 sqrt(k ln k)`.
pub fn theorem_applies(k: u32, r: u32) -> bool {
    let k = f64::from(k);
    r >= 1 && f64::from(r) <= 2.0 + 2.0 * (k * k.ln()).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoMode {
    Exhaustive,
    Colex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoReport {
    pub params: LayerGraphParams,
    pub mode: IsoMode,
    pub theorem_applies: bool,
    pub subsets_checked: u64,
    pub part_i_checks: u64,
    pub part_ii_checks: u64,
    /// Smallest `|N(A)| / lovasz_bound(|A|)` over non-empty `A`.
    #[serde(serialize_with = "crate::report::real12")]
    pub min_slack: f64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug)]
struct Tally {
    checked: u64,
    part_i: u64,
    part_ii: u64,
    min_slack: f64,
    /// Smallest failing witness key with its description.
    failure: Option<(u64, String)>,
}

impl Tally {
    fn empty() -> Self {
        Tally {
            checked: 0,
            part_i: 0,
            part_ii: 0,
            min_slack: f64::INFINITY,
            failure: None,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.part_i += other.part_i;
        self.part_ii += other.part_ii;
        self.min_slack = self.min_slack.min(other.min_slack);
        self.failure = match (self.failure, other.failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

struct Checker {
    params: LayerGraphParams,
    applies: bool,
}

impl Checker {
    /// Checks one non-empty `A` of size `a` with shadow size `shadow`.
    fn check(&self, key: u64, a: u64, shadow: u64, describe: impl Fn() -> String) -> Tally {
        let mut tally = Tally::empty();
        tally.checked = 1;
        let LayerGraphParams { k, r, .. } = self.params;
        let actual = shadow as f64;
        let mut fail = |what: &str, bound: f64| {
            if tally.failure.is_none() {
                tally.failure = Some((key, format!("{what}: A = {}, |N(A)| = {shadow}, bound = {bound}", describe())));
            }
        };
        match lovasz_bound(a as f64, self.params.top_level(), self.params.bottom_level()) {
            Ok(bound) => {
                tally.min_slack = actual / bound;
                if !meets_bound(actual, bound) {
                    fail("Lovász bound", bound);
                }
            }
            Err(e) => fail(&format!("Lovász bound not evaluable ({e})"), f64::NAN),
        }
        if self.applies {
            for c in 1..k {
                if iso_bound_i_applies(a, self.params, c) {
                    tally.part_i += 1;
                    let bound = iso_bound_i(a as f64, k, r, c).expect("c < k");
                    if !meets_bound(actual, bound) {
                        fail(&format!("isoperimetry (i), c = {c}"), bound);
                    }
                }
            }
            if let Ok(bound) = iso_bound_ii(a as f64, k, r) {
                tally.part_ii += 1;
                if !meets_bound(actual, bound) {
                    fail("isoperimetry (ii)", bound);
                }
            }
        }
        tally
    }
}

/// Checks every bound on every non-empty `A ⊆ L_{k+r-1}` (exhaustive) or on
/// every colex initial segment (colex). Halts with the witness `A` of the
/// first violation.
pub fn verify_isoperimetry(params: LayerGraphParams, mode: IsoMode, workers: usize) -> Result<IsoReport> {
    let graph = LayerGraph::new(params)?;
    let checker = Checker {
        params,
        applies: theorem_applies(params.k, params.r),
    };
    let x_len = graph.part_len(Side::X);
    let tally = match mode {
        IsoMode::Exhaustive => {
            if x_len as u64 > EXHAUSTIVE_CAP {
                return Err(Error::CapExceeded {
                    what: "exhaustive isoperimetry top layer",
                    limit: EXHAUSTIVE_CAP,
                    actual: x_len as u64,
                });
            }
            let y_len = graph.part_len(Side::Y);
            if y_len > 64 {
                return Err(Error::CapExceeded {
                    what: "exhaustive isoperimetry bottom layer",
                    limit: 64,
                    actual: y_len as u64,
                });
            }
            let nbhd: Vec<u64> = (0..x_len)
                .map(|x| graph.neighbors(Side::X, x).iter().fold(0u64, |m, &y| m | 1 << y))
                .collect();
            let graph = &graph;
            thread_pool(workers)?.install(|| {
                (1u64..1 << x_len)
                    .into_par_iter()
                    .map(|mask| {
                        let mut covered = 0u64;
                        let mut rest = mask;
                        while rest != 0 {
                            covered |= nbhd[rest.trailing_zeros() as usize];
                            rest &= rest - 1;
                        }
                        let describe = || {
                            let sets: Vec<String> = (0..x_len)
                                .filter(|&x| mask >> x & 1 == 1)
                                .map(|x| graph.x_set(x).to_string())
                                .collect();
                            format!("[{}]", sets.join(", "))
                        };
                        checker.check(mask, u64::from(mask.count_ones()), u64::from(covered.count_ones()), describe)
                    })
                    .reduce(Tally::empty, Tally::merge)
            })
        }
        IsoMode::Colex => {
            let mut covered = VertexSet::empty(graph.part_len(Side::Y));
            let mut tally = Tally::empty();
            for size in 1..=x_len {
                for y in graph.neighbors(Side::X, size - 1) {
                    covered.insert(y);
                }
                let describe = || format!("first {size} sets in colex order");
                tally = tally.merge(checker.check(size as u64, size as u64, covered.len() as u64, describe));
            }
            tally
        }
    };
    if let Some((_, witness)) = tally.failure {
        return Err(Error::violation("shadow lower bound", witness));
    }
    Ok(IsoReport {
        params,
        mode,
        theorem_applies: checker.applies,
        subsets_checked: tally.checked,
        part_i_checks: tally.part_i,
        part_ii_checks: tally.part_ii,
        min_slack: tally.min_slack,
        violations: 0,
        timing: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::neighborhood;

    fn set(e: &[u32]) -> SubsetWord {
        SubsetWord::from_elements(e.iter().copied()).unwrap()
    }

    fn p(n: u32, k: u32, r: u32) -> LayerGraphParams {
        LayerGraphParams::new(n, k, r).unwrap()
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(shadow_size(&[set(&[1, 2, 3])], 2).unwrap(), BigCount::from(3u8));
        let layer: Vec<SubsetWord> = KSubsets::new(6, 3).collect();
        assert_eq!(shadow_size(&layer, 2).unwrap(), BigCount::from(15u8));
        // 123, 124, 134, 234 cover every pair of [4]
        assert_eq!(colex_segment(3, 6, 4), vec![set(&[1, 2, 3]), set(&[1, 2, 4]), set(&[1, 3, 4]), set(&[2, 3, 4])]);
        assert_eq!(shadow_size(&colex_segment(3, 6, 4), 2).unwrap(), BigCount::from(6u8));
        assert!(shadow_size(&[set(&[1, 2]), set(&[1, 2, 3])], 1).is_err());
    }

    #[test]
    fn lovasz_examples() {
        assert!((lovasz_bound(1.0, 3, 2).unwrap() - 3.0).abs() < 1e-8);
        assert!((lovasz_bound(10.0, 3, 2).unwrap() - 10.0).abs() < 1e-7);
        // C(x, 2) = 3 at x = 3, so the bound on the 1-shadow is 3
        assert!((lovasz_bound(3.0, 2, 1).unwrap() - 3.0).abs() < 1e-8);
        assert!(lovasz_bound(0.0, 2, 1).is_err());
    }

    #[test]
    fn part_i_values() {
        assert_eq!(iso_bound_i(7.0, 4, 3, 0).unwrap(), 7.0);
        assert_eq!(iso_bound_i(5.0, 2, 1, 1).unwrap(), 10.0);
        assert!(iso_bound_i(5.0, 3, 2, 2).unwrap() > iso_bound_i(5.0, 3, 2, 1).unwrap());
        assert!(iso_bound_i(1.0, 2, 1, 2).is_err());
    }

    #[test]
    fn part_ii_values() {
        let b = iso_bound_ii(1.0, 2, 1).unwrap();
        assert!((b - 2.0 / (5.0 * std::f64::consts::E)).abs() < 1e-12);
        assert_eq!(iso_bound_ii(0.0, 2, 1).unwrap(), 0.0);
        assert!(iso_bound_ii(9.0, 2, 1).is_err());
        for (k, r) in [(2, 1), (3, 2), (4, 2)] {
            let params = p(2 * k + r, k, r);
            for a in 1..=20u32 {
                let lovasz = lovasz_bound(f64::from(a), params.top_level(), params.bottom_level()).unwrap();
                if let Ok(ii) = iso_bound_ii(f64::from(a), k, r) {
                    assert!(ii <= lovasz, "k={k} r={r} a={a}");
                }
            }
        }
    }

    #[test]
    fn exhaustive_and_colex_sweeps() {
        let report = verify_isoperimetry(p(5, 2, 1), IsoMode::Exhaustive, 2).unwrap();
        assert_eq!(report.subsets_checked, 63);
        assert!(report.min_slack >= 1.0 - 1e-9);
        let colex = verify_isoperimetry(p(6, 2, 2), IsoMode::Colex, 1).unwrap();
        assert_eq!(colex.subsets_checked, 10);
        assert!(colex.part_i_checks >= 1);
        assert!(verify_isoperimetry(p(8, 2, 4), IsoMode::Exhaustive, 1).is_err());
    }

    #[test]
    fn full_layer_shadow_is_full() {
        let params = p(6, 2, 2);
        let graph = LayerGraph::new(params).unwrap();
        let all = VertexSet::full(graph.part_len(Side::X));
        assert_eq!(neighborhood(&graph, Side::X, &all).len() as u64, params.bottom_len());
    }

    #[test]
    fn shadow_matches_neighborhood() {
        let params = p(6, 2, 2);
        let graph = LayerGraph::new(params).unwrap();
        for mask in [1u64, 0b1011, 0b11_1111_1111] {
            let a = VertexSet::from_mask(10, mask);
            let sets: Vec<SubsetWord> = a.iter().map(|x| graph.x_set(x)).collect();
            let shadow = shadow_size(&sets, params.bottom_level()).unwrap();
            assert_eq!(shadow, BigCount::from(neighborhood(&graph, Side::X, &a).len()));
        }
    }

    #[test]
    fn theorem_range() {
        assert!(theorem_applies(2, 3));
        assert!(!theorem_applies(2, 5));
        assert!(!theorem_applies(2, 0));
    }
}
