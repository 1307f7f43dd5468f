use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverResult {
    pub cover: VertexSet,
    /// Smallest number of `Y'`-neighbors of a vertex of `X'`.
    pub min_degree: usize,
    /// Largest number of `X'`-neighbors of a vertex of `Y'`.
    pub max_degree: usize,
    /// `(|Y'| / a)(1 + ln b)`; zero when `X'` is empty.
    #[serde(serialize_with = "crate::report::real12")]
    pub bound: f64,
}

impl CoverResult {
    pub fn within_bound(&self) -> bool {
        self.cover.len() as f64 <= self.bound + 1e-9 * self.bound.max(1.0)
    }
}

/// Greedy cover of `targets ⊆ X` by vertices of `pool ⊆ Y`: repeatedly
/// take the pool vertex covering the most uncovered targets, lowest index
/// first on ties.
pub fn greedy_cover<G: BipartiteGraph + ?Sized>(g: &G, targets: &VertexSet, pool: &VertexSet) -> Result<CoverResult> {
    let y_len = g.part_len(Side::Y);
    let mut min_degree = usize::MAX;
    for x in targets.iter() {
        let degree = pool.count_in(&g.neighbors(Side::X, x));
        if degree == 0 {
            return Err(Error::Uncoverable(g.vertex_label(Side::X, x)));
        }
        min_degree = min_degree.min(degree);
    }
    let reach: Vec<(usize, VertexSet)> = pool
        .iter()
        .map(|y| {
            let hit = VertexSet::from_indices(targets.universe(), g.neighbors(Side::Y, y)).intersection(targets);
            (y, hit)
        })
        .collect();
    let max_degree = reach.iter().map(|(_, hit)| hit.len()).max().unwrap_or(0);
    let mut uncovered = targets.clone();
    let mut cover = VertexSet::empty(y_len);
    while !uncovered.is_empty() {
        let (best, gain) = reach
            .iter()
            .map(|(y, hit)| (*y, hit.intersection(&uncovered).len()))
            .fold((usize::MAX, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        debug_assert!(gain > 0);
        cover.insert(best);
        uncovered.difference_with(&reach.iter().find(|(y, _)| *y == best).expect("pool vertex").1);
    }
    let bound = if targets.is_empty() {
        0.0
    } else {
        pool.len() as f64 / min_degree as f64 * (1.0 + (max_degree as f64).ln())
    };
    Ok(CoverResult {
        cover,
        min_degree: if targets.is_empty() { 0 } else { min_degree },
        max_degree,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ExplicitGraph;

    #[test]
    fn empty_targets() {
        let g = ExplicitGraph::complete(3, 3);
        let r = greedy_cover(&g, &VertexSet::empty(3), &VertexSet::full(3)).unwrap();
        assert!(r.cover.is_empty());
        assert!(r.within_bound());
    }

    #[test]
    fn complete_bipartite() {
        let g = ExplicitGraph::complete(3, 3);
        let r = greedy_cover(&g, &VertexSet::full(3), &VertexSet::full(3)).unwrap();
        assert_eq!(r.cover.to_vec(), vec![0]);
        assert!((r.bound - (1.0 + 3f64.ln())).abs() < 1e-12);
        assert!(r.within_bound());
    }

    #[test]
    fn perfect_matching_meets_bound_exactly() {
        let g = ExplicitGraph::perfect_matching(4);
        let r = greedy_cover(&g, &VertexSet::full(4), &VertexSet::full(4)).unwrap();
        assert_eq!(r.cover.len(), 4);
        assert_eq!(r.bound, 4.0);
    }

    #[test]
    fn uncoverable_target() {
        let g = ExplicitGraph::perfect_matching(2);
        let err = greedy_cover(&g, &VertexSet::full(2), &VertexSet::from_indices(2, [0])).unwrap_err();
        assert!(matches!(err, Error::Uncoverable(_)));
    }
}
