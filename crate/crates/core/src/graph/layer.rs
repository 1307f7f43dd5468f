use serde::Serialize;

use super::{BipartiteGraph, Side};
use crate::combinatorics::binomial_u64;
use crate::error::{Error, Result};
use crate::subset::{colex_rank, colex_unrank, SubsetWord, MAX_GROUND};

/// Parameters of the containment graph `H(n, k, r)` with `n = 2k + r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LayerGraphParams {
    pub n: u32,
    pub k: u32,
    pub r: u32,
}

impl LayerGraphParams {
    pub fn new(n: u32, k: u32, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("gap r must be at least 1"));
        }
        // k = 1 makes L_0 = {∅}; closures degenerate, so it is rejected.
        if k < 2 {
            return Err(Error::invalid("containment graph needs k >= 2"));
        }
        if n != 2 * k + r {
            return Err(Error::invalid(format!("n = {n} must equal 2k + r = {}", 2 * k + r)));
        }
        if n - 1 > MAX_GROUND {
            return Err(Error::invalid("ground set [n-1] must have at most 64 elements"));
        }
        Ok(LayerGraphParams { n, k, r })
    }

    /// `r = n - 2k` inferred from `(n, k)`.
    pub fn from_nk(n: u32, k: u32) -> Result<Self> {
        if n <= 2 * k {
            return Err(Error::invalid(format!("need n >= 2k + 1, got n={n}, k={k}")));
        }
        LayerGraphParams::new(n, k, n - 2 * k)
    }

    /// Size of the top layer sets, `k + r - 1`.
    pub fn top_level(&self) -> u32 {
        self.k + self.r - 1
    }

    /// Size of the bottom layer sets, `k - 1`.
    pub fn bottom_level(&self) -> u32 {
        self.k - 1
    }

    /// Degree of a top vertex, `d = C(k+r-1, k-1)`.
    pub fn q(&self) -> u64 {
        binomial_u64(u64::from(self.k + self.r - 1), u64::from(self.k - 1))
    }

    pub fn d(&self) -> u64 {
        self.q()
    }

    /// Degree of a bottom vertex, `C(k+r, r)`.
    pub fn s(&self) -> u64 {
        binomial_u64(u64::from(self.k + self.r), u64::from(self.r))
    }

    pub fn top_len(&self) -> u64 {
        binomial_u64(u64::from(self.n - 1), u64::from(self.top_level()))
    }

    pub fn bottom_len(&self) -> u64 {
        binomial_u64(u64::from(self.n - 1), u64::from(self.bottom_level()))
    }
}

/// The bipartite containment graph between `L_{k+r-1}` (part `X`) and
/// `L_{k-1}` (part `Y`) of `2^[n-1]`. Vertices are indexed by colex rank and
/// adjacency is computed from the bit patterns on demand.
#[derive(Clone, Debug)]
pub struct LayerGraph {
    params: LayerGraphParams,
    x_len: usize,
    y_len: usize,
}

/// Layers bigger than this are not indexed.
const MAX_LAYER: u64 = 1 << 26;

impl LayerGraph {
    pub fn new(params: LayerGraphParams) -> Result<Self> {
        let (x_len, y_len) = (params.top_len(), params.bottom_len());
        if x_len.max(y_len) > MAX_LAYER {
            return Err(Error::CapExceeded {
                what: "layer size",
                limit: MAX_LAYER,
                actual: x_len.max(y_len),
            });
        }
        Ok(LayerGraph {
            params,
            x_len: x_len as usize,
            y_len: y_len as usize,
        })
    }

    pub fn params(&self) -> LayerGraphParams {
        self.params
    }

    pub fn ground(&self) -> u32 {
        self.params.n - 1
    }

    pub fn x_set(&self, i: usize) -> SubsetWord {
        colex_unrank(i as u64, self.params.top_level(), self.ground()).expect("x index in range")
    }

    pub fn y_set(&self, j: usize) -> SubsetWord {
        colex_unrank(j as u64, self.params.bottom_level(), self.ground()).expect("y index in range")
    }

    fn index_of(&self, set: SubsetWord, level: u32) -> Result<usize> {
        if set.len() != level || !set.is_subset_of(SubsetWord::ground(self.ground())) {
            return Err(Error::invalid(format!(
                "{set} is not a {level}-subset of [{}]",
                self.ground()
            )));
        }
        Ok(colex_rank(set) as usize)
    }

    pub fn x_index(&self, set: SubsetWord) -> Result<usize> {
        self.index_of(set, self.params.top_level())
    }

    pub fn y_index(&self, set: SubsetWord) -> Result<usize> {
        self.index_of(set, self.params.bottom_level())
    }
}

impl BipartiteGraph for LayerGraph {
    fn part_len(&self, side: Side) -> usize {
        match side {
            Side::X => self.x_len,
            Side::Y => self.y_len,
        }
    }

    fn neighbors(&self, side: Side, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = match side {
            Side::X => self
                .x_set(v)
                .subsets_of_size(self.params.bottom_level())
                .map(|s| colex_rank(s) as usize)
                .collect(),
            Side::Y => {
                let base = self.y_set(v);
                SubsetWord::ground(self.ground())
                    .difference(base)
                    .subsets_of_size(self.params.r)
                    .map(|extra| colex_rank(base.union(extra)) as usize)
                    .collect()
            }
        };
        out.sort_unstable();
        out
    }

    fn degree(&self, side: Side, _v: usize) -> usize {
        match side {
            Side::X => self.params.q() as usize,
            Side::Y => self.params.s() as usize,
        }
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        self.y_set(y).is_subset_of(self.x_set(x))
    }

    fn vertex_label(&self, side: Side, v: usize) -> String {
        match side {
            Side::X => self.x_set(v).to_string(),
            Side::Y => self.y_set(v).to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(LayerGraphParams::new(5, 2, 1).is_ok());
        assert!(LayerGraphParams::new(3, 1, 1).is_err());
        assert!(LayerGraphParams::new(4, 2, 0).is_err());
        assert!(LayerGraphParams::new(7, 2, 2).is_err());
        assert_eq!(LayerGraphParams::from_nk(6, 2).unwrap().r, 2);
        assert!(LayerGraphParams::from_nk(4, 2).is_err());
    }

    #[test]
    fn d_values() {
        // d = C(k+r-1, k-1)
        assert_eq!(LayerGraphParams::new(6, 2, 2).unwrap().d(), 3);
        assert_eq!(LayerGraphParams::new(6, 2, 2).unwrap().s(), 6);
        assert_eq!(LayerGraphParams::new(18, 8, 2).unwrap().d(), 36);
    }

    #[test]
    fn d_bounds() {
        for k in 2..=20u32 {
            for r in 1..=k {
                let d = LayerGraphParams::new(2 * k + r, k, r).unwrap().d() as f64;
                let (kf, rf) = (f64::from(k), f64::from(r));
                assert!((kf / rf).powf(rf) <= d, "lower k={k} r={r}");
                assert!(d <= (10.0 * kf / rf).powf(rf), "upper k={k} r={r}");
            }
        }
    }

    #[test]
    fn adjacency_agrees_with_neighbor_lists() {
        let g = LayerGraph::new(LayerGraphParams::new(6, 2, 2).unwrap()).unwrap();
        for x in 0..g.part_len(Side::X) {
            let nb = g.neighbors(Side::X, x);
            for y in 0..g.part_len(Side::Y) {
                assert_eq!(g.adjacent(x, y), nb.contains(&y));
                assert_eq!(g.neighbors(Side::Y, y).contains(&x), nb.contains(&y));
            }
        }
    }
}
