//! Bipartite graphs with parts `X` and `Y`, and the set operations the
//! container machinery is phrased in: neighborhoods, closures, graph
//! distance and linked components.

mod explicit;
mod layer;

use std::collections::VecDeque;

use serde::Serialize;

pub use explicit::ExplicitGraph;
pub use layer::{LayerGraph, LayerGraphParams};

use crate::combinatorics::{binomial_u64, BigCount};
use crate::error::{Error, Result};
use crate::subset::KSubsets;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// A bipartite graph with parts indexed `0..part_len(side)`.
///
/// Implementations must be immutable after construction; every query is
/// read-only and may run concurrently.
pub trait BipartiteGraph: Sync {
    fn part_len(&self, side: Side) -> usize;

    /// Neighbors (on the other side) of vertex `v` of `side`, ascending.
    fn neighbors(&self, side: Side, v: usize) -> Vec<usize>;

    fn degree(&self, side: Side, v: usize) -> usize {
        self.neighbors(side, v).len()
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        self.neighbors(Side::X, x).binary_search(&y).is_ok()
    }

    fn vertex_label(&self, side: Side, v: usize) -> String {
        match side {
            Side::X => format!("x{v}"),
            Side::Y => format!("y{v}"),
        }
    }
}

/// Checks that all degrees are constant on each side and returns `(q, s)`,
/// the common degree on `X` and on `Y`.
pub fn biregular_check<G: BipartiteGraph + ?Sized>(g: &G) -> Result<(usize, usize)> {
    let mut degrees = [0usize; 2];
    for (slot, side) in [Side::X, Side::Y].into_iter().enumerate() {
        let len = g.part_len(side);
        if len == 0 {
            continue;
        }
        let expected = g.degree(side, 0);
        for v in 1..len {
            let degree = g.degree(side, v);
            if degree != expected {
                return Err(Error::NotBiregular {
                    side,
                    vertex: v,
                    degree,
                    expected,
                });
            }
        }
        degrees[slot] = expected;
    }
    Ok((degrees[0], degrees[1]))
}

/// `N(A)`: every vertex on the other side adjacent to some member of `a`.
pub fn neighborhood<G: BipartiteGraph + ?Sized>(g: &G, side: Side, a: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(g.part_len(side.other()));
    for v in a.iter() {
        for u in g.neighbors(side, v) {
            out.insert(u);
        }
    }
    out
}

/// `d_S(v)`: neighbors of `v` inside `set`.
pub fn degree_into<G: BipartiteGraph + ?Sized>(g: &G, side: Side, v: usize, set: &VertexSet) -> usize {
    set.count_in(&g.neighbors(side, v))
}

/// `[A] = { v in X : N(v) ⊆ N(A) }`.
pub fn closure<G: BipartiteGraph + ?Sized>(g: &G, a: &VertexSet) -> VertexSet {
    let nbhd = neighborhood(g, Side::X, a);
    closure_within(g, &nbhd)
}

/// All `X`-vertices whose whole neighborhood lies in `nbhd`.
pub fn closure_within<G: BipartiteGraph + ?Sized>(g: &G, nbhd: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(g.part_len(Side::X));
    for v in 0..g.part_len(Side::X) {
        if g.neighbors(Side::X, v).iter().all(|&u| nbhd.contains(u)) {
            out.insert(v);
        }
    }
    out
}

/// Same-side vertices within graph distance `radius` of `v` (including `v`).
pub fn ball<G: BipartiteGraph + ?Sized>(g: &G, side: Side, v: usize, radius: usize) -> VertexSet {
    let mut seen = [
        VertexSet::empty(g.part_len(Side::X)),
        VertexSet::empty(g.part_len(Side::Y)),
    ];
    let slot = |s: Side| if s == Side::X { 0 } else { 1 };
    seen[slot(side)].insert(v);
    let mut frontier = vec![v];
    let mut frontier_side = side;
    for _ in 0..radius {
        let next_side = frontier_side.other();
        let mut next = Vec::new();
        for &u in &frontier {
            for w in g.neighbors(frontier_side, u) {
                if !seen[slot(next_side)].contains(w) {
                    seen[slot(next_side)].insert(w);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
        frontier_side = next_side;
    }
    let [x, y] = seen;
    match side {
        Side::X => x,
        Side::Y => y,
    }
}

/// Graph distance between two vertices, `None` if disconnected.
pub fn distance<G: BipartiteGraph + ?Sized>(g: &G, from: (Side, usize), to: (Side, usize)) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let offset = |(s, v): (Side, usize)| if s == Side::X { v } else { g.part_len(Side::X) + v };
    let total = g.part_len(Side::X) + g.part_len(Side::Y);
    let mut dist = vec![usize::MAX; total];
    dist[offset(from)] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some((side, v)) = queue.pop_front() {
        let d = dist[offset((side, v))];
        for w in g.neighbors(side, v) {
            let node = (side.other(), w);
            if dist[offset(node)] == usize::MAX {
                dist[offset(node)] = d + 1;
                if node == to {
                    return Some(d + 1);
                }
                queue.push_back(node);
            }
        }
    }
    None
}

/// Partition of `a` into maximal `m`-linked subsets. Two members are
/// `m`-linked when a chain inside `a` joins them with consecutive graph
/// distance at most `m` (distance measured in the whole graph).
///
/// Components are listed by their smallest member.
pub fn linked_components<G: BipartiteGraph + ?Sized>(
    g: &G,
    side: Side,
    a: &VertexSet,
    m: usize,
) -> Vec<VertexSet> {
    let mut unassigned = a.clone();
    let mut components = Vec::new();
    while let Some(start) = unassigned.first() {
        let mut component = VertexSet::empty(a.universe());
        component.insert(start);
        unassigned.remove(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let near = ball(g, side, v, m).intersection(&unassigned);
            for w in near.iter() {
                unassigned.remove(w);
                component.insert(w);
                stack.push(w);
            }
        }
        components.push(component);
    }
    components
}

pub fn is_linked<G: BipartiteGraph + ?Sized>(g: &G, side: Side, a: &VertexSet, m: usize) -> bool {
    linked_components(g, side, a, m).len() <= 1
}

/// Upper limit on the number of candidate subsets scanned by
/// [`count_linked_subsets`].
pub const LINKED_SUBSET_SCAN_CAP: u64 = 5_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct LinkedSubsetCount {
    pub vertex: usize,
    pub size: usize,
    pub link: usize,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub count: BigCount,
    /// `2 l m ln(q s)`, the log of the admissible maximum.
    #[serde(serialize_with = "crate::report::real12")]
    pub ln_bound: f64,
    pub within_bound: bool,
}

/// Exact number of `2m`-linked `size`-subsets of `X` that contain `v`,
/// compared against `exp(2 size m ln(q s))`.
pub fn count_linked_subsets<G: BipartiteGraph + ?Sized>(
    g: &G,
    v: usize,
    size: usize,
    m: usize,
) -> Result<LinkedSubsetCount> {
    let x_len = g.part_len(Side::X);
    if size == 0 || m == 0 || v >= x_len || size > x_len {
        return Err(Error::invalid(format!(
            "need 1 <= size <= |X| = {x_len}, m >= 1 and v < |X| (size={size}, m={m}, v={v})"
        )));
    }
    if x_len > 64 {
        return Err(Error::CapExceeded {
            what: "linked subset scan part size",
            limit: 64,
            actual: x_len as u64,
        });
    }
    let candidates = binomial_u64(x_len as u64 - 1, size as u64 - 1);
    if candidates > LINKED_SUBSET_SCAN_CAP {
        return Err(Error::CapExceeded {
            what: "linked subset scan",
            limit: LINKED_SUBSET_SCAN_CAP,
            actual: candidates,
        });
    }
    let (q, s) = biregular_check(g)?;
    // near[u]: X-vertices within distance 2m of u, as a mask
    let near: Vec<u64> = (0..x_len)
        .map(|u| ball(g, Side::X, u, 2 * m).to_mask())
        .collect();
    let others: Vec<usize> = (0..x_len).filter(|&u| u != v).collect();
    let mut count = 0u64;
    for pattern in KSubsets::new(others.len() as u32, size as u32 - 1) {
        let mut mask = 1u64 << v;
        for pos in pattern.elements() {
            mask |= 1u64 << others[pos as usize - 1];
        }
        if mask_connected(mask, &near) {
            count += 1;
        }
    }
    let ln_bound = 2.0 * size as f64 * m as f64 * ((q * s) as f64).ln();
    let within_bound = (count as f64).ln() <= ln_bound;
    Ok(LinkedSubsetCount {
        vertex: v,
        size,
        link: 2 * m,
        count: BigCount::from(count),
        ln_bound,
        within_bound,
    })
}

/// Connectivity of `mask` under the relation given by `near` masks.
pub(crate) fn mask_connected(mask: u64, near: &[u64]) -> bool {
    if mask == 0 {
        return true;
    }
    let start = mask & mask.wrapping_neg();
    let mut reached = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= near[u];
        }
        next &= mask & !reached;
        reached |= next;
        frontier = next;
    }
    reached == mask
}
