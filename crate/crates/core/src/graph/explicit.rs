use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;

use super::{BipartiteGraph, Side};
use crate::error::{Error, Result};

/// Swap attempts per edge in [`ExplicitGraph::random_biregular`].
const SWAP_ROUNDS: usize = 10;

/// A bipartite graph given by its edge list. Used for hand-built test
/// graphs and for graphs read from edge-list files.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    x_adj: Vec<Vec<usize>>,
    y_adj: Vec<Vec<usize>>,
}

impl ExplicitGraph {
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(x_len: usize, y_len: usize, edges: I) -> Result<Self> {
        let mut x_adj = vec![Vec::new(); x_len];
        let mut y_adj = vec![Vec::new(); y_len];
        for (x, y) in edges {
            if x >= x_len || y >= y_len {
                return Err(Error::invalid(format!("edge ({x}, {y}) outside parts {x_len} x {y_len}")));
            }
            x_adj[x].push(y);
            y_adj[y].push(x);
        }
        for list in x_adj.iter_mut().chain(y_adj.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ExplicitGraph { x_adj, y_adj })
    }

    /// The `2m`-cycle with `x_i ~ y_i` and `x_i ~ y_{i-1}` (indices mod `m`).
    pub fn cycle(m: usize) -> Self {
        assert!(m >= 2);
        let edges = (0..m).flat_map(|i| [(i, i), (i, (i + m - 1) % m)]);
        ExplicitGraph::from_edges(m, m, edges).expect("cycle edges in range")
    }

    pub fn complete(x_len: usize, y_len: usize) -> Self {
        let edges = (0..x_len).flat_map(|x| (0..y_len).map(move |y| (x, y)));
        ExplicitGraph::from_edges(x_len, y_len, edges).expect("edges in range")
    }

    pub fn perfect_matching(len: usize) -> Self {
        ExplicitGraph::from_edges(len, len, (0..len).map(|i| (i, i))).expect("edges in range")
    }

    /// Random simple `(q, s)`-biregular graph: a circulant start scrambled
    /// by random degree-preserving edge swaps. Needs `y_len` to divide
    /// `x_len * q` and `q <= y_len`.
    pub fn random_biregular<R: Rng + ?Sized>(x_len: usize, y_len: usize, q: usize, rng: &mut R) -> Result<Self> {
        if y_len == 0 || q == 0 || q > y_len || x_len * q % y_len != 0 {
            return Err(Error::invalid(format!(
                "no simple biregular graph with parts {x_len} x {y_len} and X-degree {q}"
            )));
        }
        let mut edges: Vec<(usize, usize)> =
            (0..x_len).flat_map(|x| (0..q).map(move |j| (x, (x * q + j) % y_len))).collect();
        let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
        for _ in 0..SWAP_ROUNDS * edges.len() {
            let i = rng.random_range(0..edges.len());
            let j = rng.random_range(0..edges.len());
            let ((x1, y1), (x2, y2)) = (edges[i], edges[j]);
            if x1 == x2 || y1 == y2 || present.contains(&(x1, y2)) || present.contains(&(x2, y1)) {
                continue;
            }
            present.remove(&(x1, y1));
            present.remove(&(x2, y2));
            present.insert((x1, y2));
            present.insert((x2, y1));
            edges[i] = (x1, y2);
            edges[j] = (x2, y1);
        }
        ExplicitGraph::from_edges(x_len, y_len, edges)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x_adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    pub fn without_edge(&self, x: usize, y: usize) -> Self {
        ExplicitGraph::from_edges(
            self.x_adj.len(),
            self.y_adj.len(),
            self.edges().filter(|&e| e != (x, y)),
        )
        .expect("edges in range")
    }

    /// Parses the plain-text edge-list format: a header `X <count> Y <count>`
    /// followed by one `x y` index pair per line. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `X <count> Y <count>` header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (x_len, y_len) = match fields.as_slice() {
            ["X", xc, "Y", yc] => (
                parse_index(xc, header_line)?,
                parse_index(yc, header_line)?,
            ),
            _ => {
                return Err(Error::Parse {
                    line: header_line,
                    message: format!("expected `X <count> Y <count>`, found `{header}`"),
                })
            }
        };
        let mut edges = Vec::new();
        for (line, text) in lines {
            let fields: Vec<&str> = text.split_whitespace().collect();
            let [x, y] = fields.as_slice() else {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `x y`, found `{text}`"),
                });
            };
            let (x, y) = (parse_index(x, line)?, parse_index(y, line)?);
            if x >= x_len || y >= y_len {
                return Err(Error::Parse {
                    line,
                    message: format!("edge ({x}, {y}) outside parts {x_len} x {y_len}"),
                });
            }
            edges.push((x, y));
        }
        ExplicitGraph::from_edges(x_len, y_len, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("X {} Y {}\n", self.x_adj.len(), self.y_adj.len());
        for (x, y) in self.edges() {
            writeln!(out, "{x} {y}").unwrap();
        }
        out
    }
}

fn parse_index(field: &str, line: usize) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{field}` is not a non-negative integer"),
    })
}

impl BipartiteGraph for ExplicitGraph {
    fn part_len(&self, side: Side) -> usize {
        match side {
            Side::X => self.x_adj.len(),
            Side::Y => self.y_adj.len(),
        }
    }

    fn neighbors(&self, side: Side, v: usize) -> Vec<usize> {
        match side {
            Side::X => self.x_adj[v].clone(),
            Side::Y => self.y_adj[v].clone(),
        }
    }

    fn degree(&self, side: Side, v: usize) -> usize {
        match side {
            Side::X => self.x_adj[v].len(),
            Side::Y => self.y_adj[v].len(),
        }
    }
}
