//! The graph container algorithm for `(q, s)`-biregular bipartite graphs.
//!
//! For a 2-linked `A ⊆ X` the pipeline builds a φ-approximation `F'` of
//! `A` from a sampled set `T0`, grows it into a ψ-approximation `(S, F)`,
//! and checks every guarantee the construction is supposed to deliver.
//! [`container_family`] runs it over all of `G(a, g)` and compares the
//! number of distinct certificates with the explicit bound.

mod approx;
mod bounds;
mod cover;
mod family;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{biregular_check, neighborhood, BipartiteGraph, Side};
use crate::subset::KSubsets;
use crate::vertex_set::VertexSet;

pub use approx::{is_psi_approximation, Certificate, PhiApproximation, Pipeline, T0Check, T0Search, T0Source, T0_EXHAUSTIVE_LIMIT};
pub use bounds::{appendix_bound_ln, ln_binomial_sum_le, theorem_bounds, TheoremBounds};
pub use cover::{greedy_cover, CoverResult};
pub use family::{
    container_families, container_family, two_linked_sets_by_ag, ContainerFamilyReport, ContainerPair, SEED_BATTERY, TWO_LINKED_CAP,
};

/// Largest `s` for the exact `m_φ` scan.
pub const M_PHI_DEGREE_CAP: usize = 20;

pub const DEFAULT_RETRY_CAP: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContainerParams {
    pub phi: u32,
    pub psi: u32,
    #[serde(serialize_with = "crate::report::real12")]
    pub big_c: f64,
    pub seed: u64,
    pub retry_cap: u32,
}

impl ContainerParams {
    /// `C = 1`, seed 0 and the default retry cap.
    pub fn new(phi: u32, psi: u32) -> Self {
        ContainerParams {
            phi,
            psi,
            big_c: 1.0,
            seed: 0,
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ContainerParams { seed, ..self }
    }

    /// Checks the parameter domains against the degrees `(q, s)` and
    /// returns the sampling rate `p = C ln q / (φ q)`.
    pub fn validate(&self, q: usize, s: usize) -> Result<f64> {
        if q < 2 || s < 2 {
            return Err(Error::invalid(format!("container method needs q, s >= 2, got ({q}, {s})")));
        }
        let (phi, psi) = (self.phi as usize, self.psi as usize);
        if phi < 1 || phi > s - 1 {
            return Err(Error::invalid(format!("phi = {phi} outside [1, s-1] = [1, {}]", s - 1)));
        }
        if psi < 1 || psi > q.min(s) - 1 {
            return Err(Error::invalid(format!("psi = {psi} outside [1, min(q,s)-1] = [1, {}]", q.min(s) - 1)));
        }
        if !(self.big_c > 0.0) || !self.big_c.is_finite() {
            return Err(Error::invalid("C must be a positive finite number"));
        }
        if self.retry_cap == 0 {
            return Err(Error::invalid("retry cap must be at least 1"));
        }
        let p = self.big_c * (q as f64).ln() / (phi as f64 * q as f64);
        if p >= 1.0 {
            return Err(Error::invalid(format!("C ln q / (phi q) = {p} must be below 1")));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainerStats {
    /// `|[A]|`
    pub a: usize,
    /// `|N(A)|`
    pub g: usize,
    /// `g s - a q`, the number of edges from `N(A)` to `X \ [A]`.
    pub t: u64,
    pub m_phi: usize,
    #[serde(serialize_with = "crate::report::real12")]
    pub p: f64,
    /// `3Cg ln q/(φq) + 3g / q^{C m_φ/(φq)} + 3t ln s/(q(s-φ))`
    #[serde(serialize_with = "crate::report::real12")]
    pub t_bound: f64,
}

impl ContainerStats {
    pub fn new(q: usize, s: usize, a: usize, g: usize, m_phi: usize, params: &ContainerParams) -> Result<Self> {
        let p = params.validate(q, s)?;
        let edges = g * s;
        let inside = a * q;
        if inside > edges {
            return Err(Error::violation("t = gs - aq >= 0", format!("a={a}, g={g}, q={q}, s={s}")));
        }
        let t = (edges - inside) as u64;
        let (qf, sf, phi) = (q as f64, s as f64, f64::from(params.phi));
        let c = params.big_c;
        let t_bound = 3.0 * c * g as f64 * qf.ln() / (phi * qf)
            + 3.0 * g as f64 / qf.powf(c * m_phi as f64 / (phi * qf))
            + 3.0 * t as f64 * sf.ln() / (qf * (sf - phi));
        Ok(ContainerStats { a, g, t, m_phi, p, t_bound })
    }
}

/// `m_φ = min |N(K)|` over `y ∈ Y` and `K ⊆ N(y)` with `|K| > φ`.
///
/// `N(K)` only grows with `K`, so the minimum is attained at `|K| = φ + 1`
/// and only those subsets are scanned.
pub fn m_phi<G: BipartiteGraph + ?Sized>(g: &G, phi: u32) -> Result<usize> {
    let (_, s) = biregular_check(g)?;
    if s > M_PHI_DEGREE_CAP {
        return Err(Error::CapExceeded {
            what: "m_phi scan degree s",
            limit: M_PHI_DEGREE_CAP as u64,
            actual: s as u64,
        });
    }
    let size = phi as usize + 1;
    if phi < 1 || size > s {
        return Err(Error::invalid(format!("phi = {phi} outside [1, s-1] = [1, {}]", s.saturating_sub(1))));
    }
    let x_len = g.part_len(Side::X);
    let mut best = usize::MAX;
    for y in 0..g.part_len(Side::Y) {
        let around = g.neighbors(Side::Y, y);
        for pattern in KSubsets::new(around.len() as u32, size as u32) {
            let k = VertexSet::from_indices(x_len, pattern.elements().map(|e| around[e as usize - 1]));
            best = best.min(neighborhood(g, Side::X, &k).len());
        }
    }
    Ok(best)
}

/// `m_φ` by scanning every `K ⊆ N(y)` with `|K| > φ`.
pub fn m_phi_all_sizes<G: BipartiteGraph + ?Sized>(g: &G, phi: u32) -> Result<usize> {
    let (_, s) = biregular_check(g)?;
    if s > M_PHI_DEGREE_CAP {
        return Err(Error::CapExceeded {
            what: "m_phi scan degree s",
            limit: M_PHI_DEGREE_CAP as u64,
            actual: s as u64,
        });
    }
    let x_len = g.part_len(Side::X);
    let mut best = usize::MAX;
    for y in 0..g.part_len(Side::Y) {
        let around = g.neighbors(Side::Y, y);
        for mask in 0u64..1 << around.len() {
            if mask.count_ones() <= phi {
                continue;
            }
            let k = VertexSet::from_indices(x_len, (0..around.len()).filter(|i| mask >> i & 1 == 1).map(|i| around[i]));
            best = best.min(neighborhood(g, Side::X, &k).len());
        }
    }
    if best == usize::MAX {
        return Err(Error::invalid(format!("no K with |K| > {phi}")));
    }
    Ok(best)
}
