use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::approx::Pipeline;
use super::bounds::appendix_bound_ln;
use super::ContainerParams;
use crate::enumeration::thread_pool;
use crate::error::{Error, Result};
use crate::graph::{ball, mask_connected, BipartiteGraph, Side};
use crate::vertex_set::VertexSet;

/// Largest `|X|` for which all of `G(a, g)` is enumerated.
pub const TWO_LINKED_CAP: usize = 20;

/// Seeds every soundness sweep runs with.
pub const SEED_BATTERY: [u64; 3] = [0, 1, 0x5eed_cafe];

/// All non-empty 2-linked `A ⊆ X`, grouped by `(|[A]|, |N(A)|)`.
/// Within a group the sets are in increasing mask order.
pub fn two_linked_sets_by_ag<G: BipartiteGraph + ?Sized>(g: &G) -> Result<BTreeMap<(usize, usize), Vec<VertexSet>>> {
    let x_len = g.part_len(Side::X);
    let y_len = g.part_len(Side::Y);
    if x_len > TWO_LINKED_CAP {
        return Err(Error::CapExceeded {
            what: "2-linked set enumeration |X|",
            limit: TWO_LINKED_CAP as u64,
            actual: x_len as u64,
        });
    }
    if y_len > 64 {
        return Err(Error::CapExceeded {
            what: "2-linked set enumeration |Y|",
            limit: 64,
            actual: y_len as u64,
        });
    }
    let near: Vec<u64> = (0..x_len).map(|x| ball(g, Side::X, x, 2).to_mask()).collect();
    let nbr: Vec<u64> = (0..x_len)
        .map(|x| g.neighbors(Side::X, x).iter().fold(0u64, |m, &y| m | 1 << y))
        .collect();
    let mut groups: BTreeMap<(usize, usize), Vec<VertexSet>> = BTreeMap::new();
    for mask in 1u64..1 << x_len {
        if !mask_connected(mask, &near) {
            continue;
        }
        let n_a = (0..x_len).filter(|&x| mask >> x & 1 == 1).fold(0u64, |m, x| m | nbr[x]);
        let closed = nbr.iter().filter(|&&n| n & !n_a == 0).count();
        groups
            .entry((closed, n_a.count_ones() as usize))
            .or_default()
            .push(VertexSet::from_mask(x_len, mask));
    }
    Ok(groups)
}

/// A distinct `(S, F)` pair, as index lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ContainerPair {
    pub s: Vec<usize>,
    pub f: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainerFamilyReport {
    pub a: usize,
    pub g: usize,
    pub q: usize,
    pub s: usize,
    pub m_phi: usize,
    pub params: ContainerParams,
    /// `|G(a, g)|`
    pub sets: usize,
    pub distinct_certificates: usize,
    #[serde(serialize_with = "crate::report::real12")]
    pub ln_distinct: f64,
    #[serde(serialize_with = "crate::report::real12")]
    pub bound_ln: f64,
    pub within_bound: bool,
    pub certificates: Vec<ContainerPair>,
}

/// Runs the pipeline on every `A ∈ G(a, g)` and compares the number of
/// distinct certificates with the explicit bound.
pub fn container_family<G: BipartiteGraph + ?Sized>(
    g: &G,
    a: usize,
    g_size: usize,
    params: ContainerParams,
    workers: usize,
) -> Result<ContainerFamilyReport> {
    let sets = two_linked_sets_by_ag(g)?.remove(&(a, g_size)).unwrap_or_default();
    family_from_sets(g, a, g_size, &sets, params, workers)
}

/// [`container_family`] for every feasible `(a, g)` of the graph.
pub fn container_families<G: BipartiteGraph + ?Sized>(
    g: &G,
    params: ContainerParams,
    workers: usize,
) -> Result<Vec<ContainerFamilyReport>> {
    two_linked_sets_by_ag(g)?
        .into_iter()
        .map(|((a, gs), sets)| family_from_sets(g, a, gs, &sets, params, workers))
        .collect()
}

fn family_from_sets<G: BipartiteGraph + ?Sized>(
    g: &G,
    a: usize,
    g_size: usize,
    sets: &[VertexSet],
    params: ContainerParams,
    workers: usize,
) -> Result<ContainerFamilyReport> {
    let pipeline = Pipeline::new(g, params)?;
    let (q, s) = pipeline.degrees();
    let pool = thread_pool(workers)?;
    let pairs: Vec<ContainerPair> = pool.install(|| {
        sets.par_iter()
            .map(|set| {
                let cert = pipeline.certificate(set)?;
                Ok(ContainerPair {
                    s: cert.s.to_vec(),
                    f: cert.f.to_vec(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let certificates: Vec<ContainerPair> = pairs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let bound_ln = appendix_bound_ln(
        q,
        s,
        g.part_len(Side::Y),
        a,
        g_size,
        f64::from(params.phi),
        f64::from(params.psi),
        params.big_c,
        pipeline.m_phi() as f64,
    )?;
    let distinct = certificates.len();
    let ln_distinct = if distinct == 0 { f64::NEG_INFINITY } else { (distinct as f64).ln() };
    Ok(ContainerFamilyReport {
        a,
        g: g_size,
        q,
        s,
        m_phi: pipeline.m_phi(),
        params,
        sets: sets.len(),
        distinct_certificates: distinct,
        ln_distinct,
        bound_ln,
        within_bound: ln_distinct <= bound_ln,
        certificates,
    })
}
