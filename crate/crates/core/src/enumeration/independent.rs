//! Independent sets of the layer graph, each decomposed into the 2-linked
//! components of its top-layer part together with its container set `C`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::combinatorics::{real_binomial, BigCount};
use crate::error::{Error, Result};
use crate::graph::{closure, linked_components, neighborhood, BipartiteGraph, LayerGraph, LayerGraphParams, Side};
use crate::vertex_set::VertexSet;

/// Largest `|L_{k-1}| + |L_{k+r-1}|` the enumerator accepts.
pub const INDEPENDENT_CAP: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    pub members: VertexSet,
    /// `|[A_i]|`
    pub a: usize,
    /// `|N(A_i)|`
    pub g: usize,
}

/// Size class of `|[I ∩ L_{k+r-1}]|` against `C(2k + 3r/4, k+r-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    /// No top-layer vertex.
    Empty,
    /// `1 <= a <= threshold`.
    Small,
    /// `a > threshold`.
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    /// `I ∩ L_{k+r-1}`
    pub top: VertexSet,
    /// `I ∩ L_{k-1}`
    pub bottom: VertexSet,
    pub components: Vec<ComponentStats>,
    /// `|[I ∩ L_{k+r-1}]|`; may differ from the sum of the `a_i`.
    pub a: usize,
    /// `|N(I ∩ L_{k+r-1})|`, equal to the sum of the `g_i`.
    pub g: usize,
    pub a_sum: usize,
    /// Top part of `C`: the union of the components.
    pub container_top: VertexSet,
    /// Bottom part of `C`: `L_{k-1}` minus the union of the `N(A_i)`.
    pub container_bottom: VertexSet,
    pub class: SizeClass,
}

/// `C(2k + 3r/4, k + r - 1)` with a real upper argument.
pub fn class_threshold(params: LayerGraphParams) -> f64 {
    let x = 2.0 * f64::from(params.k) + 0.75 * f64::from(params.r);
    real_binomial(x, params.top_level())
}

fn checked_graph(params: LayerGraphParams) -> Result<LayerGraph> {
    let size = params.top_len() + params.bottom_len();
    if size > INDEPENDENT_CAP {
        return Err(Error::CapExceeded {
            what: "|L_{k-1}| + |L_{k+r-1}| vertices",
            limit: INDEPENDENT_CAP,
            actual: size,
        });
    }
    LayerGraph::new(params)
}

/// Decomposes an independent set given by its two parts.
pub fn decompose(graph: &LayerGraph, top: &VertexSet, bottom: &VertexSet, threshold: f64) -> Result<ComponentDecomposition> {
    let nbhd = neighborhood(graph, Side::X, top);
    if !nbhd.is_disjoint(bottom) {
        return Err(Error::invalid("set is not independent"));
    }
    let parts = linked_components(graph, Side::X, top, 2);
    let mut union_nbhd = VertexSet::empty(graph.part_len(Side::Y));
    let mut components = Vec::with_capacity(parts.len());
    for part in parts {
        let n_i = neighborhood(graph, Side::X, &part);
        if !n_i.is_disjoint(&union_nbhd) {
            return Err(Error::violation(
                "2-linked components have disjoint neighborhoods",
                format!("{part:?}"),
            ));
        }
        union_nbhd.union_with(&n_i);
        components.push(ComponentStats {
            a: closure(graph, &part).len(),
            g: n_i.len(),
            members: part,
        });
    }
    let a = closure(graph, top).len();
    let class = if top.is_empty() {
        SizeClass::Empty
    } else if a as f64 <= threshold {
        SizeClass::Small
    } else {
        SizeClass::Large
    };
    let container_bottom = union_nbhd.complement();
    let decomposition = ComponentDecomposition {
        top: top.clone(),
        bottom: bottom.clone(),
        a,
        g: union_nbhd.len(),
        a_sum: components.iter().map(|c| c.a).sum(),
        components,
        container_top: top.clone(),
        container_bottom,
        class,
    };
    if !decomposition.bottom.is_subset(&decomposition.container_bottom) {
        return Err(Error::violation("I ⊆ C", format!("{:?}", decomposition.bottom)));
    }
    Ok(decomposition)
}

/// Visits every independent set of `H(n, k, r)` once, in include/exclude
/// order over the top layer followed by the bottom layer.
pub fn enumerate_independent_sets<F>(params: LayerGraphParams, mut visit: F) -> Result<()>
where
    F: FnMut(&ComponentDecomposition) -> Result<()>,
{
    let graph = checked_graph(params)?;
    let threshold = class_threshold(params);
    let x_len = graph.part_len(Side::X);
    let total = x_len + graph.part_len(Side::Y);
    // combined index: top vertices first, then bottom vertices offset by |X|
    let adj: Vec<u32> = (0..total)
        .map(|v| {
            if v < x_len {
                graph.neighbors(Side::X, v).iter().fold(0, |m, &y| m | 1 << (x_len + y))
            } else {
                graph.neighbors(Side::Y, v - x_len).iter().fold(0, |m, &x| m | 1 << x)
            }
        })
        .collect();
    let mut stack = vec![(0usize, 0u32, 0u32)];
    while let Some((v, chosen, forbidden)) = stack.pop() {
        if v == total {
            let top_mask = u64::from(chosen) & ((1u64 << x_len) - 1);
            let top = VertexSet::from_mask(x_len, top_mask);
            let bottom = VertexSet::from_mask(total - x_len, u64::from(chosen) >> x_len);
            visit(&decompose(&graph, &top, &bottom, threshold)?)?;
            continue;
        }
        // pushed in reverse so that exclusion is explored first
        if forbidden >> v & 1 == 0 {
            stack.push((v + 1, chosen | 1 << v, forbidden | adj[v]));
        }
        stack.push((v + 1, chosen, forbidden));
    }
    Ok(())
}

/// `sum_{A ⊆ X} 2^{|Y \ N(A)|}`: independent sets counted by their top part.
pub fn count_independent_by_top(params: LayerGraphParams) -> Result<BigCount> {
    let graph = checked_graph(params)?;
    let x_len = graph.part_len(Side::X);
    let y_len = graph.part_len(Side::Y);
    let nbhd: Vec<u64> = (0..x_len)
        .map(|x| graph.neighbors(Side::X, x).iter().fold(0u64, |m, &y| m | 1 << y))
        .collect();
    let mut total = BigCount::from(0u8);
    for mask in 0..1u64 << x_len {
        let covered = (0..x_len).filter(|&x| mask >> x & 1 == 1).fold(0u64, |m, x| m | nbhd[x]);
        total += BigCount::from(1u8) << (y_len - covered.count_ones() as usize);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependentSetReport {
    pub params: LayerGraphParams,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub total: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub oracle_total: BigCount,
    #[serde(serialize_with = "crate::report::real12")]
    pub threshold: f64,
    #[serde(serialize_with = "crate::report::big_map_as_strings")]
    pub by_class: BTreeMap<String, BigCount>,
    /// Sets whose `|[A]|` differs from the sum of the component closures.
    pub closure_sum_mismatches: u64,
}

pub fn independent_set_report(params: LayerGraphParams) -> Result<IndependentSetReport> {
    let mut total = BigCount::from(0u8);
    let mut by_class: BTreeMap<String, BigCount> = BTreeMap::new();
    let mut closure_sum_mismatches = 0;
    enumerate_independent_sets(params, |d| {
        total += 1u8;
        let key = serde_json::to_value(d.class)?.as_str().unwrap_or_default().to_string();
        *by_class.entry(key).or_default() += 1u8;
        if d.a != d.a_sum {
            closure_sum_mismatches += 1;
        }
        Ok(())
    })?;
    Ok(IndependentSetReport {
        params,
        oracle_total: count_independent_by_top(params)?,
        threshold: class_threshold(params),
        total,
        by_class,
        closure_sum_mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainerGroup {
    pub container_top: VertexSet,
    pub container_bottom: VertexSet,
    pub g: usize,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub size: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub expected: BigCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub params: LayerGraphParams,
    pub groups: Vec<ContainerGroup>,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub group_sum: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub total: BigCount,
    pub holds: bool,
}

/// Groups every independent set by its container `C` and checks that each
/// group has exactly `2^{|L_{k-1}| - g}` members.
pub fn verify_c_partition(params: LayerGraphParams) -> Result<PartitionReport> {
    let y_len = params.bottom_len() as usize;
    let mut groups: BTreeMap<(VertexSet, VertexSet), (usize, BigCount)> = BTreeMap::new();
    enumerate_independent_sets(params, |d| {
        let entry = groups
            .entry((d.container_top.clone(), d.container_bottom.clone()))
            .or_insert((d.g, BigCount::from(0u8)));
        if entry.0 != d.g {
            return Err(Error::violation("group shares g", format!("{:?}", d.container_top)));
        }
        entry.1 += 1u8;
        Ok(())
    })?;
    let groups: Vec<ContainerGroup> = groups
        .into_iter()
        .map(|((container_top, container_bottom), (g, size))| ContainerGroup {
            expected: BigCount::from(1u8) << (y_len - g),
            container_top,
            container_bottom,
            g,
            size,
        })
        .collect();
    if let Some(bad) = groups.iter().find(|g| g.size != g.expected) {
        return Err(Error::violation(
            "container group size 2^(|L_{k-1}| - g)",
            format!(
                "C = ({:?}, {:?}) has {} sets, expected {}",
                bad.container_top, bad.container_bottom, bad.size, bad.expected
            ),
        ));
    }
    let group_sum: BigCount = groups.iter().map(|g| &g.size).sum();
    let total = count_independent_by_top(params)?;
    Ok(PartitionReport {
        params,
        holds: group_sum == total,
        groups,
        group_sum,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::SubsetWord;

    fn p(n: u32, k: u32, r: u32) -> LayerGraphParams {
        LayerGraphParams::new(n, k, r).unwrap()
    }

    #[test]
    fn empty_set_decomposition() {
        let mut seen = false;
        enumerate_independent_sets(p(5, 2, 1), |d| {
            if d.top.is_empty() && d.bottom.is_empty() {
                assert!(d.components.is_empty());
                assert_eq!(d.container_bottom.len(), 4);
                assert_eq!(d.class, SizeClass::Empty);
                seen = true;
            }
            Ok(())
        })
        .unwrap();
        assert!(seen);
    }

    #[test]
    fn single_top_vertex() {
        let params = p(5, 2, 1);
        let g = LayerGraph::new(params).unwrap();
        let v = g.x_index(SubsetWord::from_elements([1, 2]).unwrap()).unwrap();
        let top = VertexSet::from_indices(6, [v]);
        let d = decompose(&g, &top, &VertexSet::empty(4), class_threshold(params)).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!((d.a, d.g), (1, 2));
        assert_eq!(d.class, SizeClass::Small);
    }

    #[test]
    fn enumeration_matches_top_part_sum() {
        for params in [p(5, 2, 1), p(6, 2, 2)] {
            let report = independent_set_report(params).unwrap();
            assert_eq!(report.total, report.oracle_total);
            let classes: BigCount = report.by_class.values().sum();
            assert_eq!(classes, report.total);
        }
    }

    #[test]
    fn partition_identity() {
        let report = verify_c_partition(p(5, 2, 1)).unwrap();
        assert!(report.holds);
        let empty = report.groups.iter().find(|g| g.container_top.is_empty()).unwrap();
        assert_eq!(empty.size, BigCount::from(16u8));
        let g = LayerGraph::new(p(5, 2, 1)).unwrap();
        let v = g.x_index(SubsetWord::from_elements([1, 2]).unwrap()).unwrap();
        let single = report
            .groups
            .iter()
            .find(|gr| gr.container_top == VertexSet::from_indices(6, [v]))
            .unwrap();
        assert_eq!((single.g, single.size.clone()), (2, BigCount::from(4u8)));
    }

    #[test]
    fn threshold_uses_real_binomial() {
        // C(4.75, 2) = 4.75 * 3.75 / 2
        assert!((class_threshold(p(5, 2, 1)) - 8.90625).abs() < 1e-12);
    }

    #[test]
    fn cap_refusal() {
        assert!(matches!(
            enumerate_independent_sets(p(8, 3, 2), |_| Ok(())),
            Err(Error::CapExceeded { .. })
        ));
    }
}
