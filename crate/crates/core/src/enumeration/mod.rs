//! Exact enumeration: intersecting families through the Kneser graph, and
//! independent sets of the layer graph with their component structure.

mod independent;
mod kneser;

use serde::Serialize;

use crate::error::{Error, Result};

pub use independent::{
    class_threshold, count_independent_by_top, decompose, enumerate_independent_sets, independent_set_report,
    verify_c_partition, ComponentDecomposition, ComponentStats, ContainerGroup, IndependentSetReport,
    PartitionReport, SizeClass, INDEPENDENT_CAP,
};
pub use kneser::{
    count_intersecting, count_intersecting_raw, for_each_intersecting, maximal_families, maximal_families_raw,
    maximal_profile, trivial_count, BollobasCheck, CountReport, FamilyParams, HiltonMilnerCheck, KneserGraph,
    MaximalProfile, KNESER_CAP, RAW_CAP,
};

/// Wall time and worker count, attached to reports only on request so that
/// default output is byte-stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    #[serde(serialize_with = "crate::report::real12")]
    pub wall_seconds: f64,
    pub workers: usize,
}

pub fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}
