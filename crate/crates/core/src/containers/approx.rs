use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cover::greedy_cover;
use super::{m_phi, ContainerParams, ContainerStats};
use crate::error::{Error, Result};
use crate::graph::{biregular_check, closure, degree_into, is_linked, neighborhood, BipartiteGraph, Side};
use crate::isoperimetry::meets_bound;
use crate::subset::KSubsets;
use crate::vertex_set::VertexSet;

/// `T0` fallback search runs over all subsets of `N(A)` up to this size.
pub const T0_EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum T0Source {
    Sampled,
    Exhaustive,
    Supplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T0Check {
    pub size: usize,
    #[serde(serialize_with = "crate::report::real12")]
    pub size_bound: f64,
    pub edges_out: usize,
    #[serde(serialize_with = "crate::report::real12")]
    pub edges_bound: f64,
    pub uncovered: usize,
    #[serde(serialize_with = "crate::report::real12")]
    pub uncovered_bound: f64,
}

impl T0Check {
    pub fn holds(&self) -> bool {
        meets_bound(self.size_bound, self.size as f64)
            && meets_bound(self.edges_bound, self.edges_out as f64)
            && meets_bound(self.uncovered_bound, self.uncovered as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T0Search {
    pub t0: VertexSet,
    pub source: T0Source,
    /// Samples drawn before success (all of them when the fallback ran).
    pub attempts: u32,
    pub check: T0Check,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiApproximation {
    pub stats: ContainerStats,
    pub t0: T0Search,
    pub t0_prime: VertexSet,
    pub l: VertexSet,
    /// `E(T0, X \ [A])` as `(y, x)` pairs.
    pub omega: Vec<(usize, usize)>,
    pub t1: VertexSet,
    pub f_prime: VertexSet,
    /// `T0 ∪ T0' ∪ T1`
    pub t: VertexSet,
    #[serde(serialize_with = "crate::report::real12")]
    pub t1_bound: f64,
}

/// A ψ-approximation `(S, F)` of `A` with the sets that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub s: VertexSet,
    pub f: VertexSet,
    pub params: ContainerParams,
    /// Seed actually used for `A` (the run seed xor the index of `min A`).
    pub derived_seed: u64,
    pub phi_approximation: PhiApproximation,
    pub f1: VertexSet,
    pub f2: VertexSet,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    #[serde(serialize_with = "crate::report::real12")]
    pub p1_bound: f64,
    #[serde(serialize_with = "crate::report::real12")]
    pub p2_bound: f64,
    #[serde(serialize_with = "crate::report::real12")]
    pub s_bound: f64,
}

/// Per-`A` quantities shared by every step.
struct Context {
    a: VertexSet,
    closure: VertexSet,
    nbhd: VertexSet,
    /// `N(A)^φ`
    nbhd_phi: VertexSet,
    stats: ContainerStats,
}

/// The container pipeline on one graph with fixed parameters.
pub struct Pipeline<'g, G: BipartiteGraph + ?Sized> {
    graph: &'g G,
    params: ContainerParams,
    q: usize,
    s: usize,
    m_phi: usize,
}

impl<'g, G: BipartiteGraph + ?Sized> Pipeline<'g, G> {
    pub fn new(graph: &'g G, params: ContainerParams) -> Result<Self> {
        let (q, s) = biregular_check(graph)?;
        params.validate(q, s)?;
        let m_phi = m_phi(graph, params.phi)?;
        Ok(Pipeline {
            graph,
            params,
            q,
            s,
            m_phi,
        })
    }

    pub fn params(&self) -> &ContainerParams {
        &self.params
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.q, self.s)
    }

    pub fn m_phi(&self) -> usize {
        self.m_phi
    }

    fn context(&self, a: &VertexSet) -> Result<Context> {
        let g = self.graph;
        if a.universe() != g.part_len(Side::X) {
            return Err(Error::invalid("A must be a subset of X"));
        }
        if a.is_empty() {
            return Err(Error::invalid("A must be non-empty"));
        }
        if !is_linked(g, Side::X, a, 2) {
            return Err(Error::invalid(format!("A = {a:?} is not 2-linked")));
        }
        let closure = closure(g, a);
        let nbhd = neighborhood(g, Side::X, a);
        let mut nbhd_phi = VertexSet::empty(nbhd.universe());
        for y in nbhd.iter() {
            if degree_into(g, Side::Y, y, &closure) > self.params.phi as usize {
                nbhd_phi.insert(y);
            }
        }
        let stats = ContainerStats::new(self.q, self.s, closure.len(), nbhd.len(), self.m_phi, &self.params)?;
        Ok(Context {
            a: a.clone(),
            closure,
            nbhd,
            nbhd_phi,
            stats,
        })
    }

    pub fn stats(&self, a: &VertexSet) -> Result<ContainerStats> {
        Ok(self.context(a)?.stats)
    }

    /// `N_{[A]}(T0)`, then `N` of that.
    fn reach(&self, ctx: &Context, t0: &VertexSet) -> VertexSet {
        let inner = neighborhood(self.graph, Side::Y, t0).intersection(&ctx.closure);
        neighborhood(self.graph, Side::X, &inner)
    }

    fn check_t0(&self, ctx: &Context, t0: &VertexSet) -> T0Check {
        let ContainerStats { g, t, p, m_phi, .. } = ctx.stats;
        let edges_out = t0
            .iter()
            .map(|y| self.graph.degree(Side::Y, y) - degree_into(self.graph, Side::Y, y, &ctx.closure))
            .sum();
        let uncovered = ctx.nbhd_phi.difference(&self.reach(ctx, t0)).len();
        T0Check {
            size: t0.len(),
            size_bound: 3.0 * g as f64 * p,
            edges_out,
            edges_bound: 3.0 * t as f64 * p,
            uncovered,
            uncovered_bound: 3.0 * g as f64 * (-p * m_phi as f64).exp(),
        }
    }

    /// Seed used for `A`: the run seed xor the index of `min A`.
    pub fn derived_seed(&self, a: &VertexSet) -> u64 {
        self.params.seed ^ a.first().unwrap_or(0) as u64
    }

    fn search_t0(&self, ctx: &Context) -> Result<T0Search> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.derived_seed(&ctx.a));
        let candidates = ctx.nbhd.to_vec();
        for attempt in 1..=self.params.retry_cap {
            let mut t0 = VertexSet::empty(ctx.nbhd.universe());
            for &y in &candidates {
                if rng.random_bool(ctx.stats.p) {
                    t0.insert(y);
                }
            }
            let check = self.check_t0(ctx, &t0);
            if check.holds() {
                return Ok(T0Search {
                    t0,
                    source: T0Source::Sampled,
                    attempts: attempt,
                    check,
                });
            }
        }
        if candidates.len() <= T0_EXHAUSTIVE_LIMIT {
            for size in 0..=candidates.len() as u32 {
                for pattern in KSubsets::new(candidates.len() as u32, size) {
                    let t0 = VertexSet::from_indices(
                        ctx.nbhd.universe(),
                        pattern.elements().map(|e| candidates[e as usize - 1]),
                    );
                    let check = self.check_t0(ctx, &t0);
                    if check.holds() {
                        return Ok(T0Search {
                            t0,
                            source: T0Source::Exhaustive,
                            attempts: self.params.retry_cap,
                            check,
                        });
                    }
                }
            }
        }
        Err(Error::T0NotFound {
            attempts: self.params.retry_cap,
            neighborhood: candidates.len(),
        })
    }

    /// Seeded search for `T0 ⊆ N(A)` meeting all three size conditions.
    pub fn find_t0(&self, a: &VertexSet) -> Result<T0Search> {
        let ctx = self.context(a)?;
        self.search_t0(&ctx)
    }

    pub fn phi_approximation(&self, a: &VertexSet) -> Result<PhiApproximation> {
        let ctx = self.context(a)?;
        let search = self.search_t0(&ctx)?;
        self.build_phi(&ctx, search)
    }

    /// φ-approximation from a caller-chosen `T0`, which must satisfy the
    /// three conditions.
    pub fn phi_approximation_from_t0(&self, a: &VertexSet, t0: &VertexSet) -> Result<PhiApproximation> {
        let ctx = self.context(a)?;
        if !t0.is_subset(&ctx.nbhd) {
            return Err(Error::invalid("T0 must be a subset of N(A)"));
        }
        let check = self.check_t0(&ctx, t0);
        if !check.holds() {
            return Err(Error::invalid(format!("T0 = {t0:?} violates its size conditions")));
        }
        let search = T0Search {
            t0: t0.clone(),
            source: T0Source::Supplied,
            attempts: 0,
            check,
        };
        self.build_phi(&ctx, search)
    }

    fn build_phi(&self, ctx: &Context, search: T0Search) -> Result<PhiApproximation> {
        let g = self.graph;
        let t0 = &search.t0;
        let reach = self.reach(ctx, t0);
        let t0_prime = ctx.nbhd_phi.difference(&reach);
        let l = t0_prime.union(&reach);
        let outside = ctx.closure.complement();
        let omega: Vec<(usize, usize)> = t0
            .iter()
            .flat_map(|y| {
                g.neighbors(Side::Y, y)
                    .into_iter()
                    .filter(|&x| outside.contains(x))
                    .map(move |x| (y, x))
            })
            .collect();
        let targets = ctx.closure.difference(&neighborhood(g, Side::Y, &l));
        let pool = ctx.nbhd.difference(&l);
        let cover = greedy_cover(g, &targets, &pool)?;
        let t1 = cover.cover;
        let f_prime = l.union(&t1);
        let t = t0.union(&t0_prime).union(&t1);
        let (q, s, phi) = (self.q as f64, self.s as f64, f64::from(self.params.phi));
        let t1_bound = 3.0 * ctx.stats.t as f64 * s.ln() / (q * (s - phi));
        let approx = PhiApproximation {
            stats: ctx.stats.clone(),
            t0: search,
            t0_prime,
            l,
            omega,
            t1,
            f_prime,
            t,
            t1_bound,
        };
        self.check_phi(ctx, &approx)?;
        Ok(approx)
    }

    fn check_phi(&self, ctx: &Context, approx: &PhiApproximation) -> Result<()> {
        let witness = || format!("A = {:?}", ctx.a);
        if !is_phi_approximation(self.graph, &ctx.closure, &ctx.nbhd, &ctx.nbhd_phi, &approx.f_prime) {
            return Err(Error::violation("phi-approximation definition", witness()));
        }
        if !is_linked(self.graph, Side::Y, &approx.t, 8) {
            return Err(Error::violation("T is 8-linked", format!("{}, T = {:?}", witness(), approx.t)));
        }
        if !meets_bound(ctx.stats.t_bound, approx.t.len() as f64) {
            return Err(Error::violation(
                "|T| <= t_bound",
                format!("{}, |T| = {}, t_bound = {}", witness(), approx.t.len(), ctx.stats.t_bound),
            ));
        }
        if !meets_bound(approx.t1_bound, approx.t1.len() as f64) {
            return Err(Error::violation(
                "|T1| <= 3t ln s / (q(s - phi))",
                format!("{}, |T1| = {}", witness(), approx.t1.len()),
            ));
        }
        Ok(())
    }

    /// The two-step algorithm turning a φ-approximation into `(S, F)`.
    pub fn psi_approximation(&self, a: &VertexSet, approx: PhiApproximation) -> Result<Certificate> {
        let ctx = self.context(a)?;
        if !is_phi_approximation(self.graph, &ctx.closure, &ctx.nbhd, &ctx.nbhd_phi, &approx.f_prime) {
            return Err(Error::invalid("F' is not a phi-approximation of A"));
        }
        let g = self.graph;
        let (q, s) = (self.q, self.s);
        let psi = self.params.psi as usize;
        let x_len = g.part_len(Side::X);
        let y_len = g.part_len(Side::Y);

        let mut f1 = approx.f_prime.clone();
        let mut p1 = Vec::new();
        loop {
            let missing = ctx.nbhd.difference(&f1);
            let Some(v) = ctx.closure.iter().find(|&v| degree_into(g, Side::X, v, &missing) > psi) else {
                break;
            };
            for y in g.neighbors(Side::X, v) {
                f1.insert(y);
            }
            p1.push(v);
        }
        let s1 = VertexSet::from_indices(x_len, (0..x_len).filter(|&v| degree_into(g, Side::X, v, &f1) + psi >= q));

        let outside_nbhd = ctx.nbhd.complement();
        let mut s2 = s1;
        let mut p2 = Vec::new();
        while let Some(u) = outside_nbhd.iter().find(|&u| degree_into(g, Side::Y, u, &s2) > psi) {
            for x in g.neighbors(Side::Y, u) {
                s2.remove(x);
            }
            p2.push(u);
        }
        let f2 = VertexSet::from_indices(y_len, (0..y_len).filter(|&u| degree_into(g, Side::Y, u, &s2) > psi));
        let f = f1.union(&f2);

        let t = ctx.stats.t as f64;
        let (qf, sf, phi, psif) = (q as f64, s as f64, f64::from(self.params.phi), psi as f64);
        let certificate = Certificate {
            p1_bound: t / ((sf - phi) * psif),
            p2_bound: t / ((qf - psif) * psif),
            s_bound: sf / qf * f.len() as f64 + psif * t / qf * (1.0 / (qf - psif) + 1.0 / (sf - psif)),
            s: s2,
            f,
            params: self.params,
            derived_seed: self.derived_seed(a),
            phi_approximation: approx,
            f1,
            f2,
            p1,
            p2,
        };
        self.check_psi(&ctx, &certificate)?;
        Ok(certificate)
    }

    fn check_psi(&self, ctx: &Context, c: &Certificate) -> Result<()> {
        let witness = |what: &str| format!("A = {:?}: {what}", ctx.a);
        if let Some(failure) = psi_conditions(self.graph, &ctx.closure, &ctx.nbhd, self.params.psi, &c.s, &c.f) {
            return Err(Error::violation("psi-approximation definition", witness(&failure)));
        }
        if !meets_bound(c.p1_bound, c.p1.len() as f64) {
            return Err(Error::violation("|P1| <= t/((s - phi) psi)", witness(&format!("P1 = {:?}", c.p1))));
        }
        if !meets_bound(c.p2_bound, c.p2.len() as f64) {
            return Err(Error::violation("|P2| <= t/((q - psi) psi)", witness(&format!("P2 = {:?}", c.p2))));
        }
        if !meets_bound(c.s_bound, c.s.len() as f64) {
            return Err(Error::violation(
                "|S| bound",
                witness(&format!("|S| = {}, bound = {}", c.s.len(), c.s_bound)),
            ));
        }
        Ok(())
    }

    /// Full pipeline for one `A`.
    pub fn certificate(&self, a: &VertexSet) -> Result<Certificate> {
        let approx = self.phi_approximation(a)?;
        self.psi_approximation(a, approx)
    }
}

/// `N(A)^φ ⊆ F' ⊆ N(A)` and `N(F') ⊇ [A]`.
fn is_phi_approximation<G: BipartiteGraph + ?Sized>(
    g: &G,
    closure: &VertexSet,
    nbhd: &VertexSet,
    nbhd_phi: &VertexSet,
    f_prime: &VertexSet,
) -> bool {
    nbhd_phi.is_subset(f_prime) && f_prime.is_subset(nbhd) && closure.is_subset(&neighborhood(g, Side::Y, f_prime))
}

/// First failing ψ-approximation condition, if any.
fn psi_conditions<G: BipartiteGraph + ?Sized>(
    g: &G,
    closure: &VertexSet,
    nbhd: &VertexSet,
    psi: u32,
    s: &VertexSet,
    f: &VertexSet,
) -> Option<String> {
    let psi = psi as usize;
    if !f.is_subset(nbhd) {
        return Some("F is not inside N(A)".into());
    }
    if !closure.is_subset(s) {
        return Some("S does not contain [A]".into());
    }
    if let Some(u) = s.iter().find(|&u| degree_into(g, Side::X, u, f) + psi < g.degree(Side::X, u)) {
        return Some(format!("d_F({}) < q - psi", g.vertex_label(Side::X, u)));
    }
    let outside_s = s.complement();
    if let Some(v) = f
        .complement()
        .iter()
        .find(|&v| degree_into(g, Side::Y, v, &outside_s) + psi < g.degree(Side::Y, v))
    {
        return Some(format!("d_(X\\S)({}) < s - psi", g.vertex_label(Side::Y, v)));
    }
    None
}

/// Checks the ψ-approximation definition for an arbitrary pair `(S, F)`.
pub fn is_psi_approximation<G: BipartiteGraph + ?Sized>(g: &G, a: &VertexSet, psi: u32, s: &VertexSet, f: &VertexSet) -> bool {
    let closure = closure(g, a);
    let nbhd = neighborhood(g, Side::X, a);
    psi_conditions(g, &closure, &nbhd, psi, s, f).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ExplicitGraph;

    fn single(universe: usize, v: usize) -> VertexSet {
        VertexSet::from_indices(universe, [v])
    }

    #[test]
    fn six_cycle_trace() {
        let g = ExplicitGraph::cycle(3);
        let pipeline = Pipeline::new(&g, ContainerParams::new(1, 1)).unwrap();
        let a = single(3, 0);
        let stats = pipeline.stats(&a).unwrap();
        assert_eq!((stats.a, stats.g, stats.t, stats.m_phi), (1, 2, 2, 3));
        let approx = pipeline.phi_approximation_from_t0(&a, &VertexSet::empty(3)).unwrap();
        assert!(approx.l.is_empty());
        assert_eq!(approx.t1.to_vec(), vec![0]);
        assert_eq!(approx.f_prime.to_vec(), vec![0]);
        let cert = pipeline.psi_approximation(&a, approx).unwrap();
        assert!(cert.p1.is_empty() && cert.p2.is_empty());
        assert_eq!(cert.s.to_vec(), vec![0, 1]);
        assert_eq!(cert.f.to_vec(), vec![0]);
        assert!((cert.s_bound - 3.0).abs() < 1e-12);
        assert!(is_psi_approximation(&g, &a, 1, &cert.s, &cert.f));
    }

    #[test]
    fn empty_t0_is_valid_when_nothing_is_heavy() {
        let g = ExplicitGraph::cycle(3);
        let pipeline = Pipeline::new(&g, ContainerParams::new(1, 1)).unwrap();
        let search = pipeline.find_t0(&single(3, 1)).unwrap();
        assert!(search.check.holds());
        let ctx = pipeline.context(&single(3, 1)).unwrap();
        assert!(pipeline.check_t0(&ctx, &VertexSet::empty(3)).holds());
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = ExplicitGraph::complete(3, 3);
        let params = ContainerParams::new(1, 1).with_seed(99);
        let pipeline = Pipeline::new(&g, params).unwrap();
        let a = single(3, 2);
        let first = pipeline.certificate(&a).unwrap();
        assert_eq!(first, pipeline.certificate(&a).unwrap());
        assert_eq!(first.derived_seed, 99 ^ 2);
    }

    #[test]
    fn whole_side_closure() {
        let g = ExplicitGraph::complete(3, 3);
        let pipeline = Pipeline::new(&g, ContainerParams::new(2, 2)).unwrap();
        let a = single(3, 0);
        let cert = pipeline.certificate(&a).unwrap();
        assert_eq!(neighborhood(&g, Side::Y, &cert.phi_approximation.f_prime), VertexSet::full(3));
        // closed A with F' = N(A): step 1 has nothing to pick
        assert!(cert.p1.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = ExplicitGraph::cycle(4);
        let pipeline = Pipeline::new(&g, ContainerParams::new(1, 1)).unwrap();
        assert!(pipeline.certificate(&VertexSet::empty(4)).is_err());
        // x0 and x2 are at distance 4 on the 8-cycle
        assert!(pipeline.certificate(&VertexSet::from_indices(4, [0, 2])).is_err());
        let bad_t0 = VertexSet::from_indices(4, [1]);
        assert!(pipeline.phi_approximation_from_t0(&single(4, 0), &bad_t0).is_err());
    }
}
