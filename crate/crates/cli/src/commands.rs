use std::time::Instant;

use container_lab::containers::{
    container_families, container_family, two_linked_sets_by_ag, Certificate, ContainerFamilyReport, ContainerParams,
    Pipeline,
};
use container_lab::enumeration::{count_intersecting, maximal_profile, Timing};
use container_lab::families::{phi_graph, phi_map};
use container_lab::graph::{biregular_check, neighborhood};
use container_lab::isoperimetry::{verify_isoperimetry, IsoMode};
use container_lab::report::{emit, histogram_csv, Format};
use container_lab::verify::{run_criterion, verify_all, VerifyReport};
use container_lab::{
    BipartiteGraph, ExplicitGraph, KFamily, LayerGraph, LayerGraphParams, Side, SubsetWord, VertexSet,
};
use serde::Serialize;

use crate::{read_input, Cli, Command, ContainerArgs, Failure, ModeArg};

pub struct Outcome {
    pub text: String,
    pub code: u8,
    /// Lines for standard error.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: 0,
            notes: Vec::new(),
        }
    }

    fn checked(text: String, holds: bool, what: &str) -> Self {
        Outcome {
            text,
            code: if holds { 0 } else { 1 },
            notes: if holds { Vec::new() } else { vec![format!("violation: {what}")] },
        }
    }
}

struct Clock {
    start: Instant,
    workers: usize,
    enabled: bool,
}

impl Clock {
    fn stop(&self) -> Option<Timing> {
        self.enabled.then(|| Timing {
            wall_seconds: self.start.elapsed().as_secs_f64(),
            workers: self.workers,
        })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let workers = match cli.global.workers {
        Some(0) => return Err(Failure::usage("--workers must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let format: Format = cli.global.format.into();
    let clock = Clock {
        start: Instant::now(),
        workers,
        enabled: cli.global.timing,
    };
    match &cli.command {
        Command::Count { n, k, profile } => {
            let mut report = count_intersecting(*n, *k, workers)?;
            if *profile {
                report.maximal_profile = Some(maximal_profile(*n, *k)?);
            }
            report.timing = clock.stop();
            Ok(Outcome::ok(emit(&report, format)?))
        }
        Command::Maximal { n, k } => {
            let mut profile = maximal_profile(*n, *k)?;
            profile.timing = clock.stop();
            let text = match format {
                Format::Csv => histogram_csv(&profile.profile)?,
                Format::Json => emit(&profile, format)?,
            };
            let holds = profile.bollobas.holds && profile.hilton_milner.as_ref().is_none_or(|c| c.respected);
            Ok(Outcome::checked(text, holds, "maximal-family bounds"))
        }
        Command::Phi { file, family, n, k } => {
            let family = match family {
                Some(inline) => KFamily::parse_inline(inline, n.expect("required"), k.expect("required"))?,
                None => KFamily::parse(&read_input(file.as_ref())?)?,
            };
            let report = phi_report(&family, clock)?;
            let holds = report.independent;
            Ok(Outcome::checked(emit(&report, format)?, holds, "phi image is not independent"))
        }
        Command::Iso { n, k, r, mode } => {
            let mode = match mode {
                ModeArg::Exhaustive => IsoMode::Exhaustive,
                ModeArg::Colex => IsoMode::Colex,
            };
            let mut report = verify_isoperimetry(LayerGraphParams::new(*n, *k, *r)?, mode, workers)?;
            report.timing = clock.stop();
            Ok(Outcome::ok(emit(&report, format)?))
        }
        Command::Containers(args) => containers(args, workers, format, clock),
        Command::VerifyAll { only, .. } => {
            let report = if only.is_empty() {
                verify_all(workers)
            } else {
                let criteria: Vec<_> = only.iter().map(|&id| run_criterion(id, workers)).collect();
                VerifyReport {
                    tier: "desk",
                    all_passed: criteria.iter().all(|c| c.passed),
                    criteria,
                }
            };
            let notes = report.criteria.iter().map(|c| c.line()).collect();
            let code = if report.all_passed { 0 } else { 1 };
            let output = VerifyOutput {
                report,
                timing: clock.stop(),
            };
            Ok(Outcome {
                text: emit(&output, format)?,
                code,
                notes,
            })
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: VerifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct PhiReport {
    params: LayerGraphParams,
    f: u32,
    a: Vec<SubsetWord>,
    b: Vec<SubsetWord>,
    a_indices: VertexSet,
    b_indices: VertexSet,
    size_a: usize,
    size_b: usize,
    independent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

fn phi_report(family: &KFamily, clock: Clock) -> Result<PhiReport, Failure> {
    let image = phi_map(family)?;
    let graph = phi_graph(family.n(), family.k())?;
    let by_adjacency = neighborhood(&graph, Side::X, &image.a_indices).is_disjoint(&image.b_indices);
    Ok(PhiReport {
        params: image.params,
        f: image.f,
        size_a: image.a.len(),
        size_b: image.b.len(),
        independent: by_adjacency && image.is_independent(),
        a: image.a,
        b: image.b,
        a_indices: image.a_indices,
        b_indices: image.b_indices,
        timing: clock.stop(),
    })
}

#[derive(Serialize)]
struct ProvenanceEntry {
    set: VertexSet,
    certificate: Certificate,
}

#[derive(Serialize)]
struct ContainersReport {
    graph: String,
    x_len: usize,
    y_len: usize,
    q: usize,
    s: usize,
    params: ContainerParams,
    families: Vec<ContainerFamilyReport>,
    all_within_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Vec<ProvenanceEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

fn load_graph(args: &ContainerArgs) -> Result<(String, Box<dyn BipartiteGraph>), Failure> {
    if let Some(layers) = &args.layers {
        let (n, k, r) = (layers[0], layers[1], layers[2]);
        let graph = LayerGraph::new(LayerGraphParams::new(n, k, r)?)?;
        return Ok((format!("H({n},{k},{r})"), Box::new(graph)));
    }
    let path = args.graph.as_ref().expect("clap requires --graph or --layers");
    let graph = ExplicitGraph::parse(&read_input(Some(path))?)?;
    Ok((path.display().to_string(), Box::new(graph)))
}

fn containers(args: &ContainerArgs, workers: usize, format: Format, clock: Clock) -> Result<Outcome, Failure> {
    let (name, graph) = load_graph(args)?;
    let graph = graph.as_ref();
    let (q, s) = biregular_check(graph)?;
    let params = ContainerParams {
        phi: args.phi,
        psi: args.psi,
        big_c: args.big_c,
        seed: args.seed,
        retry_cap: args.retry_cap,
    };
    params.validate(q, s)?;
    let families = match (args.a, args.g) {
        (Some(a), Some(g)) => vec![container_family(graph, a, g, params, workers)?],
        _ => container_families(graph, params, workers)?,
    };
    let provenance = if args.provenance {
        let pipeline = Pipeline::new(graph, params)?;
        let mut entries = Vec::new();
        for ((a, g), sets) in two_linked_sets_by_ag(graph)? {
            if args.a.is_some_and(|want| want != a) || args.g.is_some_and(|want| want != g) {
                continue;
            }
            for set in sets {
                let certificate = pipeline.certificate(&set)?;
                entries.push(ProvenanceEntry { set, certificate });
            }
        }
        Some(entries)
    } else {
        None
    };
    let all_within_bound = families.iter().all(|f| f.within_bound);
    let report = ContainersReport {
        graph: name,
        x_len: graph.part_len(Side::X),
        y_len: graph.part_len(Side::Y),
        q,
        s,
        params,
        families,
        all_within_bound,
        provenance,
        timing: clock.stop(),
    };
    Ok(Outcome::checked(emit(&report, format)?, all_within_bound, "certificate count exceeds the bound"))
}
