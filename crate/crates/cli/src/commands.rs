use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, ensure, Context, Result};
use hyperalg_core::fixtures;
use hyperalg_core::graph::{self, Graph, GraphFormat, InvariantReport, InvariantSettings};
use hyperalg_core::hypermatrix::{delta, parse_any, AnyHypermatrix, Hypermatrix};
use hyperalg_core::koenig::{self, GluingVariant};
use hyperalg_core::linalg::{reference_rank, Eliminate};
use hyperalg_core::power::{self, Formulation, PowerSequence, TernaryTree};
use hyperalg_core::product::{self, bm_product, general_bm_product, ProductSpec};
use hyperalg_core::random::{random_binary, random_hypermatrix, seeded};
use hyperalg_core::scalar::{Backend, Fp, Modulus, Rational, Scalar};
use log::warn;
use serde_json::json;

use crate::args::{parse_dims, Command, GenTarget, GraphFormatArg, GraphInput, Workload};
use crate::config::{record, RunConfig};

/// Runs `$body` with `$x` bound to the concrete hypermatrix inside an
/// [`AnyHypermatrix`].
macro_rules! with_any {
    ($h:expr, |$x:ident| $body:expr) => {
        match $h {
            AnyHypermatrix::Exact($x) => $body,
            AnyHypermatrix::ModP($x) => $body,
        }
    };
}

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Product { .. } => "product",
        Command::Power { .. } => "power",
        Command::Span { .. } => "span",
        Command::Ch { .. } => "ch",
        Command::Tetra { .. } => "tetra",
        Command::Inflate { .. } => "inflate",
        Command::Invariant { .. } => "invariant",
        Command::Distinguish { .. } => "distinguish",
        Command::FussCatalan { .. } => "fuss-catalan",
        Command::Bench { .. } => "bench",
        Command::Gen { .. } => "gen",
    }
}

/// Executes one command and returns its primary output text.
pub fn run(command: &Command, cfg: &RunConfig) -> Result<String> {
    match command {
        Command::Product { background, operands } => product_cmd(background.as_deref(), operands, cfg),
        Command::Power {
            input,
            index,
            degree,
            tree,
            list,
        } => power_cmd(input, *index, *degree, *tree, *list, cfg),
        Command::Span {
            input,
            terms,
            max_degree,
        } => span_cmd(input, *terms, *max_degree, cfg),
        Command::Ch { input } => ch_cmd(input, cfg),
        Command::Tetra {
            input,
            glued,
            complex,
            at,
        } => tetra_cmd(input, *glued, *complex, *at, cfg),
        Command::Inflate { graph, input } => inflate_cmd(graph, input, cfg),
        Command::Invariant { graph, input } => invariant_cmd(graph, input, cfg),
        Command::Distinguish { first, second, input } => distinguish_cmd(first, second, input, cfg),
        Command::FussCatalan { degree } => Ok(format!("{}\n", power::fuss_catalan_count(*degree)?)),
        Command::Bench {
            workload,
            size,
            repetitions,
        } => bench_cmd(*workload, *size, *repetitions, cfg),
        Command::Gen { what } => gen_cmd(what, cfg),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_hmx(path: &Path, cfg: &RunConfig) -> Result<AnyHypermatrix> {
    let h = parse_any(&read(path)?).with_context(|| path.display().to_string())?;
    cfg.resolve(h)
}

fn exact_operands(hs: Vec<AnyHypermatrix>) -> Option<Vec<Hypermatrix<Rational>>> {
    hs.into_iter()
        .map(|h| match h {
            AnyHypermatrix::Exact(x) => Some(x),
            AnyHypermatrix::ModP(_) => None,
        })
        .collect()
}

/// Brings every operand into one backend: exact if all are exact, otherwise
/// the (single) prime of the mod-p operands.
fn unify(hs: Vec<AnyHypermatrix>) -> Result<AnyOperands> {
    let prime = hs.iter().find_map(|h| match h.backend() {
        Backend::ModP(p) => Some(p),
        Backend::Exact => None,
    });
    match prime {
        None => Ok(AnyOperands::Exact(exact_operands(hs).expect("no mod-p operands"))),
        Some(p) => {
            let m = Modulus::new(p)?;
            let ops = hs
                .into_iter()
                .map(|h| h.into_modp(m))
                .collect::<Result<Vec<_>, _>>()
                .context("operands use different primes")?;
            Ok(AnyOperands::ModP(ops))
        }
    }
}

enum AnyOperands {
    Exact(Vec<Hypermatrix<Rational>>),
    ModP(Vec<Hypermatrix<Fp>>),
}

fn product_in<S: Scalar>(ops: &[Hypermatrix<S>], background: Option<&str>, cfg: &RunConfig) -> Result<Hypermatrix<S>>
where
    Hypermatrix<S>: Into<AnyHypermatrix>,
{
    let refs: Vec<&Hypermatrix<S>> = ops.iter().collect();
    let ctx = ops[0].context().clone();
    Ok(match background {
        None => bm_product(&refs)?,
        Some(bg) => {
            let bg = if bg == "delta" {
                let spec = ProductSpec::infer(&refs)?;
                delta(spec.arity, spec.inner, ctx.clone())?
            } else {
                let loaded = load_hmx(Path::new(bg), cfg)?;
                match unify(vec![ops[0].clone().into(), loaded])? {
                    AnyOperands::Exact(mut v) => cast::<Rational, S>(v.pop().expect("two"))?,
                    AnyOperands::ModP(mut v) => cast::<Fp, S>(v.pop().expect("two"))?,
                }
            };
            general_bm_product(&refs, &bg, cfg.convention)?
        }
    })
}

/// Identity conversion between a concrete and a generic scalar type.
fn cast<T: Scalar, S: Scalar>(h: Hypermatrix<T>) -> Result<Hypermatrix<S>> {
    let any: Box<dyn std::any::Any> = Box::new(h);
    any.downcast::<Hypermatrix<S>>()
        .map(|b| *b)
        .map_err(|_| anyhow!("background backend differs from the operands"))
}

fn product_cmd(background: Option<&str>, operands: &[std::path::PathBuf], cfg: &RunConfig) -> Result<String> {
    let loaded = operands.iter().map(|p| load_hmx(p, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(match unify(loaded)? {
        AnyOperands::Exact(ops) => product_in(&ops, background, cfg)?.to_hmx(),
        AnyOperands::ModP(ops) => product_in(&ops, background, cfg)?.to_hmx(),
    })
}

fn power_in<S: Scalar>(
    a: &Hypermatrix<S>,
    index: usize,
    degree: usize,
    tree: usize,
    list: bool,
    cfg: &RunConfig,
) -> Result<String> {
    match cfg.formulation {
        Formulation::Second => {
            let mut seq = PowerSequence::new(a, cfg.convention)?;
            Ok(seq.term(index)?.to_hmx())
        }
        Formulation::First => {
            a.require_cubic(3)?;
            let class = TernaryTree::all_of_degree(degree)?;
            if list {
                let trees: Vec<String> = class.iter().map(ToString::to_string).collect();
                return Ok(record("power", json!({ "degree": degree, "trees": trees }), cfg));
            }
            let t = class
                .get(tree)
                .ok_or_else(|| anyhow!("degree {degree} has {} trees; --tree {tree} is out of range", class.len()))?;
            Ok(t.evaluate(a)?.to_hmx())
        }
    }
}

fn power_cmd(input: &Path, index: usize, degree: usize, tree: usize, list: bool, cfg: &RunConfig) -> Result<String> {
    let a = load_hmx(input, cfg)?;
    with_any!(a, |x| power_in(&x, index, degree, tree, list, cfg))
}

fn span_in<S: Eliminate>(
    a: &Hypermatrix<S>,
    terms: Option<usize>,
    max_degree: Option<usize>,
    cfg: &RunConfig,
) -> Result<String> {
    let n = a.require_cubic(3)?;
    let (dim, count, extent) = match cfg.formulation {
        Formulation::Second => {
            let count = terms.unwrap_or(n * n * n);
            let seq = power::power_sequence_second(a, count, cfg.convention)?;
            let refs: Vec<&Hypermatrix<S>> = seq.iter().collect();
            (power::span_dimension(&refs)?, count, json!({ "terms": count }))
        }
        Formulation::First => {
            let max = max_degree.unwrap_or_else(|| power::first_formulation_degree_bound(n));
            let all = power::enumerate_powers_first(a, max)?;
            let refs: Vec<&Hypermatrix<S>> = all.iter().map(|(_, h)| h).collect();
            (power::span_dimension(&refs)?, all.len(), json!({ "max_degree": max }))
        }
    };
    let mut body = json!({
        "input_backend": a.backend(),
        "side": n,
        "dim": dim,
        "count": count,
        "full": dim == n * n * n,
    });
    body.as_object_mut()
        .expect("object")
        .extend(extent.as_object().expect("object").clone());
    Ok(record("span", body, cfg))
}

fn span_cmd(input: &Path, terms: Option<usize>, max_degree: Option<usize>, cfg: &RunConfig) -> Result<String> {
    let a = load_hmx(input, cfg)?;
    with_any!(a, |x| span_in(&x, terms, max_degree, cfg))
}

fn ch_in<S: Eliminate>(a: &Hypermatrix<S>, cfg: &RunConfig) -> Result<String> {
    let cv = if a.order() == 2 {
        power::matrix_ch_coefficients(a)?
    } else {
        power::ch_coefficients(a, cfg.formulation, cfg.convention)?
    };
    let body = json!({
        "formulation": cv.formulation,
        "convention": cv.convention,
        "backend": cv.backend,
        "r": cv.r,
        "alphas": cv.alpha_strings(),
        "dependent": cv.dependent,
    });
    Ok(record("ch", body, cfg))
}

fn ch_cmd(input: &Path, cfg: &RunConfig) -> Result<String> {
    let a = load_hmx(input, cfg)?;
    with_any!(a, |x| ch_in(&x, cfg))
}

fn tetra_in<S: Scalar>(
    a: &Hypermatrix<S>,
    glued: Option<GluingVariant>,
    complex: Option<usize>,
    at: Option<(usize, usize, usize)>,
) -> Result<String> {
    let count = match (glued, complex, at) {
        (Some(v), _, Some(at)) => koenig::count_glued(a, v, at)?,
        (_, Some(k), Some(at)) => koenig::count_k_complexes(a, k, at)?,
        (None, None, Some(at)) => koenig::count_k_complexes(a, 1, at)?,
        (None, None, None) => koenig::count_tetrahedra(a)?,
        _ => bail!("--glued and --complex need --at r,g,b"),
    };
    Ok(format!("{count}\n"))
}

fn tetra_cmd(
    input: &Path,
    glued: Option<GluingVariant>,
    complex: Option<usize>,
    at: Option<(usize, usize, usize)>,
    cfg: &RunConfig,
) -> Result<String> {
    let a = load_hmx(input, cfg)?;
    with_any!(a, |x| tetra_in(&x, glued, complex, at))
}

fn graph_format(path: &Path, input: &GraphInput) -> GraphFormat {
    match input.format {
        Some(GraphFormatArg::Edgelist) => GraphFormat::Edgelist,
        Some(GraphFormatArg::Graph6) => GraphFormat::Graph6,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("g6" | "graph6") => GraphFormat::Graph6,
            _ => GraphFormat::Edgelist,
        },
    }
}

fn load_graph_file(path: &Path, input: &GraphInput) -> Result<Graph> {
    let loaded = graph::load_graph(&read(path)?, graph_format(path, input), input.undirected)
        .with_context(|| path.display().to_string())?;
    for w in &loaded.warnings {
        warn!("{}: {w}", path.display());
    }
    Ok(loaded.graph)
}

fn graph_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn inflate_cmd(path: &Path, input: &GraphInput, cfg: &RunConfig) -> Result<String> {
    let g = load_graph_file(path, input)?;
    Ok(match cfg.choice {
        crate::args::BackendChoice::Modp => graph::inflate::<Fp>(&g, cfg.semantics, cfg.modulus)?.to_hmx(),
        _ => graph::inflate::<Rational>(&g, cfg.semantics, ())?.to_hmx(),
    })
}

fn settings(cfg: &RunConfig, n: usize) -> InvariantSettings {
    InvariantSettings {
        semantics: cfg.semantics,
        formulation: cfg.formulation,
        convention: cfg.convention,
        backend: cfg.graph_backend(n),
    }
}

fn report_line(report: &InvariantReport, cfg: &RunConfig) -> String {
    record("invariant", serde_json::to_value(report).expect("report serializes"), cfg)
}

fn invariant_cmd(path: &Path, input: &GraphInput, cfg: &RunConfig) -> Result<String> {
    let g = load_graph_file(path, input)?;
    let start = Instant::now();
    let mut report = graph::hypergraph_invariant(&g, &graph_name(path), &settings(cfg, g.n()))?;
    if cfg.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report_line(&report, cfg))
}

fn distinguish_cmd(first: &Path, second: &Path, input: &GraphInput, cfg: &RunConfig) -> Result<String> {
    let g1 = load_graph_file(first, input)?;
    let g2 = load_graph_file(second, input)?;
    // both graphs share one backend so their reports are comparable
    let s = settings(cfg, g1.n().max(g2.n()));
    let start = Instant::now();
    let mut d = graph::distinguish((&g1, &graph_name(first)), (&g2, &graph_name(second)), &s)?;
    let mut body = json!({ "verdict": d.verdict, "graphs": [d.reports[0].graph, d.reports[1].graph] });
    if cfg.timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        body["timing_ms"] = json!(ms);
        for r in &mut d.reports {
            r.timing_ms = Some(ms / 2.0);
        }
    }
    let mut out = record("distinguish", body, cfg);
    for r in &d.reports {
        out.push_str(&report_line(r, cfg));
    }
    Ok(out)
}

/// `(min, median)` of `reps` timed runs in milliseconds, plus the last result.
fn time<T>(reps: u32, mut f: impl FnMut() -> Result<T>) -> Result<(f64, f64, T)> {
    let mut samples = Vec::with_capacity(reps as usize);
    let mut last = None;
    for _ in 0..reps {
        let t = Instant::now();
        last = Some(f()?);
        samples.push(t.elapsed().as_secs_f64() * 1e3);
    }
    samples.sort_by(f64::total_cmp);
    let median = samples[samples.len() / 2];
    Ok((samples[0], median, last.expect("reps >= 1")))
}

fn bench_cmd(workload: Workload, size: usize, reps: u32, cfg: &RunConfig) -> Result<String> {
    ensure!(size >= 1, "--size must be positive");
    let mut rng = seeded(cfg.seed);
    let a: Hypermatrix<Rational> = if workload == Workload::Span && size <= 4 {
        fixtures::second_witness(size - 1)
    } else {
        random_hypermatrix(&[size; 3], -3, 3, (), &mut rng)
    };
    let body = match workload {
        Workload::Product => {
            let ops = [&a, &a, &a];
            let (kmin, kmed, fast) = time(reps, || Ok(bm_product(&ops)?))?;
            let (rmin, rmed, slow) = time(reps, || Ok(product::reference::bm_product(&ops)?))?;
            ensure!(fast == slow, "kernel and reference products differ");
            json!({ "workload": "product", "size": size, "repetitions": reps, "equal": true,
                    "kernel_ms": { "min": kmin, "median": kmed },
                    "reference_ms": { "min": rmin, "median": rmed } })
        }
        Workload::Span => {
            let count = size * size * size;
            let seq = power::power_sequence_second(&a, count, cfg.convention)?;
            let refs: Vec<&Hypermatrix<Rational>> = seq.iter().collect();
            let rows: Vec<Vec<Rational>> = seq.iter().map(|h| h.entries().to_vec()).collect();
            let (kmin, kmed, dim) = time(reps, || Ok(power::span_dimension(&refs)?))?;
            let (rmin, rmed, slow) = time(reps, || Ok(reference_rank(&rows)))?;
            ensure!(dim == slow, "kernel rank {dim} differs from reference rank {slow}");
            json!({ "workload": "span", "size": size, "repetitions": reps, "dim": dim, "equal": true,
                    "kernel_ms": { "min": kmin, "median": kmed },
                    "reference_ms": { "min": rmin, "median": rmed } })
        }
    };
    Ok(record("bench", body, cfg))
}

fn gen_cmd(what: &GenTarget, cfg: &RunConfig) -> Result<String> {
    let mut rng = seeded(cfg.seed);
    match what {
        GenTarget::Hypermatrix { dims, lo, hi, binary } => {
            let dims = parse_dims(dims).map_err(|e| anyhow!(e))?;
            ensure!(!dims.is_empty() && dims.iter().all(|&d| d > 0), "dimensions must be positive");
            ensure!(lo <= hi, "--lo must not exceed --hi");
            let exact = cfg.choice != crate::args::BackendChoice::Modp;
            Ok(match (binary, exact) {
                (Some(d), true) => random_binary::<Rational, _>(&dims, *d, (), &mut rng).to_hmx(),
                (Some(d), false) => random_binary::<Fp, _>(&dims, *d, cfg.modulus, &mut rng).to_hmx(),
                (None, true) => random_hypermatrix::<Rational, _>(&dims, *lo, *hi, (), &mut rng).to_hmx(),
                (None, false) => random_hypermatrix::<Fp, _>(&dims, *lo, *hi, cfg.modulus, &mut rng).to_hmx(),
            })
        }
        GenTarget::Graph { n, density, directed } => {
            ensure!((0.0..=1.0).contains(density), "--density must lie in [0, 1]");
            let g = Graph::random(*n, *density, !directed, &mut rng);
            let mut out = format!("n {n}\n");
            for (u, v) in g.edges() {
                if *directed || u <= v {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
            Ok(out)
        }
    }
}
