//! `clearnet`: batch front-end for the clearing engine. Loads a network or
//! model instance from JSON, runs a solver, and emits a machine-readable
//! report.
//!
//! Exit codes: 0 on success, 1 on load/validation/precondition errors, 2 on
//! non-convergence (the report is still written).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use clearnet_core::format::{
    self, case_from_spec, file_to_network, metric_name, network_to_file, parse_metric,
    section_record, solve_report_file, to_canonical_json, EnFile, ManifestFile, NetworkFile,
    Parameters, ReportFile,
};
use clearnet_core::lattice::MetricSpec;
use clearnet_core::models::{eisenberg_noe, eisenberg_noe_bounded};
use clearnet_core::network::LiabilityNetwork;
use clearnet_core::value::{parse_ext_real, Backend};
use clearnet_core::{
    acyclic_solve, acyclic_solve_from, banach_solve, enumerate_sections, kleene_greatest,
    kleene_least, verify_operator_intertwining, verify_section_bijection, ClearingSection,
    InstitutionState, SolveOptions, SolveReport,
};

#[derive(Parser)]
#[command(name = "clearnet", version, about = "Liability-network clearing engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Least,
    Greatest,
    Acyclic,
    Banach,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    #[value(name = "l1-abs")]
    L1Abs,
    #[value(name = "l1-discrete")]
    L1Discrete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresentationArg {
    Unbounded,
    Bounded,
}

#[derive(Args)]
struct CommonOpts {
    /// Arithmetic backend; defaults to CLEARNET_BACKEND or rational.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a network file (or every .json file in a directory with --jobs).
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "least")]
        solver: SolverArg,
        /// Stopping tolerance (float backend only).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Metric override; defaults to the file's metric or l1-abs.
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        /// JSON map of vertex id to value literal, seeding the banach solver.
        #[arg(long)]
        seed_state: Option<PathBuf>,
        /// Solve a directory of network files with this many worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enumerate every clearing section of a finite-lattice network.
    Enumerate {
        path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run every comparison case in an invariance manifest.
    Verify {
        manifest: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Expand a compact Eisenberg-Noe instance into a full network file.
    En {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "unbounded")]
        presentation: PresentationArg,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn backend_of(common: &CommonOpts) -> Result<Backend> {
    if let Some(b) = common.backend {
        return Ok(match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        });
    }
    match std::env::var("CLEARNET_BACKEND") {
        Ok(v) if v == "rational" => Ok(Backend::Rational),
        Ok(v) if v == "float" => Ok(Backend::Float),
        Ok(v) => bail!("CLEARNET_BACKEND must be `rational` or `float`, got `{v}`"),
        Err(_) => Ok(Backend::Rational),
    }
}

fn emit(common: &CommonOpts, text: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_network(path: &Path, backend: Backend) -> Result<(LiabilityNetwork, NetworkFile)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file: NetworkFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    let net = file_to_network(&file, backend)
        .with_context(|| format!("loading {}", path.display()))?;
    Ok((net, file))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve {
            path,
            solver,
            tol,
            max_iter,
            metric,
            seed_state,
            jobs,
            common,
        } => {
            let backend = backend_of(&common)?;
            if let Some(jobs) = jobs {
                return solve_directory(
                    &path, solver, tol, max_iter, metric, backend, jobs,
                );
            }
            let (net, file) = load_network(&path, backend)?;
            let metric = resolve_metric(metric, &file)?;
            let opts = SolveOptions {
                max_iter,
                tol,
                metric,
            };
            let seed = match &seed_state {
                Some(p) => Some(load_seed(p, &net, backend)?),
                None => None,
            };
            let (section, report) = run_solver(&net, solver, &opts, seed.as_ref())?;
            let params = Parameters {
                backend: backend_name(backend).to_string(),
                max_iter,
                tol,
                metric: metric_name(metric).to_string(),
            };
            let report_file = solve_report_file(&net, &section, &report, params)?;
            emit(&common, &to_canonical_json(&report_file)?)?;
            Ok(if report.converged {
                ExitCode::from(0)
            } else {
                ExitCode::from(2)
            })
        }
        Command::Enumerate { path, common } => {
            let backend = backend_of(&common)?;
            let (net, file) = load_network(&path, backend)?;
            let sections = enumerate_sections(&net)?;
            let records = sections
                .iter()
                .map(|s| section_record(&net, s))
                .collect::<Result<Vec<_>, _>>()?;
            let metric = resolve_metric(None, &file)?;
            let report = ReportFile {
                solver: "enumerate".to_string(),
                parameters: Parameters {
                    backend: backend_name(backend).to_string(),
                    max_iter: 0,
                    tol: 0.0,
                    metric: metric_name(metric).to_string(),
                },
                x: BTreeMap::new(),
                p: BTreeMap::new(),
                iterations: sections.len(),
                converged: true,
                extremality: "enumerated".to_string(),
                divergence: false,
                violations: Vec::new(),
                sections: records,
            };
            emit(&common, &to_canonical_json(&report)?)?;
            Ok(ExitCode::from(0))
        }
        Command::Verify {
            manifest,
            samples,
            seed,
            common,
        } => {
            let backend = backend_of(&common)?;
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let manifest: ManifestFile = serde_json::from_str(&text)?;
            let mut lines = Vec::new();
            let mut failures = 0usize;
            for spec in &manifest.cases {
                let case = case_from_spec(spec, backend)?;
                let intertwining = verify_operator_intertwining(&case, samples, seed)?;
                let bijection = verify_section_bijection(&case)?;
                let ok = intertwining.ok() && bijection.ok();
                if !ok {
                    failures += 1;
                }
                lines.push(format!(
                    "{}: intertwining {}/{} samples, sections {} ({} vs {}) -> {}",
                    case.name,
                    intertwining.samples - intertwining.failures.len(),
                    intertwining.samples,
                    bijection.mode,
                    bijection.source_sections,
                    bijection.target_sections,
                    if ok { "ok" } else { "FAILED" },
                ));
                for f in intertwining.failures.iter().chain(&bijection.failures) {
                    lines.push(format!("  {f}"));
                }
            }
            lines.push(format!(
                "{} case(s), {} failure(s)",
                manifest.cases.len(),
                failures
            ));
            emit(&common, &(lines.join("\n") + "\n"))?;
            Ok(ExitCode::from(u8::from(failures > 0)))
        }
        Command::En {
            path,
            presentation,
            common,
        } => {
            let backend = backend_of(&common)?;
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let en: EnFile = serde_json::from_str(&text)?;
            let inst = format::en_file_to_instance(&en)?;
            let net = match presentation {
                PresentationArg::Unbounded => eisenberg_noe(&inst, backend)?,
                PresentationArg::Bounded => eisenberg_noe_bounded(&inst, backend)?,
            };
            let file = network_to_file(&net, None)?;
            emit(&common, &to_canonical_json(&file)?)?;
            Ok(ExitCode::from(0))
        }
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Rational => "rational",
        Backend::Float => "float",
    }
}

fn resolve_metric(arg: Option<MetricArg>, file: &NetworkFile) -> Result<MetricSpec> {
    if let Some(m) = arg {
        return Ok(match m {
            MetricArg::L1Abs => MetricSpec::L1Abs,
            MetricArg::L1Discrete => MetricSpec::L1Discrete,
        });
    }
    match &file.metric {
        Some(name) => Ok(parse_metric(name)?),
        None => Ok(MetricSpec::L1Abs),
    }
}

fn load_seed(path: &Path, net: &LiabilityNetwork, backend: Backend) -> Result<InstitutionState> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let literals: BTreeMap<String, String> = serde_json::from_str(&text)?;
    let mut state = BTreeMap::new();
    for v in &net.vertices {
        let lit = literals
            .get(&v.0)
            .ok_or_else(|| anyhow!("seed state missing vertex `{v}`"))?;
        let value = match net.space(v) {
            clearnet_core::lattice::PaymentSpace::FiniteTable(t) => t
                .index_of(lit)
                .map(clearnet_core::lattice::LatticeValue::FiniteElem)
                .ok_or_else(|| anyhow!("seed state: unknown element `{lit}` at `{v}`"))?,
            _ => clearnet_core::lattice::LatticeValue::ExtReal(parse_ext_real(lit, backend)?),
        };
        if !net.space(v).contains(&value)? {
            bail!("seed state value for `{v}` lies outside its payment space");
        }
        state.insert(v.clone(), value);
    }
    Ok(InstitutionState(state))
}

fn run_solver(
    net: &LiabilityNetwork,
    solver: SolverArg,
    opts: &SolveOptions,
    seed: Option<&InstitutionState>,
) -> Result<(ClearingSection, SolveReport)> {
    let out = match solver {
        SolverArg::Least => kleene_least(net, opts)?,
        SolverArg::Greatest => kleene_greatest(net, opts)?,
        SolverArg::Acyclic => match seed {
            Some(s) => acyclic_solve_from(net, s)?,
            None => acyclic_solve(net)?,
        },
        SolverArg::Banach => {
            let seed = match seed {
                Some(s) => s.clone(),
                None => InstitutionState::bottom(net)?,
            };
            banach_solve(net, opts.metric, opts, &seed)?
        }
    };
    Ok(out)
}

/// Scenario mode: solve every `.json` file in a directory with a fixed
/// worker pool, writing `<name>.report.json` beside each input.
fn solve_directory(
    dir: &Path,
    solver: SolverArg,
    tol: f64,
    max_iter: usize,
    metric: Option<MetricArg>,
    backend: Backend,
    jobs: usize,
) -> Result<ExitCode> {
    let mut inputs: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|ext| ext == "json")
                && !p
                    .file_name()
                    .is_some_and(|n| n.to_string_lossy().ends_with(".report.json"))
        })
        .collect();
    inputs.sort();
    let jobs = jobs.max(1);

    let results: Vec<Result<bool>> = std::thread::scope(|scope| {
        let chunks: Vec<Vec<PathBuf>> = (0..jobs)
            .map(|w| {
                inputs
                    .iter()
                    .skip(w)
                    .step_by(jobs)
                    .cloned()
                    .collect()
            })
            .collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut results = Vec::new();
                    for path in chunk {
                        results.push((path.clone(), solve_one(&path, solver, tol, max_iter, metric, backend)));
                    }
                    results
                })
            })
            .collect();
        let mut all = Vec::new();
        for h in handles {
            for (path, r) in h.join().expect("worker panicked") {
                all.push(r.with_context(|| format!("solving {}", path.display())));
            }
        }
        all
    });

    let mut code = 0u8;
    for r in results {
        match r {
            Ok(true) => {}
            Ok(false) => code = code.max(2),
            Err(err) => {
                eprintln!("error: {err:#}");
                code = code.max(1);
            }
        }
    }
    Ok(ExitCode::from(code))
}

fn solve_one(
    path: &Path,
    solver: SolverArg,
    tol: f64,
    max_iter: usize,
    metric: Option<MetricArg>,
    backend: Backend,
) -> Result<bool> {
    let (net, file) = load_network(path, backend)?;
    let metric = resolve_metric(metric, &file)?;
    let opts = SolveOptions {
        max_iter,
        tol,
        metric,
    };
    let (section, report) = run_solver(&net, solver, &opts, None)?;
    let params = Parameters {
        backend: backend_name(backend).to_string(),
        max_iter,
        tol,
        metric: metric_name(metric).to_string(),
    };
    let report_file = solve_report_file(&net, &section, &report, params)?;
    let out = path.with_extension("report.json");
    std::fs::write(&out, to_canonical_json(&report_file)?)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(report.converged)
}
