use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use actsim::architecture::{
    attach_actuator_layer, bridge_between, build_conveyor_belt, build_ladder, build_star,
    from_json, resource_summary, to_json, validate, ArchitectureGraph,
};
use actsim::exact::{effective_vs_exact, Backend, SimParams, SweepOp, SweepRow};
use actsim::sequencer::{
    compile, contract_basis, contract_inputs, contract_superposition, default_alphabet,
    expected_output, replay_report, search_sequence_with, Engine, GateRequest, Instruction,
    ScheduleIR, SearchTarget, LIBRARY_FIDELITY,
};
use actsim::statevec::{state_fidelity, StateVector};

use crate::report::{CommandEcho, GateResult, RunReport, SearchResult, SweepTable, Timings};
use crate::{
    BackendArg, BuildArgs, Cli, CliError, Command, EngineKind, Kind, RequestArgs, RunArgs,
    SearchArgs, SweepArgs,
};

/// Default pass mark for exact-engine contract checks.
const EXACT_THRESHOLD: f64 = 0.999;

const CSV_HEADER: [&str; 6] = [
    "op",
    "eta",
    "distance",
    "avg_gate_fidelity",
    "runtime_s",
    "leakage",
];

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Build(args) => build(args),
        Command::Validate { arch } => {
            let graph = load(arch)?;
            let mut report = RunReport::new(echo(cli, "validate"), &graph);
            let v = validate(&graph);
            let ok = v.ok;
            let n = v.violations.len();
            report.validation = Some(v);
            print_json(&report)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Contract(format!("{n} violation(s)")))
            }
        }
        Command::Resources { arch } => {
            let graph = load(arch)?;
            let mut report = RunReport::new(echo(cli, "resources"), &graph);
            report.resources = Some(resource_summary(&graph)?);
            print_json(&report)
        }
        Command::Run(args) => run(cli, args),
        Command::Sweep(args) => sweep(cli, args),
        Command::Search(args) => search(cli, args),
    }
}

fn echo(cli: &Cli, subcommand: &str) -> CommandEcho {
    CommandEcho {
        subcommand: subcommand.to_string(),
        args: std::env::args().skip(1).collect(),
        seed: cli.seed,
    }
}

fn load(path: &Path) -> Result<ArchitectureGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(from_json(&text)?)
}

/// Loads a graph and refuses to simulate one that fails validation.
fn load_valid(path: &Path) -> Result<ArchitectureGraph, CliError> {
    let graph = load(path)?;
    let v = validate(&graph);
    if !v.ok {
        return Err(CliError::Input(format!(
            "{} fails validation ({} violation(s)); run `actsim validate` for details",
            path.display(),
            v.violations.len()
        )));
    }
    Ok(graph)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn print_json(report: &RunReport) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).map_err(|e| CliError::Output(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn build(args: &BuildArgs) -> Result<(), CliError> {
    let variant = |default: &str| args.variant.clone().unwrap_or_else(|| default.to_string());
    let mut graph = match args.kind {
        Kind::Ladder => build_ladder(args.n, variant("three_species").parse()?)?,
        Kind::Conveyor => build_conveyor_belt(args.n, variant("three_register").parse()?)?,
        Kind::Star => build_star(args.n)?,
        Kind::Modular => {
            let v = variant("actuator_variant").parse()?;
            let a = build_conveyor_belt(args.n, v)?;
            let b = build_conveyor_belt(args.n, v)?;
            let first =
                |g: &ArchitectureGraph| g.geometry().map(|geo| geo.conveyor_q(1)).unwrap_or(0);
            bridge_between(&a, &b, (first(&a), first(&b)))?
        }
    };
    if !args.layer.is_empty() {
        graph = attach_actuator_layer(&graph, &args.layer)?;
    }
    let text = to_json(&graph) + "\n";
    match &args.out {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

fn request(args: &RequestArgs) -> Result<GateRequest, CliError> {
    let mut req = GateRequest::new(args.gate.parse()?)
        .with_qubits(args.qubits.clone())
        .at_position(args.position)
        .reversed(args.reverse)
        .repeated(args.reps);
    if let Some(region) = &args.region {
        req = req.with_region(region.clone());
    }
    Ok(req)
}

fn backend(arg: BackendArg) -> Backend {
    match arg {
        BackendArg::Auto => Backend::Auto,
        BackendArg::Dense => Backend::Dense,
        BackendArg::Factorized => Backend::Factorized,
    }
}

fn read_ir(path: &Path) -> Result<ScheduleIR, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(ScheduleIR::parse(&text)?)
}

fn run(cli: &Cli, args: &RunArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let graph = load_valid(&args.arch)?;
    let req = request(&args.request)?;
    let ir = match &args.ir {
        Some(path) => read_ir(path)?,
        None => compile(&graph, &req)?,
    };
    ir.check(&graph)?;
    let compile_s = start.elapsed().as_secs_f64();
    if let Some(path) = &args.emit_ir {
        write_file(path, &ir.to_text())?;
    }

    let (engine, threshold, eta) = match args.engine {
        EngineKind::Effective => (Engine::Effective, LIBRARY_FIDELITY, None),
        EngineKind::Exact => {
            let mut params = SimParams::for_eta(graph.zeta(), args.eta)?;
            params.backend = backend(args.backend);
            (Engine::Exact(params), EXACT_THRESHOLD, Some(args.eta))
        }
    };
    let threshold = args.threshold.unwrap_or(threshold);

    let n = graph.n_qubits();
    let mut inputs = contract_basis(&graph, &req)?
        .into_iter()
        .map(|i| StateVector::basis(n, i))
        .collect::<actsim::Result<Vec<_>>>()?;
    inputs.push(contract_superposition(&graph, &req)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    inputs.extend(contract_inputs(&graph, &req, args.samples, &mut rng)?);

    let replay_start = Instant::now();
    let mut fidelity = 1.0f64;
    let mut defect: Option<f64> = None;
    for input in &inputs {
        let want = expected_output(&graph, &req, input)?;
        let (got, stats) = replay_report(&graph, &ir, input, &engine)?;
        fidelity = fidelity.min(state_fidelity(&want, &got)?);
        if let Some(s) = stats {
            defect = Some(defect.unwrap_or(0.0).max(s.unitarity_defect));
        }
    }
    let replay_s = replay_start.elapsed().as_secs_f64();

    let passed = fidelity >= threshold;
    let result = GateResult {
        gate: req.name.as_str().to_string(),
        engine: match args.engine {
            EngineKind::Effective => "effective".into(),
            EngineKind::Exact => "exact".into(),
        },
        eta,
        instructions: ir.len(),
        pulses: ir.pulse_count(),
        inputs: inputs.len(),
        fidelity,
        threshold,
        passed,
        unitarity_defect: defect,
        runtime_s: cli.timings.then_some(replay_s),
    };
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(["op", "engine", "eta", "fidelity", "passed", "runtime_s"])
            .map_err(csv_err)?;
        w.write_record([
            result.gate.clone(),
            result.engine.clone(),
            eta.map(|e| e.to_string()).unwrap_or_default(),
            fidelity.to_string(),
            passed.to_string(),
            result.runtime_s.unwrap_or(0.0).to_string(),
        ])
        .map_err(csv_err)?;
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        write_file(path, &String::from_utf8_lossy(&bytes))?;
    }

    let mut report = RunReport::new(echo(cli, "run"), &graph);
    report.gates.push(result);
    if cli.timings {
        report.timings = Some(Timings {
            total_s: start.elapsed().as_secs_f64(),
            compile_s: Some(compile_s),
            replay_s: Some(replay_s),
        });
    }
    print_json(&report)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Contract(format!(
            "{} contract fidelity {fidelity:.12} below {threshold}",
            req.name.as_str()
        )))
    }
}

fn parse_etas(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Input(format!("blockade ratio `{s}`: {e}")))
        })
        .collect()
}

/// Serialises sweep rows with the fixed column order.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let csv_err = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.op.as_str().to_string(),
            r.eta.to_string(),
            r.distance.to_string(),
            r.avg_gate_fidelity.to_string(),
            r.runtime_s.to_string(),
            r.leakage.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let graph = load_valid(&args.arch)?;
    let op: SweepOp = args.op.parse()?;
    let etas = parse_etas(&args.eta)?;
    let mut base = SimParams::for_eta(graph.zeta(), 1.0)?;
    base.backend = backend(args.backend);
    let rows = effective_vs_exact(&graph, op, &etas, &base, cli.timings)?;
    let text = sweep_csv(&rows)?;
    match &args.csv {
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
        Some(path) => {
            write_file(path, &text)?;
            let mut report = RunReport::new(echo(cli, "sweep"), &graph);
            report.sweeps.push(SweepTable {
                op: op.as_str().to_string(),
                rows,
            });
            if cli.timings {
                report.timings = Some(Timings {
                    total_s: start.elapsed().as_secs_f64(),
                    ..Timings::default()
                });
            }
            print_json(&report)
        }
    }
}

fn search(cli: &Cli, args: &SearchArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let graph = load_valid(&args.arch)?;
    let req = request(&args.request)?;
    let alphabet = match &args.alphabet {
        Some(path) => read_ir(path)?
            .ops
            .into_iter()
            .filter_map(|op| match op {
                Instruction::Pulse(p) => Some(p),
                _ => None,
            })
            .collect(),
        None => default_alphabet(&graph),
    };
    let target = SearchTarget::for_request(&graph, &req)?;
    let found = search_sequence_with(&graph, &target, &alphabet, args.depth, args.node_cap)?;
    if let (Some(ir), Some(path)) = (&found, &args.out) {
        write_file(path, &ir.to_text())?;
    }
    let mut report = RunReport::new(echo(cli, "search"), &graph);
    report.search = Some(SearchResult {
        gate: req.name.as_str().to_string(),
        max_depth: args.depth,
        alphabet: alphabet.len(),
        found: found.is_some(),
        depth: found.as_ref().map(|ir| ir.pulse_count()),
        ir: found.as_ref().map(|ir| ir.to_text()),
    });
    if cli.timings {
        report.timings = Some(Timings {
            total_s: start.elapsed().as_secs_f64(),
            ..Timings::default()
        });
    }
    print_json(&report)
}
