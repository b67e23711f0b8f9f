use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ppg::algorithm::AlgorithmKind;
use ppg::atlas::run_atlas;
use ppg::conditions::{check_three_path, replacement_conditions, serial_condition_sets, seven_cycle_conditions};
use ppg::dot::{export_dot, export_layer_dot};
use ppg::experiment::{ExperimentConfig, OracleMode};
use ppg::io::{lengths_from_json, InstanceFile, QueryScript};
use ppg::lowerbound::{attack_table, check_degree2_paths, density};
use ppg::oracle::{adversary_verdict, AdversaryOracle, DistanceOracle, HonestOracle};
use ppg::rigidity::{default_cap, enumerate_layer_drawings, Pins, Solver};
use ppg::{Error, Ppg};

#[derive(Parser)]
#[command(name = "ppg", version, about = "Exact point placement on a line from pairwise distance queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Alg {
    ThreePath,
    Triangle,
    Quad,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Honest,
    Adversary,
}

impl From<Mode> for OracleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Honest => OracleMode::Honest,
            Mode::Adversary => OracleMode::Adversary,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm against an oracle and print its report as JSON.
    Run {
        #[arg(long, value_enum)]
        alg: Alg,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "honest")]
        oracle: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Brute-force the final graph too, when it is small enough.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Report plus the answered graph in instance format.
        #[arg(long)]
        emit_json: Option<PathBuf>,
    },
    /// Count the placements of an instance by brute force.
    VerifyRigid {
        instance: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// Print up to two canonical placements.
        #[arg(long)]
        witness: bool,
    },
    /// Search for layer drawings of an instance.
    LayerCheck {
        instance: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// Stop counting after this many drawings.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// The condition lists of the three-path component.
    Conditions {
        #[command(subcommand)]
        action: ConditionsCmd,
    },
    /// Degree-2 path, density and attack reports for an instance.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        degree2_paths: bool,
        #[arg(long)]
        density: bool,
        #[arg(long)]
        attacks: bool,
    },
    /// Check rigidity against layer drawings on every small connected graph.
    Atlas {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write an instance as Graphviz DOT.
    ExportDot {
        instance: PathBuf,
        /// Position nodes by the placement when the instance is rigid.
        #[arg(long)]
        solve: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Answer scripted query rounds and print the transcript.
    Oracle {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `{"n": .., "rounds": [[[a, b], ..], ..]}`
        queries: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConditionsCmd {
    List {
        #[arg(long, conflicts_with_all = ["group", "replacement"])]
        serial: Option<u8>,
        /// A group of the seven-cycle list.
        #[arg(long, conflicts_with = "replacement")]
        group: Option<u8>,
        #[arg(long)]
        replacement: bool,
    },
    /// Check a length table against the six serial lists.
    Check { lengths: PathBuf },
}

/// Exit 1 for a failed check, 2 for bad input or configuration.
enum Failure {
    Check(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed(_)
            | Error::CoreNotRigid(_)
            | Error::NoFeasibleTriplet(_)
            | Error::NoFeasibleLeaf(_)
            | Error::InconsistentStrategy(_)
            | Error::Protocol(_) => Failure::Check(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn print_json<T: Serialize>(v: &T) -> CmdResult {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Reads a plain instance, or the `instance` field of a run report.
fn read_graph(path: &Path) -> Result<Ppg, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let mut v: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(inner) = v.get_mut("instance") {
        v = inner.take();
    }
    let file: InstanceFile = serde_json::from_value(v)?;
    Ok(file.to_ppg()?)
}

fn solver(cap: Option<usize>) -> Solver {
    Solver::default().with_cap(cap.unwrap_or_else(default_cap))
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    alg: Alg,
    b: Option<usize>,
    n: Option<usize>,
    oracle: Mode,
    seed: u64,
    verify: bool,
    emit_dot: Option<PathBuf>,
    emit_json: Option<PathBuf>,
) -> CmdResult {
    let config = ExperimentConfig {
        algorithm: match alg {
            Alg::ThreePath => AlgorithmKind::ThreePath,
            Alg::Triangle => AlgorithmKind::Triangle,
            Alg::Quad => AlgorithmKind::Quad,
        },
        b,
        n,
        oracle: oracle.into(),
        seed,
        verify,
    };
    let out = config.run()?;
    if let Some(path) = emit_dot {
        std::fs::write(path, export_dot(&out.graph, Some(&out.report.placement)))?;
    }
    if let Some(path) = emit_json {
        let mut v = serde_json::to_value(&out)?;
        v["instance"] = serde_json::to_value(InstanceFile::from(&out.graph))?;
        std::fs::write(path, serde_json::to_string_pretty(&v)? + "\n")?;
    }
    print_json(&out)?;
    if out.passed() {
        Ok(())
    } else {
        Err(Failure::Check("run did not verify".into()))
    }
}

fn cmd_verify_rigid(path: &Path, cap: Option<usize>, witness: bool) -> CmdResult {
    let g = read_graph(path)?;
    let set = solver(cap).with_limit(2).solve(&g, &Pins::new())?;
    let status = match set.len() {
        0 => "unrealizable",
        1 => "rigid",
        _ => "ambiguous",
    };
    let mut v = json!({ "n": g.n(), "edges": g.edge_count(), "status": status, "rigid": set.len() == 1 });
    if witness {
        v["witnesses"] = serde_json::to_value(&set.placements)?;
    }
    print_json(&v)
}

fn cmd_layer_check(path: &Path, cap: Option<usize>, limit: usize) -> CmdResult {
    let g = read_graph(path)?;
    let cap = cap.unwrap_or_else(default_cap);
    let drawings = enumerate_layer_drawings(&g, limit, cap)?;
    let more = if drawings.len() >= limit { "+" } else { "" };
    println!("drawings: {}{more}", drawings.len());
    if let Some(d) = drawings.first() {
        print!("{}", export_layer_dot(&g, d));
    }
    Ok(())
}

fn cmd_conditions(action: ConditionsCmd) -> CmdResult {
    match action {
        ConditionsCmd::List {
            serial,
            group,
            replacement,
        } => {
            let pick = |k: Option<u8>, n: usize, what: &str| -> Result<Option<usize>, Failure> {
                match k {
                    Some(k) if !(1..=n).contains(&(k as usize)) => {
                        Err(Failure::Config(format!("{what} must be in 1..={n}")))
                    }
                    k => Ok(k.map(|k| k as usize - 1)),
                }
            };
            let serials = serial_condition_sets();
            let groups = seven_cycle_conditions();
            match (pick(serial, 6, "--serial")?, pick(group, 6, "--group")?, replacement) {
                (Some(i), _, _) => println!("{}", serials[i]),
                (_, Some(i), _) => println!("{}", groups[i]),
                (_, _, true) => println!("{}", replacement_conditions()),
                _ => {
                    for s in &serials {
                        println!("{s}");
                    }
                    for s in &groups {
                        println!("{s}");
                    }
                    println!("{}", replacement_conditions());
                }
            }
            Ok(())
        }
        ConditionsCmd::Check { lengths } => {
            let text = std::fs::read_to_string(&lengths)?;
            let l = lengths_from_json(&text)?;
            let v = check_three_path(&l)?;
            if v.is_empty() {
                println!("ok");
                Ok(())
            } else {
                print_json(&v)?;
                Err(Failure::Check(format!("{} conditions violated", v.len())))
            }
        }
    }
}

fn cmd_analyze(path: &Path, paths: bool, dens: bool, attacks: bool) -> CmdResult {
    let g = read_graph(path)?;
    let all = !(paths || dens || attacks);
    let mut v = serde_json::Map::new();
    if all || paths {
        v.insert("degree2_paths".into(), serde_json::to_value(check_degree2_paths(&g))?);
    }
    if all || dens {
        v.insert("density".into(), serde_json::to_value(density(&g))?);
    }
    if all || attacks {
        let mut rows = Vec::new();
        for a in attack_table() {
            let placements = Solver::default().with_cap(6).solve(&a.cycle(), &Pins::new())?;
            rows.push(json!({ "attack": a, "placements": placements.len() }));
        }
        v.insert("attacks".into(), rows.into());
    }
    print_json(&v)
}

fn cmd_atlas(max_n: usize, samples: usize, seed: u64) -> CmdResult {
    let r = run_atlas(max_n, samples, seed)?;
    print_json(&r)?;
    if r.inconsistencies.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} inconsistent cases", r.inconsistencies.len())))
    }
}

fn cmd_export_dot(path: &Path, solve: bool, output: Option<PathBuf>) -> CmdResult {
    let g = read_graph(path)?;
    let placement = if solve {
        let set = solver(None).with_limit(2).solve(&g, &Pins::new())?;
        (set.len() == 1).then(|| set.placements[0].clone())
    } else {
        None
    };
    let dot = export_dot(&g, placement.as_ref());
    match output {
        Some(p) => std::fs::write(p, dot)?,
        None => print!("{dot}"),
    }
    Ok(())
}

fn cmd_oracle(mode: Mode, seed: u64, queries: &Path) -> CmdResult {
    let script: QueryScript = serde_json::from_str(&std::fs::read_to_string(queries)?)?;
    let mut oracle: Box<dyn DistanceOracle> = match mode {
        Mode::Honest => Box::new(HonestOracle::random(script.n, seed)),
        Mode::Adversary => Box::new(AdversaryOracle::new(script.n, seed)),
    };
    for batch in script.batches() {
        oracle.answer_round(&batch)?;
    }
    let t = oracle.transcript();
    let mut v = json!({ "transcript": t });
    if matches!(mode, Mode::Adversary) && script.n <= default_cap() {
        v["verdict"] = serde_json::to_value(adversary_verdict(&t.graph()?, t)?)?;
    }
    print_json(&v)
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Run {
            alg,
            b,
            n,
            oracle,
            seed,
            verify,
            emit_dot,
            emit_json,
        } => cmd_run(alg, b, n, oracle, seed, verify, emit_dot, emit_json),
        Command::VerifyRigid { instance, cap, witness } => cmd_verify_rigid(&instance, cap, witness),
        Command::LayerCheck { instance, cap, limit } => cmd_layer_check(&instance, cap, limit),
        Command::Conditions { action } => cmd_conditions(action),
        Command::Analyze {
            instance,
            degree2_paths,
            density,
            attacks,
        } => cmd_analyze(&instance, degree2_paths, density, attacks),
        Command::Atlas { max_n, samples, seed } => cmd_atlas(max_n, samples, seed),
        Command::ExportDot { instance, solve, output } => cmd_export_dot(&instance, solve, output),
        Command::Oracle { mode, seed, queries } => cmd_oracle(mode, seed, &queries),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("ppg: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("ppg: {msg}");
            ExitCode::from(2)
        }
    }
}
