//! omegatk: command line front end for the omega-core toolkit. Objects
//! travel as JSON manifests (Büchi automata also as HOA); subcommands
//! chain reductions, bounded searches, verification and continuity
//! probing. Exit codes: 0 positive, 1 negative or exhausted, 2 error,
//! 3 inconclusive probe.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use omega_core::{
    continuity_probe, export_hoa, import_hoa, pcp_to_function_f, pcp_to_function_fprime,
    pcp_to_transducer_pair, probe_with_witness, tm_to_pcpreg, BuchiAutomaton, ContinuityVerdict,
    LassoWord, Manifest, PcpRegInstance, SolutionCheck, WitnessRecord,
};

#[derive(Parser)]
#[command(
    name = "omegatk",
    version,
    about = "Reductions, bounded searches and continuity probes for omega-automata"
)]
struct Cli {
    /// Seed for randomized workflows; reserved, the provided subcommands
    /// are deterministic and ignore it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Fallback bound for searches when the specific flag is absent.
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// Output format for `nba convert`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Hoa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Constrained PCP instance from a Turing machine.
    Pcp,
    /// Transducer pair relating index words to the two concatenations.
    Transducers,
    /// Relay function realizing the instance.
    F,
    /// Relay function with the marker gadget in front.
    Fprime,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a reduction target from a source manifest.
    Reduce {
        source: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Output path; `--target transducers` appends `.x` and `.y`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Bounded search for a lasso solution of a constrained instance.
    Search {
        instance: PathBuf,
        /// Cap on the unmatched overhang; defaults to --budget.
        #[arg(long)]
        overhang_bound: Option<usize>,
        /// Witness manifest path for a found solution.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a proposed solution lasso, such as `1(2)`, against an instance.
    Verify { instance: PathBuf, sigma: String },
    /// Probe continuity of a functional transducer at a domain point.
    Probe {
        transducer: PathBuf,
        point: String,
        /// Depths 1..=N to certify.
        #[arg(long, alias = "N", default_value_t = 4)]
        depth: usize,
        /// Ball exponent budget per depth.
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        /// Instance the transducer was reduced from; enables certified
        /// discontinuity witnesses.
        #[arg(long)]
        witness_instance: Option<PathBuf>,
        /// Verdict manifest path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded search for a recurring run of a Turing machine.
    TmSearch {
        machine: PathBuf,
        /// Cap on configuration encoding length; defaults to --budget.
        #[arg(long)]
        config_bound: Option<usize>,
        /// Cap on explored transitions; defaults to --budget squared.
        #[arg(long)]
        step_budget: Option<usize>,
    },
    /// Büchi automaton queries and format conversion.
    #[command(subcommand)]
    Nba(NbaCommand),
    /// Apply a functional transducer to a lasso input.
    Apply {
        transducer: PathBuf,
        point: String,
        /// Witness manifest path for the accepted pair.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum NbaCommand {
    /// Decide language emptiness; prints a witness when non-empty.
    Empty { automaton: PathBuf },
    /// Test lasso membership.
    Accepts { automaton: PathBuf, lasso: String },
    /// Re-serialize between the JSON manifest and HOA formats.
    Convert {
        automaton: PathBuf,
        /// Output path; prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

type CliResult = Result<ExitCode, String>;

fn run(cli: Cli) -> CliResult {
    let Cli { seed: _, budget, format, command } = cli;
    match command {
        Command::Reduce { source, target, out } => cmd_reduce(&source, target, &out),
        Command::Search { instance, overhang_bound, out } => {
            cmd_search(&instance, overhang_bound.unwrap_or(budget), out.as_deref())
        }
        Command::Verify { instance, sigma } => cmd_verify(&instance, &sigma),
        Command::Probe { transducer, point, depth, kmax, witness_instance, out } => {
            cmd_probe(&transducer, &point, depth, kmax, witness_instance.as_deref(), out.as_deref())
        }
        Command::TmSearch { machine, config_bound, step_budget } => cmd_tm_search(
            &machine,
            config_bound.unwrap_or(budget),
            step_budget.unwrap_or_else(|| budget.saturating_mul(budget)),
        ),
        Command::Nba(NbaCommand::Empty { automaton }) => cmd_nba_empty(&automaton),
        Command::Nba(NbaCommand::Accepts { automaton, lasso }) => {
            cmd_nba_accepts(&automaton, &lasso)
        }
        Command::Nba(NbaCommand::Convert { automaton, out }) => {
            cmd_nba_convert(&automaton, out.as_deref(), format)
        }
        Command::Apply { transducer, point, out } => cmd_apply(&transducer, &point, out.as_deref()),
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, String> {
    String::from_utf8(read_bytes(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_manifest(path: &Path) -> Result<(Manifest, String), String> {
    let text = read_text(path)?;
    let manifest = Manifest::parse(&text).map_err(fail)?;
    Ok((manifest, text))
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_reduce(source: &Path, target: Target, out: &Path) -> CliResult {
    let (manifest, text) = read_manifest(source)?;
    let emit = |m: Manifest, command: &str, path: &Path| -> Result<(), String> {
        write_file(path, &m.with_provenance(text.as_bytes(), command).to_canonical_string())?;
        println!("wrote {}", path.display());
        Ok(())
    };
    match target {
        Target::Pcp => {
            let machine = manifest.to_turing_machine().map_err(fail)?;
            let inst = tm_to_pcpreg(&machine);
            emit(Manifest::of_pcp_instance(&inst), "reduce --target pcp", out)?;
        }
        Target::F => {
            let inst = manifest.to_pcp_instance().map_err(fail)?;
            emit(Manifest::of_transducer(&pcp_to_function_f(&inst)), "reduce --target f", out)?;
        }
        Target::Fprime => {
            let inst = manifest.to_pcp_instance().map_err(fail)?;
            emit(
                Manifest::of_transducer(&pcp_to_function_fprime(&inst)),
                "reduce --target fprime",
                out,
            )?;
        }
        Target::Transducers => {
            let inst = manifest.to_pcp_instance().map_err(fail)?;
            let (t1, t2) = pcp_to_transducer_pair(&inst);
            for (t, suffix) in [(&t1, "x"), (&t2, "y")] {
                let mut path = out.as_os_str().to_os_string();
                path.push(".");
                path.push(suffix);
                emit(
                    Manifest::of_transducer(t),
                    "reduce --target transducers",
                    Path::new(&path),
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(instance: &Path, bound: usize, out: Option<&Path>) -> CliResult {
    let (manifest, text) = read_manifest(instance)?;
    let inst = manifest.to_pcp_instance().map_err(fail)?;
    let search = inst.search_lasso_solution(bound);
    match search.solution {
        Some(sigma) => {
            println!("{sigma}");
            if let Some(out) = out {
                let m = Manifest::of_witness(&WitnessRecord::PcpSolution(sigma))
                    .with_provenance(text.as_bytes(), &format!("search --overhang-bound {bound}"));
                write_file(out, &m.to_canonical_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("no lasso solution within bound, bound-hit={}", search.bound_hits);
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify(instance: &Path, sigma: &str) -> CliResult {
    let (manifest, _) = read_manifest(instance)?;
    let inst = manifest.to_pcp_instance().map_err(fail)?;
    let sigma = LassoWord::parse(inst.index_alphabet(), sigma).map_err(fail)?;
    match inst.check_solution(&sigma).map_err(fail)? {
        SolutionCheck::Holds => {
            println!("solution verified");
            Ok(ExitCode::SUCCESS)
        }
        SolutionCheck::ConstraintRejected => {
            println!("constraint rejected the index word");
            Ok(ExitCode::from(1))
        }
        SolutionCheck::WordsDiffer { position } => {
            println!("word equality failed at position {position}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_probe(
    transducer: &Path,
    point: &str,
    depth: usize,
    kmax: usize,
    witness_instance: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let (manifest, text) = read_manifest(transducer)?;
    let t = manifest.to_transducer().map_err(fail)?;
    let x = LassoWord::parse(t.input_alphabet(), point).map_err(fail)?;
    let generator: Option<PcpRegInstance> = match witness_instance {
        Some(path) => {
            let (m, _) = read_manifest(path)?;
            let inst = m.to_pcp_instance().map_err(fail)?;
            if pcp_to_function_f(&inst) == t {
                Some(inst)
            } else {
                eprintln!(
                    "witness instance does not generate this transducer; \
                     probing without certificates"
                );
                None
            }
        }
        None => None,
    };
    let verdict = match &generator {
        Some(inst) => probe_with_witness(inst, &t, &x, depth, kmax),
        None => continuity_probe(&t, &x, depth, kmax),
    }
    .map_err(fail)?;
    let evidence = |rows: &[(usize, usize)]| {
        for (n, k) in rows {
            println!("  n={n} certified with k={k}");
        }
    };
    let code = match &verdict {
        ContinuityVerdict::ContinuousUpTo { depth, witness_k } => {
            println!("ContinuousUpTo({depth})");
            evidence(witness_k);
            ExitCode::SUCCESS
        }
        ContinuityVerdict::DiscontinuityEvidence { failing_n, witness, certified, k_max } => {
            println!("DiscontinuityEvidence(n={failing_n}) witness={witness} within k_max={k_max}");
            evidence(certified);
            ExitCode::from(1)
        }
        ContinuityVerdict::Unknown { failing_n, certified, k_max } => {
            println!("Unknown(n={failing_n}) exhausted k_max={k_max}");
            evidence(certified);
            ExitCode::from(3)
        }
    };
    if let Some(out) = out {
        let m = Manifest::of_verdict(&verdict).with_provenance(text.as_bytes(), "probe");
        write_file(out, &m.to_canonical_string())?;
    }
    Ok(code)
}

fn cmd_tm_search(machine: &Path, config_bound: usize, step_budget: usize) -> CliResult {
    let (manifest, _) = read_manifest(machine)?;
    let m = manifest.to_turing_machine().map_err(fail)?;
    let search = m.recurring_search(config_bound, step_budget);
    match search.lasso {
        Some(run) => {
            println!(
                "recurring run found: stem {} steps, cycle {} steps",
                run.stem.len(),
                run.cycle.len()
            );
            for c in &run.stem {
                println!("  {}", m.render(c));
            }
            println!("  --cycle--");
            for c in &run.cycle {
                println!("  {}", m.render(c));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let note = if search.truncated { "bounds hit" } else { "state space exhausted" };
            println!("no recurring run within bounds ({note}, {} configurations)", search.explored);
            Ok(ExitCode::from(1))
        }
    }
}

/// Reads an automaton from a JSON manifest or, when the file leads with
/// the version header, from HOA.
fn load_automaton(path: &Path) -> Result<BuchiAutomaton, String> {
    let text = read_text(path)?;
    if text.trim_start().starts_with("HOA:") {
        import_hoa(&text).map_err(fail)
    } else {
        Manifest::parse(&text).map_err(fail)?.to_automaton().map_err(fail)
    }
}

fn cmd_nba_empty(path: &Path) -> CliResult {
    match load_automaton(path)?.accepted_lasso() {
        None => {
            println!("language is empty");
            Ok(ExitCode::SUCCESS)
        }
        Some(witness) => {
            println!("language is non-empty, witness {witness}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_nba_accepts(path: &Path, lasso: &str) -> CliResult {
    let a = load_automaton(path)?;
    let w = LassoWord::parse(a.alphabet(), lasso).map_err(fail)?;
    if a.accepts_lasso(&w).map_err(fail)? {
        println!("accepted");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("rejected");
        Ok(ExitCode::from(1))
    }
}

fn cmd_nba_convert(path: &Path, out: Option<&Path>, format: Format) -> CliResult {
    let a = load_automaton(path)?;
    let text = match format {
        Format::Json => Manifest::of_automaton(&a).to_canonical_string(),
        Format::Hoa => export_hoa(&a),
    };
    match out {
        Some(out) => {
            write_file(out, &text)?;
            println!("wrote {}", out.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_apply(transducer: &Path, point: &str, out: Option<&Path>) -> CliResult {
    let (manifest, text) = read_manifest(transducer)?;
    let t = manifest.to_transducer().map_err(fail)?;
    let x = LassoWord::parse(t.input_alphabet(), point).map_err(fail)?;
    let witness = t.apply_lasso_witness(&x).map_err(fail)?;
    println!("{}", witness.output);
    if let Some(out) = out {
        let m = Manifest::of_witness(&WitnessRecord::RationalRelation(witness))
            .with_provenance(text.as_bytes(), "apply");
        write_file(out, &m.to_canonical_string())?;
    }
    Ok(ExitCode::SUCCESS)
}
