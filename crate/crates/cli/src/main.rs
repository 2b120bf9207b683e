//! Command-line front end: build reduction instances, run the solvers,
//! verify deciders against the clique oracle and time the recognizers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cliquelab::dyck::dyck_distance;
use cliquelab::folding::{parse_weights, wrna_fold, WeightedSequence};
use cliquelab::grammars::{clique_grammar, to_cnf, Grammar};
use cliquelab::graphs::parse_graph;
use cliquelab::harness::{
    clique_cnf, run_bench, run_campaign, BenchSpec, CampaignReport, CampaignSpec, HarnessError, Method,
};
use cliquelab::recognition::Recognizer;
use cliquelab::reductions::{
    build_cfg_string, build_dyck_instance_with_budget, cfg_metadata, build_rna_instance, BuildMetadata, DyckPadding, ReductionError,
};
use cliquelab::tokens::{PairedAlphabet, TokenSequence};

const EXIT_INPUT: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "cliquelab", version, about = "Clique reductions to CFG recognition, RNA folding and Dyck distance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the string (and sidecar metadata) encoding a graph.
    Reduce(ReduceArgs),
    /// Run a solver on a token file.
    Solve(SolveArgs),
    /// Compare every decider with the brute-force clique oracle.
    Verify(VerifyArgs),
    /// Time the CFG recognizers on complete graphs.
    Bench(BenchArgs),
    /// Grammar utilities.
    Grammar {
        #[command(subcommand)]
        command: GrammarCommand,
    },
}

#[derive(Subcommand)]
enum GrammarCommand {
    /// Write the clique grammar and its CNF.
    Export {
        /// Print the CNF instead of the grammar.
        #[arg(long)]
        cnf: bool,
        /// Directory receiving `clique.cfg` and `clique.cnf.cfg`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Cfg,
    Rna,
    Dyck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Schedule {
    Scaled,
    Geometric,
    PaperExact,
}

#[derive(Args)]
struct PaddingArgs {
    /// Dyck padding schedule.
    #[arg(long, value_enum, default_value = "scaled")]
    padding: Schedule,
    /// Base of the padding schedule; defaults to 4n.
    #[arg(long)]
    base: Option<u64>,
    /// Largest number of tokens a build or solve may handle.
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
}

impl PaddingArgs {
    fn padding(&self, n: usize) -> DyckPadding {
        let base = self.base.unwrap_or(4 * n as u64);
        match self.padding {
            Schedule::Scaled => DyckPadding::Scaled { base },
            Schedule::Geometric => DyckPadding::Geometric { base },
            Schedule::PaperExact => DyckPadding::PaperExact,
        }
    }
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Graph file, text or JSON.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Token file to write; metadata goes to `<out>.meta.json` and RNA
    /// weights to `<out>.weights`. Prints the tokens when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    padding: PaddingArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Token file.
    #[arg(long)]
    input: PathBuf,
    /// Grammar file for `cfg`; the clique grammar when omitted.
    #[arg(long)]
    grammar: Option<PathBuf>,
    /// Weight file for `rna`; every letter weighs 1 when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// `cyk`, `chart` or `valiant-<naive|packed|four-russians>`.
    #[arg(long, default_value = "chart")]
    recognizer: Recognizer,
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check every graph on 1..=nmax nodes.
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Random graphs per size listed in `--random-sizes`.
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, value_delimiter = ',')]
    random_sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "cfg,rna,dyck")]
    methods: Vec<Problem>,
    /// Dyck instances are only built for graphs up to this size.
    #[arg(long, default_value_t = 3)]
    dyck_nmax: usize,
    #[arg(long, default_value = "chart")]
    recognizer: Recognizer,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Record wall times (reports then differ between runs).
    #[arg(long)]
    timing: bool,
    /// Report file; printed when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    padding: PaddingArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "cyk,valiant-packed,chart")]
    recognizers: Vec<Recognizer>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Tab-separated table; printed when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Error carrying its exit code.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Self {
        Failure(EXIT_INPUT, msg.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn reduction_failure(e: ReductionError) -> Failure {
    match e {
        ReductionError::OverBudget { .. } => Failure(EXIT_BUDGET, e.to_string()),
        other => Failure::input(other),
    }
}

fn cmd_reduce(a: &ReduceArgs) -> Result<(), Failure> {
    let g = parse_graph(&read(&a.graph)?).map_err(|e| Failure::input(format!("{}: {e}", a.graph.display())))?;
    if a.k == 0 {
        return Err(Failure(EXIT_USAGE, "--k must be at least 1".into()));
    }
    let (tokens, metadata, weights): (TokenSequence, BuildMetadata, Option<String>) = match a.problem {
        Problem::Cfg => {
            let w = build_cfg_string(&g, a.k);
            if w.len() as u64 > a.padding.budget {
                return Err(Failure(EXIT_BUDGET, format!("string has {} tokens, over the budget", w.len())));
            }
            let meta = cfg_metadata(&g, a.k, w.len());
            (w, meta, None)
        }
        Problem::Rna => {
            let inst = build_rna_instance(&g, a.k).map_err(reduction_failure)?;
            let weights = inst.sequence.weights_text();
            (inst.sequence.tokens, inst.metadata, Some(weights))
        }
        Problem::Dyck => {
            let padding = a.padding.padding(g.n());
            let inst =
                build_dyck_instance_with_budget(&g, a.k, &padding, a.padding.budget).map_err(reduction_failure)?;
            (inst.tokens, inst.metadata, None)
        }
    };
    match &a.out {
        Some(out) => {
            write(out, &tokens.to_text())?;
            write(&sidecar(out, ".meta.json"), &metadata.to_json())?;
            if let Some(w) = weights {
                write(&sidecar(out, ".weights"), &w)?;
            }
        }
        None => print!("{}", tokens.to_text()),
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs) -> Result<(), Failure> {
    let tokens = TokenSequence::parse(&read(&a.input)?);
    if tokens.len() as u64 > a.budget {
        return Err(Failure(EXIT_BUDGET, format!("{} tokens, over the budget of {}", tokens.len(), a.budget)));
    }
    match a.problem {
        Problem::Cfg => {
            let member = match &a.grammar {
                Some(p) => {
                    let g = Grammar::parse(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                    a.recognizer.recognize(&to_cnf(&g), &tokens)
                }
                None => a.recognizer.recognize(&clique_cnf(), &tokens),
            }
            .map_err(Failure::input)?;
            println!("member={member}");
        }
        Problem::Rna => {
            let alphabet = PairedAlphabet::infer(&tokens);
            let weights = match &a.weights {
                Some(p) => parse_weights(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
                None => alphabet.pairs().iter().map(|(b, _)| (b.clone(), 1)).collect(),
            };
            let ws = WeightedSequence::new(tokens, alphabet, &weights).map_err(Failure::input)?;
            println!("score={}", wrna_fold(&ws).map_err(Failure::input)?.score);
        }
        Problem::Dyck => {
            let alphabet = PairedAlphabet::infer(&tokens);
            println!("score={}", dyck_distance(&tokens, &alphabet).map_err(Failure::input)?);
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let mut reports = Vec::new();
    let dyck_sizes: Vec<usize> = (1..=a.nmax.min(a.dyck_nmax)).collect();
    let dyck_random: Vec<usize> = a.random_sizes.iter().copied().filter(|&n| n <= a.dyck_nmax).collect();
    let mut plain = Vec::new();
    let mut dyck_bases = Vec::new();
    for m in &a.methods {
        match m {
            Problem::Cfg => plain.push(Method::Cfg { recognizer: a.recognizer }),
            Problem::Rna => plain.push(Method::Rna),
            Problem::Dyck => dyck_bases.extend(dyck_sizes.iter().chain(&dyck_random).copied()),
        }
    }
    let base = CampaignSpec {
        trials: a.trials,
        ks: vec![a.k],
        seed: a.seed,
        workers: a.workers,
        timing: a.timing,
        budget: a.padding.budget,
        ..CampaignSpec::default()
    };
    if !plain.is_empty() {
        let spec = CampaignSpec {
            exhaustive: (1..=a.nmax).collect(),
            random: a.random_sizes.clone(),
            methods: plain,
            ..base.clone()
        };
        reports.push(run_campaign(&spec).map_err(Failure::input)?);
    }
    // the padding depends on n, so Dyck runs one campaign per size
    dyck_bases.sort_unstable();
    dyck_bases.dedup();
    for n in dyck_bases {
        let spec = CampaignSpec {
            exhaustive: if dyck_sizes.contains(&n) { vec![n] } else { vec![] },
            random: a.random_sizes.iter().copied().filter(|&m| m == n).collect(),
            methods: vec![Method::Dyck { padding: a.padding.padding(n) }],
            ..base.clone()
        };
        let report = run_campaign(&spec).map_err(|e| match e {
            HarnessError::Reduction(r) => reduction_failure(r),
            other => Failure(EXIT_DISAGREE, other.to_string()),
        })?;
        reports.push(report);
    }
    let merged = CampaignReport::merge(a.seed, reports);
    emit(a.out.as_deref(), &merged.to_json())?;
    eprintln!("{} of {} records agree with the oracle", merged.agreements, merged.total);
    if !merged.all_agree() {
        return Err(Failure(EXIT_DISAGREE, format!("{} disagreements", merged.disagreements.len())));
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let spec = BenchSpec { sizes: a.sizes.clone(), k: a.k, recognizers: a.recognizers.clone(), repeats: a.repeats };
    let table = run_bench(&spec).map_err(Failure::input)?;
    emit(a.out.as_deref(), &table.to_tsv())?;
    for (method, slope) in &table.slopes {
        eprintln!("{method}: log-log slope {slope:.2}");
    }
    for flag in &table.flags {
        eprintln!("flag: {flag}");
    }
    Ok(())
}

fn cmd_grammar(cnf: bool, out_dir: Option<&Path>) -> Result<(), Failure> {
    let g = clique_grammar();
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            write(&dir.join("clique.cfg"), &g.to_text())?;
            write(&dir.join("clique.cnf.cfg"), &clique_cnf().to_grammar().to_text())
        }
        None if cnf => emit(None, &clique_cnf().to_grammar().to_text()),
        None => emit(None, &g.to_text()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Reduce(a) => cmd_reduce(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Grammar { command: GrammarCommand::Export { cnf, out_dir } } => cmd_grammar(*cnf, out_dir.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
