use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use wernerlike::deformed::{Family, Kind, Sign};
use wernerlike::discord::OracleConfig;
use wernerlike::states::examples;
use wernerlike::WMatrix;

use wernerlike_cli::crossover::{self, DeformedFamily, Functional};
use wernerlike_cli::info::state_info;
use wernerlike_cli::state::{self, parse_real, DeformedParams, PRange, StateKind, StateSpec};
use wernerlike_cli::sweep::{sweep, write_csv, SweepConfig};
use wernerlike_cli::verify::{verify, VerifyConfig, DEFAULT_THRESHOLD};
use wernerlike_cli::{CliError, ExitStatus, Result};

#[derive(Parser)]
#[command(name = "wernerlike", version, about = "Entanglement and quantum discord of Werner-like two-qubit states")]
struct Cli {
    /// Global numeric tolerance (default 1e-10).
    #[arg(long, global = true, value_parser = parse_real)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write EoF and discord along a p-grid as CSV.
    Sweep(SweepArgs),
    /// Compare the closed-form discord with the brute-force oracle.
    Verify(VerifyArgs),
    /// Locate EoF/discord crossings and the discord-ordering switch.
    Crossover(CrossoverArgs),
    /// Print eigenvalues, concurrence, entropies and correlations of one state.
    StateInfo(InfoArgs),
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: StateKind,
    /// File holding a W-matrix as four `re+imj` tokens, row-major.
    #[arg(long, conflicts_with_all = ["concurrence", "example"])]
    wmatrix: Option<PathBuf>,
    /// Canonical W-matrix diag(a, b) with 2ab = c.
    #[arg(long, value_parser = parse_real, conflicts_with = "example")]
    concurrence: Option<f64>,
    /// Reference state: psi_max, psi_3, psi_2 or psi_1.
    #[arg(long)]
    example: Option<String>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Trap depth (Pöschl-Teller) or number of bound states (Morse).
    #[arg(long = "N")]
    depth: Option<u32>,
    #[arg(long, value_parser = parse_real)]
    kappa: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    alpha: Option<f64>,
    /// Fock truncation; chosen automatically when absent.
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, value_parser = parse_kind_letter, default_value = "C")]
    deformed_kind: Kind,
    #[arg(long, value_parser = parse_sign, default_value = "plus")]
    sign: Sign,
    /// Allow Morse levels up to 2N instead of √(2N+1).
    #[arg(long)]
    morse_relaxed: bool,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    p_start: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    p_stop: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    p_step: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Add oracle discord and residual columns.
    #[arg(long)]
    oracle: bool,
    /// Oracle grid: n polar by 2n azimuthal points.
    #[arg(long)]
    grid: Option<usize>,
    /// Add a concurrence column.
    #[arg(long)]
    with_concurrence: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long)]
    grid: Option<usize>,
    /// Largest accepted relative residual.
    #[arg(long, value_parser = parse_real, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pair {
    /// EoF against discord.
    EofQd,
    /// Undeformed against A-kind discord.
    CVsA,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalArg {
    MaxOverP,
    PCrossing,
    Both,
}

#[derive(Args)]
struct CrossoverArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value = "eof-qd")]
    pair: Pair,
    #[arg(long, value_enum, default_value = "both")]
    functional: FunctionalArg,
    /// Lower end of the search bracket.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    lo: Option<f64>,
    /// Upper end of the search bracket.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    hi: Option<f64>,
    /// p-bracket for the fixed-|α| crossing.
    #[arg(long, value_parser = parse_real, default_value = "0.5")]
    p_lo: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.99")]
    p_hi: f64,
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    p: f64,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    grid: Option<usize>,
}

fn parse_kind(s: &str) -> std::result::Result<StateKind, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: wernerlike::Error| e.to_string())
}

fn parse_kind_letter(s: &str) -> std::result::Result<Kind, String> {
    s.parse().map_err(|e: wernerlike::Error| e.to_string())
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse().map_err(|e: wernerlike::Error| e.to_string())
}

impl StateArgs {
    fn deformed_params(&self) -> Result<DeformedParams> {
        let family = self.family.ok_or_else(|| CliError::usage("--family is required for deformed states"))?;
        let deformation = state::deformation(family, self.depth, self.kappa, self.morse_relaxed)?;
        let alpha = self.alpha.ok_or_else(|| CliError::usage("--alpha is required for deformed states"))?;
        Ok(DeformedParams { deformation, alpha, kind: self.deformed_kind, sign: self.sign, n_max: self.nmax })
    }

    fn pure_state(&self) -> Result<Option<WMatrix>> {
        if let Some(path) = &self.wmatrix {
            return state::read_wmatrix(path).map(Some);
        }
        if let Some(c) = self.concurrence {
            return Ok(Some(WMatrix::canonical(c)?));
        }
        match &self.example {
            Some(name) => state::example_state(name).map(Some),
            None => Ok(None),
        }
    }

    /// Every state the arguments describe; several when a GWL run names no
    /// pure state (the four reference states are used).
    fn specs(&self, allow_all_examples: bool) -> Result<Vec<(String, StateSpec)>> {
        match self.kind {
            StateKind::Werner => Ok(vec![("werner".into(), StateSpec::Werner)]),
            StateKind::Deformed => {
                let spec = StateSpec::deformed(self.deformed_params()?.resolve()?)?;
                Ok(vec![(spec.to_string(), spec)])
            }
            StateKind::Gwl => match self.pure_state()? {
                Some(psi) => Ok(vec![(format!("gwl psi=[{psi}]"), StateSpec::gwl(psi))]),
                None if allow_all_examples => Ok(examples::all()
                    .into_iter()
                    .map(|(name, psi, _)| (name.to_string(), StateSpec::gwl(psi)))
                    .collect()),
                None => Err(CliError::usage("gwl needs --wmatrix, --concurrence or --example")),
            },
        }
    }

    fn spec(&self) -> Result<StateSpec> {
        Ok(self.specs(false)?.remove(0).1)
    }
}

impl RangeArgs {
    fn range(&self, spec: &StateSpec, default_step: f64) -> Result<PRange> {
        let (lo, hi) = spec.p_range();
        PRange::new(self.p_start.unwrap_or(lo), self.p_stop.unwrap_or(hi), self.p_step.unwrap_or(default_step))
    }
}

fn oracle_config(grid: Option<usize>) -> OracleConfig {
    grid.map(OracleConfig::with_grid).unwrap_or_default()
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let spec = args.state.spec()?;
    let range = args.range.range(&spec, 0.01)?;
    info!("sweep {spec} over {range:?}");
    let mut cfg = SweepConfig::new(spec, range)?;
    if args.oracle {
        cfg.oracle = Some(oracle_config(args.grid));
    }
    cfg.concurrence = args.with_concurrence;
    let rows = sweep(&cfg)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            write_csv(BufWriter::new(file), &rows, args.oracle, args.with_concurrence)
                .map_err(|e| CliError::io(path, e))
        }
        None => write_csv(io::stdout().lock(), &rows, args.oracle, args.with_concurrence)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<()> {
    let oracle = oracle_config(args.grid);
    let mut worst: Option<CliError> = None;
    for (name, spec) in args.state.specs(true)? {
        let range = args.range.range(&spec, 0.05)?;
        let mut cfg = VerifyConfig::new(spec, range, oracle)?;
        cfg.threshold = args.threshold;
        let report = verify(&cfg);
        println!("{name}: {report}");
        if let Err(e) = report.into_result() {
            worst.get_or_insert(e);
        }
    }
    worst.map_or(Ok(()), Err)
}

fn report(label: &str, outcome: &wernerlike::Result<f64>) {
    match outcome {
        Ok(v) => println!("{label}: {v}"),
        Err(e) => println!("{label}: {e}"),
    }
}

fn run_crossover(args: &CrossoverArgs) -> Result<()> {
    let tol = crossover::DEFAULT_TOL;
    if args.state.kind == StateKind::Werner {
        let r = crossover::werner_crossing(args.lo.unwrap_or(-0.99), args.hi.unwrap_or(-0.5), tol);
        report("werner EoF-QD crossing p", &r);
        return r.map(|_| ()).map_err(Into::into);
    }
    if args.state.kind != StateKind::Deformed {
        return Err(CliError::usage("crossover supports --kind werner or --kind deformed"));
    }
    let s = &args.state;
    let family = s.family.ok_or_else(|| CliError::usage("--family is required for deformed states"))?;
    let deformation = state::deformation(family, s.depth, s.kappa, s.morse_relaxed)?;
    let alpha = s.alpha.unwrap_or(0.65);
    let n_max = match s.nmax {
        Some(n) => n,
        None => wernerlike::deformed::select_nmax(&deformation, alpha, s.deformed_kind, state::NMAX_TOL)?,
    };
    let fam = DeformedFamily::new(deformation, n_max, s.deformed_kind)?;
    let grid = crossover::default_p_grid();
    println!("# {family} n_max={n_max} kind={}", s.deformed_kind);

    let outcomes: Vec<wernerlike::Result<f64>> = match args.pair {
        Pair::CVsA => {
            let (lo, hi) = (args.lo.unwrap_or(1.0), args.hi.unwrap_or(1.6));
            println!("# root in |alpha| of max_p(QD_C - QD_A), p in [{}, {}]", grid.start, grid.stop);
            let r = crossover::ordering_switch(&fam, lo, hi, &grid, 1e-6);
            report("ordering switch |alpha|", &r);
            vec![r]
        }
        Pair::EofQd => {
            let mut out = Vec::new();
            let which = match args.functional {
                FunctionalArg::MaxOverP => vec![Functional::MaxOverP],
                FunctionalArg::PCrossing => vec![Functional::PCrossing],
                FunctionalArg::Both => vec![Functional::MaxOverP, Functional::PCrossing],
            };
            for f in which {
                let r = match f {
                    Functional::MaxOverP => {
                        let (lo, hi) = (args.lo.unwrap_or(0.3), args.hi.unwrap_or(1.5));
                        println!("# {f}: root in |alpha| of max_p(EoF - QD), p in [{}, {}]", grid.start, grid.stop);
                        crossover::eof_qd_crossover_max_over_p(&fam, lo, hi, &grid, 1e-6)
                    }
                    Functional::PCrossing => {
                        println!("# {f}: root in p of EoF - QD at |alpha| = {alpha}");
                        crossover::eof_qd_crossover_p(&fam, alpha, args.p_lo, args.p_hi, tol)
                    }
                };
                report(&f.to_string(), &r);
                out.push(r);
            }
            out
        }
    };
    if outcomes.iter().any(|r| r.is_ok()) {
        return Ok(());
    }
    Err(outcomes.into_iter().find_map(|r| r.err()).expect("at least one functional").into())
}

fn run_info(args: &InfoArgs) -> Result<()> {
    let spec = args.state.spec()?;
    let oracle = args.oracle.then(|| oracle_config(args.grid));
    let info = state_info(&spec, args.p, oracle.as_ref())?;
    println!("state = {spec}");
    println!("{info}");
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(tol) = cli.tol {
        wernerlike::linalg::set_tolerance(tol)?;
    }
    match &cli.command {
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
        Command::Crossover(a) => run_crossover(a),
        Command::StateInfo(a) => run_info(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(ExitStatus::Usage as u8) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => {
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
