//! `steering`: evaluate entropic steering criteria on small multipartite
//! states, sweep state families, locate white-noise detection thresholds,
//! and self-check the criterion engine against explicit LHS models.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steering_core::criteria::{
    classify, evaluate_bipartite, evaluate_one_to_two, evaluate_two_to_one, CriterionId,
    CriterionReport, REPORT_CSV_HEADER,
};
use steering_core::dist::joint_distribution;
use steering_core::io;
use steering_core::lhs::{run_batch_check, ModelKind};
use steering_core::observables::{Observable, ObservablePair};
use steering_core::robustness::{find_threshold, sweep, BoundKind, StateFamily};
use steering_core::state::{ghz_family, ghz_standard, w_state, white_noise_mix, State};
use steering_core::{Error, PartyPairs, Result};

#[derive(Parser)]
#[command(
    name = "steering",
    version,
    about = "Entropic multipartite steering detection",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the steering criteria of one scenario on a state.
    Eval(EvalArgs),
    /// Tabulate criterion values along a state family into a CSV file.
    Sweep(SweepArgs),
    /// Locate the lowest parameter at which a criterion bound is violated.
    Threshold(ThresholdArgs),
    /// Sample LHS-type models and verify that no bound is ever violated.
    LhsCheck(LhsCheckArgs),
    /// Dump the joint outcome distribution of one measurement setting.
    Dist(DistArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// State: `ghz:a=0.7071`, `w`, `ghz-noise:p=0.9`, `w-noise:p=0.9`, or a
    /// JSON state file path.
    #[arg(long)]
    state: String,
    /// Steering scenario to evaluate.
    #[arg(long, value_enum)]
    scenario: Scenario,
    /// Observable pair for every party: `pauli`, `clock-shift`, or two
    /// built-in basis names like `pauliX,pauliZ` or `shift,clock`.
    #[arg(long, default_value = "pauli")]
    obs: String,
    /// Emit machine-readable CSV instead of the table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct DistArgs {
    /// State spec, as for `eval`.
    #[arg(long)]
    state: String,
    /// Which global setting to measure: every party's first or second
    /// observable.
    #[arg(long, value_enum, default_value_t = Setting::First)]
    setting: Setting,
    /// Observable pair for every party, as for `eval`.
    #[arg(long, default_value = "pauli")]
    obs: String,
}

#[derive(Args)]
struct SweepArgs {
    /// State family: ghz, ghz-noise, or w-noise.
    #[arg(long)]
    family: String,
    /// Range start (inclusive).
    #[arg(long)]
    from: f64,
    /// Range end (inclusive).
    #[arg(long)]
    to: f64,
    /// Number of evenly spaced grid points.
    #[arg(long)]
    steps: usize,
    /// Comma-separated criterion ids, or `all`.
    #[arg(long, default_value = "all")]
    criteria: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ThresholdArgs {
    /// State family: ghz, ghz-noise, or w-noise.
    #[arg(long)]
    family: String,
    /// Criterion id (S1, S2, S3, C/CB, CC, A, T1, T2A, T2B, Tsum).
    #[arg(long)]
    criterion: String,
    /// Which bound to track.
    #[arg(long, value_enum)]
    bound: BoundChoice,
    /// Bisection tolerance on the bracket width.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Args)]
struct LhsCheckArgs {
    /// Model class to sample: lhs, hybrid, or two-to-one.
    #[arg(long)]
    kind: String,
    /// Number of models.
    #[arg(long)]
    samples: usize,
    /// Branches per model (per family for hybrid models).
    #[arg(long, default_value_t = 4)]
    branches: usize,
    /// RNG seed; identical seeds reproduce identical model batches.
    #[arg(long)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    OneToTwo,
    TwoToOne,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Setting {
    /// Everyone's first observable (the X-like one).
    First,
    /// Everyone's second observable (the Z-like one).
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundChoice {
    Steering,
    Gms,
}

impl From<BoundChoice> for BoundKind {
    fn from(b: BoundChoice) -> Self {
        match b {
            BoundChoice::Steering => BoundKind::Steering,
            BoundChoice::Gms => BoundKind::Gms,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::LhsCheck(args) => cmd_lhs_check(args),
        Command::Dist(args) => cmd_dist(args),
    }
}

/// Resolve `ghz:a=…`, `w`, `ghz-noise:p=…`, `w-noise:p=…`, or a file path.
fn parse_state_spec(spec: &str) -> Result<State> {
    fn param(spec: &str, rest: &str, key: &str) -> Result<f64> {
        let value = rest
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| {
                Error::Parse(format!("expected `{key}=<value>` in state spec `{spec}`"))
            })?;
        value
            .parse()
            .map_err(|_| Error::Parse(format!("bad number `{value}` in state spec `{spec}`")))
    }

    if spec == "w" {
        return Ok(State::Pure(w_state()));
    }
    if let Some(rest) = spec.strip_prefix("ghz-noise:") {
        let p = param(spec, rest, "p")?;
        return Ok(State::Density(white_noise_mix(&ghz_standard(), p)?));
    }
    if let Some(rest) = spec.strip_prefix("w-noise:") {
        let p = param(spec, rest, "p")?;
        return Ok(State::Density(white_noise_mix(&w_state(), p)?));
    }
    if let Some(rest) = spec.strip_prefix("ghz:") {
        let a = param(spec, rest, "a")?;
        return Ok(State::Pure(ghz_family(a)?));
    }
    io::load_state(spec.as_ref())
}

/// A built-in observable by name, sized to one party.
fn named_observable(name: &str, dim: usize) -> Result<Observable> {
    match name.to_ascii_lowercase().as_str() {
        "paulix" => {
            if dim != 2 {
                return Err(Error::Domain(format!(
                    "pauliX needs a qubit party, found dimension {dim}"
                )));
            }
            Ok(Observable::pauli_x())
        }
        "pauliz" => {
            if dim != 2 {
                return Err(Error::Domain(format!(
                    "pauliZ needs a qubit party, found dimension {dim}"
                )));
            }
            Ok(Observable::pauli_z())
        }
        "clock" => Observable::clock_basis(dim),
        "shift" => Observable::shift_basis(dim),
        other => Err(Error::Domain(format!(
            "unknown observable `{other}` (built-ins: pauliX, pauliZ, clock, shift)"
        ))),
    }
}

/// Observable pair spec: `pauli`, `clock-shift`, or `<first>,<second>` with
/// built-in basis names.
fn pair_for(dim: usize, obs: &str) -> Result<ObservablePair> {
    match obs.to_ascii_lowercase().as_str() {
        "pauli" => {
            if dim != 2 {
                return Err(Error::Domain(format!(
                    "pauli observables need qubit parties, found dimension {dim}"
                )));
            }
            Ok(ObservablePair::pauli_xz())
        }
        "clock-shift" => ObservablePair::clock_shift(dim),
        spec => match spec.split_once(',') {
            Some((first, second)) => ObservablePair::new(
                named_observable(first.trim(), dim)?,
                named_observable(second.trim(), dim)?,
            ),
            None => Err(Error::Domain(format!(
                "unknown observable pair `{obs}` (use pauli, clock-shift, or <first>,<second>)"
            ))),
        },
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let state = parse_state_spec(&args.state)?;
    let rho = state.to_density();
    let dims = rho.layout().dims().to_vec();
    let pairs: Vec<ObservablePair> = dims
        .iter()
        .map(|&d| pair_for(d, &args.obs))
        .collect::<Result<_>>()?;

    let reports: Vec<CriterionReport> = match args.scenario {
        Scenario::OneToTwo => evaluate_one_to_two(&rho, &pairs[0], &pairs[1], &pairs[2])?,
        Scenario::TwoToOne => evaluate_two_to_one(&rho, &pairs[0], &pairs[1], &pairs[2])?,
        Scenario::Bipartite => vec![evaluate_bipartite(&rho, &pairs[0], &pairs[1])?],
    };

    if args.csv {
        println!("{REPORT_CSV_HEADER}");
        for r in &reports {
            println!("{}", r.csv_row());
        }
        return Ok(());
    }

    let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:>9.6}")).unwrap_or_else(|| "        -".into());
    println!(
        "{:<10} {:>9} {:>9} {:>9} {:>9} {:>9}  verdict",
        "criterion", "lhs", "steer", "gms", "margin_s", "margin_g"
    );
    for r in &reports {
        println!(
            "{:<10} {:>9.6} {} {} {} {}  {}",
            r.id.name(),
            r.lhs_bits,
            fmt_opt(r.steering_bound_bits),
            fmt_opt(r.gms_bound_bits),
            fmt_opt(r.steering_margin()),
            fmt_opt(r.gms_margin()),
            r.verdict
        );
        if let Some(weak) = r.weak_steering_bound_bits {
            println!("           (weak nonsteerable form -4*log2(alpha_min) = {weak:.6})");
        }
    }
    let overall = classify(&reports)?;
    println!("overall: {} (via {})", overall.verdict, overall.achieved_by);
    Ok(())
}

fn parse_criteria(list: &str) -> Result<Vec<CriterionId>> {
    if list.eq_ignore_ascii_case("all") {
        return Ok(CriterionId::all_tripartite());
    }
    list.split(',')
        .map(|s| CriterionId::from_str(s.trim()))
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let family = StateFamily::from_str(&args.family)?;
    let criteria = parse_criteria(&args.criteria)?;
    let pairs = PartyPairs::pauli();
    let result = sweep(family, args.from, args.to, args.steps, &pairs, &criteria)?;
    let csv = result.to_csv();
    std::fs::write(&args.out, &csv)?;
    println!(
        "wrote {} rows ({} points x {} criteria) to {}",
        result.rows.len(),
        args.steps,
        criteria.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_threshold(args: ThresholdArgs) -> Result<()> {
    let family = StateFamily::from_str(&args.family)?;
    let criterion = CriterionId::from_str(&args.criterion)?;
    let th = find_threshold(family, criterion, args.bound.into(), args.tol)?;
    match th.p_star {
        Some(p) => println!(
            "p* = {p:.6} (bracket ±{:.1e}) family={} criterion={} bound={} = {:.6} bits",
            th.bracket, th.family, th.criterion, th.bound_kind, th.bound_bits
        ),
        None => println!(
            "p* = not-found (no violation on the scan grid) family={} criterion={} bound={}",
            th.family, th.criterion, th.bound_kind
        ),
    }
    Ok(())
}

fn cmd_dist(args: DistArgs) -> Result<()> {
    let state = parse_state_spec(&args.state)?;
    let rho = state.to_density();
    let pairs: Vec<ObservablePair> = rho
        .layout()
        .dims()
        .iter()
        .map(|&d| pair_for(d, &args.obs))
        .collect::<Result<_>>()?;
    let observables: Vec<&Observable> = pairs
        .iter()
        .map(|p| match args.setting {
            Setting::First => p.first(),
            Setting::Second => p.second(),
        })
        .collect();
    let dist = joint_distribution(&rho, &observables)?;

    // header a,b,c,…,probability sized to the party count
    let header: Vec<String> = (0..dist.parties())
        .map(|i| {
            steering_core::PartyLayout::party_name(i)
                .to_ascii_lowercase()
                .to_string()
        })
        .collect();
    println!("{},probability", header.join(","));
    for (outcome, p) in dist.outcomes() {
        let cells: Vec<String> = outcome.iter().map(|o| o.to_string()).collect();
        println!("{},{}", cells.join(","), io::fmt_sig12(p));
    }
    Ok(())
}

fn cmd_lhs_check(args: LhsCheckArgs) -> Result<()> {
    let kind = ModelKind::from_str(&args.kind)?;
    let pairs = PartyPairs::pauli();
    match run_batch_check(kind, args.samples, args.branches, args.seed, &pairs) {
        Ok(summary) => {
            println!(
                "PASS {}/{} ({} checks, min margin {:.3e} at {})",
                summary.models, args.samples, summary.checks, summary.min_margin, summary.tightest
            );
            Ok(())
        }
        Err(Error::OracleFailure {
            check,
            margin,
            model_json,
        }) => {
            println!("FAIL: check `{check}` violated with margin {margin:.3e}");
            println!("offending model: {model_json}");
            Err(Error::OracleFailure {
                check,
                margin,
                model_json: String::from("dumped above"),
            })
        }
        Err(e) => Err(e),
    }
}
