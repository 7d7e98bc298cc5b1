//! `hkslope`: JSON front end for the hkslope library.
//!
//! Every invocation prints one JSON document on stdout. Exit status is 0 on
//! success, 2 for malformed or invalid input (with `{"error": …}`), and 1 when
//! an internal cross-check fails.

use std::num::{NonZeroU64, NonZeroUsize};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hkslope::extension::{self, ExtensionError};
use hkslope::graded_p1::{self, IdealError, Monomial, MonomialIdeal};
use hkslope::hn::{HnData, HnError};
use hkslope::json::{self, JsonError};
use hkslope::sweep::{run_sweep, SweepReport};
use serde_json::{json, Value};

const JOBS_ENV: &str = "HK_SWEEP_JOBS";

#[derive(Parser, Debug)]
#[command(
    name = "hkslope",
    version,
    about = "Exact Hilbert-Kunz slopes and multiplicities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operations on Harder-Narasimhan data `[[rank,degree],...]`
    Hn(HnArgs),
    /// Extensions of HN data by the trivial line bundle
    Ext {
        #[command(subcommand)]
        command: ExtCommand,
    },
    /// Monomial ideals in K[x,y] and their syzygy bundles on P^1
    Ideal {
        #[command(subcommand)]
        command: IdealCommand,
    },
    /// Exhaustive self-checks
    Check {
        #[command(subcommand)]
        command: CheckCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HnOp {
    MuHk,
    Dual,
    Twist,
    Pullback,
    Dsum,
    Tensor,
    SsDefect,
}

#[derive(Args, Debug)]
struct HnArgs {
    op: HnOp,
    #[arg(long)]
    hn: String,
    /// Second operand for dsum and tensor
    #[arg(long)]
    hn2: Option<String>,
    /// Line bundle degree for twist, map degree for pullback
    #[arg(long, allow_negative_numbers = true)]
    arg: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum ExtCommand {
    /// HN data (or μ_HK bounds) of the extension
    Extend {
        #[arg(long)]
        hn: String,
        /// Level at which the class survives, or `null` for the zero class
        #[arg(long, allow_negative_numbers = true)]
        level: String,
    },
    /// Affineness of the torsor, equivalently a strict drop of μ_HK
    TorsorAffine {
        #[arg(long)]
        hn: String,
        #[arg(long, allow_negative_numbers = true)]
        level: String,
    },
    /// Square-sum comparison for sequences alpha (length r) and beta (length r+1)
    Numkrit {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
enum Method {
    #[default]
    Formula,
    Oracle,
    Both,
}

#[derive(Subcommand, Debug)]
enum IdealCommand {
    /// Hilbert-Kunz multiplicity
    Ehk {
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
    },
    /// Solid closure membership via e_HK(I) = e_HK((I, f))
    Member {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        elem: String,
    },
    /// Syzygy splitting type and HN data of Syz(I)(m)
    Syzygy {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Cross-check every ideal with generator degree ≤ max-degree
    Sweep {
        #[arg(long)]
        max_degree: u32,
    },
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
    status: u8,
}

impl CliError {
    fn usage(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            status: 2,
        }
    }

    fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<HnError> for CliError {
    fn from(e: HnError) -> Self {
        let code = match e {
            HnError::Empty => "EmptyHnData",
            HnError::NonPositiveRank { .. } => "NonPositiveRank",
            HnError::NonDecreasingSlopes { .. } => "NonDecreasingSlopes",
        };
        CliError::usage(code, e.to_string())
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Hn(e) => e.into(),
            JsonError::Syntax(_) => CliError::usage("InvalidJson", e.to_string()),
            JsonError::Shape(_) => CliError::usage("InvalidShape", e.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        let code = match e {
            ExtensionError::LevelOutOfRange { .. } => "LevelOutOfRange",
            ExtensionError::LengthMismatch(_) => "LengthMismatch",
            ExtensionError::ShapeMismatch(_) => "ShapeMismatch",
        };
        CliError::usage(code, e.to_string())
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        let code = match e {
            IdealError::Empty => "EmptyIdeal",
            IdealError::NotPrimary(_) => "NotPrimary",
            IdealError::ShapeMismatch(_) => "ShapeMismatch",
            IdealError::Parse { .. } => "ParseError",
            IdealError::OracleInconsistency(_) => {
                return CliError {
                    code: "OracleInconsistency",
                    message: e.to_string(),
                    status: 1,
                }
            }
        };
        CliError::usage(code, e.to_string())
    }
}

/// A result document and its exit status (nonzero when a cross-check failed).
type Output = (Value, u8);

fn parse_hn(text: &str) -> Result<HnData, CliError> {
    Ok(json::hn_from_json(&json::parse(text)?)?)
}

fn parse_level(text: &str) -> Result<extension::ClassLevel, CliError> {
    Ok(json::class_level_from_json(&json::parse(text)?)?)
}

fn run_hn(args: HnArgs) -> Result<Output, CliError> {
    let s = parse_hn(&args.hn)?;
    let second = || {
        args.hn2
            .as_deref()
            .ok_or_else(|| CliError::usage("MissingArgument", "this operation needs --hn2"))
            .and_then(parse_hn)
    };
    let int_arg = || {
        args.arg
            .ok_or_else(|| CliError::usage("MissingArgument", "this operation needs --arg"))
    };
    let value = match args.op {
        HnOp::MuHk => json!({ "mu_hk": json::rational_to_json(&s.mu_hk()) }),
        HnOp::SsDefect => json!({ "ss_defect": json::rational_to_json(&s.ss_defect()) }),
        HnOp::Dual => hn_result(&s.dual()),
        HnOp::Twist => hn_result(&s.twist(int_arg()?)),
        HnOp::Pullback => {
            let n = u64::try_from(int_arg()?)
                .ok()
                .and_then(NonZeroU64::new)
                .ok_or_else(|| {
                    CliError::usage(
                        "InvalidArgument",
                        "pullback degree must be a positive integer",
                    )
                })?;
            hn_result(&s.pullback(n))
        }
        HnOp::Dsum => hn_result(&s.direct_sum(&second()?)),
        HnOp::Tensor => hn_result(&s.tensor(&second()?)),
    };
    Ok((value, 0))
}

fn hn_result(hn: &HnData) -> Value {
    json!({ "hn": json::hn_to_json(hn), "mu_hk": json::rational_to_json(&hn.mu_hk()) })
}

fn run_ext(command: ExtCommand) -> Result<Output, CliError> {
    let value = match command {
        ExtCommand::Extend { hn, level } => {
            let s = parse_hn(&hn)?;
            let result = extension::extension_hn(&s, parse_level(&level)?)?;
            json::extension_result_to_json(&result)
        }
        ExtCommand::TorsorAffine { hn, level } => {
            let s = parse_hn(&hn)?;
            let level = parse_level(&level)?;
            json!({
                "affine": extension::is_affine_torsor(&s, level)?,
                "hk_drops": extension::hk_drops(&s, level)?,
            })
        }
        ExtCommand::Numkrit { alpha, beta } => {
            let alphas = json::rationals_from_json(&json::parse(&alpha)?)?;
            let betas = json::rationals_from_json(&json::parse(&beta)?)?;
            let report = extension::numkrit_check(&alphas, &betas)?;
            json!({
                "hypotheses_hold": report.hypotheses_hold,
                "inequality_holds": report.inequality_holds,
                "equality": report.equality,
            })
        }
    };
    Ok((value, 0))
}

fn run_ideal(command: IdealCommand) -> Result<Output, CliError> {
    match command {
        IdealCommand::Ehk { gens, method } => {
            let ideal: MonomialIdeal = gens.parse()?;
            let formula = || json::rational_to_json(&graded_p1::ehk(&ideal));
            Ok(match method {
                Method::Formula => (json!({ "formula": formula() }), 0),
                Method::Oracle => (
                    json!({ "oracle": json::rational_to_json(&graded_p1::ehk_oracle(&ideal)?) }),
                    0,
                ),
                Method::Both => {
                    let f = graded_p1::ehk(&ideal);
                    let o = graded_p1::ehk_oracle(&ideal)?;
                    let agree = f == o;
                    let value = json!({
                        "formula": json::rational_to_json(&f),
                        "oracle": json::rational_to_json(&o),
                        "agree": agree,
                    });
                    (value, if agree { 0 } else { 1 })
                }
            })
        }
        IdealCommand::Member { gens, elem } => {
            let ideal: MonomialIdeal = gens.parse()?;
            let f: Monomial = elem.parse()?;
            let m = graded_p1::hk_membership(&ideal, &f);
            let value = json!({
                "member": m.member,
                "ehk_I": json::rational_to_json(&m.ehk_ideal),
                "ehk_If": json::rational_to_json(&m.ehk_extended),
            });
            Ok((value, 0))
        }
        IdealCommand::Syzygy { gens, twist } => {
            let ideal: MonomialIdeal = gens.parse()?;
            let split = graded_p1::syzygy_splitting(&ideal);
            let hn = graded_p1::syzygy_hn(&ideal, twist);
            let value = json!({
                "splitting": split.twists(),
                "twist": twist,
                "hn": json::hn_to_json(&hn),
                "mu_hk": json::rational_to_json(&hn.mu_hk()),
            });
            Ok((value, 0))
        }
    }
}

fn sweep_jobs() -> Result<Option<usize>, CliError> {
    match std::env::var(JOBS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Ok(text) => text
            .trim()
            .parse::<NonZeroUsize>()
            .map(|n| Some(n.get()))
            .map_err(|_| {
                CliError::usage(
                    "InvalidEnvironment",
                    format!("{JOBS_ENV} must be a positive integer, got {text:?}"),
                )
            }),
        Err(e) => Err(CliError::usage(
            "InvalidEnvironment",
            format!("{JOBS_ENV}: {e}"),
        )),
    }
}

fn sweep_json(r: &SweepReport) -> Value {
    json!({
        "max_degree": r.max_degree,
        "max_element_degree": r.max_degree + 2,
        "ideals": r.ideals,
        "pairs": r.pairs,
        "members": r.members,
        "growth_pairs": r.growth_pairs,
        "oracle_mismatches": r.oracle_mismatches,
        "nonpositive_ehk": r.nonpositive_ehk,
        "membership_mismatches": r.membership_mismatches,
        "ideal_changes": r.ideal_changes,
        "drop_violations": r.drop_violations,
        "interleave_violations": r.interleave_violations,
        "monotonicity_violations": r.monotonicity_violations,
        "violations": r.violations(),
        "ok": r.violations() == 0,
    })
}

fn run_check(command: CheckCommand) -> Result<Output, CliError> {
    let CheckCommand::Sweep { max_degree } = command;
    if max_degree == 0 || max_degree > 24 {
        return Err(CliError::usage(
            "InvalidArgument",
            "--max-degree must be between 1 and 24",
        ));
    }
    let report = run_sweep(max_degree, sweep_jobs()?);
    let status = if report.violations() == 0 { 0 } else { 1 };
    Ok((sweep_json(&report), status))
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Hn(args) => run_hn(args),
        Command::Ext { command } => run_ext(command),
        Command::Ideal { command } => run_ideal(command),
        Command::Check { command } => run_check(command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::usage("Usage", e.render().to_string().trim_end());
            println!("{}", err.to_json());
            return ExitCode::from(err.status);
        }
    };
    let (value, status) = match run(cli) {
        Ok(output) => output,
        Err(err) => (err.to_json(), err.status),
    };
    println!("{value}");
    ExitCode::from(status)
}
