//! Command-line front end.
//!
//! Every subcommand is a client of the HTTP service: by default an in-process
//! instance is spawned on a loopback port, and `--url` redirects the same
//! calls to an already running server.
//!
//! Exit codes: 0 on success, 1 for domain errors (degenerate constructions,
//! scheduling, demodulation, ...), 2 for I/O, parse or usage errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use dftis_client::api::{SessionSpec, VerifyResponse};
use dftis_client::{Client, ClientError};
use dftis_core::eigen::{EigensequenceParts, Sign};
use dftis_core::rac::{RacCase, SignatureRecord};
use dftis_core::session::SessionReport;
use dftis_core::ComplexSequence;

/// Eigensequences of the unitary DFT, used as user signatures over the real
/// adder channel.
#[derive(Parser)]
#[command(name = "dftis", version, about)]
struct Cli {
    /// Base URL of a running service; when absent an in-process instance is
    /// started on a loopback port.
    #[arg(long, global = true)]
    url: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct eigensequences from seed sequences.
    Gen(GenArgs),
    /// Classify a sequence and report eigenvalue, parity and residual.
    Verify(VerifyArgs),
    /// Run a full transmission session and write per-frame CSV plus a JSON
    /// summary.
    Simulate(SimulateArgs),
    /// Compute the peak coefficient for an energy budget.
    Energy(EnergyArgs),
    /// Pick one user per group from a registry (seeded, priority-weighted).
    Schedule(ScheduleArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Even construction: E{x} ± E{DFT(x)}, eigenvalue ±1.
    #[arg(long, conflicts_with_all = ["odd", "family"])]
    even: bool,
    /// Odd construction: O{x} ∓ j·O{DFT(x)}, eigenvalue ±j.
    #[arg(long, conflicts_with = "family")]
    odd: bool,
    /// Shift/cosine family of an already invariant sequence.
    #[arg(long)]
    family: bool,
    /// Sign for the even/odd constructions.
    #[arg(long)]
    sign: Option<Sign>,
    /// Seed sequence file (JSON array; for --family also `{lambda, seq}`).
    #[arg(long, conflicts_with = "random")]
    seq: Option<PathBuf>,
    /// Length of a pseudorandom real seed sequence.
    #[arg(long)]
    random: Option<usize>,
    /// RNG seed for --random.
    #[arg(long, default_value_t = 0)]
    rng: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute per-sample tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sequence file (JSON array).
    #[arg(long)]
    seq: PathBuf,
    /// Absolute per-sample tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
#[command(after_long_help = SIMULATE_HELP)]
struct SimulateArgs {
    /// Session config file; see --help for the format.
    #[arg(long)]
    config: PathBuf,
    /// Override the channel case (2, 3/123, 3/124, 3/134, 3/234, 4).
    #[arg(long)]
    case: Option<RacCase>,
    /// Override the word size in bits.
    #[arg(long)]
    bits: Option<u32>,
    /// Override the channel energy budget.
    #[arg(long)]
    emax: Option<f64>,
    /// Override the scheduler seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute per-sample tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

const SIMULATE_HELP: &str = "\
Config file format (paths are relative to the config file):

  {
    \"registry\": \"signatures.json\",    // JSON list of {user_id, group, signature[, priority]}
    \"bitstreams\": \"streams.json\",     // JSON object {user_id: \"0101...\"}
    \"case\": \"2\",                      // 2 | 3/123 | 3/124 | 3/134 | 3/234 | 4
    \"b\": 2,                            // bits per word
    \"e_max\": 10.0,                     // or \"m\": 1.0 (exactly one)
    \"seed\": 0,                         // scheduler seed (optional)
    \"out_dir\": \"out\",                 // output directory (or --out)
    \"tol\": 1e-9                        // optional tolerance
  }

Outputs (byte-identical for identical config and seed):

  <out>/frames.csv    one row per frame:
      frame, energy, y0_re, y0_im, ..., then per selected user
      a_sent_<id>, a_recv_<id>, word_sent_<id>, word_recv_<id>.
      Floats carry 12 significant digits (scientific notation).
  <out>/summary.json  session parameters, selected users, bit errors
      (must be 0), max residual and max frame energy.

Exit code 0 only for a lossless run; domain errors print a machine-readable
JSON object to stderr and exit 1.";

#[derive(Args)]
struct EnergyArgs {
    /// Signature registry file (JSON list).
    #[arg(long)]
    sigs: PathBuf,
    /// Channel energy budget E_max.
    #[arg(long)]
    emax: f64,
    /// Absolute per-sample tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Signature registry file (JSON list).
    #[arg(long)]
    sigs: PathBuf,
    /// Channel case to fill.
    #[arg(long)]
    case: RacCase,
    /// Scheduler seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Absolute per-sample tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

/// CLI-level failure with its exit class.
enum CliError {
    /// Domain error (exit 1).
    Domain { code: String, message: String },
    /// I/O, parse or configuration error (exit 2).
    Io(String),
}

impl CliError {
    fn io(context: &str, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }

    fn domain(code: &str, message: impl Into<String>) -> Self {
        CliError::Domain {
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<ClientError> for CliError {
    fn from(err: ClientError) -> Self {
        match &err {
            ClientError::Api { code, message, .. } if err.is_domain() => CliError::Domain {
                code: code.clone(),
                message: message.clone(),
            },
            _ => CliError::Io(err.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("tokio runtime");
    runtime.block_on(run(cli))
}

async fn run(cli: Cli) -> ExitCode {
    let client = match connect(cli.url).await {
        Ok(client) => client,
        Err(err) => return report(Err::<(), _>(err), false),
    };
    match cli.command {
        Command::Gen(args) => report(cmd_gen(&client, args).await, false),
        Command::Verify(args) => report(cmd_verify(&client, args).await, false),
        Command::Simulate(args) => report(cmd_simulate(&client, args).await, true),
        Command::Energy(args) => report(cmd_energy(&client, args).await, false),
        Command::Schedule(args) => report(cmd_schedule(&client, args).await, false),
    }
}

/// Prints a failure and picks the exit code; simulate emits JSON errors.
fn report<T>(result: CliResult<T>, json_errors: bool) -> ExitCode {
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Domain { code, message }) => {
            if json_errors {
                eprintln!(
                    "{}",
                    serde_json::json!({ "code": code, "message": message })
                );
            } else {
                eprintln!("error [{code}]: {message}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Io(message)) => {
            if json_errors {
                eprintln!(
                    "{}",
                    serde_json::json!({ "code": "io", "message": message })
                );
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(2)
        }
    }
}

/// Connects to `--url` or spawns an in-process service on a loopback port.
async fn connect(url: Option<String>) -> CliResult<Client> {
    match url {
        Some(url) => Ok(Client::new(url)),
        None => {
            let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0))
                .await
                .map_err(|e| CliError::io("binding loopback port", e))?;
            let addr = listener
                .local_addr()
                .map_err(|e| CliError::io("reading local address", e))?;
            tokio::spawn(async move {
                let _ = axum_serve(listener).await;
            });
            Ok(Client::new(format!("http://{addr}")))
        }
    }
}

async fn axum_serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, dftis_server::router()).await
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading {what} {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::io(&format!("parsing {what} {}", path.display()), e))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

/// Formats a float with 12 significant digits.
fn fmt_f64(v: f64) -> String {
    format!("{v:.11e}")
}

fn random_real_sequence(n: usize, seed: u64) -> CliResult<ComplexSequence> {
    use rand::{Rng, SeedableRng};
    if n == 0 {
        return Err(CliError::domain(
            "empty_sequence",
            "random seed sequence length must be at least 1",
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ComplexSequence::from_real(&samples).map_err(|e| CliError::domain(e.code(), e.to_string()))
}

/// Seed input for gen: either a raw sequence or an already labelled
/// eigensequence.
enum GenInput {
    Raw(ComplexSequence),
    Labelled(EigensequenceParts),
}

fn load_gen_input(args: &GenArgs) -> CliResult<GenInput> {
    if let Some(n) = args.random {
        return Ok(GenInput::Raw(random_real_sequence(n, args.rng)?));
    }
    let Some(path) = &args.seq else {
        return Err(CliError::Io("one of --seq or --random is required".into()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading sequence {}", path.display()), e))?;
    // An object is a labelled eigensequence, an array a raw sequence.
    if text.trim_start().starts_with('{') {
        let parts: EigensequenceParts = serde_json::from_str(&text)
            .map_err(|e| CliError::io(&format!("parsing {}", path.display()), e))?;
        Ok(GenInput::Labelled(parts))
    } else {
        let seq: ComplexSequence = serde_json::from_str(&text)
            .map_err(|e| CliError::io(&format!("parsing {}", path.display()), e))?;
        Ok(GenInput::Raw(seq))
    }
}

fn emit_json(out: &Option<PathBuf>, json: String) -> CliResult<()> {
    match out {
        Some(path) => write_text(path, &(json + "\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

async fn cmd_gen(client: &Client, args: GenArgs) -> CliResult<()> {
    let input = load_gen_input(&args)?;

    if args.family {
        let parts = match input {
            GenInput::Labelled(parts) => parts,
            GenInput::Raw(seq) => {
                // Classify the raw seed first; only invariant sequences have
                // a family.
                let report = client.verify(&seq, args.tol).await?;
                let Some(lambda) = report.lambda else {
                    return Err(CliError::domain(
                        "not_invariant",
                        "the seed sequence is not invariant; --family needs an eigensequence",
                    ));
                };
                EigensequenceParts { lambda, seq }
            }
        };
        let family = client.family(parts, args.tol).await?.members;
        if family.is_empty() {
            return Err(CliError::domain(
                "degenerate_input",
                "every family member collapsed to zero",
            ));
        }
        for member in &family {
            let check = client.verify(&member.seq, args.tol).await?;
            eprintln!(
                "lambda={} residual={}",
                member.lambda,
                fmt_f64(check.best_residual)
            );
        }
        let json = serde_json::to_string_pretty(&family)
            .map_err(|e| CliError::io("encoding family", e))?;
        return emit_json(&args.out, json);
    }

    let (even, sign) = match (args.even, args.odd, args.sign) {
        (true, false, Some(sign)) => (true, sign),
        (false, true, Some(sign)) => (false, sign),
        (false, false, _) => {
            return Err(CliError::Io(
                "pick a construction: --even, --odd or --family".into(),
            ))
        }
        (_, _, None) => {
            return Err(CliError::Io(
                "--sign <+|-> is required for --even/--odd".into(),
            ))
        }
        _ => unreachable!("clap enforces conflicts"),
    };

    let GenInput::Raw(seq) = input else {
        return Err(CliError::Io(
            "--even/--odd take a raw seed sequence, not a labelled eigensequence".into(),
        ));
    };
    let n = seq.len();
    let lambda = if even {
        sign.lambda_even()
    } else {
        sign.lambda_odd()
    };

    let built = if even {
        client.from_even(&seq, sign, args.tol).await?
    } else {
        client.from_odd(&seq, sign, args.tol).await?
    };

    let Some(parts) = built.eigensequence else {
        // Distinguish an empty eigenspace from an unlucky seed.
        let dims = client.dimensions(n).await?;
        let dim = dims
            .dims
            .iter()
            .find(|d| d.lambda == lambda)
            .map_or(0, |d| d.dim);
        let reason = if dim == 0 {
            format!("the {lambda} eigenspace is empty at N={n}")
        } else {
            format!("the construction collapsed to zero for this seed (the {lambda} eigenspace at N={n} has dimension {dim})")
        };
        return Err(CliError::domain("degenerate_input", reason));
    };

    eprintln!(
        "lambda={} residual={}",
        parts.lambda,
        fmt_f64(built.residual.unwrap_or(0.0))
    );
    let json = serde_json::to_string_pretty(&parts)
        .map_err(|e| CliError::io("encoding eigensequence", e))?;
    emit_json(&args.out, json)
}

async fn cmd_verify(client: &Client, args: VerifyArgs) -> CliResult<()> {
    let seq: ComplexSequence = read_json(&args.seq, "sequence")?;
    let report: VerifyResponse = client.verify(&seq, args.tol).await?;
    let parity = match (report.even, report.odd) {
        (true, true) => "even and odd (zero within tolerance)",
        (true, false) => "even",
        (false, true) => "odd",
        (false, false) => "none",
    };
    match report.lambda {
        Some(lambda) => {
            println!("lambda: {lambda}");
            println!("parity: {parity}");
            println!("max residual: {}", fmt_f64(report.best_residual));
            Ok(())
        }
        None => {
            println!("not invariant");
            println!("parity: {parity}");
            println!("max residual: {}", fmt_f64(report.best_residual));
            if report.ambiguous {
                println!("note: several eigenvalues matched; tolerance is too loose");
            }
            Err(CliError::domain(
                "not_invariant",
                "no unique eigenvalue matches within tolerance",
            ))
        }
    }
}

/// CLI session config: file paths plus channel and quantizer parameters.
#[derive(Debug, Deserialize)]
struct SimulateConfig {
    registry: PathBuf,
    bitstreams: PathBuf,
    case: RacCase,
    #[serde(alias = "bits")]
    b: u32,
    #[serde(default)]
    e_max: Option<f64>,
    #[serde(default, alias = "M")]
    m: Option<f64>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    #[serde(default)]
    tol: Option<f64>,
}

/// Metadata written next to the per-frame CSV.
#[derive(Serialize)]
struct SummaryFile<'a> {
    case: RacCase,
    n: usize,
    b: u32,
    m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_max: Option<f64>,
    seed: u64,
    selected: &'a [dftis_core::session::SelectedUser],
    summary: &'a dftis_core::session::SessionSummary,
}

async fn cmd_simulate(client: &Client, args: SimulateArgs) -> CliResult<()> {
    let mut config: SimulateConfig = read_json(&args.config, "session config")?;
    if let Some(case) = args.case {
        config.case = case;
    }
    if let Some(bits) = args.bits {
        config.b = bits;
    }
    if let Some(emax) = args.emax {
        config.e_max = Some(emax);
        config.m = None;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.out_dir = Some(out);
    }
    if let Some(tol) = args.tol {
        config.tol = Some(tol);
    }

    let base = args.config.parent().unwrap_or(Path::new("."));
    let registry_path = base.join(&config.registry);
    let bitstream_path = base.join(&config.bitstreams);
    let out_dir = config
        .out_dir
        .as_ref()
        .map(|p| {
            if p.is_absolute() {
                p.clone()
            } else {
                base.join(p)
            }
        })
        .ok_or_else(|| CliError::Io("an output directory is required (out_dir or --out)".into()))?;

    let users: Vec<SignatureRecord> = read_json(&registry_path, "signature registry")?;
    let bitstreams: BTreeMap<String, String> = read_json(&bitstream_path, "bitstreams")?;

    let spec = SessionSpec {
        case: config.case,
        b: config.b,
        e_max: config.e_max,
        m: config.m,
        users,
        bitstreams,
        seed: config.seed,
        tol: config.tol,
    };
    let report = client.simulate(&spec).await?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::io(&format!("creating {}", out_dir.display()), e))?;
    write_text(&out_dir.join("frames.csv"), &frames_csv(&report)?)?;
    let summary = SummaryFile {
        case: report.case,
        n: report.n,
        b: report.b,
        m: report.m,
        e_max: report.e_max,
        seed: report.seed,
        selected: &report.selected,
        summary: &report.summary,
    };
    let summary_json =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::io("encoding summary", e))?;
    write_text(
        &out_dir.join("summary.json"),
        &(summary_json.clone() + "\n"),
    )?;
    println!("{summary_json}");

    if report.summary.lossless {
        Ok(())
    } else {
        Err(CliError::domain(
            "bit_errors",
            format!(
                "{} bit errors survived the round trip",
                report.summary.bit_errors
            ),
        ))
    }
}

/// Renders the per-frame CSV: frame, energy, the frame samples, then the
/// sent/recovered coefficient and word per selected user.
fn frames_csv(report: &SessionReport) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["frame".into(), "energy".into()];
    for k in 0..report.n {
        header.push(format!("y{k}_re"));
        header.push(format!("y{k}_im"));
    }
    for user in &report.selected {
        header.push(format!("a_sent_{}", user.user_id));
        header.push(format!("a_recv_{}", user.user_id));
        header.push(format!("word_sent_{}", user.user_id));
        header.push(format!("word_recv_{}", user.user_id));
    }
    writer
        .write_record(&header)
        .map_err(|e| CliError::io("writing csv header", e))?;

    for frame in &report.frames {
        let mut row: Vec<String> = vec![frame.frame_index.to_string(), fmt_f64(frame.energy)];
        for z in frame.y.samples() {
            row.push(fmt_f64(z.re));
            row.push(fmt_f64(z.im));
        }
        for user in &frame.users {
            row.push(fmt_f64(user.a_sent));
            row.push(fmt_f64(user.a_recovered));
            row.push(user.word_sent.clone());
            row.push(user.word_recovered.clone());
        }
        writer
            .write_record(&row)
            .map_err(|e| CliError::io("writing csv row", e))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::io("flushing csv", e))?;
    String::from_utf8(bytes).map_err(|e| CliError::io("encoding csv", e))
}

async fn cmd_energy(client: &Client, args: EnergyArgs) -> CliResult<()> {
    let records: Vec<SignatureRecord> = read_json(&args.sigs, "signature registry")?;
    let resp = client
        .peak_coefficient(args.emax, records, args.tol)
        .await?;
    println!("{}", fmt_f64(resp.m));
    Ok(())
}

async fn cmd_schedule(client: &Client, args: ScheduleArgs) -> CliResult<()> {
    let records: Vec<SignatureRecord> = read_json(&args.sigs, "signature registry")?;
    let resp = client
        .schedule(records, args.case, args.seed, args.tol)
        .await?;
    let json = serde_json::to_string_pretty(&resp.selected)
        .map_err(|e| CliError::io("encoding selection", e))?;
    println!("{json}");
    Ok(())
}
