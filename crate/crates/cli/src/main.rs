//! `qshare`: analysis, sampling, verification, geometry and figure data for
//! one-vs-rest entanglement monotones.
//!
//! Exit codes: 0 success or pass, 1 a verified property was violated,
//! 2 usage or input error.

mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qshare_core::geometry::{self, classify_face, CrossSectionMethod};
use qshare_core::monotones::{self, bounds_report, entanglement_profile};
use qshare_core::states::{AmplitudeFile, FamilySpec, StateSpec};
use qshare_core::verify::{self, sig6, SuiteConfig, VerificationReport};
use qshare_core::{Complex64, PureState, RngStream};
use serde_json::json;

use output::{Manifest, Sink};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "qshare", version, about = "Entanglement sharing monotones and polytope geometry")]
struct Cli {
    /// RNG seed; a fresh one is drawn and echoed when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count (meaning depends on the subcommand).
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Check tolerance for `verify`.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write machine-readable output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Monotones, bounds and face classification for one state.
    Analyze(AnalyzeArgs),
    /// Y vectors of Haar-random qubit states as a table.
    Sample(SampleArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Polytope volumes, cross-sections and the three-qubit mesh.
    Geometry(GeometryArgs),
    /// Figure datasets.
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Ghz,
    W,
    Bell,
    Product,
    Haar,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["family", "state_file"])))]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// JSON state description (amplitudes or family spec).
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long, requires = "family")]
    theta: Option<f64>,
    /// W coefficient as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, requires = "family")]
    alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, requires = "family")]
    beta: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, requires = "family")]
    gamma: Option<Complex64>,
    /// Product-state digits, comma separated.
    #[arg(long, value_delimiter = ',', requires = "family")]
    digits: Option<Vec<usize>>,
    /// Number of parties for `haar`.
    #[arg(long, requires = "family")]
    n: Option<usize>,
    /// Local dimension for `haar` and `product`.
    #[arg(long, requires = "family")]
    m: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Inequality,
    Bounds,
    Identities,
    Families,
    Qudit,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Inequality => "inequality",
            Suite::Bounds => "bounds",
            Suite::Identities => "identities",
            Suite::Families => "families",
            Suite::Qudit => "qudit",
            Suite::All => "all",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Party counts, comma separated (qudit suite: a single N, default 3).
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Local dimension for the qudit suite (default 3).
    #[arg(long)]
    m: Option<usize>,
    /// Y vector run through the sharing check, e.g. "1,0.1,0.1". Repeatable.
    #[arg(long, value_parser = parse_float_list)]
    inject: Vec<Vec<f64>>,
}

#[derive(Args)]
struct GeometryArgs {
    #[command(subcommand)]
    action: GeometryAction,
}

#[derive(Subcommand)]
enum GeometryAction {
    /// Exact inhabitable volume; Monte Carlo as well when --samples is given.
    Volume {
        #[arg(long)]
        n: usize,
    },
    /// Inhabitable cross-section at fixed total Y_T.
    Slice {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        yt: f64,
    },
    /// Vertex and face document for the three-qubit polyhedron OABCE.
    Mesh,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(value_enum)]
    which: Figure,
    /// Grid points for fig4.
    #[arg(long, default_value_t = 61)]
    grid: usize,
    /// Rows for fig1.
    #[arg(long, default_value_t = 100)]
    rows: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Figure {
    Fig1,
    Fig4,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts = parse_float_list(s)?;
    match parts.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(format!("expected `re` or `re,im`, got '{s}'")),
    }
}

fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("'{p}' is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("'{p}' is not finite"))
            }
        })
        .collect()
}

/// Usage or input failure, reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl From<qshare_core::Error> for UsageError {
    fn from(e: qshare_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<ExitCode, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var("QSHARE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("QSHARE_THREADS: '{raw}' is not a non-negative integer")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(format!("QSHARE_THREADS: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage("tolerance must be finite and non-negative"));
        }
    }
    let sink = Sink::new(cli.output.clone());
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(cli, a, &sink),
        Command::Sample(a) => cmd_sample(cli, a, &sink),
        Command::Verify(a) => cmd_verify(cli, a, &sink),
        Command::Geometry(a) => cmd_geometry(cli, &a.action, &sink),
        Command::Figures(a) => cmd_figures(cli, a, &sink),
    }
}

fn resolve_seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or_else(RngStream::entropy_seed)
}

fn read_state_file(path: &PathBuf) -> Result<PureState, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("state_file {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("state_file {}: {e}", path.display())))?;
    // Dispatch on the discriminating field so errors name the bad field.
    let spec = if value.get("family").is_some() {
        StateSpec::Family(
            serde_json::from_value::<FamilySpec>(value)
                .map_err(|e| usage(format!("state_file {}: {e}", path.display())))?,
        )
    } else {
        StateSpec::Amplitudes(
            serde_json::from_value::<AmplitudeFile>(value)
                .map_err(|e| usage(format!("state_file {}: {e}", path.display())))?,
        )
    };
    spec.build()
        .map_err(|e| usage(format!("state_file {}: {e}", path.display())))
}

fn family_state(a: &AnalyzeArgs, family: Family, seed: u64) -> Result<PureState, UsageError> {
    let pair = |z: Complex64| [z.re, z.im];
    let spec = match family {
        Family::Ghz => FamilySpec::Ghz {
            theta: a.theta.ok_or_else(|| usage("theta: required for --family ghz"))?,
        },
        Family::W => {
            let get = |v: Option<Complex64>, name: &str| {
                v.map(pair).ok_or_else(|| usage(format!("{name}: required for --family w")))
            };
            FamilySpec::W {
                alpha: get(a.alpha, "alpha")?,
                beta: get(a.beta, "beta")?,
                gamma: get(a.gamma, "gamma")?,
            }
        }
        Family::Bell => FamilySpec::Bell,
        Family::Product => FamilySpec::Product {
            digits: a
                .digits
                .clone()
                .ok_or_else(|| usage("digits: required for --family product"))?,
            local_dim: a.m.unwrap_or(2),
        },
        Family::Haar => FamilySpec::Haar {
            n_parties: a.n.ok_or_else(|| usage("n: required for --family haar"))?,
            local_dim: a.m.unwrap_or(2),
            seed,
        },
    };
    spec.build().map_err(|e| usage(format!("family parameters: {e}")))
}

fn cmd_analyze(cli: &Cli, a: &AnalyzeArgs, sink: &Sink) -> CmdResult {
    let seed = (a.family == Some(Family::Haar)).then(|| resolve_seed(cli));
    let state = match (a.family, &a.state_file) {
        (Some(f), None) => family_state(a, f, seed.unwrap_or(0))?,
        (None, Some(path)) => read_state_file(path)?,
        _ => return Err(usage("exactly one of --family and --state-file is required")),
    };
    let format = cli.format.unwrap_or(Format::Table);
    let n = state.n_parties();
    let m = state.local_dim();

    if !state.is_qubit() {
        // Qudit input: spectra and Y only.
        let spectra: Vec<Vec<f64>> = (1..=n)
            .map(|j| monotones::schmidt_coefficients(&state, j))
            .collect::<Result<_, _>>()?;
        let y = verify::qudit_profile(&state)?;
        let body = match format {
            Format::Structured => json!({
                "speculative": true,
                "n_parties": n,
                "local_dim": m,
                "seed": seed,
                "schmidt_coefficients": spectra,
                "y": y,
                "y_total": y.iter().sum::<f64>(),
                "min_margin": geometry::min_margin(&y),
            })
            .to_string()
                + "\n",
            Format::Csv => verify::to_csv(
                &["party".into(), "y".into()],
                y.iter().enumerate().map(|(j, v)| vec![(j + 1).to_string(), v.to_string()]),
            ),
            Format::Table => {
                let mut out = format!("state: N={n} M={m} [SPECULATIVE: qudit Y, no bounds]\n");
                if let Some(s) = seed {
                    let _ = writeln!(out, "seed: {s}");
                }
                out += &output::table(
                    &["party", "Y", "schmidt coefficients"],
                    (0..n).map(|j| {
                        vec![
                            (j + 1).to_string(),
                            sig6(y[j]),
                            spectra[j].iter().map(|x| sig6(*x)).collect::<Vec<_>>().join(" "),
                        ]
                    }),
                );
                let _ = writeln!(out, "Y_T = {}", sig6(y.iter().sum()));
                let _ = writeln!(out, "min margin = {}", sig6(geometry::min_margin(&y)));
                out
            }
        };
        sink.emit(&body, None)?;
        return Ok(ExitCode::SUCCESS);
    }

    let profile = entanglement_profile(&state)?;
    let bounds = if n >= 2 { Some(bounds_report(&state)?) } else { None };
    let face = (n == 3).then(|| {
        let p = [profile.y[0], profile.y[1], profile.y[2]];
        classify_face(&p, qshare_core::tolerances::FACE).label()
    });
    let body = match format {
        Format::Structured => json!({
            "n_parties": n,
            "local_dim": m,
            "seed": seed,
            "profile": profile,
            "bounds": bounds,
            "face": face,
        })
        .to_string()
            + "\n",
        Format::Csv => {
            let header: Vec<String> = [
                "party", "lambda_max", "lambda_min", "k", "y", "c_rest", "lower", "upper_raw",
                "upper", "lower_margin", "upper_margin", "monogamy_residual",
            ]
            .map(String::from)
            .to_vec();
            verify::to_csv(
                &header,
                profile.marginals.iter().enumerate().map(|(i, q)| {
                    let mut row = vec![
                        q.party.to_string(),
                        q.lambda_max.to_string(),
                        q.lambda_min.to_string(),
                        q.k.to_string(),
                        q.y.to_string(),
                        q.c_rest.to_string(),
                    ];
                    match &bounds {
                        Some(b) => {
                            let b = &b.parties[i];
                            row.extend(
                                [b.lower, b.upper_raw, b.upper, b.lower_margin, b.upper_margin, b.monogamy_residual]
                                    .map(|x| x.to_string()),
                            );
                        }
                        None => row.extend(std::iter::repeat_n(String::new(), 6)),
                    }
                    row
                }),
            )
        }
        Format::Table => {
            let mut out = format!("state: N={n} M={m}\n");
            if let Some(s) = seed {
                let _ = writeln!(out, "seed: {s}");
            }
            out += &output::table(
                &["party", "lambda_max", "lambda_min", "K", "Y", "C_rest"],
                profile.marginals.iter().map(|q| {
                    vec![
                        q.party.to_string(),
                        sig6(q.lambda_max),
                        sig6(q.lambda_min),
                        sig6(q.k),
                        sig6(q.y),
                        sig6(q.c_rest),
                    ]
                }),
            );
            let _ = writeln!(out, "Y_T = {}", sig6(profile.y_total));
            if let Some(b) = &bounds {
                out += "\n";
                out += &output::table(
                    &["party", "lower", "Y", "upper", "upper_raw", "lower_margin", "upper_margin", "monogamy"],
                    b.parties.iter().map(|p| {
                        vec![
                            p.party.to_string(),
                            sig6(p.lower),
                            sig6(p.y),
                            sig6(p.upper),
                            sig6(p.upper_raw),
                            sig6(p.lower_margin),
                            sig6(p.upper_margin),
                            sig6(p.monogamy_residual),
                        ]
                    }),
                );
            }
            if let Some(f) = face {
                let _ = writeln!(out, "face: {f}");
            }
            out
        }
    };
    sink.emit(&body, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(cli: &Cli, a: &SampleArgs, sink: &Sink) -> CmdResult {
    if a.n < 2 {
        return Err(usage("n: must be at least 2"));
    }
    if a.count == 0 {
        return Err(usage("count: must be at least 1"));
    }
    let seed = resolve_seed(cli);
    let rows = verify::sample_profiles(a.n, a.count, seed).map_err(|e| usage(format!("n: {e}")))?;
    let manifest = Manifest::new("sample", seed).with("n", a.n).with("count", a.count);
    let body = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => verify::samples_csv(a.n, &rows),
        Format::Structured => manifest.wrap(json!({ "rows": rows })),
        Format::Table => {
            let mut header: Vec<String> = vec!["index".into()];
            header.extend((1..=a.n).map(|j| format!("Y_{j}")));
            header.extend(["Y_T".into(), "min_margin".into()]);
            let refs: Vec<&str> = header.iter().map(String::as_str).collect();
            output::table(
                &refs,
                rows.iter().map(|r| {
                    let mut row = vec![r.index.to_string()];
                    row.extend(r.y.iter().map(|v| sig6(*v)));
                    row.extend([sig6(r.y_total), sig6(r.min_margin)]);
                    row
                }),
            )
        }
    };
    sink.emit(&body, Some(&manifest))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs, sink: &Sink) -> CmdResult {
    let seed = resolve_seed(cli);
    let samples = match cli.samples {
        Some(s) => usize::try_from(s).map_err(|_| usage("samples: too large"))?,
        None => 10_000,
    };
    let reports: Vec<VerificationReport> = if a.suite == Suite::Qudit {
        let m = a.m.unwrap_or(3);
        let n = match a.n.as_deref() {
            None => 3,
            Some([n]) => *n,
            Some(_) => return Err(usage("n: the qudit suite takes a single party count")),
        };
        if m < 2 {
            return Err(usage("m: must be at least 2"));
        }
        if samples == 0 {
            return Err(usage("samples: must be at least 1"));
        }
        vec![verify::run_qudit_speculation(m, n, samples, seed)?]
    } else {
        if a.m.is_some() && a.suite != Suite::All {
            return Err(usage("m: only applies to the qudit suite"));
        }
        let mut config = SuiteConfig {
            samples,
            seed,
            inject: a.inject.clone(),
            ..SuiteConfig::default()
        };
        if let Some(n) = &a.n {
            config.party_counts = n.clone();
        }
        if let Some(t) = cli.tolerance {
            config.tolerance = t;
        }
        if let Some(m) = a.m {
            config.local_dim = m;
        }
        for v in &config.inject {
            if v.len() < 2 {
                return Err(usage("inject: needs at least two components"));
            }
        }
        config.validate()?;
        // Qubit suites always run at M = 2; --m only feeds the qudit part of `all`.
        let mut qubit = config.clone();
        qubit.local_dim = 2;
        let mut out = verify::run_named(a.suite.name(), &qubit)?;
        if a.suite == Suite::All && config.local_dim >= 3 {
            out.pop();
            out.push(verify::run_qudit_speculation(config.local_dim, 3, samples, seed)?);
        }
        out
    };
    let pass = reports.iter().all(|r| r.pass);
    let summary: String = reports.iter().map(VerificationReport::summary).collect();
    let structured = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
    match (&cli.output, cli.format.unwrap_or(Format::Table)) {
        (Some(_), _) => {
            sink.write_file(&structured)?;
            print!("{summary}");
        }
        (None, Format::Structured) => print!("{structured}"),
        (None, Format::Csv) => {
            let header = ["suite", "check", "samples", "violations", "worst_margin", "pass"].map(String::from);
            print!(
                "{}",
                verify::to_csv(
                    &header,
                    reports.iter().flat_map(|r| {
                        r.checks.iter().map(|c| {
                            vec![
                                r.suite.clone(),
                                c.name.clone(),
                                c.samples.to_string(),
                                c.violations.to_string(),
                                c.worst_margin.to_string(),
                                c.pass.to_string(),
                            ]
                        })
                    })
                )
            );
        }
        (None, Format::Table) => print!("{summary}"),
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_geometry(cli: &Cli, action: &GeometryAction, sink: &Sink) -> CmdResult {
    let format = cli.format.unwrap_or(Format::Table);
    match *action {
        GeometryAction::Volume { n } => {
            let exact = geometry::inhabitable_volume(n).map_err(|e| usage(format!("n: {e}")))?;
            let value = geometry::ratio_to_f64(exact);
            let mc = match cli.samples {
                Some(s) => {
                    let seed = resolve_seed(cli);
                    let est = geometry::polytope_volume_mc(n, s, &RngStream::new(seed))
                        .map_err(|e| usage(format!("samples: {e}")))?;
                    Some((seed, est))
                }
                None => None,
            };
            let body = match format {
                Format::Structured => json!({
                    "n": n,
                    "exact": exact.to_string(),
                    "value": value,
                    "monte_carlo": mc.map(|(seed, e)| json!({"seed": seed, "estimate": e})),
                })
                .to_string()
                    + "\n",
                Format::Csv => {
                    let header = ["n", "exact", "value", "mc", "mc_std_error", "samples", "seed"].map(String::from);
                    let mut row = vec![n.to_string(), exact.to_string(), value.to_string()];
                    match mc {
                        Some((seed, e)) => row.extend([
                            e.estimate.to_string(),
                            e.standard_error.to_string(),
                            e.samples.to_string(),
                            seed.to_string(),
                        ]),
                        None => row.extend(std::iter::repeat_n(String::new(), 4)),
                    }
                    verify::to_csv(&header, [row])
                }
                Format::Table => {
                    let mut out = format!("{exact} = {value}\n");
                    if let Some((seed, e)) = mc {
                        let _ = writeln!(
                            out,
                            "monte carlo: {} +/- {} ({} samples, seed {seed})",
                            sig6(e.estimate),
                            sig6(e.standard_error),
                            e.samples
                        );
                    }
                    out
                }
            };
            sink.emit(&body, None)?;
        }
        GeometryAction::Slice { n, yt } => {
            if !(3..=qshare_core::tolerances::MAX_EXACT_N).contains(&n) {
                return Err(usage(format!(
                    "n: must lie in [3, {}]",
                    qshare_core::tolerances::MAX_EXACT_N
                )));
            }
            if !(yt.is_finite() && (0.0..=n as f64).contains(&yt)) {
                return Err(usage(format!("yt: must lie in [0, {n}]")));
            }
            let samples = cli.samples.unwrap_or(100_000);
            let seed = resolve_seed(cli);
            let exact = if n == 3 { Some(geometry::additivity_n3(yt)?) } else { None };
            let mc = if yt > 0.0 && yt < n as f64 {
                let cs = geometry::additivity_mc(n, yt, samples, &RngStream::new(seed))
                    .map_err(|e| usage(format!("samples: {e}")))?;
                Some(cs)
            } else {
                None
            };
            if mc.is_none() && exact.is_none() {
                return Err(usage("yt: the slice at an endpoint is degenerate; use 0 < yt < n"));
            }
            let body = match format {
                Format::Structured => json!({
                    "n": n,
                    "y_total": yt,
                    "seed": seed,
                    "exact": exact,
                    "monte_carlo": mc,
                })
                .to_string()
                    + "\n",
                Format::Csv => {
                    let header = ["n", "y_total", "exact", "mc", "mc_std_error", "samples", "seed"].map(String::from);
                    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                    verify::to_csv(
                        &header,
                        [vec![
                            n.to_string(),
                            yt.to_string(),
                            opt(exact),
                            opt(mc.as_ref().map(|c| c.hyperarea)),
                            opt(mc.as_ref().and_then(|c| c.standard_error)),
                            mc.as_ref().and_then(|c| c.sample_count).map(|s| s.to_string()).unwrap_or_default(),
                            seed.to_string(),
                        ]],
                    )
                }
                Format::Table => {
                    let mut out = format!("N={n} Y_T={}\n", sig6(yt));
                    if let Some(e) = exact {
                        let _ = writeln!(out, "exact: {}", sig6(e));
                    }
                    if let Some(c) = &mc {
                        debug_assert_eq!(c.method, CrossSectionMethod::MonteCarlo);
                        let se = c.standard_error.unwrap_or(0.0);
                        let _ = write!(
                            out,
                            "monte carlo: {} +/- {} ({} samples, acceptance {}, seed {seed})",
                            sig6(c.hyperarea),
                            sig6(se),
                            c.sample_count.unwrap_or(0),
                            sig6(c.acceptance_rate.unwrap_or(0.0)),
                        );
                        if let Some(e) = exact {
                            if se > 0.0 {
                                let _ = write!(out, ", z = {}", sig6((c.hyperarea - e) / se));
                            }
                        }
                        out.push('\n');
                    }
                    out
                }
            };
            sink.emit(&body, None)?;
        }
        GeometryAction::Mesh => {
            let mesh = verify::polytope_mesh_export();
            let doc = serde_json::to_string_pretty(&mesh).expect("mesh serializes") + "\n";
            let line = format!("{} vertices, {} faces\n", mesh.vertices.len(), mesh.faces.len());
            match (&cli.output, format) {
                (Some(_), _) => {
                    sink.write_file(&doc)?;
                    print!("{line}");
                }
                (None, Format::Table) => {
                    let mut out = line;
                    for v in &mesh.vertices {
                        let _ = writeln!(out, "  {} = ({}, {}, {})", v.name, v.coords[0], v.coords[1], v.coords[2]);
                    }
                    for f in &mesh.faces {
                        let _ = writeln!(out, "  {}: {}", f.name, f.vertices.join(" "));
                    }
                    print!("{out}");
                }
                (None, _) => print!("{doc}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_figures(cli: &Cli, a: &FiguresArgs, sink: &Sink) -> CmdResult {
    let seed = resolve_seed(cli);
    let format = cli.format.unwrap_or(Format::Csv);
    let (csv, manifest, structured) = match a.which {
        Figure::Fig1 => {
            if a.rows == 0 {
                return Err(usage("rows: must be at least 1"));
            }
            let rows = verify::figure1_dataset(a.rows, seed)?;
            let manifest = Manifest::new("fig1", seed).with("rows", a.rows);
            (verify::figure1_csv(&rows), manifest, json!(rows))
        }
        Figure::Fig4 => {
            let samples = cli.samples.unwrap_or(100_000);
            let rows = verify::figure4_dataset(a.grid, samples, seed)
                .map_err(|e| usage(format!("grid/samples: {e}")))?;
            let manifest = Manifest::new("fig4", seed)
                .with("grid", a.grid)
                .with("samples", samples);
            (verify::figure4_csv(&rows), manifest, json!(rows))
        }
    };
    let body = match format {
        Format::Structured => manifest.wrap(json!({ "rows": structured })),
        Format::Csv | Format::Table => csv,
    };
    sink.emit(&body, Some(&manifest))?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.5, -1").unwrap(), Complex64::new(0.5, -1.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_float_list("1,nan").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
