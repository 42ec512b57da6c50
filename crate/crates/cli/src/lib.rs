//! `pvaudit` command-line front end.
//!
//! Exit codes: 0 on success, 2 for bad input or configuration, 1 for
//! internal failures (including failure to write the output).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use pvaudit_core::{
    audit, bias_curve, classify_shape, dersimonian_laird_pool, expected_z, fixed_effect_pool,
    min_p_selection, parse_study_table, render_svg, selected_effect_meta, two_sided_p,
    validate_dataset, AuditResult, BiasModelConfig, Dataset, SelectionSimConfig, SignConvention,
    SvgOptions, TableFormat, DEFAULT_ALPHA,
};

#[derive(Debug, Parser)]
#[command(
    name = "pvaudit",
    version,
    about = "P-value plots, pooled risk ratios and bias simulations for meta-analyses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Z-scores, p-values, ranks, significance counts and plot shape.
    Audit(AuditArgs),
    /// Render the p-value plot (SVG) or export its points (CSV).
    Plot(PlotArgs),
    /// Fixed-effect and/or DerSimonian-Laird pooled risk ratio.
    Pool(PoolArgs),
    /// Monte Carlo bias and selection experiments.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Fe,
    Dl,
    Both,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Study table with `ln_effect`/`LnEE` and `se_ln_effect`/`SELnEE` columns.
    pub input: PathBuf,
    /// Delimiter; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: OutputFormat,
    #[arg(long, default_value_t = 640)]
    pub width: u32,
    #[arg(long, default_value_t = 480)]
    pub height: u32,
    #[arg(long)]
    pub title: Option<String>,
    /// Omit the fitted line overlays.
    #[arg(long)]
    pub no_fits: bool,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Constant bias B measured with growing sample size n.
    Bias(BiasArgs),
    /// Minimum of q null p-values per study.
    Selection(SelectionArgs),
    /// Meta-analysis of papers that each report their best of q analyses.
    #[command(name = "selection-meta")]
    SelectionMeta(SelectionArgs),
}

#[derive(Debug, Args)]
pub struct CommonSimArgs {
    /// JSON file with the same field names as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BiasArgs {
    /// True effect T.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub true_effect: Option<f64>,
    /// Constant bias B.
    #[arg(long = "B", allow_hyphen_values = true)]
    pub bias: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Comma-separated, strictly increasing sample sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[command(flatten)]
    pub common: CommonSimArgs,
}

#[derive(Debug, Args)]
pub struct SelectionArgs {
    /// Analyses per base paper.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long = "n-papers", alias = "n_papers")]
    pub n_papers: Option<usize>,
    /// Comma-separated standard errors to assign to selected effects.
    #[arg(long = "se-pool", alias = "se_pool", value_delimiter = ',')]
    pub se_pool: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    #[command(flatten)]
    pub common: CommonSimArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Positive,
    Random,
}

/// Bias experiment settings as read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasFileConfig {
    #[serde(rename = "T")]
    pub true_effect: f64,
    #[serde(rename = "B")]
    pub bias: f64,
    pub sigma: f64,
    pub n: Vec<u64>,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl Default for BiasFileConfig {
    fn default() -> Self {
        BiasFileConfig {
            true_effect: 0.0,
            bias: 0.5,
            sigma: 10.0,
            n: vec![100, 1_000, 10_000],
            reps: 10_000,
            seed: 0,
            alpha: DEFAULT_ALPHA,
        }
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn user(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            error: error.into(),
        }
    }

    fn internal(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            error: error.into(),
        }
    }
}

impl From<pvaudit_core::Error> for Failure {
    fn from(e: pvaudit_core::Error) -> Self {
        Failure::user(e)
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {:#}", f.error);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Audit(a) => run_audit(a, stdout, stderr),
        Command::Plot(a) => run_plot(a, stdout, stderr),
        Command::Pool(a) => run_pool(a, stdout, stderr),
        Command::Simulate(s) => run_simulate(s, stdout),
    }
}

fn load_dataset(io: &InputArgs, stderr: &mut dyn Write) -> CliResult<Dataset> {
    let text = fs::read_to_string(&io.input)
        .with_context(|| format!("cannot read {}", io.input.display()))
        .map_err(Failure::user)?;
    let format = match io.input_format {
        Some(InputFormat::Csv) => TableFormat::Csv,
        Some(InputFormat::Tsv) => TableFormat::Tsv,
        None => TableFormat::from_path(&io.input.to_string_lossy()),
    };
    let mut d = parse_study_table(&text, format)
        .with_context(|| format!("in {}", io.input.display()))
        .map_err(Failure::user)?;
    d.label = io
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for w in validate_dataset(&d) {
        let _ = writeln!(stderr, "warning: {w}");
    }
    Ok(d)
}

fn emit(output: Option<&Path>, stdout: &mut dyn Write, body: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, body)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::internal),
        None => stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .context("cannot write to stdout")
            .map_err(Failure::internal),
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(Failure::internal)?;
    s.push('\n');
    Ok(s)
}

fn reject_format(cmd: &str, format: OutputFormat) -> Failure {
    Failure::user(anyhow!(
        "format {format:?} is not available for `{cmd}`",
        format = format
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    ))
}

fn audit_json(d: &Dataset, a: &AuditResult) -> serde_json::Value {
    let shape = if a.k() >= 5 {
        classify_shape(a).ok()
    } else {
        None
    };
    let warnings: Vec<String> = validate_dataset(d).iter().map(|w| w.to_string()).collect();
    json!({
        "label": d.label,
        "alpha": a.alpha,
        "k": a.k(),
        "n_below_alpha": a.n_below_alpha,
        "n_at_or_above_alpha": a.n_at_or_above_alpha,
        "classification": shape.as_ref().map(|s| s.classification),
        "shape": shape,
        "studies": a.studies,
        "warnings": warnings,
    })
}

fn audit_csv(a: &AuditResult) -> String {
    let mut out = String::from("row_id,accession_id,author,year,ln_effect,se_ln_effect,z,p,rank\n");
    for s in &a.studies {
        let b = &s.base;
        let quote = |t: &str| {
            if t.contains([',', '"', '\n']) {
                format!("\"{}\"", t.replace('"', "\"\""))
            } else {
                t.to_string()
            }
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:e},{}\n",
            b.row_id,
            quote(&b.accession_id),
            quote(&b.author),
            b.year,
            b.ln_effect,
            b.se_ln_effect,
            s.z,
            s.p,
            s.rank
        ));
    }
    out
}

pub fn run_audit(
    args: &AuditArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let d = load_dataset(&args.io, stderr)?;
    let a = audit(&d, args.io.alpha)?;
    let body = match args.format {
        OutputFormat::Json => to_json(&audit_json(&d, &a))?,
        OutputFormat::Csv => audit_csv(&a),
        other => return Err(reject_format("audit", other)),
    };
    emit(args.io.output.as_deref(), stdout, &body)
}

pub fn run_plot(args: &PlotArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let d = load_dataset(&args.io, stderr)?;
    let a = audit(&d, args.io.alpha)?;
    let series = pvaudit_core::build_series(&a);
    let report = if a.k() >= 5 {
        Some(classify_shape(&a)?)
    } else {
        None
    };
    let body = match args.format {
        OutputFormat::Svg => {
            let options = SvgOptions {
                width: args.width,
                height: args.height,
                title: args.title.clone(),
                single_fit: !args.no_fits,
                two_segment_fit: !args.no_fits,
                ..SvgOptions::default()
            };
            render_svg(&series, report.as_ref(), &options)
        }
        OutputFormat::Csv => series.to_csv(),
        OutputFormat::Json => to_json(&json!({ "series": series, "shape": report }))?,
    };
    emit(args.io.output.as_deref(), stdout, &body)
}

pub fn run_pool(args: &PoolArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let d = load_dataset(&args.io, stderr)?;
    let mut results = Vec::new();
    if matches!(args.method, Method::Fe | Method::Both) {
        results.push(fixed_effect_pool(&d)?);
    }
    if matches!(args.method, Method::Dl | Method::Both) {
        results.push(dersimonian_laird_pool(&d)?);
    }
    let body = match args.format {
        OutputFormat::Json => to_json(&results)?,
        OutputFormat::Csv => {
            let mut out = String::from(
                "method,k,pooled_ln,se_pooled,ci95_ln_lo,ci95_ln_hi,rr,ci95_rr_lo,ci95_rr_hi,cochran_q,i_squared,tau_squared\n",
            );
            for p in &results {
                let method = match p.method {
                    pvaudit_core::PoolMethod::FixedEffect => "fixed_effect",
                    pvaudit_core::PoolMethod::DersimonianLaird => "dersimonian_laird",
                };
                out.push_str(&format!(
                    "{method},{},{},{},{},{},{},{},{},{},{},{}\n",
                    p.k,
                    p.pooled_ln,
                    p.se_pooled,
                    p.ci95_ln.0,
                    p.ci95_ln.1,
                    p.rr,
                    p.ci95_rr.0,
                    p.ci95_rr.1,
                    p.cochran_q,
                    p.i_squared,
                    p.tau_squared
                ));
            }
            out
        }
        other => return Err(reject_format("pool", other)),
    };
    emit(args.io.output.as_deref(), stdout, &body)
}

fn read_config<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> CliResult<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("cannot read {}", p.display()))
                .map_err(Failure::user)?;
            serde_json::from_str(&text)
                .with_context(|| format!("invalid config {}", p.display()))
                .map_err(Failure::user)
        }
    }
}

fn bias_config(args: &BiasArgs) -> CliResult<BiasFileConfig> {
    let mut cfg: BiasFileConfig = read_config(args.common.config.as_deref())?;
    if let Some(v) = args.true_effect {
        cfg.true_effect = v;
    }
    if let Some(v) = args.bias {
        cfg.bias = v;
    }
    if let Some(v) = args.sigma {
        cfg.sigma = v;
    }
    if let Some(v) = &args.n {
        cfg.n = v.clone();
    }
    if let Some(v) = args.common.reps {
        cfg.reps = v;
    }
    if let Some(v) = args.common.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.common.alpha {
        cfg.alpha = v;
    }
    Ok(cfg)
}

fn selection_config(args: &SelectionArgs) -> CliResult<SelectionSimConfig> {
    let mut cfg: SelectionSimConfig = read_config(args.common.config.as_deref())?;
    if let Some(v) = args.q {
        cfg.q_questions = v;
    }
    if let Some(v) = args.n_papers {
        cfg.n_papers = v;
    }
    if let Some(v) = &args.se_pool {
        cfg.se_pool = v.clone();
    }
    if let Some(v) = args.sign {
        cfg.sign = match v {
            SignArg::Positive => SignConvention::Positive,
            SignArg::Random => SignConvention::Random,
        };
    }
    if let Some(v) = args.common.reps {
        cfg.reps = v;
    }
    if let Some(v) = args.common.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.common.alpha {
        cfg.alpha = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run_simulate(cmd: &SimulateCommand, stdout: &mut dyn Write) -> CliResult<()> {
    let (value, output) = match cmd {
        SimulateCommand::Bias(args) => {
            let cfg = bias_config(args)?;
            let model = BiasModelConfig {
                alpha: cfg.alpha,
                ..BiasModelConfig::new(cfg.true_effect, cfg.bias, cfg.sigma, 1)
            };
            let curve = bias_curve(&model, &cfg.n, cfg.reps, cfg.seed)?;
            let points: Vec<_> = curve
                .into_iter()
                .map(|(n, summary)| {
                    let m = model.with_n(n);
                    json!({
                        "n": n,
                        "se": m.se(),
                        "expected_z": expected_z(&m),
                        "expected_p": two_sided_p(expected_z(&m)),
                        "summary": summary,
                    })
                })
                .collect();
            (
                json!({ "experiment": "bias", "seed": cfg.seed, "config": cfg, "curve": points }),
                args.common.output.clone(),
            )
        }
        SimulateCommand::Selection(args) => {
            let cfg = selection_config(args)?;
            let summary = min_p_selection(&cfg)?;
            let q = cfg.q_questions as f64;
            (
                json!({
                    "experiment": "selection",
                    "seed": cfg.seed,
                    "config": { "q": cfg.q_questions, "reps": cfg.reps, "seed": cfg.seed, "alpha": cfg.alpha },
                    "expected_median_p": 1.0 - 0.5f64.powf(1.0 / q),
                    "summary": summary,
                }),
                args.common.output.clone(),
            )
        }
        SimulateCommand::SelectionMeta(args) => {
            let cfg = selection_config(args)?;
            let summary = selected_effect_meta(&cfg)?;
            (
                json!({
                    "experiment": "selection_meta",
                    "seed": cfg.seed,
                    "config": cfg,
                    "summary": summary,
                }),
                args.common.output.clone(),
            )
        }
    };
    emit(output.as_deref(), stdout, &to_json(&value)?)
}
