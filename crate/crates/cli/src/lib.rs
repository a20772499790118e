//! Command-line front end for the `isbci` library.
//!
//! [`run`] parses arguments and dispatches to a subcommand. It returns the
//! process exit code: 0 on success, 2 on a usage error, 1 on a runtime
//! error. The `serve` subcommand's HTTP and WebSocket routes are exposed
//! through [`router`] so they can be mounted elsewhere.

mod server;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use isbci::dataio::{export_spectrogram, gen_synthetic, load_trialset, save_trialset, EegTrialSet, SyntheticConfig};
use isbci::eval::{
    bits_per_minute, info_per_trial, itr, paired_ttest_2tailed, report, run_cv_pipeline, CvConfig, CvResult, Grid,
    ItrInput, ReportFormat,
};
use isbci::features::stratified_split;
use isbci::pipeline::{fit_pipeline, save_model, HyperParams, PipelineConfig};
use isbci::seed::derive_seed;
use isbci::sim::{
    parse_intents, split_for_session, start_session, write_transcript, Decoder, Design, PerfectDecoder, Session,
    SessionHub, SimConfig, TranscriptConfig,
};

pub use server::{router, serve};

#[derive(Debug, Parser)]
#[command(name = "isbci", version, about = "Imagined-speech BCI decoding and interface simulation")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Log more (repeat for debug output). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic trial container.
    GenData(GenDataArgs),
    /// Fit the decoding pipeline and save the model.
    Train(TrainArgs),
    /// Nested stratified cross-validation of the pipeline.
    Eval(EvalArgs),
    /// Information transfer rate for a given accuracy.
    Itr(ItrArgs),
    /// Run a scripted session headlessly and write its transcript.
    Simulate(SimulateArgs),
    /// Serve sessions over WebSocket (/ws) and HTTP (POST /api).
    Serve(ServeArgs),
    /// Short-time magnitude spectrum of one trial as CSV.
    Spectrogram(SpectrogramArgs),
}

#[derive(Debug, Args)]
struct GenDataArgs {
    #[arg(long, default_value_t = 100)]
    n_per_class: usize,
    #[arg(long, default_value_t = 8)]
    channels: usize,
    #[arg(long, default_value_t = 128)]
    samples: usize,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    #[arg(long, default_value_t = 2.0)]
    separation: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 256.0)]
    sampling_rate: f64,
    #[arg(long)]
    out: PathBuf,
}

/// Options shared by everything that fits a pipeline.
#[derive(Debug, Args)]
struct PipelineArgs {
    /// Diagonal loading as a fraction of the mean eigenvalue.
    #[arg(long, default_value_t = 0.0)]
    shrinkage: f64,
    /// Subtract channel means before the covariance.
    #[arg(long)]
    center: bool,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 0.001)]
    learning_rate: f64,
    /// Hidden and output layers without biases.
    #[arg(long)]
    no_bias: bool,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig::standard();
        cfg.covariance.shrinkage = self.shrinkage;
        cfg.covariance.center = self.center;
        cfg.train.epochs = self.epochs;
        cfg.train.learning_rate = self.learning_rate;
        cfg.train.use_bias = !self.no_bias;
        cfg
    }
}

#[derive(Debug, Args)]
struct HyperArgs {
    /// PCA components.
    #[arg(long, default_value_t = 8)]
    pca: usize,
    /// Ensemble members.
    #[arg(long, default_value_t = 4)]
    bag: usize,
    /// Hidden units per member.
    #[arg(long, default_value_t = 32)]
    hidden: usize,
}

impl HyperArgs {
    fn get(&self) -> HyperParams {
        HyperParams {
            n_rf: self.pca,
            k_bag: self.bag,
            hidden: self.hidden,
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Share of each class to train on; the rest is scored and reported.
    #[arg(long, default_value_t = 1.0, value_parser = unit_interval)]
    split: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Trial containers; each becomes one result row labelled by file stem.
    #[arg(long, required = true, num_args = 1..)]
    data: Vec<PathBuf>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Folds of the model-selection CV inside each training portion.
    #[arg(long, default_value_t = 3)]
    inner_folds: usize,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
    grid_pca: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
    grid_bag: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,256")]
    grid_hidden: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    /// Paired two-tailed t-test against these accuracies. With several
    /// datasets they pair with the per-dataset means; with one dataset they
    /// pair with its fold accuracies.
    #[arg(long, value_delimiter = ',')]
    compare: Vec<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct ItrArgs {
    #[arg(long)]
    classes: usize,
    #[arg(long, value_parser = unit_interval)]
    accuracy: f64,
    /// Seconds per decision.
    #[arg(long, default_value_t = 2.0)]
    trial_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum DecoderKind {
    /// Pipeline trained on the session's training split.
    Trained,
    /// Always answers the intended class.
    Perfect,
}

#[derive(Debug, Args)]
struct SessionArgs {
    /// Trial container; a default synthetic set when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DecoderKind::Trained)]
    decoder: DecoderKind,
    /// Share of each class used for training.
    #[arg(long, default_value_t = 0.6, value_parser = unit_interval)]
    split: f64,
    #[arg(long, default_value_t = 2.0)]
    trial_seconds: f64,
    #[command(flatten)]
    hyper: HyperArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

impl SessionArgs {
    fn sim_config(&self) -> SimConfig {
        SimConfig {
            split: self.split,
            trial_seconds: self.trial_seconds,
            hyperparams: self.hyper.get(),
            pipeline: self.pipeline.config(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// 1 or 2 (also design1, design2).
    #[arg(long, value_parser = parse_design)]
    design: Design,
    /// One `short` or `long` per line; `#` starts a comment.
    #[arg(long)]
    intents: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Transcript destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    session: SessionArgs,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: String,
    #[command(flatten)]
    session: SessionArgs,
}

#[derive(Debug, Args)]
struct SpectrogramArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[arg(long, default_value_t = 256)]
    window: usize,
    #[arg(long, default_value_t = 128)]
    hop: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_design(s: &str) -> Result<Design, String> {
    s.parse().map_err(|e: isbci::Error| e.to_string())
}

/// A bad combination of otherwise valid flags.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            2
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::GenData(a) => gen_data(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Itr(a) => itr_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Serve(a) => serve_cmd(a),
        Command::Spectrogram(a) => spectrogram(a),
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn load(path: &Path) -> anyhow::Result<EegTrialSet> {
    load_trialset(path).with_context(|| format!("reading {}", path.display()))
}

/// The session data set and how to describe it in a transcript.
fn session_data(path: Option<&Path>) -> anyhow::Result<(Arc<EegTrialSet>, String)> {
    Ok(match path {
        Some(p) => (Arc::new(load(p)?), p.display().to_string()),
        None => (Arc::new(gen_synthetic(&SyntheticConfig::default())?), "synthetic:default".into()),
    })
}

fn gen_data(a: GenDataArgs) -> anyhow::Result<()> {
    let cfg = SyntheticConfig {
        n_per_class: a.n_per_class,
        channels: a.channels,
        samples: a.samples,
        classes: a.classes,
        separation: a.separation,
        seed: a.seed,
        sampling_rate: a.sampling_rate,
    };
    let set = gen_synthetic(&cfg)?;
    save_trialset(&set, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "wrote {} trials ({} channels x {} samples, {} classes) to {}",
        set.n_trials(),
        set.channels(),
        set.samples_per_trial(),
        set.n_classes(),
        a.out.display()
    );
    Ok(())
}

fn train(a: TrainArgs) -> anyhow::Result<()> {
    let set = load(&a.data)?;
    set.require_all_classes()?;
    let (train, test) = if a.split < 1.0 {
        stratified_split(set.labels(), a.split, derive_seed(a.seed, 1))?
    } else {
        ((0..set.n_trials()).collect(), Vec::new())
    };
    let mut cfg = a.pipeline.config();
    cfg.train.seed = derive_seed(a.seed, 2);
    let model = fit_pipeline(&set, &train, a.hyper.get(), &cfg)?;
    save_model(&model, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!("trained {} on {} trials, saved to {}", model.hyperparams(), train.len(), a.out.display());
    if !test.is_empty() {
        let trials: Vec<_> = test.iter().map(|&i| set.trial_matrix(i)).collect();
        let (_, pred) = model.predict_trials(&trials)?;
        let truth: Vec<usize> = test.iter().map(|&i| set.labels()[i]).collect();
        let acc = isbci::eval::accuracy(&pred, &truth)?;
        println!("held-out accuracy: {acc:.4} on {} trials", test.len());
    }
    Ok(())
}

fn eval(a: EvalArgs) -> anyhow::Result<()> {
    let per_fold = a.data.len() == 1;
    if !a.compare.is_empty() {
        let expected = if per_fold { a.folds } else { a.data.len() };
        if a.compare.len() != expected {
            return Err(usage(format!(
                "--compare needs {expected} values ({}), got {}",
                if per_fold { "one per fold" } else { "one per dataset" },
                a.compare.len()
            )));
        }
    }
    let cfg = CvConfig {
        k_folds: a.folds,
        inner_folds: a.inner_folds,
        seed: a.seed,
        grid: Grid {
            n_rf: a.grid_pca,
            k_bag: a.grid_bag,
            hidden: a.grid_hidden,
        },
        pipeline: a.pipeline.config(),
    };
    let mut results: Vec<CvResult> = Vec::new();
    for path in &a.data {
        let set = load(path)?;
        let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
        log::info!("evaluating {label}");
        results.push(run_cv_pipeline(&set, &cfg, &label).with_context(|| format!("evaluating {}", path.display()))?);
    }
    let mut w = output(a.out.as_deref())?;
    w.write_all(report(&results, a.format)?.as_bytes())?;
    w.flush()?;
    if !a.compare.is_empty() {
        let ours: Vec<f64> = if per_fold {
            results[0].fold_accuracies.clone()
        } else {
            results.iter().map(|r| r.mean).collect()
        };
        let t = paired_ttest_2tailed(&ours, &a.compare)?;
        let line = format!("paired t-test vs --compare: t = {:.4}, df = {}, p = {:.4}", t.t, t.df, t.p);
        if a.format == ReportFormat::Text && a.out.is_none() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}

/// Rounds away a negative zero so `-0.000` never prints.
fn tidy(v: f64, decimals: i32) -> f64 {
    if v.abs() < 0.5 * 10f64.powi(-decimals) {
        0.0
    } else {
        v
    }
}

fn itr_cmd(a: ItrArgs) -> anyhow::Result<()> {
    let inp = ItrInput::new(a.classes, a.accuracy, a.trial_seconds).map_err(|e| usage(e.to_string()))?;
    let bits = info_per_trial(&inp);
    let bps = itr(bits, a.trial_seconds)?;
    println!("information per decision: {:.4} bits", tidy(bits, 4));
    println!("{:.3} b/s", tidy(bps, 3));
    println!("{:.1} b/min", tidy(bits_per_minute(bps), 1));
    Ok(())
}

fn simulate(a: SimulateArgs) -> anyhow::Result<()> {
    let script = std::fs::read_to_string(&a.intents).with_context(|| format!("reading {}", a.intents.display()))?;
    let intents = parse_intents(&script).map_err(|e| usage(format!("{}: {e}", a.intents.display())))?;
    let (data, label) = session_data(a.session.data.as_deref())?;
    let cfg = a.session.sim_config();
    let mut session = match a.session.decoder {
        DecoderKind::Trained => start_session("s1", data, a.design, a.seed, &cfg)?.0,
        DecoderKind::Perfect => {
            let (_, test) = split_for_session(&data, a.seed, &cfg)?;
            let dec: Arc<dyn Decoder> = Arc::new(PerfectDecoder::new(&data));
            Session::with_decoder("s1", a.design, data, &test, dec, a.seed, &cfg)?
        }
    };
    let header = TranscriptConfig {
        data: label,
        design: a.design,
        seed: a.seed,
        intents: intents.len(),
        sim: cfg,
    };
    let stats = write_transcript(output(a.out.as_deref())?, &header, &mut session, &intents)?;
    let summary = format!(
        "{} decisions, accuracy {:.4}, {:.1} b/min",
        stats.decodes, stats.accuracy, stats.itr_bpm
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn serve_cmd(a: ServeArgs) -> anyhow::Result<()> {
    let (data, label) = session_data(a.session.data.as_deref())?;
    let cfg = a.session.sim_config();
    if data.n_classes() != 2 {
        bail!("serving needs a two-class data set, {label} has {}", data.n_classes());
    }
    let hub = match a.session.decoder {
        DecoderKind::Trained => SessionHub::new(data.clone(), cfg),
        DecoderKind::Perfect => {
            let dec: Arc<dyn Decoder> = Arc::new(PerfectDecoder::new(&data));
            SessionHub::with_decoder(data, cfg, dec)
        }
    };
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&a.addr)
            .await
            .with_context(|| format!("binding {}", a.addr))?;
        println!("listening on http://{}", listener.local_addr()?);
        io::stdout().flush()?;
        serve(listener, Arc::new(hub)).await?;
        Ok(())
    })
}

fn spectrogram(a: SpectrogramArgs) -> anyhow::Result<()> {
    let set = load(&a.data)?;
    if a.trial >= set.n_trials() {
        return Err(usage(format!("--trial {} but the data has {} trials", a.trial, set.n_trials())));
    }
    let sp = export_spectrogram(&set.trial_matrix(a.trial), a.window, a.hop)?;
    let mut w = output(a.out.as_deref())?;
    sp.write_csv(&mut w, set.sampling_rate())?;
    w.flush()?;
    Ok(())
}
