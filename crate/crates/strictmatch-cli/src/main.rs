//! Batch front end for the strictmatch pipeline.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input files, 3 violated
//! call preconditions (template larger than signal, depth mismatch, bad
//! parameter ranges), 4 engine disagreement during `bench`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use strictmatch::io::{
    detections_to_csv, read_pgm, surface_to_csv, write_pgm, write_surface_pgm, PgmFormat,
    SurfaceScale,
};
use strictmatch::{
    bench, decompose, detect_peaks, plain_correlation_with, scenario_1d, scenario_2d,
    strict_match_with, Connectivity, Engine, GrayImage, Mode, QuantizationScheme, RealSurface,
    Weighting,
};

#[derive(Parser)]
#[command(
    name = "strictmatch",
    version,
    about = "Strict spectral template matching on PGM images",
    after_help = "Artifacts are written into --out-dir under fixed names; stdout carries a \
                  one-line machine-parsable summary."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strict match a template against a signal, then detect peaks
    Match(MatchArgs),
    /// Plain bilinear correlation baseline, then detect peaks
    Correlate(CorrelateArgs),
    /// Split an image into its binary threshold layers
    Decompose(DecomposeArgs),
    /// Threshold, label, and take centers of mass on a surface PGM
    Detect(DetectArgs),
    /// Generate a synthetic scene with distractors and a ground-truth lag
    Scenario(ScenarioArgs),
    /// Time the fft engine against the naive engine over a size/levels grid
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Linear,
    Circular,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Linear => Mode::Linear,
            ModeArg::Circular => Mode::Circular,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Fft,
    Naive,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Fft => Engine::Fft,
            EngineArg::Naive => Engine::Naive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectivityArg {
    #[value(name = "4")]
    Four,
    #[value(name = "8")]
    Eight,
}

impl From<ConnectivityArg> for Connectivity {
    fn from(c: ConnectivityArg) -> Self {
        match c {
            ConnectivityArg::Four => Connectivity::Four,
            ConnectivityArg::Eight => Connectivity::Eight,
        }
    }
}

#[derive(Args)]
struct MatchArgs {
    /// Template image (PGM P2 or P5)
    #[arg(long)]
    template: PathBuf,
    /// Signal image (PGM P2 or P5)
    #[arg(long)]
    signal: PathBuf,
    /// Quantization levels g
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Detection threshold as a fraction of the surface maximum
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ConnectivityArg::Eight)]
    connectivity: ConnectivityArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Fft)]
    engine: EngineArg,
    /// Also write the exact surface values as surface.csv
    #[arg(long)]
    surface_csv: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CorrelateArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ConnectivityArg::Eight)]
    connectivity: ConnectivityArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Fft)]
    engine: EngineArg,
    #[arg(long)]
    surface_csv: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Image to decompose (PGM P2 or P5)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Surface rendered as a PGM; gray values are taken as scores
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, value_enum, default_value_t = ConnectivityArg::Eight)]
    connectivity: ConnectivityArg,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generate the 2D variant instead of the 1D scene
    #[arg(long)]
    two_d: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Pin the worker thread count (0 keeps the rayon default)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Skip grid cells with signals larger than this side length
    #[arg(long, default_value_t = 512)]
    max_signal: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

/// An error message paired with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<strictmatch::Error> for Failure {
    fn from(err: strictmatch::Error) -> Self {
        let code = if err.is_input_error() { 2 } else { 3 };
        Failure::new(code, err.to_string())
    }
}

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    read_pgm(&bytes)
        .map_err(|e| Failure::new(2, format!("cannot parse {}: {e}", path.display())))
}

fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::new(2, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes)
        .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Match(args) => cmd_match(args),
        Command::Correlate(args) => cmd_correlate(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Scenario(args) => cmd_scenario(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn cmd_match(args: MatchArgs) -> Result<(), Failure> {
    let template = read_image(&args.template)?;
    let signal = read_image(&args.signal)?;
    let result = strict_match_with(
        &template,
        &signal,
        args.levels,
        args.mode.into(),
        args.engine.into(),
    )?;
    let detections = detect_peaks(
        &result.surface,
        args.fraction,
        args.connectivity.into(),
        Weighting::Intensity,
    )?;

    write_artifact(
        &args.out_dir,
        "surface.pgm",
        &write_surface_pgm(&result.surface, SurfaceScale::Max255, PgmFormat::Binary)?,
    )?;
    write_artifact(&args.out_dir, "detections.csv", &detections_to_csv(&detections))?;
    if args.surface_csv {
        write_artifact(&args.out_dir, "surface.csv", &surface_to_csv(&result.surface))?;
    }

    println!(
        "match peak={} lag={},{} mass={} levels={} detections={} out={}",
        result.peak_value,
        result.peak_lag.0,
        result.peak_lag.1,
        result.template_mass.unwrap_or(0.0),
        args.levels,
        detections.detections.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_correlate(args: CorrelateArgs) -> Result<(), Failure> {
    let template = read_image(&args.template)?;
    let signal = read_image(&args.signal)?;
    let result =
        plain_correlation_with(&template, &signal, args.mode.into(), args.engine.into())?;
    let detections = detect_peaks(
        &result.surface,
        args.fraction,
        args.connectivity.into(),
        Weighting::Intensity,
    )?;

    write_artifact(
        &args.out_dir,
        "surface.pgm",
        &write_surface_pgm(&result.surface, SurfaceScale::Max255, PgmFormat::Binary)?,
    )?;
    write_artifact(&args.out_dir, "detections.csv", &detections_to_csv(&detections))?;
    if args.surface_csv {
        write_artifact(&args.out_dir, "surface.csv", &surface_to_csv(&result.surface))?;
    }

    println!(
        "correlate peak={} lag={},{} detections={} out={}",
        result.peak_value,
        result.peak_lag.0,
        result.peak_lag.1,
        detections.detections.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let image = read_image(&args.input)?;
    let scheme = QuantizationScheme::new(image.depth(), args.levels)?;
    let stack = decompose(&image, &scheme)?;
    for layer in stack.layers() {
        let pixels = layer.values().iter().map(|&v| u32::from(v)).collect();
        let img = GrayImage::new(layer.width(), layer.height(), 1, pixels)?;
        write_artifact(
            &args.out_dir,
            &format!("layer_{:02}.pgm", layer.index()),
            &write_pgm(&img, PgmFormat::Binary)?,
        )?;
    }
    println!(
        "decompose levels={} out={}",
        args.levels,
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<(), Failure> {
    let image = read_image(&args.input)?;
    // A standalone surface has no lag information; its origin is index (0, 0).
    let surface = RealSurface::new(
        image.width(),
        image.height(),
        image.to_f64(),
        (0, 0),
    )?;
    let detections = detect_peaks(
        &surface,
        args.fraction,
        args.connectivity.into(),
        Weighting::Intensity,
    )?;
    write_artifact(&args.out_dir, "detections.csv", &detections_to_csv(&detections))?;
    println!(
        "detect detections={} threshold={} out={}",
        detections.detections.len(),
        detections.threshold,
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_scenario(args: ScenarioArgs) -> Result<(), Failure> {
    let scenario = if args.two_d {
        scenario_2d(args.seed)
    } else {
        scenario_1d(args.seed)
    };
    write_artifact(
        &args.out_dir,
        "template.pgm",
        &write_pgm(&scenario.template, PgmFormat::Binary)?,
    )?;
    write_artifact(
        &args.out_dir,
        "signal.pgm",
        &write_pgm(&scenario.signal, PgmFormat::Binary)?,
    )?;
    write_artifact(
        &args.out_dir,
        "truth.txt",
        format!("{} {}\n", scenario.true_lag.0, scenario.true_lag.1).as_bytes(),
    )?;
    println!(
        "scenario seed={} true_lag={},{} out={}",
        args.seed,
        scenario.true_lag.0,
        scenario.true_lag.1,
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| Failure::new(3, format!("cannot pin thread count: {e}")))?;
    }
    let threads = rayon::current_num_threads();

    let sizes = [(64usize, 8usize), (128, 16), (256, 32), (512, 32)];
    let levels = [4usize, 8, 16];
    let mut csv = String::from(bench::CSV_HEADER);
    csv.push('\n');
    let mut rows = 0;
    for (i, &(signal, template)) in sizes
        .iter()
        .filter(|(s, _)| *s <= args.max_signal)
        .enumerate()
    {
        for (j, &g) in levels.iter().enumerate() {
            let cell = bench::run_cell(signal, template, g, (i * levels.len() + j) as u64)?;
            if !cell.engines_agree {
                return Err(Failure::new(
                    4,
                    format!(
                        "engines disagree at signal {signal}, template {template}, levels {g}; \
                         refusing to report timings"
                    ),
                ));
            }
            csv.push_str(&cell.csv_row(threads));
            csv.push('\n');
            rows += 1;
        }
    }
    write_artifact(&args.out_dir, "bench.csv", csv.as_bytes())?;
    println!("bench rows={rows} threads={threads} out={}", args.out_dir.display());
    Ok(())
}
