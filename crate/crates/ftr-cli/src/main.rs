//! Command-line front end: dataset generation, spectra, model fitting,
//! reconstruction and error sweeps, all exchanging FTRS snapshot files and
//! CSV tables.
//!
//! Exit codes: 0 success, 2 argument parsing (clap), 3 file/format errors,
//! 4 threshold outside the data range, 5 no level crossing in a snapshot,
//! 6 mode count beyond the available rank, 1 any other validation or
//! domain error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ftr::io::{read_snapshots, write_csv, write_snapshots, Column, Table};
use ftr::lowrank::{spectrum, thin_svd};
use ftr::reconstruct::{
    default_band, error_report, ftr_decompose_with_phi, method_by_name, FitParams, NormSelect,
    DEFAULT_SUPPORT_SIZE,
};
use ftr::series_to_matrix;
use ftr::synth::{generator_by_name, GenConfig, PhiKind};
use ftr::{Error, Grid1D, SnapshotSeries};

#[derive(Parser)]
#[command(name = "ftr", version, about = "Low-rank level-set reconstruction of sharp moving fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset and write it as an FTRS file
    Generate(GenerateArgs),
    /// Write the singular-value spectrum of a snapshot file as CSV
    Spectrum(SpectrumArgs),
    /// Fit a front-transport model and persist its parts into a directory
    Decompose(DecomposeArgs),
    /// Reconstruct the data at a fixed mode count
    Reconstruct(ReconstructArgs),
    /// Error curves of both methods over a range of mode counts
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiKindArg {
    SignedDistance,
    Paraboloid,
}

impl From<PhiKindArg> for PhiKind {
    fn from(value: PhiKindArg) -> Self {
        match value {
            PhiKindArg::SignedDistance => PhiKind::SignedDistance,
            PhiKindArg::Paraboloid => PhiKind::Paraboloid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Fro,
    Spectral,
    Both,
}

impl From<NormArg> for NormSelect {
    fn from(value: NormArg) -> Self {
        match value {
            NormArg::Fro => NormSelect::Frobenius,
            NormArg::Spectral => NormSelect::Spectral,
            NormArg::Both => NormSelect::Both,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Dataset kind: advection1d, disc or merging
    kind: String,
    /// Output FTRS file for the field data
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the generator's level-set series, when it has one
    #[arg(long)]
    phi_out: Option<PathBuf>,
    /// Domain size L
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// Final time (advection1d)
    #[arg(long, default_value_t = 1.0)]
    t_final: f64,
    /// Transport speed (advection1d)
    #[arg(long, default_value_t = 0.5)]
    speed: f64,
    /// Front width; defaults to the generator's own value
    #[arg(long)]
    lambda: Option<f64>,
    /// Nodes per axis; defaults to the generator's own value
    #[arg(long)]
    nx: Option<usize>,
    /// Snapshot count; defaults to the generator's own value
    #[arg(long)]
    nt: Option<usize>,
    /// Level-set encoding for the disc generator
    #[arg(long, value_enum, default_value_t = PhiKindArg::SignedDistance)]
    phi_kind: PhiKindArg,
    /// First disc radius (merging)
    #[arg(long, default_value_t = 0.12)]
    r1: f64,
    /// Second disc radius (merging)
    #[arg(long, default_value_t = 0.12)]
    r2: f64,
    /// Reserved; all generators are deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Input FTRS file
    #[arg(short, long)]
    input: PathBuf,
    /// Output CSV file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    /// Front threshold on the field values
    #[arg(long)]
    threshold: f64,
    /// Sample band around the front; defaults to 5 grid spacings
    #[arg(long)]
    band: Option<f64>,
    /// Number of profile support points
    #[arg(long, default_value_t = DEFAULT_SUPPORT_SIZE)]
    support_size: usize,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input FTRS file
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Output directory for the model files
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Input FTRS file
    #[arg(short, long)]
    input: PathBuf,
    /// Retained mode count
    #[arg(long)]
    modes: usize,
    /// Reduction method: pod or ftr
    #[arg(long)]
    method: String,
    /// Front threshold (required by ftr)
    #[arg(long)]
    threshold: Option<f64>,
    /// Sample band around the front; defaults to 5 grid spacings
    #[arg(long)]
    band: Option<f64>,
    /// Number of profile support points
    #[arg(long, default_value_t = DEFAULT_SUPPORT_SIZE)]
    support_size: usize,
    /// Output FTRS file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Input FTRS file
    #[arg(short, long)]
    input: PathBuf,
    /// Mode counts: a single `n`, an inclusive range `a..b`, or a comma list
    #[arg(long)]
    modes: String,
    #[command(flatten)]
    model: ModelArgs,
    /// Which norms to evaluate; spectral columns are NaN under `fro`
    #[arg(long, value_enum, default_value_t = NormArg::Both)]
    norm: NormArg,
    /// Output CSV file
    #[arg(short, long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = apply_thread_cap() {
        eprintln!("error: {message}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(RunError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

enum RunError {
    /// Flag-level validation problems; always exit 1.
    Usage(String),
    /// Errors from the library, mapped to documented exit codes.
    Domain(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e)
    }
}

type RunResult = Result<(), RunError>;

fn apply_thread_cap() -> Result<(), String> {
    match std::env::var("FTR_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| format!("FTR_THREADS must be a non-negative integer, got '{raw}'"))?;
            if n > 0 {
                ftr::set_thread_cap(n);
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BadMagic
        | Error::VersionMismatch { .. }
        | Error::TruncatedPayload { .. }
        | Error::TrailingData { .. }
        | Error::RaggedColumns { .. }
        | Error::BadCsvCell { .. }
        | Error::Io { .. } => 3,
        Error::ThresholdOutOfRange { .. } => 4,
        Error::EmptyContour { .. } => 5,
        Error::RankOutOfRange { .. } => 6,
        _ => 1,
    }
}

fn run(command: Command) -> RunResult {
    match command {
        Command::Generate(args) => generate(args),
        Command::Spectrum(args) => spectrum_cmd(args),
        Command::Decompose(args) => decompose(args),
        Command::Reconstruct(args) => reconstruct(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn generate(args: GenerateArgs) -> RunResult {
    let generator = generator_by_name(&args.kind)?;
    let cfg = GenConfig {
        l: args.length,
        t_final: args.t_final,
        speed: args.speed,
        lambda: args.lambda,
        nx: args.nx,
        nt: args.nt,
        phi_kind: args.phi_kind.into(),
        r1: args.r1,
        r2: args.r2,
    };
    let set = generator.generate(&cfg)?;
    write_snapshots(&set.q, &args.output)?;
    println!(
        "wrote {} snapshots ({} nodes) to {}",
        set.q.len(),
        set.q.grid().num_nodes(),
        args.output.display()
    );
    if let Some(path) = args.phi_out {
        match set.phi {
            Some(phi) => {
                write_snapshots(&phi, &path)?;
                println!("wrote level-set series to {}", path.display());
            }
            None => eprintln!("note: generator '{}' has no level-set series", args.kind),
        }
    }
    Ok(())
}

fn spectrum_cmd(args: SpectrumArgs) -> RunResult {
    let series = read_snapshots(&args.input)?;
    let factors = thin_svd(&series_to_matrix(&series))?;
    let normalized = spectrum(&factors)?;
    let table = Table::new(vec![
        Column::Int("k".into(), (1..=factors.rank() as i64).collect()),
        Column::Float("sigma".into(), factors.singular_values().to_vec()),
        Column::Float("sigma_over_sigma1".into(), normalized),
    ])?;
    write_csv(&table, &args.output)?;
    println!(
        "wrote {} singular values to {}",
        factors.rank(),
        args.output.display()
    );
    Ok(())
}

fn fit_ftr_model(
    series: &SnapshotSeries,
    model_args: &ModelArgs,
) -> ftr::Result<(ftr::reconstruct::FtrModel, SnapshotSeries)> {
    let grid = *series.grid2d()?;
    let band = model_args.band.unwrap_or_else(|| default_band(&grid));
    let (min, max) = series.value_range();
    if model_args.threshold < min || model_args.threshold > max {
        return Err(Error::ThresholdOutOfRange {
            threshold: model_args.threshold,
            min,
            max,
        });
    }
    let phi = ftr::distance::sdf_series(series, model_args.threshold)?;
    let model = ftr_decompose_with_phi(
        series,
        &phi,
        model_args.threshold,
        band,
        model_args.support_size,
    )?;
    Ok((model, phi))
}

fn decompose(args: DecomposeArgs) -> RunResult {
    let series = read_snapshots(&args.input)?;
    let (model, phi) = fit_ftr_model(&series, &args.model)?;
    std::fs::create_dir_all(&args.output).map_err(|e| Error::Io {
        path: args.output.clone(),
        source: e,
    })?;

    write_snapshots(&phi, args.output.join("phi.ftrs"))?;

    let profile_table = Table::new(vec![
        Column::Float("support".into(), model.profile().support().to_vec()),
        Column::Float("value".into(), model.profile().values().to_vec()),
    ])?;
    write_csv(&profile_table, args.output.join("profile.csv"))?;

    let factors = model.phi_factors();
    let rank = factors.rank();
    let grid = *model.grid();

    // spatial modes as an FTRS stack indexed by mode number
    let mode_fields: Vec<Vec<f64>> = (0..rank)
        .map(|k| factors.u().column(k).iter().copied().collect())
        .collect();
    let mode_times: Vec<f64> = (1..=rank).map(|k| k as f64).collect();
    let modes = SnapshotSeries::new(grid, mode_times, mode_fields)?;
    write_snapshots(&modes, args.output.join("phi_modes.ftrs"))?;

    // temporal coefficients sigma_k v_k as a 1D FTRS over the data times
    if rank >= 2 {
        let coeff_fields: Vec<Vec<f64>> = (0..model.times().len())
            .map(|j| {
                (0..rank)
                    .map(|k| factors.singular_values()[k] * factors.v()[(j, k)])
                    .collect()
            })
            .collect();
        let coeff_grid = Grid1D::new(rank, rank as f64)?;
        let coeffs = SnapshotSeries::new(coeff_grid, model.times().to_vec(), coeff_fields)?;
        write_snapshots(&coeffs, args.output.join("phi_coeffs.ftrs"))?;
    }

    let sigma_table = Table::new(vec![
        Column::Int("k".into(), (1..=rank as i64).collect()),
        Column::Float("sigma".into(), factors.singular_values().to_vec()),
    ])?;
    write_csv(&sigma_table, args.output.join("sigma.csv"))?;

    let meta = Table::new(vec![
        Column::Float("threshold".into(), vec![model.threshold()]),
        Column::Float("band".into(), vec![model.band()]),
        Column::Int("support_size".into(), vec![model.profile().len() as i64]),
        Column::Int("rank".into(), vec![rank as i64]),
    ])?;
    write_csv(&meta, args.output.join("model.csv"))?;

    println!(
        "wrote model (rank {rank}, band {:.6}) to {}",
        model.band(),
        args.output.display()
    );
    Ok(())
}

fn reconstruct(args: ReconstructArgs) -> RunResult {
    let series = read_snapshots(&args.input)?;
    let method = method_by_name(&args.method)?;
    let threshold = match (args.method.as_str(), args.threshold) {
        ("pod", t) => t.unwrap_or(0.0),
        (_, Some(t)) => t,
        (_, None) => {
            return Err(RunError::Usage(format!(
                "--threshold is required for method '{}'",
                args.method
            )))
        }
    };
    let params = FitParams {
        threshold,
        band: args.band,
        support_size: args.support_size,
    };
    let model = method.fit(&series, &params)?;
    let rec = model.reconstruct(args.modes)?;
    write_snapshots(&rec, &args.output)?;
    println!(
        "wrote {}-mode {} reconstruction to {}",
        args.modes,
        method.name(),
        args.output.display()
    );
    Ok(())
}

/// Parses `N`, an inclusive range `A..B`, or a comma list into mode counts.
fn parse_modes(raw: &str) -> Result<Vec<usize>, String> {
    let parse_one = |s: &str| -> Result<usize, String> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid mode count '{}' in --modes", s.trim()))
    };
    if let Some((a, b)) = raw.split_once("..") {
        let (a, b) = (parse_one(a)?, parse_one(b)?);
        if b < a {
            return Err(format!("empty mode range {a}..{b}"));
        }
        Ok((a..=b).collect())
    } else if raw.contains(',') {
        raw.split(',').map(parse_one).collect()
    } else {
        Ok(vec![parse_one(raw)?])
    }
}

fn sweep(args: SweepArgs) -> RunResult {
    let modes = parse_modes(&args.modes).map_err(RunError::Usage)?;
    let series = read_snapshots(&args.input)?;
    let (model, _) = fit_ftr_model(&series, &args.model)?;
    let report = error_report(&series, &model, &modes, args.norm.into())?;
    write_csv(&report.to_table(), &args.output)?;
    let summary_n = report.modes.last().copied().unwrap_or(0);
    let idx = report.modes.len().saturating_sub(1);
    println!(
        "wrote error curves for {} mode counts to {} (n = {summary_n}: pod {:.6e}, ftr {:.6e}, delta_f {:.6e})",
        report.modes.len(),
        args.output.display(),
        report.pod_rel_fro[idx],
        report.ftr_rel_fro[idx],
        report.delta_f
    );
    Ok(())
}
