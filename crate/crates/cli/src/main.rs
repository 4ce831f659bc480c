use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fsr_core::io::{read_image, read_pbm, write_pbm, write_pgm};
use fsr_core::pipeline::{run_experiment, run_method, sweep_tau, write_outputs};
use fsr_core::{generate_mask, psnr, ExperimentConfig, FsrParams, Method};

#[derive(Parser)]
#[command(
    name = "fsr",
    version,
    about = "Frequency selective reconstruction of non-regularly sampled images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct one image from a mask or a random subsampling.
    Reconstruct(ReconstructArgs),
    /// Run a density sweep described by a config file and write CSV reports.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReconstructArgs {
    /// Original image (PGM or PNG).
    #[arg(long)]
    input: PathBuf,
    /// PBM mask; set bits mark available samples.
    #[arg(long, conflicts_with_all = ["density", "seed"])]
    mask: Option<PathBuf>,
    /// Fraction of pixels to keep when drawing a random mask.
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the mask in use to this PBM file.
    #[arg(long)]
    save_mask: Option<PathBuf>,
    #[arg(long, default_value = "fsr-ap")]
    method: Method,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    block: Option<usize>,
    #[arg(long)]
    border: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
}

impl ParamArgs {
    fn apply(&self, mut p: FsrParams) -> Result<FsrParams> {
        if let Some(v) = self.tau {
            p.tau = v;
        }
        if let Some(v) = self.rho {
            p.rho_hat = v;
        }
        if let Some(v) = self.delta {
            p.delta = v;
        }
        if let Some(v) = self.gamma {
            p.gamma = v;
        }
        if let Some(v) = self.block {
            p.block_size = v;
        }
        if let Some(v) = self.border {
            p.border = v;
        }
        if let Some(v) = self.iters {
            p.iterations = v;
        }
        p.validate()?;
        Ok(p)
    }
}

fn reconstruct(args: ReconstructArgs) -> Result<()> {
    let params = args.params.apply(FsrParams::default())?;
    let image = read_image(&args.input)?;
    let mask = match (&args.mask, args.density) {
        (Some(path), _) => read_pbm(path)?,
        (None, Some(d)) => generate_mask(image.width(), image.height(), d, args.seed)?,
        (None, None) => bail!("either --mask or --density is required"),
    };
    if let Some(path) = &args.save_mask {
        write_pbm(path, &mask)?;
    }
    let out = run_method(args.method, &image, &mask, &params)
        .with_context(|| format!("{} reconstruction failed", args.method))?;
    write_pgm(&args.output, &out.image)?;
    let quality = psnr(&image, &out.image)?;
    eprintln!(
        "{}: density {:.4}, PSNR {:.3} dB, {:.3} s, {} fallback blocks",
        args.method,
        mask.density(),
        quality,
        out.seconds,
        out.fallback_blocks
    );
    Ok(())
}

fn bench(config: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let config = ExperimentConfig::load(&config)?;
    let dir = out
        .or_else(|| config.output_dir.clone())
        .context("no output directory: pass --out or set output_dir in the config")?;
    let report = run_experiment(&config)?;
    let sweep = if config.taus.is_empty() {
        None
    } else {
        Some(sweep_tau(&config, &config.taus)?)
    };
    write_outputs(&dir, &report, sweep.as_ref())?;
    for row in report.means() {
        eprintln!(
            "{:>8} density {:.2}: {:.3} dB ({} runs, {:.3} s avg)",
            row.method, row.density, row.psnr_db, row.runs, row.seconds
        );
    }
    for err in report
        .errors
        .iter()
        .chain(sweep.iter().flat_map(|s| &s.errors))
    {
        eprintln!("error: {}: {}", err.image, err.message);
    }
    eprintln!("wrote reports to {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reconstruct(args) => reconstruct(args),
        Command::Bench { config, out } => bench(config, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
