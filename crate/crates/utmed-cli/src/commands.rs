use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use utmed::fsmd::{equivalent_to_direct, fsmd_run_image, Scheduler};
use utmed::noise::{NoiseKind, NoiseSpec};
use utmed::snake::{verify_network, Network};
use utmed::{
    denoise_pa, mean_filter, measure_density, read_pgm, smf, write_pgm, FilterParams, Image,
    QualityReport,
};

use crate::config::ConfigFile;

/// Errors carrying the exit-code class.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Verification(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Verification(m) => f.write_str(m),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "utmed",
    version,
    about = "Grayscale image restoration around the unsymmetrical trimmed median"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Salt & pepper (fixed-valued) impulses, split evenly between 0 and 255.
    Sp,
    /// Random-valued impulses, uniform over [0, 255].
    Rvin,
    /// Additive zero-mean Gaussian noise (variance on the [0, 1] scale).
    Gaussian,
    /// Gaussian noise followed by salt & pepper impulses.
    Mixed,
}

impl KindArg {
    pub fn name(self) -> &'static str {
        match self {
            KindArg::Sp => "sp",
            KindArg::Rvin => "rvin",
            KindArg::Gaussian => "gaussian",
            KindArg::Mixed => "mixed",
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "sp" => Some(KindArg::Sp),
            "rvin" => Some(KindArg::Rvin),
            "gaussian" => Some(KindArg::Gaussian),
            "mixed" => Some(KindArg::Mixed),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    /// The switched trimmed-median filter.
    Pa,
    /// Standard 3x3 median filter.
    Smf3,
    /// Standard 5x5 median filter.
    Smf5,
    /// 3x3 box mean filter.
    Mean,
}

impl FilterArg {
    pub fn name(self) -> &'static str {
        match self {
            FilterArg::Pa => "pa",
            FilterArg::Smf3 => "smf3",
            FilterArg::Smf5 => "smf5",
            FilterArg::Mean => "mean",
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "pa" => Some(FilterArg::Pa),
            "smf3" => Some(FilterArg::Smf3),
            "smf5" => Some(FilterArg::Smf5),
            "mean" => Some(FilterArg::Mean),
            _ => None,
        }
    }

    fn apply(self, img: &Image, params: &FilterParams) -> Image {
        match self {
            FilterArg::Pa => denoise_pa(img, params),
            FilterArg::Smf3 => smf(img, 3).expect("3 is a supported median size"),
            FilterArg::Smf5 => smf(img, 5).expect("5 is a supported median size"),
            FilterArg::Mean => mean_filter(img, 3).expect("3 is a valid mean size"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum NetworkArg {
    /// The verified wiring with the cleanup stage.
    #[default]
    Shipped,
    /// The wiring without the cleanup stage (fails a known input set).
    Base,
}

#[derive(Subcommand)]
pub enum Command {
    /// Corrupt a PGM image with a seeded noise regime.
    Noise {
        /// Noise regime.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Total corruption density for sp/rvin/mixed (a fraction, e.g. 0.5).
        #[arg(long)]
        density: Option<f64>,
        /// Gaussian variance on the [0, 1] scale (gaussian/mixed).
        #[arg(long)]
        var: Option<f64>,
        /// RNG seed; identical seeds give bit-identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        input: PathBuf,
        output: PathBuf,
    },
    /// Restore a PGM image with the trimmed-median filter or a baseline.
    Denoise {
        #[arg(long, value_enum)]
        filter: FilterArg,
        /// Center-pixel detection threshold.
        #[arg(long, default_value_t = 40)]
        t: u8,
        /// Median-trust threshold.
        #[arg(long, default_value_t = 20)]
        t1: u8,
        input: PathBuf,
        output: PathBuf,
    },
    /// Print "mse,psnr,ief" for a clean/noisy/restored triple.
    Metrics {
        clean: PathBuf,
        noisy: PathBuf,
        restored: PathBuf,
    },
    /// Run a (image x filter x level x seed) grid and write one CSV row per cell.
    Sweep {
        /// Config file with key = value lines; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Input images, comma separated.
        #[arg(long, value_delimiter = ',')]
        images: Vec<PathBuf>,
        /// Filters to run, comma separated.
        #[arg(long, value_delimiter = ',')]
        filters: Vec<FilterArg>,
        /// Noise regime for the whole sweep.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Noise levels: densities for sp/rvin/mixed, variances for gaussian.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<f64>,
        /// Seeds; each cell is repeated per seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Fixed Gaussian variance for mixed sweeps.
        #[arg(long)]
        var: Option<f64>,
        #[arg(long)]
        t: Option<u8>,
        #[arg(long)]
        t1: Option<u8>,
        output: PathBuf,
    },
    /// Verify the sorting network and the scheduler model; nonzero exit on any failure.
    Verify {
        /// Which network wiring to gate the exit code on.
        #[arg(long, value_enum, default_value_t)]
        network: NetworkArg,
        /// Optional path for the text report (always printed to stdout).
        report: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Noise {
            kind,
            density,
            var,
            seed,
            input,
            output,
        } => cmd_noise(kind, density, var, seed, &input, &output),
        Command::Denoise {
            filter,
            t,
            t1,
            input,
            output,
        } => cmd_denoise(filter, FilterParams::new(t, t1), &input, &output),
        Command::Metrics {
            clean,
            noisy,
            restored,
        } => cmd_metrics(&clean, &noisy, &restored),
        Command::Sweep {
            config,
            images,
            filters,
            kind,
            levels,
            seeds,
            var,
            t,
            t1,
            output,
        } => {
            let spec = SweepSpec::assemble(
                config.as_deref(),
                images,
                filters,
                kind,
                levels,
                seeds,
                var,
                t,
                t1,
            )?;
            cmd_sweep(&spec, &output)
        }
        Command::Verify { network, report } => cmd_verify(network, report.as_deref()),
    }
}

fn load_image(path: &Path) -> Result<Image, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    read_pgm(&bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn save_image(path: &Path, img: &Image) -> Result<(), CliError> {
    fs::write(path, write_pgm(img, false))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Builds the library-level noise spec, validating flag combinations.
fn noise_spec(
    kind: KindArg,
    density: Option<f64>,
    var: Option<f64>,
    seed: u64,
) -> Result<NoiseSpec, CliError> {
    let need_density = || {
        density.ok_or_else(|| {
            CliError::Usage(format!("--density is required for --kind {}", kind.name()))
        })
    };
    let need_var = || {
        var.ok_or_else(|| {
            CliError::Usage(format!("--var is required for --kind {}", kind.name()))
        })
    };
    let kind = match kind {
        KindArg::Sp => {
            let d = need_density()?;
            NoiseKind::SaltPepper { p: d / 2.0, q: d / 2.0 }
        }
        KindArg::Rvin => NoiseKind::RandomImpulse { d: need_density()? },
        KindArg::Gaussian => NoiseKind::Gaussian { var: need_var()? },
        KindArg::Mixed => NoiseKind::Mixed {
            d: need_density()?,
            var: need_var()?,
        },
    };
    let spec = NoiseSpec::new(kind, seed);
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

fn cmd_noise(
    kind: KindArg,
    density: Option<f64>,
    var: Option<f64>,
    seed: u64,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let spec = noise_spec(kind, density, var, seed)?;
    let clean = load_image(input)?;
    let noisy = spec.apply(&clean).map_err(|e| CliError::Usage(e.to_string()))?;
    save_image(output, &noisy)?;
    let measured = measure_density(&clean, &noisy).expect("same dimensions by construction");
    println!("measured density: {measured:.4}");
    Ok(())
}

fn cmd_denoise(
    filter: FilterArg,
    params: FilterParams,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let noisy = load_image(input)?;
    let restored = filter.apply(&noisy, &params);
    save_image(output, &restored)
}

fn cmd_metrics(clean: &Path, noisy: &Path, restored: &Path) -> Result<(), CliError> {
    let clean_img = load_image(clean)?;
    let noisy_img = load_image(noisy)?;
    let restored_img = load_image(restored)?;
    let report = QualityReport::measure(&clean_img, &noisy_img, &restored_img)
        .map_err(|e| CliError::Io(e.to_string()))?;
    println!("{}", report.to_csv_row());
    Ok(())
}

/// A fully resolved sweep: every list nonempty, every flag defaulted.
pub struct SweepSpec {
    pub images: Vec<PathBuf>,
    pub filters: Vec<FilterArg>,
    pub kind: KindArg,
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    pub mixed_var: f64,
    pub params: FilterParams,
}

impl SweepSpec {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        config: Option<&Path>,
        images: Vec<PathBuf>,
        filters: Vec<FilterArg>,
        kind: Option<KindArg>,
        levels: Vec<f64>,
        seeds: Vec<u64>,
        var: Option<f64>,
        t: Option<u8>,
        t1: Option<u8>,
    ) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                ConfigFile::parse(&text).map_err(CliError::Usage)?
            }
            None => ConfigFile::default(),
        };

        // flags override the file, file fills the gaps
        let images = if images.is_empty() { file.images } else { images };
        let filters = if filters.is_empty() { file.filters } else { filters };
        let kind = kind.or(file.kind).unwrap_or(KindArg::Sp);
        let levels = if levels.is_empty() { file.levels } else { levels };
        let seeds = if seeds.is_empty() { file.seeds } else { seeds };
        let seeds = if seeds.is_empty() { vec![0] } else { seeds };
        let mixed_var = var.or(file.var).unwrap_or(0.001);
        let params = FilterParams::new(t.or(file.t).unwrap_or(40), t1.or(file.t1).unwrap_or(20));

        if images.is_empty() {
            return Err(CliError::Usage("sweep needs at least one image".into()));
        }
        if filters.is_empty() {
            return Err(CliError::Usage("sweep needs at least one filter".into()));
        }
        if levels.is_empty() {
            return Err(CliError::Usage("sweep needs at least one level".into()));
        }

        Ok(Self {
            images,
            filters,
            kind,
            levels,
            seeds,
            mixed_var,
            params,
        })
    }

    fn noise_for(&self, level: f64, seed: u64) -> Result<NoiseSpec, CliError> {
        let (density, var) = match self.kind {
            KindArg::Gaussian => (None, Some(level)),
            KindArg::Mixed => (Some(level), Some(self.mixed_var)),
            _ => (Some(level), None),
        };
        noise_spec(self.kind, density, var, seed)
    }
}

fn cmd_sweep(spec: &SweepSpec, output: &Path) -> Result<(), CliError> {
    // load everything first so a missing image aborts before any output
    let mut clean_images = Vec::with_capacity(spec.images.len());
    for path in &spec.images {
        clean_images.push(load_image(path)?);
    }
    for &level in &spec.levels {
        for &seed in &spec.seeds {
            spec.noise_for(level, seed)?; // validate the whole grid up front
        }
    }

    let mut csv = String::from("image,filter,noise_kind,level,seed,mse,psnr,ief\n");
    for (path, clean) in spec.images.iter().zip(&clean_images) {
        for &filter in &spec.filters {
            for &level in &spec.levels {
                for &seed in &spec.seeds {
                    let noise = spec.noise_for(level, seed)?;
                    let noisy = noise
                        .apply(clean)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    let restored = filter.apply(&noisy, &spec.params);
                    let report = QualityReport::measure(clean, &noisy, &restored)
                        .expect("sweep images share dimensions by construction");
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        path.display(),
                        filter.name(),
                        spec.kind.name(),
                        level,
                        seed,
                        report.to_csv_row()
                    ));
                }
            }
        }
    }
    fs::write(output, csv).map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    Ok(())
}

fn cmd_verify(network: NetworkArg, report_path: Option<&Path>) -> Result<(), CliError> {
    let (net, label) = match network {
        NetworkArg::Shipped => (Network::shipped(), "shipped"),
        NetworkArg::Base => (Network::base(), "base"),
    };

    let mut text = String::new();
    text.push_str(&format!("== sorting network ({label}) ==\n"));
    let net_report = verify_network(&net);
    text.push_str(&net_report.to_text(16));

    text.push_str("\n== scheduler vs direct filter ==\n");
    let params = FilterParams::default();
    let mut embedded_ok = 0u32;
    for mask in 0u16..512 {
        let mut img = Image::constant(9, 9, 128);
        for i in 0..9 {
            let v = if mask & (1 << i) != 0 { 255 } else { 0 };
            img.set(3 + (i % 3) as u32, 3 + (i / 3) as u32, v);
        }
        if equivalent_to_direct(&img, &params) {
            embedded_ok += 1;
        }
    }
    text.push_str(&format!("embedded binary windows: {embedded_ok}/512 identical\n"));

    let mut random_ok = 0u32;
    let random_cases: [NoiseSpec; 5] = [
        NoiseSpec::new(NoiseKind::SaltPepper { p: 0.25, q: 0.25 }, 1),
        NoiseSpec::new(NoiseKind::SaltPepper { p: 0.45, q: 0.45 }, 2),
        NoiseSpec::new(NoiseKind::RandomImpulse { d: 0.4 }, 3),
        NoiseSpec::new(NoiseKind::Gaussian { var: 0.005 }, 4),
        NoiseSpec::new(NoiseKind::Mixed { d: 0.3, var: 0.001 }, 5),
    ];
    let ramp = Image::from_fn(32, 32, |x, y| (8 + (x * 7 + y * 5) % 240) as u8);
    for spec in &random_cases {
        let noisy = spec.apply(&ramp).expect("verification specs are valid");
        if equivalent_to_direct(&noisy, &params) {
            random_ok += 1;
        }
    }
    text.push_str(&format!(
        "seeded noisy images: {random_ok}/{} identical\n",
        random_cases.len()
    ));

    text.push_str("\n== cycle accounting ==\n");
    let (_, cycles) = fsmd_run_image(&ramp, &params);
    text.push_str(&cycles.to_kv_text());

    text.push_str("\n== index table ==\n");
    text.push_str(&Scheduler::new().table().to_text());

    print!("{text}");
    if let Some(path) = report_path {
        fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }

    if !net_report.is_sorting_network() {
        return Err(CliError::Verification(format!(
            "{label} network failed {} input vectors",
            net_report.failures.len()
        )));
    }
    if embedded_ok != 512 || random_ok != random_cases.len() as u32 {
        return Err(CliError::Verification(
            "scheduler output diverged from the direct filter".into(),
        ));
    }
    Ok(())
}
