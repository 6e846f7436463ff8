use clap::{Args, Parser, Subcommand};
use soilmpt::forward::{Hold, Mode, Variant};
use soilmpt::quadrature::{QuadratureSettings, Strategy};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "soilmpt", version, about = "Metal-detector voltages from small objects buried in conducting, permeable soil")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ΔV over the scenario's frequency grid for each requested variant.
    SweepFrequency(SweepArgs),
    /// Frequency sweeps repeated for several object depths.
    SweepDepth {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Depths |z₃| in metres, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<f64>,
    },
    /// Frequency sweeps repeated for several object sizes.
    SweepSize {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Size scales α in metres, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
    /// Soil-only voltage ΔV₀ over a grid of soil conductivities and permeabilities.
    SoilResponse {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        sigmas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        murs: Vec<f64>,
    },
    /// Writes the analytic signature of a sphere.
    MptSphere {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        mur: f64,
        #[arg(long)]
        omin: f64,
        #[arg(long)]
        omax: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks a scenario and/or a signature file without computing anything.
    Validate {
        #[arg(long, required_unless_present = "signature")]
        scenario: Option<PathBuf>,
        #[arg(long)]
        signature: Option<PathBuf>,
    },
    /// Fits the decay rate of |ΔV_s| against object size.
    RateStudy {
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
        alphas: Vec<f64>,
        #[arg(long, default_value = "fixed_nu", value_parser = parse_hold)]
        hold: Hold,
        #[arg(long, default_value_t = 1e5)]
        omega: f64,
        #[arg(long, default_value = "integrated", value_parser = parse_mode)]
        mode: Mode,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario JSON; the built-in reference sphere scenario when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Output CSV. A `.dat` file and an `.svg` plot are written next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "integrated", value_parser = parse_mode)]
    pub mode: Mode,
    /// Replace the scenario's frequencies with `--n` log-spaced values.
    #[arg(long, requires_all = ["omax", "n"])]
    pub omin: Option<f64>,
    #[arg(long, requires_all = ["omin", "n"])]
    pub omax: Option<f64>,
    #[arg(long, requires_all = ["omin", "omax"])]
    pub n: Option<usize>,
    /// Column plotted against ω.
    #[arg(long, default_value = "ReV_over_omega")]
    pub plot_y: String,
    #[arg(long)]
    pub no_plot: bool,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub parallel: usize,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',', default_value = "Vs,Vs0,Vfs", value_parser = parse_variant)]
    pub variants: Vec<Variant>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_intervals: Option<usize>,
    #[arg(long)]
    pub accel_terms: Option<usize>,
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<Strategy>,
}

impl TolArgs {
    pub fn settings(&self) -> QuadratureSettings {
        let mut s = QuadratureSettings::default();
        if let Some(v) = self.rel_tol {
            s.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            s.abs_tol = v;
        }
        if let Some(v) = self.max_intervals {
            s.max_intervals = v;
        }
        if let Some(v) = self.accel_terms {
            s.accel_terms = v;
        }
        if let Some(v) = self.strategy {
            s.strategy = v;
        }
        s
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: soilmpt::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: soilmpt::Error| e.to_string())
}

fn parse_hold(s: &str) -> Result<Hold, String> {
    s.parse().map_err(|e: soilmpt::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s.to_ascii_lowercase().replace('-', "_").as_str() {
        "auto" => Ok(Strategy::Auto),
        "adaptive" => Ok(Strategy::Adaptive),
        "partition_extrapolation" => Ok(Strategy::PartitionExtrapolation),
        _ => Err(format!("unknown strategy `{s}` (expected auto, adaptive or partition_extrapolation)")),
    }
}
