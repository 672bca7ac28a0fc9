//! Sweep orchestration behind the `dmrx` binary: presets, config loading,
//! CSV and SVG output.

mod csv;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dmrx_core::montecarlo::sweep;
use dmrx_core::{Method, PerformanceReport, ScenarioConfig, SweepAxis};
use thiserror::Error;

pub use csv::{csv_body, render_csv};
pub use svg::render_svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dmrx_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid sweep: {0}")]
    Spec(String),
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Symbols per point used when a preset asks for Monte-Carlo BER.
pub const DEFAULT_SYMBOLS: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Fig2 => "secrecy rate vs SNR (-5..25 dB, step 2.5), rates only",
            Preset::Fig3 => "secrecy rate vs jamming power P_M (0.1..1000 W) at SNR = 15 dB, rates only",
            Preset::Fig4 => "BER vs SNR (-5..25 dB, step 2.5), 2e5 QPSK symbols per point",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Builds the sweep on top of `base`. Only the swept quantity (and, for
    /// the jamming sweep, the SNR) is overridden.
    pub fn spec(self, base: ScenarioConfig, out_dir: impl Into<PathBuf>) -> SweepSpec {
        let snr_grid: Vec<f64> = (0..13).map(|i| -5.0 + 2.5 * i as f64).collect();
        let (scenario, axis, n_symbols, plot) = match self {
            Preset::Fig2 => (base, SweepAxis::SnrDb(snr_grid), 0, PlotKind::SecrecyRate),
            Preset::Fig3 => {
                let grid = (0..9).map(|i| 10f64.powf(-1.0 + 0.5 * i as f64)).collect();
                (base.with_snr_db(15.0), SweepAxis::PmWatt(grid), 0, PlotKind::SecrecyRate)
            }
            Preset::Fig4 => (base, SweepAxis::SnrDb(snr_grid), DEFAULT_SYMBOLS, PlotKind::Ber),
        };
        SweepSpec {
            name: self.name().to_string(),
            scenario,
            axis,
            methods: Method::ALL.to_vec(),
            n_symbols,
            seed: 1,
            out_dir: out_dir.into(),
            plot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    SecrecyRate,
    Ber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// File stem for the outputs.
    pub name: String,
    pub scenario: ScenarioConfig,
    pub axis: SweepAxis,
    pub methods: Vec<Method>,
    pub n_symbols: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub plot: PlotKind,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let values = self.axis.values();
        if values.is_empty() {
            return Err(CliError::Spec("axis has no values".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Spec("axis values must be finite".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Spec("axis values must be strictly increasing".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Spec("no methods selected".into()));
        }
        if self.plot == PlotKind::Ber && self.n_symbols == 0 {
            return Err(CliError::Spec("a BER plot needs --symbols > 0".into()));
        }
        if let SweepAxis::PmWatt(v) = &self.axis {
            if v.iter().any(|&p| p < 0.0) {
                return Err(CliError::Spec("jamming powers must be non-negative".into()));
            }
        }
        self.scenario.validate()?;
        Ok(())
    }

    pub fn csv_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}.csv", self.name))
    }

    pub fn svg_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}.svg", self.name))
    }
}

/// Reads a `key = value` file; absent keys take their defaults.
pub fn validate_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    Ok(ScenarioConfig::from_kv_str(&text)?)
}

/// Runs the sweep on a pool of `workers` threads (0 lets rayon decide).
pub fn compute(spec: &SweepSpec, workers: usize) -> Result<Vec<PerformanceReport>, CliError> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Spec(format!("cannot start worker pool: {e}")))?;
    let reports = pool.install(|| sweep(&spec.scenario, &spec.methods, &spec.axis, spec.n_symbols, spec.seed))?;
    Ok(reports)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub reports: Vec<PerformanceReport>,
    pub summary: String,
}

/// Computes the sweep and writes `<name>.csv` and `<name>.svg` under the
/// output directory.
pub fn run(spec: &SweepSpec, workers: usize) -> Result<RunOutput, CliError> {
    let reports = compute(spec, workers)?;
    fs::create_dir_all(&spec.out_dir).map_err(io_error(&spec.out_dir))?;
    let csv_path = spec.csv_path();
    fs::write(&csv_path, render_csv(spec, &reports)).map_err(io_error(&csv_path))?;
    let svg_path = spec.svg_path();
    fs::write(&svg_path, render_svg(spec, &reports)).map_err(io_error(&svg_path))?;
    let summary = summary_table(spec, &reports);
    Ok(RunOutput {
        csv_path,
        svg_path,
        reports,
        summary,
    })
}

/// One row per method, one column per axis value.
pub fn summary_table(spec: &SweepSpec, reports: &[PerformanceReport]) -> String {
    let (label, pick): (&str, fn(&PerformanceReport) -> f64) = match spec.plot {
        PlotKind::SecrecyRate => ("secrecy rate (bits/s/Hz)", |r| r.rates.secrecy_rate),
        PlotKind::Ber => ("BER", |r| r.ber.as_ref().map_or(f64::NAN, |b| b.ber)),
    };
    let mut out = String::new();
    let _ = writeln!(out, "{} vs {}: {label}", spec.name, spec.axis.name());
    let _ = write!(out, "{:>14}", "method");
    for v in spec.axis.values() {
        let _ = write!(out, " {:>10}", format!("{v:.4}"));
    }
    out.push('\n');
    for &m in &spec.methods {
        let _ = write!(out, "{:>14}", m.name());
        for r in reports.iter().filter(|r| r.method == m) {
            let value = pick(r);
            let cell = match spec.plot {
                PlotKind::SecrecyRate => format!("{value:.4}"),
                PlotKind::Ber => format!("{value:.3e}"),
            };
            let _ = write!(out, " {cell:>10}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in Preset::ALL {
            let spec = p.spec(ScenarioConfig::default(), "out");
            spec.validate().unwrap();
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        let fig3 = Preset::Fig3.spec(ScenarioConfig::default(), "out");
        assert!((fig3.scenario.snr_db() - 15.0).abs() < 1e-9);
        assert_eq!(fig3.axis.values().len(), 9);
        assert!((fig3.axis.values()[8] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn spec_rejects_bad_axes() {
        let mut spec = Preset::Fig2.spec(ScenarioConfig::default(), "out");
        spec.axis = SweepAxis::SnrDb(vec![0.0, 0.0]);
        assert!(spec.validate().is_err());
        spec.axis = SweepAxis::SnrDb(vec![]);
        assert!(spec.validate().is_err());
        spec.axis = SweepAxis::SnrDb(vec![1.0]);
        spec.methods.clear();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn summary_has_one_row_per_method() {
        let mut spec = Preset::Fig2.spec(ScenarioConfig::default(), "out");
        spec.axis = SweepAxis::SnrDb(vec![0.0, 10.0]);
        let reports = compute(&spec, 1).unwrap();
        let table = summary_table(&spec, &reports);
        assert_eq!(table.lines().count(), 2 + Method::ALL.len());
    }
}
