//! Monte Carlo experiment grids with a per-cell result cache.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use heterour_core::config::PerStat;
use heterour_core::dgp::ErrorPreset;
use heterour_core::{
    mc_size_power, BandwidthChoice, BlockChoice, DeterministicKind, DeterministicSpec, DgpSpec,
    Innovation, KernelSpec, StatChoice, TestConfig, VolCase, VolatilityMode,
};

use crate::{write_output, Failure};

pub const CSV_HEADER: &str = "vol_case,sigma1,innovation,T,c,stat,rate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatName {
    Lt,
    Tt,
    Mz,
}

impl StatName {
    fn label(self) -> &'static str {
        match self {
            StatName::Lt => "lt",
            StatName::Tt => "tt",
            StatName::Mz => "mz",
        }
    }

    fn pick(self, rates: &PerStat<f64>) -> Option<f64> {
        match self {
            StatName::Lt => rates.lt,
            StatName::Tt => rates.tt,
            StatName::Mz => rates.mz,
        }
    }
}

/// `"auto"` or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AutoOr<T> {
    Value(T),
    Keyword(AutoKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoKeyword {
    Auto,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestSection {
    pub deterministic: DeterministicKind,
    pub c_bar: Option<f64>,
    pub stats: Vec<StatName>,
    #[serde(alias = "B")]
    pub replications: usize,
    pub bandwidth: AutoOr<f64>,
    pub block: AutoOr<usize>,
    pub kernel: KernelSpec,
    pub volatility: VolatilityMode,
    pub lag_p: usize,
}

impl Default for TestSection {
    fn default() -> Self {
        Self {
            deterministic: DeterministicKind::None,
            c_bar: None,
            stats: vec![StatName::Lt, StatName::Tt],
            replications: 499,
            bandwidth: AutoOr::Keyword(AutoKeyword::Auto),
            block: AutoOr::Keyword(AutoKeyword::Auto),
            kernel: KernelSpec::Gaussian,
            volatility: VolatilityMode::Kernel,
            lag_p: 0,
        }
    }
}

impl TestSection {
    fn to_config(&self) -> TestConfig {
        let wants_mz = self.stats.contains(&StatName::Mz);
        let wants_lad = self.stats.iter().any(|s| *s != StatName::Mz);
        let stat = match (wants_lad, wants_mz) {
            (true, true) => StatChoice::All,
            (false, true) => StatChoice::Mz,
            _ => StatChoice::Lt,
        };
        TestConfig {
            deterministic: match self.c_bar {
                Some(c) => DeterministicSpec::with_c_bar(self.deterministic, c),
                None => DeterministicSpec::new(self.deterministic),
            },
            stat,
            replications: self.replications,
            alpha: 0.05,
            bandwidth: match self.bandwidth {
                AutoOr::Value(h) => BandwidthChoice::Fixed(h),
                AutoOr::Keyword(_) => BandwidthChoice::Auto,
            },
            block: match self.block {
                AutoOr::Value(b) => BlockChoice::Fixed(b),
                AutoOr::Keyword(_) => BlockChoice::Auto,
            },
            kernel: self.kernel,
            volatility: self.volatility,
            seed: 0,
            lag_p: self.lag_p,
        }
    }
}

/// Experiment grid: the cartesian product of the five list fields, with
/// `c` varying fastest.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default = "default_reps")]
    pub n_reps: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub master_seed: u64,
    pub vol_case: Vec<VolCase>,
    pub sigma1: Vec<f64>,
    pub innovation: Vec<Innovation>,
    #[serde(rename = "T")]
    pub t_len: Vec<usize>,
    pub c: Vec<f64>,
    #[serde(default = "one")]
    pub sigma0: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub preset: Option<ErrorPreset>,
    #[serde(default)]
    pub test: TestSection,
}

fn default_reps() -> usize {
    1000
}

fn default_alpha() -> f64 {
    0.05
}

fn one() -> f64 {
    1.0
}

impl ExperimentSpec {
    pub fn parse(text: &str, json: bool) -> Result<Self, String> {
        if json {
            serde_json::from_str(text).map_err(|e| e.to_string())
        } else {
            toml::from_str(text).map_err(|e| e.to_string())
        }
    }

    pub fn cells(&self) -> Vec<DgpSpec> {
        let mut out = Vec::new();
        for &vol_case in &self.vol_case {
            for &sigma1 in &self.sigma1 {
                for &innovation in &self.innovation {
                    for &t_len in &self.t_len {
                        for &c in &self.c {
                            let spec = DgpSpec {
                                c,
                                theta: self.theta,
                                phi: self.phi,
                                innovation,
                                vol_case,
                                sigma0: self.sigma0,
                                sigma1,
                                t_len,
                            };
                            out.push(match self.preset {
                                Some(p) => spec.with_preset(p),
                                None => spec,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Serialize)]
struct CacheKey<'a> {
    version: u32,
    spec: &'a DgpSpec,
    config: &'a TestConfig,
    n_reps: usize,
    alpha: f64,
    master_seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CachedCell {
    key: String,
    rejection_rate: PerStat<f64>,
}

fn cache_key(spec: &DgpSpec, config: &TestConfig, exp: &ExperimentSpec) -> String {
    let key = CacheKey {
        version: 1,
        spec,
        config,
        n_reps: exp.n_reps,
        alpha: exp.alpha,
        master_seed: exp.master_seed,
    };
    let bytes = serde_json::to_vec(&key).expect("cache key serializes");
    hex::encode(Sha256::digest(&bytes))
}

fn load_cached(path: &Path, key: &str) -> Option<PerStat<f64>> {
    let text = fs::read_to_string(path).ok()?;
    let cell: CachedCell = serde_json::from_str(&text).ok()?;
    (cell.key == key).then_some(cell.rejection_rate)
}

fn default_cache_dir(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".cache");
    out.with_file_name(name)
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

pub fn cmd_mc(spec_path: &Path, out: &Path, cache_dir: Option<&Path>, no_cache: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(spec_path)
        .map_err(|e| Failure::parse("Io", format!("{}: {e}", spec_path.display())))?;
    let is_json = spec_path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let exp = ExperimentSpec::parse(&text, is_json).map_err(|m| Failure::parse("InvalidSpec", m))?;
    if exp.n_reps == 0 {
        return Err(Failure::parse("InvalidSpec", "n_reps must be at least 1"));
    }
    if !(exp.alpha >= 0.0 && exp.alpha <= 1.0) {
        return Err(Failure::parse("InvalidSpec", format!("alpha {} outside [0, 1]", exp.alpha)));
    }
    if exp.test.stats.is_empty() {
        return Err(Failure::parse("InvalidSpec", "`test.stats` must name at least one statistic"));
    }

    let config = exp.test.to_config();
    config.validate().map_err(|e| Failure::parse(e.kind(), e.to_string()))?;
    let cells = exp.cells();
    for cell in &cells {
        cell.validate().map_err(|e| Failure::parse(e.kind(), e.to_string()))?;
    }

    let cache_dir = (!no_cache).then(|| cache_dir.map_or_else(|| default_cache_dir(out), Path::to_path_buf));
    if let Some(dir) = &cache_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::parse("Io", format!("{}: {e}", dir.display())))?;
    }

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (i, cell) in cells.iter().enumerate() {
        let key = cache_key(cell, &config, &exp);
        let cache_file = cache_dir.as_ref().map(|d| d.join(format!("{key}.json")));
        let label = format!(
            "cell {}/{} ({}, sigma1={}, {}, T={}, c={})",
            i + 1,
            cells.len(),
            cell.vol_case.label(),
            cell.sigma1,
            cell.innovation.label(),
            cell.t_len,
            cell.c
        );

        let rates = match cache_file.as_deref().and_then(|p| load_cached(p, &key)) {
            Some(r) => {
                eprintln!("{label}: cache hit");
                r
            }
            None => {
                let report = mc_size_power(cell, &config, exp.n_reps, exp.alpha, exp.master_seed)?;
                eprintln!("{label}: simulated {} replications", exp.n_reps);
                if let Some(p) = &cache_file {
                    let body = CachedCell {
                        key: key.clone(),
                        rejection_rate: report.rejection_rate,
                    };
                    let json = serde_json::to_vec_pretty(&body).expect("cache entry serializes");
                    fs::write(p, json).map_err(|e| Failure::parse("Io", format!("{}: {e}", p.display())))?;
                }
                report.rejection_rate
            }
        };

        for stat in &exp.test.stats {
            if let Some(rate) = stat.pick(&rates) {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    cell.vol_case.label(),
                    fmt_num(cell.sigma1),
                    cell.innovation.label(),
                    cell.t_len,
                    fmt_num(cell.c),
                    stat.label(),
                    fmt_num(rate)
                ));
            }
        }
    }
    write_output(Some(out), csv.as_bytes())
}
