//! Run configuration: TOML file, then command-line overrides.
//!
//! ```toml
//! seed = 7
//! samples = 100000
//! out = "polydisk-out"
//! format = "text"          # text | json | csv
//!
//! [tolerance]
//! symplectic = 1e-10
//!
//! [shapes]                 # shape literals, e.g. "polydisk(0.1, 1, 1)", "ball4(2)", "cyl(1)"
//! domain = "ball4(1)"
//! target = "sigma(1) * disk(10)"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "POLYDISK_OUT";
pub const DEFAULT_OUT: &str = "polydisk-out";
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub symplectic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub shapes: BTreeMap<String, String>,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_format() -> Format {
    Format::Text
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            seed: 0,
            samples: DEFAULT_SAMPLES,
            out: None,
            format: Format::Text,
            tolerance: Tolerances::default(),
            shapes: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Flag, then config file, then `POLYDISK_OUT`, then the built-in default.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    pub fn shape(&self, key: &str) -> Result<Option<polyembed::ShapeDescriptor>, CliError> {
        self.shapes
            .get(key)
            .map(|s| polyembed::parse_shape(s).map_err(|e| CliError::Usage(format!("shape `{key}`: {e}"))))
            .transpose()
    }

    /// `# config ...` lines that head every text report.
    pub fn header(&self) -> String {
        let mut out = format!(
            "# config command={} seed={} samples={} out={} format={}\n",
            self.command,
            self.seed,
            self.samples,
            self.out_dir().display(),
            serde_json::to_value(self.format).expect("enum").as_str().unwrap_or("text"),
        );
        if let Some(t) = self.tolerance.symplectic {
            out.push_str(&format!("# config tolerance.symplectic={t}\n"));
        }
        for (k, v) in &self.shapes {
            out.push_str(&format!("# config shapes.{k}={v}\n"));
        }
        out
    }
}
