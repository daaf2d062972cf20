//! Small reference runs stored under `goldens/` and compared byte for byte.

use std::path::{Path, PathBuf};

use crate::config::parse_config;
use crate::error::{HarnessError, Result};
use crate::experiment::run_experiment;

/// `(file stem, config)` of every golden run.
pub const GOLDEN_CASES: [(&str, &str); 5] = [
    ("eigen_bn", "experiment = \"eigen_bn\"\n"),
    ("problem1_small", "experiment = \"problem1\"\nn = 24\ndt = [0.2, 0.1]\n"),
    (
        "problem2_small",
        "experiment = \"problem2\"\nn = 64\ndt = [0.2, 0.1]\nt_end = 1.0\nintegrator = \"gamma_third_order\"\n",
    ),
    ("nonsmooth_tent_small", "experiment = \"nonsmooth_tent\"\nn = [8, 16, 32]\n"),
    ("riemann_a_small", "experiment = \"riemann_a\"\nn = 48\ndt = 0.5\nt_end = 5.0\nsnapshots = [0.0, 5.0]\n"),
];

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

pub fn render(config: &str) -> Result<String> {
    Ok(run_experiment(&parse_config(config)?)?.to_csv())
}

/// Regenerates every golden file in `dir`.
pub fn write_goldens(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, config) in GOLDEN_CASES {
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, render(config)?).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Names of the golden runs whose output differs from the stored file.
pub fn check_goldens(dir: &Path) -> Result<Vec<String>> {
    let mut mismatched = Vec::new();
    for (name, config) in GOLDEN_CASES {
        let path = dir.join(format!("{name}.csv"));
        let stored = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        if stored != render(config)? {
            mismatched.push(name.to_string());
        }
    }
    Ok(mismatched)
}
