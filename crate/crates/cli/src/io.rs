//! File loading with usage-grade errors and atomic writes.

use crate::Failure;
use mvote_core::election::Election;
use mvote_core::metric::MetricSpace;
use std::fs;
use std::path::Path;

pub fn load_election(path: &Path) -> Result<Election, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Election::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn load_metric(path: &Path) -> Result<MetricSpace, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    MetricSpace::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Write-temp-then-rename so interrupted runs never leave partial files.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), Failure> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().unwrap_or_default().to_string_lossy()
    ));
    fs::write(&tmp, content)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Failure::usage(format!("cannot rename to {}: {e}", path.display())))
}
