//! Artifact writing: atomic file creation and output-directory resolution.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Environment variable overriding the output directory (default `runs`).
pub const OUT_DIR_ENV: &str = "TDHO_LAB_OUT";

pub fn output_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"))
}

/// Write-then-rename so concurrent runs never observe partial files.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let parent = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(parent)?;
    let mut tmp = path.to_path_buf();
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "artifact".to_string());
    tmp.set_file_name(format!(".{file_name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
