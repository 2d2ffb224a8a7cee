//! Writing artifacts to files or stdout.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::Failure;

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Pretty JSON document `{"config": .., "result": ..}` with a trailing newline.
pub fn json_document<T: Serialize>(config: &Value, result: &T) -> Result<String, Failure> {
    let doc = serde_json::json!({ "config": config, "result": result });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Run(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `dir/name`, creating `dir`.
pub fn in_dir(dir: &Path, name: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}

/// `<path>.config.json`
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}
