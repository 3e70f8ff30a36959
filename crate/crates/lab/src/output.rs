//! Output directory handling and number formatting.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::LabError;

/// Where a command writes, and whether headers carry a timestamp.
#[derive(Clone, Debug)]
pub struct Output {
    pub dir: PathBuf,
    pub timestamp: bool,
}

impl Output {
    pub fn new(dir: impl Into<PathBuf>, timestamp: bool) -> Self {
        Output { dir: dir.into(), timestamp }
    }

    pub fn write(&self, name: &str, body: &str) -> Result<PathBuf, LabError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        fs::write(&path, body)?;
        Ok(path)
    }

    /// First line of a report or CSV: the command name and, unless
    /// disabled, the generation time.
    pub fn header(&self, command: &str) -> String {
        if self.timestamp {
            let t = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            format!("# willmore-lab {command} (generated at unix time {t})\n")
        } else {
            format!("# willmore-lab {command}\n")
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

/// 17 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}
