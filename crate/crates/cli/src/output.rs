//! Crash-safe result files.
//!
//! Files are staged as hidden temporaries next to their destination and only
//! renamed into place by [`Staged::commit`]. Dropping an uncommitted stage
//! removes the temporaries, so a failed command leaves no partial results.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub struct Staged {
    files: Vec<(PathBuf, PathBuf)>,
}

impl Staged {
    pub fn new() -> Self {
        Staged { files: Vec::new() }
    }

    pub fn add(&mut self, path: impl AsRef<Path>, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = path.as_ref().to_path_buf();
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let name = path.file_name().ok_or_else(|| CliError::config(format!("bad output path {}", path.display())))?;
        let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
        self.files.push((tmp.clone(), path));
        fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))
    }

    pub fn commit(mut self) -> Result<()> {
        for (tmp, dest) in std::mem::take(&mut self.files) {
            fs::rename(&tmp, &dest).map_err(|e| CliError::io(&dest, e))?;
        }
        Ok(())
    }
}

impl Default for Staged {
    fn default() -> Self {
        Self::new()
    }
}

impl Drop for Staged {
    fn drop(&mut self) {
        for (tmp, _) in &self.files {
            let _ = fs::remove_file(tmp);
        }
    }
}
