use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::Failure;

pub fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
        return Ok(text);
    }
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

/// `stem` with `suffix` appended to its file name.
pub fn sibling(stem: &Path, suffix: &str) -> PathBuf {
    let mut name = stem.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    stem.with_file_name(name)
}

/// Writes every file or none: existing targets are refused unless `force`.
pub fn write_all(files: &[(PathBuf, String)], force: bool) -> Result<(), Failure> {
    if !force {
        if let Some((path, _)) = files.iter().find(|(p, _)| p.exists()) {
            return Err(Failure::Io(anyhow::anyhow!("{} exists; pass --force to overwrite", path.display())));
        }
    }
    for (path, text) in files {
        write_file(path, text)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    if path.is_dir() {
        bail!("{} is a directory", path.display());
    }
    let mut file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    file.write_all(text.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str, force: bool) -> Result<(), Failure> {
    match path {
        Some(p) => write_all(&[(p.to_path_buf(), text.to_string())], force),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
