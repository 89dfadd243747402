pub mod evaluate;
pub mod generate;
pub mod oracle;
pub mod rank;
pub mod score;
pub mod solve;

use std::path::{Path, PathBuf};

use opswtw::instance::read_instance;
use opswtw::{Error, Instance, Result};

/// Loads one instance file, or every `*.txt` in a directory in sorted name
/// order. Returns `(name, instance)` pairs.
pub fn load_instances(path: &Path) -> Result<Vec<(PathBuf, Instance)>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no .txt instance files in {path:?}"
            )));
        }
        files
            .into_iter()
            .map(|p| read_instance(&p).map(|inst| (p, inst)))
            .collect()
    } else {
        Ok(vec![(path.to_path_buf(), read_instance(path)?)])
    }
}

/// Renders a tour as one submission line.
pub fn tour_line(tour: &[usize]) -> String {
    tour.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
