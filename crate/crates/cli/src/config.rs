//! Key-value run configuration: `key = value` lines with `#` comments.
//! Command-line flags override config values, which override defaults; the
//! fully resolved configuration is written as a `#`-comment header into
//! every output so a run can be reproduced from its artifacts alone.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use opswtw::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KvConfig {
    values: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn load(path: &Path) -> Result<KvConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {path:?}: {e}")))?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<KvConfig> {
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                file: name.to_string(),
                line: idx + 1,
                msg: format!("expected `key = value`, found `{line}`"),
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(KvConfig { values })
    }

    /// Typed lookup; absent keys are `Ok(None)`.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config key `{key}` has invalid value `{raw}`"))
            }),
        }
    }

    /// Flag value, else config value, else default.
    pub fn resolve<T: FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.get::<T>(key)?.unwrap_or(default),
        })
    }
}

/// Builder for the resolved-configuration header.
#[derive(Debug, Clone)]
pub struct RunHeader {
    command: String,
    entries: Vec<(String, String)>,
}

impl RunHeader {
    pub fn new(command: &str) -> Self {
        RunHeader {
            command: command.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// `#`-comment block carrying the full resolved configuration.
    pub fn render(&self) -> String {
        let mut out = format!("# opswtw {}\n", self.command);
        for (key, value) in &self.entries {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out
    }
}

/// Writes `header + body` to `path`.
pub fn write_output(path: &Path, header: &RunHeader, body: &str) -> Result<()> {
    let mut text = header.render();
    text.push_str(body);
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let cfg = KvConfig::parse("t", "# comment\nmu = 12\n\nlambda=30\n").unwrap();
        assert_eq!(cfg.get::<usize>("mu").unwrap(), Some(12));
        assert_eq!(cfg.resolve(None, "lambda", 7usize).unwrap(), 30);
        assert_eq!(cfg.resolve(Some(5usize), "lambda", 7).unwrap(), 5);
        assert_eq!(cfg.resolve(None, "absent", 7usize).unwrap(), 7);
    }

    #[test]
    fn rejects_malformed_lines_and_values() {
        assert!(KvConfig::parse("t", "just words\n").is_err());
        let cfg = KvConfig::parse("t", "mu = banana\n").unwrap();
        assert!(cfg.get::<usize>("mu").is_err());
    }

    #[test]
    fn header_renders_comments() {
        let mut h = RunHeader::new("solve");
        h.push("seed", 7);
        h.push("solver", "ea");
        assert_eq!(h.render(), "# opswtw solve\n# seed = 7\n# solver = ea\n");
    }
}
