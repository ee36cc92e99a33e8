//! Flat `key=value` configuration merged with command-line flags.

use crate::error::{CliError, CliResult};
use palab_core::ModelParams;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PALAB_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Flag,
    File { path: String, line: usize },
    Env,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Flag => write!(f, "command line"),
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Env => write!(f, "environment"),
            Origin::Default => write!(f, "default"),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: Origin,
}

/// Resolved settings for one command. Every value read is remembered so the
/// full effective configuration can be echoed into output headers.
#[derive(Debug, Default)]
pub struct Settings {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeMap<String, String>>,
}

/// Parses a config file body. Blank lines and lines starting with `#` are
/// skipped; every other line must be `key = value` with a key from `known`.
pub fn parse_config(text: &str, path: &str, known: &[&str]) -> CliResult<Vec<(String, String, usize)>> {
    let mut out: Vec<(String, String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(CliError::Config(format!("{path}:{line}: expected key=value, got {body:?}")));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Config(format!("{path}:{line}: empty key")));
        }
        if !known.contains(&k) {
            return Err(CliError::Config(format!("{path}:{line}: unknown key {k:?}")));
        }
        if let Some(prev) = out.iter().find(|e| e.0 == k) {
            return Err(CliError::Config(format!("{path}:{line}: key {k:?} already set on line {}", prev.2)));
        }
        out.push((k.to_string(), v.to_string(), line));
    }
    Ok(out)
}

/// Parses a count that may be written in scientific notation (`1e6`).
pub fn parse_count(s: &str) -> Result<usize, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 2f64.powi(53) {
        Ok(f as usize)
    } else {
        Err(format!("not a nonnegative integer: {s:?}"))
    }
}

pub fn parse_count_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(parse_count).collect()
}

pub fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("not a number: {x:?}"))).collect()
}

pub fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("not a boolean: {other:?}")),
    }
}

impl Settings {
    /// Layers: file entries, then environment, then flags (flags win).
    pub fn new(file: Vec<(String, String, usize)>, file_path: &str, flags: Vec<(String, String)>) -> Self {
        let mut entries = BTreeMap::new();
        for (k, v, line) in file {
            entries.insert(k, Entry { value: v, origin: Origin::File { path: file_path.to_string(), line } });
        }
        if !entries.contains_key("out-dir") {
            if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
                entries.insert("out-dir".into(), Entry { value: dir, origin: Origin::Env });
            }
        }
        for (k, v) in flags {
            entries.insert(k, Entry { value: v, origin: Origin::Flag });
        }
        Self { entries, used: RefCell::new(BTreeMap::new()) }
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Self::new(Vec::new(), "", pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }

    pub fn load(path: &Path, known: &[&str], flags: Vec<(String, String)>) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let shown = path.display().to_string();
        let file = parse_config(&text, &shown, known)?;
        Ok(Self::new(file, &shown, flags))
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    /// Reads `key` with a custom parser; `None` when unset.
    pub fn get_with<T, F>(&self, key: &str, parse: F) -> CliResult<Option<T>>
    where
        F: Fn(&str) -> Result<T, String>,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => {
                let v = parse(&e.value).map_err(|msg| CliError::Config(format!("{}: {key}: {msg}", e.origin)))?;
                self.used.borrow_mut().insert(key.to_string(), e.value.clone());
                Ok(Some(v))
            }
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get_with(key, |s| s.trim().parse::<T>().map_err(|e| format!("invalid value {s:?}: {e}")))
    }

    /// Reads `key`, recording `default` in the echo when unset.
    pub fn get_or<T: FromStr + fmt::Display>(&self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        match self.get(key)? {
            Some(v) => Ok(v),
            None => {
                self.used.borrow_mut().insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn count_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.get_with(key, parse_count)? {
            Some(v) => Ok(v),
            None => {
                self.used.borrow_mut().insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn count_list_or(&self, key: &str, default: &[usize]) -> CliResult<Vec<usize>> {
        match self.get_with(key, parse_count_list)? {
            Some(v) => Ok(v),
            None => {
                let shown: Vec<String> = default.iter().map(|x| x.to_string()).collect();
                self.used.borrow_mut().insert(key.to_string(), shown.join(","));
                Ok(default.to_vec())
            }
        }
    }

    pub fn float_list_or(&self, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        match self.get_with(key, parse_float_list)? {
            Some(v) => Ok(v),
            None => {
                let shown: Vec<String> = default.iter().map(|x| x.to_string()).collect();
                self.used.borrow_mut().insert(key.to_string(), shown.join(","));
                Ok(default.to_vec())
            }
        }
    }

    pub fn flag(&self, key: &str) -> CliResult<bool> {
        Ok(self.get_with(key, parse_bool)?.unwrap_or_else(|| {
            self.used.borrow_mut().insert(key.to_string(), "false".into());
            false
        }))
    }

    /// Reads `key` without echoing it. For settings that cannot change
    /// results, such as the output directory or the worker count.
    pub fn get_silent<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        let v = self.get(key)?;
        self.used.borrow_mut().remove(key);
        Ok(v)
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        let a = self.get_or("alpha", 0.5)?;
        let di = self.get_or("delta-in", 1.0)?;
        let dout = self.get_or("delta-out", 1.0)?;
        ModelParams::new(a, di, dout).map_err(|e| {
            let origins: Vec<String> =
                ["alpha", "delta-in", "delta-out"].iter().map(|k| format!("{k} from {}", self.origin(k))).collect();
            CliError::Config(format!("model parameters ({}): {e}", origins.join(", ")))
        })
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.get_or("seed", 1u64)
    }

    /// Effective configuration in key order, for output headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.used.borrow().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn origin(&self, key: &str) -> Origin {
        self.raw(key).map(|e| e.origin.clone()).unwrap_or(Origin::Default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KNOWN: &[&str] = &["alpha", "n", "seed"];

    #[test]
    fn config_lines_and_errors() {
        let ok = parse_config("# comment\n\nalpha = 0.3\n n=1e4 \n", "c.txt", KNOWN).unwrap();
        assert_eq!(ok, vec![("alpha".into(), "0.3".into(), 3), ("n".into(), "1e4".into(), 4)]);
        let e = parse_config("alpha=0.3\nbogus line\n", "c.txt", KNOWN).unwrap_err();
        assert!(e.to_string().contains("c.txt:2"), "{e}");
        let e = parse_config("alpha=0.3\nwidth=4\n", "c.txt", KNOWN).unwrap_err();
        assert!(e.to_string().contains("c.txt:2") && e.to_string().contains("width"));
        let e = parse_config("n=1\nn=2\n", "c.txt", KNOWN).unwrap_err();
        assert!(e.to_string().contains("line 1"));
    }

    #[test]
    fn flags_override_file_and_values_are_located() {
        let file = parse_config("alpha=0.3\nn=oops\n", "cfg", KNOWN).unwrap();
        let s = Settings::new(file, "cfg", vec![("alpha".into(), "0.7".into())]);
        assert_eq!(s.get_or("alpha", 0.5).unwrap(), 0.7);
        assert_eq!(s.origin("alpha"), Origin::Flag);
        let e = s.count_or("n", 10).unwrap_err();
        assert!(e.to_string().contains("cfg:2"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn counts_and_lists() {
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("250").unwrap(), 250);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert_eq!(parse_count_list("1e4,1e5, 1e6").unwrap(), vec![10_000, 100_000, 1_000_000]);
        assert_eq!(parse_float_list("0.25,2").unwrap(), vec![0.25, 2.0]);
    }

    #[test]
    fn echo_records_defaults() {
        let s = Settings::from_pairs(&[("n", "100")]);
        s.count_or("n", 5).unwrap();
        s.seed().unwrap();
        assert_eq!(s.echo(), vec![("n".into(), "100".into()), ("seed".into(), "1".into())]);
    }
}
