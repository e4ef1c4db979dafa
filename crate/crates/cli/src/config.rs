//! `key = value` config files and flag resolution.
//!
//! A flag given on the command line wins over the file, which wins over the
//! built-in default. Every resolved value is recorded so the run manifest can
//! reproduce the exact configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
    snapshot: BTreeMap<String, String>,
}

impl Resolver {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file = parse(&text).with_context(|| format!("in config {}", path.display()))?;
        Ok(Self {
            file,
            ..Self::default()
        })
    }

    /// Resolves `key`, parsing a file value with `FromStr`.
    pub fn get<T>(&mut self, key: &str, cli: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.get_with(key, cli, default, |s| {
            s.parse::<T>().map_err(|e| e.to_string())
        })
    }

    pub fn get_with<T: Display>(
        &mut self,
        key: &str,
        cli: Option<T>,
        default: T,
        parse: impl FnOnce(&str) -> Result<T, String>,
    ) -> Result<T> {
        self.used.insert(key.to_string());
        let value = match (cli, self.file.get(key)) {
            (Some(v), _) => v,
            (None, Some(raw)) => match parse(raw) {
                Ok(v) => v,
                Err(e) => bail!("config key {key}: cannot parse {raw:?}: {e}"),
            },
            (None, None) => default,
        };
        self.record(key, &value);
        Ok(value)
    }

    pub fn record(&mut self, key: &str, value: &impl Display) {
        self.snapshot.insert(key.to_string(), value.to_string());
    }

    /// Fails on config keys no flag asked for, then hands over the snapshot.
    pub fn finish(self) -> Result<BTreeMap<String, String>> {
        let unknown: Vec<&str> = self
            .file
            .keys()
            .filter(|k| !self.used.contains(*k))
            .map(String::as_str)
            .collect();
        if !unknown.is_empty() {
            bail!("unknown config keys: {}", unknown.join(", "));
        }
        Ok(self.snapshot)
    }
}

/// Keys are normalised to snake case, so `max-evals` and `max_evals` agree.
fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value", i + 1);
        };
        let key = k.trim().replace('-', "_");
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            bail!("line {}: duplicate key {key}", i + 1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(text: &str) -> Resolver {
        Resolver {
            file: parse(text).unwrap(),
            ..Resolver::default()
        }
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let mut r = with("# budget\npop = 30\nmax-evals=900\n");
        assert_eq!(r.get("pop", Some(5usize), 20).unwrap(), 5);
        assert_eq!(r.get("max_evals", None, 500usize).unwrap(), 900);
        assert_eq!(r.get("gens", None, 20usize).unwrap(), 20);
        let snap = r.finish().unwrap();
        assert_eq!(snap["pop"], "5");
        assert_eq!(snap["max_evals"], "900");
        assert_eq!(snap["gens"], "20");
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut r = with("pop = 3\ntypo = 1\n");
        r.get("pop", None, 1usize).unwrap();
        assert!(r.finish().unwrap_err().to_string().contains("typo"));

        let mut r = with("pop = many\n");
        assert!(r.get("pop", None, 1usize).is_err());

        assert!(parse("pop 3").is_err());
        assert!(parse("a = 1\na = 2").is_err());
    }
}
