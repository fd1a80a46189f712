//! Layering of `--config` JSON under command-line flags.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::parser::ValueSource;
use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Reads a config file and returns the object that applies to `section`: the
/// member named `section` when it is an object, else the whole file.
pub fn load_section(path: &Path, section: &str) -> Result<Map<String, Value>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    let Value::Object(mut root) = value else {
        bail!("config {} must hold a JSON object", path.display());
    };
    match root.remove(section) {
        Some(Value::Object(inner)) => Ok(inner),
        Some(other) => {
            root.insert(section.to_string(), other);
            Ok(root)
        }
        None => Ok(root),
    }
}

/// Overlays `config` on the parsed arguments wherever the flag was not given
/// explicitly on the command line.
pub fn resolve<P>(parsed: &P, matches: &ArgMatches, config: Option<&Map<String, Value>>) -> Result<P>
where
    P: Serialize + DeserializeOwned,
{
    let mut value = serde_json::to_value(parsed)?;
    let Some(config) = config else {
        return Ok(serde_json::from_value(value)?);
    };
    let Value::Object(fields) = &mut value else {
        bail!("arguments did not serialize to an object");
    };
    for (key, v) in config {
        if !fields.contains_key(key) {
            bail!("unknown config key `{key}`");
        }
        if matches.value_source(key) != Some(ValueSource::CommandLine) {
            fields.insert(key.clone(), v.clone());
        }
    }
    serde_json::from_value(value).context("config value has the wrong type")
}

/// Single-line JSON rendering of the effective parameters.
pub fn echo<P: Serialize>(params: &P) -> String {
    format!("config={}", serde_json::to_string(params).unwrap_or_default())
}
