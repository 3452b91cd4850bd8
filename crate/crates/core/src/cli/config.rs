//! Run configuration, output sinks and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelContext;
use crate::output::{canonical_json, write_csv, write_json, Plot};
use crate::params::{extract_hierarchy, nondimensionalise, BiophysicalParams, EpsilonParams, SmolenParams};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const OUT_DIR_ENV: &str = "AMO_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "amo-out";

/// One JSON document per run. Command-line flags override these fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub biophysical: BiophysicalParams,
    #[serde(default)]
    pub smolen: SmolenParams,
    /// Replace the extracted ε while keeping the O(1) prefactors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Usage(format!("{} (at `{}`)", e.inner(), e.path())))?;
        cfg.biophysical.validate()?;
        cfg.smolen.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Hierarchy of the biophysical table, with ε replaced if requested.
    pub fn epsilon_params(&self) -> Result<EpsilonParams> {
        let e = extract_hierarchy(&nondimensionalise(&self.biophysical)?)?;
        let e = match self.epsilon {
            Some(x) => e.with_epsilon(x),
            None => e,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn context(&self) -> Result<ModelContext> {
        let dimensionless = nondimensionalise(&self.biophysical)?;
        let eps = self.epsilon_params()?;
        Ok(ModelContext {
            biophysical: self.biophysical,
            smolen: self.smolen,
            dimensionless: if self.epsilon.is_some() { eps.to_dimensionless() } else { dimensionless },
            eps,
        })
    }
}

/// Collects every file a command writes.
pub struct Sink {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

impl Sink {
    pub fn new(dir: PathBuf) -> Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let p = self.path(name);
        write_csv(p, header, rows)
    }

    /// CSV with a leading text column.
    pub fn labelled_csv(&mut self, name: &str, header: &[&str], rows: &[(String, Vec<f64>)]) -> Result<()> {
        let p = self.path(name);
        let mut w = csv::Writer::from_path(p).map_err(|e| Error::Io(e.into()))?;
        w.write_record(header).map_err(|e| Error::Io(e.into()))?;
        for (label, vals) in rows {
            let mut rec = vec![label.clone()];
            rec.extend(vals.iter().map(|v| format!("{v:?}")));
            w.write_record(&rec).map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let p = self.path(name);
        write_json(p, value)
    }

    pub fn svg(&mut self, name: &str, plot: &Plot) -> Result<()> {
        let p = self.path(name);
        plot.write(p)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let p = self.path(name);
        fs::write(p, body)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: serde_json::Value,
    pub config_hash: String,
    pub config: RunConfig,
    pub parameters: EpsilonParams,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub version: String,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join(MANIFEST_FILE), canonical_json(self)?)?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let p = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&p)
            .map_err(|e| Error::Usage(format!("no manifest at {}: {e}", p.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Output root: explicit flag, then `AMO_OUT_DIR`, then `./amo-out`.
pub fn output_root(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_field_is_named() {
        let mut v = serde_json::to_value(RunConfig::default()).unwrap();
        v["biophysical"].as_object_mut().unwrap().remove("kappa5");
        let err = RunConfig::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
        assert!(err.to_string().contains("kappa5"), "{err}");
    }

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn epsilon_override_keeps_prefactors() {
        let cfg = RunConfig {
            epsilon: Some(0.1),
            ..Default::default()
        };
        let e = cfg.epsilon_params().unwrap();
        assert_eq!(e.epsilon, 0.1);
        assert_eq!(e.gamma, EpsilonParams::default().gamma);
        let got = cfg.context().unwrap().dimensionless;
        for ((name, a), (_, b)) in got.fields().iter().zip(e.to_dimensionless().fields()) {
            assert!((a - b).abs() <= 1e-14 * b.abs(), "{name}: {a} vs {b}");
        }
    }
}
