//! Run manifests: a flow configuration plus the initial body and its seed.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use quermass_core::diagnostics::AnalysisOptions;
use quermass_core::flowcore::FlowConfig;
use quermass_core::hsurface::shapes::build_shape;
use quermass_core::hsurface::snapshot::read_snapshot;
use quermass_core::{Error, Result, SurfaceState};

/// Source of the initial body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default)]
    pub shape: Option<String>,
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: FlowConfig,
    pub initial: InitialSpec,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub analysis: AnalysisOptions,
    /// Directory the manifest was read from; relative snapshot paths resolve against it.
    pub base: PathBuf,
}

fn take<T: for<'de> Deserialize<'de>>(obj: &mut serde_json::Map<String, Value>, key: &str) -> Result<Option<T>> {
    match obj.remove(key) {
        None => Ok(None),
        Some(v) => serde_path_to_error::deserialize(v).map(Some).map_err(|e| {
            let inner = e.path().to_string();
            let path = if inner == "." { key.to_string() } else { format!("{key}.{inner}") };
            Error::config(path, e.into_inner().to_string())
        }),
    }
}

impl RunManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::config("", e.to_string()))?;
        let Value::Object(mut obj) = value else {
            return Err(Error::config("", "manifest must be a JSON object"));
        };
        let initial: InitialSpec = take(&mut obj, "initial")?
            .ok_or_else(|| Error::config("initial", "missing initial body (shape or snapshot)"))?;
        match (&initial.shape, &initial.snapshot) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => return Err(Error::config("initial", "give exactly one of `shape` and `snapshot`")),
        }
        let seed = take(&mut obj, "seed")?.unwrap_or(0);
        let output = take(&mut obj, "output")?;
        let analysis = take(&mut obj, "analysis")?.unwrap_or_default();
        let config = FlowConfig::from_value(Value::Object(obj))?;
        Ok(Self {
            config,
            initial,
            seed,
            output,
            analysis,
            base: base.to_path_buf(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Builds the initial surface on the configured grid.
    pub fn initial_state(&self) -> Result<SurfaceState> {
        if let Some(shape) = &self.initial.shape {
            let grid = self.config.make_grid()?;
            return Ok(build_shape(shape, grid, self.seed)?.into());
        }
        let path = self.base.join(self.initial.snapshot.as_ref().expect("validated"));
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let snap = read_snapshot(&text).map_err(|e| Error::config("initial.snapshot", e.to_string()))?;
        let g = snap.state.grid();
        if g.n != self.config.n
            || g.mode != self.config.grid_mode()
            || self.config.grid.is_some_and(|c| c != g.len())
        {
            return Err(Error::config(
                "initial.snapshot",
                format!("snapshot grid (n = {}, {} nodes, {}) does not match the configuration", g.n, g.len(), g.mode.as_str()),
            ));
        }
        Ok(snap.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"n": 1, "constraint": {"kind": "quermass", "k": 1},
        "speed": {"name": "Ek_root(1)", "alpha": 1.0}, "t_end": 1.0"#;

    fn parse(extra: &str) -> Result<RunManifest> {
        RunManifest::parse(&format!("{BASE}{extra}}}"), Path::new("."))
    }

    #[test]
    fn shape_manifest() {
        let m = parse(r#", "initial": {"shape": "circle(1)"}, "seed": 7"#).unwrap();
        assert_eq!(m.seed, 7);
        assert_eq!(m.initial_state().unwrap().grid().len(), 256);
    }

    #[test]
    fn both_sources_rejected() {
        let err = parse(r#", "initial": {"shape": "circle(1)", "snapshot": "a.txt"}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "initial"));
    }

    #[test]
    fn nested_paths_are_prefixed() {
        let err = parse(r#", "initial": {"shape": 3}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "initial.shape"), "{err:?}");
    }

    #[test]
    fn unknown_flow_fields_rejected() {
        let err = parse(r#", "initial": {"shape": "circle(1)"}, "tend": 2"#).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }
}
