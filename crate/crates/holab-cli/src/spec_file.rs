//! Immersion specification files.
//!
//! A spec file is a JSON document declaring the model and either a catalog
//! name or a table of sampled jets on a rectangular grid:
//!
//! ```json
//! { "model": { "c": 4, "n": 2 }, "catalog": "clifford-torus-cp2" }
//! ```
//!
//! ```json
//! {
//!   "model": { "c": 0, "n": 2 },
//!   "grid": {
//!     "axes": [[0.0, 0.1, 0.2]],
//!     "values": [[...], [...], [...]],
//!     "d1": [[[...], [...], [...]]],
//!     "d2": [[[...], [...], [...]]]
//!   }
//! }
//! ```
//!
//! Grid charts map into the flat model directly, or give total-space
//! representatives for the curved models (the norm constraint is checked
//! when frames are built). Parse errors name the offending field.

use serde::Deserialize;

use holab::immersion::Chart;
use holab::sampled::GridData;
use holab::{AmbientSpace, Immersion};

#[derive(Deserialize)]
pub struct SpecFile {
    pub model: ModelSpec,
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Deserialize)]
pub struct ModelSpec {
    pub c: f64,
    pub n: usize,
}

#[derive(Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub d1: Vec<Vec<Vec<f64>>>,
    pub d2: Vec<Vec<Vec<f64>>>,
}

pub struct LoadedSpec {
    pub immersion: Immersion,
    pub label: String,
    /// Catalog entry when the spec referenced one (checks need its chain
    /// and candidate data).
    pub entry: Option<holab::catalog::CatalogEntry>,
}

pub fn load(path: &str) -> Result<LoadedSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read spec file `{path}`: {e}"))?;
    let spec: SpecFile = serde_json::from_str(&text)
        .map_err(|e| format!("spec file `{path}`: {e}"))?;
    let space = AmbientSpace::from_c(spec.model.c, spec.model.n)
        .map_err(|e| format!("spec file `{path}`, field model.c: {e}"))?;
    match (spec.catalog, spec.grid) {
        (Some(name), None) => {
            let entry = holab::catalog::get(&name)
                .map_err(|e| format!("spec file `{path}`, field catalog: {e}"))?;
            if entry.space != space {
                return Err(format!(
                    "spec file `{path}`: model (c = {}, n = {}) does not match catalog entry `{}`",
                    spec.model.c, spec.model.n, name
                ));
            }
            Ok(LoadedSpec { immersion: entry.immersion(), label: name, entry: Some(entry) })
        }
        (None, Some(grid)) => {
            let chart = if space.is_curved() { Chart::TotalSpace } else { Chart::Flat };
            let data = GridData {
                space,
                chart,
                axes: grid.axes,
                values: grid.values,
                d1: grid.d1,
                d2: grid.d2,
            };
            let immersion = data
                .immersion()
                .map_err(|e| format!("spec file `{path}`, field grid: {e}"))?;
            Ok(LoadedSpec { immersion, label: format!("grid:{path}"), entry: None })
        }
        (Some(_), Some(_)) => {
            Err(format!("spec file `{path}`: declare either `catalog` or `grid`, not both"))
        }
        (None, None) => Err(format!("spec file `{path}`: missing `catalog` or `grid`")),
    }
}
