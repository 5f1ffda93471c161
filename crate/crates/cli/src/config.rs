use std::path::Path;

use hyperbound::census::CensusConfig;
use hyperbound::geosolve::SolverConfig;
use hyperbound::kojima::CanonizeConfig;
use hyperbound::tricomb::FilterSet;
use serde::Deserialize;

/// Contents of the TOML config file. Every section is optional.
///
/// ```toml
/// [solver]
/// tolerance = 1e-10
/// seed = 3
///
/// [canonize]
/// moves_per_tet = 20
///
/// [filters]
/// drop_valence_two = false
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub solver: SolverConfig,
    pub canonize: CanonizeSection,
    pub filters: FilterSet,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CanonizeSection {
    pub epsilon_tilt: f64,
    pub moves_per_tet: usize,
}

impl Default for CanonizeSection {
    fn default() -> Self {
        let c = CanonizeConfig::default();
        Self {
            epsilon_tilt: c.epsilon_tilt,
            moves_per_tet: c.moves_per_tet,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {}", path.display(), e.message()))
    }

    pub fn canonize(&self) -> CanonizeConfig {
        CanonizeConfig {
            epsilon_tilt: self.canonize.epsilon_tilt,
            moves_per_tet: self.canonize.moves_per_tet,
            solver: self.solver.clone(),
        }
    }

    pub fn census(&self) -> CensusConfig {
        CensusConfig {
            canonize: self.canonize(),
            filters: self.filters.clone(),
            ..CensusConfig::default()
        }
    }
}
