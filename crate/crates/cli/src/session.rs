use std::path::Path;

use ppdual_core::io::{parse_catalog, parse_catalog_over, Catalog};
use ppdual_core::{DualityKind, FiniteModule, FiniteRing, Side};

use crate::{CliError, CliResult};

/// The suite definitions compiled into the binary.
pub const SHIPPED_SUITE: &str = include_str!("../data/suite.toml");

pub const BOUND_ENV: &str = "PPDUAL_BOUND";

/// Loaded objects and run settings.
#[derive(Clone, Debug)]
pub struct Session {
    pub catalog: Catalog,
    pub kind: DualityKind,
    pub bound: usize,
    pub timestamp: bool,
    pub suite_text: String,
}

#[derive(Clone, Debug)]
pub struct SuiteDefinition {
    pub rings: Vec<FiniteRing>,
    pub max_carrier: usize,
}

impl Session {
    /// A session holding the shipped definitions.
    pub fn new(bound: usize) -> CliResult<Self> {
        Ok(Session {
            catalog: parse_catalog(SHIPPED_SUITE)?,
            kind: DualityKind::Character,
            bound,
            timestamp: true,
            suite_text: SHIPPED_SUITE.to_string(),
        })
    }

    pub fn load_text(&mut self, text: &str) -> CliResult<Catalog> {
        let cat = parse_catalog_over(text, &self.catalog)?;
        for (name, v) in cat.validate_all() {
            if !v.is_pass() {
                return Err(CliError::Usage(format!("{name} is not valid: {v}")));
            }
        }
        self.catalog.merge(cat.clone())?;
        Ok(cat)
    }

    pub fn load_file(&mut self, path: &Path) -> CliResult<Catalog> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.load_text(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn module(&self, name: &str) -> CliResult<&FiniteModule> {
        self.catalog
            .module(name)
            .ok_or_else(|| CliError::Usage(format!("unknown module {name:?}")))
    }

    pub fn modules(&self, names: &[String]) -> CliResult<Vec<FiniteModule>> {
        names.iter().map(|n| self.module(n).cloned()).collect()
    }

    pub fn ring(&self, name: &str) -> CliResult<&FiniteRing> {
        self.catalog
            .ring(name)
            .ok_or_else(|| CliError::Usage(format!("unknown ring {name:?}")))
    }

    /// Loaded modules over `ring` on `side`, in load order.
    pub fn modules_over(&self, ring: &FiniteRing, side: Side) -> Vec<FiniteModule> {
        self.catalog
            .modules
            .iter()
            .filter(|(_, m)| m.side() == side && m.ring().same_as(ring))
            .map(|(_, m)| m.clone())
            .collect()
    }

    /// The `[suite]` table of the suite definitions.
    pub fn suite_definition(&self) -> CliResult<SuiteDefinition> {
        let doc: toml::Table =
            toml::from_str(&self.suite_text).map_err(|e| CliError::Usage(format!("suite file: {e}")))?;
        let suite = doc
            .get("suite")
            .and_then(|v| v.as_table())
            .ok_or_else(|| CliError::Usage("suite file has no [suite] table".into()))?;
        let names = suite
            .get("rings")
            .and_then(|v| v.as_array())
            .ok_or_else(|| CliError::Usage("suite.rings must be an array of ring names".into()))?;
        let rings = names
            .iter()
            .map(|v| {
                let n = v
                    .as_str()
                    .ok_or_else(|| CliError::Usage("suite.rings must hold strings".into()))?;
                self.ring(n).cloned()
            })
            .collect::<CliResult<Vec<_>>>()?;
        let max_carrier = match suite.get("max_carrier") {
            None => ppdual_core::suite::SUITE_MAX_CARRIER,
            Some(v) => v
                .as_integer()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Usage("suite.max_carrier must be a positive integer".into()))?
                as usize,
        };
        Ok(SuiteDefinition { rings, max_carrier })
    }
}
