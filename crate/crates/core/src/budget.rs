//! Enumeration caps shared by the exhaustive searches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding [`Budget::DEFAULT_CELLS`].
pub const BUDGET_ENV: &str = "STEINHAUS_BUDGET";

/// Upper bound on the work an enumeration may perform, measured in
/// triangle cells (or candidate tuples for the lifting searches).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_cells: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_cells: Self::DEFAULT_CELLS }
    }
}

impl Budget {
    pub const DEFAULT_CELLS: u128 = 100_000_000;

    pub fn unlimited() -> Self {
        Budget { max_cells: u128::MAX }
    }

    /// The default cap, overridden by `STEINHAUS_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => s
                .trim()
                .parse::<u128>()
                .map(|max_cells| Budget { max_cells })
                .map_err(|e| Error::Parse(format!("{BUDGET_ENV}={s:?}: {e}"))),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.max_cells {
            Err(Error::Budget { needed, cap: self.max_cells })
        } else {
            Ok(())
        }
    }
}
