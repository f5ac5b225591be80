//! Enumeration limits shared by every experiment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "CYCLE_SIEVE_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest extension level `e` at which points of `P^n(F_{q^e})` may be
    /// scanned.
    pub level: u32,
    /// Largest section space `q^dim` that may be enumerated exhaustively.
    pub space: u64,
    /// Candidates tried per search stage before giving up.
    pub candidates: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            level: 16,
            space: 1 << 24,
            candidates: 100_000,
        }
    }
}

impl Budget {
    /// Defaults overridden by `CYCLE_SIEVE_BUDGET`, a comma separated list
    /// such as `level=12,space=1048576,candidates=5000`.
    pub fn from_env() -> Result<Budget> {
        let mut b = Budget::default();
        if let Ok(s) = std::env::var(ENV_VAR) {
            b.apply(&s)?;
        }
        Ok(b)
    }

    pub fn apply(&mut self, overrides: &str) -> Result<()> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("{ENV_VAR}: expected key=value, got {item:?}")))?;
            let v: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("{ENV_VAR}: bad number {value:?}")))?;
            match key.trim() {
                "level" => self.level = v.min(u32::MAX as u64) as u32,
                "space" => self.space = v,
                "candidates" => self.candidates = v,
                other => return Err(Error::Invalid(format!("{ENV_VAR}: unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn check_level(&self, e: u32) -> Result<()> {
        if e > self.level {
            Err(Error::Budget(format!(
                "level {e} exceeds the enumeration level cap {}",
                self.level
            )))
        } else {
            Ok(())
        }
    }

    /// Checks `q^dim <= space`; returns the section count.
    pub fn check_space(&self, q: u64, dim: usize) -> Result<u64> {
        match checked_pow(q, dim) {
            Some(n) if n <= self.space => Ok(n),
            _ => Err(Error::Budget(format!(
                "section space {q}^{dim} exceeds the exhaustive budget {}",
                self.space
            ))),
        }
    }
}

pub fn checked_pow(q: u64, e: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}
