//! Size limits for expensive computations. `PXP2_MAX_DIM`, when set to an
//! integer, replaces every default limit.

use crate::error::{Error, Result};

pub const MAX_DENSE_DIM: usize = 20_000;
pub const MAX_KRYLOV_DIM: usize = 300_000;

pub const ENV_OVERRIDE: &str = "PXP2_MAX_DIM";

pub fn limit(default: usize) -> usize {
    std::env::var(ENV_OVERRIDE)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

/// Refuses `requested > limit(default)` with an error naming the guard.
pub fn check(guard: &'static str, requested: usize, default: usize) -> Result<()> {
    let limit = limit(default);
    if requested > limit {
        return Err(Error::Resource {
            guard,
            requested,
            limit,
        });
    }
    Ok(())
}
