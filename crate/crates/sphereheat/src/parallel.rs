//! Order-preserving parallel evaluation on a pool sized by `SPHEREHEAT_THREADS`.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use rayon::ThreadPool;
use sphereheat_core::identity_lab::{evaluate_point_cached, Grid, IdentityId, IdentityReport, VerifyOptions};
use sphereheat_core::quadrature::RuleCache;

pub const THREADS_VAR: &str = "SPHEREHEAT_THREADS";

/// Pool with `SPHEREHEAT_THREADS` workers, or one per hardware thread when unset.
pub fn thread_pool() -> Result<ThreadPool> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_VAR}=`{v}` is not a count"))?;
            if n == 0 {
                bail!("{THREADS_VAR} must be positive");
            }
            n
        }
        Err(_) => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Same reports as [`sphereheat_core::identity_lab::verify_grid`], in the same order.
pub fn verify_grid_parallel(
    pool: &ThreadPool,
    identity: IdentityId,
    grid: &Grid,
    opts: &VerifyOptions,
) -> Result<Vec<IdentityReport>> {
    if !(opts.tol_abs > 0.0 && opts.tol_rel > 0.0) {
        bail!("tolerances must be positive");
    }
    let points = grid.points(identity);
    if points.is_empty() {
        bail!("grid is empty for {identity}");
    }
    Ok(pool.install(|| {
        points
            .par_iter()
            .map_init(RuleCache::new, |rules, p| evaluate_point_cached(identity, p, opts, rules))
            .collect()
    }))
}

/// `f` over `items` in parallel, results in input order.
pub fn ordered_map<T, R, F>(pool: &ThreadPool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    pool.install(|| items.par_iter().map(f).collect())
}
