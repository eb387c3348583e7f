//! Parallel versions of the exhaustive scans. Work is split in canonical
//! order and merged back in the same order, so results never depend on the
//! number of workers.

use rayon::prelude::*;
use rayon::ThreadPool;
use sphere_rigidity_core::census::{assemble_census, IsometryCensus, IsometrySearch};
use sphere_rigidity_core::extraction::{find_isometry_violation, isometry_check_from, SphereMap};
use sphere_rigidity_core::{Check, GridSpec, SpaceModel};

pub fn pool(jobs: usize) -> ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool")
}

/// Row blocks small enough to balance the triangular pair scan.
fn row_blocks(n: usize, jobs: usize) -> Vec<std::ops::Range<usize>> {
    let blocks = (jobs.max(1) * 8).min(n.max(1));
    let step = n.div_ceil(blocks).max(1);
    (0..n).step_by(step).map(|start| start..(start + step).min(n)).collect()
}

/// Exhaustive isometry check; reports the first violating pair in
/// canonical order.
pub fn check_isometry(phi: &SphereMap, pool: &ThreadPool) -> Check {
    let blocks = row_blocks(phi.len(), pool.current_num_threads());
    let hits: Vec<Option<(usize, usize)>> =
        pool.install(|| blocks.into_par_iter().map(|rows| find_isometry_violation(phi, rows)).collect());
    isometry_check_from(phi, hits.into_iter().flatten().next())
}

/// Census with the search tree split at the first assignment level.
pub fn census(
    space: &SpaceModel,
    grid: GridSpec,
    cap: usize,
    pool: &ThreadPool,
) -> sphere_rigidity_core::Result<IsometryCensus> {
    let search = IsometrySearch::new(space, grid, cap)?;
    let branches: Vec<Vec<Vec<usize>>> =
        pool.install(|| search.first_level_candidates().into_par_iter().map(|c| search.search_from(c)).collect());
    Ok(assemble_census(search.sphere().clone(), branches.into_iter().flatten().collect()))
}
