//! Exhaustive coding-function search split over the first vertex.

use closure_lab_core::closure::ClosureOperator;
use closure_lab_core::coding::{branch_count, solve_branch, BranchOutcome, SolveOutcome};
use closure_lab_core::partition::{count_partitions, Entropy};
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// Runs [`solve_branch`] for every first-vertex choice, each with its own
/// node `budget`, and merges in branch order: the largest entropy wins and
/// ties go to the earliest branch. The result does not depend on `threads`.
pub fn solve_parallel(
    op: &ClosureOperator,
    q: usize,
    budget: u64,
    threads: Option<usize>,
) -> Result<SolveOutcome> {
    let branches = branch_count(op, q)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Usage(format!("thread pool: {e}")))?;
    let results: Vec<BranchOutcome> = pool.install(|| {
        (0..branches)
            .into_par_iter()
            .map(|i| solve_branch(op, q, budget, i))
            .collect::<std::result::Result<_, _>>()
    })?;
    let all_finished = results.iter().all(|r| r.finished);
    let nodes: u64 = results.iter().map(|r| r.nodes).sum();
    let mut best: Option<(Entropy, _)> = None;
    for (h, f) in results.into_iter().filter_map(|r| r.best) {
        if best.as_ref().is_none_or(|(b, _)| h.compare(b).is_gt()) {
            best = Some((h, f));
        }
    }
    let (max_entropy, best) = best.ok_or(LabError::Budget { nodes })?;
    let reached_rank = max_entropy.same(&Entropy::integer(op.rank()));
    let m = q.pow(op.rank() as u32);
    let per_vertex = count_partitions(m, q);
    Ok(SolveOutcome {
        max_entropy,
        best,
        complete: all_finished || reached_rank,
        nodes,
        candidates: (0..op.n()).fold(1u128, |acc, _| acc.saturating_mul(per_vertex)),
    })
}
