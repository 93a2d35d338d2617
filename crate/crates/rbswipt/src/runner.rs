//! Multi-threaded sweep execution.

use rayon::prelude::*;
use rbswipt_core::search::Sense;
use rbswipt_core::sweep::{
    evaluate_point, optimum_from_sweep, Optimum, PhysicalModel, SweepResult, SweepSpec,
};
use rbswipt_core::{LinkModel, Quantity};

/// Runs `spec` on at most `workers` threads (0 = one per CPU). Points are
/// reassembled in grid order, so the result equals the serial sweep.
pub fn run_sweep_parallel(base: &LinkModel, spec: &SweepSpec, workers: usize) -> rbswipt_core::Result<SweepResult> {
    let resolved = spec.resolve(base)?;
    let grid = spec.grid();
    let evaluate = || {
        grid.par_iter()
            .map(|gp| evaluate_point(&resolved, &spec.axes, gp, &PhysicalModel))
            .collect::<Vec<_>>()
    };
    let points = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(evaluate),
        Err(_) => evaluate(),
    };
    Ok(SweepResult::from_points(spec, resolved, points))
}

/// Parallel grid search followed by the serial refinement step.
pub fn find_optimum_parallel(
    base: &LinkModel,
    spec: &SweepSpec,
    objective: Quantity,
    sense: Sense,
    workers: usize,
) -> rbswipt_core::Result<Optimum> {
    let sweep = run_sweep_parallel(base, spec, workers)?;
    optimum_from_sweep(&sweep, objective, sense, &PhysicalModel)
}
