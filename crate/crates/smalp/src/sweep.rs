//! Step 3 of tuning spread over worker threads.

use std::thread;

use smalp_core::tuner::{CandidateResult, PreparedTuning};
use smalp_core::{TuneError, TuningReport};

/// Evaluates every candidate on `jobs` threads (at least one) and merges
/// the results in enumeration order. The report does not depend on `jobs`.
pub fn run(prepared: PreparedTuning<'_>, jobs: usize) -> Result<TuningReport, TuneError> {
    let n = prepared.candidates.len();
    let jobs = jobs.clamp(1, n.max(1));
    let results: Vec<Result<CandidateResult, TuneError>> = if jobs == 1 {
        (0..n).map(|i| prepared.evaluate(i)).collect()
    } else {
        let shared = &prepared;
        let mut slots: Vec<Option<Result<CandidateResult, TuneError>>> = (0..n).map(|_| None).collect();
        thread::scope(|scope| {
            let workers: Vec<_> = (0..jobs)
                .map(|w| {
                    scope.spawn(move || {
                        (w..n)
                            .step_by(jobs)
                            .map(|i| (i, shared.evaluate(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for worker in workers {
                for (i, r) in worker.join().expect("tuning worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots
            .into_iter()
            .map(|r| r.expect("every candidate evaluated"))
            .collect()
    };
    // the earliest failing candidate wins, as in a sequential run
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(prepared.finish(results))
}
