//! Trial-level parallelism with schedule-independent results.
//!
//! Trials are pure functions of `(seed, trial index)`, so any partition of
//! the index range yields the same per-trial outcomes. Reductions must be
//! exactly order-independent (max/min/count, never floating-point sums), so
//! reports are bit-identical regardless of thread count.

use std::sync::OnceLock;

/// Parallelism cap from `RISKC_THREADS`; 0 or unset means auto.
pub fn thread_count() -> usize {
    static THREADS: OnceLock<usize> = OnceLock::new();
    *THREADS.get_or_init(|| {
        let requested = std::env::var("RISKC_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(0);
        if requested > 0 {
            requested
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    })
}

/// Fold `map(i)` for `i` in `0..n` into an accumulator, in parallel over
/// contiguous chunks, then merge chunk accumulators in chunk order.
pub fn fold_trials<A, M, F, G>(n: u64, init: A, map: M, fold: F, merge: G) -> A
where
    A: Send + Clone,
    M: Fn(u64) -> A + Sync,
    F: Fn(A, A) -> A + Sync + Send + Copy,
    G: Fn(A, A) -> A,
{
    let threads = thread_count().min(n.max(1) as usize).max(1);
    if threads == 1 || n < 256 {
        let mut acc = init;
        for i in 0..n {
            acc = fold(acc, map(i));
        }
        return acc;
    }
    let chunk = n.div_ceil(threads as u64);
    let mut results: Vec<Option<A>> = vec![None; threads];
    std::thread::scope(|scope| {
        let map = &map;
        let mut handles = Vec::new();
        for (t, slot) in results.iter_mut().enumerate() {
            let lo = t as u64 * chunk;
            let hi = (lo + chunk).min(n);
            let init = init.clone();
            handles.push(scope.spawn(move || {
                let mut acc = init;
                for i in lo..hi {
                    acc = fold(acc, map(i));
                }
                *slot = Some(acc);
            }));
        }
        for h in handles {
            h.join().expect("trial worker panicked");
        }
    });
    let mut iter = results.into_iter().flatten();
    let first = iter.next().expect("at least one chunk");
    iter.fold(first, merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_is_schedule_independent() {
        // argmax by (value, index) is an exact reduction; compare the
        // parallel result against a sequential reference
        let map = |i: u64| {
            let v = ((i % 101) as f64) * 0.5;
            (v, i)
        };
        let pick = |a: (f64, u64), b: (f64, u64)| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        };
        let par = fold_trials(10_000, (f64::NEG_INFINITY, u64::MAX), map, pick, pick);
        let mut seq = (f64::NEG_INFINITY, u64::MAX);
        for i in 0..10_000 {
            seq = pick(seq, map(i));
        }
        assert_eq!(par, seq);
    }
}
