//! Deterministic fan-out of independent samples across threads.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

/// `f(0), …, f(n - 1)` computed on all available cores, in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(n.max(1));
    let next = AtomicU64::new(0);
    let mut out: Vec<(u64, T)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= n as u64 {
                            return done;
                        }
                        done.push((i, f(i)));
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, t)| t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_in_index_order() {
        assert_eq!(map_indexed(100, |i| i * 2), (0..100).map(|i| i * 2).collect::<Vec<_>>());
        assert!(map_indexed(0, |i| i).is_empty());
    }
}
