//! Deterministic replicate execution.
//!
//! Replicates are cut into fixed-size chunks; each chunk is folded in index order
//! and chunk results are merged in index order. Combined with per-replicate
//! streams this makes every result independent of the worker count.

/// Replicates per work item.
pub const CHUNK: u64 = 256;

/// Worker pool configuration. `threads == 0` means the runtime default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Workers {
    pub threads: usize,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        Self { threads }
    }

    pub fn single() -> Self {
        Self { threads: 1 }
    }

    /// Fold replicates `0..n` with `step`, merging chunk accumulators with `merge`.
    pub fn run<A, I, S, M>(&self, n: u64, init: I, step: S, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        S: Fn(&mut A, u64) + Sync + Send,
        M: Fn(A, A) -> A,
    {
        let chunks: Vec<(u64, u64)> = (0..n.div_ceil(CHUNK))
            .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(n)))
            .collect();
        let fold_chunk = |&(lo, hi): &(u64, u64)| {
            let mut acc = init();
            for r in lo..hi {
                step(&mut acc, r);
            }
            acc
        };
        let parts: Vec<A> = self.map_chunks(&chunks, fold_chunk);
        parts.into_iter().fold(init(), merge)
    }

    /// Run `f` for every replicate and return results in replicate order.
    pub fn collect<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.run(
            n,
            Vec::new,
            |acc, r| acc.push(f(r)),
            |mut a, mut b| {
                a.append(&mut b);
                a
            },
        )
    }

    #[cfg(feature = "parallel")]
    fn map_chunks<A, F>(&self, chunks: &[(u64, u64)], f: F) -> Vec<A>
    where
        A: Send,
        F: Fn(&(u64, u64)) -> A + Sync + Send,
    {
        use rayon::prelude::*;
        if self.threads == 1 || chunks.len() <= 1 {
            return chunks.iter().map(f).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .expect("failed to build worker pool");
        pool.install(|| chunks.par_iter().map(f).collect())
    }

    #[cfg(not(feature = "parallel"))]
    fn map_chunks<A, F>(&self, chunks: &[(u64, u64)], f: F) -> Vec<A>
    where
        A: Send,
        F: Fn(&(u64, u64)) -> A + Sync + Send,
    {
        chunks.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collect_preserves_order_for_any_thread_count() {
        for threads in [0, 1, 3, 8] {
            let v = Workers::new(threads).collect(1000, |r| r * r);
            assert_eq!(v.len(), 1000);
            assert!(v.iter().enumerate().all(|(i, &x)| x == (i as u64) * (i as u64)));
        }
    }

    #[test]
    fn float_sums_are_bit_identical_across_thread_counts() {
        let sum = |t| Workers::new(t).run(5000, || 0.0f64, |a, r| *a += 1.0 / (r as f64 + 1.0), |a, b| a + b);
        let base = sum(1);
        for t in [2, 4, 7] {
            assert_eq!(sum(t).to_bits(), base.to_bits());
        }
    }

    #[test]
    fn empty_run() {
        let v: Vec<u64> = Workers::new(2).collect(0, |r| r);
        assert!(v.is_empty());
    }
}
