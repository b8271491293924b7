//! Sample-level execution: rayon when the `parallel` feature is on, a plain
//! loop otherwise. Results always come back in index order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Independent generator for sample `index`: one ChaCha stream per sample, so
/// each sample is fixed by `(seed, index)` regardless of scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn map_indices<T, F>(exec: Exec, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

pub fn filter_map_indices<T, F>(exec: Exec, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().filter_map(f).collect()
        }
        _ => (0..count).filter_map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn both_modes_agree_in_order() {
        let f = |i: u64| sample_rng(7, i).gen::<u32>();
        let a = map_indices(Exec::Sequential, 500, f);
        let b = map_indices(Exec::Parallel, 500, f);
        assert_eq!(a, b);
        let odd = |i: u64| (i % 2 == 1).then_some(i);
        assert_eq!(
            filter_map_indices(Exec::Sequential, 100, odd),
            filter_map_indices(Exec::Parallel, 100, odd)
        );
    }

    #[test]
    fn streams_differ() {
        assert_ne!(sample_rng(1, 0).gen::<u64>(), sample_rng(1, 1).gen::<u64>());
        assert_eq!(sample_rng(1, 3).gen::<u64>(), sample_rng(1, 3).gen::<u64>());
    }
}
