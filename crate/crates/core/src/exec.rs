//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature (on by default) the butterfly stages, diagonal
//! operators and Monte Carlo trial blocks are spread over the rayon pool.
//! Without it, or when [`Exec::Sequential`] is requested explicitly, the same
//! kernels run on the calling thread. Both paths produce identical results.

/// Which code path a kernel should take. The default is parallel when the
/// feature is enabled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    pub fn name(self) -> &'static str {
        match self {
            Exec::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Exec::Parallel => "parallel",
        }
    }
}

/// Map every index in `0..count` and fold the results with `reduce`.
///
/// `reduce` must be associative; with the parallel path the grouping of
/// partial results is unspecified.
pub(crate) fn map_reduce<T, M, R>(exec: Exec, count: usize, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..count).map(map).fold(identity, reduce),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .map(map)
                .reduce(|| identity.clone(), reduce)
        }
    }
}

/// Apply `op` to every element of `data` together with its index.
pub(crate) fn for_each_indexed<T, F>(exec: Exec, data: &mut [T], op: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    match exec {
        Exec::Sequential => data.iter_mut().enumerate().for_each(|(i, v)| op(i, v)),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            if data.len() < PAR_THRESHOLD {
                data.iter_mut().enumerate().for_each(|(i, v)| op(i, v));
            } else {
                data.par_iter_mut()
                    .with_min_len(PAR_MIN_LEN)
                    .enumerate()
                    .for_each(|(i, v)| op(i, v));
            }
        }
    }
}

/// Below this many elements the parallel path falls back to a plain loop.
#[cfg(feature = "parallel")]
pub(crate) const PAR_THRESHOLD: usize = 1 << 14;

#[cfg(feature = "parallel")]
pub(crate) const PAR_MIN_LEN: usize = 1 << 12;
