//! In-place radix-2 butterfly transforms over `2^n` points.
//!
//! [`walsh_hadamard`] is the unnormalized Walsh-Hadamard transform, and
//! [`mobius`] is the same butterfly over GF(2), mapping algebraic normal form
//! coefficients to a truth table (it is its own inverse).

use crate::exec::Exec;

/// Elements handled per task before the cross-block stages start.
#[cfg(feature = "parallel")]
const LOCAL_BLOCK: usize = 1 << 12;

/// Unnormalized fast Walsh-Hadamard transform:
/// `out[y] = sum_x (-1)^(x.y) in[x]`.
///
/// Panics if `data.len()` is not a power of two.
pub fn walsh_hadamard(data: &mut [f64], exec: Exec) {
    butterfly(data, exec, |a, b| (a + b, a - b));
}

/// Binary Möbius transform: `out[x] = XOR over masks m with m ⊆ x of in[m]`.
pub fn mobius(data: &mut [bool], exec: Exec) {
    butterfly(data, exec, |a, b| (a, a ^ b));
}

/// Runs every butterfly stage of a radix-2 transform with the pair operator `op`.
pub fn butterfly<T, F>(data: &mut [T], exec: Exec, op: F)
where
    T: Copy + Send + Sync,
    F: Fn(T, T) -> (T, T) + Sync + Send,
{
    assert!(
        data.len().is_power_of_two(),
        "transform length {} is not a power of two",
        data.len()
    );
    match exec {
        Exec::Sequential => butterfly_sequential(data, 1, &op),
        #[cfg(feature = "parallel")]
        Exec::Parallel => butterfly_parallel(data, &op),
    }
}

/// Stages with half-span `first_half` and above, on the calling thread.
fn butterfly_sequential<T, F>(data: &mut [T], first_half: usize, op: &F)
where
    T: Copy,
    F: Fn(T, T) -> (T, T),
{
    let len = data.len();
    let mut half = first_half;
    while half < len {
        for chunk in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                (*a, *b) = op(*a, *b);
            }
        }
        half *= 2;
    }
}

#[cfg(feature = "parallel")]
fn butterfly_parallel<T, F>(data: &mut [T], op: &F)
where
    T: Copy + Send + Sync,
    F: Fn(T, T) -> (T, T) + Sync + Send,
{
    use crate::exec::{PAR_MIN_LEN, PAR_THRESHOLD};
    use rayon::prelude::*;

    let len = data.len();
    if len < PAR_THRESHOLD {
        butterfly_sequential(data, 1, op);
        return;
    }
    // Short spans stay inside cache-sized blocks, one block per task.
    data.par_chunks_mut(LOCAL_BLOCK)
        .for_each(|block| butterfly_sequential(block, 1, op));

    let mut half = LOCAL_BLOCK;
    while half < len {
        data.par_chunks_mut(2 * half).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .with_min_len(PAR_MIN_LEN)
                .for_each(|(a, b)| (*a, *b) = op(*a, *b));
        });
        half *= 2;
    }
}
