//! Parity-basis overlaps `c_y = 2^-n sum_x (-1)^(f(x) + x.y)` and the induced
//! Bernstein-Vazirani outcome distribution `p_y = c_y^2`.

use std::fmt::Write;

use crate::boolfn::{bit_string, BooleanFunction, DEFAULT_MAX_VARS};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::wht;

/// Largest `n` accepted by the quadratic-time reference transform.
pub const NAIVE_MAX_VARS: usize = 14;

/// Signed overlaps of `v_f` with every parity basis vector, indexed by `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, y: usize) -> f64 {
        self.coeffs[y]
    }

    /// `sum_y c_y^2`; equals 1 for every spectrum of a Boolean function.
    pub fn parseval_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// CSV with columns `y,c_y,p_y`, one row per outcome in index order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,c_y,p_y\n");
        for (y, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{},{},{}", bit_string(y, self.n), c, c * c).unwrap();
        }
        out
    }
}

/// Literal double sum over `x` and `y`. Reference oracle only.
pub fn spectrum_naive(f: &BooleanFunction) -> Result<Spectrum> {
    let n = f.n();
    if n > NAIVE_MAX_VARS {
        return Err(Error::SizeExceeded {
            n,
            limit: NAIVE_MAX_VARS,
        });
    }
    let size = 1usize << n;
    let scale = (size as f64).recip();
    let coeffs = (0..size)
        .map(|y| {
            let total: i64 = (0..size)
                .map(|x| {
                    let exponent = u32::from(f.evaluate(x)) + (x & y).count_ones();
                    if exponent % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .sum();
            total as f64 * scale
        })
        .collect();
    Ok(Spectrum { n, coeffs })
}

/// Fast Walsh-Hadamard evaluation of the spectrum, `O(n 2^n)`.
pub fn spectrum_fast(f: &BooleanFunction) -> Result<Spectrum> {
    spectrum_fast_with(f, Exec::default())
}

pub fn spectrum_fast_with(f: &BooleanFunction, exec: Exec) -> Result<Spectrum> {
    let n = f.n();
    if n > DEFAULT_MAX_VARS {
        return Err(Error::SizeExceeded {
            n,
            limit: DEFAULT_MAX_VARS,
        });
    }
    let table = f.table();
    let mut coeffs = vec![0.0; table.len()];
    exec::for_each_indexed(exec, &mut coeffs, |x, v| {
        *v = if table[x] { -1.0 } else { 1.0 }
    });
    wht::walsh_hadamard(&mut coeffs, exec);
    // Power-of-two scaling keeps the dyadic values exact.
    let scale = (coeffs.len() as f64).recip();
    exec::for_each_indexed(exec, &mut coeffs, |_, v| *v *= scale);
    Ok(Spectrum { n, coeffs })
}

/// Probability of each measurement outcome `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, y: usize) -> f64 {
        self.probs[y]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability that the outcome has a 1 at variable `j`.
    pub fn marginal(&self, j: usize) -> f64 {
        let bit = crate::boolfn::var_mask(self.n, j);
        self.probs
            .iter()
            .enumerate()
            .filter(|(y, _)| y & bit != 0)
            .map(|(_, p)| p)
            .sum()
    }

    /// Total probability of outcomes with `k` or more ones.
    pub fn weight_at_least(&self, k: usize) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(y, _)| y.count_ones() as usize >= k)
            .map(|(_, p)| p)
            .sum()
    }
}

/// `p_y = c_y^2`. No renormalization is applied.
pub fn outcome_distribution(s: &Spectrum) -> OutcomeDistribution {
    OutcomeDistribution {
        n: s.n,
        probs: s.coeffs.iter().map(|c| c * c).collect(),
    }
}
