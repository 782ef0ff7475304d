#![allow(dead_code)]

use bvjunta::BooleanFunction;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random `g` on `m` variables embedded at random distinct positions of `n`.
pub fn random_junta<R: Rng>(rng: &mut R, m: usize, n: usize) -> (BooleanFunction, Vec<usize>) {
    let mut positions: Vec<usize> = (1..=n).collect();
    positions.shuffle(rng);
    positions.truncate(m);
    if m == 0 {
        return (BooleanFunction::constant(n, rng.gen()).unwrap(), positions);
    }
    let table: Vec<bool> = (0..1usize << m).map(|_| rng.gen()).collect();
    let inner = BooleanFunction::from_table(m, table).unwrap();
    (
        BooleanFunction::embed(n, &positions, &inner).unwrap(),
        positions,
    )
}

/// Random ANF text: `terms` monomials over `x1..xn`, each of degree up to 3.
pub fn random_anf<R: Rng>(rng: &mut R, n: usize, terms: usize) -> String {
    let mut parts = Vec::new();
    for _ in 0..terms {
        if rng.gen_ratio(1, 10) {
            parts.push("1".to_string());
            continue;
        }
        let degree = rng.gen_range(1..=3.min(n));
        let factors: Vec<String> = (0..degree)
            .map(|_| format!("x{}", rng.gen_range(1..=n)))
            .collect();
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}

/// Direct evaluation of ANF text at `x` (bit `x_1` most significant).
pub fn eval_anf_text(text: &str, n: usize, x: usize) -> bool {
    text.split('+')
        .map(|term| {
            let term = term.trim();
            if term == "1" {
                return true;
            }
            term.split('*').all(|factor| {
                let j: usize = factor.trim()[1..].parse().unwrap();
                (x >> (n - j)) & 1 == 1
            })
        })
        .fold(false, |acc, t| acc ^ t)
}
