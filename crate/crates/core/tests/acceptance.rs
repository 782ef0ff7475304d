//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use bvjunta::amplify::{grover_statevector, make_plan, plan_from_gamma};
use bvjunta::analytics::{limit_checks, LIMIT_FAIL_ALL, LIMIT_NOT_LEARN_ONE};
use bvjunta::boolfn::var_mask;
use bvjunta::bv_sampler::BvSampler;
use bvjunta::{
    amplified_success_probability, classical_probe, iteration_bound_check, learn_variables,
    parse_anf, spectrum_fast, spectrum_naive, BooleanFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// x_j x_k on n variables, expected block (1/2, 1/2, 1/2, -1/2), zero elsewhere.
fn c1_two_product_spectrum() -> Outcome {
    for (j, k, n) in [(1, 2, 2), (3, 6, 8)] {
        let f = parse_anf(&format!("x{j}*x{k}"), n).unwrap();
        let s = spectrum_fast(&f).unwrap();
        ensure(s == spectrum_naive(&f).unwrap(), || {
            format!("fast != naive at n={n}")
        })?;
        let (bj, bk) = (var_mask(n, j), var_mask(n, k));
        let expected = [(0, 0.5), (bk, 0.5), (bj, 0.5), (bj | bk, -0.5)];
        for y in 0..1usize << n {
            let want = expected
                .iter()
                .find(|(m, _)| *m == y)
                .map_or(0.0, |(_, v)| *v);
            ensure(s.coefficient(y) == want, || {
                format!("n={n}: c_{y:b} = {} (want {want})", s.coefficient(y))
            })?;
        }
    }
    Ok("exact at n=2 and n=8".into())
}

fn c2_two_product_success_rate() -> Outcome {
    let mut detail = Vec::new();
    for (j, k, n, seed) in [(1, 2, 2, 101), (3, 7, 10, 102), (5, 16, 16, 103)] {
        let f = parse_anf(&format!("x{j}*x{k}"), n).unwrap();
        let r = learn_variables(&f, 100_000, seed).unwrap();
        let freq = r.success_frequency();
        ensure((freq - 0.75).abs() <= 0.01, || {
            format!("(j,k,n)=({j},{k},{n}): frequency {freq}")
        })?;
        detail.push(format!("n={n}: {freq:.4}"));
    }
    Ok(detail.join(", "))
}

fn c3_product_overlaps() -> Outcome {
    let mut cases = 0;
    for m in 2..=10usize {
        let c0 = 1.0 - 2f64.powi(1 - m as i32);
        let mag = 2f64.powi(1 - m as i32);
        for n in m..=14 {
            let f = BooleanFunction::leading_product(n, m).unwrap();
            let s = spectrum_fast(&f).unwrap();
            ensure(s.coefficient(0) == c0, || {
                format!("m={m} n={n}: c0 = {}", s.coefficient(0))
            })?;
            let block = ((1usize << m) - 1) << (n - m);
            for y in 1..1usize << n {
                let c = s.coefficient(y);
                let ok = if y & !block == 0 {
                    c.abs() == mag
                } else {
                    c == 0.0
                };
                ensure(ok, || format!("m={m} n={n}: c_{y:b} = {c}"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (m, n) pairs exact"))
}

fn c4_zero_overlap_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut outcomes, mut violations) = (0u64, 0u64);
    for i in 0..120u64 {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(1..=4.min(n));
        let (f, _) = common::random_junta(&mut rng, m, n);
        let support = f.relevant_variables_bruteforce();
        BvSampler::new(&f).unwrap().for_each_record(1000, i, |rec| {
            outcomes += 1;
            if !rec.learned.is_subset(&support) {
                violations += 1;
            }
        });
    }
    ensure(violations == 0 && outcomes >= 100_000, || {
        format!("{violations} violations in {outcomes} outcomes")
    })?;
    Ok(format!(
        "0 violations in {outcomes} outcomes over 120 juntas"
    ))
}

fn c5_parseval_and_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.gen_range(1..=12);
        let f = if i % 2 == 0 {
            BooleanFunction::from_table(n, (0..1usize << n).map(|_| rng.gen()).collect()).unwrap()
        } else {
            let terms = rng.gen_range(1..=8);
            parse_anf(&common::random_anf(&mut rng, n, terms), n).unwrap()
        };
        let fast = spectrum_fast(&f).unwrap();
        let naive = spectrum_naive(&f).unwrap();
        let parseval = (fast.parseval_sum() - 1.0).abs();
        let diff = fast
            .coeffs()
            .iter()
            .zip(naive.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(parseval < 1e-12 && diff < 1e-12, || {
            format!("function {i} (n={n}): parseval err {parseval}, fast/naive diff {diff}")
        })?;
        worst = worst.max(parseval).max(diff);
    }
    Ok(format!("100 functions, worst deviation {worst:e}"))
}

fn c6_product_gamma() -> Outcome {
    for m in 2..=10usize {
        let f = BooleanFunction::leading_product(m + 2, m).unwrap();
        let plan = make_plan(&spectrum_fast(&f).unwrap(), m).unwrap();
        let want = 2f64.powi(2 - 2 * m as i32);
        ensure(plan.gamma == want, || {
            format!("m={m}: gamma {} != {want}", plan.gamma)
        })?;
    }
    Ok("gamma = 2^(2-2m) exactly for m = 2..10".into())
}

fn c7_grover_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut worst_mass, mut worst_norm) = (0, 0.0f64, 0.0f64);
    for _ in 0..60 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=4.min(n));
        let (f, _) = common::random_junta(&mut rng, m, n);
        let s = spectrum_fast(&f).unwrap();
        for k in 1..=m {
            let Ok(plan) = make_plan(&s, k) else { continue };
            for l in 0..=plan.optimal_iterations + 2 {
                let state = grover_statevector(&f, k, l).unwrap();
                let mass_err =
                    (state.weight_at_least(k) - amplified_success_probability(&plan, l)).abs();
                let norm_err = (state.norm() - 1.0).abs();
                ensure(mass_err < 1e-10 && norm_err < 1e-10, || {
                    format!("n={n} k={k} l={l}: mass err {mass_err}, norm err {norm_err}")
                })?;
                worst_mass = worst_mass.max(mass_err);
                worst_norm = worst_norm.max(norm_err);
                checked += 1;
            }
        }
    }
    ensure(checked > 100, || format!("only {checked} grid points"))?;
    Ok(format!(
        "{checked} (f, k, l) points, worst mass err {worst_mass:e}, worst norm err {worst_norm:e}"
    ))
}

fn c8_perfect_amplification() -> Outcome {
    let plan = plan_from_gamma(2, 0.25).unwrap();
    ensure(plan.optimal_iterations == 1, || {
        format!("round(R) = {}", plan.optimal_iterations)
    })?;
    let rotation = amplified_success_probability(&plan, 1);
    ensure((rotation - 1.0).abs() < 1e-12, || {
        format!("rotation gives {rotation}")
    })?;
    let f = parse_anf("x1*x2", 4).unwrap();
    let from_spectrum = make_plan(&spectrum_fast(&f).unwrap(), 2).unwrap();
    ensure(from_spectrum.gamma == 0.25, || {
        format!("gamma {}", from_spectrum.gamma)
    })?;
    let mass = grover_statevector(&f, 2, 1).unwrap().weight_at_least(2);
    ensure((mass - 1.0).abs() < 1e-12, || {
        format!("statevector gives {mass}")
    })?;
    Ok(format!("rotation {rotation}, statevector {mass}"))
}

fn c9_iteration_bound() -> Outcome {
    let points = 400;
    let (lo, hi) = (1e-6f64.ln(), 1.0f64.ln());
    for i in 1..points {
        let gamma = (lo + (hi - lo) * i as f64 / points as f64).exp();
        let b = iteration_bound_check(gamma).unwrap();
        ensure(b.exact < b.bound, || {
            format!("gamma={gamma}: R={} >= {}", b.exact, b.bound)
        })?;
    }
    let gaps: Vec<f64> = (2..=12)
        .map(|m| {
            iteration_bound_check(2f64.powi(2 - 2 * m))
                .unwrap()
                .relative_gap()
        })
        .collect();
    ensure(gaps.windows(2).all(|w| w[1] < w[0]), || {
        format!("gap not decreasing: {gaps:?}")
    })?;
    let last = *gaps.last().unwrap();
    ensure(last < 1e-3, || format!("relative gap at m=12 is {last}"))?;
    Ok(format!(
        "{} grid points below bound; relative gap {:.3} -> {last:.2e}",
        points - 1,
        gaps[0]
    ))
}

fn c10_limits() -> Outcome {
    let report = limit_checks();
    let row = report.rows.iter().find(|r| r.m == 30).unwrap();
    let fail_err = (row.p_fail_all - LIMIT_FAIL_ALL).abs();
    let one_err = (row.p_not_learn_one - LIMIT_NOT_LEARN_ONE).abs();
    ensure(fail_err < 0.01, || {
        format!("p_fail_all(30) = {}", row.p_fail_all)
    })?;
    ensure(one_err < 0.01, || {
        format!("p_not_learn_one(30) = {}", row.p_not_learn_one)
    })?;
    ensure((LIMIT_FAIL_ALL - (-PI).exp()).abs() < 1e-15, || {
        "e^-pi constant".into()
    })?;
    Ok(format!(
        "p_fail_all(30) = {:.4}, p_not_learn_one(30) = {:.4}",
        row.p_fail_all, row.p_not_learn_one
    ))
}

fn c11_classical_probe() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..=8usize {
        for n in m..=14 {
            let mut positions: Vec<usize> = (1..=n).collect();
            rand::seq::SliceRandom::shuffle(&mut positions[..], &mut rng);
            positions.truncate(m);
            let mask = positions.iter().fold(0, |acc, &p| acc | var_mask(n, p));
            let f = BooleanFunction::product(n, mask).unwrap();
            let probe = classical_probe(&f);
            ensure(probe.found == f.relevant_variables_bruteforce(), || {
                format!("m={m} n={n}: found {}", probe.found)
            })?;
            ensure(probe.queries == n as u64 + 1, || {
                format!("{} queries", probe.queries)
            })?;
        }
    }
    let mut incomplete = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let f =
            BooleanFunction::from_table(n, (0..1usize << n).map(|_| rng.gen()).collect()).unwrap();
        let truth = f.relevant_variables_bruteforce();
        let found = classical_probe(&f).found;
        ensure(found.is_subset(&truth), || {
            format!("probe reported {found} outside {truth}")
        })?;
        if found != truth {
            incomplete += 1;
        }
    }
    Ok(format!(
        "products exact in n+1 queries; sound on 300 random functions ({incomplete} incomplete)"
    ))
}

fn run_cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bvjunta"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn c12_reproducibility() -> Outcome {
    let commands: [&[&str]; 2] = [
        &[
            "bv", "--anf", "x1*x2", "--n", "6", "--trials", "100000", "--seed", "7",
        ],
        &[
            "amplify", "--anf", "x2*x4*x5", "--n", "8", "--k", "3", "--auto", "--trials", "5000",
            "--seed", "7",
        ],
    ];
    for args in commands {
        let payload = |mut v: Value| {
            v.as_object_mut().unwrap().remove("timestamps");
            serde_json::to_vec(&v).unwrap()
        };
        let a = payload(run_cli(args)?);
        let b = payload(run_cli(args)?);
        ensure(a == b, || format!("{} reports differ", args[0]))?;
    }
    Ok("bv and amplify payloads byte-identical across reruns".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1  two-variable product spectrum", c1_two_product_spectrum),
        (
            "2  learn-at-least-one rate 3/4",
            c2_two_product_success_rate,
        ),
        ("3  m-product overlaps", c3_product_overlaps),
        ("4  zero-overlap soundness", c4_zero_overlap_soundness),
        (
            "5  Parseval and fast/naive WHT",
            c5_parseval_and_equivalence,
        ),
        ("6  product gamma", c6_product_gamma),
        ("7  Grover statevector vs rotation", c7_grover_cross_check),
        ("8  perfect amplification at m=2", c8_perfect_amplification),
        ("9  iteration bound", c9_iteration_bound),
        ("10 large-m limits", c10_limits),
        ("11 classical probe baseline", c11_classical_probe),
        ("12 report reproducibility", c12_reproducibility),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<36} {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<36} {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
