//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monosum::colorings::BlockColoring;
use monosum::density::{
    abar_by_counting, abar_direct, abar_recurrence, abar_sequence, delta_formula, delta_formula_exact,
    loglog_cover_density,
};
use monosum::dynamics::{certify_empty, fixed_point_exact, sk_iterate, Certification, IterationConfig, SearchBox};
use monosum::error::Error;
use monosum::exact::{ratio, to_f64, Sqrt3};
use monosum::optimize::{critical_root, f2_objective, f2_value, minimize_delta, DEFAULT_TOL};
use monosum::sums::{bounded_subset_sums, graham_extend, subset_sums, Coverage, IntSet};
use monosum::verify::{worst_partition_search, SearchStrategy};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_two_color_bound() -> Outcome {
    let root = critical_root(2, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let c_root = delta_formula(2, root.b0).map_err(|e| e.to_string())?;
    let min = minimize_delta(2, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure((root.b0 - 3.732050808).abs() <= 1e-9, || {
        format!("root b0 = {}", root.b0)
    })?;
    ensure((min.arg - 3.732050808).abs() <= 1e-9, || {
        format!("minimizer b = {}", min.arg)
    })?;
    ensure((c_root - 0.933012702).abs() <= 1e-9, || {
        format!("c via root = {c_root}")
    })?;
    ensure((min.value - 0.933012702).abs() <= 1e-9, || {
        format!("c via minimum = {}", min.value)
    })?;
    ensure(
        (root.b0 - min.arg).abs() <= 1e-8 && (c_root - min.value).abs() <= 1e-8,
        || "root and minimization paths disagree".into(),
    )?;
    ensure(root.certificate.holds(), || "root certificate fails".into())?;
    Ok(format!("b0 = {:.12}, c_upper(2) = {:.12}", root.b0, c_root))
}

fn c2_erdos_density() -> Outcome {
    let exact = delta_formula_exact(2, &ratio(4, 1)).map_err(|e| e.to_string())?;
    ensure(exact == ratio(14, 15), || format!("delta_2(4) = {exact}"))?;
    let cover = loglog_cover_density(&monosum::colorings::LogLogParams::new(4.0, 2).map_err(|e| e.to_string())?);
    ensure((cover - 14.0 / 15.0).abs() <= 1e-12, || {
        format!("cover density = {cover}")
    })?;
    Ok(format!("delta_2(4) = {exact}, cover density = {cover:.15}"))
}

fn c3_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in 2..=10u32 {
        let b0 = critical_root(r, DEFAULT_TOL).map_err(|e| e.to_string())?.b0;
        let delta = delta_formula(r, b0).map_err(|e| e.to_string())?;
        let closed = (1.0 - 1.0 / (2.0 * b0)) * (1.0 + 1.0 / (2.0 * r as f64 * b0 - r as f64));
        worst = worst.max((delta - closed).abs());
    }
    ensure(worst <= 1e-12, || format!("largest gap {worst:e}"))?;
    Ok(format!("largest gap over r = 2..10: {worst:.2e}"))
}

fn c4_recurrence_fixed_point() -> Outcome {
    let states = abar_recurrence(&vec![ratio(1, 4); 100], (ratio(1, 1), ratio(0, 1))).map_err(|e| e.to_string())?;
    let target = 14.0 / 15.0;
    let hit = states
        .iter()
        .position(|s| (to_f64(&s.abar) - target).abs() <= 1e-10)
        .ok_or("recurrence did not reach 14/15 within 100 steps")?;
    ensure(
        states[hit..].iter().all(|s| (to_f64(&s.abar) - target).abs() <= 1e-10),
        || "recurrence left the 1e-10 band".into(),
    )?;

    let z = Sqrt3::rational(ratio(2, 1)) - Sqrt3::root();
    let (a, b) = fixed_point_exact(&z).map_err(|e| e.to_string())?;
    let want_a = Sqrt3::new(ratio(1, 2), ratio(1, 4));
    let want_b = Sqrt3::rational(ratio(1, 4));
    ensure(a == want_a && b == want_b, || format!("fixed point = ({a:?}, {b:?})"))?;

    let n = 10_000;
    let (argmin, min) = (0..n)
        .map(|i| i as f64 / n as f64)
        .map(|z| (z, f2_objective(z)))
        .fold((0.0, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
    ensure(min >= f2_value() - 1e-8, || format!("grid minimum {min} below f2"))?;
    ensure((argmin - (2.0 - 3f64.sqrt())).abs() <= 1e-4, || {
        format!("grid argmin {argmin}")
    })?;
    Ok(format!(
        "converged after {} steps; grid min {min:.12} at z = {argmin}",
        states[hit].n
    ))
}

fn c5_sk_emptiness() -> Outcome {
    let config = IterationConfig {
        grid: 512,
        tol: 1e-12,
        k_max: 10_000,
    };
    let mut ks = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let search_box = SearchBox::new(eps).map_err(|e| e.to_string())?;
        let run = sk_iterate(&search_box, &config).map_err(|e| e.to_string())?;
        let k = match run.certification() {
            Certification::Certified { k } => k,
            other => return Err(format!("eps {eps}: {other:?}")),
        };
        ensure(
            certify_empty(&search_box, &config).map_err(|e| e.to_string())? == Certification::Certified { k },
            || format!("eps {eps}: certify_empty disagrees with the run"),
        )?;
        let mut outer = search_box.polygon();
        for (i, p) in run.polygons.iter().enumerate() {
            ensure(p.is_convex(1e-9), || format!("eps {eps}: P_{} is not convex", i + 1))?;
            ensure(p.approx_subset(&outer, 1e-9), || {
                format!("eps {eps}: P_{} escapes P_{}", i + 1, i)
            })?;
            outer = p.clone();
        }
        ks.push(k);
    }
    // ε decreasing, so K must not decrease along the list
    ensure(ks.windows(2).all(|w| w[0] <= w[1]), || {
        format!("K not monotone: {ks:?}")
    })?;
    Ok(format!("K = {ks:?} for eps = [0.2, 0.1, 0.05]"))
}

/// All subset sums by enumeration, with the fewest summands reaching each.
fn enumerate_min_cardinality(a: &[u64]) -> Vec<u8> {
    let total: u64 = a.iter().sum();
    let mut best = vec![u8::MAX; total as usize + 1];
    let mut sums = vec![0u64; 1 << a.len()];
    best[0] = 0;
    for mask in 1usize..1 << a.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + a[low];
        let c = mask.count_ones() as u8;
        let slot = &mut best[sums[mask] as usize];
        *slot = (*slot).min(c);
    }
    best
}

fn c6_subset_sum_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0u64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=18usize);
        let m: u64 = if rng.gen_bool(0.5) {
            rng.gen_range(n as u64..=100)
        } else {
            rng.gen_range(n as u64..=100_000)
        };
        let mut pool: Vec<u64> = (1..=m).collect();
        let a: Vec<u64> = pool.partial_shuffle(&mut rng, n).0.to_vec();
        let best = enumerate_min_cardinality(&a);
        let set = IntSet::new(a.clone()).map_err(|e| e.to_string())?;
        let cap = best.len() as u64 - 1;
        let full = subset_sums(&set, cap);
        let k = rng.gen_range(1..=n);
        let bounded = bounded_subset_sums(&set, k, cap).map_err(|e| e.to_string())?;
        for (s, &c) in best.iter().enumerate() {
            let s = s as u64;
            if full.contains(s) != (c != u8::MAX) {
                return Err(format!("Σ mismatch at {s} for {a:?}"));
            }
            if bounded.contains(s) != (c as usize <= k) {
                return Err(format!("Σ^[{k}] mismatch at {s} for {a:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("1000 sets, {checked} sums compared, 0 mismatches"))
}

fn c7_graham_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut valid = 0;
    while valid < 500 {
        let n = rng.gen_range(1..=8usize);
        let mut base: Vec<u64> = (1..=40).collect();
        let base = IntSet::new(base.partial_shuffle(&mut rng, n).0.to_vec()).map_err(|e| e.to_string())?;
        let sums = subset_sums(&base, base.total() as u64);
        let (lo, hi) = sums
            .maximal_intervals(0, sums.cap())
            .map_err(|e| e.to_string())?
            .longest()
            .expect("0 is always a sum");
        let mut len = hi - lo + 1;
        let mut adds = Vec::new();
        for _ in 0..rng.gen_range(0..=6) {
            let a = rng.gen_range(1..=len);
            if base.contains(a) || adds.contains(&a) {
                continue;
            }
            adds.push(a);
            len += a;
        }
        let got = graham_extend(Coverage::new(lo, hi - lo + 1), &adds).map_err(|e| e.to_string())?;
        ensure(got.start == lo && got.len == len, || format!("coverage {got:?}"))?;
        let all = base.union(&IntSet::new(adds.clone()).map_err(|e| e.to_string())?);
        let sums = subset_sums(&all, got.end_inclusive());
        ensure(
            sums.contains_interval(got.start, got.end_inclusive())
                .map_err(|e| e.to_string())?,
            || format!("{:?} + {adds:?} does not cover {got:?}", base.as_slice()),
        )?;
        valid += 1;
    }
    for _ in 0..100 {
        let len0 = rng.gen_range(1..=50u64);
        let mut adds: Vec<u64> = Vec::new();
        let mut len = len0;
        let bad_at = rng.gen_range(0..6usize);
        for i in 0..=bad_at {
            let a = if i == bad_at {
                rng.gen_range(len + 1..=len + 100)
            } else {
                rng.gen_range(1..=len)
            };
            if adds.contains(&a) {
                continue;
            }
            adds.push(a);
            len += a;
        }
        // anything may follow the first violation
        adds.extend((0..rng.gen_range(0..3)).map(|i| 10_000 + i));
        let expected = {
            let mut l = len0;
            adds.iter().position(|&a| {
                let over = a > l;
                l += a;
                over
            })
        };
        let idx = expected.expect("construction always violates") + 1;
        match graham_extend(Coverage::new(0, len0), &adds) {
            Err(Error::ConditionViolated { index, .. }) if index == idx => {}
            other => return Err(format!("{adds:?} from {len0}: expected index {idx}, got {other:?}")),
        }
    }
    Ok("500 valid instances re-verified, 100 violations at the right index".into())
}

fn c8_partition_witnesses() -> Outcome {
    let mut lines = Vec::new();
    for n in [100u64, 300, 1000] {
        let report = worst_partition_search(n, 2, 1000, 8, SearchStrategy::Random).map_err(|e| e.to_string())?;
        ensure(report.trials.len() == 1000, || {
            format!("N = {n}: {} trials", report.trials.len())
        })?;
        ensure(report.all_witnessed, || {
            format!("N = {n}: some partition has no witness")
        })?;
        ensure(report.trials.iter().all(|t| t.c.is_some_and(f64::is_finite)), || {
            format!("N = {n}: missing c")
        })?;
        let worst = report.worst_c.ok_or_else(|| format!("N = {n}: no worst c"))?;
        lines.push(format!("N={n} worst c={worst:.4}"));
    }
    Ok(lines.join(", "))
}

fn random_separated(rng: &mut ChaCha8Rng) -> BlockColoring {
    let blocks = rng.gen_range(2..=12usize);
    let mut h = vec![1u64, rng.gen_range(2..=6)];
    while h.len() <= blocks {
        let last = *h.last().unwrap();
        let min = 2 * (last - 1) + 1;
        h.push(rng.gen_range(min..=min + 3 * last));
    }
    BlockColoring::cyclic(h).expect("valid breakpoints")
}

fn c9_block_density() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    for _ in 0..50 {
        let col = random_separated(&mut rng);
        ensure(col.is_separated(), || format!("{:?} not separated", col.breakpoints()))?;
        for st in abar_sequence(&col).map_err(|e| e.to_string())? {
            let direct: BigRational = abar_direct(&col, st.n).map_err(|e| e.to_string())?;
            let counted = abar_by_counting(&col, st.n).map_err(|e| e.to_string())?;
            ensure(direct == st.abar && counted == st.abar, || {
                format!(
                    "{:?} n = {}: {direct} / {counted} / {}",
                    col.breakpoints(),
                    st.n,
                    st.abar
                )
            })?;
            compared += 1;
        }
    }
    Ok(format!("50 colorings, {compared} values equal"))
}

/// Writes past the test harness's capture so the summary shows up in plain
/// `cargo test` output too.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).expect("stdout");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 two-color bound by root and by minimization", c1_two_color_bound),
        ("2 log-log coloring density 14/15", c2_erdos_density),
        ("3 closed-form identity r = 2..10", c3_closed_form),
        ("4 recurrence, fixed point, f2 grid", c4_recurrence_fixed_point),
        ("5 S_K emptiness certificates", c5_sk_emptiness),
        ("6 subset-sum DP vs enumeration", c6_subset_sum_oracle),
        ("7 Graham extension", c7_graham_extension),
        ("8 partition witnesses N = 100, 300, 1000", c8_partition_witnesses),
        ("9 block-coloring density exactness", c9_block_density),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => report(format!("PASS criterion {name} ({secs:.2}s): {detail}")),
            Err(why) => {
                report(format!("FAIL criterion {name} ({secs:.2}s): {why}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
