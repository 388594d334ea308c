//! The acceptance criteria, one line each. Exits non-zero when any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use ffdioph::boxcount::{box_count, BoxCountRun, Mode};
use ffdioph::dimension::{s_length, theorem1_verdict, theorem2_verdict, Regime};
use ffdioph::exponents::{eta_of_psi, gamma_of_s, v_of_s, ApproxFunction, SetFamily};
use ffdioph::measure::{self, brute, KadicMeasure, ResonantSet};
use ffdioph::poly::{enumerate_polys, enumerate_vectors, polys_below_degree, totient};
use ffdioph::serde_util::{format_rational, parse_rational};
use ffdioph::stochastic::{nu_exact_moments, nu_monte_carlo, RhoSpec};
use ffdioph::verify::{self, VerifyParams};
use ffdioph::{FieldSpec, PolyVector, Polynomial};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

struct Outcome {
    passed: bool,
    detail: String,
}

fn r(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

fn within(limit: Duration, took: Duration) -> bool {
    took < limit
}

/// `#{p : deg p < deg q, gcd(p, q) = 1}` by Euclid.
fn gcd_count(q: &Polynomial) -> BigUint {
    let d = q.degree().unwrap();
    BigUint::from(polys_below_degree(q.spec(), d).filter(|p| q.is_coprime(p)).count())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut checked = 0;
    let mut worst: Option<(BigRational, String)> = None;
    for k in [2, 3] {
        let spec = FieldSpec::of_order(k).unwrap();
        for d in 0..=6 {
            for q in enumerate_polys(&spec, d, true) {
                let phi = totient(&q).unwrap();
                checked += 1;
                if phi != gcd_count(&q) {
                    mismatches += 1;
                }
                if k == 2 {
                    let ratio = BigRational::new(phi.into(), BigUint::from(2u32).pow(d as u32).into());
                    if worst.as_ref().is_none_or(|(w, _)| ratio < *w) {
                        worst = Some((ratio, q.to_string()));
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    let (min, at) = worst.unwrap();
    let ratio_ok = min >= r("1/4");
    Outcome {
        passed: mismatches == 0 && ratio_ok && within(Duration::from_secs(10), took),
        detail: format!(
            "Φ = gcd count on {checked} monic q ({mismatches} mismatches); min Φ/|q| over k=2 is {} at {at} (needs ≥ 1/4); {took:.2?}",
            format_rational(&min)
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut brute_checked = 0;
    for k in [2, 3] {
        let spec = FieldSpec::of_order(k).unwrap();
        for d in 0..=4 {
            for q in enumerate_polys(&spec, d, false) {
                let phi = gcd_count(&q);
                for rr in 1..=4i64 {
                    for n in [1u32, 2] {
                        let want = KadicMeasure::new(k, phi.pow(n), (rr + d as i64) * n as i64);
                        let depth = rr as usize + d;
                        let got = measure::measure_b_prime(&q, rr, n as usize, depth).unwrap();
                        checked += 1;
                        if got != want {
                            failures.push(format!("k={k} q={q} r={rr} n={n}: {got} vs {want}"));
                        }
                        if k == 2 && n == 1 && depth <= 8 {
                            let set = ResonantSet::b_prime(q.clone(), rr);
                            let b = brute::measure_set(&set, 1, depth).unwrap();
                            brute_checked += 1;
                            if b != want {
                                failures.push(format!("enumeration k=2 q={q} r={rr}: {b} vs {want}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{checked} exact comparisons, {brute_checked} cross-checked by enumeration, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    }
}

/// `q_1 q'_2 - q_2 q'_1 ≠ 0`.
fn independent(a: &PolyVector, b: &PolyVector) -> bool {
    !a.get(0).mul(b.get(1)).sub(&a.get(1).mul(b.get(0))).is_zero()
}

fn criterion_3() -> Outcome {
    let spec = FieldSpec::of_order(2).unwrap();
    let qs: Vec<PolyVector> = (0..=2).flat_map(|d| enumerate_vectors(&spec, 2, d).collect::<Vec<_>>()).collect();
    let mut pairs = 0;
    let mut checked = 0;
    let mut enumerated = 0;
    let mut failures = Vec::new();
    for (i, a) in qs.iter().enumerate() {
        for b in &qs[i + 1..] {
            if !independent(a, b) {
                continue;
            }
            pairs += 1;
            for ra in 0..=3 {
                for rb in 0..=3 {
                    let sets = [ResonantSet::b(a.clone(), ra), ResonantSet::b(b.clone(), rb)];
                    let depth = measure::required_precision(&sets).max(1);
                    let both = measure::measure_intersection(&sets, 1, depth).unwrap();
                    let prod = measure::measure_set(&sets[0], 1, depth).unwrap().mul(&measure::measure_set(&sets[1], 1, depth).unwrap());
                    checked += 1;
                    if both != prod {
                        failures.push(format!("q={a} q'={b} r={ra} r'={rb}: {both} vs {prod}"));
                    }
                    if depth <= 4 {
                        enumerated += 1;
                        let e = brute::measure_intersection(&sets, 1, depth).unwrap();
                        if e != prod {
                            failures.push(format!("enumeration q={a} q'={b} r={ra} r'={rb}: {e} vs {prod}"));
                        }
                    }
                }
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{pairs} independent pairs, {checked} product identities ({enumerated} also by enumeration), {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    }
}

/// The regression constants for the intersection bounds.
const FROZEN_1D: &str = "8";
const FROZEN_M2: &str = "1";

fn criterion_4() -> (Outcome, BigRational) {
    let grid = |m: usize| VerifyParams { k: Some(2), m: Some(m), degmax: Some(3), rmax: Some(3), ..Default::default() };
    let one_d = verify::run("1D-intersection", &grid(1)).unwrap();
    let big_m = verify::run("big-m-intersection", &grid(2)).unwrap();
    let count1 = verify::run("counting-N", &grid(1)).unwrap();
    let count2 = verify::run("counting-N", &grid(2)).unwrap();
    let c1 = one_d.constants["max_ratio"].clone();
    let c2 = big_m.constants["max_ratio"].clone();
    let passed = one_d.passed && big_m.passed && c1 == FROZEN_1D && c2 == FROZEN_M2 && count1.passed && count2.passed;
    let detail = format!(
        "max μ(∩)/(εε') = {c1} (frozen {FROZEN_1D}) for m=1, {c2} (frozen {FROZEN_M2}) for m=2; N(q,q') bound: {} + {} pairs checked, {} violations",
        count1.checked,
        count2.checked,
        count1.failures + count2.failures
    );
    (Outcome { passed, detail }, r(&c1))
}

fn criterion_5(c: &BigRational) -> Outcome {
    let start = Instant::now();
    let spec = FieldSpec::of_order(2).unwrap();
    let s = SetFamily::all(&spec, 1);
    let rho = RhoSpec { v_s: r("1"), delta: r("1/10"), n: 1 };
    let mut passed = true;
    let mut parts = Vec::new();
    for n_t in [3, 4, 5] {
        let exact = nu_exact_moments(&s, n_t, &rho, None).unwrap();
        let mean = exact.mean.to_rational();
        let mc = nu_monte_carlo(&s, n_t, &rho, 10_000, 20240601, None).unwrap();
        let var_ok = exact.variance_within(c);
        let mean_ok = mc.mean_consistent(&mean);
        let zero_ok = mc.zero_bound_holds(&mean);
        passed &= var_ok && mean_ok && zero_ok;
        parts.push(format!(
            "N_t={n_t}: E={} σ²/E={} MC mean {:.4}±{:.4}, zeros {:.4} vs 1/E {}",
            exact.mean,
            format_rational(&exact.variance_ratio),
            mc.mean,
            mc.std_error,
            mc.zero_frequency,
            format_rational(&exact.zero_bound)
        ));
    }
    let took = start.elapsed();
    Outcome {
        passed: passed && within(Duration::from_secs(60), took),
        detail: format!("C = {}; {}; {took:.2?}", format_rational(c), parts.join("; ")),
    }
}

fn criterion_6() -> Outcome {
    let spec = FieldSpec::of_order(2).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [1, 2] {
        let s = SetFamily::all(&spec, m);
        let v = v_of_s(&s, 12).unwrap();
        let g = gamma_of_s(&s, 12).unwrap();
        let ok = (v.estimate - m as f64).abs() <= 0.1 && (g.estimate - v.estimate).abs() <= 0.1;
        passed &= ok;
        parts.push(format!("m={m}: v(S) {:.4}, γ(S) {:.4}", v.estimate, g.estimate));
    }
    for m in [1, 2] {
        for v in [2, 3] {
            let psi = ApproxFunction::power(&spec, m, int(v));
            let eta = eta_of_psi(&psi, 1, 24, 0.05).unwrap();
            let want = (m + 1) as f64 / (v + 1) as f64;
            passed &= (eta.estimate - want).abs() <= 0.05;
            parts.push(format!("η(m={m}, v={v}) {:.4} vs {want:.4}", eta.estimate));
        }
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn criterion_7() -> Outcome {
    let mut agreements = 0;
    let mut verdicts = 0;
    let mut failures = Vec::new();
    let vs_grid = ["1/3", "1/2", "2/3", "1", "3/2", "2", "5/2", "3", "4", "6"];
    for m in 1..=3usize {
        for n in 1..=3usize {
            for v in vs_grid.iter().map(|v| r(v)) {
                // ALL_NONZERO has v(S) = m; ψ = |q|^{-v} has λ = v and η = (m + n)/(v + 1)
                let t1 = theorem1_verdict(m, n, &int(m), &v).unwrap();
                if v >= int(m) / int(n) {
                    let eta = int(m + n) / (&v + int(1));
                    let t2 = theorem2_verdict(m, n, &eta).unwrap();
                    agreements += 1;
                    if t1.dim != t2.dim {
                        failures.push(format!("m={m} n={n} v={v}: {} vs {}", t1.dim, t2.dim));
                    }
                }
                for vs in ["0", "1/2", "1"].iter().map(|x| r(x) * int(m)) {
                    let verdict = theorem1_verdict(m, n, &vs, &v).unwrap();
                    verdicts += 1;
                    let full = int(n) * &v < vs;
                    if (verdict.regime == Regime::FullMeasure) != full {
                        failures.push(format!("verdict m={m} n={n} vS={vs} λ={v}"));
                    }
                }
            }
        }
    }
    let spec = FieldSpec::of_order(2).unwrap();
    let s = SetFamily::all(&spec, 1);
    let mut points = 0;
    for lambda in ["1", "2", "3", "5"] {
        let lambda = r(lambda);
        let threshold = (int(1) + int(1)) / (int(1) + &lambda);
        for s_value in ["1/5", "3/10", "9/20", "7/10", "19/20"] {
            let sv = r(s_value);
            let report = s_length(&s, &lambda, &r("1/10"), &sv, 1, 1, 24).unwrap();
            points += 1;
            if report.converges != (sv > threshold) {
                failures.push(format!("s-length s={s_value} λ={lambda}: converges={}", report.converges));
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{agreements} Thm1/Thm2 agreements, {verdicts} verdicts, {points} s-length points, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let spec = FieldSpec::of_order(2).unwrap();
    let s = SetFamily::all(&spec, 1);
    let mut passed = true;
    let mut parts = Vec::new();
    for v in [2, 3] {
        let psi = ApproxFunction::power(&spec, 1, int(v));
        let run = BoxCountRun { n: 1, depth: 14, cutoff: None, lowest_block: None, mode: Mode::Auto };
        let rep = box_count(&s, &psi, &run).unwrap();
        let prediction = rep.prediction.as_ref().unwrap().to_f64().unwrap();
        let last = rep.final_estimate();
        let close = (last - prediction).abs() <= 0.15;
        let monotone = rep.approaches_from_above(8);
        passed &= close && monotone;
        let series: Vec<String> = rep.series.iter().filter(|x| x.depth >= 8).map(|x| format!("{:.3}", x.estimate)).collect();
        parts.push(format!("v={v}: J={} T=8..14 [{}] vs {}", rep.cutoff, series.join(" "), format_rational(rep.prediction.as_ref().unwrap())));
    }
    let took = start.elapsed();
    Outcome { passed: passed && within(Duration::from_secs(120), took), detail: format!("{}; {took:.2?}", parts.join("; ")) }
}

fn criterion_9() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [1, 2] {
        let p = VerifyParams { k: Some(2), m: Some(m), n_max: Some(5), ..Default::default() };
        let rep = verify::run("inclusion-eq20", &p).unwrap();
        passed &= rep.passed;
        parts.push(format!("shrunk ball m={m}: {} checks, {} failures", rep.checked, rep.failures));
    }
    let p = VerifyParams { k: Some(2), samples: Some(100), seed: Some(9), ..Default::default() };
    let rep = verify::run("scaling", &p).unwrap();
    passed &= rep.passed && rep.checked == 100;
    parts.push(format!("scaling: {} cylinders, {} failures", rep.checked, rep.failures));
    Outcome { passed, detail: parts.join(", ") }
}

fn cli(args: &[&str], threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ffdioph")).args(args).args(["--threads", threads]).output().unwrap();
    (out.status.code(), out.stdout)
}

fn criterion_10() -> Outcome {
    let runs: &[&[&str]] = &[
        &["verify", "1D-measure"],
        &["verify", "independence", "--m", "2", "--degmax", "2"],
        &["verify", "scaling", "--seed", "5"],
        &["measure", "--kind", "b-prime", "--q", "1,1,1", "--r", "2", "--q", "1,0,1", "--r", "1", "--brute"],
        &["exponents", "vS", "--family", "all", "--m", "2", "--Nmax", "10"],
        &["exponents", "eta", "--psi", "power:2", "--Nmax", "16"],
        &["dimension", "thm1", "--m", "1", "--n", "1", "--vS", "1", "--lambda", "3"],
        &["dimension", "thm2", "--m", "2", "--n", "1", "--eta", "1"],
        &["dimension", "slength", "--n", "1", "--lambda", "3", "--s", "3/5"],
        &["stochastic", "moments", "--Nt", "4", "--samples", "10000", "--seed", "3"],
        &["boxcount", "--psi", "power:3", "--T", "12"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let (c1, a) = cli(args, "1");
        let (c4, b) = cli(args, "4");
        let (c4b, c) = cli(args, "4");
        if c1 != Some(0) || c4 != Some(0) || c4b != Some(0) || a.is_empty() || a != b || b != c {
            differing.push(args.join(" "));
        }
    }
    Outcome {
        passed: differing.is_empty(),
        detail: format!(
            "{} commands x threads {{1, 4, 4}}: {} not byte-identical or not clean{}",
            runs.len(),
            differing.len(),
            differing.first().map(|d| format!(" (first: {d})")).unwrap_or_default()
        ),
    }
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |i: usize, name: &'static str, o: Outcome| {
        println!("criterion {i:>2} [{name}]: {} | {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((i, name, o));
    };
    report(1, "totient", criterion_1());
    report(2, "1D measure", criterion_2());
    report(3, "independence", criterion_3());
    let (c4, constant) = criterion_4();
    report(4, "intersections", c4);
    report(5, "moments", criterion_5(&constant));
    report(6, "exponents", criterion_6());
    report(7, "dimension", criterion_7());
    report(8, "box counting", criterion_8());
    report(9, "inclusion and scaling", criterion_9());
    report(10, "determinism", criterion_10());
    let failed: Vec<String> = results.iter().filter(|(_, _, o)| !o.passed).map(|(i, n, _)| format!("{i} ({n})")).collect();
    println!("{} of {} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failing: {}", failed.join(", "));
        std::process::exit(1);
    }
}
