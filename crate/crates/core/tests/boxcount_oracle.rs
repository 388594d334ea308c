use std::collections::HashSet;

use ffdioph::boxcount::{box_count, BoxCountRun, Mode};
use ffdioph::exponents::{ApproxFunction, SetFamily};
use ffdioph::measure::{brute, ResonantSet};
use ffdioph::poly::enumerate_vectors;
use ffdioph::serde_util::parse_rational;
use ffdioph::{AbsValue, FieldSpec, LaurentMatrix};
use proptest::prelude::*;

/// Survivor counts from the definition: enumerate every point at full depth,
/// test membership for each band vector and collect the surviving prefixes.
fn brute_counts(k: u32, m: usize, n: usize, v: &str, lowest: usize, cutoff: usize, depth: usize) -> Vec<u64> {
    let spec = FieldSpec::of_order(k).unwrap();
    let psi = ApproxFunction::power(&spec, m, parse_rational(v).unwrap());
    let sets: Vec<ResonantSet> = (lowest..cutoff)
        .flat_map(|b| enumerate_vectors(&spec, m, b).collect::<Vec<_>>())
        .filter_map(|q| match psi.eval(&q) {
            AbsValue::Pow(e) => Some(ResonantSet::b(q, -e)),
            AbsValue::Zero => None,
        })
        .collect();
    let full = sets.iter().map(|s| s.required_precision()).max().unwrap().max(depth);
    let entries = m * n;
    let mut prefixes: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); depth];
    let total = (k as u64).pow((entries * full) as u32);
    let mut digits = vec![0u32; entries * full];
    for idx in 0..total {
        let mut x = idx;
        for d in digits.iter_mut() {
            *d = (x % k as u64) as u32;
            x /= k as u64;
        }
        let a = LaurentMatrix::from_digits(&spec, m, n, full, &digits).unwrap();
        let mut hit = false;
        for s in &sets {
            if brute::contains(s, &a).unwrap() {
                hit = true;
                break;
            }
        }
        if !hit {
            continue;
        }
        for t in 1..=depth {
            let p: Vec<u32> = (0..entries).flat_map(|e| digits[e * full..e * full + t].to_vec()).collect();
            prefixes[t - 1].insert(p);
        }
    }
    prefixes.iter().map(|s| s.len() as u64).collect()
}

fn fast_counts(k: u32, m: usize, n: usize, v: &str, lowest: usize, cutoff: usize, depth: usize, mode: Mode) -> Vec<u64> {
    let spec = FieldSpec::of_order(k).unwrap();
    let s = SetFamily::all(&spec, m);
    let psi = ApproxFunction::power(&spec, m, parse_rational(v).unwrap());
    let run = BoxCountRun { n, depth, cutoff: Some(cutoff), lowest_block: Some(lowest), mode };
    box_count(&s, &psi, &run).unwrap().series.iter().map(|r| r.survivors).collect()
}

#[test]
fn survivors_match_point_enumeration() {
    let cases: &[(u32, usize, usize, &str, usize, usize, usize)] = &[
        (2, 1, 1, "2", 1, 3, 6),
        (2, 1, 1, "3/2", 0, 3, 5),
        (2, 1, 1, "3", 2, 3, 7),
        (3, 1, 1, "1", 1, 3, 4),
        (2, 2, 1, "1", 1, 2, 3),
        (2, 1, 2, "1", 1, 2, 3),
        (2, 2, 1, "1/2", 1, 3, 3),
    ];
    for &(k, m, n, v, lo, j, t) in cases {
        let expected = brute_counts(k, m, n, v, lo, j, t);
        for mode in [Mode::Exhaustive, Mode::Propagation] {
            assert_eq!(fast_counts(k, m, n, v, lo, j, t, mode), expected, "k={k} m={m} n={n} v={v} band=[{lo},{j}) {mode:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn survivor_counts_are_consistent(v in 1u32..=6, half in any::<bool>(), lo in 0usize..3, width in 1usize..3, depth in 1usize..10) {
        let v = if half { format!("{v}/2") } else { v.to_string() };
        let j = lo + width;
        let counts = fast_counts(2, 1, 1, &v, lo, j, depth, Mode::Propagation);
        let wider = fast_counts(2, 1, 1, &v, lo, j + 1, depth, Mode::Propagation);
        let mut prev = 1u64;
        for (t, (&c, &w)) in counts.iter().zip(&wider).enumerate() {
            // every survivor's parent survives, and a larger cutoff only adds vectors
            prop_assert!(c <= 2 * prev);
            prop_assert!(c <= 1u64 << (t + 1));
            prop_assert!(w >= c);
            prev = c;
        }
    }
}
