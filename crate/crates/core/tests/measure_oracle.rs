use ffdioph::measure::{self, brute, KadicMeasure, ResonantSet};
use ffdioph::poly::{enumerate_polys, enumerate_vectors, polys_below_degree, totient};
use ffdioph::{FieldSpec, PolyVector, Polynomial};

fn expected_b_prime(q: &Polynomial, r: i64, n: usize) -> KadicMeasure {
    let k = q.spec().k();
    let d = q.degree().unwrap() as i64;
    KadicMeasure::new(k, totient(q).unwrap(), r + d).pow(n as u32)
}

#[test]
fn pushforward_uniformity() {
    for k in [2, 3] {
        let spec = FieldSpec::of_order(k).unwrap();
        for m in [1, 2] {
            let maxdeg = if k == 3 && m == 2 { 2 } else { 4 };
            for d in 0..=maxdeg {
                for q in enumerate_vectors(&spec, m, d) {
                    for r in 0..=4 {
                        let mu = measure::measure_b(&q, r, 1, 8).unwrap();
                        assert_eq!(mu, KadicMeasure::power(k, r), "q={q} r={r}");
                    }
                }
            }
        }
    }
}

#[test]
fn one_dimensional_measure_is_exact() {
    for k in [2, 3] {
        let spec = FieldSpec::of_order(k).unwrap();
        for d in 0..=4 {
            for q in enumerate_polys(&spec, d, true) {
                for r in 1..=4 {
                    for n in [1, 2] {
                        let mu = measure::measure_b_prime(&q, r, n, r as usize + d).unwrap();
                        assert_eq!(mu, expected_b_prime(&q, r, n), "q={q} r={r} n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn linear_algebra_agrees_with_enumeration() {
    let f2 = FieldSpec::of_order(2).unwrap();
    for d in 0..=3 {
        for q in enumerate_polys(&f2, d, false) {
            for r in 1..=(8 - d as i64).min(4) {
                let t = 8;
                for set in [ResonantSet::b_prime(q.clone(), r), ResonantSet::b(PolyVector::scalar(q.clone()), r)] {
                    let fast = measure::measure_set(&set, 1, t).unwrap();
                    let slow = brute::measure_set(&set, 1, t).unwrap();
                    assert_eq!(fast, slow, "q={q} r={r} {:?}", set.kind);
                }
            }
        }
    }
    let f3 = FieldSpec::of_order(3).unwrap();
    for q in enumerate_polys(&f3, 2, true) {
        let set = ResonantSet::b_prime(q.clone(), 1);
        assert_eq!(measure::measure_set(&set, 2, 3).unwrap(), brute::measure_set(&set, 2, 3).unwrap());
    }
}

#[test]
fn big_m_measures_agree_with_enumeration_and_formula() {
    let f2 = FieldSpec::of_order(2).unwrap();
    for d in 0..=2 {
        for q in enumerate_vectors(&f2, 2, d) {
            for r in 1..=2 {
                let t = d + r as usize;
                let set = ResonantSet::b_dprime(q.clone(), r);
                let fast = measure::measure_set(&set, 1, t).unwrap();
                assert_eq!(fast, brute::measure_set(&set, 1, t).unwrap(), "q={q}");
                // k^{-r} Φ(g)/|g| with g the gcd of the coordinates
                let g = q.gcd().unwrap();
                let want = KadicMeasure::new(2, totient(&g).unwrap(), r + g.degree().unwrap() as i64);
                assert_eq!(fast, want, "q={q}");
                assert!(fast <= measure::measure_b(&q, r, 1, t).unwrap());
            }
        }
    }
}

#[test]
fn intersections_agree_with_enumeration() {
    let f2 = FieldSpec::of_order(2).unwrap();
    let qs: Vec<Polynomial> = polys_below_degree(&f2, 3).skip(1).collect();
    for a in &qs {
        for b in &qs {
            for (r, r2) in [(1, 1), (2, 1), (2, 3)] {
                let sets = [ResonantSet::b_prime(a.clone(), r), ResonantSet::b_prime(b.clone(), r2)];
                let t = 6;
                assert_eq!(
                    measure::measure_intersection(&sets, 1, t).unwrap(),
                    brute::measure_intersection(&sets, 1, t).unwrap(),
                    "{a} {b} {r} {r2}"
                );
            }
        }
    }
    let q = PolyVector::from_coeffs(&f2, &[vec![0, 1], vec![1]]).unwrap();
    let q2 = PolyVector::from_coeffs(&f2, &[vec![1, 1], vec![0, 1]]).unwrap();
    let sets = [ResonantSet::b(q.clone(), 2), ResonantSet::b(q2.clone(), 1)];
    assert_eq!(measure::measure_intersection(&sets, 1, 4).unwrap(), brute::measure_intersection(&sets, 1, 4).unwrap());
}

#[test]
fn independent_pairs_multiply() {
    let f2 = FieldSpec::of_order(2).unwrap();
    let qs: Vec<PolyVector> = (0..=2).flat_map(|d| enumerate_vectors(&f2, 2, d).collect::<Vec<_>>()).collect();
    for a in &qs {
        for b in &qs {
            if measure::linearly_dependent(a, b).unwrap() {
                continue;
            }
            for r in 1..=3 {
                for r2 in 1..=3 {
                    let sa = ResonantSet::b(a.clone(), r);
                    let sb = ResonantSet::b(b.clone(), r2);
                    let t = 5;
                    let both = measure::measure_intersection(&[sa.clone(), sb.clone()], 1, t).unwrap();
                    let prod = measure::measure_set(&sa, 1, t).unwrap().mul(&measure::measure_set(&sb, 1, t).unwrap());
                    assert_eq!(both, prod, "{a} {b} {r} {r2}");
                }
            }
        }
    }
}

#[test]
fn monotone_in_radius_and_contained_in_b() {
    let f3 = FieldSpec::of_order(3).unwrap();
    for d in 1..=3 {
        for q in enumerate_polys(&f3, d, false) {
            let mut last = KadicMeasure::one(3);
            for r in 0..=3 {
                let b = measure::measure_b(&PolyVector::scalar(q.clone()), r, 1, d + 3).unwrap();
                let bp = measure::measure_b_prime(&q, r, 1, d + 3).unwrap();
                assert!(b <= last);
                assert!(bp <= b);
                last = b;
            }
        }
    }
}

#[test]
fn totient_enumeration_count_matches_measure_numerator() {
    // μ(B'(q, k^{-r})) · k^{r + deg q} = Φ(q) for n = 1
    let f2 = FieldSpec::of_order(2).unwrap();
    for q in enumerate_polys(&f2, 5, true) {
        let mu = measure::measure_b_prime(&q, 1, 1, 6).unwrap();
        let n = mu.scale_pow(6).to_rational();
        assert_eq!(n, num_rational::BigRational::from_integer(totient(&q).unwrap().into()));
    }
}

#[test]
fn fast_membership_agrees_with_definition() {
    use ffdioph::laurent::LaurentMatrix;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for k in [2u32, 3] {
        let spec = FieldSpec::of_order(k).unwrap();
        for m in [1usize, 2] {
            for d in 0..=2 {
                for q in enumerate_vectors(&spec, m, d) {
                    for r in 0..=3 {
                        let mut sets = vec![ResonantSet::b(q.clone(), r), ResonantSet::b_dprime(q.clone(), r)];
                        if m == 1 {
                            sets.push(ResonantSet::b_prime(q.get(0).clone(), r));
                        }
                        let depth = d + r as usize;
                        for _ in 0..6 {
                            let digits: Vec<u32> = (0..m * 2 * depth).map(|_| rng.gen_range(0..k)).collect();
                            let a = LaurentMatrix::from_digits(&spec, m, 2, depth, &digits).unwrap();
                            for set in &sets {
                                assert_eq!(
                                    measure::contains(set, &a).unwrap(),
                                    brute::contains(set, &a).unwrap(),
                                    "q={q} r={r} {:?}",
                                    set.kind
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
