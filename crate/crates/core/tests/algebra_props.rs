use ffdioph::linalg::Matrix;
use ffdioph::poly::{factor, factor_trial_division, is_irreducible};
use ffdioph::{AbsValue, FieldSpec, LaurentSeries, Polynomial};
use proptest::prelude::*;

const ORDERS: [u32; 6] = [2, 3, 4, 5, 8, 9];

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|k| FieldSpec::of_order(k).unwrap())
}

fn digits(k: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..k, 0..=max_len)
}

fn poly(spec: &FieldSpec, coeffs: &[u32]) -> Polynomial {
    Polynomial::new(spec, coeffs.to_vec()).unwrap()
}

/// An exact series `Σ c_j X^{-(lead + j)}`.
fn series(spec: &FieldSpec, lead: i64, coeffs: &[u32]) -> LaurentSeries {
    LaurentSeries::new(spec, lead, coeffs.to_vec(), None).unwrap()
}

fn field_and_digits(n: usize, max_len: usize) -> impl Strategy<Value = (FieldSpec, Vec<Vec<u32>>)> {
    field().prop_flat_map(move |f| {
        let k = f.k();
        (Just(f), prop::collection::vec(digits(k, max_len), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn field_axioms(f in field(), a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let k = f.k();
        let (a, b, c) = (a % k, b % k, c % k);
        prop_assert_eq!(f.mul(a, b), f.mul_reference(a, b));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, u64::from(k - 1)), 1);
        }
    }

    #[test]
    fn division_with_remainder((f, v) in field_and_digits(2, 7)) {
        let a = poly(&f, &v[0]);
        let b = poly(&f, &v[1]);
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.degree() < b.degree());
        prop_assert_eq!(a.mul(&b).abs(), a.abs().mul(b.abs()));
    }

    #[test]
    fn gcd_divides_and_is_monic((f, v) in field_and_digits(3, 5)) {
        let c = poly(&f, &v[2]);
        prop_assume!(!c.is_zero());
        let a = poly(&f, &v[0]).mul(&c);
        let b = poly(&f, &v[1]).mul(&c);
        if a.is_zero() && b.is_zero() {
            prop_assert!(a.gcd(&b).is_err());
        } else {
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(g.divides(&a) && g.divides(&b));
            prop_assert!(c.divides(&g));
        }
    }

    #[test]
    fn factorizations_agree((f, v) in field_and_digits(1, 8)) {
        let a = poly(&f, &v[0]);
        prop_assume!(!a.is_zero());
        let fast = factor(&a).unwrap();
        prop_assert_eq!(fast.product(&f), a.clone());
        prop_assert!(fast.factors.iter().all(|(p, _)| p.is_monic() && is_irreducible(p)));
        if a.degree() <= Some(6) {
            prop_assert_eq!(fast, factor_trial_division(&a).unwrap());
        }
    }

    #[test]
    fn absolute_value_is_ultrametric_and_multiplicative(
        (f, v) in field_and_digits(2, 6),
        la in -4i64..4,
        lb in -4i64..4,
    ) {
        let a = series(&f, la, &v[0]);
        let b = series(&f, lb, &v[1]);
        let (x, y) = (a.abs().unwrap(), b.abs().unwrap());
        let sum = a.add(&b).abs().unwrap();
        prop_assert!(sum <= x.max(y));
        if x != y {
            prop_assert_eq!(sum, x.max(y));
        }
        prop_assert_eq!(a.mul(&b).unwrap().abs().unwrap(), x.mul(y));
    }

    #[test]
    fn shift_scales_absolute_value((f, v) in field_and_digits(1, 6), lead in -4i64..4, d in -5i64..5) {
        let a = series(&f, lead, &v[0]);
        let expected = match a.abs().unwrap() {
            AbsValue::Zero => AbsValue::Zero,
            AbsValue::Pow(e) => AbsValue::Pow(e + d),
        };
        prop_assert_eq!(a.shift(d).abs().unwrap(), expected);
    }

    #[test]
    fn truncation_is_sound(
        (f, v) in field_and_digits(2, 8),
        la in -3i64..3,
        lb in -3i64..3,
        ta in 0i64..8,
        tb in 0i64..8,
    ) {
        let a = series(&f, la, &v[0]);
        let b = series(&f, lb, &v[1]);
        let exact = a.mul(&b).unwrap();
        let approx = a.truncate(la + ta).mul(&b.truncate(lb + tb)).unwrap();
        let t = approx.precision().unwrap();
        for i in (la + lb - 1)..=t {
            prop_assert_eq!(approx.coeff(i).unwrap(), exact.coeff(i).unwrap(), "index {}", i);
        }
        let sum = a.truncate(la + ta).add(&b);
        for i in (la.min(lb) - 1)..=sum.precision().unwrap() {
            prop_assert_eq!(sum.coeff(i).unwrap(), a.add(&b).coeff(i).unwrap());
        }
    }

    #[test]
    fn inverse_is_inverse((f, v) in field_and_digits(1, 6), lead in -3i64..3, p in 0i64..10) {
        let a = series(&f, lead, &v[0]);
        prop_assume!(!a.is_known_zero());
        let inv = a.inverse(-lead + p).unwrap();
        let one = a.mul(&inv).unwrap();
        prop_assert!(one.precision().unwrap() >= p);
        for i in -3..=p {
            prop_assert_eq!(one.coeff(i).unwrap(), u32::from(i == 0));
        }
    }

    #[test]
    fn rank_nullity_and_solve(
        (f, rows) in field().prop_flat_map(|f| {
            let k = f.k();
            (Just(f), (1usize..5).prop_flat_map(move |c| prop::collection::vec(prop::collection::vec(0..k, c), 1..5)))
        }),
        seed in prop::collection::vec(0u32..9, 5),
    ) {
        let cols = rows[0].len();
        let m = Matrix::from_rows(&f, cols, &rows);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for x in &kernel {
            prop_assert!(m.mul_vec(x).iter().all(|&c| c == 0));
        }
        let y: Vec<u32> = seed.iter().take(cols).map(|&c| c % f.k()).collect();
        let b = m.mul_vec(&y);
        let x = m.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&x), b);
    }
}
