use ffsum_core::series::zeta_series;
use ffsum_core::zeta::zeta_derivative_at;
use ffsum_core::{
    class_number, construct_field, count_points, inverse_zeros, l_polynomial, zeta_at_q_power, zeta_eval,
    HyperellipticCurve, Integer, LPolynomial, Rational,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rug::ops::Pow;

fn worked() -> HyperellipticCurve {
    HyperellipticCurve::parse("q=5;f=0,1,0,1").unwrap()
}

/// `#{(x, y) in F_25^2 : y^2 = x^3 + x} + 1`, with `F_25 = F_5[t]/(t^2 - 2)`.
fn worked_n2_by_pairs() -> u64 {
    type E = (u64, u64);
    let mul = |a: E, b: E| ((a.0 * b.0 + 2 * a.1 * b.1) % 5, (a.0 * b.1 + a.1 * b.0) % 5);
    let add = |a: E, b: E| ((a.0 + b.0) % 5, (a.1 + b.1) % 5);
    let all: Vec<E> = (0..25).map(|i| (i % 5, i / 5)).collect();
    let mut count = 1;
    for &x in &all {
        let rhs = add(mul(mul(x, x), x), x);
        count += all.iter().filter(|&&y| mul(y, y) == rhs).count() as u64;
    }
    count
}

#[test]
fn worked_curve_counts() {
    let c = worked();
    assert_eq!(count_points(&c, 1).unwrap(), 4);
    let n2 = worked_n2_by_pairs();
    assert_eq!(n2, 32);
    assert_eq!(count_points(&c, 2).unwrap(), n2);
}

#[test]
fn worked_curve_zeta() {
    let l = l_polynomial(&worked().point_counts().unwrap()).unwrap();
    assert_eq!(l.coefficients(), &[Integer::from(1), Integer::from(-2), Integer::from(5)]);
    assert_eq!(class_number(&l), 4);
    // (1 - 2/25 + 5/625) / ((24/25)(20/25))
    assert_eq!(zeta_at_q_power(&l, 2).unwrap(), Rational::from((29, 24)));
    let z = inverse_zeros(&l).unwrap();
    assert!((z.gamma[0] - Complex64::new(1.0, 2.0)).norm() < 1e-12);
    assert!((z.gamma[1] - Complex64::new(1.0, -2.0)).norm() < 1e-12);
    assert!((z.theta[0] - 2f64.atan2(1.0)).abs() < 1e-12);
    assert!((z.theta[0] - 1.1071487).abs() < 1e-7);
}

#[test]
fn derivative_matches_finite_difference() {
    let l = l_polynomial(&worked().point_counts().unwrap()).unwrap();
    let u0 = Complex64::new(1.0, 2.0).inv();
    let d = zeta_derivative_at(&l, u0).unwrap();
    assert!(d.norm() > 0.0);
    let h = 1e-6;
    let fd = (zeta_eval(&l, u0 + h).unwrap() - zeta_eval(&l, u0 - h).unwrap()) / (2.0 * h);
    assert!((fd - d).norm() <= 1e-5 * d.norm());
    // L'(0) + (1 + q) L(0)
    let d0 = zeta_derivative_at(&l, Complex64::new(0.0, 0.0)).unwrap();
    assert!((d0 - Complex64::new(-2.0 + 1.0 + 5.0, 0.0)).norm() < 1e-12);
}

#[test]
fn genus_zero_divisor_counts() {
    for q in [2u64, 3, 5] {
        let s = zeta_series(&LPolynomial::genus0(q), 12).unwrap();
        for n in 0..=12u32 {
            let expected = (Integer::from(q).pow(n + 1) - 1u32) / Integer::from(q - 1);
            assert_eq!(s.coeff(n as usize), &expected);
        }
    }
}

#[test]
fn pole_is_rejected() {
    let l = LPolynomial::genus0(5);
    assert!(zeta_eval(&l, Complex64::new(0.2, 0.0)).is_err());
    assert!(zeta_eval(&l, Complex64::new(1.0, 0.0)).is_err());
}

fn small_curve() -> impl Strategy<Value = HyperellipticCurve> {
    (prop::sample::select(vec![3u64, 5, 7, 9]), 1usize..=2)
        .prop_flat_map(|(q, g)| (Just(q), prop::collection::vec(0..q, 2 * g + 1)))
        .prop_filter_map("singular f", |(q, lower)| {
            let (p, n) = if q == 9 { (3, 2) } else { (q, 1) };
            let field = construct_field(p, n).unwrap();
            let mut f: Vec<_> = lower.into_iter().map(|i| field.from_index(i)).collect();
            f.push(field.one());
            HyperellipticCurve::new(field, f).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zeta_invariants(c in small_curve()) {
        let (q, g) = (c.q(), c.genus());
        let counts = c.point_counts().unwrap();
        for (i, &n) in counts.n.iter().enumerate() {
            let m = i as u32 + 1;
            let dev = (n as f64 - q.pow(m) as f64 - 1.0).abs();
            prop_assert!(dev <= 2.0 * g as f64 * (q as f64).powf(m as f64 / 2.0) + 1e-9);
        }
        let l = l_polynomial(&counts).unwrap();
        prop_assert_eq!(&l, &l_polynomial(&c.point_counts().unwrap()).unwrap());
        let b = l.coefficients();
        for i in 0..=g {
            prop_assert_eq!(&b[2 * g - i], &(Integer::from(q).pow((g - i) as u32) * &b[i]));
        }
        prop_assert!(class_number(&l) > 0);

        let z = inverse_zeros(&l).unwrap();
        prop_assert!(z.rh_deviation() < 1e-9);
        // the zeros reproduce L
        for (i, e) in z.expand().iter().enumerate() {
            let bi = b[i].to_f64();
            prop_assert!((e.re - bi).abs() <= 1e-9 * bi.abs().max(1.0) && e.im.abs() < 1e-9 * bi.abs().max(1.0));
        }
        // counts past g from L agree with direct counting
        let ext = l.point_counts_extended(g + 2);
        for m in 1..=(g + 2) as u32 {
            let direct = count_points(&c, m).unwrap();
            prop_assert_eq!(&ext[m as usize - 1], &Integer::from(direct));
            let s: Complex64 = z.gamma.iter().map(|gm| gm.powu(m)).sum();
            let target = (q.pow(m) + 1) as f64 - direct as f64;
            prop_assert!((s.re - target).abs() <= 1e-6 * target.abs().max(1.0));
        }
        // Riemann-Roch: coefficient n of Z is h (q^{n+1-g} - 1)/(q - 1) once n >= 2g - 1
        let s = zeta_series(&l, 4 * g + 2).unwrap();
        let h = class_number(&l);
        for n in (2 * g - 1)..=(4 * g + 2) {
            let expected = Integer::from(&h * (Integer::from(q).pow((n + 1 - g) as u32) - 1u32)) / (q - 1);
            prop_assert_eq!(s.coeff(n), &expected);
        }
    }

    #[test]
    fn conjugate_equals_reflection(c in small_curve()) {
        let l = l_polynomial(&c.point_counts().unwrap()).unwrap();
        let z = inverse_zeros(&l).unwrap();
        let q = c.q() as f64;
        for gm in &z.gamma {
            let a = zeta_eval(&l, gm.conj()).unwrap();
            let b = zeta_eval(&l, q / gm).unwrap();
            prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
        }
    }
}
