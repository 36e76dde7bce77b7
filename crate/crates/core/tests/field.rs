use std::sync::Arc;

use ffsum_core::{construct_field, field_arith, quadratic_character, FieldOp, FieldSpec};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 7] = [(3, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)];

#[test]
fn f9_modulus_is_x2_plus_1() {
    // scan of the monic quadratics over F_3 in lexicographic order: x^2, x^2+1, ...
    // x^2 has the root 0; x^2 + 1 has no root since -1 is not a square mod 3
    let f9 = construct_field(3, 2).unwrap();
    assert_eq!(f9.modulus, vec![1, 0, 1]);
    let x = f9.element(&[0, 1]).unwrap();
    assert_eq!(field_arith(&x, &x, FieldOp::Mul).unwrap(), f9.from_int(2));
}

#[test]
fn character_of_two_mod_five() {
    let f5 = construct_field(5, 1).unwrap();
    assert_eq!(quadratic_character(&f5.from_int(2)).unwrap(), -1);
    assert_eq!(quadratic_character(&f5.from_int(4)).unwrap(), 1);
    assert_eq!(quadratic_character(&f5.zero()).unwrap(), 0);
}

#[test]
fn moduli_are_irreducible_and_deterministic() {
    for (p, n) in FIELDS {
        let a = construct_field(p, n).unwrap();
        let b = construct_field(p, n).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.modulus.len(), n as usize + 1);
        // irreducible iff the field has no zero divisors: every nonzero element is invertible
        for e in a.elements().skip(1) {
            let inv = e.inv().unwrap();
            assert!(e.mul(&inv).unwrap().is_one());
        }
    }
}

#[test]
fn character_by_exhaustion() {
    for (p, n) in FIELDS {
        let f = construct_field(p, n).unwrap();
        let squares: std::collections::HashSet<u64> =
            f.elements().skip(1).map(|a| a.mul(&a).unwrap().index()).collect();
        assert_eq!(squares.len() as u64, (f.q - 1) / 2);
        let elems: Vec<_> = f.elements().skip(1).collect();
        for a in &elems {
            let ca = quadratic_character(a).unwrap();
            assert_eq!(ca == 1, squares.contains(&a.index()), "{a:?}");
            for b in elems.iter().step_by(3) {
                let cab = quadratic_character(&a.mul(b).unwrap()).unwrap();
                assert_eq!(ca * quadratic_character(b).unwrap(), cab);
            }
        }
    }
}

#[test]
fn mixing_fields_is_an_error() {
    let a = construct_field(3, 2).unwrap().one();
    let b = construct_field(5, 1).unwrap().one();
    assert!(field_arith(&a, &b, FieldOp::Add).is_err());
    assert!(construct_field(4, 1).is_err());
    assert!(construct_field(1, 1).is_err());
}

fn field_and_elements() -> impl Strategy<Value = (Arc<FieldSpec>, u64, u64, u64)> {
    (0..FIELDS.len()).prop_flat_map(|i| {
        let (p, n) = FIELDS[i];
        let f = construct_field(p, n).unwrap();
        let q = f.q;
        (Just(f), 0..q, 0..q, 0..q)
    })
}

proptest! {
    #[test]
    fn ring_axioms((f, a, b, c) in field_and_elements()) {
        let (a, b, c) = (f.from_index(a), f.from_index(b), f.from_index(c));
        prop_assert!(a.coeffs().iter().all(|&x| x < f.p));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().mul(&c).unwrap(), a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.sub(&b).unwrap().add(&b).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            // Fermat
            prop_assert!(a.pow(f.q - 1).is_one());
            prop_assert_eq!(field_arith(&a, &a, FieldOp::Pow(f.q + 1)).unwrap(), a.mul(&a).unwrap());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn character_is_euler_criterion((f, a, _b, _c) in field_and_elements()) {
        let a = f.from_index(a);
        let e = a.pow((f.q - 1) / 2);
        let expected = if a.is_zero() { 0 } else if e.is_one() { 1 } else { -1 };
        prop_assert_eq!(quadratic_character(&a).unwrap(), expected);
    }
}
