use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::*;
use super::*;

/// Brute-force blade product: expand both masks to factor lists, bubble-sort
/// the concatenation counting transpositions, cancel adjacent equal factors
/// with e_i^2 = -1.  Independent of the popcount shortcut in the library.
fn oracle_blade_product(a: BladeMask, b: BladeMask) -> (BladeMask, f64) {
    let mut factors: Vec<u32> = Vec::new();
    for m in [a, b] {
        let mut rest = m;
        while rest != 0 {
            factors.push(rest.trailing_zeros());
            rest &= rest - 1;
        }
    }
    let mut sign = 1.0;
    // bubble sort, one transposition at a time
    loop {
        let mut swapped = false;
        for i in 1..factors.len() {
            if factors[i - 1] > factors[i] {
                factors.swap(i - 1, i);
                sign = -sign;
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    // cancel adjacent duplicates
    let mut reduced: Vec<u32> = Vec::new();
    for f in factors {
        if reduced.last() == Some(&f) {
            reduced.pop();
            sign = -sign;
        } else {
            reduced.push(f);
        }
    }
    let mask = reduced.iter().fold(0u16, |m, &i| m | (1 << i));
    (mask, sign)
}

fn oracle_product(a: &Multivector, b: &Multivector) -> Multivector {
    let mut out = Multivector::zero(a.r());
    for &(ma, ca) in a.terms() {
        for &(mb, cb) in b.terms() {
            let (m, s) = oracle_blade_product(ma, mb);
            let term = Multivector::from_terms(a.r(), [(m, s * ca * cb)]).unwrap();
            out += &term;
        }
    }
    out
}

fn assert_close(a: &Multivector, b: &Multivector, tol: f64) {
    let diff = a - b;
    assert!(
        diff.norm() <= tol,
        "multivectors differ by {:.3e}:\n  {:?}\n  {:?}",
        diff.norm(),
        a,
        b
    );
}

fn e(r: u8, i: u8) -> Multivector {
    Multivector::basis_vector(r, i)
}

#[test]
fn product_matches_oracle_on_all_blade_pairs() {
    for r in 1..=5u8 {
        let dim = 1u16 << r;
        for a in 0..dim {
            for b in 0..dim {
                let (mask, sign) = oracle_blade_product(a, b);
                assert_eq!(blade_product_sign(a, b), sign, "a={a:#b} b={b:#b}");
                let pa = Multivector::basis_blade(r, a);
                let pb = Multivector::basis_blade(r, b);
                let prod = pa.mul_mv(&pb);
                assert_eq!(prod.terms().len(), 1);
                assert_eq!(prod.terms()[0], (mask, sign));
            }
        }
    }
}

#[test]
fn product_matches_oracle_on_dense_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let a = random_dense(&mut rng, 4);
        let b = random_dense(&mut rng, 4);
        let fast = a.mul_mv(&b);
        let slow = oracle_product(&a, &b);
        assert_close(&fast, &slow, 1e-12);
    }
}

#[test]
fn generator_squares_and_anticommutation() {
    let r = 4;
    let one = Multivector::scalar(r, 1.0);
    assert_close(&e(r, 0).mul_mv(&e(r, 0)), &one.scale(-1.0), 0.0);
    let e12 = e(r, 0).mul_mv(&e(r, 1));
    let e21 = e(r, 1).mul_mv(&e(r, 0));
    assert_close(&e21, &e12.scale(-1.0), 0.0);
}

#[test]
fn volume_form_squares() {
    // Omega_n^2 = (-1)^{n(n+1)/2}, verified against the oracle.
    for r in 3..=6u8 {
        for n in 1..=r {
            let om = volume_form(n, r).unwrap();
            let sq = om.mul_mv(&om);
            let expected = if (n as u32 * (n as u32 + 1) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let (mask, sign) = oracle_blade_product(om.terms()[0].0, om.terms()[0].0);
            assert_eq!(mask, 0);
            assert_eq!(sign, expected);
            assert_close(&sq, &Multivector::scalar(r, expected), 0.0);
        }
    }
    // the two named special cases
    let om34 = volume_form(3, 4).unwrap();
    assert_eq!(om34.mul_mv(&om34).scalar_part(), 1.0);
    for r in 3..=8u8 {
        let om2 = volume_form(2, r).unwrap();
        assert_eq!(om2.mul_mv(&om2).scalar_part(), -1.0);
    }
}

#[test]
fn grade_projection_examples() {
    let r = 3;
    let a = Multivector::from_terms(r, [(0, 1.0), (0b001, 1.0), (0b011, 1.0)]).unwrap();
    assert_close(&a.grade_project(1).unwrap(), &e(r, 0), 0.0);
    let e123 = volume_form(3, 3).unwrap();
    assert_close(&e123.grade_project(3).unwrap(), &e123, 0.0);
    // (1 - e1e2)(1 + e1e2) = 2, computed through the product
    let p = Multivector::from_terms(r, [(0, 1.0), (0b011, -1.0)]).unwrap();
    let q = Multivector::from_terms(r, [(0, 1.0), (0b011, 1.0)]).unwrap();
    let prod = p.mul_mv(&q);
    assert_close(&prod.grade_project(0).unwrap(), &Multivector::scalar(r, 2.0), 0.0);
    assert!(a.grade_project(4).is_err());
}

#[test]
fn involution_examples() {
    let r = 3;
    assert_close(&Multivector::scalar(r, 1.0).grade_involution(), &Multivector::scalar(r, 1.0), 0.0);
    assert_close(&e(r, 0).grade_involution(), &e(r, 0).scale(-1.0), 0.0);
    let a = Multivector::from_terms(r, [(0, 2.0), (0b011, 3.0), (0b100, 1.0)]).unwrap();
    let expect = Multivector::from_terms(r, [(0, 2.0), (0b011, 3.0), (0b100, -1.0)]).unwrap();
    assert_close(&a.grade_involution(), &expect, 0.0);

    // reversion on low blades, against the oracle's transposition count
    assert_close(&e(r, 0).reversion(), &e(r, 0), 0.0);
    let e12 = e(r, 0).mul_mv(&e(r, 1));
    assert_close(&e12.reversion(), &e12.scale(-1.0), 0.0);
    let e123 = volume_form(3, 3).unwrap();
    assert_close(&e123.reversion(), &e123.scale(-1.0), 0.0);
}

#[test]
fn norm_map_examples() {
    let r = 4;
    let one = Multivector::scalar(r, 1.0);
    assert_close(&e(r, 0).norm_map(), &one, 0.0);
    let e12 = e(r, 0).mul_mv(&e(r, 1));
    assert_close(&e12.norm_map(), &one, 0.0);
    let a = Multivector::from_terms(r, [(0, 1.0), (0b0011, 1.0)]).unwrap();
    assert_close(&a.norm_map(), &Multivector::scalar(r, 2.0), 0.0);
}

#[test]
fn quad_form_and_inner_examples() {
    let r = 4;
    let v = &e(r, 0) + &e(r, 1);
    assert_eq!(v.quad_form(), 2.0);
    assert_eq!(e(r, 0).inner(&e(r, 1)), 0.0);
    assert_eq!(Multivector::scalar(r, 3.0).quad_form(), 9.0);
    // dual route: scalar part of the norm map
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = random_dense(&mut rng, r);
        let b = random_dense(&mut rng, r);
        assert!((a.quad_form() - a.norm_map().scalar_part()).abs() < 1e-12);
        let via_product = a.alpha_top().mul_mv(&b).scalar_part();
        assert!((a.inner(&b) - via_product).abs() < 1e-12);
        assert!((a.inner(&a) - a.quad_form()).abs() < 1e-12);
    }
}

#[test]
fn inverse_in_e_examples() {
    let r = 4;
    let tol = 1e-9;
    let one = Multivector::scalar(r, 1.0);

    let inv = e(r, 0).inverse_in_e(tol).unwrap();
    assert_close(&inv, &e(r, 0).scale(-1.0), 0.0);
    assert_close(&e(r, 0).mul_mv(&inv), &one, 1e-15);

    let a = Multivector::from_terms(r, [(0, 1.0), (0b0011, 1.0)]).unwrap();
    let ainv = a.inverse_in_e(tol).unwrap();
    let expect = Multivector::from_terms(r, [(0, 0.5), (0b0011, -0.5)]).unwrap();
    assert_close(&ainv, &expect, 1e-15);
    assert_close(&a.mul_mv(&ainv), &one, 1e-15);

    let bad = Multivector::from_terms(r, [(0b0011, 1.0), (0b1100, 1.0)])
        .unwrap()
        .scale(1.0 / 2f64.sqrt());
    assert!(matches!(bad.inverse_in_e(tol), Err(crate::error::Error::NotInvertible(_))));
}

#[test]
fn general_inverse_agrees_and_extends() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let one = Multivector::scalar(4, 1.0);
    for _ in 0..20 {
        let s = random_spin(&mut rng, 4, 2);
        let gi = s.general_inverse().unwrap();
        assert_close(&s.mul_mv(&gi), &one, 1e-10);
        let ei = s.inverse_in_e(1e-9).unwrap();
        assert_close(&gi, &ei, 1e-10);
    }
    // an element outside E that still inverts
    let a = Multivector::from_terms(4, [(0b0111, 1.0), (0b0001, 0.3)]).unwrap();
    assert!(a.inverse_in_e(1e-9).is_err());
    let gi = a.general_inverse().unwrap();
    assert_close(&a.mul_mv(&gi), &one, 1e-12);
}

#[test]
fn adjoint_examples() {
    let r = 3;
    let tol = 1e-9;
    assert_close(
        &twisted_adjoint(&e(r, 0), &e(r, 0), tol).unwrap(),
        &e(r, 0).scale(-1.0),
        1e-15,
    );
    assert_close(&twisted_adjoint(&e(r, 0), &e(r, 1), tol).unwrap(), &e(r, 1), 1e-15);
    let e12 = e(r, 0).mul_mv(&e(r, 1));
    assert_close(&adjoint(&e12, &e(r, 0), tol).unwrap(), &e(r, 0).scale(-1.0), 1e-15);
}

#[test]
fn reflection_preserves_quadratic_form_and_negates_axis() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in [3u8, 4, 6] {
        for _ in 0..200 {
            let w = random_unit_vector(&mut rng, r);
            let v = random_vector(&mut rng, r);
            let img = twisted_adjoint(&w, &v, 1e-9).unwrap();
            assert!((img.quad_form() - v.quad_form()).abs() < 1e-12);
            // w-component negated, perpendicular part fixed
            let c = v.inner(&w);
            let reflected = &v - &w.scale(2.0 * c);
            assert_close(&img, &reflected, 1e-12);
        }
    }
}

#[test]
fn spin_adjoint_is_special_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = 4u8;
    for _ in 0..100 {
        let s = random_spin(&mut rng, r, 2);
        let mut mat = nalgebra::DMatrix::<f64>::zeros(r as usize, r as usize);
        for i in 0..r {
            let img = adjoint(&s, &e(r, i), 1e-9).unwrap();
            assert!(img.off_grade_norm(1) < 1e-12);
            for (j, c) in img.vector_components().into_iter().enumerate() {
                mat[(j, i as usize)] = c;
            }
        }
        let det = mat.determinant();
        assert!((det - 1.0).abs() < 1e-9, "det = {det}");
    }
}

#[test]
fn vector_anticommutator_is_inner_product() {
    // vw + wv = -2 B(v, w) on random vectors
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for r in 3..=6u8 {
        for _ in 0..250 {
            let v = random_unit_vector(&mut rng, r);
            let w = random_unit_vector(&mut rng, r);
            let anti = &v.mul_mv(&w) + &w.mul_mv(&v);
            let expect = Multivector::scalar(r, -2.0 * v.inner(&w));
            assert_close(&anti, &expect, 1e-12);
        }
    }
}

#[test]
fn norm_map_multiplicative_on_vector_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let r = 5u8;
    for k in 1..=4usize {
        for _ in 0..100 {
            let vs: Vec<Multivector> = (0..k).map(|_| random_vector(&mut rng, r)).collect();
            let prod = vs.iter().fold(Multivector::scalar(r, 1.0), |acc, v| acc.mul_mv(v));
            let expected: f64 = vs.iter().map(|v| v.quad_form()).product();
            let nm = prod.norm_map();
            assert!((nm.scalar_part() - expected).abs() < 1e-10);
            assert!(nm.off_grade_norm(0) < 1e-10);
        }
    }
}

#[test]
fn context_validates_dimension() {
    assert!(AlgebraContext::new(2).is_err());
    assert!(AlgebraContext::new(17).is_err());
    let ctx = AlgebraContext::new(4).unwrap();
    assert!(ctx.membership(&e(4, 0), Membership::Pin).unwrap());
}

#[test]
fn json_round_trip_is_ordered() {
    let a = Multivector::from_terms(4, [(0b1000, -0.25), (0, 1.5), (0b0011, 2.0)]).unwrap();
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(text, r#"{"r":4,"terms":[[0,1.5],[3,2.0],[8,-0.25]]}"#);
    let back: Multivector = serde_json::from_str(&text).unwrap();
    assert_eq!(a, back);
}

proptest! {
    #[test]
    fn involutions_are_involutive(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_dense(&mut rng, 4);
        prop_assert!((&a.grade_involution().grade_involution() - &a).norm() == 0.0);
        prop_assert!((&a.reversion().reversion() - &a).norm() == 0.0);
    }

    #[test]
    fn reversion_is_anti_automorphism(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_dense(&mut rng, 4);
        let b = random_dense(&mut rng, 4);
        let lhs = a.mul_mv(&b).reversion();
        let rhs = b.reversion().mul_mv(&a.reversion());
        prop_assert!((&lhs - &rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn product_is_associative(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_dense(&mut rng, 4);
        let b = random_dense(&mut rng, 4);
        let c = random_dense(&mut rng, 4);
        let lhs = a.mul_mv(&b).mul_mv(&c);
        let rhs = a.mul_mv(&b.mul_mv(&c));
        prop_assert!((&lhs - &rhs).norm() < 1e-11 * lhs.norm().max(1.0));
    }
}
