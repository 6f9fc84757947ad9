//! Seeded random elements for property checks.

use rand::Rng;

use super::{BladeMask, Multivector};

/// Dense multivector with coefficients uniform in [-1, 1].
pub fn random_dense<R: Rng>(rng: &mut R, r: u8) -> Multivector {
    let dim = 1u32 << r;
    Multivector::from_terms(
        r,
        (0..dim).map(|m| (m as BladeMask, rng.gen_range(-1.0..1.0))),
    )
    .expect("masks in range")
}

/// Random grade-1 element.
pub fn random_vector<R: Rng>(rng: &mut R, r: u8) -> Multivector {
    let comps: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::from_vector(r, &comps)
}

/// Random unit grade-1 element.
pub fn random_unit_vector<R: Rng>(rng: &mut R, r: u8) -> Multivector {
    loop {
        let v = random_vector(rng, r);
        let n = v.norm();
        if n > 1e-3 {
            return v.scale(1.0 / n);
        }
    }
}

/// Product of `2k` random unit vectors: a Spin-group element.
pub fn random_spin<R: Rng>(rng: &mut R, r: u8, k: usize) -> Multivector {
    let mut acc = Multivector::scalar(r, 1.0);
    for _ in 0..2 * k {
        acc = acc.mul_mv(&random_unit_vector(rng, r));
    }
    acc
}

/// Product of `k` random unit vectors: a Pin-group element.
pub fn random_pin<R: Rng>(rng: &mut R, r: u8, k: usize) -> Multivector {
    let mut acc = Multivector::scalar(r, 1.0);
    for _ in 0..k {
        acc = acc.mul_mv(&random_unit_vector(rng, r));
    }
    acc
}
