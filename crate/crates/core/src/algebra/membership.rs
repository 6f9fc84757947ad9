//! Predicate tests for the group and variety subsets of Cl(V_r).

use super::{grade_of, twisted_adjoint, Multivector};
use crate::error::{Error, Result};

/// Subsets of Cl(V_r) with a finite membership test.
///
/// * `E`: norm map is scalar.
/// * `SE`: E with unit quadratic form.
/// * `D0`/`D1`: eigenspaces of alpha(.)^T with eigenvalue +1 / -1.
/// * `J`: D1 and SE; such elements square to -1.
/// * `Pin`: unit norm and the twisted adjoint maps each e_i to grade 1.
/// * `Spin`: Pin and even (fixed by grade involution).
/// * `MN(n)`: unit pure grade n modelling an oriented n-plane.  For n = 2
///   decomposability is the vanishing grade-4 part of the square; for other
///   n the twisted-adjoint grade-preservation test is used.  Equivalence
///   with orbit membership for n outside {1, 2, r-1, r} is standard but
///   assumed, not proved here.
/// * `SphereTilde`: unit quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    E,
    SE,
    D0,
    D1,
    J,
    Pin,
    Spin,
    MN(u8),
    SphereTilde,
}

fn is_e(a: &Multivector, tol: f64) -> bool {
    let nm = a.norm_map();
    let scal = nm.scalar_part();
    let off = (nm.quad_form() - scal * scal).max(0.0).sqrt();
    off <= tol * scal.abs().max(1.0)
}

fn is_unit(a: &Multivector, tol: f64) -> bool {
    (a.quad_form() - 1.0).abs() <= tol
}

fn alpha_top_parity(a: &Multivector, sign: f64, tol: f64) -> bool {
    let diff = &a.alpha_top() - &a.scale(sign);
    diff.norm() <= tol * a.norm().max(1.0)
}

/// Twisted adjoint maps every basis vector to a grade-1 element.
fn preserves_vectors(a: &Multivector, tol: f64) -> bool {
    let r = a.r();
    for i in 0..r {
        let e = Multivector::basis_vector(r, i);
        match twisted_adjoint(a, &e, tol) {
            Ok(img) => {
                if img.off_grade_norm(1) > tol * img.norm().max(1.0) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

fn is_pure_grade(a: &Multivector, n: u32, tol: f64) -> bool {
    a.off_grade_norm(n) <= tol * a.norm().max(1.0)
}

/// Membership predicate within tolerance `tol`.
pub fn membership(a: &Multivector, kind: Membership, tol: f64) -> Result<bool> {
    Ok(match kind {
        Membership::E => is_e(a, tol),
        Membership::SE => is_e(a, tol) && is_unit(a, tol),
        Membership::D0 => alpha_top_parity(a, 1.0, tol),
        Membership::D1 => alpha_top_parity(a, -1.0, tol),
        Membership::J => {
            alpha_top_parity(a, -1.0, tol) && is_e(a, tol) && is_unit(a, tol)
        }
        Membership::Pin => is_e(a, tol) && is_unit(a, tol) && preserves_vectors(a, tol),
        Membership::Spin => {
            let even = {
                let diff = &a.grade_involution() - a;
                diff.norm() <= tol * a.norm().max(1.0)
            };
            even && is_e(a, tol) && is_unit(a, tol) && preserves_vectors(a, tol)
        }
        Membership::MN(n) => {
            if n == 0 || n as u32 > a.r() as u32 - 1 {
                return Err(Error::InvalidArgument(format!(
                    "M_n requires 1 <= n <= r-1, got n={n} with r={}",
                    a.r()
                )));
            }
            let pure = is_pure_grade(a, n as u32, tol);
            let unit = is_unit(a, tol);
            if !(pure && unit) {
                false
            } else if n == 2 {
                let sq = a.mul_mv(a);
                sq.grade_project(4)?.norm() <= tol * sq.norm().max(1.0)
            } else {
                preserves_vectors(a, tol)
            }
        }
        Membership::SphereTilde => is_unit(a, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::volume_form;

    const TOL: f64 = 1e-9;

    #[test]
    fn bivector_blade_is_a_plane() {
        let e12 = volume_form(2, 4).unwrap();
        assert!(membership(&e12, Membership::MN(2), TOL).unwrap());
        assert!(membership(&e12, Membership::J, TOL).unwrap());
    }

    #[test]
    fn mixed_bivector_is_not_decomposable() {
        // (e1e2 + e3e4)/sqrt(2): unit, pure grade 2, but its square has a
        // grade-4 part, so it spans no plane.
        let a = Multivector::from_terms(4, [(0b0011, 1.0), (0b1100, 1.0)])
            .unwrap()
            .scale(1.0 / 2f64.sqrt());
        assert!(is_unit(&a, TOL));
        assert!(!membership(&a, Membership::MN(2), TOL).unwrap());
        let sq = a.mul_mv(&a);
        assert!(sq.grade_project(4).unwrap().norm() > 0.9);
    }

    #[test]
    fn rotor_family_is_spin() {
        let r = 4;
        let e12 = volume_form(2, r).unwrap();
        for k in 0..8 {
            let t = std::f64::consts::PI / 3.0 + 0.31 * k as f64;
            let rot = &Multivector::scalar(r, t.cos()) + &e12.scale(t.sin());
            assert!(membership(&rot, Membership::Spin, TOL).unwrap(), "t={t}");
            assert!(membership(&rot, Membership::Pin, TOL).unwrap());
        }
    }

    #[test]
    fn vectors_are_pin_and_d1() {
        let e1 = Multivector::basis_vector(4, 0);
        assert!(membership(&e1, Membership::Pin, TOL).unwrap());
        assert!(membership(&e1, Membership::D1, TOL).unwrap());
        assert!(!membership(&e1, Membership::Spin, TOL).unwrap());
        assert!(!membership(&e1, Membership::D0, TOL).unwrap());
    }

    #[test]
    fn j_elements_square_to_minus_one() {
        // spec invariant: membership J implies a^2 = -1
        let a = Multivector::from_terms(5, [(0b00011, 0.6), (0b00101, 0.8)]).unwrap();
        assert!(membership(&a, Membership::J, TOL).unwrap());
        let sq = a.mul_mv(&a);
        let diff = &sq - &Multivector::scalar(5, -1.0);
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn invalid_mn_range_errors() {
        let e12 = volume_form(2, 4).unwrap();
        assert!(membership(&e12, Membership::MN(0), TOL).is_err());
        assert!(membership(&e12, Membership::MN(4), TOL).is_err());
    }
}
