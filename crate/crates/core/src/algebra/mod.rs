//! The Clifford algebra Cl(V_r) over floating-point coefficients.
//!
//! Basis blades are indexed by an r-bit mask: bit `i` set means the basis
//! vector `e_{i+1}` is a factor, factors in ascending order.  Generators
//! square to -1, so on blades the geometric product is sign counting:
//! concatenate factor lists, count transpositions to sort, cancel repeated
//! generators with a -1 each.

mod membership;
pub mod sample;

pub use membership::{membership, Membership};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Bitmask indexing a basis blade of Cl(V_r), r <= 16.
pub type BladeMask = u16;

pub const R_MAX: u8 = 16;
pub const R_MIN: u8 = 3;

/// Number of vector factors of a blade.
#[inline]
pub fn grade_of(mask: BladeMask) -> u32 {
    mask.count_ones()
}

/// Sign of the product of two basis blades, by transposition counting:
/// each factor of `b` moves left past the factors of `a` above it, then
/// every shared factor cancels with e_i^2 = -1.
#[inline]
pub fn blade_product_sign(a: BladeMask, b: BladeMask) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    let squares = (a & b).count_ones();
    if (swaps + squares) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of grade involution on a grade-k blade: (-1)^k.
#[inline]
fn involution_sign(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of reversion on a grade-k blade: (-1)^{k(k-1)/2}.
#[inline]
fn reversion_sign(k: u32) -> f64 {
    if (k * (k.wrapping_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sparse multivector: sorted (mask, coefficient) pairs, no exact zeros.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    r: u8,
    terms: Vec<(BladeMask, f64)>,
}

impl Multivector {
    pub fn zero(r: u8) -> Self {
        debug_assert!(r <= R_MAX);
        Self { r, terms: Vec::new() }
    }

    pub fn scalar(r: u8, value: f64) -> Self {
        let mut out = Self::zero(r);
        if value != 0.0 {
            out.terms.push((0, value));
        }
        out
    }

    /// Basis vector e_{i+1} (zero-based index).
    pub fn basis_vector(r: u8, i: u8) -> Self {
        assert!(i < r, "basis index {i} out of range for r={r}");
        Self { r, terms: vec![(1 << i, 1.0)] }
    }

    /// A single basis blade with unit coefficient.
    pub fn basis_blade(r: u8, mask: BladeMask) -> Self {
        assert!((mask as u32) < (1u32 << r), "mask out of range");
        Self { r, terms: vec![(mask, 1.0)] }
    }

    /// A grade-1 element from vector components (length <= r).
    pub fn from_vector(r: u8, components: &[f64]) -> Self {
        assert!(components.len() <= r as usize);
        let mut terms = Vec::new();
        for (i, &c) in components.iter().enumerate() {
            if c != 0.0 {
                terms.push(((1 << i) as BladeMask, c));
            }
        }
        Self { r, terms }
    }

    /// Builds from arbitrary (mask, coeff) pairs; pairs may repeat.
    pub fn from_terms<I: IntoIterator<Item = (BladeMask, f64)>>(r: u8, iter: I) -> Result<Self> {
        let limit = 1u32 << r;
        let mut map = BTreeMap::new();
        for (mask, c) in iter {
            if (mask as u32) >= limit {
                return Err(Error::InvalidArgument(format!(
                    "blade mask {mask:#x} out of range for r={r}"
                )));
            }
            *map.entry(mask).or_insert(0.0) += c;
        }
        Ok(Self {
            r,
            terms: map.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        })
    }

    #[inline]
    pub fn r(&self) -> u8 {
        self.r
    }

    #[inline]
    pub fn terms(&self) -> &[(BladeMask, f64)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: BladeMask) -> f64 {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(idx) => self.terms[idx].1,
            Err(_) => 0.0,
        }
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeff(0)
    }

    /// Retains exactly the coefficients of blades with popcount `k`.
    pub fn grade_project(&self, k: u32) -> Result<Self> {
        if k > self.r as u32 {
            return Err(Error::GradeOutOfRange { grade: k, r: self.r });
        }
        Ok(Self {
            r: self.r,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&(m, _)| grade_of(m) == k)
                .collect(),
        })
    }

    /// Euclidean mass of all components off grade `k`.
    pub fn off_grade_norm(&self, k: u32) -> f64 {
        self.terms
            .iter()
            .filter(|&&(m, _)| grade_of(m) != k)
            .map(|&(_, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// Multiplies each grade-k coefficient by (-1)^k.
    pub fn grade_involution(&self) -> Self {
        Self {
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| (m, c * involution_sign(grade_of(m))))
                .collect(),
        }
    }

    /// Multiplies each grade-k coefficient by (-1)^{k(k-1)/2}.
    pub fn reversion(&self) -> Self {
        Self {
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| (m, c * reversion_sign(grade_of(m))))
                .collect(),
        }
    }

    /// The combined involution a -> alpha(a)^T used by the norm map.
    pub fn alpha_top(&self) -> Self {
        Self {
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| {
                    let k = grade_of(m);
                    (m, c * involution_sign(k) * reversion_sign(k))
                })
                .collect(),
        }
    }

    /// Norm map alpha(a)^T a.  Scalar exactly on the E variety.
    pub fn norm_map(&self) -> Self {
        self.alpha_top().mul_mv(self)
    }

    /// Positive-definite quadratic form: the scalar part of the norm map.
    /// Blades are orthonormal, so this is the coefficient sum of squares.
    pub fn quad_form(&self) -> f64 {
        self.terms.iter().map(|&(_, c)| c * c).sum()
    }

    /// Induced inner product: scalar part of alpha(a)^T b.
    pub fn inner(&self, rhs: &Self) -> f64 {
        assert_eq!(self.r, rhs.r, "dimension mismatch in inner product");
        let mut acc = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp(&rhs.terms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.terms[i].1 * rhs.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.quad_form().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, &(_, c)| m.max(c.abs()))
    }

    /// Geometric product with dimension check.
    pub fn geometric_product(&self, rhs: &Self) -> Result<Self> {
        if self.r != rhs.r {
            return Err(Error::DimensionMismatch(self.r, rhs.r));
        }
        Ok(self.mul_mv(rhs))
    }

    /// Unchecked geometric product; panics on dimension mismatch.
    pub fn mul_mv(&self, rhs: &Self) -> Self {
        assert_eq!(self.r, rhs.r, "dimension mismatch in geometric product");
        let mut acc: BTreeMap<BladeMask, f64> = BTreeMap::new();
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &rhs.terms {
                let sign = blade_product_sign(ma, mb);
                *acc.entry(ma ^ mb).or_insert(0.0) += sign * ca * cb;
            }
        }
        Self {
            r: self.r,
            terms: acc.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero(self.r);
        }
        Self {
            r: self.r,
            terms: self.terms.iter().map(|&(m, c)| (m, c * s)).collect(),
        }
    }

    /// Removes coefficients with |c| <= threshold.  Pruning is explicit;
    /// arithmetic only drops exact zeros.
    pub fn prune(&mut self, threshold: f64) {
        self.terms.retain(|&(_, c)| c.abs() > threshold);
    }

    pub fn pruned(mut self, threshold: f64) -> Self {
        self.prune(threshold);
        self
    }

    /// Inverse within the E variety: alpha(a)^T / quad_form(a).
    /// Fails when the norm map has a non-scalar part above `tol` or the
    /// quadratic form is not positive.
    pub fn inverse_in_e(&self, tol: f64) -> Result<Self> {
        let nm = self.norm_map();
        let scal = nm.scalar_part();
        let off = (nm.quad_form() - scal * scal).max(0.0).sqrt();
        if off > tol * scal.abs().max(1.0) {
            return Err(Error::NotInvertible(format!(
                "norm map has non-scalar part {off:.3e}"
            )));
        }
        if scal <= tol {
            return Err(Error::NotInvertible(format!(
                "quadratic form {scal:.3e} not positive"
            )));
        }
        Ok(self.alpha_top().scale(1.0 / scal))
    }

    /// General inverse via the left-multiplication matrix.  Needed for
    /// elements outside the E variety (mixed-grade transform data); dense,
    /// so capped at r <= 12.
    pub fn general_inverse(&self) -> Result<Self> {
        if self.r > 12 {
            return Err(Error::InvalidArgument(
                "general inverse uses a dense 2^r x 2^r solve; r > 12 unsupported".into(),
            ));
        }
        let dim = 1usize << self.r;
        let mut mat = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        // column b of L(a) is the representation of a * e_b
        for &(ma, ca) in &self.terms {
            for b in 0..dim {
                let sign = blade_product_sign(ma, b as BladeMask);
                mat[((ma ^ b as BladeMask) as usize, b)] += sign * ca;
            }
        }
        let mut rhs = nalgebra::DVector::<f64>::zeros(dim);
        rhs[0] = 1.0;
        let lu = mat.lu();
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::NotInvertible("singular left-multiplication matrix".into()))?;
        Multivector::from_terms(
            self.r,
            sol.iter()
                .enumerate()
                .filter(|(_, c)| c.abs() > 0.0)
                .map(|(m, &c)| (m as BladeMask, c)),
        )
    }

    /// Coefficients of the grade-1 part as a dense vector of length r.
    pub fn vector_components(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.r as usize];
        for &(m, c) in &self.terms {
            if grade_of(m) == 1 {
                out[m.trailing_zeros() as usize] = c;
            }
        }
        out
    }
}

/// Oriented volume form of V_n inside Cl(V_r): the blade e_1...e_n.
pub fn volume_form(n: u8, r: u8) -> Result<Multivector> {
    if n == 0 || n > r {
        return Err(Error::GradeOutOfRange { grade: n as u32, r });
    }
    Ok(Multivector::basis_blade(r, ((1u32 << n) - 1) as BladeMask))
}

/// Twisted adjoint alpha(x) phi x^{-1}; the Pin-group action on Cl(V_r).
pub fn twisted_adjoint(x: &Multivector, phi: &Multivector, tol: f64) -> Result<Multivector> {
    let inv = x.inverse_in_e(tol)?;
    Ok(x.grade_involution().mul_mv(phi).mul_mv(&inv))
}

/// Adjoint x phi x^{-1}.
pub fn adjoint(x: &Multivector, phi: &Multivector, tol: f64) -> Result<Multivector> {
    let inv = x.inverse_in_e(tol)?;
    Ok(x.mul_mv(phi).mul_mv(&inv))
}

/// Default tolerances for predicate operations and explicit pruning.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlgebraContext {
    pub r: u8,
    pub tol: f64,
    pub prune: f64,
}

impl AlgebraContext {
    pub fn new(r: u8) -> Result<Self> {
        if !(R_MIN..=R_MAX).contains(&r) {
            return Err(Error::DimensionOutOfRange(r, R_MIN));
        }
        Ok(Self { r, tol: 1e-9, prune: 1e-14 })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0);
        self.tol = tol;
        self
    }

    pub fn membership(&self, a: &Multivector, kind: Membership) -> Result<bool> {
        membership(a, kind, self.tol)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.r, rhs.r, "dimension mismatch in addition");
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let next = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(&(ma, ca)), Some(&(mb, cb))) => match ma.cmp(&mb) {
                    std::cmp::Ordering::Less => {
                        i += 1;
                        (ma, ca)
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        (mb, cb)
                    }
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (ma, ca + cb)
                    }
                },
                (Some(&(ma, ca)), None) => {
                    i += 1;
                    (ma, ca)
                }
                (None, Some(&(mb, cb))) => {
                    j += 1;
                    (mb, cb)
                }
                (None, None) => unreachable!(),
            };
            if next.1 != 0.0 {
                terms.push(next);
            }
        }
        Multivector { r: self.r, terms }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.mul_mv(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        *self = &*self - rhs;
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, &(m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*e[")?;
                let mut rest = m;
                while rest != 0 {
                    write!(f, "{}", rest.trailing_zeros() + 1)?;
                    rest &= rest - 1;
                }
                write!(f, "]")?;
            }
        }
        Ok(())
    }
}

// JSON encoding: {"r": int, "terms": [[mask, coeff], ...]} masks increasing.
impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Multivector", 2)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("terms", &TermsRef(&self.terms))?;
        st.end()
    }
}

pub(crate) struct TermsRef<'a>(pub &'a [(BladeMask, f64)]);

impl Serialize for TermsRef<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &(m, c) in self.0 {
            seq.serialize_element(&(m, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            r: u8,
            terms: Vec<(BladeMask, f64)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Multivector::from_terms(raw.r, raw.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
