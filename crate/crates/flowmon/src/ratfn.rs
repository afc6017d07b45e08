//! Reduced quotients of bivariate polynomials.
//!
//! A [`RationalFn`] is kept in a canonical form that makes equality a
//! structural comparison: numerator and denominator are coprime, jointly
//! scaled to coprime integer coefficients, and the denominator's leading
//! coefficient under graded-lex order is positive. Normal velocities and
//! test quantities are values of this type.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{Basis, BivarPoly, PolyError, Var};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFn {
    num: BivarPoly,
    den: BivarPoly,
}

/// Symmetry and homogeneity report for a rational function.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymHom {
    pub symmetric: bool,
    pub homogeneous: bool,
    /// `deg num - deg den` when both parts are homogeneous and the value is
    /// nonzero.
    pub degree: Option<i64>,
}

impl RationalFn {
    /// Build `num / den`, reducing to canonical form.
    pub fn new(num: BivarPoly, den: BivarPoly) -> Result<Self, PolyError> {
        assert_eq!(num.basis(), den.basis(), "basis mismatch in rational function");
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.basis()));
        }
        let g = BivarPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Ok(Self::scaled(num, den))
    }

    /// Joint scaling of an already-coprime pair: integer coefficients with
    /// trivial common content and a positive leading denominator.
    fn scaled(num: BivarPoly, den: BivarPoly) -> Self {
        let cn = num.content().expect("nonzero numerator");
        let cd = den.content().expect("nonzero denominator");
        // positive rational gcd of the two contents
        let joint = BigRational::new(
            (cn.numer() * cd.denom()).gcd(&(cd.numer() * cn.denom())),
            cn.denom() * cd.denom(),
        );
        let inv = joint.recip();
        let mut num = num.scale(&inv);
        let mut den = den.scale(&inv);
        if den.leading_glex().map_or(false, |(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        RationalFn { num, den }
    }

    pub fn zero(basis: Basis) -> Self {
        RationalFn {
            num: BivarPoly::zero(basis),
            den: BivarPoly::one(basis),
        }
    }

    pub fn one(basis: Basis) -> Self {
        Self::from_poly(BivarPoly::one(basis))
    }

    pub fn from_poly(p: BivarPoly) -> Self {
        if p.is_zero() {
            return Self::zero(p.basis());
        }
        let den = BivarPoly::one(p.basis());
        Self::scaled(p, den)
    }

    pub fn from_integer(basis: Basis, n: i64) -> Self {
        Self::from_poly(BivarPoly::from_integer(basis, n))
    }

    pub fn var(basis: Basis, v: Var) -> Self {
        Self::from_poly(BivarPoly::var(basis, v))
    }

    pub fn constant(basis: Basis, c: BigRational) -> Self {
        Self::from_poly(BivarPoly::constant(basis, c))
    }

    pub fn num(&self) -> &BivarPoly {
        &self.num
    }

    pub fn den(&self) -> &BivarPoly {
        &self.den
    }

    pub fn basis(&self) -> Basis {
        self.num.basis()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis(), other.basis(), "basis mismatch in addition");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = BivarPoly::gcd(&self.den, &other.den);
        let db = self.den.exact_div(&g).unwrap();
        let dd = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&dd).add(&other.num.mul(&db));
        let den = self.den.mul(&dd);
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.basis(), other.basis(), "basis mismatch in product");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.basis());
        }
        // cross-reduction keeps the final pair coprime without a large gcd
        let g1 = BivarPoly::gcd(&self.num, &other.den);
        let g2 = BivarPoly::gcd(&other.num, &self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = other.den.exact_div(&g1).unwrap();
        let c = other.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        Self::scaled(a.mul(&c), b.mul(&d))
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::scaled(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.basis());
        }
        if self.is_zero() {
            return Self::zero(self.basis());
        }
        // numerator and denominator are coprime, so their powers are too
        Self::scaled(self.num.pow(n), self.den.pow(n))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero(self.basis());
        }
        Self::scaled(self.num.scale(c), self.den.clone())
    }

    /// Evaluate at a rational point; `None` when the denominator vanishes.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> Option<BigRational> {
        let d = self.den.evaluate(x, y);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(x, y) / d)
    }

    /// Quotient-rule partial derivative, in canonical form.
    pub fn partial_derivative(&self, v: Var) -> Self {
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        let d = self.den.mul(&self.den);
        Self::new(n, d).expect("nonzero denominator")
    }

    pub fn swap_vars(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::scaled(self.num.swap_vars(), self.den.swap_vars())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap_vars()
    }

    pub fn symmetry_and_homogeneity(&self) -> SymHom {
        let homogeneous = self.num.is_homogeneous() && self.den.is_homogeneous();
        let degree = if homogeneous && !self.is_zero() {
            Some(self.num.degree().unwrap() as i64 - self.den.degree().unwrap() as i64)
        } else {
            None
        };
        SymHom {
            symmetric: self.is_symmetric(),
            homogeneous,
            degree,
        }
    }

    /// Rewrite a symmetric function of the curvatures in the `(H, A)`
    /// basis, using `l1*l2 = (H^2 - A) / 2`.
    pub fn to_ha(&self) -> Result<Self, PolyError> {
        assert_eq!(self.basis(), Basis::Lambda, "to_ha expects the curvature basis");
        if !self.is_symmetric() {
            return Err(PolyError::NotSymmetric);
        }
        let h = BivarPoly::var(Basis::HA, Var::First);
        let a = BivarPoly::var(Basis::HA, Var::Second);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let e2 = h.mul(&h).sub(&a).scale(&half);
        let conv = |p: &BivarPoly| -> Result<BivarPoly, PolyError> {
            Ok(p.symmetric_to_elementary()?.substitute(&h, &e2))
        };
        Self::new(conv(&self.num)?, conv(&self.den)?)
    }

    /// Substitute `H = l1 + l2`, `A = l1^2 + l2^2`; inverse of [`to_ha`].
    pub fn from_ha(&self) -> Self {
        assert_eq!(self.basis(), Basis::HA, "from_ha expects the (H, A) basis");
        let l1 = BivarPoly::var(Basis::Lambda, Var::First);
        let l2 = BivarPoly::var(Basis::Lambda, Var::Second);
        let h = l1.add(&l2);
        let a = l1.mul(&l1).add(&l2.mul(&l2));
        Self::new(self.num.substitute(&h, &a), self.den.substitute(&h, &a))
            .expect("substitution of a nonzero denominator stays nonzero")
    }

    /// The divided difference `(dF/dl1 - dF/dl2) / (l1 - l2)`, computed by
    /// exact division. For symmetric `F` the result is regular on the
    /// diagonal; otherwise this reports an error.
    pub fn difference_quotient(&self) -> Result<Self, PolyError> {
        assert_eq!(self.basis(), Basis::Lambda, "difference quotient expects the curvature basis");
        let diff = self
            .partial_derivative(Var::First)
            .sub(&self.partial_derivative(Var::Second));
        let l1 = BivarPoly::var(Basis::Lambda, Var::First);
        let l2 = BivarPoly::var(Basis::Lambda, Var::Second);
        let out = Self::new(diff.num.clone(), diff.den.mul(&l1.sub(&l2)))?;
        if !out.is_zero() && out.den.restrict_diagonal().is_zero() {
            return Err(PolyError::NotSymmetric);
        }
        Ok(out)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/")?;
        if denominator_is_plain(&self.den) {
            write!(f, "{}", self.den)
        } else {
            write!(f, "({})", self.den)
        }
    }
}

/// True when the denominator can be printed after `/` without parentheses:
/// a single positive integer, or a single monomial with coefficient one in
/// exactly one variable.
fn denominator_is_plain(den: &BivarPoly) -> bool {
    if den.num_terms() != 1 {
        return false;
    }
    let ((i, j), c) = den.leading_glex().unwrap();
    if (i, j) == (0, 0) {
        return c.denom().is_one() && c.is_positive();
    }
    c.is_one() && (i == 0 || j == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lam(v: Var) -> RationalFn {
        RationalFn::var(Basis::Lambda, v)
    }

    /// (l1 - l2)^2 / (4 l1^2 l2^2), the inverse-Gauss-flow test quantity.
    fn pinch_quantity() -> RationalFn {
        let l1 = lam(Var::First);
        let l2 = lam(Var::Second);
        let num = l1.sub(&l2).pow(2);
        let den = l1.pow(2).mul(&l2.pow(2)).scale(&q(4, 1));
        num.div(&den).unwrap()
    }

    #[test]
    fn canonical_form_is_integer_primitive() {
        let w = pinch_quantity();
        assert_eq!(w.to_string(), "(l1^2 - 2*l1*l2 + l2^2)/(4*l1^2*l2^2)");
        // scaling by a positive rational leaves the canonical form intact
        // only when it is the identity; other scalings change the content
        let scaled = w.scale(&q(3, 7));
        assert_eq!(scaled.to_string(), "(3*l1^2 - 6*l1*l2 + 3*l2^2)/(28*l1^2*l2^2)");
    }

    #[test]
    fn evaluate_quantity_at_point() {
        let w = pinch_quantity();
        assert_eq!(w.evaluate(&q(2, 1), &q(1, 1)), Some(q(1, 16)));
        // pole on the axis
        assert_eq!(w.evaluate(&q(0, 1), &q(1, 1)), None);
    }

    #[test]
    fn fold_sum_of_fractions() {
        // 1/(l1 l2) + 1/(l1 l2) = 2/(l1 l2)
        let k = lam(Var::First).mul(&lam(Var::Second));
        let inv = RationalFn::one(Basis::Lambda).div(&k).unwrap();
        let sum = inv.add(&inv);
        assert_eq!(sum.to_string(), "2/(l1*l2)");
    }

    #[test]
    fn partial_derivative_of_inverse_gauss_velocity() {
        // d/dl1 of -1/(l1 l2) = 1/(l1^2 l2)
        let k = lam(Var::First).mul(&lam(Var::Second));
        let f = RationalFn::from_integer(Basis::Lambda, -1).div(&k).unwrap();
        let d1 = f.partial_derivative(Var::First);
        let expect = RationalFn::one(Basis::Lambda)
            .div(&lam(Var::First).pow(2).mul(&lam(Var::Second)))
            .unwrap();
        assert_eq!(d1, expect);
        // d/dl1 of l2 = 0, d/dl2 of l1 + l2 = 1
        assert!(lam(Var::Second).partial_derivative(Var::First).is_zero());
        assert_eq!(
            lam(Var::First).add(&lam(Var::Second)).partial_derivative(Var::Second),
            RationalFn::one(Basis::Lambda)
        );
    }

    #[test]
    fn symmetry_and_homogeneity_reports() {
        let w = pinch_quantity();
        assert_eq!(
            w.symmetry_and_homogeneity(),
            SymHom { symmetric: true, homogeneous: true, degree: Some(-2) }
        );
        assert_eq!(
            lam(Var::First).symmetry_and_homogeneity(),
            SymHom { symmetric: false, homogeneous: true, degree: Some(1) }
        );
        let mixed = lam(Var::First).add(&lam(Var::Second).pow(2));
        let rep = mixed.symmetry_and_homogeneity();
        assert!(!rep.symmetric);
        assert!(!rep.homogeneous);
        assert_eq!(rep.degree, None);
    }

    #[test]
    fn to_ha_of_gauss_curvature() {
        // l1 l2 = (H^2 - A)/2
        let k = lam(Var::First).mul(&lam(Var::Second));
        let kha = k.to_ha().unwrap();
        assert_eq!(kha.to_string(), "(H^2 - A)/2");
        assert_eq!(kha.from_ha(), k);
    }

    #[test]
    fn to_ha_of_pinch_quantity() {
        // (l1-l2)^2/(4 l1^2 l2^2) = (2A - H^2)/(H^2 - A)^2
        let w = pinch_quantity();
        let wha = w.to_ha().unwrap();
        let h = RationalFn::var(Basis::HA, Var::First);
        let a = RationalFn::var(Basis::HA, Var::Second);
        let expect = a
            .scale(&q(2, 1))
            .sub(&h.pow(2))
            .div(&h.pow(2).sub(&a).pow(2))
            .unwrap();
        assert_eq!(wha, expect);
        assert_eq!(wha.from_ha(), w);
    }

    #[test]
    fn to_ha_of_cubic_power_sum() {
        // l1^3 + l2^3 = (3 H A - H^3)/2
        let p = lam(Var::First).pow(3).add(&lam(Var::Second).pow(3));
        let pha = p.to_ha().unwrap();
        let h = RationalFn::var(Basis::HA, Var::First);
        let a = RationalFn::var(Basis::HA, Var::Second);
        let expect = h.mul(&a).scale(&q(3, 1)).sub(&h.pow(3)).scale(&q(1, 2));
        assert_eq!(pha, expect);
        assert!(lam(Var::First).to_ha().is_err());
    }

    #[test]
    fn difference_quotients() {
        // F = -1/(l1 l2): (F_1 - F_2)/(l1 - l2) = -1/(l1^2 l2^2)
        let k = lam(Var::First).mul(&lam(Var::Second));
        let f = RationalFn::from_integer(Basis::Lambda, -1).div(&k).unwrap();
        let dq = f.difference_quotient().unwrap();
        let expect = RationalFn::from_integer(Basis::Lambda, -1)
            .div(&k.pow(2))
            .unwrap();
        assert_eq!(dq, expect);
        // F = l1 + l2 -> 0; F = l1^2 + l2^2 -> 2
        let h = lam(Var::First).add(&lam(Var::Second));
        assert!(h.difference_quotient().unwrap().is_zero());
        let a = lam(Var::First).pow(2).add(&lam(Var::Second).pow(2));
        assert_eq!(a.difference_quotient().unwrap(), RationalFn::from_integer(Basis::Lambda, 2));
        // asymmetric input is rejected
        assert!(lam(Var::First).difference_quotient().is_err());
    }
}
