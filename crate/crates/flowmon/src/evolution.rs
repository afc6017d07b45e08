//! Closed-form evolution equations at critical points.
//!
//! For a surface moving with symmetric normal velocity `F(l1, l2)` and a
//! symmetric test quantity `w`, viewed as a function of `H` and
//! `A = |A|^2`, the value of `w` at a spatial critical point obeys
//!
//! ```text
//! (d/dt - F^{ij} D_i D_j) w = C_w(l1, l2)
//!                           + G_w(l1, l2) * h_{11;1}^2
//!                           + G_w(l2, l1) * h_{22;2}^2
//! ```
//!
//! where the first-order critical-point conditions have been used to
//! eliminate all but two curvature-derivative slots via
//! `h_{22;1} = a1 * h_{11;1}`. This module computes `C_w` and the two
//! gradient coefficients exactly. When both are nonpositive on the
//! positive quadrant, the maximum principle makes `max w` non-increasing
//! along the flow.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::{Basis, PolyError, Var};
use crate::positivity::{
    self, PositivityError, SignCertificate, SignVerdict, SturmChain, UpperBound,
};
use crate::ratfn::RationalFn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    /// The quantity has no usable critical-point ratio (it is constant).
    DegenerateQuantity,
    AsymmetricVelocity,
    AsymmetricQuantity,
    /// The quantity's denominator vanishes somewhere on the open quadrant.
    NotQuadrantRegular,
    Algebra(PolyError),
    Positivity(PositivityError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::DegenerateQuantity => write!(f, "degenerate quantity"),
            EngineError::AsymmetricVelocity => write!(f, "velocity is not symmetric"),
            EngineError::AsymmetricQuantity => write!(f, "quantity is not symmetric"),
            EngineError::NotQuadrantRegular => {
                write!(f, "quantity is singular on the positive quadrant")
            }
            EngineError::Algebra(e) => write!(f, "{e}"),
            EngineError::Positivity(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<PolyError> for EngineError {
    fn from(e: PolyError) -> Self {
        EngineError::Algebra(e)
    }
}

impl From<PositivityError> for EngineError {
    fn from(e: PositivityError) -> Self {
        EngineError::Positivity(e)
    }
}

/// Critical-point ratio: at a spatial maximum of `w`, the off-slot
/// curvature derivatives satisfy `h_{22;1} = a1 * h_{11;1}` and
/// `h_{11;2} = a2 * h_{22;2}`; `a2` is `a1` with the variables exchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalRatio {
    pub a1: RationalFn,
    pub a2: RationalFn,
}

/// Building blocks of the evolution equation: the zero-order and gradient
/// coefficients for the two generators `H` and `|A|^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseTerms {
    pub c_h: RationalFn,
    pub g_h: RationalFn,
    pub c_a2: RationalFn,
    pub g_a2: RationalFn,
}

/// The assembled evolution equation of `w` at a critical point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionResult {
    /// Zero-order coefficient `C_w`, symmetric.
    pub cw: RationalFn,
    /// Coefficient of `h_{11;1}^2`.
    pub g1: RationalFn,
    /// Coefficient of `h_{22;2}^2`; exactly `g1` with variables exchanged.
    pub g2: RationalFn,
    pub velocity: RationalFn,
    /// The quantity in the curvature basis.
    pub quantity: RationalFn,
}

/// First and second partial derivatives of a velocity, precomputed once.
#[derive(Clone, Debug)]
pub struct VelocityDerivatives {
    pub f: RationalFn,
    pub f1: RationalFn,
    pub f2: RationalFn,
    pub f11: RationalFn,
    pub f12: RationalFn,
    pub f22: RationalFn,
    /// `(dF/dl1 - dF/dl2) / (l1 - l2)`, by exact division.
    pub dq: RationalFn,
}

impl VelocityDerivatives {
    pub fn new(f: &RationalFn) -> Result<Self, EngineError> {
        assert_eq!(f.basis(), Basis::Lambda);
        if !f.is_symmetric() {
            return Err(EngineError::AsymmetricVelocity);
        }
        let f1 = f.partial_derivative(Var::First);
        let f2 = f.partial_derivative(Var::Second);
        let dq = f.difference_quotient().map_err(|_| EngineError::AsymmetricVelocity)?;
        Ok(VelocityDerivatives {
            f11: f1.partial_derivative(Var::First),
            f12: f1.partial_derivative(Var::Second),
            f22: f2.partial_derivative(Var::Second),
            f: f.clone(),
            f1,
            f2,
            dq,
        })
    }
}

/// Partial derivatives of the quantity with respect to `H` and `A`, pulled
/// back to the curvature basis, together with the critical ratio.
#[derive(Clone, Debug)]
pub struct QuantityDerivatives {
    /// The quantity in the curvature basis.
    pub w_lambda: RationalFn,
    /// The quantity in the `(H, A)` basis.
    pub w_ha: RationalFn,
    pub wh: RationalFn,
    pub wa: RationalFn,
    pub whh: RationalFn,
    pub wha: RationalFn,
    pub waa: RationalFn,
    pub ratio: CriticalRatio,
}

impl QuantityDerivatives {
    /// Accepts the quantity in either basis; curvature-basis input must be
    /// symmetric so that the `(H, A)` form exists.
    pub fn new(w: &RationalFn) -> Result<Self, EngineError> {
        let (w_ha, w_lambda) = match w.basis() {
            Basis::HA => (w.clone(), w.from_ha()),
            Basis::Lambda => {
                if !w.is_symmetric() {
                    return Err(EngineError::AsymmetricQuantity);
                }
                (w.to_ha()?, w.clone())
            }
        };
        let ratio = compute_a1(&w_lambda)?;
        let dh = w_ha.partial_derivative(Var::First);
        let da = w_ha.partial_derivative(Var::Second);
        Ok(QuantityDerivatives {
            wh: dh.from_ha(),
            wa: da.from_ha(),
            whh: dh.partial_derivative(Var::First).from_ha(),
            wha: dh.partial_derivative(Var::Second).from_ha(),
            waa: da.partial_derivative(Var::Second).from_ha(),
            w_lambda,
            w_ha,
            ratio,
        })
    }
}

/// The critical-point ratio `a1 = -(dw/dl1) / (dw/dl2)` for a quantity in
/// the curvature basis, in lowest terms. Constant quantities are rejected
/// as degenerate.
pub fn compute_a1(w_lambda: &RationalFn) -> Result<CriticalRatio, EngineError> {
    assert_eq!(w_lambda.basis(), Basis::Lambda);
    let w1 = w_lambda.partial_derivative(Var::First);
    let w2 = w_lambda.partial_derivative(Var::Second);
    if w2.is_zero() {
        return Err(EngineError::DegenerateQuantity);
    }
    let a1 = w1.div(&w2).map_err(EngineError::Algebra)?.neg();
    let a2 = a1.swap_vars();
    Ok(CriticalRatio { a1, a2 })
}

/// Zero-order and gradient coefficients of the generators under velocity
/// `F`, with the critical substitution applied for the gradient slots. The
/// cube power sum `l1^3 + l2^3` enters expanded.
pub fn base_terms(fd: &VelocityDerivatives, ratio: &CriticalRatio) -> BaseTerms {
    let basis = Basis::Lambda;
    let l1 = RationalFn::var(basis, Var::First);
    let l2 = RationalFn::var(basis, Var::Second);
    let h = l1.add(&l2);
    let asq = l1.mul(&l1).add(&l2.mul(&l2));
    let b3 = l1.pow(3).add(&l2.pow(3));
    let two = RationalFn::from_integer(basis, 2);
    let four = RationalFn::from_integer(basis, 4);
    let a1 = &ratio.a1;
    let a1sq = a1.mul(a1);

    // shared pieces
    let radial = fd.f1.mul(&l1.pow(2)).add(&fd.f2.mul(&l2.pow(2)));
    let euler_defect = fd.f.sub(&fd.f1.mul(&l1)).sub(&fd.f2.mul(&l2));
    let hessian = fd
        .f11
        .add(&two.mul(&fd.f12).mul(a1))
        .add(&fd.f22.mul(&a1sq));

    let c_h = radial.mul(&h).add(&euler_defect.mul(&asq));
    let g_h = hessian.add(&two.mul(&fd.dq).mul(&a1sq));
    let c_a2 = two.mul(&radial).mul(&asq).add(&two.mul(&euler_defect).mul(&b3));
    let g_a2 = two
        .neg()
        .mul(&fd.f1.mul(&RationalFn::one(basis).add(&a1sq)).add(&two.mul(&fd.f2).mul(&a1sq)))
        .add(&two.mul(&hessian).mul(&l1))
        .add(&four.mul(&fd.dq).mul(&a1sq).mul(&l2));

    BaseTerms { c_h, g_h, c_a2, g_a2 }
}

/// Combine the generator terms with the second-derivative corrections of
/// `w(H, A)` into the full evolution equation.
pub fn assemble(
    fd: &VelocityDerivatives,
    qd: &QuantityDerivatives,
    base: &BaseTerms,
) -> EvolutionResult {
    let basis = Basis::Lambda;
    let l1 = RationalFn::var(basis, Var::First);
    let l2 = RationalFn::var(basis, Var::Second);
    let one = RationalFn::one(basis);
    let four = RationalFn::from_integer(basis, 4);
    let a1 = &qd.ratio.a1;

    let cw = qd.wh.mul(&base.c_h).add(&qd.wa.mul(&base.c_a2));

    let u = one.add(a1); // 1 + a1
    let v = l1.add(&a1.mul(&l2)); // l1 + a1 l2
    let g1 = qd
        .wh
        .mul(&base.g_h)
        .add(&qd.wa.mul(&base.g_a2))
        .sub(&qd.whh.mul(&fd.f1).mul(&u.pow(2)))
        .sub(&four.mul(&qd.waa).mul(&fd.f1).mul(&v.pow(2)))
        .sub(&four.mul(&qd.wha).mul(&fd.f1).mul(&u).mul(&v));
    let g2 = g1.swap_vars();

    EvolutionResult {
        cw,
        g1,
        g2,
        velocity: fd.f.clone(),
        quantity: qd.w_lambda.clone(),
    }
}

/// Full pipeline: evolution equation of `w` at a critical point under
/// normal velocity `F`. `F` is given in the curvature basis (negative for
/// expanding flows); `w` may come in either basis.
pub fn evolve(f: &RationalFn, w: &RationalFn) -> Result<EvolutionResult, EngineError> {
    let fd = VelocityDerivatives::new(f)?;
    let qd = QuantityDerivatives::new(w)?;
    let base = base_terms(&fd, &qd.ratio);
    Ok(assemble(&fd, &qd, &base))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Both sign certificates are nonpositive: the maximum principle
    /// applies and `max w` is non-increasing.
    Monotone,
    /// Some sign condition failed; monotonicity is not established by this
    /// method.
    NotProven,
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub result: EvolutionResult,
    pub verdict: Verdict,
    pub cw_certificate: SignCertificate,
    pub g1_certificate: SignCertificate,
    /// A point where a required sign fails, for NOT-PROVEN outcomes.
    pub witness: Option<(BigRational, BigRational)>,
}

/// Decide whether `max w` is non-increasing under velocity `F` by exact
/// sign certification of the evolution coefficients on the open quadrant.
pub fn verify_monotone(f: &RationalFn, w: &RationalFn) -> Result<MonotonicityReport, EngineError> {
    let result = evolve(f, w)?;
    if !denominator_nonvanishing(&result.quantity)? {
        return Err(EngineError::NotQuadrantRegular);
    }
    let cw_certificate = positivity::quadrant_sign(&result.cw)?;
    let g1_certificate = positivity::quadrant_sign(&result.g1)?;
    let ok = |c: &SignCertificate| {
        matches!(
            c.verdict,
            SignVerdict::NonpositiveOnQuadrant | SignVerdict::ZeroIdentically
        )
    };
    if ok(&cw_certificate) && ok(&g1_certificate) {
        return Ok(MonotonicityReport {
            result,
            verdict: Verdict::Monotone,
            cw_certificate,
            g1_certificate,
            witness: None,
        });
    }
    let witness = [&cw_certificate, &g1_certificate]
        .iter()
        .find(|c| !ok(c))
        .and_then(|c| c.witness.clone())
        .or_else(|| {
            // a strictly nonnegative coefficient carries no witness; any
            // point with positive value serves
            [&result.cw, &result.g1]
                .into_iter()
                .find_map(find_positive_point)
        });
    Ok(MonotonicityReport {
        result,
        verdict: Verdict::NotProven,
        cw_certificate,
        g1_certificate,
        witness,
    })
}

/// True when the denominator has no zero on the open quadrant, so the
/// function is defined everywhere there.
pub fn denominator_nonvanishing(w: &RationalFn) -> Result<bool, PositivityError> {
    if !w.den().is_homogeneous() {
        return Err(PositivityError::NotHomogeneous);
    }
    let slice = w.den().dehomogenize_second();
    let sf = slice.squarefree_part();
    let chain = SturmChain::new(&sf);
    Ok(chain.count_half_open(&BigRational::zero(), &UpperBound::Infinity) == 0)
}

fn find_positive_point(f: &RationalFn) -> Option<(BigRational, BigRational)> {
    let mk = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let candidates = [
        (1, 1, 1, 1),
        (2, 1, 1, 1),
        (1, 1, 2, 1),
        (3, 1, 1, 2),
        (1, 2, 3, 1),
        (5, 2, 1, 3),
        (7, 3, 5, 1),
    ];
    for (xn, xd, yn, yd) in candidates {
        let x = mk(xn, xd);
        let y = mk(yn, yd);
        if let Some(v) = f.evaluate(&x, &y) {
            if v.is_positive() {
                return Some((x, y));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn lam(src: &str) -> RationalFn {
        parse(src, Basis::Lambda).unwrap()
    }

    #[test]
    fn critical_ratio_examples() {
        // pinch quantity: a1 = l2^2 / l1^2
        let w = lam("(l1-l2)^2/(4*l1^2*l2^2)");
        let r = compute_a1(&w).unwrap();
        assert_eq!(r.a1, lam("l2^2/l1^2"));
        assert_eq!(r.a2, lam("l1^2/l2^2"));
        // w = H: a1 = -1; w = |A|^2: a1 = -l1/l2
        assert_eq!(compute_a1(&lam("l1+l2")).unwrap().a1, lam("-1"));
        assert_eq!(compute_a1(&lam("l1^2+l2^2")).unwrap().a1, lam("-l1/l2"));
        // constants are degenerate
        assert_eq!(
            compute_a1(&lam("3")).unwrap_err(),
            EngineError::DegenerateQuantity
        );
    }

    #[test]
    fn inverse_gauss_flow_pinch_quantity() {
        let f = lam("-1/(l1*l2)");
        let w = lam("(l1-l2)^2/(4*l1^2*l2^2)");
        let r = evolve(&f, &w).unwrap();
        assert_eq!(r.cw, lam("-(l1+l2)*(l1-l2)^2/(2*l1^3*l2^3)"));
        assert_eq!(r.g1, lam("-2/(l1^6*l2)"));
        assert_eq!(r.g2, lam("-2/(l1*l2^6)"));
        assert!(r.cw.is_symmetric());
        assert_eq!(r.g2, r.g1.swap_vars());
    }

    #[test]
    fn generator_terms_match_known_evolutions() {
        // under F = -1/K: C_H = (H^2 - 3|A|^2)/K and
        // C_{|A|^2} = (2 H |A|^2 - 6(l1^3+l2^3))/K
        let f = lam("-1/(l1*l2)");
        let rh = evolve(&f, &lam("l1+l2")).unwrap();
        assert_eq!(
            rh.cw,
            lam("((l1+l2)^2 - 3*(l1^2+l2^2))/(l1*l2)")
        );
        assert_eq!(rh.g1, lam("-2*(l1^2+l2^2)/(l1^3*l2^3)"));
        let ra = evolve(&f, &lam("l1^2+l2^2")).unwrap();
        assert_eq!(
            ra.cw,
            lam("(2*(l1+l2)*(l1^2+l2^2) - 6*(l1^3+l2^3))/(l1*l2)")
        );
    }

    #[test]
    fn mean_curvature_contraction_smoke_test() {
        // F = l1 + l2 is Euler-homogeneous of degree one, so the defect
        // bracket vanishes and C_H = (l1^2+l2^2)(l1+l2)
        let f = lam("l1+l2");
        let r = evolve(&f, &lam("l1+l2")).unwrap();
        assert_eq!(r.cw, lam("(l1^2+l2^2)*(l1+l2)"));
    }

    #[test]
    fn inverse_curvature_grows() {
        // w = 1/K expands: C_w = H/K^2 > 0, no gradient terms
        let f = lam("-1/(l1*l2)");
        let w = lam("1/(l1*l2)");
        let rep = verify_monotone(&f, &w).unwrap();
        assert_eq!(rep.result.cw, lam("(l1+l2)/(l1^2*l2^2)"));
        assert!(rep.result.g1.is_zero());
        assert_eq!(rep.verdict, Verdict::NotProven);
        let (x, y) = rep.witness.unwrap();
        assert!(rep.result.cw.evaluate(&x, &y).unwrap().is_positive());
    }

    #[test]
    fn mean_curvature_maximum_does_not_increase() {
        // both evolution coefficients of w = H under F = -1/K are
        // nonpositive, so its maximum is monotone as well
        let f = lam("-1/(l1*l2)");
        let rep = verify_monotone(&f, &lam("l1+l2")).unwrap();
        assert_eq!(rep.verdict, Verdict::Monotone);
    }

    #[test]
    fn degenerate_and_singular_inputs() {
        let f = lam("-1/(l1*l2)");
        assert_eq!(
            evolve(&f, &lam("7")).unwrap_err(),
            EngineError::DegenerateQuantity
        );
        assert_eq!(
            evolve(&lam("l1"), &lam("l1+l2")).unwrap_err(),
            EngineError::AsymmetricVelocity
        );
        assert_eq!(
            evolve(&f, &lam("l1")).unwrap_err(),
            EngineError::AsymmetricQuantity
        );
        // quantity with a pole inside the quadrant is not quadrant-regular
        let singular = lam("(l1+l2)/(l1-l2)^2");
        assert_eq!(
            verify_monotone(&f, &singular).unwrap_err(),
            EngineError::NotQuadrantRegular
        );
    }
}
