//! Dense univariate polynomials over the rationals.
//!
//! These back the real-root machinery: Sturm chains, squarefree
//! decomposition, and the dehomogenized slices of bivariate data.
//! Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial with arbitrary-precision rational coefficients,
/// lowest degree first. The leading coefficient is nonzero unless the
/// polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnivarPoly {
    coeffs: Vec<BigRational>,
}

impl UnivarPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UnivarPoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivarPoly { coeffs: Vec::new() }
    }

    pub fn from_integers(cs: &[i64]) -> Self {
        Self::new(
            cs.iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UnivarPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UnivarPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Division with remainder over the field of rationals.
    /// Panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "univariate division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = rem[k].clone();
            if !c.is_zero() {
                let q = &c / &lead;
                let shift = k - dd;
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[shift + i] -= &q * dc;
                }
                quot[shift] = q;
            }
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "univariate division was not exact");
        q
    }

    /// Scale by the unique positive rational making the coefficients
    /// coprime integers. Signs are preserved.
    pub fn primitive(&self) -> Self {
        match self.content() {
            None => Self::zero(),
            Some(content) => self.scale(&content.recip()),
        }
    }

    /// Positive rational content: `self = content * primitive(self)`.
    pub fn content(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Some(BigRational::new(num_gcd, den_lcm))
    }

    /// Greatest common divisor, normalized to a primitive polynomial with
    /// positive leading coefficient. Computed as an integer
    /// pseudo-remainder sequence with primitive scaling at each step, so
    /// no rational arithmetic happens in the loop.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut r0 = a.to_scaled_integers();
        let mut r1 = b.to_scaled_integers();
        if r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
        }
        while !r1.is_empty() {
            let mut r = int_pseudo_rem(&r0, &r1);
            int_make_primitive(&mut r);
            r0 = r1;
            r1 = r;
        }
        if r0.last().map_or(false, |c| c.is_negative()) {
            for c in &mut r0 {
                *c = -&*c;
            }
        }
        Self::from_big_integers(r0)
    }

    /// Scale by a positive rational into coprime integer coefficients.
    pub(crate) fn to_scaled_integers(&self) -> Vec<BigInt> {
        let prim = self.primitive();
        prim.coeffs.iter().map(|c| c.numer().clone()).collect()
    }

    pub(crate) fn from_big_integers(v: Vec<BigInt>) -> Self {
        Self::new(v.into_iter().map(BigRational::from).collect())
    }

    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = Self::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            self.primitive()
        } else {
            self.exact_div(&g).primitive()
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        Self::gcd(self, &self.derivative()).degree() == Some(0)
    }

    /// Yun's squarefree decomposition: `self = c * prod f_i^i` with the
    /// `f_i` squarefree and pairwise coprime. Returns the nontrivial
    /// `(f_i, i)` pairs.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().map_or(true, |d| d == 0) {
            return out;
        }
        let p = self.primitive();
        let dp = p.derivative();
        let g = Self::gcd(&p, &dp);
        // the co-sequences must keep their exact scales: the recurrence
        // couples each one to the other's derivative
        let mut b = p.exact_div(&g);
        let mut c = dp.exact_div(&g);
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while b.degree().map_or(false, |deg| deg > 0) {
            let a = Self::gcd(&b, &d);
            if a.degree().map_or(false, |deg| deg > 0) {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Product of the squarefree factors appearing with odd multiplicity.
    /// Sign changes of `self` on the real line happen exactly at its roots.
    pub fn odd_multiplicity_part(&self) -> Self {
        let mut out = Self::new(vec![BigRational::one()]);
        for (f, m) in self.squarefree_decomposition() {
            if m % 2 == 1 {
                out = out.mul(&f);
            }
        }
        out.primitive()
    }

    /// Cauchy bound: every real root x satisfies |x| < bound.
    pub fn cauchy_root_bound(&self) -> BigRational {
        let lead = match self.leading() {
            Some(l) => l.clone(),
            None => return BigRational::one(),
        };
        let mut max = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let ratio = (c / &lead).abs();
            if ratio > max {
                max = ratio;
            }
        }
        max + BigRational::one()
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

// ----- integer pseudo-remainder machinery ----------------------------------

fn int_trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn int_make_primitive(v: &mut Vec<BigInt>) {
    let mut g = BigInt::zero();
    for c in v.iter() {
        g = g.gcd(c);
    }
    if g > BigInt::one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// Integer pseudo-remainder with a positive overall scale: the input is
/// premultiplied by an even power of the divisor's leading coefficient,
/// so the result is a positive multiple of the true remainder. This keeps
/// Sturm chains sign-correct.
pub(crate) fn int_pseudo_rem(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let dg = g.len() - 1;
    let lg = g.last().expect("nonzero divisor").clone();
    if f.len() <= dg {
        return f.to_vec();
    }
    let delta = f.len() - 1 - dg;
    let mut e = (delta + 1) as u32;
    if e % 2 == 1 {
        e += 1;
    }
    let scale = num_traits::Pow::pow(&lg, e);
    let mut r: Vec<BigInt> = f.iter().map(|c| c * &scale).collect();
    while r.len() > dg {
        let lead = r.last().unwrap().clone();
        if !lead.is_zero() {
            // exact by the classical pseudo-division scaling
            let q = &lead / &lg;
            debug_assert!((&q * &lg) == lead);
            let shift = r.len() - 1 - dg;
            for (k, gc) in g.iter().enumerate() {
                let prod = &q * gc;
                r[shift + k] -= prod;
            }
        }
        r.pop();
        int_trim(&mut r);
        if r.len() <= dg {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = UnivarPoly::from_integers(&[2, -3, 1]); // x^2 - 3x + 2
        let b = UnivarPoly::from_integers(&[-1, 1]); // x - 1
        let (qt, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(qt, UnivarPoly::from_integers(&[-2, 1]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x-2) and (x-1)(x+5)
        let a = UnivarPoly::from_integers(&[2, -3, 1]);
        let b = UnivarPoly::from_integers(&[-5, 4, 1]);
        let g = UnivarPoly::gcd(&a, &b);
        assert_eq!(g, UnivarPoly::from_integers(&[-1, 1]));
    }

    #[test]
    fn squarefree_decomposition_of_cube_times_linear() {
        // (x-1)^3 (x+2)
        let f = UnivarPoly::from_integers(&[-1, 1]);
        let g = UnivarPoly::from_integers(&[2, 1]);
        let p = f.mul(&f).mul(&f).mul(&g);
        let decomp = p.squarefree_decomposition();
        assert_eq!(decomp.len(), 2);
        assert_eq!(decomp[0], (g.clone(), 1));
        assert_eq!(decomp[1], (f.clone(), 3));
        let odd = p.odd_multiplicity_part();
        assert_eq!(odd, f.mul(&g).primitive());
    }

    #[test]
    fn content_and_primitive() {
        let p = UnivarPoly::new(vec![q(2, 3), q(4, 3)]);
        assert_eq!(p.content(), Some(q(2, 3)));
        assert_eq!(p.primitive(), UnivarPoly::from_integers(&[1, 2]));
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let p = UnivarPoly::from_integers(&[-6, 1, 1]); // (x+3)(x-2)
        let b = p.cauchy_root_bound();
        assert!(b > q(3, 1));
    }
}
