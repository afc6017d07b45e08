//! Sparse bivariate polynomials with exact rational coefficients.
//!
//! A [`BivarPoly`] is a map from exponent pairs to nonzero rational
//! coefficients, tagged with the basis its variables live in: either the
//! principal curvatures `(l1, l2)` or the algebraic pair `(H, A)` with
//! `H = l1 + l2` and `A = l1^2 + l2^2`. All arithmetic is exact; equality
//! is structural equality of the term maps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::univar::UnivarPoly;

/// Interpretation of the two variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    /// Variables are the principal curvatures `l1`, `l2`.
    Lambda,
    /// Variables are the mean curvature `H` and `A = |A|^2 = l1^2 + l2^2`.
    HA,
}

impl Basis {
    pub fn var_names(self) -> (&'static str, &'static str) {
        match self {
            Basis::Lambda => ("l1", "l2"),
            Basis::HA => ("H", "A"),
        }
    }
}

/// One of the two variables, independent of basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    /// Division by the zero polynomial, or a rational function with zero
    /// denominator.
    DivisionByZero,
    /// Exact division requested but the divisor does not divide.
    NotDivisible,
    /// An operation requiring a symmetric input received an asymmetric one.
    NotSymmetric,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DivisionByZero => write!(f, "division by zero polynomial"),
            PolyError::NotDivisible => write!(f, "exact division failed: not divisible"),
            PolyError::NotSymmetric => write!(f, "operation requires a symmetric input"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Sparse bivariate polynomial in canonical form: no zero coefficients are
/// stored and exponents are nonnegative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BivarPoly {
    basis: Basis,
    terms: BTreeMap<(u32, u32), BigRational>,
}

/// Graded-lexicographic comparison with the first variable ranked higher.
pub fn glex_cmp(a: (u32, u32), b: (u32, u32)) -> std::cmp::Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

impl BivarPoly {
    pub fn zero(basis: Basis) -> Self {
        BivarPoly {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(basis: Basis) -> Self {
        Self::constant(basis, BigRational::one())
    }

    pub fn constant(basis: Basis, c: BigRational) -> Self {
        let mut p = Self::zero(basis);
        p.add_term((0, 0), c);
        p
    }

    pub fn from_integer(basis: Basis, n: i64) -> Self {
        Self::constant(basis, BigRational::from(BigInt::from(n)))
    }

    pub fn var(basis: Basis, v: Var) -> Self {
        let mut p = Self::zero(basis);
        let m = match v {
            Var::First => (1, 0),
            Var::Second => (0, 1),
        };
        p.add_term(m, BigRational::one());
        p
    }

    pub fn monomial(basis: Basis, exps: (u32, u32), c: BigRational) -> Self {
        let mut p = Self::zero(basis);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I>(basis: Basis, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigRational)>,
    {
        let mut p = Self::zero(basis);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(0, 0))
                .map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|&m| m == (0, 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// True when every term has the same total degree. The zero polynomial
    /// counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|&(i, j)| i + j);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_glex(&self) -> Option<((u32, u32), &BigRational)> {
        self.terms
            .iter()
            .max_by(|a, b| glex_cmp(*a.0, *b.0))
            .map(|(m, c)| (*m, c))
    }

    pub fn neg(&self) -> Self {
        BivarPoly {
            basis: self.basis,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis, "basis mismatch in polynomial addition");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis, "basis mismatch in polynomial product");
        let mut out = Self::zero(self.basis);
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis);
        }
        BivarPoly {
            basis: self.basis,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.basis);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * x.pow(i as i32) * y.pow(j as i32);
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero(self.basis);
        for (&(i, j), c) in &self.terms {
            match v {
                Var::First if i > 0 => {
                    out.add_term((i - 1, j), c * BigRational::from(BigInt::from(i)))
                }
                Var::Second if j > 0 => {
                    out.add_term((i, j - 1), c * BigRational::from(BigInt::from(j)))
                }
                _ => {}
            }
        }
        out
    }

    /// Exchange the two variables.
    pub fn swap_vars(&self) -> Self {
        BivarPoly {
            basis: self.basis,
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap_vars()
    }

    /// Substitute polynomials for both variables. The replacements must
    /// share a basis, which becomes the basis of the result.
    pub fn substitute(&self, first: &BivarPoly, second: &BivarPoly) -> Self {
        assert_eq!(first.basis, second.basis, "basis mismatch in substitution");
        let out_basis = first.basis;
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let pow1 = power_table(first, max_i);
        let pow2 = power_table(second, max_j);
        let mut out = Self::zero(out_basis);
        for (&(i, j), c) in &self.terms {
            out = out.add(&pow1[i as usize].mul(&pow2[j as usize]).scale(c));
        }
        out
    }

    /// Positive rational content (gcd of coefficients); `None` for zero.
    pub fn content(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Some(BigRational::new(num_gcd, den_lcm))
    }

    /// Scale by a positive rational so coefficients become coprime integers.
    pub fn primitive(&self) -> Self {
        match self.content() {
            None => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// Exact division; errors when the divisor is zero or does not divide.
    /// Homogeneous pairs take a dense univariate path in scaled integer
    /// arithmetic; the general case eliminates leading terms under
    /// graded-lex order.
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        assert_eq!(self.basis, d.basis, "basis mismatch in exact division");
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.basis));
        }
        if self.is_homogeneous() && d.is_homogeneous() {
            return homogeneous_exact_div(self, d);
        }
        let (dm, dc) = d.leading_glex().unwrap();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.basis);
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_glex().unwrap();
            if rm.0 < dm.0 || rm.1 < dm.1 {
                return Err(PolyError::NotDivisible);
            }
            let qm = (rm.0 - dm.0, rm.1 - dm.1);
            let qc = rc / &dc;
            let t = Self::monomial(self.basis, qm, qc.clone());
            rem = rem.sub(&t.mul(d));
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// The univariate slice `p(x, 1)`, used for quadrant sign analysis of
    /// homogeneous polynomials.
    pub fn dehomogenize_second(&self) -> UnivarPoly {
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let mut cs = vec![BigRational::zero(); max_i as usize + 1];
        for (&(i, _), c) in &self.terms {
            cs[i as usize] += c;
        }
        UnivarPoly::new(cs)
    }

    /// The univariate restriction to the diagonal, `p(x, x)`.
    pub fn restrict_diagonal(&self) -> UnivarPoly {
        let max_d = self.degree().unwrap_or(0);
        let mut cs = vec![BigRational::zero(); max_d as usize + 1];
        for (&(i, j), c) in &self.terms {
            cs[(i + j) as usize] += c;
        }
        UnivarPoly::new(cs)
    }

    /// Rewrite a symmetric polynomial in the elementary symmetric
    /// polynomials: the result `q` satisfies
    /// `self(x, y) = q(x + y, x * y)`. Errors on asymmetric input.
    pub fn symmetric_to_elementary(&self) -> Result<BivarPoly, PolyError> {
        if !self.is_symmetric() {
            return Err(PolyError::NotSymmetric);
        }
        let e1 = Self::from_terms(self.basis, [((1, 0), BigRational::one()), ((0, 1), BigRational::one())]);
        let e2 = Self::monomial(self.basis, (1, 1), BigRational::one());
        let mut rem = self.clone();
        let mut out = Self::zero(self.basis);
        while !rem.is_zero() {
            // lexicographic leading term of a symmetric polynomial has i >= j
            let (&(i, j), c) = rem.terms.iter().max().unwrap();
            debug_assert!(i >= j);
            let c = c.clone();
            out.add_term((i - j, j), c.clone());
            let t = e1.pow(i - j).mul(&e2.pow(j)).scale(&c);
            rem = rem.sub(&t);
        }
        Ok(out)
    }

    /// Greatest common divisor, normalized to primitive integer
    /// coefficients with positive graded-lex leading coefficient.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        assert_eq!(a.basis, b.basis, "basis mismatch in gcd");
        if a.is_zero() {
            return normalize_gcd(b.clone());
        }
        if b.is_zero() {
            return normalize_gcd(a.clone());
        }
        let g = if a.is_homogeneous() && b.is_homogeneous() {
            homogeneous_gcd(a, b)
        } else {
            general_gcd(a, b)
        };
        normalize_gcd(g)
    }
}

fn power_table(p: &BivarPoly, up_to: u32) -> Vec<BivarPoly> {
    let mut out = Vec::with_capacity(up_to as usize + 1);
    out.push(BivarPoly::one(p.basis()));
    for k in 1..=up_to as usize {
        let next = out[k - 1].mul(p);
        out.push(next);
    }
    out
}

fn normalize_gcd(p: BivarPoly) -> BivarPoly {
    if p.is_zero() {
        return p;
    }
    let prim = p.primitive();
    match prim.leading_glex() {
        Some((_, c)) if c.is_negative() => prim.neg(),
        _ => prim,
    }
}

/// Gcd of homogeneous polynomials via their dehomogenized slices: every
/// irreducible factor of a homogeneous bivariate polynomial is either the
/// second variable or the homogenization of a factor of `p(x, 1)`.
fn homogeneous_gcd(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    let pa = a.dehomogenize_second();
    let pb = b.dehomogenize_second();
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    let va = da as usize - pa.degree().unwrap();
    let vb = db as usize - pb.degree().unwrap();
    let second_power = va.min(vb) as u32;
    let g = UnivarPoly::gcd(&pa, &pb);
    let gd = g.degree().unwrap();
    let mut out = BivarPoly::zero(a.basis());
    for (i, c) in g.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.add_term((i as u32, (gd - i) as u32 + second_power), c.clone());
        }
    }
    out
}

// ----- general gcd: primitive pseudo-remainder sequence ------------------
//
// The polynomial is viewed in its first variable with coefficients in
// Q[second]; contents are pulled out and handled by univariate gcds.

fn to_main_view(p: &BivarPoly) -> Vec<UnivarPoly> {
    let max_i = p.terms().map(|(&(i, _), _)| i).max().unwrap_or(0);
    let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); max_i as usize + 1];
    for (&(i, j), c) in p.terms() {
        let row = &mut rows[i as usize];
        if row.len() <= j as usize {
            row.resize(j as usize + 1, BigRational::zero());
        }
        row[j as usize] = c.clone();
    }
    rows.into_iter().map(UnivarPoly::new).collect()
}

fn from_main_view(basis: Basis, v: &[UnivarPoly]) -> BivarPoly {
    let mut out = BivarPoly::zero(basis);
    for (i, row) in v.iter().enumerate() {
        for (j, c) in row.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
    }
    out
}

fn view_trim(v: &mut Vec<UnivarPoly>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn view_content(v: &[UnivarPoly]) -> UnivarPoly {
    let mut g = UnivarPoly::zero();
    for c in v {
        if !c.is_zero() {
            g = UnivarPoly::gcd(&g, c);
        }
    }
    g
}

fn view_divide(v: &[UnivarPoly], d: &UnivarPoly) -> Vec<UnivarPoly> {
    v.iter()
        .map(|c| if c.is_zero() { UnivarPoly::zero() } else { c.exact_div(d) })
        .collect()
}

/// Pseudo-remainder of `f` by `g` in the main variable.
fn pseudo_rem(mut f: Vec<UnivarPoly>, g: &[UnivarPoly]) -> Vec<UnivarPoly> {
    let dg = g.len() - 1;
    let lg = g[dg].clone();
    view_trim(&mut f);
    while f.len() > dg {
        let df = f.len() - 1;
        let lf = f[df].clone();
        // f = lg * f - lf * x^(df-dg) * g
        for c in f.iter_mut() {
            *c = c.mul(&lg);
        }
        let shift = df - dg;
        for (k, gc) in g.iter().enumerate() {
            f[shift + k] = f[shift + k].sub(&lf.mul(gc));
        }
        debug_assert!(f[df].is_zero());
        f.pop();
        view_trim(&mut f);
    }
    f
}

fn general_gcd(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    let basis = a.basis();
    let va = to_main_view(a);
    let vb = to_main_view(b);
    let cont_a = view_content(&va);
    let cont_b = view_content(&vb);
    let cont_gcd = UnivarPoly::gcd(&cont_a, &cont_b);
    let pa = view_divide(&va, &cont_a);
    let pb = view_divide(&vb, &cont_b);

    // If either input is free of the main variable, its primitive part is 1,
    // so the gcd reduces to the gcd of the contents.
    if pa.len() == 1 || pb.len() == 1 {
        return from_main_view(basis, &[cont_gcd]);
    }

    let (mut r0, mut r1) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    loop {
        let mut r = pseudo_rem(r0, &r1);
        if r.is_empty() {
            break;
        }
        let c = view_content(&r);
        r = view_divide(&r, &c);
        r0 = r1;
        r1 = r;
        if r1.len() == 1 {
            // coprime in the main variable
            r1 = vec![UnivarPoly::new(vec![BigRational::one()])];
            break;
        }
    }
    let mut g: Vec<UnivarPoly> = r1.iter().map(|c| c.mul(&cont_gcd)).collect();
    view_trim(&mut g);
    from_main_view(basis, &g)
}

// ----- printing -----------------------------------------------------------

fn format_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_monomial(names: (&str, &str), m: (u32, u32)) -> Option<String> {
    let mut parts = Vec::new();
    for (name, e) in [(names.0, m.0), (names.1, m.1)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

impl fmt::Display for BivarPoly {
    /// Deterministic, re-parseable text with terms in descending
    /// graded-lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.basis.var_names();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| glex_cmp(*b.0, *a.0));
        for (k, (&m, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match format_monomial(names, m) {
                None => write!(f, "{}", format_coeff(&mag))?,
                Some(mono) => {
                    if mag.is_one() {
                        write!(f, "{mono}")?;
                    } else {
                        write!(f, "{}*{mono}", format_coeff(&mag))?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: Var) -> BivarPoly {
        BivarPoly::var(Basis::Lambda, v)
    }

    fn int(n: i64) -> BivarPoly {
        BivarPoly::from_integer(Basis::Lambda, n)
    }

    #[test]
    fn difference_of_squares() {
        let l1 = lam(Var::First);
        let l2 = lam(Var::Second);
        let prod = l1.sub(&l2).mul(&l1.add(&l2));
        let expect = l1.mul(&l1).sub(&l2.mul(&l2));
        assert_eq!(prod, expect);
        assert_eq!(prod.to_string(), "l1^2 - l2^2");
    }

    #[test]
    fn gcd_difference_of_squares() {
        let l1 = lam(Var::First);
        let l2 = lam(Var::Second);
        let a = l1.mul(&l1).sub(&l2.mul(&l2));
        let b = l1.sub(&l2);
        let g = BivarPoly::gcd(&a, &b);
        assert_eq!(g, b);
    }

    #[test]
    fn gcd_general_nonhomogeneous() {
        // (x + y^2 + 1)(x - y) and (x + y^2 + 1)(x + 3)
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let common = x.add(&y.mul(&y)).add(&int(1));
        let a = common.mul(&x.sub(&y));
        let b = common.mul(&x.add(&int(3)));
        let g = BivarPoly::gcd(&a, &b);
        assert_eq!(g, common);
    }

    #[test]
    fn gcd_ignores_scalar_content() {
        // scalars are units over the rationals: the gcd of 6(x - y) and
        // 4(x - y)(x + y) is normalized to the primitive x - y
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let a = x.sub(&y).scale(&BigRational::from(BigInt::from(6)));
        let b = x.sub(&y).mul(&x.add(&y)).scale(&BigRational::from(BigInt::from(4)));
        let g = BivarPoly::gcd(&a, &b);
        assert_eq!(g, x.sub(&y));
    }

    #[test]
    fn exact_div_detects_failure() {
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let a = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(a.exact_div(&x.sub(&y)).unwrap(), x.add(&y));
        assert_eq!(a.exact_div(&x.add(&int(1))), Err(PolyError::NotDivisible));
        assert_eq!(
            a.exact_div(&BivarPoly::zero(Basis::Lambda)),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn symmetric_to_elementary_power_sum() {
        // l1^3 + l2^3 = e1^3 - 3 e1 e2
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let p = x.pow(3).add(&y.pow(3));
        let e = p.symmetric_to_elementary().unwrap();
        let expect = BivarPoly::from_terms(
            Basis::Lambda,
            [
                ((3, 0), BigRational::one()),
                ((1, 1), BigRational::from(BigInt::from(-3))),
            ],
        );
        assert_eq!(e, expect);
        assert!(x.symmetric_to_elementary().is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let p = x.pow(2).mul(&y); // l1^2 l2
        assert_eq!(p.derivative(Var::First), x.mul(&y).scale(&BigRational::from(BigInt::from(2))));
        let two = BigRational::from(BigInt::from(2));
        let three = BigRational::from(BigInt::from(3));
        assert_eq!(p.evaluate(&two, &three), BigRational::from(BigInt::from(12)));
    }

    #[test]
    fn display_constant_and_rational_coeffs() {
        let p = BivarPoly::from_terms(
            Basis::Lambda,
            [
                ((1, 0), BigRational::new(BigInt::from(1), BigInt::from(2))),
                ((0, 0), BigRational::from(BigInt::from(-3))),
            ],
        );
        assert_eq!(p.to_string(), "1/2*l1 - 3");
        assert_eq!(BivarPoly::zero(Basis::Lambda).to_string(), "0");
    }

    #[test]
    fn homogeneous_gcd_with_second_var_factor() {
        // a = l2^2 (l1 + l2), b = l2 (l1 + l2)^2 -> gcd = l2 (l1 + l2)
        let x = lam(Var::First);
        let y = lam(Var::Second);
        let s = x.add(&y);
        let a = y.pow(2).mul(&s);
        let b = y.mul(&s.pow(2));
        assert_eq!(BivarPoly::gcd(&a, &b), y.mul(&s));
    }
}
