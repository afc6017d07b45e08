//! Exact sign analysis on the open positive quadrant.
//!
//! The quadrant question for a homogeneous rational function reduces to a
//! one-variable question on the positive axis by setting the second
//! curvature to one. Sign changes on the axis are located exactly with
//! Sturm chains; verdicts are certificates, and indefinite verdicts carry
//! a rational witness point that reproduces the violating sign on
//! re-evaluation. A seeded randomized filter provides the cheap first
//! pass used by the candidate sieve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::BivarPoly;
use crate::ratfn::RationalFn;
pub use crate::univar::UnivarPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositivityError {
    /// `sturm_count` requires a squarefree input.
    NotSquarefree,
    /// Quadrant analysis requires separately homogeneous numerator and
    /// denominator.
    NotHomogeneous,
    /// The sampling interval is empty.
    EmptyInterval,
    /// Random sampling kept hitting denominator zeros.
    SamplingFailed,
}

impl std::fmt::Display for PositivityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PositivityError::NotSquarefree => write!(f, "polynomial is not squarefree"),
            PositivityError::NotHomogeneous => write!(f, "input is not homogeneous"),
            PositivityError::EmptyInterval => write!(f, "empty interval"),
            PositivityError::SamplingFailed => {
                write!(f, "random sampling failed to find regular points")
            }
        }
    }
}

impl std::error::Error for PositivityError {}

/// Upper endpoint of a count interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpperBound {
    At(BigRational),
    Infinity,
}

/// Sturm chain of a univariate polynomial: the polynomial, its derivative,
/// then negated remainders, each rescaled to primitive integer form (a
/// positive scaling, so sign variations are unchanged).
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UnivarPoly>,
}

impl SturmChain {
    pub fn new(p: &UnivarPoly) -> Self {
        // integer pseudo-remainders with positive scale keep the signs of
        // the true remainder sequence while avoiding rational arithmetic
        let mut ints: Vec<Vec<num_bigint::BigInt>> = vec![p.to_scaled_integers()];
        let d = p.derivative();
        if !d.is_zero() {
            ints.push(d.to_scaled_integers());
            loop {
                let k = ints.len();
                let mut r = crate::univar::int_pseudo_rem(&ints[k - 2], &ints[k - 1]);
                if r.is_empty() {
                    break;
                }
                for c in &mut r {
                    *c = -&*c;
                }
                crate::univar::int_make_primitive(&mut r);
                ints.push(r);
            }
        }
        SturmChain {
            chain: ints.into_iter().map(UnivarPoly::from_big_integers).collect(),
        }
    }

    pub fn chain(&self) -> &[UnivarPoly] {
        &self.chain
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.chain.iter().map(|p| sign_i8(&p.eval(x))))
    }

    fn variations_at_infinity(&self) -> usize {
        count_variations(self.chain.iter().map(|p| match p.leading() {
            None => 0,
            Some(c) => sign_i8(c),
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    /// Requires a squarefree base polynomial.
    pub fn count_half_open(&self, a: &BigRational, b: &UpperBound) -> usize {
        let va = self.variations_at(a);
        let vb = match b {
            UpperBound::At(x) => self.variations_at(x),
            UpperBound::Infinity => self.variations_at_infinity(),
        };
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &BigRational, b: &UpperBound) -> usize {
        let mut n = self.count_half_open(a, b);
        if let UpperBound::At(x) = b {
            if n > 0 && self.chain[0].eval(x).is_zero() {
                n -= 1;
            }
        }
        n
    }
}

fn sign_i8(c: &BigRational) -> i8 {
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

fn count_variations<I: Iterator<Item = i8>>(signs: I) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Exact count of distinct real roots of a squarefree polynomial in
/// `(a, b]`.
pub fn sturm_count(
    p: &UnivarPoly,
    a: &BigRational,
    b: &UpperBound,
) -> Result<usize, PositivityError> {
    if !p.is_squarefree() {
        return Err(PositivityError::NotSquarefree);
    }
    if let UpperBound::At(x) = b {
        if x <= a {
            return Err(PositivityError::EmptyInterval);
        }
    }
    Ok(SturmChain::new(p).count_half_open(a, b))
}

/// Sign pattern of a polynomial on an open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisSign {
    Zero,
    /// Nonnegative on the interval; isolated zeros are allowed.
    NonNegative,
    /// Nonpositive on the interval; isolated zeros are allowed.
    NonPositive,
    /// Takes both signs; the two points certify it.
    Indefinite {
        negative_at: BigRational,
        positive_at: BigRational,
    },
}

/// Witness-free sign pattern, for callers that only gate on the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuickSign {
    Zero,
    NonNegative,
    NonPositive,
    Mixed,
}

/// Shared sign-analysis state for one polynomial queried on several
/// intervals: the odd-multiplicity part and its Sturm chain are built
/// once. The polynomial changes sign exactly at the roots of the odd
/// part.
pub struct SignAnalyzer {
    p: UnivarPoly,
    odd: UnivarPoly,
    chain: SturmChain,
}

impl SignAnalyzer {
    pub fn new(p: &UnivarPoly) -> Self {
        let odd = if p.is_zero() {
            UnivarPoly::zero()
        } else {
            p.odd_multiplicity_part()
        };
        SignAnalyzer {
            chain: SturmChain::new(&odd),
            odd,
            p: p.clone(),
        }
    }

    /// Finite surrogate for an infinite right endpoint, strictly past
    /// every root.
    fn right_end(&self, a: &BigRational, b: &UpperBound) -> BigRational {
        match b {
            UpperBound::At(x) => x.clone(),
            UpperBound::Infinity => {
                let mut bound = self.p.squarefree_part().cauchy_root_bound();
                if bound <= *a {
                    bound = a + BigRational::one();
                }
                bound + BigRational::one()
            }
        }
    }

    /// Verdict on the open interval `(a, b)` without witness search.
    pub fn quick_sign(&self, a: &BigRational, b: &UpperBound) -> QuickSign {
        if self.p.is_zero() {
            return QuickSign::Zero;
        }
        let hi = self.right_end(a, b);
        if self.chain.count_open(a, &UpperBound::At(hi.clone())) > 0 {
            return QuickSign::Mixed;
        }
        match sample_sign(&self.p, a, &hi) {
            1 => QuickSign::NonNegative,
            _ => QuickSign::NonPositive,
        }
    }

    /// Full verdict with a bracketed sign change for mixed outcomes.
    pub fn sign(&self, a: &BigRational, b: &UpperBound) -> AxisSign {
        if self.p.is_zero() {
            return AxisSign::Zero;
        }
        let hi = self.right_end(a, b);
        if self.chain.count_open(a, &UpperBound::At(hi.clone())) == 0 {
            return match sample_sign(&self.p, a, &hi) {
                1 => AxisSign::NonNegative,
                -1 => AxisSign::NonPositive,
                _ => unreachable!("nonzero polynomial with no sign change has a nonzero sample"),
            };
        }
        let (negative_at, positive_at) = bracket_sign_change(&self.p, &self.chain, a.clone(), hi);
        AxisSign::Indefinite {
            negative_at,
            positive_at,
        }
    }

    pub fn odd_part(&self) -> &UnivarPoly {
        &self.odd
    }
}

/// Determine the sign of `p` on the open interval `(a, b)`, with
/// witnesses for indefinite outcomes.
pub fn sign_on_interval(p: &UnivarPoly, a: &BigRational, b: &UpperBound) -> AxisSign {
    SignAnalyzer::new(p).sign(a, b)
}

/// Sign of `p` on the positive axis `(0, oo)`.
pub fn sign_on_positive_axis(p: &UnivarPoly) -> AxisSign {
    sign_on_interval(p, &BigRational::zero(), &UpperBound::Infinity)
}

/// Sign of `p` at some interior point of `(a, b)` where `p` is nonzero.
/// Tries a dyadic ladder; `p` has finitely many roots, so this terminates.
fn sample_sign(p: &UnivarPoly, a: &BigRational, b: &BigRational) -> i8 {
    let mut step = (b - a) / BigRational::from(BigInt::from(2));
    loop {
        let x = a + &step;
        let s = sign_i8(&p.eval(&x));
        if s != 0 {
            return s;
        }
        step /= BigRational::from(BigInt::from(2));
    }
}

/// Find `(u, v)` inside `(a, hi)` with `p(u) < 0 < p(v)`, given that the
/// odd part has at least one root there. `chain` belongs to the odd part.
fn bracket_sign_change(
    p: &UnivarPoly,
    chain: &SturmChain,
    a: BigRational,
    hi: BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from(BigInt::from(2));
    let odd = &chain.chain()[0];
    let mut lo = a;
    let mut hi = hi;
    // shrink until exactly one sign-change root remains and the right
    // endpoint is interior with a nonzero value
    loop {
        let mid = (&lo + &hi) / &two;
        if odd.eval(&mid).is_zero() {
            return straddle_known_root(p, chain, &lo, &mid, &hi);
        }
        let left = chain.count_open(&lo, &UpperBound::At(mid.clone()));
        if left >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if chain.count_open(&lo, &UpperBound::At(hi.clone())) == 1
            && !p.eval(&hi).is_zero()
        {
            break;
        }
    }
    // exactly one odd root r in (lo, hi): walk toward lo until we cross it
    let s_hi = sign_i8(&p.eval(&hi));
    let mut step = (&hi - &lo) / &two;
    loop {
        let x = &lo + &step;
        if !odd.eval(&x).is_zero() {
            let s = sign_i8(&p.eval(&x));
            if s != 0 && s != s_hi {
                return if s < 0 { (x, hi) } else { (hi, x) };
            }
        }
        step /= &two;
    }
}

/// `mid` is an odd-multiplicity root. Shrink a symmetric window around it
/// until both ends are nonzero and it is the only sign change inside.
fn straddle_known_root(
    p: &UnivarPoly,
    chain: &SturmChain,
    lo: &BigRational,
    mid: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from(BigInt::from(2));
    let mut delta = (hi - lo) / BigRational::from(BigInt::from(4));
    loop {
        let u = mid - &delta;
        let v = mid + &delta;
        if u > *lo
            && v < *hi
            && chain.count_open(&u, &UpperBound::At(v.clone())) == 1
            && !p.eval(&u).is_zero()
            && !p.eval(&v).is_zero()
        {
            let su = sign_i8(&p.eval(&u));
            return if su < 0 { (u, v) } else { (v, u) };
        }
        delta /= &two;
    }
}

/// Verdict of an exact quadrant sign analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignVerdict {
    NonnegativeOnQuadrant,
    NonpositiveOnQuadrant,
    ZeroIdentically,
    Indefinite,
}

impl SignVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SignVerdict::NonnegativeOnQuadrant => "NonnegativeOnQuadrant",
            SignVerdict::NonpositiveOnQuadrant => "NonpositiveOnQuadrant",
            SignVerdict::ZeroIdentically => "ZeroIdentically",
            SignVerdict::Indefinite => "Indefinite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sturm,
    RandomizedOnly,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Sturm => "sturm",
            Method::RandomizedOnly => "randomized-only",
        }
    }
}

/// Exact verdict for a rational function on the open positive quadrant.
/// Indefinite verdicts carry a witness whose re-evaluation reproduces the
/// violating sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCertificate {
    pub verdict: SignVerdict,
    pub witness: Option<(BigRational, BigRational)>,
    pub method: Method,
}

/// Exact sign of a homogeneous rational function on `{l1 > 0, l2 > 0}`.
///
/// Since numerator and denominator are coprime, the sign of the quotient
/// away from poles equals the sign of their product, so one axis analysis
/// of `num(x,1) * den(x,1)` settles the quadrant by homogeneity. A sign
/// change in the denominator alone also flips the product, because the
/// numerator cannot vanish at a pole. Indefinite certificates carry the
/// witness with positive value (the one refuting a nonpositivity claim).
pub fn quadrant_sign(f: &RationalFn) -> Result<SignCertificate, PositivityError> {
    quadrant_sign_detailed(f).map(|(cert, _)| cert)
}

/// Like [`quadrant_sign`] but also reporting the pair of a negative and a
/// positive witness point for indefinite verdicts.
pub fn quadrant_sign_detailed(
    f: &RationalFn,
) -> Result<(SignCertificate, Option<((BigRational, BigRational), (BigRational, BigRational))>), PositivityError>
{
    if !f.num().is_homogeneous() || !f.den().is_homogeneous() {
        return Err(PositivityError::NotHomogeneous);
    }
    if f.is_zero() {
        return Ok((
            SignCertificate {
                verdict: SignVerdict::ZeroIdentically,
                witness: None,
                method: Method::Sturm,
            },
            None,
        ));
    }
    let product = f
        .num()
        .dehomogenize_second()
        .mul(&f.den().dehomogenize_second());
    match sign_on_positive_axis(&product) {
        AxisSign::Zero => unreachable!("product of nonzero dehomogenized parts"),
        AxisSign::NonNegative => Ok((
            SignCertificate {
                verdict: SignVerdict::NonnegativeOnQuadrant,
                witness: None,
                method: Method::Sturm,
            },
            None,
        )),
        AxisSign::NonPositive => Ok((
            SignCertificate {
                verdict: SignVerdict::NonpositiveOnQuadrant,
                witness: None,
                method: Method::Sturm,
            },
            None,
        )),
        AxisSign::Indefinite {
            negative_at,
            positive_at,
        } => {
            let one = BigRational::one();
            let neg = (negative_at, one.clone());
            let pos = (positive_at, one);
            Ok((
                SignCertificate {
                    verdict: SignVerdict::Indefinite,
                    witness: Some(pos.clone()),
                    method: Method::Sturm,
                },
                Some((neg, pos)),
            ))
        }
    }
}

/// True when a homogeneous polynomial is strictly positive on the open
/// quadrant (no zeros at all). Nonnegative coefficients are a fast path:
/// any nonzero such polynomial is positive at positive arguments.
pub fn strictly_positive_on_quadrant(p: &BivarPoly) -> Result<bool, PositivityError> {
    if !p.is_homogeneous() {
        return Err(PositivityError::NotHomogeneous);
    }
    if p.is_zero() {
        return Ok(false);
    }
    if p.terms().all(|(_, c)| c.is_positive()) {
        return Ok(true);
    }
    let slice = p.dehomogenize_second();
    let sf = slice.squarefree_part();
    let chain = SturmChain::new(&sf);
    if chain.count_half_open(&BigRational::zero(), &UpperBound::Infinity) > 0 {
        return Ok(false);
    }
    Ok(slice.eval(&BigRational::one()).is_positive())
}

/// Nonnegativity of a homogeneous polynomial on the open quadrant, with
/// zeros allowed. Two fast paths before the exact axis analysis: all
/// coefficients nonnegative, or an even diagonal power times such a
/// polynomial (the shape of every sieve numerator).
pub fn nonnegative_on_quadrant(p: &BivarPoly) -> Result<bool, PositivityError> {
    if !p.is_homogeneous() {
        return Err(PositivityError::NotHomogeneous);
    }
    if p.is_zero() {
        return Ok(true);
    }
    if p.terms().all(|(_, c)| c.is_positive()) {
        return Ok(true);
    }
    let (power, stripped) = strip_diagonal_factor(p);
    if power % 2 == 0 && stripped.terms().all(|(_, c)| c.is_positive()) {
        return Ok(true);
    }
    Ok(matches!(
        SignAnalyzer::new(&p.dehomogenize_second()).quick_sign(&BigRational::zero(), &UpperBound::Infinity),
        QuickSign::NonNegative | QuickSign::Zero
    ))
}

/// Divide out as many diagonal factors `(l1 - l2)` as possible.
fn strip_diagonal_factor(p: &BivarPoly) -> (u32, BivarPoly) {
    let l1 = BivarPoly::var(p.basis(), crate::poly::Var::First);
    let l2 = BivarPoly::var(p.basis(), crate::poly::Var::Second);
    let diag = l1.sub(&l2);
    let mut power = 0;
    let mut cur = p.clone();
    while let Ok(q) = cur.exact_div(&diag) {
        cur = q;
        power += 1;
    }
    (power, cur)
}

/// Outcome of the randomized sampling filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefilterOutcome {
    Plausible,
    Refuted {
        witness: (BigRational, BigRational),
        value: BigRational,
    },
}

/// Target sign for the randomized filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignTarget {
    NonNegative,
    NonPositive,
}

/// Evaluate `f` at seeded random rational points of `(0, lambda_max]^2` and
/// report the first point violating the target sign. Deterministic for a
/// fixed seed; points where the denominator vanishes are resampled with a
/// bounded retry budget.
pub fn randomized_prefilter(
    f: &RationalFn,
    target: SignTarget,
    n_samples: u32,
    seed: u64,
    lambda_max: u32,
) -> Result<PrefilterOutcome, PositivityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    randomized_prefilter_with(f, target, n_samples, lambda_max, &mut rng)
}

/// Same as [`randomized_prefilter`], drawing from a caller-provided stream.
pub fn randomized_prefilter_with(
    f: &RationalFn,
    target: SignTarget,
    n_samples: u32,
    lambda_max: u32,
    rng: &mut ChaCha8Rng,
) -> Result<PrefilterOutcome, PositivityError> {
    let mut retries = 8 * n_samples as usize + 64;
    for _ in 0..n_samples {
        let (x, y, value) = loop {
            let x = random_coordinate(rng, lambda_max);
            let y = random_coordinate(rng, lambda_max);
            if let Some(v) = f.evaluate(&x, &y) {
                break (x, y, v);
            }
            if retries == 0 {
                return Err(PositivityError::SamplingFailed);
            }
            retries -= 1;
        };
        let bad = match target {
            SignTarget::NonPositive => value.is_positive(),
            SignTarget::NonNegative => value.is_negative(),
        };
        if bad {
            return Ok(PrefilterOutcome::Refuted {
                witness: (x, y),
                value,
            });
        }
    }
    Ok(PrefilterOutcome::Plausible)
}

fn random_coordinate(rng: &mut ChaCha8Rng, lambda_max: u32) -> BigRational {
    let den = rng.random_range(1..=16u64);
    let num = rng.random_range(1..=(lambda_max as u64) * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
