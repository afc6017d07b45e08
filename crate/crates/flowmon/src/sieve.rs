//! Candidate sieve: enumerate symmetric rational quantities and keep the
//! ones whose maximum is provably non-increasing under a given velocity.
//!
//! Candidates `w = p1 / p2` with homogeneous symmetric parts pass through
//! five stages, cheapest first:
//!
//! 1. (a) `p1 >= 0` and `p2 > 0` on the open quadrant, (b) `p1` vanishes
//!    on the diagonal;
//! 2. `deg p1 < deg p2`, so roundness is penalized more strongly as the
//!    surface expands;
//! 3. the slice `w(1, x)` falls toward `x = 1` from both sides;
//! 4. randomized sign tests of the evolution coefficients at seeded
//!    rational points;
//! 5. exact Sturm certification of `C_w <= 0` and `G_1 <= 0`.
//!
//! Stage 4 evaluates the evolution coefficients pointwise without
//! assembling them symbolically, so almost all of the search space never
//! touches the expensive exact stage. Every verified report carries the
//! full evolution result and both certificates.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::evolution::{self, EvolutionResult, QuantityDerivatives, VelocityDerivatives};
use crate::expr::{CertificateRecord, ReportRecord};
use crate::poly::{Basis, BivarPoly, Var};
use crate::positivity::{self, QuickSign, SignCertificate, SignVerdict, UpperBound};
use crate::ratfn::RationalFn;

/// Search-space description for [`search`].
#[derive(Clone, Debug)]
pub struct SearchSpace {
    /// Normal velocity `F` in the curvature basis (negative for
    /// expansion).
    pub velocity: RationalFn,
    /// Upper bound on `deg p2`.
    pub max_degree: u32,
    /// Inclusive coefficient range for the symmetric-basis coefficients of
    /// the generated parts. Zero coefficients mean "term absent".
    pub coeff_min: i64,
    pub coeff_max: i64,
    /// Generate `p1 = (l1 - l2)^2 * s1` structurally instead of checking
    /// the diagonal condition symbolically.
    pub require_diagonal_factor: bool,
    /// Samples per candidate in the randomized stage.
    pub n_samples: u32,
    pub seed: u64,
    /// Sampling box `(0, lambda_max]^2`.
    pub lambda_max: u32,
}

impl SearchSpace {
    pub fn new(velocity: RationalFn) -> Self {
        SearchSpace {
            velocity,
            max_degree: 6,
            coeff_min: 0,
            coeff_max: 4,
            require_diagonal_factor: true,
            n_samples: 100,
            seed: 0,
            lambda_max: 10,
        }
    }

    fn validate(&self) {
        assert!(self.max_degree >= 2, "max_degree must be at least 2");
        assert!(
            self.coeff_min <= self.coeff_max && self.coeff_max > 0,
            "coefficient range must be nonempty with a positive upper end"
        );
        assert!(self.n_samples >= 1);
    }
}

/// Stage labels used in reports and summaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Positivity1a,
    Diagonal1b,
    Degree2,
    SliceMonotone3,
    Randomized4,
    Exact4,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Positivity1a => "1a",
            Stage::Diagonal1b => "1b",
            Stage::Degree2 => "2",
            Stage::SliceMonotone3 => "3",
            Stage::Randomized4 => "4-randomized",
            Stage::Exact4 => "4-exact",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Rejected {
        stage: Stage,
        reason: String,
        witness: Option<(BigRational, BigRational)>,
    },
    Verified {
        result: Box<EvolutionResult>,
        cw_certificate: SignCertificate,
        g1_certificate: SignCertificate,
    },
}

#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub candidate: RationalFn,
    pub outcome: Outcome,
    pub timing: Duration,
}

impl CandidateReport {
    pub fn is_verified(&self) -> bool {
        matches!(self.outcome, Outcome::Verified { .. })
    }

    /// The serializable record; timings are deliberately excluded so that
    /// reports are byte-identical across runs and worker counts.
    pub fn to_record(&self, velocity: &RationalFn) -> ReportRecord {
        let witness_strings =
            |w: &(BigRational, BigRational)| [w.0.to_string(), w.1.to_string()];
        match &self.outcome {
            Outcome::Rejected {
                stage,
                reason,
                witness,
            } => ReportRecord {
                velocity: velocity.to_string(),
                candidate: self.candidate.to_string(),
                verdict: "rejected".into(),
                stage: Some(stage.as_str().into()),
                reason: Some(reason.clone()),
                c_w: None,
                g1: None,
                certificates: Vec::new(),
                witness: witness.as_ref().map(witness_strings),
            },
            Outcome::Verified {
                result,
                cw_certificate,
                g1_certificate,
            } => ReportRecord {
                velocity: velocity.to_string(),
                candidate: self.candidate.to_string(),
                verdict: "verified".into(),
                stage: None,
                reason: None,
                c_w: Some(result.cw.to_string()),
                g1: Some(result.g1.to_string()),
                certificates: vec![
                    CertificateRecord {
                        target: "C_w".into(),
                        verdict: cw_certificate.verdict.as_str().into(),
                        method: cw_certificate.method.as_str().into(),
                        witness: cw_certificate.witness.as_ref().map(witness_strings),
                    },
                    CertificateRecord {
                        target: "G1".into(),
                        verdict: g1_certificate.verdict.as_str().into(),
                        method: g1_certificate.method.as_str().into(),
                        witness: g1_certificate.witness.as_ref().map(witness_strings),
                    },
                ],
                witness: None,
            },
        }
    }
}

// ----- enumeration ----------------------------------------------------------

/// Monomial-symmetric basis of homogeneous symmetric polynomials of a given
/// degree: `m_(a,b) = l1^a l2^b + l1^b l2^a` for `a > b`, `l1^a l2^a` on
/// the diagonal.
fn symmetric_basis(degree: u32) -> Vec<BivarPoly> {
    let mut out = Vec::new();
    let mut a = degree;
    loop {
        let b = degree - a;
        if a < b {
            break;
        }
        let mut p = BivarPoly::monomial(Basis::Lambda, (a, b), BigRational::one());
        if a != b {
            p = p.add(&BivarPoly::monomial(Basis::Lambda, (b, a), BigRational::one()));
        }
        out.push(p);
        if a == 0 {
            break;
        }
        a -= 1;
    }
    out
}

/// All coefficient vectors over the range, skipping the zero vector and
/// keeping one representative per positive-scalar ray (coprime integer
/// coefficients with a positive first nonzero entry). Lexicographic order.
fn coefficient_vectors(len: usize, min: i64, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![min; len];
    loop {
        if let Some(&first) = cur.iter().find(|&&c| c != 0) {
            if first > 0 {
                let g = cur.iter().fold(0i64, |acc, &c| num_integer::gcd(acc, c.abs()));
                if g == 1 {
                    out.push(cur.clone());
                }
            }
        }
        // odometer increment
        let mut k = len;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < max {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = min;
                }
                break;
            }
        }
    }
}

fn poly_from_vector(basis: &[BivarPoly], v: &[i64]) -> BivarPoly {
    let mut p = BivarPoly::zero(Basis::Lambda);
    for (b, &c) in basis.iter().zip(v) {
        if c != 0 {
            p = p.add(&b.scale(&BigRational::from(BigInt::from(c))));
        }
    }
    p
}

/// Enumerate candidate quantities in a deterministic order, already in
/// canonical form and deduplicated up to positive scalar multiples. The
/// degree condition `deg p1 < deg p2` is enforced structurally.
pub fn enumerate_candidates(space: &SearchSpace) -> Vec<RationalFn> {
    space.validate();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let diag = {
        let l1 = BivarPoly::var(Basis::Lambda, Var::First);
        let l2 = BivarPoly::var(Basis::Lambda, Var::Second);
        l1.sub(&l2).pow(2)
    };
    let factor_degree = if space.require_diagonal_factor { 2 } else { 0 };
    for den_degree in 1..=space.max_degree {
        let den_basis = symmetric_basis(den_degree);
        let den_vectors = coefficient_vectors(den_basis.len(), space.coeff_min, space.coeff_max);
        for num_degree in factor_degree..den_degree {
            let num_basis = symmetric_basis(num_degree - factor_degree);
            let num_vectors =
                coefficient_vectors(num_basis.len(), space.coeff_min, space.coeff_max);
            for dv in &den_vectors {
                let p2 = poly_from_vector(&den_basis, dv);
                for nv in &num_vectors {
                    let s1 = poly_from_vector(&num_basis, nv);
                    let p1 = if space.require_diagonal_factor {
                        diag.mul(&s1)
                    } else {
                        s1
                    };
                    let w = match RationalFn::new(p1, p2.clone()) {
                        Ok(w) => w,
                        Err(_) => continue,
                    };
                    if w.is_zero() {
                        continue;
                    }
                    if seen.insert(w.clone()) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

// ----- filtering ------------------------------------------------------------

/// Velocity data shared across all candidates of one search.
pub struct VelocityContext {
    pub derivatives: VelocityDerivatives,
}

impl VelocityContext {
    pub fn new(velocity: &RationalFn) -> Result<Self, evolution::EngineError> {
        Ok(VelocityContext {
            derivatives: VelocityDerivatives::new(velocity)?,
        })
    }
}

/// Run one candidate through the full stage pipeline.
pub fn filter_candidate(
    ctx: &VelocityContext,
    w: &RationalFn,
    space: &SearchSpace,
    candidate_index: u64,
) -> CandidateReport {
    let start = Instant::now();
    let outcome = filter_stages(ctx, w, space, candidate_index);
    CandidateReport {
        candidate: w.clone(),
        outcome,
        timing: start.elapsed(),
    }
}

fn reject(stage: Stage, reason: impl Into<String>) -> Outcome {
    Outcome::Rejected {
        stage,
        reason: reason.into(),
        witness: None,
    }
}

fn filter_stages(
    ctx: &VelocityContext,
    w: &RationalFn,
    space: &SearchSpace,
    candidate_index: u64,
) -> Outcome {
    let p1 = w.num();
    let p2 = w.den();

    // stage 1a: sign conditions for the two parts
    match positivity::nonnegative_on_quadrant(p1) {
        Ok(true) => {}
        Ok(false) => return reject(Stage::Positivity1a, "numerator takes negative values"),
        Err(e) => return reject(Stage::Positivity1a, format!("degenerate: {e}")),
    }
    match positivity::strictly_positive_on_quadrant(p2) {
        Ok(true) => {}
        Ok(false) => {
            return reject(
                Stage::Positivity1a,
                "denominator is not strictly positive on the quadrant",
            )
        }
        Err(e) => return reject(Stage::Positivity1a, format!("degenerate: {e}")),
    }

    // stage 1b: the numerator vanishes on the diagonal
    if !p1.restrict_diagonal().is_zero() {
        return reject(Stage::Diagonal1b, "numerator does not vanish on the diagonal");
    }

    // stage 2: degree comparison
    let (d1, d2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
    if d1 >= d2 {
        return reject(
            Stage::Degree2,
            format!("deg p1 = {d1} is not below deg p2 = {d2}"),
        );
    }

    // stage 3: the slice w(1, x) decreases toward 1 and increases past it
    if let Some(out) = slice_condition(w) {
        return out;
    }

    // per-candidate symbolic data for the pointwise stage
    let qd = match QuantityDerivatives::new(w) {
        Ok(qd) => qd,
        Err(e) => return reject(Stage::Randomized4, format!("degenerate: {e}")),
    };

    // stage 4, randomized: pointwise evolution coefficients at seeded
    // rational sample points; the stream is split per candidate so worker
    // scheduling cannot change outcomes
    let mut rng = ChaCha8Rng::seed_from_u64(space.seed);
    rng.set_stream(candidate_index);
    match randomized_stage(ctx, &qd, space, &mut rng) {
        Ok(None) => {}
        Ok(Some(out)) => return out,
        Err(msg) => return reject(Stage::Randomized4, msg),
    }

    // stage 4, exact
    let base = evolution::base_terms(&ctx.derivatives, &qd.ratio);
    let result = evolution::assemble(&ctx.derivatives, &qd, &base);
    let nonpositive = |c: &SignCertificate| {
        matches!(
            c.verdict,
            SignVerdict::NonpositiveOnQuadrant | SignVerdict::ZeroIdentically
        )
    };
    let cw_certificate = match positivity::quadrant_sign(&result.cw) {
        Ok(c) => c,
        Err(e) => return reject(Stage::Exact4, format!("degenerate: {e}")),
    };
    if !nonpositive(&cw_certificate) {
        return Outcome::Rejected {
            stage: Stage::Exact4,
            reason: "C_w is not nonpositive on the quadrant".into(),
            witness: cw_certificate.witness,
        };
    }
    let g1_certificate = match positivity::quadrant_sign(&result.g1) {
        Ok(c) => c,
        Err(e) => return reject(Stage::Exact4, format!("degenerate: {e}")),
    };
    if !nonpositive(&g1_certificate) {
        return Outcome::Rejected {
            stage: Stage::Exact4,
            reason: "G1 is not nonpositive on the quadrant".into(),
            witness: g1_certificate.witness,
        };
    }
    Outcome::Verified {
        result: Box::new(result),
        cw_certificate,
        g1_certificate,
    }
}

/// Stage 3. The derivative of `w(1, x)` must be nonpositive on `(0, 1)`
/// and nonnegative on `(1, oo)`, with zeros allowed only at isolated
/// points (in particular at `x = 1`). The verdict needs no witnesses, so
/// the analyzer is built once and queried on both intervals.
fn slice_condition(w: &RationalFn) -> Option<Outcome> {
    let num = w.num().dehomogenize_second();
    let den = w.den().dehomogenize_second();
    // derivative numerator of num/den; den^2 > 0 by stage 1a
    let d = num.derivative().mul(&den).sub(&num.mul(&den.derivative()));
    if d.is_zero() {
        return Some(reject(Stage::SliceMonotone3, "slice w(1, x) is constant"));
    }
    let analyzer = positivity::SignAnalyzer::new(&d);
    let one = BigRational::one();
    match analyzer.quick_sign(&BigRational::zero(), &UpperBound::At(one.clone())) {
        QuickSign::NonPositive | QuickSign::Zero => {}
        _ => {
            return Some(reject(
                Stage::SliceMonotone3,
                "w(1, x) is not decreasing on (0, 1)",
            ))
        }
    }
    match analyzer.quick_sign(&one, &UpperBound::Infinity) {
        QuickSign::NonNegative | QuickSign::Zero => None,
        _ => Some(reject(
            Stage::SliceMonotone3,
            "w(1, x) is not increasing on (1, oo)",
        )),
    }
}

/// Pointwise evaluation of the evolution coefficients at random rational
/// points. Returns a rejection outcome on the first sign violation.
fn randomized_stage(
    ctx: &VelocityContext,
    qd: &QuantityDerivatives,
    space: &SearchSpace,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Outcome>, String> {
    let fd = &ctx.derivatives;
    let mut retries = 8 * space.n_samples as usize + 64;
    for _ in 0..space.n_samples {
        // sample a point where every piece is defined
        let (x, y, vals) = loop {
            let x = random_coordinate(rng, space.lambda_max);
            let y = random_coordinate(rng, space.lambda_max);
            if let Some(v) = eval_coefficients(fd, qd, &x, &y) {
                break (x, y, v);
            }
            if retries == 0 {
                return Err("sampling kept hitting singular points".into());
            }
            retries -= 1;
        };
        let (cw, g1) = vals;
        if cw.is_positive() {
            return Ok(Some(Outcome::Rejected {
                stage: Stage::Randomized4,
                reason: "C_w positive at a sample point".into(),
                witness: Some((x, y)),
            }));
        }
        if g1.is_positive() {
            return Ok(Some(Outcome::Rejected {
                stage: Stage::Randomized4,
                reason: "G1 positive at a sample point".into(),
                witness: Some((x, y)),
            }));
        }
    }
    Ok(None)
}

fn random_coordinate(rng: &mut ChaCha8Rng, lambda_max: u32) -> BigRational {
    let den = rng.random_range(1..=16u64);
    let num = rng.random_range(1..=(lambda_max as u64) * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Evaluate `(C_w, G_1)` at a point from the precomputed derivative data,
/// without symbolic assembly. `None` when any denominator vanishes or the
/// sampled point lies on the diagonal.
fn eval_coefficients(
    fd: &VelocityDerivatives,
    qd: &QuantityDerivatives,
    x: &BigRational,
    y: &BigRational,
) -> Option<(BigRational, BigRational)> {
    if x == y {
        // the critical ratio may be singular on the diagonal; resample
        return None;
    }
    let f = fd.f.evaluate(x, y)?;
    let f1 = fd.f1.evaluate(x, y)?;
    let f2 = fd.f2.evaluate(x, y)?;
    let f11 = fd.f11.evaluate(x, y)?;
    let f12 = fd.f12.evaluate(x, y)?;
    let f22 = fd.f22.evaluate(x, y)?;
    let dq = fd.dq.evaluate(x, y)?;
    let a1 = qd.ratio.a1.evaluate(x, y)?;
    let wh = qd.wh.evaluate(x, y)?;
    let wa = qd.wa.evaluate(x, y)?;
    let whh = qd.whh.evaluate(x, y)?;
    let wha = qd.wha.evaluate(x, y)?;
    let waa = qd.waa.evaluate(x, y)?;

    let two = BigRational::from(BigInt::from(2));
    let four = BigRational::from(BigInt::from(4));
    let h = x + y;
    let asq = x * x + y * y;
    let b3 = x * x * x + y * y * y;
    let a1sq = &a1 * &a1;

    let radial = &f1 * x * x + &f2 * y * y;
    let defect = &f - &f1 * x - &f2 * y;
    let hessian = &f11 + &two * &f12 * &a1 + &f22 * &a1sq;

    let c_h = &radial * &h + &defect * &asq;
    let g_h = &hessian + &two * &dq * &a1sq;
    let c_a2 = &two * &radial * &asq + &two * &defect * &b3;
    let g_a2 = -(&two * (&f1 * (BigRational::one() + &a1sq) + &two * &f2 * &a1sq))
        + &two * &hessian * x
        + &four * &dq * &a1sq * y;

    let cw = &wh * &c_h + &wa * &c_a2;
    let u = BigRational::one() + &a1;
    let v = x + &a1 * y;
    let g1 = &wh * &g_h + &wa * &g_a2
        - &whh * &f1 * &u * &u
        - &four * &waa * &f1 * &v * &v
        - &four * &wha * &f1 * &u * &v;
    Some((cw, g1))
}

// ----- search ---------------------------------------------------------------

/// Stage-by-stage rejection counts plus the verified total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchSummary {
    pub candidates: usize,
    pub rejected_1a: usize,
    pub rejected_1b: usize,
    pub rejected_2: usize,
    pub rejected_3: usize,
    pub rejected_randomized: usize,
    pub rejected_exact: usize,
    pub verified: usize,
}

impl SearchSummary {
    fn record(&mut self, report: &CandidateReport) {
        self.candidates += 1;
        match &report.outcome {
            Outcome::Verified { .. } => self.verified += 1,
            Outcome::Rejected { stage, .. } => match stage {
                Stage::Positivity1a => self.rejected_1a += 1,
                Stage::Diagonal1b => self.rejected_1b += 1,
                Stage::Degree2 => self.rejected_2 += 1,
                Stage::SliceMonotone3 => self.rejected_3 += 1,
                Stage::Randomized4 => self.rejected_randomized += 1,
                Stage::Exact4 => self.rejected_exact += 1,
            },
        }
    }
}

impl std::fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "candidates: {}", self.candidates)?;
        writeln!(f, "rejected at stage 1a: {}", self.rejected_1a)?;
        writeln!(f, "rejected at stage 1b: {}", self.rejected_1b)?;
        writeln!(f, "rejected at stage 2: {}", self.rejected_2)?;
        writeln!(f, "rejected at stage 3: {}", self.rejected_3)?;
        writeln!(
            f,
            "rejected at stage 4 (randomized): {}",
            self.rejected_randomized
        )?;
        writeln!(f, "rejected at stage 4 (exact): {}", self.rejected_exact)?;
        write!(f, "verified: {}", self.verified)
    }
}

/// Filter every enumerated candidate, in parallel, returning the reports
/// in enumeration order. Outcomes are independent of the worker count: the
/// only randomness is split per candidate index.
pub fn search(
    space: &SearchSpace,
) -> Result<(Vec<CandidateReport>, SearchSummary), evolution::EngineError> {
    let ctx = VelocityContext::new(&space.velocity)?;
    let candidates = enumerate_candidates(space);
    let reports: Vec<CandidateReport> = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, w)| filter_candidate(&ctx, w, space, idx as u64))
        .collect();
    let mut summary = SearchSummary::default();
    for r in &reports {
        summary.record(r);
    }
    Ok((reports, summary))
}

/// Serialize reports as JSON lines in enumeration order.
pub fn reports_to_jsonl(reports: &[CandidateReport], velocity: &RationalFn) -> String {
    let mut out = String::new();
    for r in reports {
        let record = r.to_record(velocity);
        out.push_str(&serde_json::to_string(&record).expect("report serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn lam(src: &str) -> RationalFn {
        parse(src, Basis::Lambda).unwrap()
    }

    fn space(velocity: &str) -> SearchSpace {
        SearchSpace::new(lam(velocity))
    }

    #[test]
    fn symmetric_basis_sizes() {
        assert_eq!(symmetric_basis(0).len(), 1);
        assert_eq!(symmetric_basis(1).len(), 1);
        assert_eq!(symmetric_basis(4).len(), 3);
        assert_eq!(symmetric_basis(6).len(), 4);
    }

    #[test]
    fn coefficient_vectors_are_primitive_rays() {
        let vs = coefficient_vectors(2, 0, 4);
        assert!(vs.contains(&vec![1, 0]));
        assert!(vs.contains(&vec![1, 2]));
        assert!(!vs.contains(&vec![2, 4]));
        assert!(!vs.contains(&vec![0, 0]));
        // mixed-sign ranges keep one representative per ray
        let vs = coefficient_vectors(1, -2, 2);
        assert_eq!(vs, vec![vec![1]]);
    }

    #[test]
    fn enumeration_contains_published_quantities() {
        let mut sp = space("-1/(l1*l2)");
        sp.max_degree = 6;
        sp.coeff_max = 1;
        let cands = enumerate_candidates(&sp);
        let target = lam("(l1-l2)^2/(l1^2*l2^2)");
        assert!(cands.contains(&target));
        let mut sp = space("-1/(l1*l2)");
        sp.max_degree = 4;
        sp.coeff_max = 1;
        let cands = enumerate_candidates(&sp);
        let target = lam("(l1-l2)^2/((l1+l2)*l1*l2)");
        assert!(cands.contains(&target));
    }

    #[test]
    fn degree_two_space_is_empty() {
        let mut sp = space("-1/(l1*l2)");
        sp.max_degree = 2;
        assert!(enumerate_candidates(&sp).is_empty());
    }

    #[test]
    fn filter_rejects_early_stages() {
        let sp = space("-1/(l1*l2)");
        let ctx = VelocityContext::new(&sp.velocity).unwrap();
        // equal degrees: stage 2
        let w = lam("(l1-l2)^2/(l1*l2)");
        let rep = filter_candidate(&ctx, &w, &sp, 0);
        match rep.outcome {
            Outcome::Rejected { stage, .. } => assert_eq!(stage, Stage::Degree2),
            _ => panic!("expected stage-2 rejection"),
        }
        // no diagonal zero: stage 1b
        let w = lam("l1*l2/(l1+l2)^2");
        let rep = filter_candidate(&ctx, &w, &sp, 0);
        match rep.outcome {
            Outcome::Rejected { stage, .. } => assert_eq!(stage, Stage::Diagonal1b),
            _ => panic!("expected stage-1b rejection"),
        }
        // sign-indefinite numerator: stage 1a
        let w = lam("(l1^2-3*l1*l2+l2^2)/(l1^2*l2^2)");
        let rep = filter_candidate(&ctx, &w, &sp, 0);
        match rep.outcome {
            Outcome::Rejected { stage, .. } => assert_eq!(stage, Stage::Positivity1a),
            _ => panic!("expected stage-1a rejection"),
        }
    }

    #[test]
    fn filter_verifies_published_pair() {
        let sp = space("-1/(l1*l2)");
        let ctx = VelocityContext::new(&sp.velocity).unwrap();
        let w = lam("(l1-l2)^2/(4*l1^2*l2^2)");
        let rep = filter_candidate(&ctx, &w, &sp, 0);
        match rep.outcome {
            Outcome::Verified {
                result,
                cw_certificate,
                g1_certificate,
            } => {
                assert_eq!(result.cw, lam("-(l1+l2)*(l1-l2)^2/(2*l1^3*l2^3)"));
                assert_eq!(cw_certificate.verdict, SignVerdict::NonpositiveOnQuadrant);
                assert_eq!(g1_certificate.verdict, SignVerdict::NonpositiveOnQuadrant);
            }
            Outcome::Rejected { stage, reason, .. } => {
                panic!("expected verification, rejected at {stage:?}: {reason}")
            }
        }
    }

    #[test]
    fn scaling_invariance_of_outcomes() {
        let sp = space("-1/(l1*l2)");
        let ctx = VelocityContext::new(&sp.velocity).unwrap();
        let w = lam("(l1-l2)^2/(4*l1^2*l2^2)");
        let scaled = w.scale(&BigRational::new(BigInt::from(7), BigInt::from(3)));
        let a = filter_candidate(&ctx, &w, &sp, 0);
        let b = filter_candidate(&ctx, &scaled, &sp, 0);
        assert_eq!(a.is_verified(), b.is_verified());
    }
}
