//! Branch curves of the potential and the cross-branch damping comparison.
//!
//! With G the antiderivative of g, every positive level c of G has one
//! preimage x1(c) <= 0 and one x2(c) >= 0 once x*g(x) > 0 holds. Condition
//! (iv) asks F(x1(c)) = F(x2(c)) for all c > 0, F the antiderivative of f.
//! Exact shortcuts (parity, F a polynomial in G) decide it outright; otherwise
//! sampled levels are compared in floats and every claimed violation must be
//! re-proved in rational interval arithmetic before it counts.

use crate::criteria::{self, LienardSystem, ToleranceOptions};
use crate::poly::{
    eval_poly_interval, horner_f64, rat, ratio, Polynomial, RatInterval, Rational,
};
use num_traits::{Pow, Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum BranchError {
    #[error("x*g(x) > 0 for x != 0 fails, so the branch curves are not globally defined")]
    ConditionOneFails,
    #[error("could not bracket G = {level} on the {side} branch")]
    InversionBracket { side: &'static str, level: f64 },
    #[error("branch inversion stalled at G = {level} on the {side} branch")]
    InversionDiverged { side: &'static str, level: f64 },
    #[error("sign of F(x1)-F(x2) flips between levels {c1} and {c2} near the sampling horizon")]
    SignOscillation { c1: f64, c2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Neg,
    Pos,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Neg => -1.0,
            Side::Pos => 1.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Side::Neg => "negative",
            Side::Pos => "positive",
        }
    }
}

/// One matched pair of branch points at a common G-level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub w: f64,
    pub x1: f64,
    pub x2: f64,
    /// F(x1).
    pub f1: f64,
    /// F(x2).
    pub f2: f64,
    /// The shared G-level, w^(r+1)/(r+1).
    pub level: f64,
}

/// Precomputed data for branch work on one system.
#[derive(Clone, Debug)]
pub struct BranchContext {
    sys: LienardSystem,
    g_int: Polynomial,
    f_int: Polynomial,
    r: usize,
    x_max: f64,
    c_max: f64,
    w_max: f64,
    g_c: Vec<f64>,
    gint_c: Vec<f64>,
    fint_c: Vec<f64>,
}

impl BranchContext {
    /// Checks x*g(x) > 0 for x != 0 before building.
    pub fn new(sys: LienardSystem) -> Result<Self, BranchError> {
        if !criteria::check_condition_i(&sys).verdict {
            return Err(BranchError::ConditionOneFails);
        }
        Ok(Self::new_unchecked(sys))
    }

    /// Caller asserts the sign condition; inversion outside the monotone
    /// region then degrades to a best-effort search.
    pub fn new_unchecked(sys: LienardSystem) -> Self {
        let g_int = sys.g().antiderivative();
        let f_int = sys.f().antiderivative();
        let r = sys.r();
        let x_max = 10.0
            * sys
                .g()
                .cauchy_bound()
                .expect("g is nonzero by construction")
                .to_f64()
                .unwrap_or(f64::MAX);
        let g_c = sys.g().to_f64_coeffs();
        let gint_c = g_int.to_f64_coeffs();
        let fint_c = f_int.to_f64_coeffs();
        let c_max = horner_f64(&gint_c, -x_max).max(horner_f64(&gint_c, x_max));
        let w_max = ((r as f64 + 1.0) * c_max).powf(1.0 / (r as f64 + 1.0));
        BranchContext { sys, g_int, f_int, r, x_max, c_max, w_max, g_c, gint_c, fint_c }
    }

    pub fn sys(&self) -> &LienardSystem {
        &self.sys
    }

    pub fn g_integral(&self) -> &Polynomial {
        &self.g_int
    }

    pub fn f_integral(&self) -> &Polynomial {
        &self.f_int
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// w(x) = ((r+1) G(x))^(1/(r+1)) >= 0; both branches share the w axis.
    pub fn w_of_x(&self, x: f64) -> f64 {
        let v = (self.r as f64 + 1.0) * horner_f64(&self.gint_c, x);
        v.max(0.0).powf(1.0 / (self.r as f64 + 1.0))
    }

    pub fn w_to_level(&self, w: f64) -> f64 {
        w.powi(self.r as i32 + 1) / (self.r as f64 + 1.0)
    }

    fn g_at(&self, x: f64) -> f64 {
        horner_f64(&self.g_c, x)
    }

    fn big_g(&self, x: f64) -> f64 {
        horner_f64(&self.gint_c, x)
    }

    fn big_f(&self, x: f64) -> f64 {
        horner_f64(&self.fint_c, x)
    }

    /// Both branch inverses and their F values at the level w^(r+1)/(r+1).
    pub fn branch_point(&self, w: f64) -> Result<BranchPoint, BranchError> {
        let level = self.w_to_level(w);
        let x1 = invert_branch(self, level, Side::Neg)?;
        let x2 = invert_branch(self, level, Side::Pos)?;
        Ok(BranchPoint { w, x1, x2, f1: self.big_f(x1), f2: self.big_f(x2), level })
    }
}

/// Where G(s*t) stops increasing in t: the first sign change of the inward
/// derivative beyond the bracketing failure. Only reachable when the sign
/// condition on g fails.
fn monotone_edge(ctx: &BranchContext, side: Side, lo0: f64, hi0: f64) -> Option<f64> {
    let s = side.sign();
    let q = |t: f64| s * ctx.g_at(s * t);
    let mut lo = lo0;
    let mut steps = 0;
    while q(lo) <= 0.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 200 {
            return None;
        }
    }
    let mut hi = hi0;
    if q(hi) >= 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Solve G(x) = level on one side of the origin. Bracketing doubles outward
/// from the coefficient bound; the root is polished by safeguarded Newton to
/// |G(x) - level| <= 1e-14 (1 + level).
pub fn invert_branch(ctx: &BranchContext, level: f64, side: Side) -> Result<f64, BranchError> {
    assert!(level >= 0.0 && level.is_finite(), "level must be a finite nonnegative number");
    if level == 0.0 {
        return Ok(0.0);
    }
    let s = side.sign();

    // Bracket [0, hi] in magnitude with G(s*hi) >= level.
    let mut hi = (ctx.x_max / 10.0).max(1.0);
    let mut prev = ctx.big_g(s * hi);
    if prev < level {
        let mut bracketed = false;
        for _ in 0..1100 {
            let hi2 = hi * 2.0;
            let cur = ctx.big_g(s * hi2);
            if cur >= level {
                hi = hi2;
                bracketed = true;
                break;
            }
            if cur <= prev {
                // G stopped growing: restrict to the monotone prefix.
                let edge = monotone_edge(ctx, side, hi, hi2)
                    .ok_or(BranchError::InversionBracket { side: side.name(), level })?;
                let ge = ctx.big_g(s * edge);
                if (ge - level).abs() <= 1e-12 * (1.0 + level.abs()) {
                    return Ok(s * edge);
                }
                if ge > level {
                    hi = edge;
                    bracketed = true;
                    break;
                }
                return Err(BranchError::InversionBracket { side: side.name(), level });
            }
            prev = cur;
            hi = hi2;
            if hi > 1e300 {
                return Err(BranchError::InversionBracket { side: side.name(), level });
            }
        }
        if !bracketed {
            return Err(BranchError::InversionBracket { side: side.name(), level });
        }
    }

    // Safeguarded Newton on R(t) = G(s*t) - level over t in [0, hi].
    let mut lo = 0.0_f64;
    let mut hi_t = hi;
    let mut t = 0.5 * (lo + hi_t);
    let tol = 1e-15 * (1.0 + level.abs());
    for _ in 0..300 {
        let r = ctx.big_g(s * t) - level;
        if r.abs() <= tol {
            return Ok(s * t);
        }
        if r > 0.0 {
            hi_t = t;
        } else {
            lo = t;
        }
        let d = s * ctx.g_at(s * t);
        let tn = t - r / d;
        t = if d.is_finite() && d != 0.0 && tn > lo && tn < hi_t { tn } else { 0.5 * (lo + hi_t) };
    }
    let r = ctx.big_g(s * t) - level;
    if r.abs() <= 1e-14 * (1.0 + level.abs()) {
        Ok(s * t)
    } else {
        Err(BranchError::InversionDiverged { side: side.name(), level })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvStatus {
    HoldsExact,
    HoldsNumeric,
    Fails,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IvResult {
    pub status: IvStatus,
    pub counterexample: Option<BranchPoint>,
    pub samples_used: usize,
}

fn odd_part(p: &Polynomial) -> Polynomial {
    Polynomial::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { c.clone() } else { Rational::zero() })
            .collect(),
    )
}

/// Greedy top-down test for F = sum_j c_j G^j with rational c_j and j >= 1.
fn f_in_g_span(f_int: &Polynomial, g_int: &Polynomial) -> bool {
    let dg = match g_int.degree() {
        Some(d) if d > 0 => d,
        _ => return false,
    };
    let lead_g = g_int.leading_coeff().unwrap().clone();
    let mut h = f_int.clone();
    while !h.is_zero() {
        let dh = h.degree().unwrap();
        if dh == 0 || dh % dg != 0 {
            return false;
        }
        let j = dh / dg;
        let cj = h.leading_coeff().unwrap() / lead_g.clone().pow(j as i32);
        h = &h - &g_int.pow(j as u32).scale(&cj);
    }
    true
}

/// Exact bracket [lo, hi] (signed, lo <= hi) containing the branch inverse of
/// the rational level. Requires G monotone outward, i.e. the sign condition.
fn exact_bracket(g_int: &Polynomial, level: &Rational, side: Side) -> Option<(Rational, Rational)> {
    let mut u = rat(1);
    let mut found = false;
    for _ in 0..1100 {
        let probe = match side {
            Side::Neg => -u.clone(),
            Side::Pos => u.clone(),
        };
        if g_int.eval(&probe) >= *level {
            found = true;
            break;
        }
        u = u * rat(2);
    }
    if !found {
        return None;
    }
    match side {
        Side::Neg => Some((-u, Rational::zero())),
        Side::Pos => Some((Rational::zero(), u)),
    }
}

fn bisect_exact(
    g_int: &Polynomial,
    level: &Rational,
    side: Side,
    bracket: &mut (Rational, Rational),
    iters: usize,
) {
    for _ in 0..iters {
        let mid = (&bracket.0 + &bracket.1) / rat(2);
        let above = g_int.eval(&mid) >= *level;
        match side {
            // G decreases toward 0 from the left endpoint.
            Side::Neg => {
                if above {
                    bracket.0 = mid;
                } else {
                    bracket.1 = mid;
                }
            }
            Side::Pos => {
                if above {
                    bracket.1 = mid;
                } else {
                    bracket.0 = mid;
                }
            }
        }
    }
}

/// Re-prove a sampled violation in exact arithmetic: both branch inverses are
/// enclosed in rational intervals and the F images must be disjoint.
fn certify_violation(ctx: &BranchContext, level_f: f64) -> Option<BranchPoint> {
    let level = Rational::from_float(level_f)?;
    if !level.is_positive() {
        return None;
    }
    let g_int = ctx.g_integral();
    let f_int = ctx.f_integral();
    let mut b1 = exact_bracket(g_int, &level, Side::Neg)?;
    let mut b2 = exact_bracket(g_int, &level, Side::Pos)?;
    for round in 0..4 {
        let iters = if round == 0 { 60 } else { 40 };
        bisect_exact(g_int, &level, Side::Neg, &mut b1, iters);
        bisect_exact(g_int, &level, Side::Pos, &mut b2, iters);
        let i1 = RatInterval::new(b1.0.clone(), b1.1.clone());
        let i2 = RatInterval::new(b2.0.clone(), b2.1.clone());
        let f1 = eval_poly_interval(f_int, &i1);
        let f2 = eval_poly_interval(f_int, &i2);
        if f1.disjoint(&f2) {
            let x1 = i1.midpoint().to_f64().unwrap();
            let x2 = i2.midpoint().to_f64().unwrap();
            let w = ((ctx.r as f64 + 1.0) * level_f).powf(1.0 / (ctx.r as f64 + 1.0));
            return Some(BranchPoint {
                w,
                x1,
                x2,
                f1: ctx.big_f(x1),
                f2: ctx.big_f(x2),
                level: level_f,
            });
        }
    }
    None
}

fn log_spaced_levels(c_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let span = 1e16_f64;
    (1..=n)
        .map(|k| c_max * span.powf(-((n - k) as f64) / (n as f64 - 1.0)))
        .collect()
}

/// Decide F(x1(c)) = F(x2(c)) for all c > 0. Exact on the parity and
/// polynomial-in-G shortcuts; otherwise sampled, with violations accepted only
/// after rational-interval certification.
pub fn check_condition_iv(ctx: &BranchContext, opts: &ToleranceOptions) -> IvResult {
    let sys = ctx.sys();
    // g odd makes the branches mirror images, so (iv) is exactly the oddness
    // of f.
    if sys.g().is_odd_function() {
        if sys.f().is_odd_function() {
            return IvResult { status: IvStatus::HoldsExact, counterexample: None, samples_used: 0 };
        }
        let fo = odd_part(ctx.f_integral());
        debug_assert!(!fo.is_zero());
        let mut x2 = rat(1);
        let mut k = 1i64;
        while fo.eval(&x2).is_zero() {
            k += 1;
            x2 = if k % 2 == 0 { rat(k / 2 + 1) } else { ratio(1, k / 2 + 1) };
        }
        let x2f = x2.to_f64().unwrap();
        let level = ctx.big_g(x2f);
        return IvResult {
            status: IvStatus::Fails,
            counterexample: Some(BranchPoint {
                w: ctx.w_of_x(x2f),
                x1: -x2f,
                x2: x2f,
                f1: ctx.big_f(-x2f),
                f2: ctx.big_f(x2f),
                level,
            }),
            samples_used: 0,
        };
    }
    if f_in_g_span(ctx.f_integral(), ctx.g_integral()) {
        return IvResult { status: IvStatus::HoldsExact, counterexample: None, samples_used: 0 };
    }

    let levels = log_spaced_levels(ctx.c_max(), opts.samples);
    let mut used = 0;
    for level in levels {
        used += 1;
        let x1 = invert_branch(ctx, level, Side::Neg)
            .expect("branch inversion cannot fail while x*g(x) > 0 holds");
        let x2 = invert_branch(ctx, level, Side::Pos)
            .expect("branch inversion cannot fail while x*g(x) > 0 holds");
        let f1 = ctx.big_f(x1);
        let f2 = ctx.big_f(x2);
        if (f1 - f2).abs() > opts.tol_rel * (1.0 + f1.abs().max(f2.abs())) {
            if let Some(bp) = certify_violation(ctx, level) {
                return IvResult {
                    status: IvStatus::Fails,
                    counterexample: Some(bp),
                    samples_used: used,
                };
            }
            // Not separable in exact arithmetic: treated as a float artifact.
        }
    }
    IvResult { status: IvStatus::HoldsNumeric, counterexample: None, samples_used: used }
}

/// Exact asymptotic sign of F(x1) - F(x2) at a rational level: -1, 0, +1,
/// with 0 meaning the exact intervals would not separate.
fn exact_sign_at(ctx: &BranchContext, level_f: f64) -> i8 {
    let level = match Rational::from_float(level_f) {
        Some(l) if l.is_positive() => l,
        _ => return 0,
    };
    let g_int = ctx.g_integral();
    let f_int = ctx.f_integral();
    let (Some(mut b1), Some(mut b2)) =
        (exact_bracket(g_int, &level, Side::Neg), exact_bracket(g_int, &level, Side::Pos))
    else {
        return 0;
    };
    for round in 0..4 {
        let iters = if round == 0 { 60 } else { 40 };
        bisect_exact(g_int, &level, Side::Neg, &mut b1, iters);
        bisect_exact(g_int, &level, Side::Pos, &mut b2, iters);
        let f1 = eval_poly_interval(f_int, &RatInterval::new(b1.0.clone(), b1.1.clone()));
        let f2 = eval_poly_interval(f_int, &RatInterval::new(b2.0.clone(), b2.1.clone()));
        if f1.disjoint(&f2) {
            return if f1.hi < f2.lo { -1 } else { 1 };
        }
    }
    0
}

/// Largest w where F(x1) - F(x2) changes sign over the sampled range,
/// bisected to width 1e-10, together with the asymptotic sign beyond it
/// (-1: F(x1) < F(x2), +1: the reverse, 0: not separable). The sign is
/// certified exactly at the horizon level and at ten times it; disagreement
/// is an error.
pub fn find_w_hat(
    ctx: &BranchContext,
    opts: &ToleranceOptions,
) -> Result<(f64, i8), BranchError> {
    let d_at = |level: f64| -> Result<f64, BranchError> {
        let x1 = invert_branch(ctx, level, Side::Neg)?;
        let x2 = invert_branch(ctx, level, Side::Pos)?;
        Ok(ctx.big_f(x1) - ctx.big_f(x2))
    };
    let levels = log_spaced_levels(ctx.c_max(), opts.samples);
    let mut samples = Vec::with_capacity(levels.len());
    for level in &levels {
        let d = d_at(*level)?;
        let w = ((ctx.r as f64 + 1.0) * level).powf(1.0 / (ctx.r as f64 + 1.0));
        samples.push((w, d));
    }
    let sgn = |d: f64| {
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut w_hat = 0.0;
    for k in (0..samples.len() - 1).rev() {
        let (w_lo, d_lo) = samples[k];
        let (w_hi, d_hi) = samples[k + 1];
        if sgn(d_lo) * sgn(d_hi) < 0 {
            let (mut lo, mut hi) = (w_lo, w_hi);
            let s_lo = sgn(d_lo);
            for _ in 0..200 {
                if hi - lo <= 1e-10 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let d = d_at(ctx.w_to_level(mid))?;
                if sgn(d) == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            w_hat = 0.5 * (lo + hi);
            break;
        }
    }
    let s1 = exact_sign_at(ctx, ctx.c_max());
    let s2 = exact_sign_at(ctx, 10.0 * ctx.c_max());
    if s1 * s2 < 0 {
        return Err(BranchError::SignOscillation { c1: ctx.c_max(), c2: 10.0 * ctx.c_max() });
    }
    let s = if s1 != 0 { s1 } else { s2 };
    Ok((w_hat, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundedness {
    AllBounded,
    PositivelyBounded,
    NegativelyBounded,
}

impl Boundedness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Boundedness::AllBounded => "all-bounded",
            Boundedness::PositivelyBounded => "positively-bounded",
            Boundedness::NegativelyBounded => "negatively-bounded",
        }
    }
}

/// Which semiorbits stay bounded: all of them when (iv) holds, otherwise the
/// side named by the asymptotic sign of F(x1) - F(x2).
pub fn boundedness_direction(ctx: &BranchContext) -> Result<Boundedness, BranchError> {
    let iv = check_condition_iv(ctx, &ToleranceOptions::default());
    match iv.status {
        IvStatus::HoldsExact | IvStatus::HoldsNumeric => Ok(Boundedness::AllBounded),
        IvStatus::Fails => {
            let (_, s) = find_w_hat(ctx, &ToleranceOptions::default())?;
            Ok(match s {
                -1 => Boundedness::PositivelyBounded,
                1 => Boundedness::NegativelyBounded,
                _ => Boundedness::AllBounded,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn sys(f: &str, g: &str) -> LienardSystem {
        LienardSystem::new(parse_polynomial(f).unwrap(), parse_polynomial(g).unwrap()).unwrap()
    }

    fn ctx(f: &str, g: &str) -> BranchContext {
        BranchContext::new(sys(f, g)).unwrap()
    }

    #[test]
    fn w_of_x_is_abs_for_simple_potentials() {
        let c = ctx("x", "x");
        assert!((c.w_of_x(2.0) - 2.0).abs() < 1e-14);
        assert!((c.w_of_x(-3.0) - 3.0).abs() < 1e-14);
        let c = ctx("2x", "x^3");
        assert!((c.w_of_x(2.0) - 2.0).abs() < 1e-14);
        assert!((c.w_of_x(-0.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn invert_branch_examples() {
        let c = ctx("x", "x");
        assert!((invert_branch(&c, 0.5, Side::Pos).unwrap() - 1.0).abs() < 1e-12);
        assert!((invert_branch(&c, 0.5, Side::Neg).unwrap() + 1.0).abs() < 1e-12);
        let c = ctx("2x", "x^3");
        assert!((invert_branch(&c, 0.25, Side::Pos).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invert_branch_at_monotone_edge() {
        // g = x + x^2 breaks the sign condition at x = -1, where G peaks at
        // 1/6 on the negative side. The level G(-1) is still invertible.
        let c = BranchContext::new_unchecked(sys("x", "x + x^2"));
        let x = invert_branch(&c, 1.0 / 6.0, Side::Neg).unwrap();
        assert!((x + 1.0).abs() < 1e-5, "x = {x}");
    }

    #[test]
    fn branch_point_at_zero_and_roundtrip() {
        let c = ctx("x", "x + x^3 + x^5");
        let bp = c.branch_point(0.0).unwrap();
        assert_eq!((bp.w, bp.x1, bp.x2, bp.f1, bp.f2), (0.0, 0.0, 0.0, 0.0, 0.0));

        let w = c.w_of_x(1.3);
        let bp = c.branch_point(w).unwrap();
        assert!((bp.x2 - 1.3).abs() < 1e-12);
        assert!((bp.x1 + 1.3).abs() < 1e-12);
        assert!((bp.f1 - bp.f2).abs() < 1e-12);
    }

    #[test]
    fn iv_parity_shortcut() {
        let c = ctx("x", "x + x^5");
        let iv = check_condition_iv(&c, &ToleranceOptions::default());
        assert_eq!(iv.status, IvStatus::HoldsExact);
        assert_eq!(iv.samples_used, 0);

        let c = ctx("x^2", "x + x^5");
        let iv = check_condition_iv(&c, &ToleranceOptions::default());
        assert_eq!(iv.status, IvStatus::Fails);
        assert_eq!(iv.samples_used, 0);
        let bp = iv.counterexample.unwrap();
        assert!((bp.x1 + bp.x2).abs() < 1e-15);
        assert!(bp.f1 < bp.f2);
    }

    #[test]
    fn iv_functional_shortcut() {
        // f = g (2 + 6G) makes F = 2G + 3G^2 exactly; g is not odd.
        let g = parse_polynomial("x + x^2 + x^3").unwrap();
        let big_g = g.antiderivative();
        let two_plus_6g = &Polynomial::from_i64(&[2]) + &big_g.scale(&rat(6));
        let f = &g * &two_plus_6g;
        let c = BranchContext::new(LienardSystem::new(f, g).unwrap()).unwrap();
        let iv = check_condition_iv(&c, &ToleranceOptions::default());
        assert_eq!(iv.status, IvStatus::HoldsExact);
        assert_eq!(iv.samples_used, 0);
    }

    #[test]
    fn iv_certified_failure() {
        let c = ctx("x + x^2", "x + x^2 + x^3");
        let opts = ToleranceOptions::default();
        let iv = check_condition_iv(&c, &opts);
        assert_eq!(iv.status, IvStatus::Fails);
        assert!(iv.samples_used > 0 && iv.samples_used < opts.samples);
        let bp = iv.counterexample.unwrap();
        // The certificate really does sit on a common level with split F.
        assert!((c.big_g(bp.x1) - c.big_g(bp.x2)).abs() < 1e-9 * (1.0 + bp.level));
        assert!((bp.f1 - bp.f2).abs() > opts.tol_rel);
    }

    #[test]
    fn iv_numeric_pass_below_resolution() {
        // F deviates from G by 1e-30 * (x G)' terms: real but invisible at the
        // sampling tolerance, and not certifiable as a violation there either.
        let g = parse_polynomial("x + x^2 + x^3").unwrap();
        let big_g = g.antiderivative();
        let x = Polynomial::monomial(rat(1), 1);
        let delta = ratio(1, 1_000_000_000_000_000i64) * ratio(1, 1_000_000_000_000_000i64);
        let dev = &big_g + &(&x * &g);
        let f = &g + &dev.scale(&delta);
        let c = BranchContext::new(LienardSystem::new(f, g).unwrap()).unwrap();
        let iv = check_condition_iv(&c, &ToleranceOptions::default());
        assert_eq!(iv.status, IvStatus::HoldsNumeric);
        assert_eq!(iv.samples_used, ToleranceOptions::default().samples);
    }

    #[test]
    fn w_hat_zero_with_constant_sign() {
        let c = ctx("x^2", "x + x^5");
        let (w_hat, s) = find_w_hat(&c, &ToleranceOptions::default()).unwrap();
        assert_eq!(w_hat, 0.0);
        assert_eq!(s, -1);
    }

    #[test]
    fn w_hat_finds_the_turning_point() {
        // f = x^4 - x^2 has F odd with a sign change at x = sqrt(5/3), so the
        // mirror-branch difference flips sign exactly once.
        let c = ctx("x^4 - x^2", "x + x^5");
        let (w_hat, s) = find_w_hat(&c, &ToleranceOptions::default()).unwrap();
        let x_hat = (5.0_f64 / 3.0).sqrt();
        let expected = c.w_of_x(x_hat);
        assert!((w_hat - expected).abs() < 1e-7, "w_hat = {w_hat}, expected {expected}");
        assert_eq!(s, -1);
    }

    #[test]
    fn boundedness_examples() {
        assert_eq!(boundedness_direction(&ctx("x", "x + x^5")).unwrap(), Boundedness::AllBounded);
        assert_eq!(
            boundedness_direction(&ctx("x^2", "x + x^5")).unwrap(),
            Boundedness::PositivelyBounded
        );
        assert_eq!(
            boundedness_direction(&ctx("-x^2", "x + x^5")).unwrap(),
            Boundedness::NegativelyBounded
        );
    }

    #[test]
    fn exact_bracket_encloses_the_inverse() {
        let g_int = parse_polynomial("x").unwrap().antiderivative();
        let (lo, hi) = exact_bracket(&g_int, &ratio(1, 2), Side::Pos).unwrap();
        assert!(lo <= rat(1) && rat(1) <= hi);
        let mut b = (lo, hi);
        bisect_exact(&g_int, &ratio(1, 2), Side::Pos, &mut b, 30);
        let width = &b.1 - &b.0;
        assert!(width < ratio(1, 1_000_000));
        assert!(b.0 <= rat(1) && rat(1) <= b.1);
    }
}
