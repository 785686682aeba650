//! Exact decision layer for the global-center question.
//!
//! Conditions (i), (ii)/(ii*), (iii) are decided in rational arithmetic;
//! condition (iv) is delegated to the branch machinery. The verdict keeps the
//! exact/numeric distinction visible instead of flattening it into a boolean.

use crate::branches::{self, BranchContext, BranchPoint, IvStatus};
use crate::poly::{self, rat, ratio, Polynomial, Rational, SignWitness};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("restoring force g must not be identically zero")]
    ZeroRestoringForce,
    #[error("damping f must not be identically zero (conservative systems are out of scope)")]
    ZeroDamping,
    #[error("cannot take a positive fractional power of a nonpositive value: {what}")]
    FractionalPowerDomain { what: String },
}

/// The system x' = y, y' = -g(x) - f(x) y with nonzero polynomial f and g.
#[derive(Clone, Debug, PartialEq)]
pub struct LienardSystem {
    f: Polynomial,
    g: Polynomial,
    r: usize,
    m: usize,
    s: usize,
    n: usize,
}

impl LienardSystem {
    pub fn new(f: Polynomial, g: Polynomial) -> Result<Self, CriteriaError> {
        if g.is_zero() {
            return Err(CriteriaError::ZeroRestoringForce);
        }
        if f.is_zero() {
            return Err(CriteriaError::ZeroDamping);
        }
        Ok(LienardSystem {
            r: g.lowest_power().unwrap(),
            m: g.degree().unwrap(),
            s: f.lowest_power().unwrap(),
            n: f.degree().unwrap(),
            f,
            g,
        })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    /// Lowest power of g.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Degree of g.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Lowest power of f.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Degree of f.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_r(&self) -> Rational {
        self.g.coeff(self.r)
    }

    pub fn a_m(&self) -> Rational {
        self.g.coeff(self.m)
    }

    pub fn b_s(&self) -> Rational {
        self.f.coeff(self.s)
    }

    pub fn b_n(&self) -> Rational {
        self.f.coeff(self.n)
    }
}

/// Positive rescaling (x, y, t) -> (alpha x, (alpha/gamma) y, gamma t), which
/// maps the family onto itself: a_i -> a_i alpha^(1-i) / gamma^2,
/// b_i -> b_i alpha^(-i) / gamma.
pub fn rescale_system(sys: &LienardSystem, alpha: &Rational, gamma: &Rational) -> LienardSystem {
    assert!(alpha.is_positive() && gamma.is_positive());
    let g = Polynomial::new(
        sys.g()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a * alpha.pow(1 - i as i32) / (gamma * gamma))
            .collect(),
    );
    let f = Polynomial::new(
        sys.f()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, b)| b * alpha.pow(-(i as i32)) / gamma)
            .collect(),
    );
    LienardSystem::new(f, g).expect("rescaling preserves nonzeroness")
}

/// Condition (i): x g(x) > 0 for every x != 0, decided exactly.
pub fn check_condition_i(sys: &LienardSystem) -> SignWitness {
    let xg = sys.g().mul_xk(1);
    poly::is_positive_punctured(&xg).expect("g is nonzero by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    LinearCandidate,
    NilpotentCandidate,
    NotCandidate,
}

/// Local equilibrium type at the origin, with the clause that decided it.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalType {
    pub kind: LocalKind,
    pub clause: String,
    /// b_s^2 - 2(r+1) a_r when that threshold was consulted.
    pub threshold: Option<Rational>,
}

fn linear_candidate(sys: &LienardSystem) -> bool {
    sys.r() == 1 && sys.s() >= 1 && sys.a_r().is_positive()
}

fn nilpotent_threshold(sys: &LienardSystem) -> Rational {
    let bs = sys.b_s();
    &bs * &bs - rat(2) * rat(sys.r() as i64 + 1) * sys.a_r()
}

fn nilpotent_candidate(sys: &LienardSystem) -> bool {
    let r = sys.r();
    let s = sys.s();
    let first = r % 2 == 1 && 2 < r && r < 2 * s + 1 && sys.a_r().is_positive();
    let second = r == 2 * s + 1 && r >= 3 && nilpotent_threshold(sys).is_negative();
    first || second
}

/// Condition (ii) / (ii*): linear versus nilpotent center candidate.
pub fn classify_local(sys: &LienardSystem) -> LocalType {
    let r = sys.r();
    let s = sys.s();
    if linear_candidate(sys) {
        return LocalType {
            kind: LocalKind::LinearCandidate,
            clause: format!("r=1, s={s}>=1, a_r={}>0", sys.a_r()),
            threshold: None,
        };
    }
    if nilpotent_candidate(sys) {
        if r == 2 * s + 1 {
            let t = nilpotent_threshold(sys);
            return LocalType {
                kind: LocalKind::NilpotentCandidate,
                clause: format!("r={r}=2s+1>=3, b_s^2-2(r+1)a_r={t}<0"),
                threshold: Some(t),
            };
        }
        return LocalType {
            kind: LocalKind::NilpotentCandidate,
            clause: format!("r={r} odd, 2<r<2s+1={}, a_r={}>0", 2 * s + 1, sys.a_r()),
            threshold: None,
        };
    }
    // Name the reason the nearest clause missed.
    let clause = if r == 1 {
        if sys.s() == 0 {
            format!("r=1 but s=0 (f(0)={}!=0)", sys.b_s())
        } else {
            format!("r=1, s={s}>=1 but a_r={}<=0", sys.a_r())
        }
    } else if r % 2 == 0 {
        format!("r={r} is even")
    } else if r == 2 * s + 1 {
        let t = nilpotent_threshold(sys);
        return LocalType {
            kind: LocalKind::NotCandidate,
            clause: format!("r={r}=2s+1 but b_s^2-2(r+1)a_r={t}>=0"),
            threshold: Some(t),
        };
    } else if r > 2 * s + 1 {
        format!("r={r} exceeds 2s+1={}", 2 * s + 1)
    } else {
        format!("r={r}, s={s}: a_r={}<=0", sys.a_r())
    };
    LocalType { kind: LocalKind::NotCandidate, clause, threshold: None }
}

/// Outcome of the degree/leading-coefficient condition (iii).
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionIii {
    pub pass: bool,
    /// a_m/b_n^2 when m = 2n+1, sign(a_m) otherwise.
    pub epsilon: Rational,
}

/// Condition (iii): m odd, m > 2n+1, a_m > 0; or m = 2n+1 and
/// 4(n+1) a_m / b_n^2 > 1. Exact arithmetic throughout.
pub fn check_condition_iii(sys: &LienardSystem) -> ConditionIii {
    let m = sys.m();
    let n = sys.n();
    let a_m = sys.a_m();
    // A negative b_n is first flipped by (x, y, t, b_n) -> (x, -y, -t, -b_n);
    // epsilon only sees b_n squared, so the flip is implicit here.
    let b_n = sys.b_n();
    if m == 2 * n + 1 {
        let epsilon = &a_m / (&b_n * &b_n);
        let pass = rat(4) * rat(n as i64 + 1) * &epsilon > rat(1);
        ConditionIii { pass, epsilon }
    } else {
        let epsilon = if a_m.is_positive() { rat(1) } else { rat(-1) };
        let pass = m % 2 == 1 && m > 2 * n + 1 && a_m.is_positive();
        ConditionIii { pass, epsilon }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CondStatus {
    Pass,
    Fail,
    Skipped,
    NumericPass,
}

impl CondStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CondStatus::Pass => "pass",
            CondStatus::Fail => "fail",
            CondStatus::Skipped => "skipped",
            CondStatus::NumericPass => "numeric-pass",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionEntry {
    pub status: CondStatus,
    pub witness: Option<String>,
}

impl ConditionEntry {
    fn pass() -> Self {
        ConditionEntry { status: CondStatus::Pass, witness: None }
    }

    fn fail(witness: String) -> Self {
        ConditionEntry { status: CondStatus::Fail, witness: Some(witness) }
    }

    fn skipped() -> Self {
        ConditionEntry { status: CondStatus::Skipped, witness: None }
    }

    fn to_json(&self) -> Value {
        json!({ "status": self.status.as_str(), "witness": self.witness })
    }
}

/// Per-condition outcomes. Condition (iv) is skipped whenever an earlier
/// condition fails; every failure carries a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub cond_i: ConditionEntry,
    pub cond_ii: ConditionEntry,
    pub cond_ii_star: ConditionEntry,
    pub cond_iii: ConditionEntry,
    pub epsilon: Rational,
    pub cond_iv: ConditionEntry,
    pub counterexample: Option<BranchPoint>,
    pub iv_samples_used: usize,
}

impl ConditionReport {
    pub fn to_json(&self) -> Value {
        let iv_witness = match &self.counterexample {
            Some(p) => json!({
                "w": p.w, "x1": p.x1, "x2": p.x2, "f1": p.f1, "f2": p.f2,
            }),
            None => Value::from(self.cond_iv.witness.clone()),
        };
        json!({
            "i": self.cond_i.to_json(),
            "ii": self.cond_ii.to_json(),
            "ii_star": self.cond_ii_star.to_json(),
            "iii": {
                "status": self.cond_iii.status.as_str(),
                "witness": self.cond_iii.witness,
                "epsilon": self.epsilon.to_string(),
            },
            "iv": {
                "status": self.cond_iv.status.as_str(),
                "witness": iv_witness,
                "samples_used": self.iv_samples_used,
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    GlobalCenterLinear,
    GlobalCenterNilpotent,
    NotGlobalCenter,
    NumericInconclusive,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::GlobalCenterLinear => "GlobalCenterLinear",
            VerdictKind::GlobalCenterNilpotent => "GlobalCenterNilpotent",
            VerdictKind::NotGlobalCenter => "NotGlobalCenter",
            VerdictKind::NumericInconclusive => "NumericInconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub reasons: Vec<String>,
    pub report: ConditionReport,
}

/// Budget knobs for the sampled part of condition (iv).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceOptions {
    pub samples: usize,
    pub tol_rel: f64,
}

impl Default for ToleranceOptions {
    fn default() -> Self {
        ToleranceOptions { samples: 256, tol_rel: 1e-9 }
    }
}

fn sign_witness_text(w: &SignWitness) -> String {
    match (&w.witness_x, &w.root_bracket) {
        (Some(x), _) => format!("x*g(x) <= 0 at x = {x}"),
        (None, Some((lo, hi))) => format!("x*g(x) vanishes inside ({lo}, {hi})"),
        (None, None) => "sign condition fails".to_string(),
    }
}

/// Full decision: conditions (i), local type, (iii) exactly, then (iv) via the
/// branch machinery when everything earlier passed.
pub fn decide_global_center(sys: &LienardSystem, opts: &ToleranceOptions) -> Verdict {
    let wi = check_condition_i(sys);
    let local = classify_local(sys);
    let iii = check_condition_iii(sys);

    let cond_i = if wi.verdict {
        ConditionEntry::pass()
    } else {
        ConditionEntry::fail(sign_witness_text(&wi))
    };
    let cond_ii = if linear_candidate(sys) {
        ConditionEntry::pass()
    } else if local.kind == LocalKind::NilpotentCandidate {
        ConditionEntry::fail(format!("r={} != 1", sys.r()))
    } else {
        ConditionEntry::fail(local.clause.clone())
    };
    let cond_ii_star = if nilpotent_candidate(sys) {
        ConditionEntry::pass()
    } else if local.kind == LocalKind::LinearCandidate {
        ConditionEntry::fail("r=1 < 3".to_string())
    } else {
        ConditionEntry::fail(local.clause.clone())
    };
    let cond_iii = if iii.pass {
        ConditionEntry::pass()
    } else {
        let m = sys.m();
        let n = sys.n();
        let witness = if m == 2 * n + 1 {
            format!(
                "m=2n+1={m}: 4(n+1)*a_m/b_n^2 = {} <= 1",
                rat(4) * rat(n as i64 + 1) * &iii.epsilon
            )
        } else if m % 2 == 0 {
            format!("m={m} is even")
        } else if m < 2 * n + 1 {
            format!("m={m} < 2n+1={}", 2 * n + 1)
        } else {
            format!("a_m={} <= 0", sys.a_m())
        };
        ConditionEntry::fail(witness)
    };

    let earlier_pass = wi.verdict && local.kind != LocalKind::NotCandidate && iii.pass;
    let (cond_iv, counterexample, samples_used) = if !earlier_pass {
        (ConditionEntry::skipped(), None, 0)
    } else {
        let ctx = BranchContext::new(sys.clone()).expect("condition (i) already verified");
        let iv = branches::check_condition_iv(&ctx, opts);
        let entry = match iv.status {
            IvStatus::HoldsExact => ConditionEntry::pass(),
            IvStatus::HoldsNumeric => {
                ConditionEntry { status: CondStatus::NumericPass, witness: None }
            }
            IvStatus::Fails => {
                let p = iv.counterexample.as_ref().expect("fails carries a counterexample");
                ConditionEntry::fail(format!(
                    "F(x1) != F(x2) at G-level {:.6e}: F({:.6e}) = {:.6e}, F({:.6e}) = {:.6e}",
                    p.level, p.x1, p.f1, p.x2, p.f2
                ))
            }
        };
        (entry, iv.counterexample, iv.samples_used)
    };

    let mut reasons = Vec::new();
    if !wi.verdict {
        reasons.push(format!("condition (i) fails: {}", cond_i.witness.clone().unwrap()));
    }
    if local.kind == LocalKind::NotCandidate {
        reasons.push(format!("conditions (ii) and (ii*) fail: {}", local.clause));
    }
    if !iii.pass {
        reasons.push(format!("condition (iii) fails: {}", cond_iii.witness.clone().unwrap()));
    }
    if cond_iv.status == CondStatus::Fail {
        reasons.push(format!("condition (iv) fails: {}", cond_iv.witness.clone().unwrap()));
    }

    let kind = if !reasons.is_empty() {
        VerdictKind::NotGlobalCenter
    } else if cond_iv.status == CondStatus::NumericPass {
        reasons.push(format!(
            "condition (iv) was only sampled ({samples_used} levels); no exact shortcut applied"
        ));
        VerdictKind::NumericInconclusive
    } else if local.kind == LocalKind::LinearCandidate {
        VerdictKind::GlobalCenterLinear
    } else {
        VerdictKind::GlobalCenterNilpotent
    };

    Verdict {
        kind,
        reasons,
        report: ConditionReport {
            cond_i,
            cond_ii,
            cond_ii_star,
            cond_iii,
            epsilon: iii.epsilon,
            cond_iv,
            counterexample,
            iv_samples_used: samples_used,
        },
    }
}

/// Reduced parameters of the degree-5 center families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuinticNormalForm {
    /// g ~ x + a x^3 + x^5, f ~ b x after rescaling.
    Linear { a: f64, b: f64 },
    /// g ~ x^3 + x^5, f ~ c x after rescaling.
    Nilpotent { c: f64 },
}

/// Reduce a quintic candidate (g = a1 x + a3 x^3 + a5 x^5 or a3 x^3 + a5 x^5,
/// f = b1 x) to its family parameters. `None` when the shape does not match;
/// an error when the shape matches but an outer coefficient that enters a
/// fractional power is not positive.
pub fn quintic_normal_form(
    sys: &LienardSystem,
) -> Result<Option<QuinticNormalForm>, CriteriaError> {
    if sys.m() > 5 || sys.n() > 4 {
        return Ok(None);
    }
    let f_is_b1x = sys.f().degree() == Some(1) && sys.f().coeff(0).is_zero();
    if !f_is_b1x {
        return Ok(None);
    }
    let g = sys.g();
    if g.degree() != Some(5) || !g.is_odd_function() {
        return Ok(None);
    }
    let a1 = g.coeff(1);
    let a3 = g.coeff(3);
    let a5 = g.coeff(5);
    let b1 = sys.f().coeff(1).to_f64().unwrap();
    if !a1.is_zero() {
        if !a1.is_positive() || !a5.is_positive() {
            return Err(CriteriaError::FractionalPowerDomain {
                what: format!("a1 = {a1}, a5 = {a5} must both be positive"),
            });
        }
        let a1f = a1.to_f64().unwrap();
        let a3f = a3.to_f64().unwrap();
        let a5f = a5.to_f64().unwrap();
        let a = a3f / (a1f * a5f).sqrt();
        let b = b1 / (a1f * a5f).powf(0.25);
        return Ok(Some(QuinticNormalForm::Linear { a, b }));
    }
    if a3.is_zero() {
        return Ok(None);
    }
    if !a3.is_positive() || !a5.is_positive() {
        return Err(CriteriaError::FractionalPowerDomain {
            what: format!("a3 = {a3}, a5 = {a5} must both be positive"),
        });
    }
    let c = b1 / a3.to_f64().unwrap().sqrt();
    Ok(Some(QuinticNormalForm::Nilpotent { c }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpace {
    S1,
    S2,
    S3,
    S4,
}

impl FamilySpace {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilySpace::S1 => "S1",
            FamilySpace::S2 => "S2",
            FamilySpace::S3 => "S3",
            FamilySpace::S4 => "S4",
        }
    }
}

/// Membership of (k, l, a, b) in the odd-family parameter spaces:
/// S1 (k>l, l odd, a>0, b!=0), S2 (k=l, l odd, a>0, b!=0, 4(l+1)a/b^2 > 1),
/// S3 (k>1, a>0, b=0), S4 (k=1, a>1/8, b=0).
pub fn family_membership(k: u32, l: u32, a: &Rational, b: &Rational) -> Option<FamilySpace> {
    assert!(k >= 1 && l >= 1);
    let l_odd = l % 2 == 1;
    if !b.is_zero() {
        if k > l && l_odd && a.is_positive() {
            return Some(FamilySpace::S1);
        }
        if k == l && l_odd && a.is_positive() && rat(4) * rat(l as i64 + 1) * a / (b * b) > rat(1)
        {
            return Some(FamilySpace::S2);
        }
        None
    } else {
        if k > 1 && a.is_positive() {
            return Some(FamilySpace::S3);
        }
        if k == 1 && a > &ratio(1, 8) {
            return Some(FamilySpace::S4);
        }
        None
    }
}

/// Build x' = y, y' = -x - a x^(2k+1) - x y - b x^l y, i.e.
/// g = x + a x^(2k+1), f = x + b x^l.
pub fn odd_family_system(
    k: u32,
    l: u32,
    a: &Rational,
    b: &Rational,
) -> Result<LienardSystem, CriteriaError> {
    assert!(k >= 1 && l >= 1);
    let g = &Polynomial::monomial(rat(1), 1) + &Polynomial::monomial(a.clone(), 2 * k as usize + 1);
    let f = &Polynomial::monomial(rat(1), 1) + &Polynomial::monomial(b.clone(), l as usize);
    LienardSystem::new(f, g)
}
