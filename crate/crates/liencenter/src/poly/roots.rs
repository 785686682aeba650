//! Exact real-root location and sign analysis.
//!
//! - Sturm chains on the square-free part count distinct real roots in
//!   half-open intervals `(a, b]`.
//! - Bisection from the Cauchy bound isolates every real root either exactly
//!   (when a bisection point lands on it) or in an open bracket with a sign
//!   change and exactly one simple root inside.
//! - `is_positive_punctured` decides `p(x) > 0 for all x != 0` exactly and
//!   produces a checkable witness on failure.

use super::{rat, PolyError, Polynomial, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Location of one real root of a square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rational),
    /// Open interval holding exactly one simple root; the polynomial has
    /// opposite nonzero signs at the endpoints.
    Bracket { lo: Rational, hi: Rational },
}

impl RootLocation {
    pub fn low(&self) -> Rational {
        match self {
            RootLocation::Exact(v) => v.clone(),
            RootLocation::Bracket { lo, .. } => lo.clone(),
        }
    }

    pub fn high(&self) -> Rational {
        match self {
            RootLocation::Exact(v) => v.clone(),
            RootLocation::Bracket { hi, .. } => hi.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RootLocation::Exact(v) => v.to_f64().unwrap(),
            RootLocation::Bracket { lo, hi } => {
                ((lo + hi) / rat(2)).to_f64().unwrap()
            }
        }
    }
}

fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        chain.push(-&r);
    }
}

fn sign_variations(chain: &[Polynomial], x: &Rational) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for p in chain {
        let v = p.eval(x);
        let s: i8 = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in `(lo, hi]`; `p` must be nonzero.
pub fn count_real_roots_in(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo >= hi {
        return Ok(0);
    }
    let sf = p.squarefree_part();
    let chain = sturm_chain(&sf);
    Ok(sign_variations(&chain, lo) - sign_variations(&chain, hi))
}

/// Isolate every real root of `p` (nonzero input). Roots of any multiplicity
/// are reported once, via the square-free part.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<RootLocation>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&sf);
    let bound = sf.cauchy_bound()?;
    let lo = -bound.clone();
    let hi = bound;
    let total = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 if sf.eval(&hi).is_zero() => out.push(RootLocation::Exact(hi)),
            1 if !sf.eval(&lo).is_zero() => {
                debug_assert!(sf.eval(&lo).is_positive() != sf.eval(&hi).is_positive());
                out.push(RootLocation::Bracket { lo, hi });
            }
            _ => {
                // Either several roots, or a root sits exactly on `lo` after an
                // earlier split; shrink around the midpoint until clean.
                let mid = (&lo + &hi) / rat(2);
                if sf.eval(&mid).is_zero() {
                    // Exclude the midpoint root from both children.
                    let mut d = (&hi - &lo) / rat(16);
                    let (m_lo, m_hi) = loop {
                        let m_lo = &mid - &d;
                        let m_hi = &mid + &d;
                        let inside = count_in(&chain, &m_lo, &m_hi);
                        if m_lo > lo && m_hi < hi && inside == 1 {
                            break (m_lo, m_hi);
                        }
                        d /= rat(2);
                    };
                    out.push(RootLocation::Exact(mid));
                    let left = count_in(&chain, &lo, &m_lo);
                    let right = count_in(&chain, &m_hi, &hi);
                    if left > 0 {
                        stack.push((lo, m_lo, left));
                    }
                    if right > 0 {
                        stack.push((m_hi, hi, right));
                    }
                } else {
                    let left = count_in(&chain, &lo, &mid);
                    let right = count - left;
                    if left > 0 {
                        stack.push((lo, mid.clone(), left));
                    }
                    if right > 0 {
                        stack.push((mid, hi, right));
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.low().cmp(&b.low()));
    Ok(out)
}

fn count_in(chain: &[Polynomial], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

/// Shrink a root location below `max_width` by sign bisection on the
/// square-free polynomial `sf` it came from.
pub fn refine_root(sf: &Polynomial, loc: RootLocation, max_width: &Rational) -> RootLocation {
    let (mut lo, mut hi) = match loc {
        RootLocation::Exact(v) => return RootLocation::Exact(v),
        RootLocation::Bracket { lo, hi } => (lo, hi),
    };
    let sign_lo = sf.eval(&lo).is_positive();
    while &(&hi - &lo) > max_width {
        let mid = (&lo + &hi) / rat(2);
        let v = sf.eval(&mid);
        if v.is_zero() {
            return RootLocation::Exact(mid);
        }
        if v.is_positive() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootLocation::Bracket { lo, hi }
}

/// Sign verdict for `p(x) > 0 on x != 0`, with an exact witness on failure.
///
/// When `verdict` is false, `witness_x` is a rational point with
/// `p(witness_x) <= 0` whenever such a point exists (strictly negative value,
/// or a rational zero of `p`). When the only failures are zeros of `p` at
/// irrational points, no rational point violates the condition; `root_bracket`
/// then isolates one such zero instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWitness {
    pub verdict: bool,
    pub witness_x: Option<Rational>,
    pub root_bracket: Option<(Rational, Rational)>,
}

impl SignWitness {
    fn holds() -> Self {
        SignWitness { verdict: true, witness_x: None, root_bracket: None }
    }

    fn fails_at(x: Rational) -> Self {
        SignWitness { verdict: false, witness_x: Some(x), root_bracket: None }
    }
}

/// Decide exactly whether `p(x) > 0` for every real `x != 0` (`p` may vanish
/// at the origin). Errors on the zero polynomial.
pub fn is_positive_punctured(p: &Polynomial) -> Result<SignWitness, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let k = p.lowest_power().unwrap();
    let q = p.div_xk(k);
    let q0 = q.coeff(0);
    debug_assert!(!q0.is_zero());

    if k % 2 == 1 {
        // x^k flips sign across the origin, so p does too.
        let side = if q0.is_positive() { rat(-1) } else { rat(1) };
        return Ok(SignWitness::fails_at(probe_negative(p, &side)));
    }
    if q0.is_negative() {
        return Ok(SignWitness::fails_at(probe_negative(p, &rat(1))));
    }

    let roots = {
        let sf = q.squarefree_part();
        if sf.degree() == Some(0) {
            Vec::new()
        } else {
            isolate_real_roots(&q)?
        }
    };
    if roots.is_empty() {
        // q(0) > 0 and q never vanishes, so q > 0 everywhere.
        return Ok(SignWitness::holds());
    }

    let sf = q.squarefree_part();
    // Isolation yields pairwise disjoint locations (shared endpoints are
    // split points, never roots), so points between consecutive locations
    // carry the exact sign of q on the whole gap.
    let refined: Vec<RootLocation> = roots;
    debug_assert!(refined.windows(2).all(|w| w[0].high() <= w[1].low()));
    let mut samples: Vec<Rational> = Vec::new();
    samples.push(refined.first().unwrap().low() - rat(1));
    for w in refined.windows(2) {
        samples.push((w[0].high() + w[1].low()) / rat(2));
    }
    samples.push(refined.last().unwrap().high() + rat(1));
    let mut negatives: Vec<Rational> = samples
        .into_iter()
        .filter(|s| q.eval(s).is_negative())
        .collect();
    negatives.sort_by_key(|v| (v.abs(), v.is_negative()));
    if let Some(s) = negatives.into_iter().next() {
        return Ok(SignWitness::fails_at(s));
    }

    // q >= 0 with isolated zeros away from the origin. A rational zero is a
    // usable witness; otherwise report a bracket.
    let mut exact: Vec<Rational> = refined
        .iter()
        .filter_map(|loc| match loc {
            RootLocation::Exact(v) => Some(v.clone()),
            RootLocation::Bracket { .. } => None,
        })
        .collect();
    for loc in &refined {
        if let RootLocation::Bracket { lo, hi } = loc {
            if let Some(v) = rational_root_inside(&q, lo, hi) {
                exact.push(v);
            }
        }
    }
    if !exact.is_empty() {
        exact.sort_by_key(|v| (v.abs(), v.is_negative()));
        return Ok(SignWitness::fails_at(exact.remove(0)));
    }

    let tight = refine_root(
        &sf,
        refined.into_iter().next().unwrap(),
        &Rational::new(1.into(), BigInt::from(2).pow(64)),
    );
    match tight {
        RootLocation::Exact(v) => Ok(SignWitness::fails_at(v)),
        RootLocation::Bracket { lo, hi } => Ok(SignWitness {
            verdict: false,
            witness_x: None,
            root_bracket: Some((lo, hi)),
        }),
    }
}

/// Walk toward the origin on the given side until `p` is strictly negative.
/// Caller guarantees `p < 0` on a punctured neighborhood of 0 on that side.
fn probe_negative(p: &Polynomial, side: &Rational) -> Rational {
    let mut t = side.clone();
    for _ in 0..100_000 {
        if p.eval(&t).is_negative() {
            return t;
        }
        t /= rat(2);
    }
    unreachable!("sign of leading local term must win near the origin");
}

/// Budgeted search for a rational root of `q` strictly inside `(lo, hi)`.
/// Candidates come from divisors of the outer integer coefficients; gives up
/// (returns None) when those are too large to enumerate.
fn rational_root_inside(q: &Polynomial, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let prim = primitive_integer_coeffs(q);
    let c_low = prim.iter().find(|c| !c.is_zero())?.clone();
    let c_high = prim.last()?.clone();
    let nums = small_divisors(&c_low)?;
    let dens = small_divisors(&c_high)?;
    for u in &nums {
        for v in &dens {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(*u as i64 * sign), BigInt::from(*v as i64));
                if &cand > lo && &cand < hi && q.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn primitive_integer_coeffs(p: &Polynomial) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

/// All positive divisors, or None when the value is too large to factor by
/// bounded trial division.
fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut divs = Vec::new();
    let mut i: u64 = 1;
    let mut steps = 0u64;
    while i.saturating_mul(i) <= n {
        steps += 1;
        if steps > 2_000_000 {
            return None;
        }
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
            if divs.len() > 4096 {
                return None;
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    Some(divs)
}
