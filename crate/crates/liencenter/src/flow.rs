//! Adaptive Runge-Kutta integration of the planar flow, the positive-y-axis
//! return map, and the closure / escape oracles built on it.
//!
//! The integrator is a Dormand-Prince 5(4) pair with first-same-as-last reuse
//! and the classic quartic dense-output interpolant. Section crossings are
//! located by sign change of x over an accepted step followed by bisection on
//! the dense output; a crossing ordinate closer to the origin than 1e-8 is
//! rejected as too degenerate to define a return.

use crate::criteria::LienardSystem;
use crate::poly::{horner_f64, rat};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("step size underflow at t = {t} (h = {h:e}); the problem is too stiff here")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget {max_steps} exhausted at t = {t}")]
    MaxSteps { max_steps: usize, t: f64 },
    #[error("orbit left radius {radius:e} at t = {t} before returning to the section")]
    EscapeBeforeReturn { radius: f64, t: f64 },
    #[error("no return to the section: {reason}")]
    NoReturn { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Time-localization width for section crossings.
    pub event_tol: f64,
    pub escape_radius: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 1_000_000,
            event_tol: 1e-12,
            escape_radius: 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Reached the end of the requested time span.
    SpanEnd,
    /// Left the escape radius.
    Escaped,
    /// An observer asked to stop (event fired).
    Stopped,
}

/// One accepted step with its dense-output interpolant.
#[derive(Clone, Copy, Debug)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; 2],
    pub y1: [f64; 2],
    rcont: [[f64; 5]; 2],
}

impl DenseStep {
    /// Interpolated state at fraction theta in [0, 1] of the step.
    pub fn state_at(&self, theta: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        for i in 0..2 {
            let r = &self.rcont[i];
            let th1 = 1.0 - theta;
            out[i] = r[0] + theta * (r[1] + th1 * (r[2] + theta * (r[3] + th1 * r[4])));
        }
        out
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Stepper<'a, F: Fn(&[f64; 2]) -> [f64; 2]> {
    field: F,
    cfg: &'a IntegratorConfig,
    t: f64,
    y: [f64; 2],
    h: f64,
    dir: f64,
    k1: [f64; 2],
    steps: usize,
}

fn add2(y: &[f64; 2], h: f64, terms: &[(f64, &[f64; 2])]) -> [f64; 2] {
    let mut out = *y;
    for i in 0..2 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

impl<'a, F: Fn(&[f64; 2]) -> [f64; 2]> Stepper<'a, F> {
    fn new(field: F, cfg: &'a IntegratorConfig, t0: f64, y0: [f64; 2], t1: f64) -> Self {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let k1 = field(&y0);
        // Starting step: a crude two-stage estimate in the style of classic
        // production integrators.
        let sc = |v: f64, w: f64| cfg.abs_tol + cfg.rel_tol * v.abs().max(w.abs());
        let d0 = (0..2).map(|i| (y0[i] / sc(y0[i], y0[i])).powi(2)).sum::<f64>().sqrt();
        let d1 = (0..2).map(|i| (k1[i] / sc(y0[i], y0[i])).powi(2)).sum::<f64>().sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = [y0[0] + dir * h0 * k1[0], y0[1] + dir * h0 * k1[1]];
        let k2 = field(&y1);
        let d2 = (0..2)
            .map(|i| ((k2[i] - k1[i]) / sc(y0[i], y1[i])).powi(2))
            .sum::<f64>()
            .sqrt()
            / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        let h = h0 * 100.0;
        let h = h.min(h1).min((t1 - t0).abs().max(1e-300));
        Stepper { field, cfg, t: t0, y: y0, h: h.max(1e-300), dir, k1, steps: 0 }
    }

    /// Take one accepted step toward t_end (never past it). Returns the dense
    /// record, or None when t has already reached t_end.
    fn step(&mut self, t_end: f64) -> Result<Option<DenseStep>, FlowError> {
        if (t_end - self.t) * self.dir <= 0.0 {
            return Ok(None);
        }
        let mut facmax = 5.0;
        loop {
            self.steps += 1;
            if self.steps > self.cfg.max_steps {
                return Err(FlowError::MaxSteps { max_steps: self.cfg.max_steps, t: self.t });
            }
            let mut h = self.h.min((t_end - self.t).abs());
            if h <= 1e-14 * (1.0 + self.t.abs()) {
                // Squeezed against the endpoint: snap to it.
                h = (t_end - self.t).abs();
                if h == 0.0 {
                    return Ok(None);
                }
            }
            let hs = h * self.dir;
            let f = &self.field;
            let y = &self.y;
            let k1 = self.k1;
            let k2 = f(&add2(y, hs, &[(A21, &k1)]));
            let k3 = f(&add2(y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&add2(y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&add2(y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&add2(
                y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y_new = add2(y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(&y_new);
            let mut err = 0.0;
            for i in 0..2 {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.cfg.abs_tol
                    + self.cfg.rel_tol * self.y[i].abs().max(y_new[i].abs());
                err += (e / sc) * (e / sc);
            }
            let err = (err / 2.0).sqrt();
            if err <= 1.0 {
                let mut rcont = [[0.0; 5]; 2];
                for i in 0..2 {
                    let ydiff = y_new[i] - self.y[i];
                    let bspl = hs * k1[i] - ydiff;
                    rcont[i] = [
                        self.y[i],
                        ydiff,
                        bspl,
                        ydiff - hs * k7[i] - bspl,
                        hs * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]),
                    ];
                }
                let rec = DenseStep { t0: self.t, h: hs, y0: self.y, y1: y_new, rcont };
                self.t += hs;
                self.y = y_new;
                self.k1 = k7;
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, facmax);
                self.h = (h * fac).max(1e-300);
                return Ok(Some(rec));
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            self.h = h * fac;
            facmax = 1.0;
            if self.h <= 1e-14 * (1.0 + self.t.abs()) {
                return Err(FlowError::StepUnderflow { t: self.t, h: self.h });
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 2]>,
    pub termination: Termination,
}

impl Trajectory {
    /// CSV dump with header t,x,y at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y\n");
        for (t, s) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", t, s[0], s[1]));
        }
        out
    }
}

fn radius2(s: &[f64; 2]) -> f64 {
    s[0] * s[0] + s[1] * s[1]
}

/// Integrate an arbitrary autonomous planar field over a time span (backward
/// when t1 < t0), recording one point per accepted step.
pub fn integrate_field<F: Fn(&[f64; 2]) -> [f64; 2]>(
    field: F,
    state: [f64; 2],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    let (t0, t1) = t_span;
    assert!(state.iter().all(|v| v.is_finite()), "initial state must be finite");
    let mut times = vec![t0];
    let mut states = vec![state];
    let r2max = cfg.escape_radius * cfg.escape_radius;
    if radius2(&state) > r2max {
        return Ok(Trajectory { times, states, termination: Termination::Escaped });
    }
    let mut st = Stepper::new(field, cfg, t0, state, t1);
    loop {
        match st.step(t1)? {
            None => return Ok(Trajectory { times, states, termination: Termination::SpanEnd }),
            Some(rec) => {
                times.push(rec.t0 + rec.h);
                states.push(rec.y1);
                if radius2(&rec.y1) > r2max {
                    return Ok(Trajectory { times, states, termination: Termination::Escaped });
                }
            }
        }
    }
}

pub(crate) fn lienard_field(sys: &LienardSystem) -> impl Fn(&[f64; 2]) -> [f64; 2] {
    let g = sys.g().to_f64_coeffs();
    let f = sys.f().to_f64_coeffs();
    move |s: &[f64; 2]| {
        let (x, y) = (s[0], s[1]);
        [y, -horner_f64(&g, x) - horner_f64(&f, x) * y]
    }
}

/// Integrate x' = y, y' = -g(x) - f(x) y.
pub fn integrate(
    sys: &LienardSystem,
    state: [f64; 2],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    integrate_field(lienard_field(sys), state, t_span, cfg)
}

/// The system with time reversed, realized as (x, y, t) -> (x, -y, -t),
/// which negates f and keeps g.
pub fn time_reversed(sys: &LienardSystem) -> LienardSystem {
    LienardSystem::new(sys.f().scale(&rat(-1)), sys.g().clone())
        .expect("negation preserves nonzeroness")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingRecord {
    pub t: f64,
    /// Ordinate at the positive-y-axis crossing.
    pub y: f64,
    pub index: usize,
}

/// Ordinate threshold below which a section crossing is rejected as too close
/// to the equilibrium, and (one decade lower) an orbit is declared captured.
const SECTION_MIN_Y: f64 = 1e-8;
const CAPTURE_RADIUS: f64 = 1e-9;

/// Locate the crossing of x = 0 inside an accepted step by bisection on the
/// dense output, to a time window of width event_tol.
fn localize_crossing(rec: &DenseStep, event_tol: f64) -> (f64, [f64; 2]) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // Invariant: x(lo) < 0 <= x(hi).
    for _ in 0..200 {
        if (hi - lo) * rec.h.abs() <= event_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if rec.state_at(mid)[0] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    (rec.t0 + theta * rec.h, rec.state_at(theta))
}

struct SectionWalker<'a, F: Fn(&[f64; 2]) -> [f64; 2]> {
    st: Stepper<'a, F>,
    cfg: &'a IntegratorConfig,
    crossings: usize,
}

enum WalkEvent {
    Crossing(CrossingRecord),
    Step(DenseStep),
}

impl<'a, F: Fn(&[f64; 2]) -> [f64; 2]> SectionWalker<'a, F> {
    fn new(sys_field: F, cfg: &'a IntegratorConfig, y0: f64) -> Self {
        let st = Stepper::new(sys_field, cfg, 0.0, [0.0, y0], f64::INFINITY);
        SectionWalker { st, cfg, crossings: 0 }
    }

    /// Advance one accepted step; report a section crossing if the step
    /// contains an accepted one.
    fn advance(&mut self) -> Result<WalkEvent, FlowError> {
        let rec = match self.st.step(f64::INFINITY)? {
            Some(rec) => rec,
            None => unreachable!("infinite horizon"),
        };
        let r2 = radius2(&rec.y1);
        if r2 > self.cfg.escape_radius * self.cfg.escape_radius {
            return Err(FlowError::EscapeBeforeReturn {
                radius: self.cfg.escape_radius,
                t: rec.t0 + rec.h,
            });
        }
        if r2 < CAPTURE_RADIUS * CAPTURE_RADIUS {
            return Err(FlowError::NoReturn {
                reason: format!(
                    "orbit captured by the origin (radius < {CAPTURE_RADIUS:e} at t = {})",
                    rec.t0 + rec.h
                ),
            });
        }
        if rec.y0[0] < 0.0 && rec.y1[0] >= 0.0 {
            let (t, s) = localize_crossing(&rec, self.cfg.event_tol);
            if s[1] >= SECTION_MIN_Y {
                self.crossings += 1;
                return Ok(WalkEvent::Crossing(CrossingRecord {
                    t,
                    y: s[1],
                    index: self.crossings,
                }));
            }
        }
        Ok(WalkEvent::Step(rec))
    }
}

/// First return to the section {x = 0, y > 0, xdot > 0} starting from
/// (0, y0).
pub fn return_map(
    sys: &LienardSystem,
    y0: f64,
    cfg: &IntegratorConfig,
) -> Result<CrossingRecord, FlowError> {
    assert!(y0 > 0.0, "the section lives on the positive y axis");
    let mut walker = SectionWalker::new(lienard_field(sys), cfg, y0);
    loop {
        if let WalkEvent::Crossing(c) = walker.advance()? {
            return Ok(c);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub closed: bool,
    pub max_error: f64,
    /// Per-seed |y_return - y0|, in y0_list order; infinite when the orbit
    /// never produced an accepted return (escape, capture, step budget).
    pub errors: Vec<f64>,
}

/// Return-map closure oracle. A return that never completes counts as
/// non-closure with infinite error rather than an integration error: the
/// question the oracle answers is "did the orbit provably close".
pub fn closure_test(
    sys: &LienardSystem,
    y0_list: &[f64],
    cfg: &IntegratorConfig,
) -> Result<ClosureReport, FlowError> {
    let mut errors = Vec::with_capacity(y0_list.len());
    let mut closed = true;
    let mut max_error = 0.0_f64;
    for &y0 in y0_list {
        let err = match return_map(sys, y0, cfg) {
            Ok(c) => (c.y - y0).abs(),
            Err(FlowError::StepUnderflow { t, h }) => {
                return Err(FlowError::StepUnderflow { t, h })
            }
            Err(_) => f64::INFINITY,
        };
        if err >= 1e3 * cfg.event_tol * y0.max(1.0) {
            closed = false;
        }
        max_error = max_error.max(err);
        errors.push(err);
    }
    Ok(ClosureReport { closed, max_error, errors })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeReport {
    pub bounded: bool,
    /// Max radius over each inter-crossing arc, one entry per completed
    /// crossing.
    pub radii: Vec<f64>,
}

/// Follow the orbit through n_crossings returns to the section, recording the
/// maximal radius on each arc. bounded is false exactly when the escape
/// radius was breached first.
pub fn escape_probe(
    sys: &LienardSystem,
    y0: f64,
    n_crossings: usize,
    cfg: &IntegratorConfig,
) -> Result<EscapeReport, FlowError> {
    assert!(y0 > 0.0);
    let mut walker = SectionWalker::new(lienard_field(sys), cfg, y0);
    let mut radii = Vec::with_capacity(n_crossings);
    let mut arc_max = y0;
    while radii.len() < n_crossings {
        match walker.advance() {
            Ok(WalkEvent::Step(rec)) => {
                arc_max = arc_max.max(radius2(&rec.y1).sqrt());
            }
            Ok(WalkEvent::Crossing(c)) => {
                radii.push(arc_max.max(c.y));
                arc_max = c.y;
            }
            Err(FlowError::EscapeBeforeReturn { .. }) => {
                return Ok(EscapeReport { bounded: false, radii });
            }
            Err(FlowError::NoReturn { .. }) => {
                // Captured orbits are bounded by definition.
                return Ok(EscapeReport { bounded: true, radii });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EscapeReport { bounded: true, radii })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn sys(f: &str, g: &str) -> LienardSystem {
        LienardSystem::new(parse_polynomial(f).unwrap(), parse_polynomial(g).unwrap()).unwrap()
    }

    #[test]
    fn small_amplitude_stays_small() {
        let s = sys("x", "x");
        let tr = integrate(&s, [0.0, 1e-6], (0.0, 1.0), &IntegratorConfig::default()).unwrap();
        assert_eq!(tr.termination, Termination::SpanEnd);
        for p in &tr.states {
            assert!(radius2(p).sqrt() < 2e-6);
        }
    }

    #[test]
    fn quintic_orbit_returns() {
        // a=0, b=1: g = x + x^5, f = x.
        let s = sys("x", "x + x^5");
        let c = return_map(&s, 1.0, &IntegratorConfig::default()).unwrap();
        assert!(c.y > 0.0);
        assert!(c.t > 0.0);
        assert!((c.y - 1.0).abs() < 1e-6, "return error {}", (c.y - 1.0).abs());
    }

    #[test]
    fn immediate_escape_for_huge_state() {
        let s = sys("x", "x");
        let tr = integrate(&s, [0.0, 1e7], (0.0, 1.0), &IntegratorConfig::default()).unwrap();
        assert_eq!(tr.termination, Termination::Escaped);
        assert_eq!(tr.states.len(), 1);
    }

    #[test]
    fn return_map_examples() {
        // Linear family a=1, b=1.
        let s = sys("x", "x + x^3 + x^5");
        let c = return_map(&s, 1.0, &IntegratorConfig::default()).unwrap();
        assert!((c.y - 1.0).abs() < 1e-6);

        // Nilpotent family c=2.
        let s = sys("2x", "x^3 + x^5");
        let c = return_map(&s, 5.0, &IntegratorConfig::default()).unwrap();
        assert!((c.y - 5.0).abs() < 1e-6);

        // (iv) fails: visible non-closure.
        let s = sys("x + x^2", "x + x^3");
        let c = return_map(&s, 1.0, &IntegratorConfig::default()).unwrap();
        assert!((c.y - 1.0).abs() > 1e-3, "gap {}", (c.y - 1.0).abs());
    }

    #[test]
    fn closure_examples() {
        let cfg = IntegratorConfig::default();
        let s = sys("2x", "x + x^5");
        let rep = closure_test(&s, &[0.5, 5.0, 50.0], &cfg).unwrap();
        assert!(rep.closed, "errors {:?}", rep.errors);

        let s = sys("x^2", "x + x^5");
        let rep = closure_test(&s, &[1.0], &cfg).unwrap();
        assert!(!rep.closed);

        let s = sys("x", "x");
        let rep = closure_test(&s, &[], &cfg).unwrap();
        assert!(rep.closed);
        assert_eq!(rep.max_error, 0.0);
    }

    #[test]
    fn energy_oracle_small_amplitude() {
        let s = sys("x", "x + x^3");
        // The default absolute floor (1e-12) is sized for O(1) orbits; at
        // amplitude 1e-3 it caps the achievable return accuracy near 2e-12,
        // so the probe lowers the floor below the orbit scale.
        let cfg = IntegratorConfig { abs_tol: 1e-16, ..Default::default() };
        let c = return_map(&s, 1e-3, &cfg).unwrap();
        assert!((c.y - 1e-3).abs() < 1e-12, "error {}", (c.y - 1e-3).abs());
    }

    #[test]
    fn escape_probe_examples() {
        let cfg = IntegratorConfig::default();
        let s = sys("x^2", "x + x^5");
        let rep = escape_probe(&s, 100.0, 20, &cfg).unwrap();
        assert!(rep.bounded);
        assert_eq!(rep.radii.len(), 20);

        let rev = time_reversed(&s);
        let rep = escape_probe(&rev, 100.0, 20, &cfg).unwrap();
        assert!(!rep.bounded);

        let s = sys("x", "x + x^3 + x^5");
        let rep = escape_probe(&s, 100.0, 20, &cfg).unwrap();
        assert!(rep.bounded);
        let lo = rep.radii.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rep.radii.iter().cloned().fold(0.0, f64::max);
        assert!(hi - lo < 1e-6, "radius spread {}", hi - lo);
    }

    #[test]
    fn nilpotent_node_capture_has_no_return() {
        // c = 3 > 2*sqrt(2): the origin is a node; the orbit from (0, 1)
        // falls into it without completing a return.
        let s = sys("3x", "x^3 + x^5");
        let r = return_map(&s, 1.0, &IntegratorConfig::default());
        assert!(
            matches!(r, Err(FlowError::NoReturn { .. })),
            "expected capture, got {r:?}"
        );
        let rep = closure_test(&s, &[1.0], &IntegratorConfig::default()).unwrap();
        assert!(!rep.closed);
        assert_eq!(rep.max_error, f64::INFINITY);
    }

    #[test]
    fn reversal_negates_f() {
        let s = sys("x + x^2", "x + x^3");
        let r = time_reversed(&s);
        assert_eq!(r.f(), &s.f().scale(&rat(-1)));
        assert_eq!(r.g(), s.g());
    }

    #[test]
    fn csv_dump_shape() {
        let s = sys("x", "x");
        let tr = integrate(&s, [0.0, 0.5], (0.0, 0.1), &IntegratorConfig::default()).unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x,y"));
        assert_eq!(lines.count(), tr.states.len());
        assert!(csv.contains('e'), "scientific notation expected");
    }

    #[test]
    fn backward_integration_runs() {
        let s = sys("x", "x + x^3");
        let fwd = integrate(&s, [0.0, 1.0], (0.0, 0.7), &IntegratorConfig::default()).unwrap();
        let end = *fwd.states.last().unwrap();
        let back = integrate(&s, end, (0.7, 0.0), &IntegratorConfig::default()).unwrap();
        let home = back.states.last().unwrap();
        assert!((home[0]).abs() < 1e-8 && (home[1] - 1.0).abs() < 1e-8, "{home:?}");
    }
}

