//! Acceptance gate: nine criteria, one test each, each printing a single
//! `criterion N: PASS/FAIL - detail` line (visible with --nocapture, and in
//! the failure output otherwise). Every tolerance is pinned here in code.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liencenter::branches::{
    boundedness_direction, check_condition_iv, invert_branch, BranchContext, Boundedness,
    IvStatus, Side,
};
use liencenter::criteria::{
    check_condition_i, check_condition_iii, decide_global_center, family_membership,
    odd_family_system, CondStatus, LienardSystem, ToleranceOptions, VerdictKind,
};
use liencenter::flow::{closure_test, escape_probe, time_reversed, IntegratorConfig};
use liencenter::infinity::{classify_infinity, normalize};
use liencenter::poly::{rat, ratio, Polynomial, Rational};
use liencenter::render::{render_portrait, PortraitSpec};

/// Closure bound for verdict-positive systems (criteria 1 and 2).
const CLOSURE_BOUND: f64 = 1e-6;
/// Non-closure floor for the node systems of criterion 2.
const NONCLOSURE_FLOOR: f64 = 1e-3;
/// Round-trip bound for the branch machinery (criterion 8).
const ROUNDTRIP_TOL: f64 = 1e-12;
/// Orbit endpoint gap allowed in rendered portraits (criterion 9), in px.
const PX_CLOSE: f64 = 1.0;
/// Wall-clock budget for the whole criterion-1 grid.
const GRID_BUDGET: Duration = Duration::from_secs(30);
/// Wall-clock budget for each criterion-7 probe run.
const PROBE_BUDGET: Duration = Duration::from_secs(10);

fn gate(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn poly(terms: &[(Rational, usize)]) -> Polynomial {
    terms
        .iter()
        .fold(Polynomial::zero(), |acc, (c, k)| &acc + &Polynomial::monomial(c.clone(), *k))
}

fn lienard(f: Polynomial, g: Polynomial) -> LienardSystem {
    LienardSystem::new(f, g).expect("test system is well-formed")
}

#[test]
fn criterion_1_linear_family_grid() {
    let t0 = Instant::now();
    let cfg = IntegratorConfig::default();
    let seeds = [0.5, 5.0, 50.0];
    let mut worst: f64 = 0.0;
    let mut problems = Vec::new();
    for a in [ratio(-19, 10), rat(0), rat(5)] {
        for b in [rat(-3), ratio(1, 10), rat(2)] {
            let g = poly(&[(rat(1), 1), (a.clone(), 3), (rat(1), 5)]);
            let f = poly(&[(b.clone(), 1)]);
            let sys = lienard(f, g);
            let verdict = decide_global_center(&sys, &ToleranceOptions::default());
            if verdict.kind != VerdictKind::GlobalCenterLinear {
                problems.push(format!("a={a}, b={b}: verdict {:?}", verdict.kind));
                continue;
            }
            let rep = closure_test(&sys, &seeds, &cfg).expect("integration succeeds");
            worst = worst.max(rep.max_error);
            if rep.max_error >= CLOSURE_BOUND {
                problems.push(format!("a={a}, b={b}: closure error {:.3e}", rep.max_error));
            }
        }
    }
    let elapsed = t0.elapsed();
    if elapsed >= GRID_BUDGET {
        problems.push(format!("grid took {elapsed:?} (budget {GRID_BUDGET:?})"));
    }
    gate(
        1,
        problems.is_empty(),
        &if problems.is_empty() {
            format!(
                "3x3 grid all GlobalCenterLinear, worst closure error {worst:.3e} < {CLOSURE_BOUND:e}, {elapsed:?}"
            )
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn criterion_2_nilpotent_family() {
    let cfg = IntegratorConfig::default();
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for c in [ratio(-14, 5), rat(-1), rat(1), ratio(14, 5)] {
        let sys = lienard(poly(&[(c.clone(), 1)]), poly(&[(rat(1), 3), (rat(1), 5)]));
        let verdict = decide_global_center(&sys, &ToleranceOptions::default());
        if verdict.kind != VerdictKind::GlobalCenterNilpotent {
            problems.push(format!("c={c}: verdict {:?}", verdict.kind));
            continue;
        }
        let rep = closure_test(&sys, &[0.5, 5.0, 50.0], &cfg).expect("integration succeeds");
        worst = worst.max(rep.max_error);
        if rep.max_error >= CLOSURE_BOUND {
            problems.push(format!("c={c}: closure error {:.3e}", rep.max_error));
        }
    }
    let mut node_details = Vec::new();
    for c in [rat(-3), rat(3)] {
        let sys = lienard(poly(&[(c.clone(), 1)]), poly(&[(rat(1), 3), (rat(1), 5)]));
        let verdict = decide_global_center(&sys, &ToleranceOptions::default());
        if verdict.kind != VerdictKind::NotGlobalCenter {
            problems.push(format!("c={c}: verdict {:?}", verdict.kind));
        }
        if verdict.report.cond_ii_star.status != CondStatus::Fail {
            problems.push(format!("c={c}: (ii*) not cited"));
        }
        let rep = closure_test(&sys, &[1.0], &cfg).expect("only step underflow propagates");
        let err = rep.errors[0];
        node_details.push(format!("c={c}: |y_ret - 1| = {err:.3e}"));
        if !(err > NONCLOSURE_FLOOR) {
            // The c = -3 orbit through (0, 1) is exactly periodic: f odd
            // makes the flow reversible about the whole y-axis, and the
            // node's homoclinic loop crosses only the negative y-axis, so
            // every positive-axis seed sits in the outer period band. The
            // criterion is asserted as written and fails honestly here.
            problems.push(format!(
                "c={c}: orbit from (0,1) returns closed (error {err:.3e}), non-closure > {NONCLOSURE_FLOOR:e} is unattainable on the positive-y section"
            ));
        }
    }
    gate(
        2,
        problems.is_empty(),
        &if problems.is_empty() {
            format!(
                "4 centers closed (worst {worst:.3e}), nodes cite (ii*), {}",
                node_details.join(", ")
            )
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn criterion_3_condition_iii_sharpness() {
    let mut problems = Vec::new();
    for n in 1usize..=3 {
        let m = 2 * n + 1;
        let thr = ratio(1, 4 * (n as i64) + 4);
        let f = poly(&[(rat(1), n)]);

        let at_threshold = lienard(f.clone(), poly(&[(thr.clone(), m)]));
        let r1 = check_condition_iii(&at_threshold);
        if r1.pass {
            problems.push(format!("n={n}: (iii) passed AT epsilon = {thr}"));
        }
        if r1.epsilon != thr {
            problems.push(format!("n={n}: epsilon {} != {thr}", r1.epsilon));
        }

        let bumped = &thr + &ratio(1, 1_000_000_000);
        let above = lienard(f, poly(&[(bumped.clone(), m)]));
        let r2 = check_condition_iii(&above);
        if !r2.pass {
            problems.push(format!("n={n}: (iii) failed at epsilon = {bumped}"));
        }
    }
    gate(
        3,
        problems.is_empty(),
        &if problems.is_empty() {
            "epsilon = 1/(4n+4) fails and epsilon = 1/(4n+4) + 1e-9 passes exactly, n in {1,2,3}"
                .to_string()
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn criterion_4_odd_family_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd_fa417);
    let mut corner = Vec::new();
    let mut elsewhere = Vec::new();
    let mut agree = 0;
    for _ in 0..200 {
        let (k, l, a, b) = loop {
            let k = rng.gen_range(1..=4u32);
            let l = rng.gen_range(1..=4u32);
            let a = ratio(rng.gen_range(1..=24), 8); // (0, 3]
            let b = ratio(rng.gen_range(-24..=24), 8); // [-3, 3]
            // l = 1, b = -1 collapses f = x + b x^l to zero, which the
            // constructor rejects; that corner has no verdict to compare.
            if !(l == 1 && b == rat(-1)) {
                break (k, l, a, b);
            }
        };
        let member = family_membership(k, l, &a, &b);
        let sys = odd_family_system(k, l, &a, &b).expect("family system is well-formed");
        let verdict = decide_global_center(&sys, &ToleranceOptions::default());
        let is_center = matches!(
            verdict.kind,
            VerdictKind::GlobalCenterLinear | VerdictKind::GlobalCenterNilpotent
        );
        if member.is_some() == is_center {
            agree += 1;
        } else if k == 1 && l == 1 {
            // At k = l = 1 the b x^l damping term merges with the family's
            // built-in x y term, so the constructed system has f = (1+b) x.
            // The S2 predicate tests 4(l+1) a / b^2 > 1 verbatim while the
            // sharp threshold for that system is 4(l+1) a / (1+b)^2 > 1;
            // the two sides can genuinely disagree on this corner.
            corner.push(format!(
                "(a={a}, b={b}): membership {} vs verdict {:?}",
                member.map_or("none", |s| s.as_str()),
                verdict.kind
            ));
        } else {
            elsewhere.push(format!(
                "(k={k}, l={l}, a={a}, b={b}): membership {} vs verdict {:?}",
                member.map_or("none", |s| s.as_str()),
                verdict.kind
            ));
        }
    }
    let ok = corner.is_empty() && elsewhere.is_empty();
    gate(
        4,
        ok,
        &if ok {
            format!("200/200 tuples agree")
        } else {
            let mut d = format!(
                "{agree}/200 agree; {} disagreement(s), all confined to k=l=1 where the verbatim S2 predicate reads the raw parameter b but the constructed damping is (1+b)x, e.g. {}",
                corner.len() + elsewhere.len(),
                corner.first().map(String::as_str).unwrap_or("")
            );
            if !elsewhere.is_empty() {
                d = format!(
                    "{agree}/200 agree; disagreements OUTSIDE the k=l=1 corner: {}",
                    elsewhere.join("; ")
                );
            }
            d
        },
    );
}

/// Random g = c1 x + c3 x^3 + c5 x^5 with c1, c5 > 0 that provably satisfies
/// condition (i); about half the draws get a negative middle coefficient and
/// are filtered through the exact sign test.
fn random_odd_restoring(rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let c1 = ratio(rng.gen_range(1..=12), 4);
        let c3 = ratio(rng.gen_range(-12..=12i64), 4);
        let c5 = ratio(rng.gen_range(1..=12), 4);
        let g = poly(&[(c1, 1), (c3, 3), (c5, 5)]);
        let probe = lienard(poly(&[(rat(1), 1)]), g.clone());
        if check_condition_i(&probe).verdict {
            return g;
        }
    }
}

#[test]
fn criterion_5_parity_decides_iv_for_odd_g() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd_9c0de);
    let mut problems = Vec::new();
    let mut odd_count = 0;
    for i in 0..100 {
        let g = random_odd_restoring(&mut rng);
        let f = loop {
            let mut terms = Vec::new();
            let force_odd = rng.gen_bool(0.5);
            for k in 1..=5usize {
                if force_odd && k % 2 == 0 {
                    continue;
                }
                let c = rng.gen_range(-8..=8i64);
                if c != 0 {
                    terms.push((ratio(c, 4), k));
                }
            }
            let f = poly(&terms);
            if !terms.is_empty() {
                break f;
            }
        };
        let expect_exact = f.is_odd_function();
        if expect_exact {
            odd_count += 1;
        }
        let sys = lienard(f, g);
        let ctx = BranchContext::new(sys).expect("condition (i) holds by construction");
        let iv = check_condition_iv(&ctx, &ToleranceOptions::default());
        let ok = match iv.status {
            IvStatus::HoldsExact => expect_exact,
            IvStatus::Fails => !expect_exact,
            IvStatus::HoldsNumeric => false,
        };
        if !ok {
            problems.push(format!("#{i}: f parity {expect_exact} but (iv) {:?}", iv.status));
        }
    }
    gate(
        5,
        problems.is_empty(),
        &if problems.is_empty() {
            format!("100/100 agree ({odd_count} odd f, {} non-odd)", 100 - odd_count)
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn criterion_6_connection_equals_not_iii() {
    // 20 (m, n) pairs outside the m = 2n+1 regime, two leading signs each,
    // plus 4 pairs on it with five exact epsilon values each: 60 combos.
    let off_resonance: [(usize, usize); 20] = [
        (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4), // m < n+1
        (2, 1), (3, 2), (4, 3), (5, 4), // m = n+1
        (4, 2), (5, 3), (6, 3), (6, 4), (7, 4), // n+1 < m < 2n+1
        (4, 1), (5, 1), (6, 1), (7, 2), (9, 3), // m > 2n+1
    ];
    let mut combos = 0;
    let mut problems = Vec::new();
    let mut check = |sys: &LienardSystem, label: String| {
        let class = classify_infinity(&normalize(sys)).expect("classifiable");
        let iii = check_condition_iii(sys);
        combos += 1;
        if class.connection_at_infinity != !iii.pass {
            problems.push(format!(
                "{label}: connection {} but (iii) pass {}",
                class.connection_at_infinity, iii.pass
            ));
        }
    };
    for (m, n) in off_resonance {
        for am in [rat(1), rat(-1)] {
            let sys = lienard(poly(&[(rat(1), n)]), poly(&[(am.clone(), m)]));
            check(&sys, format!("m={m}, n={n}, a_m={am}"));
        }
    }
    for n in 1usize..=4 {
        let m = 2 * n + 1;
        let thr = ratio(1, 4 * (n as i64) + 4);
        let tiny = ratio(1, 1_000_000_000);
        for am in [thr.clone(), &thr + &tiny, &thr - &tiny, rat(1), rat(17)] {
            let sys = lienard(poly(&[(rat(1), n)]), poly(&[(am.clone(), m)]));
            check(&sys, format!("m={m}, n={n}, epsilon={am}"));
        }
    }
    assert_eq!(combos, 60);
    gate(
        6,
        problems.is_empty(),
        &if problems.is_empty() {
            "connection_at_infinity == not condition (iii) on all 60 combos".to_string()
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn criterion_7_boundedness_probe() {
    let cfg = IntegratorConfig::default();
    let sys = lienard(poly(&[(rat(1), 2)]), poly(&[(rat(1), 1), (rat(1), 5)]));
    let rev = time_reversed(&sys);
    let mut problems = Vec::new();

    let dir = boundedness_direction(&BranchContext::new(sys.clone()).unwrap()).unwrap();
    if dir != Boundedness::PositivelyBounded {
        problems.push(format!("forward direction {dir:?}"));
    }
    let dir_rev = boundedness_direction(&BranchContext::new(rev.clone()).unwrap()).unwrap();
    if dir_rev != Boundedness::NegativelyBounded {
        problems.push(format!("reversed direction {dir_rev:?}"));
    }

    let t0 = Instant::now();
    let fwd = escape_probe(&sys, 100.0, 20, &cfg).expect("probe completes");
    let fwd_time = t0.elapsed();
    if !fwd.bounded || fwd.radii.len() != 20 {
        problems.push(format!("forward probe bounded={} crossings={}", fwd.bounded, fwd.radii.len()));
    }
    if fwd_time >= PROBE_BUDGET {
        problems.push(format!("forward probe took {fwd_time:?}"));
    }

    let t1 = Instant::now();
    let bwd = escape_probe(&rev, 100.0, 20, &cfg).expect("probe completes");
    let bwd_time = t1.elapsed();
    if bwd.bounded {
        problems.push("reversed probe did not escape".to_string());
    }
    if bwd_time >= PROBE_BUDGET {
        problems.push(format!("reversed probe took {bwd_time:?}"));
    }

    gate(
        7,
        problems.is_empty(),
        &if problems.is_empty() {
            format!(
                "positively/negatively bounded as expected; probes {fwd_time:?} forward (bounded), {bwd_time:?} reversed (escapes)"
            )
        } else {
            problems.join("; ")
        },
    );
}

/// Random restoring force with odd leading behavior around the origin and at
/// infinity, filtered through the exact condition-(i) test; not necessarily
/// odd as a function.
fn random_condition_i_g(rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let mut terms = vec![(ratio(rng.gen_range(1..=8), 4), 1)];
        for k in 2..=4usize {
            let c = rng.gen_range(-6..=6i64);
            if c != 0 {
                terms.push((ratio(c, 8), k));
            }
        }
        terms.push((ratio(rng.gen_range(1..=8), 4), 5));
        let g = poly(&terms);
        let probe = lienard(poly(&[(rat(1), 1)]), g.clone());
        if check_condition_i(&probe).verdict {
            return g;
        }
    }
}

#[test]
fn criterion_8_branch_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb4a9c4e5);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for s in 0..20 {
        let g = random_condition_i_g(&mut rng);
        let f = poly(&[(ratio(rng.gen_range(-8..=8i64).max(1), 4), rng.gen_range(1..=3))]);
        let ctx = BranchContext::new(lienard(f, g)).expect("condition (i) by construction");
        let c_max = ctx.c_max();
        for _ in 0..1000 {
            let level = rng.gen_range(1e-12..=1.0) * c_max;
            let x_pos = invert_branch(&ctx, level, Side::Pos).expect("level in range");
            let x_neg = invert_branch(&ctx, level, Side::Neg).expect("level in range");
            let g_int = ctx.g_integral();
            for (x, side) in [(x_pos, "pos"), (x_neg, "neg")] {
                let back = g_int.eval_f64(x);
                let err = (back - level).abs() / (1.0 + level.abs());
                worst = worst.max(err);
                if err > ROUNDTRIP_TOL {
                    problems.push(format!(
                        "system {s} {side}: G(invert({level:.3e})) off by {err:.3e}"
                    ));
                }
            }
            let w1 = ctx.w_of_x(x_neg);
            let w2 = ctx.w_of_x(x_pos);
            let werr = (w1 - w2).abs() / (1.0 + w2.abs());
            let lerr = (ctx.w_to_level(w2) - level).abs() / (1.0 + level.abs());
            worst = worst.max(werr).max(lerr);
            if werr > ROUNDTRIP_TOL || lerr > ROUNDTRIP_TOL {
                problems.push(format!(
                    "system {s}: w mismatch {werr:.3e} / level mismatch {lerr:.3e} at {level:.3e}"
                ));
            }
        }
        if problems.len() > 8 {
            break;
        }
    }
    gate(
        8,
        problems.is_empty(),
        &if problems.is_empty() {
            format!("20 systems x 1000 levels round-trip, worst residual {worst:.3e} <= {ROUNDTRIP_TOL:e}")
        } else {
            problems.join("; ")
        },
    );
}

fn polyline_endpoint_gaps(svg: &str) -> Vec<f64> {
    let mut gaps = Vec::new();
    for line in svg.lines() {
        if let Some(i) = line.find("points=\"") {
            let rest = &line[i + 8..];
            let j = rest.find('"').unwrap();
            let pts: Vec<(f64, f64)> = rest[..j]
                .split(' ')
                .map(|p| {
                    let (a, b) = p.split_once(',').unwrap();
                    (a.parse().unwrap(), b.parse().unwrap())
                })
                .collect();
            let (a, b) = (pts[0], *pts.last().unwrap());
            gaps.push(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
        }
    }
    gaps
}

#[test]
fn criterion_9_renderer_determinism_and_closure() {
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for a in [ratio(-19, 10), rat(0), rat(5)] {
        for b in [rat(-3), ratio(1, 10), rat(2)] {
            let g = poly(&[(rat(1), 1), (a.clone(), 3), (rat(1), 5)]);
            let f = poly(&[(b.clone(), 1)]);
            let spec = PortraitSpec::new(lienard(f, g), vec![0.5, 1.0, 2.0, 4.0], 400, true)
                .expect("valid spec");
            let svg = render_portrait(&spec);
            if svg != render_portrait(&spec) {
                problems.push(format!("a={a}, b={b}: nondeterministic SVG"));
            }
            let gaps = polyline_endpoint_gaps(&svg);
            if gaps.len() != 4 {
                problems.push(format!("a={a}, b={b}: {} orbits drawn", gaps.len()));
            }
            for gap in gaps {
                worst = worst.max(gap);
                if gap > PX_CLOSE {
                    problems.push(format!("a={a}, b={b}: orbit gap {gap:.3} px"));
                }
            }
        }
    }
    gate(
        9,
        problems.is_empty(),
        &if problems.is_empty() {
            format!("9 portraits byte-stable, 36 closed orbits, worst endpoint gap {worst:.4} px")
        } else {
            problems.join("; ")
        },
    );
}
