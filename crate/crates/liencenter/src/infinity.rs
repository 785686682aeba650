//! Equilibria at infinity: the (m, n, epsilon) normalization, the tabulated
//! classification of boundary equilibria on the Poincare disc, and the two
//! projective chart vector fields used for numerical checks near the
//! boundary.
//!
//! The classification table is encoded as data, keyed on the degree regime,
//! the parities of m and n, and exact rational comparisons of epsilon against
//! 0, 1/(4n+4) and +-1. It is never re-derived numerically.

use crate::criteria::LienardSystem;
use crate::poly::{rat, ratio, Rational};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum InfinityError {
    #[error("epsilon = 0 cannot occur while a_m and b_n are nonzero")]
    ZeroEpsilon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    MLessNPlus1,
    MEqualsNPlus1,
    Between,
    MEquals2NPlus1,
    MGreater2NPlus1,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::MLessNPlus1 => "m<n+1",
            Regime::MEqualsNPlus1 => "m=n+1",
            Regime::Between => "n+1<m<2n+1",
            Regime::MEquals2NPlus1 => "m=2n+1",
            Regime::MGreater2NPlus1 => "m>2n+1",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Degree data of the system after the sign normalization b_n > 0.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedIndices {
    pub m: usize,
    pub n: usize,
    /// a_m/b_n^2 when m = 2n+1, sign(a_m) otherwise. Exact.
    pub epsilon: Rational,
    pub regime: Regime,
    /// (m mod 2, n mod 2).
    pub parities: (u8, u8),
}

/// Classification keys (m, n, epsilon). A negative leading damping
/// coefficient is first removed by (x, y, t) -> (x, -y, -t), which negates f;
/// epsilon only ever sees b_n squared or sign(a_m), so the flip is implicit.
pub fn normalize(sys: &LienardSystem) -> NormalizedIndices {
    let m = sys.m();
    let n = sys.n();
    let regime = if m == 2 * n + 1 {
        Regime::MEquals2NPlus1
    } else if m < n + 1 {
        Regime::MLessNPlus1
    } else if m == n + 1 {
        Regime::MEqualsNPlus1
    } else if m < 2 * n + 1 {
        Regime::Between
    } else {
        Regime::MGreater2NPlus1
    };
    let epsilon = if m == 2 * n + 1 {
        let b_n = sys.b_n();
        sys.a_m() / (&b_n * &b_n)
    } else if sys.a_m().is_positive() {
        rat(1)
    } else {
        rat(-1)
    };
    NormalizedIndices { m, n, epsilon, regime, parities: ((m % 2) as u8, (n % 2) as u8) }
}

/// One boundary equilibrium: its name on the disc, its local classification
/// when the table names one, and its sector structure when the table gives
/// that instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumInfo {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub sectors: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfinityClass {
    pub equilibria: Vec<EquilibriumInfo>,
    pub figure_ref: String,
    pub connection_at_infinity: bool,
}

fn eq(name: &str, kind: &str, sectors: &str) -> EquilibriumInfo {
    EquilibriumInfo { name: name.into(), kind: kind.into(), sectors: sectors.into() }
}

fn row(equilibria: Vec<EquilibriumInfo>, figure: &str, connection: bool) -> InfinityClass {
    InfinityClass {
        equilibria,
        figure_ref: format!("Figure {figure}"),
        connection_at_infinity: connection,
    }
}

const HYP: &str = "one hyperbolic sector";
const ELL: &str = "one elliptic sector";
const ELL_HYP: &str = "one elliptic sector and one hyperbolic sector";
const ELL_2HYP: &str = "one elliptic sector and two hyperbolic sectors";

/// Tabulated boundary behaviour for the given (m, n, epsilon) key. The two
/// rows "m=2n+1, epsilon > 1/(4n+4)" and "m>2n+1, m odd, epsilon=1" are the
/// only ones without an orbit connection at infinity.
pub fn classify_infinity(idx: &NormalizedIndices) -> Result<InfinityClass, InfinityError> {
    let eps = &idx.epsilon;
    if eps.is_zero() {
        return Err(InfinityError::ZeroEpsilon);
    }
    let m_even = idx.parities.0 == 0;
    let n_even = idx.parities.1 == 0;
    let pos = eps.is_positive();
    let out = match idx.regime {
        Regime::MLessNPlus1 => match (m_even, n_even) {
            (true, true) => row(
                vec![
                    eq("I_A+", "saddle", ""),
                    eq("I_A-", "stable node", ""),
                    eq("I_B+", "unstable degenerate node", ""),
                    eq("I_B-", "unstable degenerate node", ""),
                ],
                "4(a)",
                true,
            ),
            (false, true) => {
                if pos {
                    row(
                        vec![
                            eq("I_A+", "saddle", ""),
                            eq("I_A-", "saddle", ""),
                            eq("I_B+", "unstable degenerate node", ""),
                            eq("I_B-", "unstable degenerate node", ""),
                        ],
                        "4(b)",
                        true,
                    )
                } else {
                    row(
                        vec![
                            eq("I_A+", "stable node", ""),
                            eq("I_A-", "stable node", ""),
                            eq("I_B+", "unstable degenerate node", ""),
                            eq("I_B-", "unstable degenerate node", ""),
                        ],
                        "4(c)",
                        true,
                    )
                }
            }
            (true, false) => row(
                vec![
                    eq("I_A+", "saddle", ""),
                    eq("I_A-", "unstable node", ""),
                    eq("I_B+", "", HYP),
                    eq("I_B-", "", ELL),
                ],
                "4(d)",
                true,
            ),
            (false, false) => {
                if pos {
                    row(
                        vec![
                            eq("I_A+", "saddle", ""),
                            eq("I_A-", "saddle", ""),
                            eq("I_B+", "", HYP),
                            eq("I_B-", "", ELL),
                        ],
                        "4(e)",
                        true,
                    )
                } else {
                    row(
                        vec![
                            eq("I_A+", "stable node", ""),
                            eq("I_A-", "unstable node", ""),
                            eq("I_B+", "", HYP),
                            eq("I_B-", "", ELL),
                        ],
                        "4(f)",
                        true,
                    )
                }
            }
        },
        Regime::MEqualsNPlus1 => {
            if n_even {
                if pos {
                    row(
                        vec![
                            eq("I_B+", "unstable degenerate node", ""),
                            eq("I_B-", "unstable degenerate node", ""),
                            eq("I_D+", "saddle", ""),
                            eq("I_D-", "saddle", ""),
                        ],
                        "5(a)",
                        true,
                    )
                } else {
                    row(
                        vec![
                            eq("I_B+", "unstable degenerate node", ""),
                            eq("I_B-", "unstable degenerate node", ""),
                            eq("I_C+", "stable node", ""),
                            eq("I_C-", "stable node", ""),
                        ],
                        "5(b)",
                        true,
                    )
                }
            } else {
                row(
                    vec![
                        eq("I_B+", "", HYP),
                        eq("I_B-", "", ELL),
                        eq("I_D+", "saddle", ""),
                        eq("I_D-", "unstable node", ""),
                    ],
                    "5(c)",
                    true,
                )
            }
        }
        Regime::Between => match (m_even, n_even) {
            (true, true) => row(
                vec![eq("I_B+", "unstable degenerate node", ""), eq("I_B-", "", ELL_HYP)],
                "6(a)",
                true,
            ),
            (false, true) => {
                if pos {
                    row(
                        vec![eq("I_B+", "saddle-node", ""), eq("I_B-", "saddle-node", "")],
                        "6(b)",
                        true,
                    )
                } else {
                    row(vec![eq("I_B+", "", ELL), eq("I_B-", "", ELL)], "6(c)", true)
                }
            }
            // The source table names I_B+ twice in this row; kept verbatim.
            (true, false) => row(
                vec![eq("I_B+", "unstable degenerate node", ""), eq("I_B+", "", ELL_HYP)],
                "6(d)",
                true,
            ),
            (false, false) => {
                if pos {
                    row(vec![eq("I_B+", "", HYP), eq("I_B-", "", ELL_2HYP)], "6(e)", true)
                } else {
                    row(vec![eq("I_B+", "", ELL), eq("I_B-", "", ELL)], "6(f)", true)
                }
            }
        },
        Regime::MEquals2NPlus1 => {
            let threshold = ratio(1, 4 * idx.n as i64 + 4);
            if !pos {
                row(vec![eq("I_B+", "", ELL), eq("I_B-", "", ELL)], "7(a)", true)
            } else if *eps > threshold {
                row(vec![eq("I_B+", "", HYP), eq("I_B-", "", HYP)], "7(f)", false)
            } else if n_even {
                if *eps < threshold {
                    row(
                        vec![eq("I_B+", "saddle-node", ""), eq("I_B-", "saddle-node", "")],
                        "7(b)",
                        true,
                    )
                } else {
                    row(
                        vec![eq("I_B+", "saddle-node", ""), eq("I_B-", "saddle-node", "")],
                        "7(c)",
                        true,
                    )
                }
            } else if *eps < threshold {
                row(vec![eq("I_B+", "", HYP), eq("I_B-", "", ELL_2HYP)], "7(d)", true)
            } else {
                row(vec![eq("I_B+", "", HYP), eq("I_B-", "", ELL_2HYP)], "7(e)", true)
            }
        }
        Regime::MGreater2NPlus1 => {
            if m_even {
                row(
                    vec![
                        eq("I_B+", "stable degenerate node", ""),
                        eq("I_B-", "unstable degenerate node", ""),
                    ],
                    "8(a)",
                    true,
                )
            } else if pos {
                row(vec![eq("I_B+", "", HYP), eq("I_B-", "", HYP)], "8(b)", false)
            } else {
                row(vec![eq("I_B+", "", ELL), eq("I_B-", "", ELL)], "8(c)", true)
            }
        }
    };
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// x = 1/z, y = u/z: covers the directions meeting y = 0.
    U,
    /// x = v/z, y = 1/z: covers the vertical directions.
    V,
}

#[derive(Clone, Copy, Debug)]
struct Term {
    c: f64,
    p: u32,
    q: u32,
}

/// Polynomial vector field in one projective chart after rescaling time by
/// z^(d-1), d = max(m, n+1). Finite on the whole closed chart domain.
#[derive(Clone, Debug)]
pub struct ChartField {
    pub chart: Chart,
    d: usize,
    comp1: Vec<Term>,
    comp2: Vec<Term>,
}

impl ChartField {
    /// Compactification degree d = max(m, n+1).
    pub fn degree(&self) -> usize {
        self.d
    }

    /// (du/dtau, dz/dtau) in chart U, (dv/dtau, dz/dtau) in chart V, at the
    /// chart point (w, z).
    pub fn eval(&self, w: f64, z: f64) -> (f64, f64) {
        let horner = |terms: &[Term]| {
            terms.iter().map(|t| t.c * w.powi(t.p as i32) * z.powi(t.q as i32)).sum()
        };
        (horner(&self.comp1), horner(&self.comp2))
    }
}

/// Push x' = y, y' = -g - f y through the chart map and multiply by z^(d-1)
/// (time reversed in chart U so that its flow moves with du/dtau = +1 on
/// z = 0 for the leading monomials).
pub fn chart_field(sys: &LienardSystem, chart: Chart) -> ChartField {
    let d = sys.m().max(sys.n() + 1);
    let a: Vec<(usize, f64)> = sys
        .g()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_f64().unwrap()))
        .collect();
    let b: Vec<(usize, f64)> = sys
        .f()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_f64().unwrap()))
        .collect();
    let mut comp1 = Vec::new();
    let mut comp2 = Vec::new();
    match chart {
        Chart::U => {
            // du/dtau = sum a_i z^(d-i) + u sum b_i z^(d-1-i) + u^2 z^(d-1)
            for (i, c) in &a {
                comp1.push(Term { c: *c, p: 0, q: (d - i) as u32 });
            }
            for (i, c) in &b {
                comp1.push(Term { c: *c, p: 1, q: (d - 1 - i) as u32 });
            }
            comp1.push(Term { c: 1.0, p: 2, q: (d - 1) as u32 });
            // dz/dtau = u z^d
            comp2.push(Term { c: 1.0, p: 1, q: d as u32 });
        }
        Chart::V => {
            // dv/dtau = z^(d-1) + sum a_i v^(i+1) z^(d-i) + sum b_i v^(i+1) z^(d-1-i)
            comp1.push(Term { c: 1.0, p: 0, q: (d - 1) as u32 });
            for (i, c) in &a {
                comp1.push(Term { c: *c, p: (i + 1) as u32, q: (d - i) as u32 });
            }
            for (i, c) in &b {
                comp1.push(Term { c: *c, p: (i + 1) as u32, q: (d - 1 - i) as u32 });
            }
            // dz/dtau = sum a_i v^i z^(d+1-i) + sum b_i v^i z^(d-i)
            for (i, c) in &a {
                comp2.push(Term { c: *c, p: *i as u32, q: (d + 1 - i) as u32 });
            }
            for (i, c) in &b {
                comp2.push(Term { c: *c, p: *i as u32, q: (d - i) as u32 });
            }
        }
    }
    ChartField { chart, d, comp1, comp2 }
}
