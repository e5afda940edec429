//! Twelve bundled example arrangements with their published invariants, and
//! a verification harness that recomputes every invariant from scratch and
//! compares.
//!
//! Each check reports one of four statuses:
//!
//! - [`Status::Pass`] / [`Status::Fail`]: the recomputed value agrees (or
//!   not) with the published one;
//! - [`Status::Discrepancy`]: the recomputed value is internally consistent
//!   but contradicts a published figure — the detail explains which side the
//!   evidence favours; these are reported, never silently turned green;
//! - [`Status::Skipped`]: no computation route exists for this arrangement
//!   (e.g. rank data published without a derivation we can reproduce).

use crate::arrangement::{
    compute_lattice, multiplicities, poincare_polynomial, Arrangement, ArrangementFile,
};
use crate::counting::{
    conjectural_ranks, delta_metabelian_from_profile, lcs_fibertype, subgroup_counts,
};
use crate::covers::{chern_numbers, chern_numbers_pencil, b1_congruence, HirzebruchEngine};
use crate::jumpingloci::{
    beta_invariants, nu_invariants, resonance_components, DepthProfile, JumpingLoci,
};
use crate::{Error, Result};
use num::BigInt;
use std::collections::BTreeMap;

/// Names of the bundled arrangements, in increasing order of size.
pub const NAMES: [&str; 12] = [
    "pencil", "x3", "braid", "x2", "nonfano", "deletedb3", "maclane", "b3", "pappus",
    "nonpappus", "ziegler1", "ziegler2",
];

/// The bundled JSON definition of a corpus arrangement.
pub fn bundled_json(name: &str) -> Option<&'static str> {
    Some(match name {
        "pencil" => include_str!("../data/pencil.json"),
        "x3" => include_str!("../data/x3.json"),
        "braid" => include_str!("../data/braid.json"),
        "x2" => include_str!("../data/x2.json"),
        "nonfano" => include_str!("../data/nonfano.json"),
        "deletedb3" => include_str!("../data/deletedb3.json"),
        "maclane" => include_str!("../data/maclane.json"),
        "b3" => include_str!("../data/b3.json"),
        "pappus" => include_str!("../data/pappus.json"),
        "nonpappus" => include_str!("../data/nonpappus.json"),
        "ziegler1" => include_str!("../data/ziegler1.json"),
        "ziegler2" => include_str!("../data/ziegler2.json"),
        _ => return None,
    })
}

/// Load a corpus arrangement by name.
pub fn load(name: &str) -> Result<Arrangement> {
    let text = bundled_json(name)
        .ok_or_else(|| Error::Unsupported(format!("unknown corpus arrangement `{name}`")))?;
    ArrangementFile::from_json(text)?.to_arrangement()
}

// ===========================================================================
// Check results
// ===========================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Recomputation is internally consistent but contradicts a published
    /// value; see the detail text.
    Discrepancy,
    /// No computation route; nothing was verified.
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
            Status::Skipped => "SKIPPED",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub arrangement: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(arrangement: &str, check: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check { arrangement: arrangement.to_string(), check: check.into(), status, detail: detail.into() }
    }
}

// ===========================================================================
// Golden data
// ===========================================================================

/// How the lower-central-series ranks φ_k of an arrangement are checked.
#[derive(Debug, Clone, Copy)]
pub enum PhiData {
    /// Fiber-type: φ_k = Σ_i w_k(d_i) from the exponents; compared against
    /// the published list.
    FiberType { literal: &'static [i64] },
    /// Non-fiber-type with the resonance formula φ_k = Σ_r h_r·w_k(r)
    /// applicable for k ≥ 4; `disagree_from` marks the first k where the
    /// published list departs from the formula (reported as a discrepancy).
    Conjectural { literal: &'static [i64], disagree_from: Option<u64> },
    /// Published list only; no independent computation route.
    LiteralOnly(&'static [i64]),
}

/// Published invariants of one corpus arrangement. Profile-valued data is
/// stored as closed forms in the prime so every tested prime is covered.
pub struct Golden {
    pub name: &'static str,
    pub n: usize,
    pub s: usize,
    /// Multiplicity profile (r, m_r).
    pub m: &'static [(usize, usize)],
    pub exponents: Option<&'static [u64]>,
    /// Poincaré polynomial coefficients [1, n, b₂, b₃].
    pub poincare: [i64; 4],
    /// Positive-depth profile of ν_{p,d} (projective counts).
    pub nu: fn(u64) -> Vec<(usize, u64)>,
    /// The published blanket ν formula evaluated at p = 2, when it differs
    /// from the verified value (the published tables omit p = 2 exceptions
    /// for ν in a few places even while listing the matching β exceptions).
    pub nu2_published: Option<&'static [(usize, u64)]>,
    /// Positive-depth profile of β^{(q)}_{p,d}.
    pub beta: fn(u64, u64) -> Vec<(usize, u64)>,
    /// b₁ of the congruence cover X_N.
    pub b1_x: fn(u64) -> BigInt,
    /// b₁ of the Hirzebruch cover M_N (N ≥ 2); None when not computable.
    pub b1_m: Option<fn(u64) -> BigInt>,
    /// Chern numbers (c₁², c₂) of the minimal desingularization of M_N.
    pub chern: fn(u64) -> (BigInt, BigInt),
    pub delta_s3: i64,
    pub delta_a4: i64,
    /// Published δ_{A₄} when it differs from the profile-derived value.
    pub delta_a4_published: Option<i64>,
    pub a2: i64,
    pub a3_normal: i64,
    pub a3: i64,
    /// Published Chen ranks θ_1, θ_2, … (as far as published).
    pub theta: &'static [i64],
    pub phi: PhiData,
    /// Resonance component dimension profile h_r at `generic_p`.
    pub h: &'static [(usize, u64)],
    /// Prime used for the resonance decomposition check.
    pub generic_p: u64,
}

fn bi(v: i128) -> BigInt {
    BigInt::from(v)
}

/// (p^k − 1)/(p − 1)
fn projcount(p: u64, k: u32) -> u64 {
    (p.pow(k) - 1) / (p - 1)
}

pub fn golden(name: &str) -> Option<Golden> {
    Some(match name {
        "pencil" => Golden {
            name: "pencil",
            n: 5,
            s: 1,
            m: &[(5, 1)],
            exponents: Some(&[1, 4]),
            poincare: [1, 5, 4, 0],
            nu: |p| vec![(3, projcount(p, 4))],
            beta: |p, _| vec![(3, projcount(p, 4))],
            nu2_published: None,
            b1_x: |nn| {
                let nn = bi(nn as i128);
                bi(3) * &nn * &nn * &nn * &nn + 2
            },
            b1_m: Some(|nn| crate::covers::pencil_b1(nn, 5).expect("pencil b1 closed form")),
            chern: |nn| {
                let nn = nn as i128;
                (bi(nn * nn * (nn - 5) * (3 * nn - 5)), bi(-6 * nn.pow(4) + nn.pow(3) + 10))
            },
            delta_s3: 195,
            delta_a4: 840,
            delta_a4_published: None,
            a2: 31,
            a3_normal: 121,
            a3: 706,
            theta: &[5, 6, 20, 45],
            phi: PhiData::FiberType { literal: &[5, 6, 20, 60] },
            h: &[(4, 1)],
            generic_p: 7,
        },
        "x3" => Golden {
            name: "x3",
            n: 6,
            s: 9,
            m: &[(2, 6), (3, 3)],
            exponents: None,
            poincare: [1, 6, 12, 7],
            nu: |p| vec![(1, 3 * (p + 1))],
            beta: |p, _| vec![(1, 3 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi(3) * (bi((nn * nn) as i128) + 1),
            b1_m: Some(|nn| bi(3 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (bi(6 * nn.pow(3) * (nn - 2).pow(2)), bi(3 * nn.pow(3) * (nn * nn - 4 * nn + 5)))
            },
            delta_s3: 9,
            delta_a4: 12,
            delta_a4_published: None,
            a2: 63,
            a3_normal: 364,
            a3: 391,
            theta: &[6, 3, 6, 9],
            phi: PhiData::Conjectural {
                literal: &[6, 3, 6, 9, 18, 27, 90, 150],
                disagree_from: Some(7),
            },
            h: &[(2, 3)],
            generic_p: 5,
        },
        "braid" => Golden {
            name: "braid",
            n: 6,
            s: 7,
            m: &[(2, 3), (3, 4)],
            exponents: Some(&[1, 2, 3]),
            poincare: [1, 6, 11, 6],
            nu: |p| vec![(1, 5 * (p + 1))],
            beta: |p, _| vec![(1, 5 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi((5 * nn * nn + 1) as i128),
            b1_m: Some(|nn| bi(5 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (bi(5 * nn.pow(3) * (nn - 2).pow(2)), bi(nn.pow(3) * (2 * nn * nn - 10 * nn + 15)))
            },
            delta_s3: 15,
            delta_a4: 20,
            delta_a4_published: None,
            a2: 63,
            a3_normal: 364,
            a3: 409,
            theta: &[6, 4, 10, 15],
            phi: PhiData::FiberType { literal: &[6, 4, 10, 21] },
            h: &[(2, 5)],
            generic_p: 5,
        },
        "x2" => Golden {
            name: "x2",
            n: 7,
            s: 11,
            m: &[(2, 6), (3, 5)],
            exponents: None,
            poincare: [1, 7, 16, 10],
            nu: |p| vec![(1, 5 * (p + 1))],
            beta: |p, _| vec![(1, 5 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi((5 * nn * nn + 2) as i128),
            b1_m: Some(|nn| bi(5 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (
                    bi(nn.pow(4) * (11 * nn * nn - 36 * nn + 29)),
                    bi(nn.pow(4) * (5 * nn * nn - 18 * nn + 21)),
                )
            },
            delta_s3: 15,
            delta_a4: 20,
            delta_a4_published: None,
            a2: 127,
            a3_normal: 1093,
            a3: 1138,
            theta: &[7, 5, 10, 15, 20],
            phi: PhiData::Conjectural {
                literal: &[7, 5, 10, 15, 30, 45, 90, 150],
                disagree_from: None,
            },
            h: &[(2, 5)],
            generic_p: 5,
        },
        "nonfano" => Golden {
            name: "nonfano",
            n: 7,
            s: 9,
            m: &[(2, 3), (3, 6)],
            exponents: None,
            poincare: [1, 7, 15, 9],
            nu: |p| {
                if p == 2 {
                    vec![(1, 24), (2, 1)]
                } else {
                    vec![(1, 9 * (p + 1))]
                }
            },
            beta: |p, _| {
                if p == 2 {
                    vec![(1, 24), (2, 1)]
                } else {
                    vec![(1, 9 * (p + 1))]
                }
            },
            nu2_published: None,
            b1_x: |nn| {
                let v = 9 * (nn * nn) as i128;
                bi(if nn % 2 == 0 { v - 3 } else { v - 2 })
            },
            b1_m: Some(|nn| bi(9 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (
                    bi(nn.pow(4) * (10 * nn * nn - 32 * nn + 25)),
                    bi(nn.pow(4) * (4 * nn * nn - 16 * nn + 21)),
                )
            },
            delta_s3: 28,
            delta_a4: 36,
            delta_a4_published: None,
            a2: 127,
            a3_normal: 1093,
            a3: 1177,
            theta: &[7, 6, 17, 27],
            phi: PhiData::LiteralOnly(&[7, 6, 17, 42, 123, 341, 1041]),
            h: &[(2, 9)],
            generic_p: 5,
        },
        "deletedb3" => Golden {
            name: "deletedb3",
            n: 8,
            s: 11,
            m: &[(2, 4), (3, 6), (4, 1)],
            exponents: Some(&[1, 3, 4]),
            poincare: [1, 8, 19, 12],
            nu: |p| {
                if p == 2 {
                    vec![(1, 27), (2, 9)]
                } else {
                    vec![(1, 11 * (p + 1)), (2, p * p + p + 1)]
                }
            },
            beta: |p, q| match (p, q) {
                (2, 3) => vec![(1, 27), (2, 9)],
                (3, 2) => vec![(1, 45), (2, 13)],
                (5, 2) => vec![(1, 66), (2, 31)],
                _ => vec![(1, 11 * (p + 1)), (2, p * p + p + 1)],
            },
            nu2_published: Some(&[(1, 33), (2, 7)]),
            b1_x: |nn| {
                let n = nn as i128;
                let v = 2 * n.pow(3) + 11 * n * n;
                bi(if nn % 2 == 0 { v + n - 9 } else { v - 5 })
            },
            b1_m: Some(|nn| {
                let n = nn as i128;
                let extra = match nn % 4 {
                    0 => n - 2,
                    2 => (n - 2) / 2,
                    _ => 0,
                };
                bi((n - 1) * (2 * n * n + 9 * n - 24) + extra)
            }),
            chern: |nn| {
                let nn = nn as i128;
                (
                    bi(nn.pow(5) * (15 * nn * nn - 44 * nn + 31)),
                    bi(2 * nn.pow(5) * (3 * nn * nn - 11 * nn + 13)),
                )
            },
            delta_s3: 63,
            delta_a4: 110,
            delta_a4_published: None,
            a2: 255,
            a3_normal: 3280,
            a3: 3469,
            theta: &[8, 9, 28, 48],
            phi: PhiData::FiberType { literal: &[8, 9, 28, 78] },
            h: &[(2, 11), (3, 1)],
            generic_p: 5,
        },
        "maclane" => Golden {
            name: "maclane",
            n: 8,
            s: 12,
            m: &[(2, 4), (3, 8)],
            exponents: None,
            poincare: [1, 8, 20, 13],
            nu: |p| {
                if p == 3 {
                    vec![(1, 36)]
                } else {
                    vec![(1, 8 * (p + 1))]
                }
            },
            beta: |p, _| vec![(1, 8 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi(8 * (nn * nn) as i128),
            b1_m: None,
            chern: |nn| {
                let nn = nn as i128;
                (
                    bi(nn.pow(5) * (17 * nn * nn - 48 * nn + 32)),
                    bi(nn.pow(5) * (7 * nn * nn - 24 * nn + 28)),
                )
            },
            delta_s3: 24,
            delta_a4: 32,
            delta_a4_published: None,
            a2: 255,
            a3_normal: 3280,
            a3: 3352,
            theta: &[8, 8, 21, 24],
            phi: PhiData::LiteralOnly(&[8, 8, 21, 42, 87, 105]),
            h: &[(2, 8)],
            generic_p: 5,
        },
        "b3" => Golden {
            name: "b3",
            n: 9,
            s: 13,
            m: &[(2, 6), (3, 4), (4, 3)],
            exponents: Some(&[1, 3, 5]),
            poincare: [1, 9, 23, 15],
            nu: |p| {
                if p == 2 {
                    vec![(1, 36), (2, 24)]
                } else {
                    vec![(1, 16 * (p + 1)), (2, 3 * (p * p + p + 1))]
                }
            },
            beta: |p, q| match (p, q) {
                (2, 3) => vec![(1, 36), (2, 24)],
                (3, 2) => vec![(1, 64), (2, 39)],
                _ => vec![(1, 16 * (p + 1)), (2, 3 * (p * p + p + 1))],
            },
            nu2_published: Some(&[(1, 48), (2, 21)]),
            b1_x: |nn| {
                let n = nn as i128;
                let v = 6 * n.pow(3) + 16 * n * n;
                bi(if nn % 2 == 0 { v - 19 } else { v - 13 })
            },
            b1_m: Some(|nn| {
                let n = nn as i128;
                bi(2 * (n - 1) * (3 * n * n + 5 * n - 19))
            }),
            chern: |nn| {
                let nn = nn as i128;
                (
                    bi(2 * nn.pow(6) * (10 * nn * nn - 28 * nn + 19)),
                    bi(2 * nn.pow(6) * (4 * nn * nn - 14 * nn + 15)),
                )
            },
            delta_s3: 132,
            delta_a4: 259,
            delta_a4_published: None,
            a2: 511,
            a3_normal: 9841,
            a3: 10237,
            theta: &[9, 13, 48, 93],
            phi: PhiData::FiberType { literal: &[9, 13, 48, 168] },
            h: &[(2, 16), (3, 3)],
            generic_p: 5,
        },
        "pappus" => Golden {
            name: "pappus",
            n: 9,
            s: 18,
            m: &[(2, 9), (3, 9)],
            exponents: None,
            poincare: [1, 9, 27, 19],
            nu: |p| vec![(1, 10 * (p + 1))],
            beta: |p, _| vec![(1, 10 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi((10 * nn * nn) as i128 - 1),
            b1_m: Some(|nn| bi(10 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (bi(9 * nn.pow(6) * (nn - 1) * (3 * nn - 5)), bi(12 * nn.pow(6) * (nn * nn - 3 * nn + 3)))
            },
            delta_s3: 30,
            delta_a4: 40,
            delta_a4_published: None,
            a2: 511,
            a3_normal: 9841,
            a3: 9931,
            theta: &[9, 9, 20, 30, 50],
            phi: PhiData::Conjectural {
                literal: &[9, 9, 20, 30, 60, 90, 180, 300],
                disagree_from: None,
            },
            h: &[(2, 10)],
            generic_p: 5,
        },
        "nonpappus" => Golden {
            name: "nonpappus",
            n: 9,
            s: 18,
            m: &[(2, 9), (3, 9)],
            exponents: None,
            poincare: [1, 9, 27, 19],
            nu: |p| vec![(1, 9 * (p + 1))],
            beta: |p, _| vec![(1, 9 * (p + 1))],
            nu2_published: None,
            b1_x: |nn| bi((9 * nn * nn) as i128),
            b1_m: Some(|nn| bi(9 * ((nn - 1) * (nn - 2)) as i128)),
            chern: |nn| {
                let nn = nn as i128;
                (bi(9 * nn.pow(6) * (nn - 1) * (3 * nn - 5)), bi(12 * nn.pow(6) * (nn * nn - 3 * nn + 3)))
            },
            delta_s3: 27,
            delta_a4: 36,
            delta_a4_published: None,
            a2: 511,
            a3_normal: 9841,
            a3: 9922,
            theta: &[9, 9, 18, 27, 36],
            phi: PhiData::Conjectural {
                literal: &[9, 9, 18, 27, 54, 81, 162, 270],
                disagree_from: None,
            },
            h: &[(2, 9)],
            generic_p: 5,
        },
        "ziegler1" => ziegler_golden(1),
        "ziegler2" => ziegler_golden(2),
        _ => return None,
    })
}

fn ziegler_golden(which: usize) -> Golden {
    Golden {
        name: if which == 1 { "ziegler1" } else { "ziegler2" },
        n: 13,
        s: 31,
        m: &[(2, 20), (3, 9), (5, 1), (7, 1)],
        exponents: Some(&[1, 6, 6]),
        poincare: [1, 13, 48, 36],
        nu: |p| {
            if p == 2 {
                vec![(1, 69), (2, 4), (3, 15), (5, 63)]
            } else {
                vec![(1, 27 * (p + 1)), (3, projcount(p, 4)), (5, projcount(p, 6))]
            }
        },
        beta: if which == 1 {
            |p, q| match (p, q) {
                (2, 3) => vec![(1, 69), (2, 4), (3, 15), (5, 63)],
                (3, 2) => vec![(1, 111), (3, 40), (5, 364)],
                _ => vec![(1, 27 * (p + 1)), (3, projcount(p, 4)), (5, projcount(p, 6))],
            }
        } else {
            |p, q| match (p, q) {
                (2, 3) => vec![(1, 69), (2, 4), (3, 15), (5, 63)],
                (3, 2) => vec![(1, 110), (3, 40), (5, 364)],
                _ => vec![(1, 27 * (p + 1)), (3, projcount(p, 4)), (5, projcount(p, 6))],
            }
        },
        nu2_published: Some(&[(1, 81), (3, 15), (5, 63)]),
        b1_x: if which == 1 { ziegler1_b1x } else { ziegler2_b1x },
        b1_m: Some(if which == 1 { ziegler1_b1m } else { ziegler2_b1m }),
        chern: |nn| {
            let nn = nn as i128;
            (
                bi(nn.pow(10) * (57 * nn * nn - 140 * nn + 81)),
                bi(nn.pow(10) * (25 * nn * nn - 70 * nn + 59)),
            )
        },
        delta_s3: 7903,
        // Derived from the β^{(2)}_{3,*} profile {1:111/110, 3:40, 5:364}
        // (verified against ν); the published figures 124435/124434 are
        // inconsistent with that profile and flagged as a discrepancy.
        delta_a4: if which == 1 { 125075 } else { 125074 },
        delta_a4_published: Some(if which == 1 { 124435 } else { 124434 }),
        a2: 8191,
        a3_normal: 797161,
        a3: 820870,
        theta: &[13, 30, 140, 336],
        phi: PhiData::FiberType { literal: &[13, 30, 140, 630] },
        h: &[(2, 27), (4, 1), (6, 1)],
        generic_p: 3,
    }
}

fn ziegler_b1x(nn: u64, tau: i128) -> BigInt {
    let n = nn as i128;
    let base = 5 * n.pow(6) + 3 * n.pow(4) + 27 * n * n;
    bi(if nn % 2 == 0 { base + tau * (n - 2) - 26 } else { base - 22 })
}

fn ziegler1_b1x(nn: u64) -> BigInt {
    ziegler_b1x(nn, 3)
}

fn ziegler2_b1x(nn: u64) -> BigInt {
    ziegler_b1x(nn, 2)
}

fn ziegler_b1m(nn: u64, tau: i128) -> BigInt {
    let n = nn as i128;
    let base = (n - 1) * (5 * n.pow(5) - 2 * n.pow(4) + n.pow(3) - 4 * n * n + 23 * n - 58);
    let extra = match nn % 4 {
        0 => tau * (n - 2),
        2 => tau * (n - 2) / 2,
        _ => 0,
    };
    bi(base + extra)
}

fn ziegler1_b1m(nn: u64) -> BigInt {
    ziegler_b1m(nn, 3)
}

fn ziegler2_b1m(nn: u64) -> BigInt {
    ziegler_b1m(nn, 2)
}

// ===========================================================================
// Verification
// ===========================================================================

const ENUM_BUDGET: u64 = 1 << 27;

fn profile_positive(profile: &DepthProfile) -> Vec<(usize, u64)> {
    profile.iter().filter(|&(&d, &c)| d >= 1 && c > 0).map(|(&d, &c)| (d, c)).collect()
}

/// Verify one corpus arrangement; `deep` enables the slower enumerations
/// (β^{(2)}_{5,*}, ν at 5, and the large covering-space checks).
pub fn verify(name: &str, deep: bool) -> Result<Vec<Check>> {
    let g = golden(name)
        .ok_or_else(|| Error::Unsupported(format!("unknown corpus arrangement `{name}`")))?;
    let arr = load(name)?;
    let lat = compute_lattice(&arr)?;
    let mult = multiplicities(&lat, arr.ambient_dim == 3);
    let jl = JumpingLoci::from_arrangement(&arr, Some(7))?;
    let mut out = Vec::new();
    let mut push = |check: &str, status: Status, detail: String| {
        out.push(Check::new(name, check, status, detail));
    };

    // --- lattice -----------------------------------------------------------
    {
        let got_m: Vec<(usize, usize)> = mult.m.iter().map(|(&r, &c)| (r, c)).collect();
        let ok = arr.n == g.n && mult.s == g.s && got_m == g.m;
        push(
            "lattice",
            if ok { Status::Pass } else { Status::Fail },
            format!("n={} s={} m={:?} (expected n={} s={} m={:?})", arr.n, mult.s, got_m, g.n, g.s, g.m),
        );
    }

    // --- Poincaré polynomial -----------------------------------------------
    {
        let mut p = poincare_polynomial(&lat, arr.ambient_dim == 3);
        p.resize(4, 0);
        let ok = p == g.poincare;
        let mut detail = format!("P = {:?} (expected {:?})", p, g.poincare);
        let mut status = if ok { Status::Pass } else { Status::Fail };
        if let Some(exps) = g.exponents {
            // Fiber-type exponents must factor the Poincaré polynomial:
            // P(t) = ∏(1 + dᵢt) (the cone direction contributes the d = 1).
            let mut prod = vec![1i64];
            for &d in exps {
                let mut next = vec![0i64; prod.len() + 1];
                for (i, &c) in prod.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] += c * d as i64;
                }
                prod = next;
            }
            prod.resize(4, 0);
            if prod != p {
                status = Status::Fail;
                detail.push_str(&format!("; exponent factorization {prod:?} ≠ P"));
            } else {
                detail.push_str(&format!("; factors as ∏(1+dᵢt), d = {:?}∪{{1}}", exps));
            }
        }
        push("poincare", status, detail);
    }

    // --- ν invariants -------------------------------------------------------
    let mut nu_primes = vec![2u64, 3];
    if deep && g.n <= 9 {
        nu_primes.push(5);
    }
    for &p in &nu_primes {
        let prof = nu_invariants(&jl, p, ENUM_BUDGET)?;
        let got = profile_positive(&prof);
        let want = (g.nu)(p);
        push(
            &format!("nu p={p}"),
            if got == want { Status::Pass } else { Status::Fail },
            format!("ν_{{{p},d}} = {:?} (expected {:?})", got, want),
        );
    }
    if let Some(published) = g.nu2_published {
        push(
            "nu p=2 published",
            Status::Discrepancy,
            format!(
                "the published blanket ν formula gives {:?} at p = 2, but both the mod-2 \
                 resonance stratification and the index-2 kernel-homology count give {:?} \
                 (matching the published β exception at p = 2)",
                published,
                (g.nu)(2)
            ),
        );
    }
    if matches!(name, "nonfano" | "deletedb3" | "b3" | "ziegler1" | "ziegler2") {
        // Independent oracle for ν_{2,d}: count index-2 subgroups directly by
        // the mod-2 Betti number of their kernels.
        let pres = crate::braidgroup::group_presentation(&arr, Some(7))?;
        let mut profile: BTreeMap<usize, u64> = BTreeMap::new();
        let mut ok = true;
        for mask in 1u64..(1 << g.n) {
            let row: Vec<i64> = (0..g.n).map(|i| ((mask >> i) & 1) as i64).collect();
            let kh = crate::foxcalc::kernel_homology(&pres, &[row], &[2], 1 << 20)?;
            let two = BigInt::from(2);
            let b1_mod2 = kh.free_rank
                + kh.torsion.iter().filter(|t| (*t % &two) == BigInt::from(0)).count();
            if b1_mod2 < g.n {
                ok = false;
                break;
            }
            *profile.entry(b1_mod2 - g.n).or_insert(0) += 1;
        }
        let got: Vec<(usize, u64)> =
            profile.iter().filter(|&(&d, _)| d >= 1).map(|(&d, &c)| (d, c)).collect();
        let want = (g.nu)(2);
        push(
            "nu p=2 kernel oracle",
            if ok && got == want { Status::Pass } else { Status::Fail },
            format!("index-2 kernel b₁ mod 2 jump profile = {:?} (expected {:?})", got, want),
        );
    }

    // --- β invariants (torsion characteristic varieties) --------------------
    let mut beta_pairs = vec![(2u64, 3u64), (3, 2)];
    if deep && g.n <= 9 {
        beta_pairs.push((5, 2));
    }
    let mut beta23: Option<DepthProfile> = None;
    let mut beta32: Option<DepthProfile> = None;
    for &(p, q) in &beta_pairs {
        let prof = beta_invariants(&jl, p, q, ENUM_BUDGET)?;
        let got = profile_positive(&prof);
        let want = (g.beta)(p, q);
        push(
            &format!("beta p={p} q={q}"),
            if got == want { Status::Pass } else { Status::Fail },
            format!("β^{{({q})}}_{{{p},d}} = {:?} (expected {:?})", got, want),
        );
        if (p, q) == (2, 3) {
            beta23 = Some(prof);
        } else if (p, q) == (3, 2) {
            beta32 = Some(prof);
        }
    }

    // --- congruence covers ---------------------------------------------------
    let max_nx = if g.n >= 13 { 3 } else { 4 };
    for nn in 1..=max_nx {
        let got = b1_congruence(&jl, nn, ENUM_BUDGET)?;
        let want = (g.b1_x)(nn);
        push(
            &format!("b1_x N={nn}"),
            if BigInt::from(got) == want { Status::Pass } else { Status::Fail },
            format!("b₁(X_{nn}) = {got} (expected {want})"),
        );
    }

    // --- Hirzebruch covers ----------------------------------------------------
    match g.b1_m {
        None => push(
            "b1_m",
            Status::Skipped,
            "no sub-arrangement route for the covering-surface b₁ here (braid monodromy is \
             externally supplied)"
                .into(),
        ),
        Some(f) => {
            let max_nm = if g.n >= 13 {
                if deep { 3 } else { 0 }
            } else {
                4
            };
            if max_nm < 2 {
                push("b1_m", Status::Skipped, "covering-surface b₁ only checked in deep mode for n=13".into());
            }
            for nn in 2..=max_nm {
                let want = f(nn);
                match HirzebruchEngine::new(&arr, Some(7)).and_then(|mut e| e.b1(nn, ENUM_BUDGET)) {
                    Ok(got) => push(
                        &format!("b1_m N={nn}"),
                        if BigInt::from(got) == want { Status::Pass } else { Status::Fail },
                        format!("b₁(M_{nn}) = {got} (expected {want})"),
                    ),
                    Err(Error::Budget(msg)) => {
                        push(&format!("b1_m N={nn}"), Status::Skipped, format!("budget: {msg}"))
                    }
                    Err(e) => push(&format!("b1_m N={nn}"), Status::Fail, format!("error: {e}")),
                }
            }
        }
    }

    // --- Chern numbers ---------------------------------------------------------
    for nn in 1..=5u64 {
        let got = if name == "pencil" {
            chern_numbers_pencil(g.n, nn)?
        } else {
            chern_numbers(&mult, g.n, nn)?
        };
        let want = (g.chern)(nn);
        push(
            &format!("chern N={nn}"),
            if got == want { Status::Pass } else { Status::Fail },
            format!("(c₁², c₂) = ({}, {}) (expected ({}, {}))", got.0, got.1, want.0, want.1),
        );
    }

    // --- Hall invariants & subgroup counts --------------------------------------
    {
        let b23 = match beta23 {
            Some(p) => p,
            None => beta_invariants(&jl, 2, 3, ENUM_BUDGET)?,
        };
        let b32 = match beta32 {
            Some(p) => p,
            None => beta_invariants(&jl, 3, 2, ENUM_BUDGET)?,
        };
        let ds3 = delta_metabelian_from_profile(&b23, 2, 3)?;
        let da4 = delta_metabelian_from_profile(&b32, 3, 2)?;
        let ok = ds3 == BigInt::from(g.delta_s3) && da4 == BigInt::from(g.delta_a4);
        push(
            "hall deltas",
            if ok { Status::Pass } else { Status::Fail },
            format!(
                "δ_S₃ = {ds3} (expected {}), δ_A₄ = {da4} (expected {})",
                g.delta_s3, g.delta_a4
            ),
        );
        if let Some(published) = g.delta_a4_published {
            push(
                "hall delta_a4 published",
                Status::Discrepancy,
                format!(
                    "published δ_A₄ = {published} is inconsistent with the verified \
                     β^{{(2)}}_{{3,d}} profile, which forces δ_A₄ = {da4} by the metabelian \
                     count formula; the profile also matches ν and the published δ_S₃"
                ),
            );
        }
        let report = subgroup_counts(g.n, ds3, da4);
        let ok = report.a2 == BigInt::from(g.a2)
            && report.a3 == BigInt::from(g.a3)
            && report.normal[1].known() == Some(&BigInt::from(g.a3_normal));
        push(
            "hall subgroup counts",
            if ok { Status::Pass } else { Status::Fail },
            format!(
                "a₂ = {} (expected {}), a₃ = {} (expected {}), a₃^◁ = {:?} (expected {})",
                report.a2, g.a2, report.a3, g.a3, report.normal[1].known(), g.a3_normal
            ),
        );
    }

    // --- resonance decomposition --------------------------------------------------
    {
        let dec = resonance_components(&jl, &lat, g.generic_p, ENUM_BUDGET)?;
        let got: Vec<(usize, u64)> = dec.h_tally().into_iter().map(|(r, c)| (r, c as u64)).collect();
        let ok = got == g.h && dec.unabsorbed.is_empty();
        push(
            &format!("resonance p={}", g.generic_p),
            if ok { Status::Pass } else { Status::Fail },
            format!(
                "h = {:?} (expected {:?}), {} unabsorbed points",
                got,
                g.h,
                dec.unabsorbed.len()
            ),
        );
        if name == "nonfano" {
            // Over 𝔽₂ the six local components are joined by an essential
            // 3-dimensional component Υ. A blind greedy decomposition is
            // ill-posed over 𝔽₂ (R₁ contains 2-dimensional subspaces that
            // straddle several components), so verify the published
            // decomposition directly: each component lies in R₁, is maximal
            // there, and together they cover every 𝔽₂ point of R₁.
            let in_r1 = |m: u64| {
                let v: Vec<u64> = (0..7).map(|i| (m >> i) & 1).collect();
                jl.lin_rank_mod_p(&v, 2) < 6
            };
            let pts: Vec<u64> = (1u64..(1 << 7)).filter(|&m| in_r1(m)).collect();
            let to_mask = |v: &[u64]| v.iter().enumerate().fold(0u64, |a, (i, &x)| a | (x << i));
            let span = |basis: &[u64]| -> Vec<u64> {
                (1u64..(1 << basis.len()))
                    .map(|c| {
                        basis
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| (c >> i) & 1 == 1)
                            .fold(0u64, |a, (_, &b)| a ^ b)
                    })
                    .collect()
            };
            let mut comps: Vec<Vec<u64>> = lat
                .flats
                .iter()
                .filter(|f| f.len() == 3)
                .map(|f| vec![(1 << f[0]) | (1 << f[1]), (1 << f[0]) | (1 << f[2])])
                .collect();
            comps.push(vec![
                to_mask(&[0, 1, 1, 0, 1, 1, 0]),
                to_mask(&[1, 0, 1, 0, 1, 0, 1]),
                to_mask(&[1, 1, 1, 1, 0, 0, 0]),
            ]);
            let mut ok2 = comps.len() == 7;
            let mut covered: std::collections::BTreeSet<u64> = Default::default();
            for basis in &comps {
                let sp = span(basis);
                // Linear independence: distinct nonzero combinations.
                let distinct: std::collections::BTreeSet<u64> = sp.iter().cloned().collect();
                ok2 &= distinct.len() == (1 << basis.len()) - 1;
                ok2 &= sp.iter().all(|&m| in_r1(m));
                // Maximality inside R₁.
                for &q in &pts {
                    if !distinct.contains(&q) {
                        let mut bigger = basis.clone();
                        bigger.push(q);
                        ok2 &= !span(&bigger).iter().all(|&m| in_r1(m));
                    }
                }
                covered.extend(distinct);
            }
            ok2 &= covered == pts.iter().cloned().collect();
            push(
                "resonance p=2 special",
                if ok2 { Status::Pass } else { Status::Fail },
                format!(
                    "six local components plus the 3-dimensional essential component are \
                     maximal in R₁(𝔽₂) and cover all {} points",
                    pts.len()
                ),
            );
            // Depth-2 locus over 𝔽₂: exactly the advertised point.
            let mut deep_points = Vec::new();
            for mask in 1u64..(1 << 7) {
                let v: Vec<u64> = (0..7).map(|i| (mask >> i) & 1).collect();
                if jl.lin_rank_mod_p(&v, 2) <= 7 - 1 - 2 {
                    deep_points.push(v);
                }
            }
            let want = vec![0u64, 1, 1, 0, 1, 1, 0];
            let ok3 = deep_points == vec![want.clone()];
            push(
                "resonance R2 over F2",
                if ok3 { Status::Pass } else { Status::Fail },
                format!("depth≥2 points: {:?} (expected [{:?}])", deep_points, want),
            );
        }
        if name == "maclane" {
            // Over 𝔽₃ an extra essential 2-dimensional component appears.
            let dec3 = resonance_components(&jl, &lat, 3, ENUM_BUDGET)?;
            let got3: Vec<(usize, u64)> =
                dec3.h_tally().into_iter().map(|(r, c)| (r, c as u64)).collect();
            let ok3 = got3 == [(2, 9)] && dec3.unabsorbed.is_empty();
            push(
                "resonance p=3 special",
                if ok3 { Status::Pass } else { Status::Fail },
                format!("h = {:?} (expected [(2, 9)])", got3),
            );
        }
    }

    // --- Chen ranks -----------------------------------------------------------------
    {
        let hmap: BTreeMap<usize, u64> = g.h.iter().cloned().collect();
        let theta1_ok = g.theta[0] == g.n as i64;
        let theta2: BigInt = mult
            .m
            .iter()
            .filter(|&(&r, _)| r >= 3)
            .map(|(&r, &c)| BigInt::from(c) * crate::counting::binomial(r as u64 - 1, 2))
            .sum();
        let theta2_ok = g.theta.len() < 2 || theta2 == BigInt::from(g.theta[1]);
        push(
            "chen theta <=2",
            if theta1_ok && theta2_ok { Status::Pass } else { Status::Fail },
            format!("θ₁ = {} (= n), θ₂ = {theta2} (published {})", g.theta[0], g.theta[1]),
        );
        let mut mism = Vec::new();
        for k in 4..=g.theta.len() as u64 {
            let conj = conjectural_ranks(&hmap, k).theta;
            if conj != BigInt::from(g.theta[k as usize - 1]) {
                mism.push((k, conj.clone(), g.theta[k as usize - 1]));
            }
        }
        if mism.is_empty() {
            push(
                "chen theta >=4",
                Status::Pass,
                format!("resonance formula matches published θ₄..θ_{}", g.theta.len()),
            );
        } else {
            // The resonance formula is proved for the corpus range; a mismatch
            // against a published value is flagged, not failed, when the
            // published value stands alone against the formula.
            let detail = mism
                .iter()
                .map(|(k, c, l)| format!("θ_{k}: formula {c} vs published {l}"))
                .collect::<Vec<_>>()
                .join("; ");
            push("chen theta >=4", Status::Discrepancy, detail);
        }
    }

    // --- LCS ranks ---------------------------------------------------------------------
    match g.phi {
        PhiData::FiberType { literal } => {
            let exps = g.exponents.expect("fiber-type arrangements carry exponents");
            let got: Vec<BigInt> = (1..=literal.len() as u64).map(|k| lcs_fibertype(exps, k)).collect();
            let want: Vec<BigInt> = literal.iter().map(|&v| BigInt::from(v)).collect();
            push(
                "lcs fiber-type",
                if got == want { Status::Pass } else { Status::Fail },
                format!("φ₁..φ_{} = {:?} from exponents {:?} (published {:?})", literal.len(), got, exps, literal),
            );
        }
        PhiData::Conjectural { literal, disagree_from } => {
            let hmap: BTreeMap<usize, u64> = g.h.iter().cloned().collect();
            let mut mism = Vec::new();
            for k in 4..=literal.len() as u64 {
                let conj = conjectural_ranks(&hmap, k).phi;
                if conj != BigInt::from(literal[k as usize - 1]) {
                    mism.push((k, conj.clone(), literal[k as usize - 1]));
                }
            }
            match (mism.is_empty(), disagree_from) {
                (true, None) => push(
                    "lcs conjectural",
                    Status::Pass,
                    format!("resonance formula matches published φ₄..φ_{}", literal.len()),
                ),
                (false, Some(from)) if mism.iter().all(|&(k, _, _)| k >= from) => {
                    let detail = mism
                        .iter()
                        .map(|(k, c, l)| format!("φ_{k}: formula {c} vs published {l}"))
                        .collect::<Vec<_>>()
                        .join("; ");
                    push("lcs conjectural", Status::Discrepancy, detail)
                }
                _ => {
                    let detail = mism
                        .iter()
                        .map(|(k, c, l)| format!("φ_{k}: formula {c} vs published {l}"))
                        .collect::<Vec<_>>()
                        .join("; ");
                    push("lcs conjectural", Status::Fail, detail)
                }
            }
        }
        PhiData::LiteralOnly(literal) => push(
            "lcs",
            Status::Skipped,
            format!(
                "no closed-form route (group has lower-central-series torsion or is not \
                 fiber-type); published φ = {:?}",
                literal
            ),
        ),
    }

    Ok(out)
}

/// Verify the whole corpus.
pub fn verify_all(deep: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in NAMES {
        out.extend(verify(name, deep)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads_and_validates() {
        for name in NAMES {
            let arr = load(name).unwrap();
            arr.validate().unwrap();
            let g = golden(name).unwrap();
            assert_eq!(arr.n, g.n, "{name}");
        }
    }

    #[test]
    fn shallow_verify_smallest() {
        let checks = verify("pencil", false).unwrap();
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{}: {} — {}", c.arrangement, c.check, c.detail);
        }
    }
}
