//! The local invariants `w_P`, `(F.C)_P` and `i_P` of a normalized germ, and
//! the global degree/budget constraints they satisfy along a fiber.
//!
//! # Unit convention
//!
//! Weight-class minima are computed in `t`-units on a component of the
//! covering curve and divided by the subindex `mbar` on the way out, so
//! `w_P` for the order pattern `(1, mbar-1, mbar+1, mbar)` comes out as
//! `(mbar-1)/mbar`. The same convention makes the budget
//! `(-K.C) + sum w + sum i <= 4` exact rational arithmetic.
//!
//! # Exact vs lower-bound `i_P`
//!
//! Exact mode evaluates
//!
//! ```text
//! i_P mbar = mbar - ord(x4) - mbar w_P + min [phi, phi1, phi2]
//! ```
//!
//! with the minimum over pairs of binomial curve-ideal generators whose
//! exponent vectors are independent together with the fixed equation `phi`.
//! It is only sound when the cover is a cyclic quotient chart (equation
//! `psi0 - x4`); for the exceptional series odd powers of `x4` are not
//! invariant and the generator model is incomplete, so exact mode refuses.
//! Lower-bound mode searches triples of distinct simple invariant monomials
//! assignable to the three coordinates and is labelled as a binomial-search
//! bound; every capped search is certified or flagged, never silently
//! truncated.

use serde::Serialize;
use thiserror::Error;

use crate::frac::Frac;
use crate::germ::{Equation, NormalizedGerm, Series};
use crate::weights::{
    is_simple_invariant, min_ord_of_weight, ord_of, vanishes_on_curve, weight_of, Binomial,
    Grading, MinOrd, Monomial, Residue,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("weight-class search exhausted at cap {0}")]
    Exhausted(i64),
    #[error("no independent generator pair below cap {0}")]
    NoIndependentPair(i64),
    #[error("exact i_P is unsupported here: {0}")]
    ExactUnsupported(&'static str),
    #[error("lower-bound i_P is unsupported here: {0}")]
    LowerUnsupported(&'static str),
    #[error("generator {0} does not vanish on the curve")]
    BadGenerator(String),
}

/// Search caps for the invariant computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    /// Cap for weight-class minima (`w_P`, validation); default `6*mbar`.
    pub class_cap: i64,
    /// Cap on binomial generator orders in exact `i_P` mode.
    pub generator_cap: i64,
    /// Cap on simple-monomial orders in lower-bound mode.
    pub simple_cap: i64,
}

impl SearchCaps {
    pub fn for_subindex(mbar: i64) -> Self {
        let cap = 6 * mbar.max(1);
        SearchCaps {
            class_cap: cap,
            generator_cap: cap,
            simple_cap: cap,
        }
    }

    pub fn for_germ(germ: &NormalizedGerm) -> Self {
        SearchCaps::for_subindex(germ.mbar())
    }

    /// Override every cap with a single value.
    pub fn uniform(cap: i64) -> Self {
        SearchCaps {
            class_cap: cap,
            generator_cap: cap,
            simple_cap: cap,
        }
    }
}

/// `w_P` with its witness monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WpValue {
    /// The invariant, `tunits / mbar`.
    pub value: Frac,
    /// The weight-class minimum in `t`-units.
    pub tunits: i64,
    pub witness: Monomial,
}

/// `w_P` = (minimum order in the weight class of `-wt(x3)`) / `mbar`.
pub fn compute_wp(germ: &NormalizedGerm, caps: &SearchCaps) -> Result<WpValue, InvariantError> {
    if germ.is_smooth_marker() {
        return Ok(WpValue {
            value: Frac::ZERO,
            tunits: 0,
            witness: Monomial::unit(),
        });
    }
    let g = germ.grading();
    let target = germ.weight(2).neg();
    match min_ord_of_weight(&g, target, caps.class_cap) {
        MinOrd::Found { ord, witness } => Ok(WpValue {
            value: Frac::new(ord, germ.mbar()),
            tunits: ord,
            witness,
        }),
        MinOrd::Exhausted { cap } => Err(InvariantError::Exhausted(cap)),
    }
}

/// `(F.C)_P = ord(x3) / mbar` for a general anticanonical member `F`.
pub fn compute_fc(germ: &NormalizedGerm) -> Frac {
    Frac::new(germ.ord(2), germ.mbar())
}

/// Value of the Jacobian bracket `[psi1, psi2, psi3]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JacobianValue {
    Finite(i64),
    Infinite,
}

/// Order of the Jacobian determinant of three binomial generators with
/// respect to `(x1, x2, x3)`: the order sum minus `ord(x1 x2 x3)` when the
/// three exponent vectors are independent, infinite otherwise.
pub fn jacobian_ord(
    triple: &[Binomial; 3],
    germ: &NormalizedGerm,
) -> Result<JacobianValue, InvariantError> {
    let g = germ.grading();
    for b in triple {
        match vanishes_on_curve(b, &g) {
            Ok(true) => {}
            Ok(false) => return Err(InvariantError::BadGenerator(b.to_string())),
            Err(_) => return Err(InvariantError::BadGenerator(b.to_string())),
        }
    }
    let rows: Vec<[i128; 3]> = triple
        .iter()
        .map(|b| {
            [
                b.psi.exp(0) as i128,
                b.psi.exp(1) as i128,
                b.psi.exp(2) as i128,
            ]
        })
        .collect();
    if det3(&rows) == 0 {
        return Ok(JacobianValue::Infinite);
    }
    let total: i64 = triple.iter().map(|b| ord_of(&b.psi, &g)).sum();
    let base: i64 = (0..3).map(|i| germ.ord(i)).sum();
    Ok(JacobianValue::Finite(total - base))
}

fn det3(rows: &[[i128; 3]]) -> i128 {
    rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
}

/// All binomial generators `psi - x4^n` of the invariant curve ideal with
/// `psi` a monomial in `x1, x2, x3` and `ord(psi) <= cap`, sorted by
/// `(order, variable-major)`.
pub fn binomial_generators(germ: &NormalizedGerm, cap: i64) -> Vec<Binomial> {
    let g = germ.grading();
    let a4 = germ.ord(3);
    let mut out = Vec::new();
    let mut exps = [0u32; 3];
    scan_generators(&g, a4, cap, 0, 0, &mut exps, &mut out);
    out.sort_by(|x, y| {
        ord_of(&x.psi, &g)
            .cmp(&ord_of(&y.psi, &g))
            .then_with(|| x.psi.var_major_cmp(&y.psi))
    });
    out
}

fn scan_generators(
    g: &Grading,
    a4: i64,
    cap: i64,
    var: usize,
    ord_so_far: i64,
    exps: &mut [u32; 3],
    out: &mut Vec<Binomial>,
) {
    if var == 3 {
        if ord_so_far == 0 || ord_so_far % a4 != 0 {
            return;
        }
        let psi = Monomial::new([exps[0], exps[1], exps[2], 0]);
        let n = (ord_so_far / a4) as u32;
        let b = Binomial::new(psi, n);
        if vanishes_on_curve(&b, g) == Ok(true) {
            out.push(b);
        }
        return;
    }
    let mut e = 0u32;
    while ord_so_far + e as i64 * g.ords[var] <= cap {
        exps[var] = e;
        scan_generators(g, a4, cap, var + 1, ord_so_far + e as i64 * g.ords[var], exps, out);
        e += 1;
    }
    exps[var] = 0;
}

/// Exact `i_P` together with the minimizing generator pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IpExact {
    pub value: i64,
    /// The minimum of `[phi, phi1, phi2]` over independent pairs.
    pub minimum: i64,
    pub pair: [Binomial; 2],
    /// Whether the capped search provably found the global minimum.
    pub certified: bool,
    pub generator_cap: i64,
}

/// Exact `i_P` for a cyclic-binomial main-series germ.
pub fn compute_ip_exact(
    germ: &NormalizedGerm,
    caps: &SearchCaps,
) -> Result<IpExact, InvariantError> {
    let (psi0, power) = match germ.equation() {
        Equation::CyclicBinomial { psi0, power } => (psi0, power),
        Equation::GeneralHypersurface => {
            return Err(InvariantError::ExactUnsupported(
                "equation is not a cyclic binomial",
            ))
        }
        Equation::SmoothMarker => {
            return Err(InvariantError::ExactUnsupported("smooth point"));
        }
    };
    if germ.series() == Series::Exceptional {
        return Err(InvariantError::ExactUnsupported(
            "exceptional series generator model is incomplete",
        ));
    }
    let g = germ.grading();
    let phi = Binomial::new(psi0, power);
    if vanishes_on_curve(&phi, &g) != Ok(true) {
        return Err(InvariantError::BadGenerator(phi.to_string()));
    }

    let mbar = germ.mbar();
    let a4 = germ.ord(3);
    let base: i64 = (0..3).map(|i| germ.ord(i)).sum();
    let ord0 = ord_of(&psi0, &g);
    let row0 = [
        psi0.exp(0) as i128,
        psi0.exp(1) as i128,
        psi0.exp(2) as i128,
    ];

    let gens = binomial_generators(germ, caps.generator_cap);
    let mut best: Option<(i64, [Binomial; 2])> = None;
    for i in 0..gens.len() {
        let oi = ord_of(&gens[i].psi, &g);
        if let Some((b, _)) = best {
            // Generators are sorted by order, so no later pair can improve.
            if ord0 + oi + oi - base >= b && i > 0 {
                break;
            }
        }
        for j in (i + 1)..gens.len() {
            let oj = ord_of(&gens[j].psi, &g);
            let value = ord0 + oi + oj - base;
            if let Some((b, _)) = best {
                if value >= b {
                    break;
                }
            }
            let rows = [
                row0,
                [
                    gens[i].psi.exp(0) as i128,
                    gens[i].psi.exp(1) as i128,
                    gens[i].psi.exp(2) as i128,
                ],
                [
                    gens[j].psi.exp(0) as i128,
                    gens[j].psi.exp(1) as i128,
                    gens[j].psi.exp(2) as i128,
                ],
            ];
            if det3(&rows) != 0 {
                best = Some((value, [gens[i], gens[j]]));
            }
        }
    }
    let Some((minimum, pair)) = best else {
        return Err(InvariantError::NoIndependentPair(caps.generator_cap));
    };

    // A pair reaching beyond the cap costs at least the cheapest generator
    // plus the next order step past the cap.
    let next_beyond = (caps.generator_cap / a4 + 1) * a4;
    let outside_floor = ord0 + a4 + next_beyond - base;
    let certified = minimum <= outside_floor;

    let wp = compute_wp(germ, caps)?;
    let numerator = mbar - a4 - wp.tunits + minimum;
    debug_assert_eq!(numerator.rem_euclid(mbar), 0, "i_P formula must divide");
    Ok(IpExact {
        value: numerator / mbar,
        minimum,
        pair,
        certified,
        generator_cap: caps.generator_cap,
    })
}

/// Lower bound for `i_P` from the simple-monomial triple search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpLower {
    /// Sound lower bound for `i_P` (binomial search certificate).
    pub bound: Frac,
    /// `sum (ord(psi_k) - ord(x_k))` for the bound, in `t`-units.
    pub tunit_total: i64,
    /// The minimizing triple, absent when the cap floor is the binding term.
    pub triple: Option<[Monomial; 3]>,
    /// Set when the cap bound the search; the bound is still sound but a
    /// larger cap may sharpen it.
    pub cap_hit: bool,
    pub simple_cap: i64,
}

/// Lower bound `i_P >= (min_triples sum(ord psi_k - ord x_k) - mbar w_P)/mbar`
/// over triples of distinct simple invariant monomials in `x1, x2, x3` that
/// can be assigned (after permutation) with `x_k | psi_k`.
pub fn compute_ip_lower(
    germ: &NormalizedGerm,
    caps: &SearchCaps,
) -> Result<IpLower, InvariantError> {
    if germ.is_smooth_marker() {
        return Ok(IpLower {
            bound: Frac::ZERO,
            tunit_total: 0,
            triple: None,
            cap_hit: false,
            simple_cap: caps.simple_cap,
        });
    }
    if germ.series() == Series::Exceptional {
        return Err(InvariantError::LowerUnsupported(
            "triple bound is derived for the main series",
        ));
    }
    let g = germ.grading();
    let mbar = germ.mbar();
    let wp = compute_wp(germ, caps)?;
    let base: i64 = (0..3).map(|i| germ.ord(i)).sum();

    let simples = simple_invariants(germ, caps.simple_cap);
    let mut best: Option<(i64, [Monomial; 3])> = None;
    for i in 0..simples.len() {
        let oi = ord_of(&simples[i], &g);
        for j in (i + 1)..simples.len() {
            let oj = ord_of(&simples[j], &g);
            if let Some((b, _)) = best {
                if oi + oj + oj - base >= b {
                    break;
                }
            }
            for k in (j + 1)..simples.len() {
                let ok = ord_of(&simples[k], &g);
                let total = oi + oj + ok - base;
                if let Some((b, _)) = best {
                    if total >= b {
                        break;
                    }
                }
                let triple = [simples[i], simples[j], simples[k]];
                if has_coordinate_assignment(&triple) {
                    best = Some((total, triple));
                }
            }
        }
    }

    let cap_floor = beyond_cap_floor(germ, &g, &simples, caps.simple_cap);
    let (tunit_total, triple, cap_hit) = match best {
        Some((found, witness)) if found <= cap_floor => (found, Some(witness), false),
        Some((found, _)) => (cap_floor.min(found), None, true),
        None => (cap_floor, None, true),
    };
    Ok(IpLower {
        bound: Frac::new(tunit_total - wp.tunits, mbar),
        tunit_total,
        triple,
        cap_hit,
        simple_cap: caps.simple_cap,
    })
}

/// Least possible triple value when at least one monomial's order exceeds
/// the cap. That slot pays at least `cap + 1 - ord(x_j)` on its matched
/// coordinate; the remaining two coordinates are covered by distinct
/// simples, bounded by the in-cap single and pair minima (falling back to
/// the beyond-cap price when no in-cap cover exists). Sound because every
/// term of the triple sum is non-negative and minima over supersets only
/// shrink.
fn beyond_cap_floor(
    germ: &NormalizedGerm,
    g: &Grading,
    simples: &[Monomial],
    cap: i64,
) -> i64 {
    let beyond = |j: usize| cap + 1 - germ.ord(j);
    // Cheapest in-cap excess per coordinate.
    let single = |j: usize| -> Option<i64> {
        simples
            .iter()
            .filter(|s| s.exp(j) > 0)
            .map(|s| ord_of(s, g) - germ.ord(j))
            .min()
    };
    // Cheapest distinct in-cap pair covering two coordinates.
    let pair = |j1: usize, j2: usize| -> Option<i64> {
        let mut best: Option<i64> = None;
        for (a, p) in simples.iter().enumerate() {
            for (b, q) in simples.iter().enumerate() {
                if a == b {
                    continue;
                }
                if p.exp(j1) > 0 && q.exp(j2) > 0 {
                    let v = ord_of(p, g) - germ.ord(j1) + ord_of(q, g) - germ.ord(j2);
                    best = Some(best.map_or(v, |x: i64| x.min(v)));
                }
            }
        }
        best
    };
    let cover = |j1: usize, j2: usize| -> i64 {
        let mut v = beyond(j1) + beyond(j2);
        if let Some(s) = single(j1) {
            v = v.min(s + beyond(j2));
        }
        if let Some(s) = single(j2) {
            v = v.min(s + beyond(j1));
        }
        if let Some(p) = pair(j1, j2) {
            v = v.min(p);
        }
        v
    };
    [(0, 1, 2), (1, 0, 2), (2, 0, 1)]
        .into_iter()
        .map(|(j, j1, j2)| beyond(j) + cover(j1, j2))
        .min()
        .expect("three coordinates")
}

/// Simple invariant monomials in `x1, x2, x3` with order at most `cap`,
/// sorted by `(order, variable-major)`.
pub fn simple_invariants(germ: &NormalizedGerm, cap: i64) -> Vec<Monomial> {
    let g = germ.grading();
    let zero = Residue::zero(germ.index());
    let mut out = Vec::new();
    let mut exps = [0u32; 3];
    scan_simples(&g, zero, cap, 0, 0, &mut exps, &mut out);
    out.sort_by(|x, y| {
        ord_of(x, &g)
            .cmp(&ord_of(y, &g))
            .then_with(|| x.var_major_cmp(y))
    });
    out
}

fn scan_simples(
    g: &Grading,
    zero: Residue,
    cap: i64,
    var: usize,
    ord_so_far: i64,
    exps: &mut [u32; 3],
    out: &mut Vec<Monomial>,
) {
    if var == 3 {
        let mono = Monomial::new([exps[0], exps[1], exps[2], 0]);
        if !mono.is_unit()
            && weight_of(&mono, g) == zero
            && is_simple_invariant(&mono, g) == Ok(true)
        {
            out.push(mono);
        }
        return;
    }
    let mut e = 0u32;
    while ord_so_far + e as i64 * g.ords[var] <= cap {
        exps[var] = e;
        scan_simples(g, zero, cap, var + 1, ord_so_far + e as i64 * g.ords[var], exps, out);
        e += 1;
    }
    exps[var] = 0;
}

/// Whether the three monomials can be assigned to the three coordinates so
/// that `x_k` divides its assigned monomial.
fn has_coordinate_assignment(triple: &[Monomial; 3]) -> bool {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .iter()
        .any(|p| (0..3).all(|k| triple[k].exp(p[k]) > 0))
}

/// How `i_P` is known for a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IpOutcome {
    Exact {
        value: i64,
        minimum: i64,
        pair: [Binomial; 2],
        certified: bool,
    },
    LowerBound {
        bound: Frac,
        tunit_total: i64,
        triple: Option<[Monomial; 3]>,
        cap_hit: bool,
    },
    SmoothZero,
    Unsupported {
        reason: String,
    },
}

impl IpOutcome {
    /// The smallest `i_P` consistent with this outcome; singular points
    /// contribute at least 1.
    pub fn effective_minimum(&self, singular: bool) -> i64 {
        let floor = if singular { 1 } else { 0 };
        match self {
            IpOutcome::Exact { value, .. } => *value,
            IpOutcome::LowerBound { bound, .. } => bound.ceil_int().max(floor),
            IpOutcome::SmoothZero => 0,
            IpOutcome::Unsupported { .. } => floor,
        }
    }
}

/// The assembled local invariants of one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub mbar: i64,
    pub d: i64,
    pub wp: Frac,
    pub wp_witness: Monomial,
    pub fc: Frac,
    pub ip: IpOutcome,
}

impl InvariantReport {
    pub fn smooth() -> Self {
        InvariantReport {
            mbar: 1,
            d: 1,
            wp: Frac::ZERO,
            wp_witness: Monomial::unit(),
            fc: Frac::int(1),
            ip: IpOutcome::SmoothZero,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self.ip, IpOutcome::SmoothZero)
    }
}

/// Compute every local invariant of one germ: exact `i_P` where the equation
/// supports it, the triple lower bound otherwise.
pub fn local_invariants(
    germ: &NormalizedGerm,
    caps: &SearchCaps,
) -> Result<InvariantReport, InvariantError> {
    if germ.is_smooth_marker() {
        return Ok(InvariantReport::smooth());
    }
    let wp = compute_wp(germ, caps)?;
    let fc = compute_fc(germ);
    let ip = match (germ.series(), germ.equation()) {
        (Series::Main, Equation::CyclicBinomial { .. }) => {
            let e = compute_ip_exact(germ, caps)?;
            IpOutcome::Exact {
                value: e.value,
                minimum: e.minimum,
                pair: e.pair,
                certified: e.certified,
            }
        }
        (Series::Main, Equation::GeneralHypersurface) => {
            let l = compute_ip_lower(germ, caps)?;
            IpOutcome::LowerBound {
                bound: l.bound,
                tunit_total: l.tunit_total,
                triple: l.triple,
                cap_hit: l.cap_hit,
            }
        }
        (Series::Exceptional, _) => IpOutcome::Unsupported {
            reason: "exceptional series: generator model is incomplete".into(),
        },
        (_, Equation::SmoothMarker) => IpOutcome::SmoothZero,
    };
    Ok(InvariantReport {
        mbar: germ.mbar(),
        d: germ.d(),
        wp: wp.value,
        wp_witness: wp.witness,
        fc,
        ip,
    })
}

/// The global constraints along a fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalReport {
    /// `(-K.C)`, taken as `1/mbar` of the non-Gorenstein point.
    pub anticanonical: Frac,
    pub wp_total: Frac,
    /// Effective `i_P` total: exact values, rounded-up bounds, plus 1 per
    /// extra Gorenstein singular point.
    pub ip_total: i64,
    pub budget_total: Frac,
    pub budget_ok: bool,
    /// `(K.C) - sum w_P`; must be an integer in `[-3, -1]`.
    pub gr0_omega_raw: Frac,
    pub deg_gr0_omega: Option<i64>,
    pub gr0_ok: bool,
    /// `2 + deg gr0 - sum i_P`; must be at least -2.
    pub deg_gr1_o: Option<i64>,
    pub gr1_ok: bool,
    pub point_count: usize,
    pub point_count_ok: bool,
}

impl GlobalReport {
    pub fn all_pass(&self) -> bool {
        self.budget_ok && self.gr0_ok && self.gr1_ok && self.point_count_ok
    }
}

/// Check the budget `(-K.C) + sum w + sum i <= 4`, the degree identities and
/// the point-count bound for a fiber with the given local reports plus
/// `extra_gorenstein` additional singular Gorenstein points (each contributes
/// `i_P >= 1` and no `w_P`).
pub fn global_check(reports: &[InvariantReport], extra_gorenstein: usize) -> GlobalReport {
    let mbar_max = reports.iter().map(|r| r.mbar).max().unwrap_or(1);
    let anticanonical = Frac::new(1, mbar_max);
    let wp_total: Frac = reports.iter().map(|r| r.wp).sum();
    let ip_points: i64 = reports
        .iter()
        .map(|r| r.ip.effective_minimum(r.is_singular()))
        .sum();
    let ip_total = ip_points + extra_gorenstein as i64;

    let budget_total = anticanonical + wp_total + Frac::int(ip_total);
    let budget_ok = budget_total <= Frac::int(4);

    let gr0_omega_raw = -anticanonical - wp_total;
    let deg_gr0_omega = gr0_omega_raw.as_integer();
    let gr0_ok = matches!(deg_gr0_omega, Some(v) if (-3..=-1).contains(&v));

    let deg_gr1_o = deg_gr0_omega.map(|v| 2 + v - ip_total);
    let gr1_ok = matches!(deg_gr1_o, Some(v) if v >= -2);

    let point_count =
        reports.iter().filter(|r| r.is_singular()).count() + extra_gorenstein;
    let point_count_ok = point_count <= 3;

    GlobalReport {
        anticanonical,
        wp_total,
        ip_total,
        budget_total,
        budget_ok,
        gr0_omega_raw,
        deg_gr0_omega,
        gr0_ok,
        deg_gr1_o,
        gr1_ok,
        point_count,
        point_count_ok,
    }
}
