//! The normalized-coordinate datum of a terminal germ along a curve, its
//! validation axioms, and the structural predicates an imprimitive conic
//! bundle germ must satisfy.
//!
//! A [`NormalizedGerm`] records the index `m = mbar * d` (subindex times
//! splitting degree), the series of the cover equation, the four coordinate
//! weights mod `m`, and the four vanishing orders in `t`-units. Components of
//! the covering curve are implicit: component `g` is parameterized by
//! `x_i = chi(g)^{wt(x_i)} t^{ord(x_i)}`, so no per-component storage is
//! needed. [`validate`] checks the five normalization axioms and reports
//! failures with witnesses instead of erroring.

use serde::Serialize;
use thiserror::Error;

use crate::frac::Frac;
use crate::weights::{
    min_ord_of_weight, vanishes_on_curve, Binomial, Grading, MinOrd, Monomial,
    Residue, COORDS,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GermError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("order {0} must be at least 1")]
    BadOrder(i64),
    #[error("equation monomial must not involve x4")]
    EquationInvolvesX4,
    #[error("quotient weights must be coprime to the order (weight {0} vs order {1})")]
    WeightNotCoprime(i64, i64),
    #[error("parametrization orders have gcd {0} > 1, chart is not normalized")]
    ImprimitiveParametrization(i64),
    #[error("no invariant monomial of order exactly {subindex} below cap {cap}; input is not normalizable")]
    NoInvariantOfSubindexOrder { subindex: i64, cap: i64 },
}

/// The two series of equivariant cover equations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Series {
    /// Weights `(a, -a, b, 0)` mod `m`, invariant equation.
    Main,
    /// Index 4 only: weights `(a, -a, b, 2)` mod 4, equation of weight 2.
    Exceptional,
}

/// What is known about the defining equation of the cover.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Equation {
    /// The cover is the graph `x4^power = psi0`, i.e. a cyclic quotient chart
    /// with binomial curve equations.
    CyclicBinomial { psi0: Monomial, power: u32 },
    /// Hypersurface with no further structure assumed.
    GeneralHypersurface,
    /// A smooth (index 1) point; all local invariants vanish.
    SmoothMarker,
}

/// Complete local datum of a germ in normalized coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct NormalizedGerm {
    mbar: i64,
    d: i64,
    series: Series,
    weights: [Residue; COORDS],
    ords: [i64; COORDS],
    equation: Equation,
}

impl NormalizedGerm {
    pub fn new(
        mbar: i64,
        d: i64,
        series: Series,
        weights: [i64; COORDS],
        ords: [i64; COORDS],
        equation: Equation,
    ) -> Result<Self, GermError> {
        if mbar < 1 {
            return Err(GermError::NonPositive("subindex"));
        }
        if d < 1 {
            return Err(GermError::NonPositive("splitting degree"));
        }
        for &a in &ords {
            if a < 1 {
                return Err(GermError::BadOrder(a));
            }
        }
        if let Equation::CyclicBinomial { psi0, .. } = equation {
            if psi0.exp(3) != 0 {
                return Err(GermError::EquationInvolvesX4);
            }
        }
        let m = mbar * d;
        Ok(NormalizedGerm {
            mbar,
            d,
            series,
            weights: weights.map(|w| Residue::new(w, m)),
            ords,
            equation,
        })
    }

    /// Marker for a smooth point on the curve.
    pub fn smooth_marker() -> Self {
        NormalizedGerm::new(1, 1, Series::Main, [0; 4], [1; 4], Equation::SmoothMarker)
            .expect("smooth marker data is valid")
    }

    pub fn is_smooth_marker(&self) -> bool {
        self.equation == Equation::SmoothMarker
    }

    pub fn mbar(&self) -> i64 {
        self.mbar
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The index `m = mbar * d`.
    pub fn index(&self) -> i64 {
        self.mbar * self.d
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn weights(&self) -> [Residue; COORDS] {
        self.weights
    }

    pub fn weight(&self, i: usize) -> Residue {
        self.weights[i]
    }

    pub fn ords(&self) -> [i64; COORDS] {
        self.ords
    }

    pub fn ord(&self, i: usize) -> i64 {
        self.ords[i]
    }

    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn with_equation(&self, equation: Equation) -> Result<Self, GermError> {
        let mut g = *self;
        if let Equation::CyclicBinomial { psi0, .. } = equation {
            if psi0.exp(3) != 0 {
                return Err(GermError::EquationInvolvesX4);
            }
        }
        g.equation = equation;
        Ok(g)
    }

    pub fn grading(&self) -> Grading {
        Grading::new(self.weights, self.ords)
    }

    /// Default search cap for weight-class minima: six times the subindex.
    /// The case analysis only ever needs searches bounded by `3*mbar`;
    /// doubling leaves visible headroom before the overflow flag trips.
    pub fn default_class_cap(&self) -> i64 {
        6 * self.mbar
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// One axiom's outcome, with a witness description on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        AxiomCheck {
            passed: false,
            witness: Some(witness),
        }
    }
}

/// Per-axiom report of the normalization conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// (i) the weight row matches the germ's series pattern.
    pub series_pattern: AxiomCheck,
    /// (ii) `ord(x_i) = wt(x_i) mod mbar` for every coordinate.
    pub ord_weight_congruence: AxiomCheck,
    /// (iii) the parametrized curve really has `d` distinct components.
    pub component_count: AxiomCheck,
    /// (iv) no cheaper semi-invariant in any coordinate's weight class.
    pub class_minimality: AxiomCheck,
    /// (v) an invariant of order exactly `mbar` exists (main series: `x4`).
    pub subindex_invariant: AxiomCheck,
    /// The stored equation, if binomial, vanishes on the curve.
    pub equation_compatible: AxiomCheck,
    /// Search cap used for the class minima.
    pub cap: i64,
}

impl ValidationReport {
    pub fn is_normalized(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, &AxiomCheck); 6] {
        [
            ("series-pattern", &self.series_pattern),
            ("ord-weight-congruence", &self.ord_weight_congruence),
            ("component-count", &self.component_count),
            ("class-minimality", &self.class_minimality),
            ("subindex-invariant", &self.subindex_invariant),
            ("equation-compatible", &self.equation_compatible),
        ]
    }

    pub fn first_failure(&self) -> Option<(&'static str, &AxiomCheck)> {
        self.checks().into_iter().find(|(_, c)| !c.passed)
    }
}

/// Check the normalization axioms with the default search cap.
pub fn validate(germ: &NormalizedGerm) -> ValidationReport {
    validate_with_cap(germ, germ.default_class_cap())
}

/// Check the normalization axioms, searching weight classes up to `cap`.
pub fn validate_with_cap(germ: &NormalizedGerm, cap: i64) -> ValidationReport {
    let m = germ.index();
    let mbar = germ.mbar();
    let g = germ.grading();
    let cap = cap.max(germ.ords.iter().copied().max().unwrap_or(1));

    let series_pattern = check_series_pattern(germ, m);
    let ord_weight_congruence = check_congruence(germ, mbar);
    let component_count = check_component_count(germ, m, mbar);
    let class_minimality = check_class_minimality(germ, &g, cap);
    let subindex_invariant = check_subindex_invariant(germ, &g, cap);
    let equation_compatible = check_equation(germ, &g);

    ValidationReport {
        series_pattern,
        ord_weight_congruence,
        component_count,
        class_minimality,
        subindex_invariant,
        equation_compatible,
        cap,
    }
}

fn check_series_pattern(germ: &NormalizedGerm, m: i64) -> AxiomCheck {
    let [w1, w2, w3, w4] = germ.weights;
    if w2 != w1.neg() {
        return AxiomCheck::fail(format!("wt(x2) = {} is not -wt(x1) = {}", w2, w1.neg()));
    }
    for (i, w) in [w1, w3].iter().enumerate() {
        if gcd(w.value(), m) != 1 {
            let name = if i == 0 { "wt(x1)" } else { "wt(x3)" };
            return AxiomCheck::fail(format!("{name} = {} is not prime to {m}", w.value()));
        }
    }
    match germ.series {
        Series::Main => {
            if !w4.is_zero() {
                return AxiomCheck::fail(format!("main series needs wt(x4) = 0, got {w4}"));
            }
        }
        Series::Exceptional => {
            if m != 4 {
                return AxiomCheck::fail(format!("exceptional series needs index 4, got {m}"));
            }
            if w4.value() != 2 {
                return AxiomCheck::fail(format!("exceptional series needs wt(x4) = 2, got {w4}"));
            }
        }
    }
    AxiomCheck::pass()
}

fn check_congruence(germ: &NormalizedGerm, mbar: i64) -> AxiomCheck {
    for i in 0..COORDS {
        let a = germ.ords[i];
        let w = germ.weights[i].value();
        if (a - w).rem_euclid(mbar) != 0 {
            return AxiomCheck::fail(format!(
                "ord(x{}) = {a} is not congruent to wt = {w} mod {mbar}",
                i + 1
            ));
        }
    }
    AxiomCheck::pass()
}

/// The component through `t -> (t^{a_1},..)` is stabilized by exactly the
/// subgroup of order `mbar`: a group element `j` fixes it iff
/// `j*(W*a_i - w_i) = 0 mod m` for all `i`, where `W` is the weight of a
/// monomial of order 1 obtained from a Bezout combination of the orders.
fn check_component_count(germ: &NormalizedGerm, m: i64, mbar: i64) -> AxiomCheck {
    let ords = germ.ords;
    let mut g = ords[0];
    let mut coeffs = [0i64; COORDS];
    coeffs[0] = 1;
    for i in 1..COORDS {
        let (ng, x, y) = egcd(g, ords[i]);
        for c in coeffs.iter_mut().take(i) {
            *c *= x;
        }
        coeffs[i] = y;
        g = ng;
    }
    if g != 1 {
        return AxiomCheck::fail(format!("orders have common factor {g}"));
    }
    let big_w: i64 = (0..COORDS)
        .map(|i| {
            ((coeffs[i] as i128 * germ.weights[i].value() as i128).rem_euclid(m as i128)) as i64
        })
        .sum::<i64>()
        .rem_euclid(m);
    let mut stab = m;
    for i in 0..COORDS {
        let v = (big_w as i128 * ords[i] as i128 - germ.weights[i].value() as i128)
            .rem_euclid(m as i128) as i64;
        stab = gcd(stab, v);
    }
    if stab == mbar {
        AxiomCheck::pass()
    } else {
        AxiomCheck::fail(format!(
            "parametrization has {} components (stabilizer order {stab}), datum claims {}",
            m / stab,
            germ.d
        ))
    }
}

fn check_class_minimality(germ: &NormalizedGerm, g: &Grading, cap: i64) -> AxiomCheck {
    for i in 0..COORDS {
        match min_ord_of_weight(g, germ.weights[i], cap) {
            MinOrd::Found { ord, witness } if ord < germ.ords[i] => {
                return AxiomCheck::fail(format!(
                    "{witness} has weight wt(x{}) and order {ord} < ord(x{}) = {}",
                    i + 1,
                    i + 1,
                    germ.ords[i]
                ));
            }
            MinOrd::Found { .. } => {}
            MinOrd::Exhausted { cap } => {
                return AxiomCheck::fail(format!(
                    "weight class of x{} empty below cap {cap}",
                    i + 1
                ));
            }
        }
    }
    AxiomCheck::pass()
}

fn check_subindex_invariant(germ: &NormalizedGerm, g: &Grading, cap: i64) -> AxiomCheck {
    let mbar = germ.mbar();
    if germ.series == Series::Main && germ.ords[3] != mbar {
        return AxiomCheck::fail(format!(
            "main series needs ord(x4) = {mbar}, got {}",
            germ.ords[3]
        ));
    }
    match min_ord_of_weight(g, Residue::zero(germ.index()), cap) {
        MinOrd::Found { ord, .. } if ord == mbar => AxiomCheck::pass(),
        MinOrd::Found { ord, witness } => AxiomCheck::fail(format!(
            "least invariant order is {ord} ({witness}), expected {mbar}"
        )),
        MinOrd::Exhausted { cap } => {
            AxiomCheck::fail(format!("no invariant monomial below cap {cap}"))
        }
    }
}

fn check_equation(germ: &NormalizedGerm, g: &Grading) -> AxiomCheck {
    match germ.equation {
        Equation::CyclicBinomial { psi0, power } => {
            match vanishes_on_curve(&Binomial::new(psi0, power), g) {
                Ok(true) => AxiomCheck::pass(),
                Ok(false) => AxiomCheck::fail(format!(
                    "equation {} - x4^{power} does not vanish on the curve",
                    psi0
                )),
                Err(e) => AxiomCheck::fail(e.to_string()),
            }
        }
        Equation::GeneralHypersurface | Equation::SmoothMarker => AxiomCheck::pass(),
    }
}

/// Outcome of the general-elephant criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ElephantOutcome {
    /// A general anticanonical member misses the curve and is Du Val at `P`.
    GoodElephant,
    /// Every anticanonical member contains the curve direction.
    ContainsCurve,
}

/// A general member of `|-K|` misses `C` and is Du Val at `P` exactly when
/// `ord(x3) < mbar`; with a singular base this forces `ord(x3) = 1`.
pub fn general_elephant_test(germ: &NormalizedGerm) -> ElephantOutcome {
    if germ.ord(2) < germ.mbar() {
        ElephantOutcome::GoodElephant
    } else {
        ElephantOutcome::ContainsCurve
    }
}

/// The structural predicates of an imprimitive germ with singular base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub mbar: i64,
    pub d: i64,
    pub a3: i64,
    /// The splitting degree is even.
    pub d_even: bool,
    /// `2*mbar = 0 mod d`.
    pub divisibility: bool,
    /// `mbar >= d/2`.
    pub subindex_bound: bool,
    /// `ord(x3) = 1 mod mbar`.
    pub a3_congruence: bool,
    /// `(-K.C) = 1/mbar`, reported exactly.
    pub anticanonical_degree: Frac,
}

impl PredicateReport {
    pub fn all_pass(&self) -> bool {
        self.d_even && self.divisibility && self.subindex_bound && self.a3_congruence
    }
}

/// Evaluate the structural predicates; purely arithmetic, never fails.
pub fn structural_predicates(germ: &NormalizedGerm) -> PredicateReport {
    let mbar = germ.mbar();
    let d = germ.d();
    let a3 = germ.ord(2);
    PredicateReport {
        mbar,
        d,
        a3,
        d_even: d % 2 == 0,
        divisibility: (2 * mbar) % d == 0,
        subindex_bound: 2 * mbar >= d,
        a3_congruence: (a3 - 1).rem_euclid(mbar) == 0,
        anticanonical_degree: Frac::new(1, mbar),
    }
}

/// A two-dimensional cyclic quotient chart: three coordinates with weights
/// mod the group order and orders along the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicQuotientChart {
    pub order: i64,
    pub weights: [i64; 3],
    pub ords: [i64; 3],
}

/// Extend a three-coordinate cyclic quotient chart to the four-coordinate
/// normalized chart: append `x4`, the variable-major least invariant monomial
/// of order exactly the subindex, together with the binomial equation
/// `psi0 - x4`.
pub fn extend_to_chart(chart: &CyclicQuotientChart) -> Result<NormalizedGerm, GermError> {
    let m = chart.order;
    if m < 2 {
        return Err(GermError::NonPositive("quotient order - 1"));
    }
    for &w in &chart.weights {
        if gcd(w.rem_euclid(m), m) != 1 {
            return Err(GermError::WeightNotCoprime(w, m));
        }
    }
    for &a in &chart.ords {
        if a < 1 {
            return Err(GermError::BadOrder(a));
        }
    }

    // Subindex = order of the stabilizer of one parametrized component.
    let g0 = chart.ords.iter().fold(0, |acc, &a| gcd(acc, a));
    if g0 != 1 {
        return Err(GermError::ImprimitiveParametrization(g0));
    }
    let mut g = chart.ords[0];
    let mut coeffs = [0i64; 3];
    coeffs[0] = 1;
    for i in 1..3 {
        let (ng, x, y) = egcd(g, chart.ords[i]);
        for c in coeffs.iter_mut().take(i) {
            *c *= x;
        }
        coeffs[i] = y;
        g = ng;
    }
    let big_w: i64 = (0..3)
        .map(|i| ((coeffs[i] as i128 * chart.weights[i] as i128).rem_euclid(m as i128)) as i64)
        .sum::<i64>()
        .rem_euclid(m);
    let mut stab = m;
    for i in 0..3 {
        let v = (big_w as i128 * chart.ords[i] as i128 - chart.weights[i] as i128)
            .rem_euclid(m as i128) as i64;
        stab = gcd(stab, v);
    }
    let mbar = stab;
    let d = m / mbar;

    // Search for the order-mbar invariant in the three chart variables; the
    // dummy fourth slot is priced beyond the cap so it can never appear.
    let cap = 6 * mbar;
    let dummy = Grading::new(
        [
            Residue::new(chart.weights[0], m),
            Residue::new(chart.weights[1], m),
            Residue::new(chart.weights[2], m),
            Residue::zero(m),
        ],
        [chart.ords[0], chart.ords[1], chart.ords[2], cap + 1],
    );
    let psi0 = match min_ord_of_weight(&dummy, Residue::zero(m), cap) {
        MinOrd::Found { ord, witness } if ord == mbar => witness,
        _ => {
            return Err(GermError::NoInvariantOfSubindexOrder {
                subindex: mbar,
                cap,
            })
        }
    };
    debug_assert_eq!(psi0.exp(3), 0);

    NormalizedGerm::new(
        mbar,
        d,
        Series::Main,
        [
            chart.weights[0],
            chart.weights[1],
            chart.weights[2],
            0,
        ],
        [chart.ords[0], chart.ords[1], chart.ords[2], mbar],
        Equation::CyclicBinomial {
            psi0,
            power: 1,
        },
    )
}

/// Built-in germs for the local cases of the classification.
pub mod presets {
    use super::*;

    /// The imprimitive exceptional-series germ: weights `(1,3,3,2)` mod 4,
    /// orders `(1,1,1,2)`, subindex 2, splitting degree 2.
    pub fn cax4() -> NormalizedGerm {
        NormalizedGerm::new(
            2,
            2,
            Series::Exceptional,
            [1, 3, 3, 2],
            [1, 1, 1, 2],
            Equation::GeneralHypersurface,
        )
        .expect("table germ is valid")
    }

    /// The quotient `1/4(1,3,1)` germ with curve `{y1^2 = y2^2, y3 = 0}`.
    pub fn main_1_iii() -> NormalizedGerm {
        NormalizedGerm::new(
            2,
            2,
            Series::Main,
            [1, 3, 1, 0],
            [1, 1, 1, 2],
            Equation::CyclicBinomial {
                psi0: Monomial::new([1, 1, 0, 0]),
                power: 1,
            },
        )
        .expect("preset germ is valid")
    }

    /// First order pattern at even subindex `mbar >= 4`: the cyclic quotient
    /// `1/(2 mbar)(1, -1, mbar+1)` germ with orders `(1, mbar-1, mbar+1, mbar)`.
    ///
    /// The quotient's own chart puts the curve at `{x2^2 = x1^(2 mbar - 2),
    /// x3 = 0}`, where `x3` vanishes identically; this row is the germ's
    /// normalized presentation of that datum.
    pub fn pattern_i(mbar: i64) -> Option<NormalizedGerm> {
        if mbar < 4 || mbar % 2 != 0 {
            return None;
        }
        let m = 2 * mbar;
        Some(
            NormalizedGerm::new(
                mbar,
                2,
                Series::Main,
                [1, m - 1, mbar + 1, 0],
                [1, mbar - 1, mbar + 1, mbar],
                Equation::CyclicBinomial {
                    psi0: Monomial::new([1, 1, 0, 0]),
                    power: 1,
                },
            )
            .expect("pattern data is valid"),
        )
    }

    /// Second order pattern at even subindex: orders `(1, 2 mbar - 1,
    /// mbar + 1, mbar)`. The cover is a hypersurface, not a quotient chart,
    /// so no binomial equation is attached.
    pub fn pattern_ii(mbar: i64) -> Option<NormalizedGerm> {
        if mbar < 2 || mbar % 2 != 0 {
            return None;
        }
        let m = 2 * mbar;
        Some(
            NormalizedGerm::new(
                mbar,
                2,
                Series::Main,
                [1, m - 1, mbar + 1, 0],
                [1, m - 1, mbar + 1, mbar],
                Equation::GeneralHypersurface,
            )
            .expect("pattern data is valid"),
        )
    }

    /// The splitting-degree 4 quotient `1/8(1,-1,1)` germ (curve
    /// `{y1^4 = y2^4, y3 = 0}`).
    pub fn main_2_i() -> NormalizedGerm {
        NormalizedGerm::new(
            2,
            4,
            Series::Main,
            [1, 7, 1, 0],
            [1, 1, 1, 2],
            Equation::CyclicBinomial {
                psi0: Monomial::new([1, 1, 0, 0]),
                power: 1,
            },
        )
        .expect("preset germ is valid")
    }

    /// The splitting-degree 4 quotient `1/8(3,-3,1)` germ (curve
    /// `{y2^2 = y3^2, y2 y3 = y1^2}`).
    pub fn main_2_ii() -> NormalizedGerm {
        NormalizedGerm::new(
            2,
            4,
            Series::Main,
            [3, 5, 1, 0],
            [1, 1, 1, 2],
            Equation::CyclicBinomial {
                psi0: Monomial::new([1, 1, 0, 0]),
                power: 1,
            },
        )
        .expect("preset germ is valid")
    }

    /// Marker for a smooth point.
    pub fn smooth() -> NormalizedGerm {
        NormalizedGerm::smooth_marker()
    }
}
