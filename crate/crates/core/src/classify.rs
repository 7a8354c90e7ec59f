//! Bounded exhaustive enumeration of candidate normalized germs and the
//! sieve that re-derives the local case analysis mechanically.
//!
//! The candidate axioms are: main-series weight row `(a, -a, b, 0)` with
//! `a, b` prime to the index, `ord(x4)` equal to the subindex, orders
//! congruent to weights mod the subindex, all passing the normalization
//! axioms, canonical under the `x1 <-> x2` swap and allowed character
//! changes. The sieve excludes candidates with machine-checkable
//! certificates (failed parity/divisibility/congruence or exact budget
//! arithmetic) and tags the survivors against the known order patterns.
//!
//! Two filter modes: `Strict` uses only `i_P >= 1` at a singular point and is
//! unconditionally sound; `BinomialJacobian` additionally uses the
//! simple-triple lower bound, which is proof-faithful but carries its
//! certificate into every exclusion. Strict-mode survivors always contain
//! binomial-mode survivors.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::frac::Frac;
use crate::germ::{
    presets, structural_predicates, validate_with_cap, Equation, NormalizedGerm, Series,
};
use crate::invariants::{
    compute_ip_exact, compute_ip_lower, compute_wp, IpExact, IpLower, SearchCaps, WpValue,
};
use crate::weights::{weight_of, Monomial, Residue};

/// Caps for the candidate stream and the invariant searches behind the sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyCaps {
    /// Per-coordinate bound on the orders `a1, a2, a3`.
    pub coord_cap: i64,
    /// Bound on `a1 + a2`; the case analysis derivation gives `3*mbar`.
    pub a12_cap: i64,
    /// Bound on `a3`; likewise `3*mbar`.
    pub a3_cap: i64,
    /// Caps for the weight-class and generator searches.
    pub search: SearchCaps,
}

impl ClassifyCaps {
    pub fn for_subindex(mbar: i64) -> Self {
        let m3 = 3 * mbar.max(1);
        ClassifyCaps {
            coord_cap: m3,
            a12_cap: m3,
            a3_cap: m3,
            search: SearchCaps::for_subindex(mbar),
        }
    }
}

/// Sieve filter modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FilterMode {
    /// Budget with `i_P >= 1` only.
    Strict,
    /// Budget with the simple-triple lower bound for `i_P`.
    BinomialJacobian,
}

/// Which of the two order patterns (or neither) a survivor matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PatternTag {
    /// `ord(x3) = 1`: a good anticanonical member exists.
    MainOrd1,
    /// Orders `(1, mbar-1, mbar+1, mbar)`.
    PatternI,
    /// Orders `(1, 2*mbar-1, mbar+1, mbar)`.
    PatternII,
    /// Neither pattern: would contradict the case analysis at this cap.
    Unmatched,
}

/// The local classification case a germ instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremCase {
    /// Index-2 quotient of a Gorenstein conic bundle (`mbar = 1, d = 2`).
    Main1i,
    /// The imprimitive `cAx/4` point.
    Main1ii,
    /// The `1/4(1,3,1)` quotient shape (`mbar = 2, d = 2, ord(x3) = 1`).
    Main1iii,
    /// Pattern (i): `1/(2 mbar)(1,-1,mbar+1)` with `mbar >= 4` even.
    Main1iv,
    /// Pattern (ii): hypersurface shape at even `mbar`.
    Main1v,
    /// Splitting degree 4, character value 1.
    Main2i,
    /// Splitting degree 4, character value 3.
    Main2ii,
    Unmatched,
}

impl std::fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremCase::Main1i => "A1-quotient-conic-bundle",
            TheoremCase::Main1ii => "A1-cAx4",
            TheoremCase::Main1iii => "A1-cyclic-1/4(1,3,1)",
            TheoremCase::Main1iv => "A1-cyclic-1/(2m)(1,-1,m+1)",
            TheoremCase::Main1v => "A1-cA/m-hypersurface",
            TheoremCase::Main2i => "A3-cyclic-a=1",
            TheoremCase::Main2ii => "A3-cyclic-a=3",
            TheoremCase::Unmatched => "unmatched",
        };
        f.write_str(s)
    }
}

/// Machine-checkable certificate for an exclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Splitting degree must be even.
    DParity { d: i64 },
    /// `mbar >= d/2` fails.
    SubindexBound { mbar: i64, d: i64 },
    /// `2*mbar = 0 mod d` fails.
    Divisibility { mbar: i64, d: i64 },
    /// `ord(x3) = 1 mod mbar` fails.
    OrdCongruence { a3: i64, mbar: i64 },
    /// The budget `(-K.C) + w_P + i_P <= 4` fails with the stated floor for
    /// `i_P` (1 in strict mode, the triple bound in binomial mode).
    BudgetExceeded {
        anticanonical: Frac,
        wp: WpValue,
        ip_floor: i64,
        ip_lower: Option<IpLower>,
        total: Frac,
    },
}

/// An excluded candidate with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub germ: NormalizedGerm,
    pub certificate: Certificate,
}

/// Invariants attached to a survivor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorInvariants {
    pub wp: Option<WpValue>,
    pub fc: Frac,
    pub ip_lower: Option<IpLower>,
    pub ip_exact: Option<IpExact>,
}

/// Exact-formula evidence that a listed case overshoots the budget; kept on
/// the survivor rather than excluding it, since the case analysis lists the
/// shape. Recorded verbatim in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensionCertificate {
    pub ip_exact: IpExact,
    pub anticanonical: Frac,
    pub wp: Frac,
    pub budget_total: Frac,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub germ: NormalizedGerm,
    pub invariants: SurvivorInvariants,
    pub pattern: PatternTag,
    pub theorem_case: TheoremCase,
    /// A capped search could not settle this germ completely.
    pub cap_limited: bool,
    pub tension: Option<TensionCertificate>,
}

/// Result of a classification run: survivors and exclusions partition the
/// canonical candidate set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorReport {
    pub mbar: i64,
    pub d: i64,
    pub mode: FilterMode,
    pub caps: ClassifyCaps,
    pub survivors: Vec<Survivor>,
    pub excluded: Vec<Exclusion>,
}

impl SurvivorReport {
    pub fn unmatched(&self) -> impl Iterator<Item = &Survivor> {
        self.survivors
            .iter()
            .filter(|s| s.pattern == PatternTag::Unmatched)
    }

    pub fn survivors_with_a3_above_subindex(&self) -> impl Iterator<Item = &Survivor> {
        self.survivors.iter().filter(|s| s.germ.ord(2) > s.germ.mbar())
    }
}

fn allowed_character_units(m: i64, mbar: i64) -> Vec<i64> {
    (1..=m)
        .filter(|u| num_integer::gcd(*u, m) == 1 && (u - 1).rem_euclid(mbar) == 0)
        .collect()
}

fn orbit_key(germ: &NormalizedGerm) -> ([i64; 4], [i64; 4], Equation) {
    (
        [
            germ.weight(0).value(),
            germ.weight(1).value(),
            germ.weight(2).value(),
            germ.weight(3).value(),
        ],
        germ.ords(),
        germ.equation(),
    )
}

/// Canonical representative of a germ under the two allowed moves: swapping
/// `x1 <-> x2` and replacing the character within its subindex class. Picks
/// the lexicographically least `(weights, orders)` tuple; idempotent.
pub fn canonicalize(germ: &NormalizedGerm) -> NormalizedGerm {
    let m = germ.index();
    let mbar = germ.mbar();
    let mut best: Option<(([i64; 4], [i64; 4], Equation), NormalizedGerm)> = None;
    for u in allowed_character_units(m, mbar) {
        for swap in [false, true] {
            let mut weights = [0i64; 4];
            let mut ords = germ.ords();
            for i in 0..4 {
                weights[i] = germ.weight(i).scale(u).value();
            }
            let mut equation = germ.equation();
            if swap {
                weights.swap(0, 1);
                ords.swap(0, 1);
                if let Equation::CyclicBinomial { psi0, power } = equation {
                    let e = psi0.exps();
                    equation = Equation::CyclicBinomial {
                        psi0: Monomial::new([e[1], e[0], e[2], e[3]]),
                        power,
                    };
                }
            }
            let candidate = NormalizedGerm::new(mbar, germ.d(), germ.series(), weights, ords, equation)
                .expect("orbit move preserves validity");
            let key = orbit_key(&candidate);
            if best.as_ref().map_or(true, |(k, _)| key < *k) {
                best = Some((key, candidate));
            }
        }
    }
    best.expect("orbit is nonempty").1
}

/// Attach the cyclic-binomial equation when an order-`mbar` invariant
/// monomial in `x1, x2, x3` exists (the quotient-chart case).
fn attach_equation(germ: &NormalizedGerm) -> NormalizedGerm {
    if germ.series() != Series::Main {
        return *germ;
    }
    let g = germ.grading();
    let mbar = germ.mbar();
    let zero = Residue::zero(germ.index());
    let mut best: Option<Monomial> = None;
    let mut exps = [0u32; 3];
    scan_order_exact(&g, mbar, 0, 0, &mut exps, &mut |mono| {
        if weight_of(&mono, &g) == zero
            && best.map_or(true, |b| mono.var_major_cmp(&b).is_lt())
        {
            best = Some(mono);
        }
    });
    match best {
        Some(psi0) => germ
            .with_equation(Equation::CyclicBinomial { psi0, power: 1 })
            .expect("psi0 has no x4 part"),
        None => *germ,
    }
}

fn scan_order_exact(
    g: &crate::weights::Grading,
    target_ord: i64,
    var: usize,
    ord_so_far: i64,
    exps: &mut [u32; 3],
    visit: &mut impl FnMut(Monomial),
) {
    if var == 3 {
        if ord_so_far == target_ord {
            let mono = Monomial::new([exps[0], exps[1], exps[2], 0]);
            if !mono.is_unit() {
                visit(mono);
            }
        }
        return;
    }
    let mut e = 0u32;
    while ord_so_far + e as i64 * g.ords[var] <= target_ord {
        exps[var] = e;
        scan_order_exact(g, target_ord, var + 1, ord_so_far + e as i64 * g.ords[var], exps, visit);
        e += 1;
    }
    exps[var] = 0;
}

/// Deterministic stream of canonical validated candidates for the cell
/// `(mbar, d)`. Exceptional-series candidates are pinned by the `cAx/4`
/// table and emitted as a single germ exactly when the index is 4.
pub fn enumerate_candidates(mbar: i64, d: i64, caps: &ClassifyCaps) -> Vec<NormalizedGerm> {
    let m = mbar * d;
    if m <= 1 {
        return Vec::new();
    }
    let mut set: BTreeSet<NormalizedGerm> = BTreeSet::new();

    let units: Vec<i64> = (1..m).filter(|v| num_integer::gcd(*v, m) == 1).collect();
    for &a in &units {
        for &b in &units {
            let weights = [a, m - a, b, 0];
            let mut a1 = first_congruent(a, mbar);
            while a1 <= caps.coord_cap && a1 < caps.a12_cap {
                let mut a2 = first_congruent(m - a, mbar);
                while a2 <= caps.coord_cap && a1 + a2 <= caps.a12_cap {
                    let mut a3 = first_congruent(b, mbar);
                    while a3 <= caps.coord_cap.min(caps.a3_cap) {
                        let germ = NormalizedGerm::new(
                            mbar,
                            d,
                            Series::Main,
                            weights,
                            [a1, a2, a3, mbar],
                            Equation::GeneralHypersurface,
                        )
                        .expect("candidate data is structurally valid");
                        if validate_with_cap(&germ, caps.search.class_cap).is_normalized() {
                            set.insert(attach_equation(&canonicalize(&germ)));
                        }
                        a3 += mbar;
                    }
                    a2 += mbar;
                }
                a1 += mbar;
            }
        }
    }

    if m == 4 && mbar == 2 && d == 2 {
        let pinned = canonicalize(&presets::cax4());
        if validate_with_cap(&pinned, caps.search.class_cap).is_normalized() {
            set.insert(pinned);
        }
    }

    set.into_iter().collect()
}

fn first_congruent(w: i64, mbar: i64) -> i64 {
    let r = w.rem_euclid(mbar);
    if r == 0 {
        mbar
    } else {
        r
    }
}

/// Run the sieve over the canonical candidates of a cell.
pub fn classify(mbar: i64, d: i64, mode: FilterMode, caps: &ClassifyCaps) -> SurvivorReport {
    let candidates = enumerate_candidates(mbar, d, caps);
    let mut survivors = Vec::new();
    let mut excluded = Vec::new();

    let d_even = d % 2 == 0;
    let bound_ok = 2 * mbar >= d;
    let div_ok = (2 * mbar) % d == 0;

    for germ in candidates {
        if !d_even {
            excluded.push(Exclusion {
                germ,
                certificate: Certificate::DParity { d },
            });
            continue;
        }
        if !bound_ok {
            excluded.push(Exclusion {
                germ,
                certificate: Certificate::SubindexBound { mbar, d },
            });
            continue;
        }
        if !div_ok {
            excluded.push(Exclusion {
                germ,
                certificate: Certificate::Divisibility { mbar, d },
            });
            continue;
        }
        let preds = structural_predicates(&germ);
        if !preds.a3_congruence {
            excluded.push(Exclusion {
                germ,
                certificate: Certificate::OrdCongruence {
                    a3: germ.ord(2),
                    mbar,
                },
            });
            continue;
        }

        let anticanonical = Frac::new(1, mbar);
        let wp = compute_wp(&germ, &caps.search).ok();
        let fc = crate::invariants::compute_fc(&germ);

        if germ.ord(2) == 1 {
            // Good-elephant branch: kept unconditionally; in binomial mode we
            // still record the exact formula value and flag budget tension.
            let ip_exact = if mode == FilterMode::BinomialJacobian {
                compute_ip_exact(&germ, &caps.search).ok()
            } else {
                None
            };
            let tension = match (&wp, &ip_exact) {
                (Some(w), Some(e)) => {
                    let total = anticanonical + w.value + Frac::int(e.value);
                    (total > Frac::int(4)).then(|| TensionCertificate {
                        ip_exact: *e,
                        anticanonical,
                        wp: w.value,
                        budget_total: total,
                    })
                }
                _ => None,
            };
            survivors.push(Survivor {
                germ,
                invariants: SurvivorInvariants {
                    wp,
                    fc,
                    ip_lower: None,
                    ip_exact,
                },
                pattern: PatternTag::MainOrd1,
                theorem_case: theorem_case_for(&germ),
                cap_limited: false,
                tension,
            });
            continue;
        }

        // ord(x3) > mbar: the invariant sieve.
        let Some(wp) = wp else {
            // Could not even compute w_P below the cap: inconclusive, never
            // silently dropped.
            survivors.push(Survivor {
                germ,
                invariants: SurvivorInvariants {
                    wp: None,
                    fc,
                    ip_lower: None,
                    ip_exact: None,
                },
                pattern: pattern_tag(&germ),
                theorem_case: theorem_case_for(&germ),
                cap_limited: true,
                tension: None,
            });
            continue;
        };

        let (ip_floor, ip_lower) = match mode {
            FilterMode::Strict => (1, None),
            FilterMode::BinomialJacobian => match compute_ip_lower(&germ, &caps.search) {
                Ok(lb) => (lb.bound.ceil_int().max(1), Some(lb)),
                Err(_) => (1, None),
            },
        };
        let total = anticanonical + wp.value + Frac::int(ip_floor);
        if total > Frac::int(4) {
            excluded.push(Exclusion {
                germ,
                certificate: Certificate::BudgetExceeded {
                    anticanonical,
                    wp,
                    ip_floor,
                    ip_lower,
                    total,
                },
            });
            continue;
        }
        let cap_limited = ip_lower.as_ref().map_or(false, |l| l.cap_hit);
        survivors.push(Survivor {
            germ,
            invariants: SurvivorInvariants {
                wp: Some(wp),
                fc,
                ip_lower,
                ip_exact: None,
            },
            pattern: pattern_tag(&germ),
            theorem_case: theorem_case_for(&germ),
            cap_limited,
            tension: None,
        });
    }

    SurvivorReport {
        mbar,
        d,
        mode,
        caps: *caps,
        survivors,
        excluded,
    }
}

/// Match a survivor with `ord(x3) > mbar` against the two order patterns.
/// The comparison goes through canonical shapes on both sides, so any gauge
/// presentation of a pattern germ matches its row.
fn pattern_tag(germ: &NormalizedGerm) -> PatternTag {
    if germ.ord(2) == 1 {
        return PatternTag::MainOrd1;
    }
    let mbar = germ.mbar();
    let m = germ.index();
    if germ.series() != Series::Main || germ.d() != 2 || mbar % 2 != 0 {
        return PatternTag::Unmatched;
    }
    let shape = canonical_shape(germ);
    let row = |ords: [i64; 4]| {
        NormalizedGerm::new(
            mbar,
            2,
            Series::Main,
            [1, m - 1, mbar + 1, 0],
            ords,
            Equation::GeneralHypersurface,
        )
        .expect("pattern row data is valid")
    };
    if mbar >= 4 && shape == canonical_shape(&row([1, mbar - 1, mbar + 1, mbar])) {
        PatternTag::PatternI
    } else if shape == canonical_shape(&row([1, 2 * mbar - 1, mbar + 1, mbar])) {
        PatternTag::PatternII
    } else {
        PatternTag::Unmatched
    }
}

/// The `(weights, orders)` part of the canonical form; the equation only
/// breaks exact ties inside `canonicalize`, so this is orbit-invariant.
fn canonical_shape(germ: &NormalizedGerm) -> ([i64; 4], [i64; 4]) {
    let c = canonicalize(germ);
    let (w, o, _) = orbit_key(&c);
    (w, o)
}

/// The classification case a canonical germ instantiates, via its
/// `(mbar, d, ord, weight)` shape.
pub fn theorem_case_for(germ: &NormalizedGerm) -> TheoremCase {
    let c = canonicalize(germ);
    let mbar = c.mbar();
    let d = c.d();
    let m = c.index();
    if c.series() == Series::Exceptional {
        return if m == 4 && mbar == 2 {
            TheoremCase::Main1ii
        } else {
            TheoremCase::Unmatched
        };
    }
    if mbar == 1 && d == 2 {
        return TheoremCase::Main1i;
    }
    if d == 2 {
        if mbar == 2 && c.ord(2) == 1 {
            return TheoremCase::Main1iii;
        }
        match pattern_tag(&c) {
            PatternTag::PatternI if mbar >= 4 && mbar % 2 == 0 => return TheoremCase::Main1iv,
            PatternTag::PatternII if mbar % 2 == 0 => return TheoremCase::Main1v,
            _ => {}
        }
    }
    if d == 4 && mbar == 2 && c.ord(2) == 1 {
        // Gauge the character so wt(x3) = 1; the residual datum is wt(x1)
        // up to sign, which is 1 or 3 mod 8.
        let w3 = c.weight(2).value();
        let u = (1..m)
            .find(|u| (u * w3).rem_euclid(m) == 1)
            .expect("wt(x3) is a unit");
        let a = (u * c.weight(0).value()).rem_euclid(m);
        let a = a.min(m - a);
        return match a {
            1 => TheoremCase::Main2i,
            3 => TheoremCase::Main2ii,
            _ => TheoremCase::Unmatched,
        };
    }
    TheoremCase::Unmatched
}

/// Tag every survivor with the classification case it instantiates.
pub fn match_theorem_patterns(survivors: &[Survivor]) -> Vec<(NormalizedGerm, TheoremCase)> {
    survivors
        .iter()
        .map(|s| (s.germ, theorem_case_for(&s.germ)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::presets;

    #[test]
    fn canonicalize_examples() {
        let germ = NormalizedGerm::new(
            4,
            2,
            Series::Main,
            [7, 1, 5, 0],
            [3, 1, 5, 4],
            Equation::GeneralHypersurface,
        )
        .unwrap();
        let c = canonicalize(&germ);
        assert_eq!(
            [c.weight(0).value(), c.weight(1).value(), c.weight(2).value(), c.weight(3).value()],
            [1, 7, 5, 0]
        );
        assert_eq!(c.ords(), [1, 3, 5, 4]);

        // Idempotence.
        assert_eq!(canonicalize(&c), c);

        // Character-flipped presentations share a canonical form.
        let a = canonicalize(&presets::main_2_ii());
        let flipped = NormalizedGerm::new(
            2,
            4,
            Series::Main,
            [5, 3, 7, 0],
            [1, 1, 1, 2],
            presets::main_2_ii().equation(),
        )
        .unwrap();
        let b = canonicalize(&flipped);
        assert_eq!(orbit_key(&a), orbit_key(&b));
    }

    #[test]
    fn enumerate_small_cells() {
        let caps = ClassifyCaps::for_subindex(2);
        let cands = enumerate_candidates(2, 2, &caps);
        assert!(!cands.is_empty());
        // Contains the 1/4(1,3,1) germ up to canonical form.
        let target = canonicalize(&presets::main_1_iii());
        assert!(cands.iter().any(|g| orbit_key(g) == orbit_key(&target)));
        // And the pinned exceptional germ.
        assert!(cands.iter().any(|g| g.series() == Series::Exceptional));

        // Gorenstein-trivial stream.
        assert!(enumerate_candidates(1, 1, &ClassifyCaps::for_subindex(1)).is_empty());
    }

    #[test]
    fn enumerate_finds_both_patterns() {
        let mut caps = ClassifyCaps::for_subindex(4);
        caps.coord_cap = 7;
        caps.a3_cap = 7;
        let cands = enumerate_candidates(4, 2, &caps);
        let pi = canonicalize(&presets::pattern_i(4).unwrap());
        let pii = canonicalize(&presets::pattern_ii(4).unwrap());
        assert!(cands.iter().any(|g| orbit_key(g) == orbit_key(&pi)));
        assert!(cands.iter().any(|g| orbit_key(g) == orbit_key(&pii)));
    }

    #[test]
    fn classify_empty_cells() {
        let caps = ClassifyCaps::for_subindex(2);
        let report = classify(2, 3, FilterMode::Strict, &caps);
        assert!(report.survivors.is_empty());
        assert!(report
            .excluded
            .iter()
            .all(|e| matches!(e.certificate, Certificate::DParity { .. })));

        let caps = ClassifyCaps::for_subindex(1);
        let report = classify(1, 4, FilterMode::Strict, &caps);
        assert!(report.survivors.is_empty());
        assert!(report
            .excluded
            .iter()
            .all(|e| matches!(e.certificate, Certificate::SubindexBound { .. })));
    }

    #[test]
    fn classify_4_2_binomial_matches_patterns() {
        let caps = ClassifyCaps::for_subindex(4);
        let report = classify(4, 2, FilterMode::BinomialJacobian, &caps);
        let above: Vec<_> = report.survivors_with_a3_above_subindex().collect();
        assert!(!above.is_empty());
        for s in &above {
            assert!(
                matches!(s.pattern, PatternTag::PatternI | PatternTag::PatternII),
                "unexpected survivor {:?} tagged {:?}",
                s.germ,
                s.pattern
            );
        }
        let tags: BTreeSet<_> = above.iter().map(|s| format!("{:?}", s.pattern)).collect();
        assert_eq!(tags.len(), 2);
    }

    #[test]
    fn strict_contains_binomial_survivors() {
        for (mbar, d) in [(2, 2), (4, 2), (2, 4)] {
            let caps = ClassifyCaps::for_subindex(mbar);
            let strict = classify(mbar, d, FilterMode::Strict, &caps);
            let binom = classify(mbar, d, FilterMode::BinomialJacobian, &caps);
            let strict_set: BTreeSet<_> =
                strict.survivors.iter().map(|s| orbit_key(&s.germ)).collect();
            for s in &binom.survivors {
                assert!(strict_set.contains(&orbit_key(&s.germ)));
            }
        }
    }

    #[test]
    fn classify_partitions_candidates() {
        let caps = ClassifyCaps::for_subindex(2);
        let cands = enumerate_candidates(2, 4, &caps);
        let report = classify(2, 4, FilterMode::BinomialJacobian, &caps);
        assert_eq!(cands.len(), report.survivors.len() + report.excluded.len());
        // Determinism.
        let again = classify(2, 4, FilterMode::BinomialJacobian, &caps);
        assert_eq!(report, again);
    }

    #[test]
    fn survivors_are_internally_consistent() {
        // Every survivor satisfies the a3 congruence and its own budget.
        for (mbar, d) in [(2i64, 2i64), (2, 4), (4, 2), (6, 2)] {
            let caps = ClassifyCaps::for_subindex(mbar);
            let report = classify(mbar, d, FilterMode::BinomialJacobian, &caps);
            for s in &report.survivors {
                assert_eq!((s.germ.ord(2) - 1).rem_euclid(mbar), 0);
                if let (Some(wp), Some(lb)) = (&s.invariants.wp, &s.invariants.ip_lower) {
                    let total = Frac::new(1, mbar) + wp.value + Frac::int(lb.bound.ceil_int().max(1));
                    assert!(total <= Frac::int(4), "survivor breaks its own budget");
                }
            }
        }
    }

    #[test]
    fn residue_classes_realized_below_linear_cap() {
        // With wt(x1) prime to the index, powers of x1 reach every class
        // below m * max(orders).
        use crate::weights::{min_ord_of_weight, MinOrd, Residue};
        for germ in [
            presets::pattern_i(4).unwrap(),
            presets::main_2_ii(),
            presets::main_1_iii(),
        ] {
            let g = germ.grading();
            let m = germ.index();
            let cap = m * germ.ords().iter().max().unwrap();
            for target in 0..m {
                assert!(matches!(
                    min_ord_of_weight(&g, Residue::new(target, m), cap),
                    MinOrd::Found { .. }
                ));
            }
        }
    }

    #[test]
    fn theorem_case_examples() {
        assert_eq!(theorem_case_for(&presets::main_2_i()), TheoremCase::Main2i);
        assert_eq!(theorem_case_for(&presets::main_2_ii()), TheoremCase::Main2ii);
        assert_eq!(
            theorem_case_for(&presets::pattern_i(4).unwrap()),
            TheoremCase::Main1iv
        );
        assert_eq!(
            theorem_case_for(&presets::pattern_ii(6).unwrap()),
            TheoremCase::Main1v
        );
        assert_eq!(theorem_case_for(&presets::main_1_iii()), TheoremCase::Main1iii);
        assert_eq!(theorem_case_for(&presets::cax4()), TheoremCase::Main1ii);
    }
}
