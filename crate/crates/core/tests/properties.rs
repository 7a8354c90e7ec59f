//! Property suites over randomized inputs. Each suite runs at least 200
//! cases (proptest's 256 default, pinned explicitly).

mod support;

use std::sync::OnceLock;

use proptest::prelude::*;

use moriconic::classify::{canonicalize, enumerate_candidates, ClassifyCaps};
use moriconic::frac::Frac;
use moriconic::germ::{Equation, NormalizedGerm};
use moriconic::invariants::{compute_ip_exact, compute_ip_lower, SearchCaps};
use moriconic::verify::cyclotomic::Cyclotomic;
use moriconic::verify::families::{apply_action, builtin_examples, builtin_names};
use moriconic::verify::poly::MPoly;
use moriconic::weights::{
    enumerate_by_weight, min_ord_of_weight, ord_of, weight_of, Grading, MinOrd, Monomial, Residue,
};

const CASES: u32 = 256;

fn arb_grading() -> impl Strategy<Value = (Grading, i64)> {
    (2i64..=16)
        .prop_flat_map(|m| {
            (
                Just(m),
                prop::array::uniform4(0i64..m),
                prop::array::uniform4(1i64..=6),
            )
        })
        .prop_map(|(m, ws, ords)| {
            (
                Grading::new(
                    [
                        Residue::new(ws[0], m),
                        Residue::new(ws[1], m),
                        Residue::new(ws[2], m),
                        Residue::new(ws[3], m),
                    ],
                    ords,
                ),
                m,
            )
        })
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    prop::array::uniform4(0u32..=5).prop_map(Monomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn ord_and_weight_are_additive(
        (g, _m) in arb_grading(),
        a in arb_monomial(),
        b in arb_monomial(),
    ) {
        let ab = a.mul(&b);
        prop_assert_eq!(ord_of(&ab, &g), ord_of(&a, &g) + ord_of(&b, &g));
        prop_assert_eq!(weight_of(&ab, &g), weight_of(&a, &g).add(weight_of(&b, &g)));
    }

    #[test]
    fn min_ord_agrees_with_enumeration(
        (g, m) in arb_grading(),
        target in 0i64..16,
        cap_scale in 1i64..=4,
    ) {
        let target = Residue::new(target % m, m);
        let cap = cap_scale * m;
        let listed = enumerate_by_weight(&g, target, cap);
        match min_ord_of_weight(&g, target, cap) {
            MinOrd::Found { ord, witness } => {
                prop_assert!(!listed.is_empty());
                prop_assert_eq!(ord, ord_of(&listed[0], &g));
                prop_assert_eq!(witness, listed[0]);
            }
            MinOrd::Exhausted { .. } => prop_assert!(listed.is_empty()),
        }
    }

    #[test]
    fn enumeration_is_sorted_and_duplicate_free(
        (g, m) in arb_grading(),
        target in 0i64..16,
    ) {
        let target = Residue::new(target % m, m);
        let listed = enumerate_by_weight(&g, target, 2 * m);
        for w in listed.windows(2) {
            let o0 = ord_of(&w[0], &g);
            let o1 = ord_of(&w[1], &g);
            prop_assert!(o0 < o1 || (o0 == o1 && w[0].var_major_cmp(&w[1]).is_lt()));
        }
    }
}

/// Canonical pool of validated candidate germs over small cells.
fn germ_pool() -> &'static Vec<NormalizedGerm> {
    static POOL: OnceLock<Vec<NormalizedGerm>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = Vec::new();
        for (mbar, d) in [
            (1, 2),
            (2, 1),
            (2, 2),
            (2, 4),
            (3, 2),
            (4, 1),
            (4, 2),
            (6, 2),
            (8, 1),
        ] {
            let caps = ClassifyCaps::for_subindex(mbar);
            pool.extend(enumerate_candidates(mbar, d, &caps));
        }
        assert!(pool.len() > 20, "pool has {} germs", pool.len());
        pool
    })
}

fn binomial_pool() -> &'static Vec<NormalizedGerm> {
    static POOL: OnceLock<Vec<NormalizedGerm>> = OnceLock::new();
    POOL.get_or_init(|| {
        germ_pool()
            .iter()
            .filter(|g| {
                matches!(g.equation(), Equation::CyclicBinomial { .. })
                    && g.series() == moriconic::germ::Series::Main
            })
            .cloned()
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn lower_bound_never_exceeds_exact_ip(idx in 0usize..1000) {
        let pool = binomial_pool();
        let germ = &pool[idx % pool.len()];
        let caps = SearchCaps::for_germ(germ);
        let exact = compute_ip_exact(germ, &caps).expect("pool germs support exact mode");
        let lower = compute_ip_lower(germ, &caps).expect("pool germs support the bound");
        prop_assert!(
            lower.bound <= Frac::int(exact.value),
            "bound {:?} > exact {} on {:?}",
            lower.bound,
            exact.value,
            germ
        );
        // Exact values are non-negative integers.
        prop_assert!(exact.value >= 0);
    }

    #[test]
    fn wp_is_at_least_one_over_subindex(idx in 0usize..1000) {
        let pool = germ_pool();
        let germ = &pool[idx % pool.len()];
        let caps = SearchCaps::for_germ(germ);
        if let Ok(wp) = moriconic::invariants::compute_wp(germ, &caps) {
            prop_assert!(wp.value >= Frac::new(1, germ.mbar()));
            prop_assert_eq!(germ.mbar() % wp.value.den(), 0, "denominator divides the subindex");
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_gauge_stable(
        idx in 0usize..1000,
        unit_pick in 0usize..8,
        swap in any::<bool>(),
    ) {
        let pool = germ_pool();
        let germ = &pool[idx % pool.len()];
        let canon = canonicalize(germ);
        prop_assert_eq!(canonicalize(&canon), canon);

        // Twist by an allowed character change and optionally the swap; the
        // canonical form must not move.
        let m = germ.index();
        let mbar = germ.mbar();
        let units: Vec<i64> = (1..=m)
            .filter(|u| num_integer_gcd(*u, m) == 1 && (u - 1).rem_euclid(mbar) == 0)
            .collect();
        let u = units[unit_pick % units.len()];
        let mut weights = [0i64; 4];
        for i in 0..4 {
            weights[i] = germ.weight(i).scale(u).value();
        }
        let mut ords = germ.ords();
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
        let twisted = NormalizedGerm::new(mbar, germ.d(), germ.series(), weights, ords, equation)
            .expect("gauge twist preserves validity");
        prop_assert_eq!(canonicalize(&twisted), canon);
    }

    #[test]
    fn wp_tunits_congruent_when_a3_congruent(idx in 0usize..1000) {
        // mbar * w_P is congruent to -ord(x3) mod mbar whenever the search
        // succeeds: every member of the class has that residue.
        let pool = germ_pool();
        let germ = &pool[idx % pool.len()];
        let caps = SearchCaps::for_germ(germ);
        if let Ok(wp) = moriconic::invariants::compute_wp(germ, &caps) {
            prop_assert_eq!(
                (wp.tunits + germ.ord(2)).rem_euclid(germ.mbar()),
                0
            );
        }
    }
}

fn num_integer_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn arb_mpoly(order: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::array::uniform6(0u8..=2), -3i64..=3, 0i64..order as i64),
        1..=4,
    )
    .prop_map(move |terms| {
        let mut p = MPoly::zero(order);
        for (exps, c, k) in terms {
            let coeff = Cyclotomic::from_integer(order, c).mul(&Cyclotomic::root(order, k));
            p = p.add(&MPoly::term(coeff, exps));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn action_order_is_identity_on_random_polynomials(
        family_pick in 0usize..5,
        seed_poly in arb_mpoly(8),
    ) {
        let name = builtin_names()[family_pick];
        let k = (name == "cAx4-family").then_some(2);
        let fam = builtin_examples(name, k).unwrap();
        // Rebuild the random polynomial in the family's field.
        let mut p = MPoly::zero(fam.field_order);
        for (e, c) in seed_poly.terms() {
            let k = c
                .coeffs()
                .iter()
                .position(|x| !num_traits_is_zero(x))
                .unwrap_or(0) as i64;
            let q = Cyclotomic::root(fam.field_order, k);
            p = p.add(&MPoly::term(q, *e));
        }
        let mut image = p.clone();
        for _ in 0..fam.action.order {
            image = apply_action(&image, &fam.action);
        }
        prop_assert_eq!(image, p);
    }

    #[test]
    fn cyclotomic_roots_have_exact_order(n in 2u32..=16, k in 0i64..16) {
        let e = Cyclotomic::root(n, k % n as i64);
        prop_assert_eq!(e.pow(n as i64).unwrap(), Cyclotomic::one(n));
        // Reduction is idempotent: re-reducing the stored form is a no-op.
        let again = e.add(&Cyclotomic::zero(n));
        prop_assert_eq!(again, e);
    }

    #[test]
    fn hj_expansion_folds_back(n in 2i64..=500, q_raw in 1i64..500) {
        let q = 1 + q_raw % (n - 1).max(1);
        prop_assume!(q < n && num_integer_gcd(n, q) == 1);
        let chain = moriconic::duval::hj_expand(n, q).unwrap();
        prop_assert!(chain.iter().all(|&b| b >= 2));
        prop_assert_eq!(
            moriconic::duval::hj_fold(&chain),
            Some(Frac::new(n, q))
        );
    }
}

fn num_traits_is_zero(x: &num_rational::BigRational) -> bool {
    use num_traits::Zero;
    x.is_zero()
}
