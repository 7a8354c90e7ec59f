#![allow(dead_code)] // each test binary uses its own slice of the oracles

//! Shared test oracles: independent, deliberately naive implementations used
//! to pin derived values. These never call the production search paths they
//! check.

use std::collections::BTreeMap;

use moriconic::germ::NormalizedGerm;
use moriconic::weights::{Binomial, Grading, Monomial};

/// Naive box scan: all non-unit monomials with order at most `cap`, by
/// quadruple loop over exponents.
pub fn oracle_monomials(g: &Grading, cap: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let bound = |i: usize| (cap / g.ords[i]) as u32;
    for e1 in 0..=bound(0) {
        for e2 in 0..=bound(1) {
            for e3 in 0..=bound(2) {
                for e4 in 0..=bound(3) {
                    let mono = Monomial::new([e1, e2, e3, e4]);
                    if !mono.is_unit() && naive_ord(&mono, g) <= cap {
                        out.push(mono);
                    }
                }
            }
        }
    }
    out
}

/// Order by explicit summation, written independently of the library path.
pub fn naive_ord(mono: &Monomial, g: &Grading) -> i64 {
    let mut total = 0;
    for i in 0..4 {
        for _ in 0..mono.exp(i) {
            total += g.ords[i];
        }
    }
    total
}

/// Weight by repeated modular addition.
pub fn naive_weight(mono: &Monomial, g: &Grading) -> i64 {
    let m = g.modulus();
    let mut acc = 0i64;
    for i in 0..4 {
        for _ in 0..mono.exp(i) {
            acc = (acc + g.weights[i].value()).rem_euclid(m);
        }
    }
    acc
}

/// The word of variable indices with multiplicity: `x1^2*x3 -> [0, 0, 2]`.
/// Lexicographic comparison of these words is an independent formulation of
/// the variable-major tie-break.
pub fn index_word(mono: &Monomial) -> Vec<usize> {
    let mut w = Vec::new();
    for i in 0..4 {
        for _ in 0..mono.exp(i) {
            w.push(i);
        }
    }
    w
}

/// Minimum order in a weight class with its word-lexicographic least
/// witness, by exhaustive scan.
pub fn oracle_min_ord(g: &Grading, target: i64, cap: i64) -> Option<(i64, Monomial)> {
    oracle_monomials(g, cap)
        .into_iter()
        .filter(|m| naive_weight(m, g) == target.rem_euclid(g.modulus()))
        .min_by(|a, b| {
            naive_ord(a, g)
                .cmp(&naive_ord(b, g))
                .then_with(|| index_word(a).cmp(&index_word(b)))
        })
        .map(|m| (naive_ord(&m, g), m))
}

/// Whether `mono = a * b` for non-unit invariant monomials `a, b`: the
/// product-pair formulation of non-simplicity.
pub fn oracle_is_simple(mono: &Monomial, g: &Grading) -> bool {
    if naive_weight(mono, g) != 0 {
        return false;
    }
    let cap = naive_ord(mono, g);
    for a in oracle_monomials(g, cap) {
        if a == *mono || !a.divides(mono) {
            continue;
        }
        let b = a.quotient_of(mono).unwrap();
        if b.is_unit() {
            continue;
        }
        if naive_weight(&a, g) == 0 && naive_weight(&b, g) == 0 {
            return false;
        }
    }
    true
}

/// Binomial vanishing by the explicit per-component phase check: on every
/// component `j` of the parametrized curve the phases and orders of `psi`
/// and `x4^n` must agree.
pub fn oracle_vanishes(b: &Binomial, germ: &NormalizedGerm) -> bool {
    if b.psi.exp(3) != 0 {
        return false;
    }
    let g = germ.grading();
    let m = germ.index();
    if naive_ord(&b.psi, &g) != b.power as i64 * g.ords[3] {
        return false;
    }
    let delta = (naive_weight(&b.psi, &g) - b.power as i64 * g.weights[3].value()).rem_euclid(m);
    (0..germ.d()).all(|j| (j * delta).rem_euclid(m) == 0)
}

/// Jacobian order by Leibniz expansion of the determinant of the partial
/// derivatives with respect to `x1, x2, x3`, substituted along the
/// parametrization. Returns `None` when the determinant vanishes on the
/// curve (infinite order).
pub fn oracle_jacobian_ord(triple: &[Binomial; 3], germ: &NormalizedGerm) -> Option<i64> {
    let g = germ.grading();
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    // Each Leibniz term is a signed monomial; collect by exponent vector.
    let mut terms: BTreeMap<[i64; 4], i64> = BTreeMap::new();
    for (perm, sign) in PERMS {
        let mut coeff = sign;
        let mut exps = [0i64; 4];
        let mut ok = true;
        for (i, &col) in perm.iter().enumerate() {
            let e = triple[i].psi.exp(col) as i64;
            if e == 0 {
                ok = false;
                break;
            }
            coeff *= e;
            for v in 0..4 {
                exps[v] += triple[i].psi.exp(v) as i64;
            }
            exps[col] -= 1;
        }
        if ok {
            *terms.entry(exps).or_insert(0) += coeff;
        }
    }
    terms.retain(|_, c| *c != 0);
    terms
        .keys()
        .map(|e| (0..4).map(|v| e[v] * g.ords[v]).sum())
        .min()
}

/// Brute-force minimum of `[phi, phi1, phi2]` over independent generator
/// pairs: naive generator enumeration, naive vanishing test, full pair scan.
pub fn oracle_pair_minimum(germ: &NormalizedGerm, cap: i64) -> Option<i64> {
    let g = germ.grading();
    let moriconic::germ::Equation::CyclicBinomial { psi0, power } = germ.equation() else {
        return None;
    };
    let phi = Binomial::new(psi0, power);
    let a4 = g.ords[3];
    let mut gens = Vec::new();
    for psi in oracle_monomials(&g, cap) {
        if psi.exp(3) != 0 {
            continue;
        }
        let o = naive_ord(&psi, &g);
        if o % a4 != 0 {
            continue;
        }
        let b = Binomial::new(psi, (o / a4) as u32);
        if oracle_vanishes(&b, germ) {
            gens.push(b);
        }
    }
    let mut best: Option<i64> = None;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if let Some(v) = oracle_jacobian_ord(&[phi, gens[i], gens[j]], germ) {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
    }
    best
}

/// Brute-force exact `i_P` from the defining formula, entirely on oracle
/// paths: `i_P mbar = mbar - ord(x4) - min(class of -wt(x3)) + pair minimum`.
pub fn oracle_ip_exact(germ: &NormalizedGerm, cap: i64) -> Option<i64> {
    let g = germ.grading();
    let mbar = germ.mbar();
    let (wp_tunits, _) = oracle_min_ord(&g, -g.weights[2].value(), cap)?;
    let minimum = oracle_pair_minimum(germ, cap)?;
    let numerator = mbar - g.ords[3] - wp_tunits + minimum;
    (numerator % mbar == 0).then_some(numerator / mbar)
}

/// Tiny deterministic generator for the seeded acceptance sweeps.
#[allow(dead_code)]
pub struct Lcg(pub u64);

#[allow(dead_code)]
impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        // Numerical Recipes LCG constants.
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}
