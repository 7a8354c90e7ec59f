//! Residue/weight and vanishing-order calculus for semi-invariant monomials
//! on the canonical cover, plus bounded enumeration of weight classes.
//!
//! # Conventions
//!
//! - Weights live in `Z/m` where `m` is the index of the germ; a monomial's
//!   weight is the weighted sum of its exponents.
//! - Orders are measured in `t`-units on a component of the covering curve.
//!   They stay integral here; the division by the subindex happens in the
//!   invariants layer.
//! - Ties between monomials of equal order are broken variable-major: at the
//!   first coordinate where two exponent vectors differ, the *larger*
//!   exponent sorts first, so `x1^2*x3` precedes `x2*x3^2`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Number of chart coordinates.
pub const COORDS: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    /// The binomial's monomial part may not involve the fourth coordinate.
    #[error("binomial monomial part involves x4")]
    PsiInvolvesX4,
    /// Simplicity is only defined for invariant monomials.
    #[error("monomial has weight {0} mod {1}, not invariant")]
    NotInvariant(i64, i64),
}

/// An element of `Z/modulus`, stored as its least non-negative representative.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Residue {
    value: i64,
    modulus: i64,
}

impl Residue {
    pub fn new(value: i64, modulus: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: value.rem_euclid(modulus),
            modulus,
        }
    }

    pub fn zero(modulus: i64) -> Self {
        Residue::new(0, modulus)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues combine only when moduli agree"
        );
    }

    pub fn add(self, other: Residue) -> Residue {
        self.check(other);
        Residue::new(self.value + other.value, self.modulus)
    }

    pub fn sub(self, other: Residue) -> Residue {
        self.check(other);
        Residue::new(self.value - other.value, self.modulus)
    }

    pub fn neg(self) -> Residue {
        Residue::new(-self.value, self.modulus)
    }

    /// `k`-fold sum of `self`.
    pub fn scale(self, k: i64) -> Residue {
        Residue::new(
            (self.value as i128 * k as i128).rem_euclid(self.modulus as i128) as i64,
            self.modulus,
        )
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// An exponent vector in the four chart coordinates `x1..x4`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    exps: [u32; COORDS],
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Monomial", 2)?;
        s.serialize_field("exps", &self.exps)?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}

impl Monomial {
    pub const fn new(exps: [u32; COORDS]) -> Self {
        Monomial { exps }
    }

    pub const fn unit() -> Self {
        Monomial { exps: [0; COORDS] }
    }

    /// The single variable `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut exps = [0; COORDS];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exps(&self) -> [u32; COORDS] {
        self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0; COORDS];
        for i in 0..COORDS {
            exps[i] = self.exps[i] + other.exps[i];
        }
        Monomial { exps }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut exps = [0; COORDS];
        for i in 0..COORDS {
            exps[i] = self.exps[i] * k;
        }
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..COORDS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// Exact quotient `other / self`; `None` unless `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut exps = [0; COORDS];
        for i in 0..COORDS {
            exps[i] = other.exps[i] - self.exps[i];
        }
        Some(Monomial { exps })
    }

    /// All divisors of `self`, including the unit and `self` itself.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::unit()];
        for i in 0..COORDS {
            let prior = out.clone();
            for e in 1..=self.exps[i] {
                for p in &prior {
                    let mut exps = p.exps;
                    exps[i] = e;
                    out.push(Monomial { exps });
                }
            }
        }
        out
    }

    /// Variable-major comparison: at the first coordinate where the exponent
    /// vectors differ, the larger exponent sorts first.
    pub fn var_major_cmp(&self, other: &Monomial) -> Ordering {
        for i in 0..COORDS {
            match other.exps[i].cmp(&self.exps[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for i in 0..COORDS {
            match self.exps[i] {
                0 => {}
                1 => {
                    if !first {
                        write!(f, "*")?;
                    }
                    write!(f, "x{}", i + 1)?;
                    first = false;
                }
                e => {
                    if !first {
                        write!(f, "*")?;
                    }
                    write!(f, "x{}^{}", i + 1, e)?;
                    first = false;
                }
            }
        }
        Ok(())
    }
}

/// The weight/order data of a germ's four coordinates, the only input the
/// monomial calculus needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub weights: [Residue; COORDS],
    pub ords: [i64; COORDS],
}

impl Grading {
    pub fn new(weights: [Residue; COORDS], ords: [i64; COORDS]) -> Self {
        let m = weights[0].modulus();
        assert!(weights.iter().all(|w| w.modulus() == m));
        assert!(ords.iter().all(|&a| a >= 1), "orders must be >= 1");
        Grading { weights, ords }
    }

    pub fn modulus(&self) -> i64 {
        self.weights[0].modulus()
    }
}

/// Weight of a monomial: the exponent-weighted sum of coordinate weights,
/// reduced mod `m`.
pub fn weight_of(mono: &Monomial, g: &Grading) -> Residue {
    let mut acc = Residue::zero(g.modulus());
    for i in 0..COORDS {
        acc = acc.add(g.weights[i].scale(mono.exp(i) as i64));
    }
    acc
}

/// Order of vanishing of a monomial on (a component of) the covering curve,
/// in `t`-units. Additive: `ord(a*b) = ord(a) + ord(b)`.
pub fn ord_of(mono: &Monomial, g: &Grading) -> i64 {
    (0..COORDS).map(|i| mono.exp(i) as i64 * g.ords[i]).sum()
}

/// All non-unit monomials of the given weight class with order at most
/// `ord_cap`, sorted by `(order, variable-major exponents)`.
pub fn enumerate_by_weight(g: &Grading, target: Residue, ord_cap: i64) -> Vec<Monomial> {
    assert_eq!(target.modulus(), g.modulus());
    let mut found = Vec::new();
    let mut exps = [0u32; COORDS];
    scan(g, target, ord_cap, 0, 0, &mut exps, &mut found);
    found.sort_by(|a, b| {
        ord_of(a, g)
            .cmp(&ord_of(b, g))
            .then_with(|| a.var_major_cmp(b))
    });
    found
}

fn scan(
    g: &Grading,
    target: Residue,
    cap: i64,
    var: usize,
    ord_so_far: i64,
    exps: &mut [u32; COORDS],
    out: &mut Vec<Monomial>,
) {
    if var == COORDS {
        let mono = Monomial::new(*exps);
        if !mono.is_unit() && weight_of(&mono, g) == target {
            out.push(mono);
        }
        return;
    }
    let mut e = 0u32;
    while ord_so_far + e as i64 * g.ords[var] <= cap {
        exps[var] = e;
        scan(g, target, cap, var + 1, ord_so_far + e as i64 * g.ords[var], exps, out);
        e += 1;
    }
    exps[var] = 0;
}

/// Outcome of a weight-class minimum search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinOrd {
    /// Minimum order in the class together with the variable-major least
    /// witness attaining it.
    Found { ord: i64, witness: Monomial },
    /// No non-unit monomial of the class has order at most the cap.
    Exhausted { cap: i64 },
}

impl MinOrd {
    pub fn found(&self) -> Option<(i64, Monomial)> {
        match self {
            MinOrd::Found { ord, witness } => Some((*ord, *witness)),
            MinOrd::Exhausted { .. } => None,
        }
    }
}

/// Minimum vanishing order among non-unit monomials of weight class `target`,
/// searched up to `ord_cap`.
///
/// The unit monomial is excluded: including it would trivialize every
/// weight-zero query (use [`min_ord_of_weight_including_unit`] to opt in).
/// Runs a reachability table over `(order, residue)` states rather than a
/// monomial scan, so the result can be cross-checked against
/// [`enumerate_by_weight`].
pub fn min_ord_of_weight(g: &Grading, target: Residue, ord_cap: i64) -> MinOrd {
    assert_eq!(target.modulus(), g.modulus());
    if ord_cap < 1 {
        return MinOrd::Exhausted { cap: ord_cap };
    }
    let m = g.modulus();
    let cap = ord_cap as usize;
    let states = (cap + 1) * m as usize;

    // reach[i] covers variables i..4: reach[i][o*m + r] says order o, class r
    // is realizable by a monomial in those variables.
    let mut reach = vec![vec![false; states]; COORDS + 1];
    reach[COORDS][0] = true;
    for i in (0..COORDS).rev() {
        let (head, tail) = reach.split_at_mut(i + 1);
        let cur = &mut head[i];
        let next = &tail[0];
        let a = g.ords[i] as usize;
        let w = g.weights[i].value();
        for o in 0..=cap {
            for r in 0..m {
                let idx = o * m as usize + r as usize;
                if next[idx] {
                    cur[idx] = true;
                } else if o >= a {
                    let prev_r = (r - w).rem_euclid(m);
                    if cur[(o - a) * m as usize + prev_r as usize] {
                        cur[idx] = true;
                    }
                }
            }
        }
    }

    let t = target.value();
    let best = (1..=cap).find(|&o| reach[0][o * m as usize + t as usize]);
    let Some(best) = best else {
        return MinOrd::Exhausted { cap: ord_cap };
    };

    // Greedy reconstruction of the variable-major least witness: maximize the
    // exponent of x1, then x2, and so on.
    let mut exps = [0u32; COORDS];
    let mut o = best;
    let mut r = t;
    for i in 0..COORDS {
        let a = g.ords[i] as usize;
        let w = g.weights[i].value();
        let mut e = o / a;
        loop {
            let rem_o = o - e * a;
            let rem_r = (r - w * e as i64).rem_euclid(m);
            if reach[i + 1][rem_o * m as usize + rem_r as usize] {
                exps[i] = e as u32;
                o = rem_o;
                r = rem_r;
                break;
            }
            assert!(e > 0, "witness reconstruction failed");
            e -= 1;
        }
    }
    debug_assert_eq!(o, 0);
    MinOrd::Found {
        ord: best as i64,
        witness: Monomial::new(exps),
    }
}

/// Like [`min_ord_of_weight`] but lets the unit monomial realize weight zero
/// at order zero.
pub fn min_ord_of_weight_including_unit(g: &Grading, target: Residue, ord_cap: i64) -> MinOrd {
    if target.is_zero() {
        return MinOrd::Found {
            ord: 0,
            witness: Monomial::unit(),
        };
    }
    min_ord_of_weight(g, target, ord_cap)
}

/// Whether an invariant monomial is simple: not a product of two non-constant
/// invariant monomials. Rejects non-invariant input.
pub fn is_simple_invariant(mono: &Monomial, g: &Grading) -> Result<bool, WeightError> {
    let w = weight_of(mono, g);
    if !w.is_zero() {
        return Err(WeightError::NotInvariant(w.value(), w.modulus()));
    }
    if mono.is_unit() {
        return Ok(false);
    }
    for div in mono.divisors() {
        if div.is_unit() || div == *mono {
            continue;
        }
        if weight_of(&div, g).is_zero() {
            // The cofactor is then invariant too, so mono factors.
            return Ok(false);
        }
    }
    Ok(true)
}

/// A binomial `psi - x4^power` with `psi` a monomial in `x1, x2, x3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Binomial {
    pub psi: Monomial,
    pub power: u32,
}

impl Serialize for Binomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Binomial", 3)?;
        s.serialize_field("psi", &self.psi)?;
        s.serialize_field("power", &self.power)?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}

impl Binomial {
    pub fn new(psi: Monomial, power: u32) -> Self {
        Binomial { psi, power }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{} - 1", self.psi),
            1 => write!(f, "{} - x4", self.psi),
            n => write!(f, "{} - x4^{}", self.psi, n),
        }
    }
}

/// Whether `psi - x4^n` vanishes identically on every component of the
/// parametrized curve: the orders must agree exactly and the weights must
/// match mod `m` (the phase condition on the component phases).
pub fn vanishes_on_curve(binomial: &Binomial, g: &Grading) -> Result<bool, WeightError> {
    if binomial.psi.exp(3) != 0 {
        return Err(WeightError::PsiInvolvesX4);
    }
    let n = binomial.power;
    let x4 = Monomial::var(3);
    let ord_match = ord_of(&binomial.psi, g) == n as i64 * ord_of(&x4, g);
    let wt_match = weight_of(&binomial.psi, g) == g.weights[3].scale(n as i64);
    Ok(ord_match && wt_match)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grading(weights: [i64; 4], m: i64, ords: [i64; 4]) -> Grading {
        Grading::new(
            [
                Residue::new(weights[0], m),
                Residue::new(weights[1], m),
                Residue::new(weights[2], m),
                Residue::new(weights[3], m),
            ],
            ords,
        )
    }

    // Pattern (i) germ data at subindex 4.
    fn pattern_i_m4() -> Grading {
        grading([1, 7, 5, 0], 8, [1, 3, 5, 4])
    }

    fn cax4() -> Grading {
        grading([1, 3, 3, 2], 4, [1, 1, 1, 2])
    }

    #[test]
    fn weight_of_examples() {
        let g = grading([1, -1, 3, 0], 8, [1, 1, 1, 1]);
        assert!(weight_of(&Monomial::new([1, 1, 0, 0]), &g).is_zero());

        let g = grading([1, 0, 0, 0], 8, [1, 1, 1, 1]);
        assert_eq!(weight_of(&Monomial::new([3, 0, 0, 0]), &g).value(), 3);

        let g = grading([3, 5, 1, 0], 8, [1, 1, 1, 2]);
        assert_eq!(weight_of(&Monomial::new([2, 0, 1, 0]), &g).value(), 7);
    }

    #[test]
    fn ord_of_examples() {
        let g = cax4();
        assert_eq!(ord_of(&Monomial::new([1, 1, 0, 0]), &g), 2);
        assert_eq!(ord_of(&Monomial::unit(), &g), 0);

        let g = pattern_i_m4();
        assert_eq!(ord_of(&Monomial::new([3, 0, 1, 0]), &g), 8);
    }

    #[test]
    fn enumerate_examples() {
        let g = pattern_i_m4();
        let hits = enumerate_by_weight(&g, Residue::new(3, 8), 3);
        assert_eq!(hits.first(), Some(&Monomial::new([3, 0, 0, 0])));

        let g2 = grading([1, 7, 1, 0], 8, [1, 1, 1, 2]);
        let hits = enumerate_by_weight(&g2, Residue::zero(8), 4);
        assert!(hits.contains(&Monomial::new([1, 1, 0, 0])));
        assert_eq!(ord_of(&Monomial::new([1, 1, 0, 0]), &g2), 2);

        assert!(enumerate_by_weight(&g, Residue::new(5, 8), 0).is_empty());
    }

    #[test]
    fn enumerate_sorted_and_unique() {
        let g = pattern_i_m4();
        let hits = enumerate_by_weight(&g, Residue::zero(8), 12);
        for w in hits.windows(2) {
            let key0 = (ord_of(&w[0], &g), w[0]);
            let key1 = (ord_of(&w[1], &g), w[1]);
            assert_ne!(w[0], w[1]);
            assert!(
                key0.0 < key1.0 || (key0.0 == key1.0 && w[0].var_major_cmp(&w[1]).is_lt()),
                "not sorted: {} then {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn min_ord_examples() {
        let g = pattern_i_m4();
        // Class of -wt(x3) = 3 mod 8 is reached by x1^3 at order 3.
        assert_eq!(
            min_ord_of_weight(&g, Residue::new(3, 8), 24).found(),
            Some((3, Monomial::new([3, 0, 0, 0])))
        );
        // The invariant class: x1*x2 at order 4 beats x4 on the tiebreak.
        assert_eq!(
            min_ord_of_weight(&g, Residue::zero(8), 24).found(),
            Some((4, Monomial::new([1, 1, 0, 0])))
        );

        // Tie at order 3 between x1^2*x3 and x2*x3^2: variable-major prefers
        // the x1-heavy witness.
        let g = grading([3, 5, 1, 0], 8, [1, 1, 1, 2]);
        assert_eq!(
            min_ord_of_weight(&g, Residue::new(7, 8), 12).found(),
            Some((3, Monomial::new([2, 0, 1, 0])))
        );

        assert_eq!(
            min_ord_of_weight(&g, Residue::new(7, 8), 0),
            MinOrd::Exhausted { cap: 0 }
        );
    }

    #[test]
    fn min_ord_matches_enumeration() {
        let g = grading([1, 7, 5, 0], 8, [1, 3, 5, 4]);
        for target in 0..8 {
            let t = Residue::new(target, 8);
            let listed = enumerate_by_weight(&g, t, 20);
            match min_ord_of_weight(&g, t, 20) {
                MinOrd::Found { ord, witness } => {
                    assert_eq!(ord, ord_of(&listed[0], &g));
                    assert_eq!(witness, listed[0]);
                }
                MinOrd::Exhausted { .. } => assert!(listed.is_empty()),
            }
        }
    }

    #[test]
    fn simplicity_examples() {
        let g = grading([1, -1, 3, 0], 8, [1, 1, 1, 1]);
        assert_eq!(is_simple_invariant(&Monomial::new([1, 1, 0, 0]), &g), Ok(true));
        assert_eq!(is_simple_invariant(&Monomial::new([2, 2, 0, 0]), &g), Ok(false));
        assert!(is_simple_invariant(&Monomial::new([1, 0, 0, 0]), &g).is_err());

        let g = grading([1, 7, 1, 0], 8, [1, 1, 1, 2]);
        assert_eq!(is_simple_invariant(&Monomial::new([4, 0, 4, 0]), &g), Ok(true));
    }

    #[test]
    fn vanishing_examples() {
        let g = pattern_i_m4();
        let b = Binomial::new(Monomial::new([1, 1, 0, 0]), 1);
        assert_eq!(vanishes_on_curve(&b, &g), Ok(true));

        // Weight of x1*x2 is 0 but wt(x4) = 2 mod 4 in the exceptional case:
        // phase mismatch on the second component.
        let g = cax4();
        assert_eq!(vanishes_on_curve(&b, &g), Ok(false));

        let unit = Binomial::new(Monomial::unit(), 0);
        assert_eq!(vanishes_on_curve(&unit, &g), Ok(true));

        let bad = Binomial::new(Monomial::new([0, 0, 0, 1]), 1);
        assert_eq!(vanishes_on_curve(&bad, &g), Err(WeightError::PsiInvolvesX4));
    }
}
