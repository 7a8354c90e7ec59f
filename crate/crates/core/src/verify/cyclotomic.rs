//! Exact arithmetic in the cyclotomic field `Q(eps)` with `eps` a primitive
//! `n`-th root of unity.
//!
//! Elements are stored on the power basis `1, eps, .., eps^(phi(n)-1)`,
//! reduced modulo the `n`-th cyclotomic polynomial, with rational
//! coefficients. All operations are exact; inversion runs the extended
//! Euclidean algorithm against the minimal polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("division by zero in Q(eps_{0})")]
    DivisionByZero(u32),
}

/// Euler totient by trial factorization; the orders in play are tiny.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn phi_poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monic integer coefficients of the `n`-th cyclotomic polynomial,
/// ascending degree. Computed by exact division of `x^n - 1` by the lower
/// cyclotomic polynomials and memoized.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(hit) = phi_poly_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            poly = int_poly_div_exact(&poly, &divisor);
        }
    }
    let arc = Arc::new(poly);
    phi_poly_cache()
        .lock()
        .unwrap()
        .insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials with monic divisor.
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem: Vec<BigInt> = a.to_vec();
    let da = rem.len() - 1;
    if da < db {
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let v = &rem[k + i] - &c * bi;
            rem[k + i] = v;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

// Dense polynomial helpers over the rationals, ascending coefficients.

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let v = &out[i + j] + ai * bj;
            out[i + j] = v;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

fn poly_scale(a: &[BigRational], s: &BigRational) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = a.iter().map(|c| c * s).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `b` (leading coefficient of `b` invertible).
fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    trim(&mut rem);
    while rem.len() > db && !poly_is_zero(&rem) {
        let dr = rem.len() - 1;
        let c = &rem[dr] / lead;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                let v = &rem[dr - db + i] - &c * bi;
                rem[dr - db + i] = v;
            }
        }
        rem.pop();
        trim(&mut rem);
        if dr == db {
            break;
        }
    }
    trim(&mut rem);
    rem
}

/// Extended Euclid: returns `(g, s)` with `s*a = g mod b` and `g = gcd(a, b)`.
fn poly_half_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    while !poly_is_zero(&r1) {
        // quotient of r0 by r1
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db || poly_is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db && !poly_is_zero(&rem) {
        let dr = rem.len() - 1;
        let c = &rem[dr] / lead;
        quot[dr - db] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let v = &rem[dr - db + i] - &c * bi;
            rem[dr - db + i] = v;
        }
        rem.pop();
        trim(&mut rem);
        if dr == db {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

/// An element of `Q(eps_n)`, reduced modulo the `n`-th cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

#[allow(clippy::should_implement_trait)] // by-reference arithmetic; operator impls would force clones
impl Cyclotomic {
    fn minimal_poly(order: u32) -> Vec<BigRational> {
        cyclotomic_polynomial(order)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    fn reduced(order: u32, raw: Vec<BigRational>) -> Self {
        let phi = euler_phi(order) as usize;
        let min = Self::minimal_poly(order);
        let mut rem = poly_rem(&raw, &min);
        rem.resize(phi, BigRational::zero());
        Cyclotomic { order, coeffs: rem }
    }

    pub fn zero(order: u32) -> Self {
        let phi = euler_phi(order) as usize;
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(order: u32) -> Self {
        Cyclotomic::from_integer(order, 1)
    }

    pub fn from_integer(order: u32, value: i64) -> Self {
        Cyclotomic::from_rational(order, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(order: u32, value: BigRational) -> Self {
        let mut out = Cyclotomic::zero(order);
        out.coeffs[0] = value;
        out
    }

    /// The root power `eps^k` (any integer `k`, reduced mod `order`).
    pub fn root(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        Cyclotomic::reduced(order, raw)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &Cyclotomic) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic elements combine only within one field"
        );
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        self.check(other);
        Cyclotomic::reduced(self.order, poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, s: &BigRational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: poly_scale(&self.coeffs, s)
                .into_iter()
                .chain(std::iter::repeat(BigRational::zero()))
                .take(self.coeffs.len())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<Cyclotomic, CyclotomicError> {
        if self.is_zero() {
            return Err(CyclotomicError::DivisionByZero(self.order));
        }
        let min = Self::minimal_poly(self.order);
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (g, s) = poly_half_ext_gcd(&a, &min);
        // The minimal polynomial is irreducible, so the gcd is a constant.
        debug_assert_eq!(g.len(), 1);
        let ginv = BigRational::one() / g[0].clone();
        Ok(Cyclotomic::reduced(self.order, poly_scale(&s, &ginv)))
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic, CyclotomicError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, k: i64) -> Result<Cyclotomic, CyclotomicError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut base = self.clone();
        let mut k = k as u64;
        let mut acc = Cyclotomic::one(self.order);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// A square root within the field when the element has the shape
    /// `q * eps^(2j)` with `q` a rational square, or is a rational square.
    /// Enough for splitting the binary quadratics the fiber analysis meets;
    /// returns `None` when no such root is visible.
    pub fn monomial_sqrt(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return Some(self.clone());
        }
        for j in 0..self.order as i64 {
            let twisted = self.mul(&Cyclotomic::root(self.order, -2 * j));
            if let Some(q) = twisted.as_rational() {
                if q.is_negative() {
                    continue;
                }
                if let Some(r) = rational_sqrt(&q) {
                    return Some(Cyclotomic::root(self.order, j).scale(&r));
                }
            }
            // Also allow -q with an extra quarter turn when available.
            if self.order % 4 == 0 {
                if let Some(q) = twisted.as_rational() {
                    if q.is_negative() {
                        if let Some(r) = rational_sqrt(&-q.clone()) {
                            let quarter = Cyclotomic::root(self.order, self.order as i64 / 4);
                            return Some(Cyclotomic::root(self.order, j).mul(&quarter).scale(&r));
                        }
                    }
                }
            }
        }
        None
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom())
        .then(|| BigRational::new(n, d))
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let unit_coeff = abs.is_one();
            match (k, unit_coeff) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "E{}", self.order)?,
                (1, false) => write!(f, "{}*E{}", abs, self.order)?,
                (_, true) => write!(f, "E{}^{}", self.order, k)?,
                (_, false) => write!(f, "{}*E{}^{}", abs, self.order, k)?,
            }
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_minimal_polys() {
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        // Phi_8 = x^4 + 1
        let p = cyclotomic_polynomial(8);
        assert_eq!(
            p.as_slice(),
            &[
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
        // Phi_12 = x^4 - x^2 + 1
        let p = cyclotomic_polynomial(12);
        assert_eq!(
            p.as_slice(),
            &[
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn root_arithmetic() {
        let e = Cyclotomic::root(8, 1);
        // eps^4 = -1, eps^8 = 1.
        assert_eq!(e.pow(4).unwrap(), Cyclotomic::from_integer(8, -1));
        assert_eq!(e.pow(8).unwrap(), Cyclotomic::one(8));
        // eps^6 reduces to -eps^2.
        assert_eq!(
            Cyclotomic::root(8, 6),
            Cyclotomic::root(8, 2).neg()
        );
        // Negative powers wrap.
        assert_eq!(Cyclotomic::root(8, -2), Cyclotomic::root(8, 6));
    }

    #[test]
    fn inverse_and_division() {
        let x = Cyclotomic::root(8, 3)
            .add(&Cyclotomic::from_integer(8, 2));
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), Cyclotomic::one(8));
        assert!(Cyclotomic::zero(8).inverse().is_err());
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in [2u32, 3, 4, 5, 6, 8, 12] {
            let mut acc = Cyclotomic::zero(n);
            for k in 0..n {
                acc = acc.add(&Cyclotomic::root(n, k as i64));
            }
            assert!(acc.is_zero(), "sum of {n}-th roots");
        }
    }

    #[test]
    fn sqrt_detection() {
        // -4 = (2*eps^2)^2 in Q(eps_8).
        let d = Cyclotomic::from_integer(8, -4);
        let r = d.monomial_sqrt().unwrap();
        assert_eq!(r.mul(&r), d);
        let q = Cyclotomic::from_integer(8, 9);
        assert_eq!(
            q.monomial_sqrt().unwrap(),
            Cyclotomic::from_integer(8, 3)
        );
        assert!(Cyclotomic::from_integer(8, 2).monomial_sqrt().is_none());
    }

    #[test]
    fn display_is_canonical() {
        let x = Cyclotomic::root(8, 6);
        assert_eq!(x.to_string(), "-E8^2");
        let y = Cyclotomic::root(8, 1)
            .scale(&BigRational::new(BigInt::from(3), BigInt::from(2)))
            .add(&Cyclotomic::one(8));
        assert_eq!(y.to_string(), "3/2*E8 + 1");
    }
}
