//! Sparse polynomials in the six chart variables `x, y, z, t, u, v` with
//! cyclotomic coefficients, plus the small exact linear algebra the
//! equivariance and fixed-locus checks need.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::cyclotomic::Cyclotomic;

/// Variable order is fixed: projective `x, y, z, t` then base `u, v`.
pub const NVARS: usize = 6;
pub const VAR_NAMES: [&str; NVARS] = ["x", "y", "z", "t", "u", "v"];

pub type Exps = [u8; NVARS];

/// A sparse polynomial with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    order: u32,
    terms: BTreeMap<Exps, Cyclotomic>,
}

impl MPoly {
    pub fn zero(order: u32) -> Self {
        MPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        let mut p = MPoly::zero(c.order());
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn var(order: u32, i: usize) -> Self {
        let mut exps = [0; NVARS];
        exps[i] = 1;
        MPoly::term(Cyclotomic::one(order), exps)
    }

    pub fn term(c: Cyclotomic, exps: Exps) -> Self {
        let mut p = MPoly::zero(c.order());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &Exps) -> Cyclotomic {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(self.order))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> u8 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Minimum exponent of a variable across all terms (0 for the zero poly).
    pub fn min_exp(&self, i: usize) -> u8 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    fn insert(&mut self, exps: Exps, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    e.insert(v);
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.order);
        }
        MPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.mul(s)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] += eb[i];
                }
                out.insert(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u8) -> MPoly {
        let mut acc = MPoly::constant(Cyclotomic::one(self.order));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute each variable by the given polynomial.
    pub fn substitute(&self, images: &[MPoly; NVARS]) -> MPoly {
        let mut out = MPoly::zero(self.order);
        // Cache image powers per variable.
        let mut powers: Vec<Vec<MPoly>> = (0..NVARS)
            .map(|i| vec![MPoly::constant(Cyclotomic::one(self.order)), images[i].clone()])
            .collect();
        for (exps, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for i in 0..NVARS {
                let e = exps[i] as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitute a single variable by a polynomial.
    pub fn substitute_var(&self, var: usize, image: &MPoly) -> MPoly {
        let mut images: [MPoly; NVARS] = std::array::from_fn(|i| MPoly::var(self.order, i));
        images[var] = image.clone();
        self.substitute(&images)
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[Cyclotomic; NVARS]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.order);
        for (exps, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..NVARS {
                for _ in 0..exps[i] {
                    v = v.mul(&point[i]);
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Divide out `var^k`; caller guarantees divisibility.
    pub fn shift_down(&self, var: usize, k: u8) -> MPoly {
        MPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    debug_assert!(e[var] >= k);
                    e[var] -= k;
                    (e, c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..NVARS)
                .filter(|&i| exps[i] > 0)
                .map(|i| {
                    if exps[i] == 1 {
                        VAR_NAMES[i].to_string()
                    } else {
                        format!("{}^{}", VAR_NAMES[i], exps[i])
                    }
                })
                .collect();
            let coeff = c.to_string();
            let (sign, body) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            // Wrap compound coefficients so the term reads unambiguously.
            let body_is_compound = body.contains(" + ") || body.contains(" - ");
            let piece = if mono.is_empty() {
                if body_is_compound {
                    format!("({body})")
                } else {
                    body
                }
            } else if body == "1" && !body_is_compound {
                mono.join("*")
            } else if body_is_compound {
                format!("({})*{}", body, mono.join("*"))
            } else {
                format!("{}*{}", body, mono.join("*"))
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                write!(f, "{piece}")?;
                first = false;
            } else {
                write!(f, " {sign} {piece}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Gaussian elimination outcome for `A c = b`.
pub enum LinSolve {
    /// A solution (free unknowns set to zero).
    Solution(Vec<Cyclotomic>),
    /// Inconsistent; carries a best-effort partial solution from the pivot
    /// rows so the caller can exhibit a residual.
    Inconsistent(Vec<Cyclotomic>),
}

/// Solve `A c = b` exactly over the cyclotomic field.
pub fn solve_linear(a: &[Vec<Cyclotomic>], b: &[Cyclotomic], order: u32) -> LinSolve {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Cyclotomic>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().expect("pivot is nonzero");
        for c in col..=cols {
            m[rank][c] = m[rank][c].mul(&inv);
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let v = m[r][c].sub(&factor.mul(&m[rank][c]));
                    m[r][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    let mut solution = vec![Cyclotomic::zero(order); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        solution[col] = m[r][cols].clone();
    }
    let consistent = (rank..rows).all(|r| m[r][cols].is_zero());
    if consistent {
        LinSolve::Solution(solution)
    } else {
        LinSolve::Inconsistent(solution)
    }
}

/// Basis of the null space of a square matrix over the cyclotomic field.
pub fn null_space(mat: &[Vec<Cyclotomic>], order: u32) -> Vec<Vec<Cyclotomic>> {
    let n = mat.len();
    let mut m: Vec<Vec<Cyclotomic>> = mat.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().expect("pivot is nonzero");
        for c in 0..n {
            m[rank][c] = m[rank][c].mul(&inv);
        }
        for r in 0..n {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..n {
                    let v = m[r][c].sub(&factor.mul(&m[rank][c]));
                    m[r][c] = v;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }

    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Cyclotomic::zero(order); n];
        v[free] = Cyclotomic::one(order);
        for col in 0..n {
            if let Some(r) = pivot_of_col[col] {
                v[col] = m[r][free].neg();
            }
        }
        basis.push(v);
    }
    basis
}
