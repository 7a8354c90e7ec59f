//! Two-dimensional singularity data: Du Val types, cyclic quotients and
//! their Hirzebruch-Jung resolutions, the involution-quotient table,
//! topological indices, and the index-divisibility predicate.
//!
//! # Conventions
//!
//! - A cyclic quotient is stored in the normal form `1/n(1, q)` with
//!   `gcd(n, q) = 1`; the first weight can always be rescaled to 1.
//! - `hj_expand(n, q)` returns the unique expansion
//!   `n/q = b1 - 1/(b2 - 1/(...))` with every `b_i >= 2`; negating the
//!   entries gives the self-intersection chain of the minimal resolution.
//! - Topological indices of the `D`/`E` types are the binary polyhedral
//!   group orders `4(n-2)`, 24, 48, 120.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::frac::Frac;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DuValError {
    #[error("subscript {0} out of range for type {1}")]
    BadSubscript(i64, char),
    #[error("cyclic quotient needs gcd(n, q) = 1 and 0 < q < n, got 1/{0}({1})")]
    BadQuotient(i64, i64),
    #[error("table row {0} does not accept input {1}")]
    RowMismatch(u8, String),
    #[error("no table row {0}")]
    NoSuchRow(u8),
    #[error("cover table does not contain {0} with k = {1}")]
    CoverOutOfTable(String, i64),
}

/// A Du Val (rational double point) type. Serializes as its display
/// string, e.g. "A3".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DuValType {
    A(i64),
    D(i64),
    E(i64),
}

impl Serialize for DuValType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl DuValType {
    pub fn new_a(n: i64) -> Result<Self, DuValError> {
        (n >= 1)
            .then_some(DuValType::A(n))
            .ok_or(DuValError::BadSubscript(n, 'A'))
    }

    pub fn new_d(n: i64) -> Result<Self, DuValError> {
        (n >= 4)
            .then_some(DuValType::D(n))
            .ok_or(DuValError::BadSubscript(n, 'D'))
    }

    pub fn new_e(n: i64) -> Result<Self, DuValError> {
        matches!(n, 6..=8)
            .then_some(DuValType::E(n))
            .ok_or(DuValError::BadSubscript(n, 'E'))
    }

    pub fn checked(self) -> Result<Self, DuValError> {
        match self {
            DuValType::A(n) => Self::new_a(n),
            DuValType::D(n) => Self::new_d(n),
            DuValType::E(n) => Self::new_e(n),
        }
    }
}

impl fmt::Display for DuValType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DuValType::A(n) => write!(f, "A{n}"),
            DuValType::D(n) => write!(f, "D{n}"),
            DuValType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// The cyclic quotient singularity `1/n(1, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct CyclicQuot {
    pub n: i64,
    pub q: i64,
}

impl CyclicQuot {
    pub fn new(n: i64, q: i64) -> Result<Self, DuValError> {
        if n >= 2 && q >= 1 && q < n && num_integer::gcd(n, q) == 1 {
            Ok(CyclicQuot { n, q })
        } else {
            Err(DuValError::BadQuotient(n, q))
        }
    }
}

impl fmt::Display for CyclicQuot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({},{})", self.n, 1, self.q)
    }
}

/// Exceptional curve chain of a minimal resolution: the self-intersection
/// numbers, every entry at most -2.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DualGraph {
    pub chain: Vec<i64>,
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Hirzebruch-Jung expansion `n/q = b1 - 1/(b2 - 1/(...))`, all entries >= 2.
pub fn hj_expand(n: i64, q: i64) -> Result<Vec<i64>, DuValError> {
    if !(n >= 2 && q >= 1 && q < n && num_integer::gcd(n, q) == 1) {
        return Err(DuValError::BadQuotient(n, q));
    }
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q > 0 {
        // ceil(n/q)
        let b = (n + q - 1) / q;
        out.push(b);
        let next = b * q - n;
        n = q;
        q = next;
    }
    Ok(out)
}

/// Fold an expansion back to the rational it encodes.
pub fn hj_fold(chain: &[i64]) -> Option<Frac> {
    let mut value: Option<Frac> = None;
    for &b in chain.iter().rev() {
        value = Some(match value {
            None => Frac::int(b),
            Some(v) => Frac::int(b) - Frac::int(1) / v,
        });
    }
    value
}

/// The exceptional chain of the minimal resolution of a cyclic quotient.
pub fn dual_graph(cq: &CyclicQuot) -> DualGraph {
    let chain = hj_expand(cq.n, cq.q)
        .expect("CyclicQuot invariants guarantee a valid expansion")
        .into_iter()
        .map(|b| -b)
        .collect();
    DualGraph { chain }
}

/// Quotient of a Du Val point by an involution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum InvolutionQuotient {
    Smooth,
    DuVal(DuValType),
    Cyclic(CyclicQuot),
}

impl fmt::Display for InvolutionQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionQuotient::Smooth => write!(f, "smooth"),
            InvolutionQuotient::DuVal(t) => write!(f, "{t}"),
            InvolutionQuotient::Cyclic(c) => write!(f, "{c}"),
        }
    }
}

/// One row of the involution table, for listing purposes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InvolutionRow {
    pub row: u8,
    pub fixed_point: &'static str,
    pub quotient: &'static str,
}

/// The ten possibilities for the quotient of a Du Val point by an analytic
/// involution.
pub fn involution_rows() -> [InvolutionRow; 10] {
    [
        InvolutionRow { row: 1, fixed_point: "any", quotient: "smooth" },
        InvolutionRow { row: 2, fixed_point: "A(2k+1)", quotient: "D(k+3)" },
        InvolutionRow { row: 3, fixed_point: "E6", quotient: "E7" },
        InvolutionRow { row: 4, fixed_point: "D(k)", quotient: "D(2k-2)" },
        InvolutionRow { row: 5, fixed_point: "A(k)", quotient: "A(2k+1)" },
        InvolutionRow { row: 6, fixed_point: "A(2k+1)", quotient: "1/(4k+4)(1,2k+1)" },
        InvolutionRow { row: 7, fixed_point: "E6", quotient: "A2" },
        InvolutionRow { row: 8, fixed_point: "A(2k)", quotient: "1/(2k+1)(1,2k-1)" },
        InvolutionRow { row: 9, fixed_point: "D(k)", quotient: "A1" },
        InvolutionRow { row: 10, fixed_point: "A(2k+1)", quotient: "A(k)" },
    ]
}

/// Instantiate one row of the involution table on a concrete Du Val type.
pub fn catanese_quotient(ty: DuValType, row: u8) -> Result<InvolutionQuotient, DuValError> {
    let ty = ty.checked()?;
    let mismatch = || DuValError::RowMismatch(row, ty.to_string());
    match row {
        1 => Ok(InvolutionQuotient::Smooth),
        2 => match ty {
            // A(2k+1) -> D(k+3)
            DuValType::A(n) if n % 2 == 1 => {
                let k = (n - 1) / 2;
                Ok(InvolutionQuotient::DuVal(DuValType::new_d(k + 3)?))
            }
            _ => Err(mismatch()),
        },
        3 => match ty {
            DuValType::E(6) => Ok(InvolutionQuotient::DuVal(DuValType::E(7))),
            _ => Err(mismatch()),
        },
        4 => match ty {
            // D(k) -> D(2k-2)
            DuValType::D(k) => Ok(InvolutionQuotient::DuVal(DuValType::new_d(2 * k - 2)?)),
            _ => Err(mismatch()),
        },
        5 => match ty {
            // A(k) -> A(2k+1)
            DuValType::A(k) => Ok(InvolutionQuotient::DuVal(DuValType::new_a(2 * k + 1)?)),
            _ => Err(mismatch()),
        },
        6 => match ty {
            // A(2k+1) -> 1/(4k+4)(1, 2k+1), k >= 0
            DuValType::A(n) if n % 2 == 1 => {
                let k = (n - 1) / 2;
                Ok(InvolutionQuotient::Cyclic(CyclicQuot::new(
                    4 * k + 4,
                    2 * k + 1,
                )?))
            }
            _ => Err(mismatch()),
        },
        7 => match ty {
            DuValType::E(6) => Ok(InvolutionQuotient::DuVal(DuValType::A(2))),
            _ => Err(mismatch()),
        },
        8 => match ty {
            // A(2k) -> 1/(2k+1)(1, 2k-1), k >= 1
            DuValType::A(n) if n % 2 == 0 => {
                let k = n / 2;
                Ok(InvolutionQuotient::Cyclic(CyclicQuot::new(
                    2 * k + 1,
                    2 * k - 1,
                )?))
            }
            _ => Err(mismatch()),
        },
        9 => match ty {
            DuValType::D(_) => Ok(InvolutionQuotient::DuVal(DuValType::A(1))),
            _ => Err(mismatch()),
        },
        10 => match ty {
            // A(2k+1) -> A(k), k >= 1
            DuValType::A(n) if n % 2 == 1 => {
                let k = (n - 1) / 2;
                Ok(InvolutionQuotient::DuVal(DuValType::new_a(k)?))
            }
            _ => Err(mismatch()),
        },
        _ => Err(DuValError::NoSuchRow(row)),
    }
}

/// A surface singularity descriptor admitting a topological index.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SurfaceSing {
    DuVal(DuValType),
    Cyclic(CyclicQuot),
}

/// Order of the local fundamental group: `n` for a cyclic quotient, `n+1`
/// for `A(n)`, `4(n-2)` for `D(n)`, and the binary polyhedral orders 24, 48,
/// 120 for `E6, E7, E8`.
pub fn topological_index(s: SurfaceSing) -> i64 {
    match s {
        SurfaceSing::Cyclic(c) => c.n,
        SurfaceSing::DuVal(DuValType::A(n)) => n + 1,
        SurfaceSing::DuVal(DuValType::D(n)) => 4 * (n - 2),
        SurfaceSing::DuVal(DuValType::E(6)) => 24,
        SurfaceSing::DuVal(DuValType::E(7)) => 48,
        SurfaceSing::DuVal(DuValType::E(8)) => 120,
        SurfaceSing::DuVal(DuValType::E(n)) => unreachable!("invalid E subscript {n}"),
    }
}

/// Outcome of the index-divisibility test for a Q-Cartier Du Val surface
/// through a terminal point of index `m`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum IndexDivisibility {
    /// The topological index is not divisible by `m`: impossible surface.
    Fail,
    /// Divisible with quotient > 1: allowed.
    Pass,
    /// Equal to `m`: the point is then a cyclic quotient and the surface is
    /// forced to be `A(m-1)`.
    PassForcingA,
}

/// Divisibility test: the topological index of the surface must be divisible
/// by the threefold index `m`, and equality forces type `A(m-1)`.
pub fn index_divisibility_check(m: i64, surface: DuValType) -> IndexDivisibility {
    let n = topological_index(SurfaceSing::DuVal(surface));
    if n % m != 0 {
        return IndexDivisibility::Fail;
    }
    if n == m {
        if surface == DuValType::A(m - 1) {
            IndexDivisibility::PassForcingA
        } else {
            // Equality without type A(m-1) contradicts the forcing statement.
            IndexDivisibility::Fail
        }
    } else {
        IndexDivisibility::Pass
    }
}

/// The classes of terminal points in the canonical-cover table.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum TerminalClass {
    CAm,
    CAx2,
    CD2,
    CD3,
    CE2,
    CAx4,
}

impl fmt::Display for TerminalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TerminalClass::CAm => "cA/m",
            TerminalClass::CAx2 => "cAx/2",
            TerminalClass::CD2 => "cD/2",
            TerminalClass::CD3 => "cD/3",
            TerminalClass::CE2 => "cE/2",
            TerminalClass::CAx4 => "cAx/4",
        };
        f.write_str(s)
    }
}

/// The general-elephant cover of a terminal point: `cover -> base` of the
/// given degree. `cover = None` encodes a smooth cover sheet (the `A0` slot
/// of the `cA/m` row at `k = 1`, i.e. cyclic quotient points).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CoverRow {
    pub class: TerminalClass,
    pub cover: Option<DuValType>,
    pub base: DuValType,
    pub degree: i64,
}

/// Instantiate a row of the canonical-cover table. `k` parametrizes the
/// rows that carry a family parameter; `m` is only consulted for `cA/m`.
pub fn canonical_cover_row(
    class: TerminalClass,
    k: i64,
    m: i64,
) -> Result<CoverRow, DuValError> {
    let out_of_table = || DuValError::CoverOutOfTable(class.to_string(), k);
    match class {
        // A(k-1) --m:1--> A(km-1)
        TerminalClass::CAm => {
            if k < 1 || m < 2 {
                return Err(out_of_table());
            }
            let cover = if k == 1 {
                None
            } else {
                Some(DuValType::new_a(k - 1)?)
            };
            Ok(CoverRow {
                class,
                cover,
                base: DuValType::new_a(k * m - 1)?,
                degree: m,
            })
        }
        // A(2k-1) --2:1--> D(k+2)
        TerminalClass::CAx2 => {
            if k < 2 {
                return Err(out_of_table());
            }
            Ok(CoverRow {
                class,
                cover: Some(DuValType::new_a(2 * k - 1)?),
                base: DuValType::new_d(k + 2)?,
                degree: 2,
            })
        }
        // D(k+1) --2:1--> D(2k)
        TerminalClass::CD2 => {
            if k < 3 {
                return Err(out_of_table());
            }
            Ok(CoverRow {
                class,
                cover: Some(DuValType::new_d(k + 1)?),
                base: DuValType::new_d(2 * k)?,
                degree: 2,
            })
        }
        // D4 --3:1--> E6
        TerminalClass::CD3 => Ok(CoverRow {
            class,
            cover: Some(DuValType::D(4)),
            base: DuValType::E(6),
            degree: 3,
        }),
        // E6 --2:1--> E7
        TerminalClass::CE2 => Ok(CoverRow {
            class,
            cover: Some(DuValType::E(6)),
            base: DuValType::E(7),
            degree: 2,
        }),
        // A(2k-2) --4:1--> D(2k+1)
        TerminalClass::CAx4 => {
            if k < 2 {
                return Err(out_of_table());
            }
            Ok(CoverRow {
                class,
                cover: Some(DuValType::new_a(2 * k - 2)?),
                base: DuValType::new_d(2 * k + 1)?,
                degree: 4,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hj_examples() {
        assert_eq!(hj_expand(4, 1).unwrap(), vec![4]);
        assert_eq!(hj_expand(8, 3).unwrap(), vec![3, 3]);
        assert_eq!(hj_expand(12, 5).unwrap(), vec![3, 2, 3]);
        assert_eq!(hj_expand(7, 1).unwrap(), vec![7]);
        assert!(hj_expand(6, 3).is_err());
    }

    #[test]
    fn hj_fold_back() {
        for n in 2..=60 {
            for q in 1..n {
                if num_integer::gcd(n, q) != 1 {
                    continue;
                }
                let chain = hj_expand(n, q).unwrap();
                assert!(chain.iter().all(|&b| b >= 2));
                assert!(chain.len() as i64 <= n - 1);
                assert_eq!(hj_fold(&chain), Some(Frac::new(n, q)), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn dual_graph_examples() {
        // 1/(4k+4)(1, 2k+1) at k = 2.
        let cq = CyclicQuot::new(12, 5).unwrap();
        assert_eq!(dual_graph(&cq).chain, vec![-3, -2, -3]);

        // 1/(2k+1)(1, 2k-1) at k = 2.
        let cq = CyclicQuot::new(5, 3).unwrap();
        assert_eq!(dual_graph(&cq).chain, vec![-2, -3]);

        let cq = CyclicQuot::new(2, 1).unwrap();
        assert_eq!(dual_graph(&cq).chain, vec![-2]);
    }

    #[test]
    fn involution_chains_shapes() {
        // Row 6 graphs: -3 (-2)^(k-1) -3 with k+1 vertices for k > 0, -4 at k=0.
        assert_eq!(dual_graph(&CyclicQuot::new(4, 1).unwrap()).chain, vec![-4]);
        for k in 1..=10 {
            let cq = CyclicQuot::new(4 * k + 4, 2 * k + 1).unwrap();
            let chain = dual_graph(&cq).chain;
            assert_eq!(chain.len() as i64, k + 1);
            assert_eq!(chain[0], -3);
            assert_eq!(*chain.last().unwrap(), -3);
            assert!(chain[1..chain.len() - 1].iter().all(|&b| b == -2));
        }
        // Row 8 graphs: (-2)^(k-1) -3 with k vertices.
        for k in 1..=10 {
            let cq = CyclicQuot::new(2 * k + 1, 2 * k - 1).unwrap();
            let chain = dual_graph(&cq).chain;
            assert_eq!(chain.len() as i64, k);
            assert_eq!(*chain.last().unwrap(), -3);
            assert!(chain[..chain.len() - 1].iter().all(|&b| b == -2));
        }
    }

    #[test]
    fn catanese_examples() {
        assert_eq!(
            catanese_quotient(DuValType::A(5), 2).unwrap(),
            InvolutionQuotient::DuVal(DuValType::D(5))
        );
        assert_eq!(
            catanese_quotient(DuValType::E(6), 3).unwrap(),
            InvolutionQuotient::DuVal(DuValType::E(7))
        );
        assert_eq!(
            catanese_quotient(DuValType::D(5), 9).unwrap(),
            InvolutionQuotient::DuVal(DuValType::A(1))
        );
        assert_eq!(
            catanese_quotient(DuValType::A(3), 6).unwrap(),
            InvolutionQuotient::Cyclic(CyclicQuot::new(8, 3).unwrap())
        );
        assert_eq!(
            catanese_quotient(DuValType::A(4), 8).unwrap(),
            InvolutionQuotient::Cyclic(CyclicQuot::new(5, 3).unwrap())
        );
        // Shape mismatches are rejected.
        assert!(catanese_quotient(DuValType::A(4), 2).is_err());
        assert!(catanese_quotient(DuValType::E(7), 3).is_err());
        assert!(catanese_quotient(DuValType::A(3), 11).is_err());
        assert_eq!(involution_rows().len(), 10);
    }

    #[test]
    fn topological_indices() {
        assert_eq!(topological_index(SurfaceSing::DuVal(DuValType::A(3))), 4);
        assert_eq!(
            topological_index(SurfaceSing::Cyclic(CyclicQuot::new(8, 3).unwrap())),
            8
        );
        assert_eq!(topological_index(SurfaceSing::DuVal(DuValType::D(4))), 8);
        assert_eq!(topological_index(SurfaceSing::DuVal(DuValType::E(6))), 24);
        assert_eq!(topological_index(SurfaceSing::DuVal(DuValType::E(7))), 48);
        assert_eq!(topological_index(SurfaceSing::DuVal(DuValType::E(8))), 120);
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(
            index_divisibility_check(4, DuValType::A(3)),
            IndexDivisibility::PassForcingA
        );
        assert_eq!(
            index_divisibility_check(4, DuValType::A(2)),
            IndexDivisibility::Fail
        );
        assert_eq!(
            index_divisibility_check(2, DuValType::D(5)),
            IndexDivisibility::Pass
        );
    }

    #[test]
    fn cover_rows() {
        let row = canonical_cover_row(TerminalClass::CAm, 3, 4).unwrap();
        assert_eq!(row.cover, Some(DuValType::A(2)));
        assert_eq!(row.base, DuValType::A(11));
        assert_eq!(row.degree, 4);

        // Cyclic quotients sit at k = 1 with a smooth cover sheet.
        let row = canonical_cover_row(TerminalClass::CAm, 1, 4).unwrap();
        assert_eq!(row.cover, None);
        assert_eq!(row.base, DuValType::A(3));

        let row = canonical_cover_row(TerminalClass::CAx4, 2, 4).unwrap();
        assert_eq!(row.cover, Some(DuValType::A(2)));
        assert_eq!(row.base, DuValType::D(5));
        assert_eq!(row.degree, 4);

        let row = canonical_cover_row(TerminalClass::CD3, 0, 0).unwrap();
        assert_eq!(row.base, DuValType::E(6));
        assert_eq!(row.degree, 3);

        assert!(canonical_cover_row(TerminalClass::CAx2, 1, 2).is_err());
    }

    #[test]
    fn index_matches_cover_degree_bookkeeping() {
        // For cA/m rows the base index is degree times the cover index.
        for k in 1..=6 {
            for m in 2..=6 {
                let row = canonical_cover_row(TerminalClass::CAm, k, m).unwrap();
                let cover_index = row
                    .cover
                    .map(|t| topological_index(SurfaceSing::DuVal(t)))
                    .unwrap_or(1);
                let base_index = topological_index(SurfaceSing::DuVal(row.base));
                assert_eq!(base_index, cover_index * row.degree);
            }
        }
    }
}
