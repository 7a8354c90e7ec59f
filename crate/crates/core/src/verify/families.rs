//! The built-in equivariant conic-bundle families and the symbolic checks on
//! them: ideal equivariance under the finite cyclic action, central-fiber
//! component counts, and fixed-locus verification.
//!
//! Families live in `P3 x C2` with coordinates `(x, y, z, t; u, v)`; the
//! action is linear on the projective coordinates and linear on the base
//! pair, with exact cyclotomic entries.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::cyclotomic::Cyclotomic;
use super::poly::{null_space, solve_linear, LinSolve, MPoly, NVARS, VAR_NAMES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {0:?} needs the parameter k >= 1")]
    MissingParam(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
}

/// A finite linear action: a matrix on the projective coordinates and a
/// matrix on the base pair `(u, v)`. Row `i` lists the image of coordinate
/// `i`, so the same data substitutes into polynomials and maps points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    pub field_order: u32,
    /// Order of the action; applying it this many times is the identity.
    pub order: u32,
    pub proj: [[Cyclotomic; 4]; 4],
    pub base: [[Cyclotomic; 2]; 2],
}

impl GroupAction {
    pub fn identity(field_order: u32) -> Self {
        let zero = || Cyclotomic::zero(field_order);
        let one = || Cyclotomic::one(field_order);
        let mut proj: [[Cyclotomic; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
        let mut base: [[Cyclotomic; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
        for (i, row) in proj.iter_mut().enumerate() {
            row[i] = one();
        }
        for (i, row) in base.iter_mut().enumerate() {
            row[i] = one();
        }
        GroupAction {
            field_order,
            order: 1,
            proj,
            base,
        }
    }

    /// Substitution images of the six variables.
    pub fn images(&self) -> [MPoly; NVARS] {
        let n = self.field_order;
        std::array::from_fn(|i| {
            let mut p = MPoly::zero(n);
            if i < 4 {
                for j in 0..4 {
                    p = p.add(&MPoly::var(n, j).scale(&self.proj[i][j]));
                }
            } else {
                for j in 0..2 {
                    p = p.add(&MPoly::var(n, 4 + j).scale(&self.base[i - 4][j]));
                }
            }
            p
        })
    }

    pub fn proj_apply(&self, p: &[Cyclotomic; 4]) -> [Cyclotomic; 4] {
        std::array::from_fn(|i| {
            let mut acc = Cyclotomic::zero(self.field_order);
            for j in 0..4 {
                acc = acc.add(&self.proj[i][j].mul(&p[j]));
            }
            acc
        })
    }

    pub fn base_apply(&self, p: &[Cyclotomic; 2]) -> [Cyclotomic; 2] {
        std::array::from_fn(|i| {
            let mut acc = Cyclotomic::zero(self.field_order);
            for j in 0..2 {
                acc = acc.add(&self.base[i][j].mul(&p[j]));
            }
            acc
        })
    }

    /// The projective matrix is invertible (nonzero determinant).
    pub fn is_invertible(&self) -> bool {
        let rows: Vec<Vec<Cyclotomic>> = self.proj.iter().map(|r| r.to_vec()).collect();
        null_space(&rows, self.field_order).is_empty()
    }
}

/// A polynomial system in `P3 x C2` with a finite cyclic action.
#[derive(Clone, Debug, Serialize)]
pub struct EquivariantFamily {
    pub name: String,
    pub field_order: u32,
    pub generators: Vec<MPoly>,
    pub action: GroupAction,
    pub param: Option<u32>,
    /// Candidates the family is usually checked against.
    pub default_candidates: Vec<Candidate>,
}

/// Apply the action to a polynomial by exact substitution.
pub fn apply_action(poly: &MPoly, action: &GroupAction) -> MPoly {
    poly.substitute(&action.images())
}

/// Whether applying the action `order` times returns every generator.
pub fn action_order_holds(family: &EquivariantFamily) -> bool {
    family.generators.iter().all(|g| {
        let mut p = g.clone();
        for _ in 0..family.action.order {
            p = apply_action(&p, &family.action);
        }
        p == *g
    })
}

/// Outcome of the generator-stability check.
#[derive(Clone, Debug, Serialize)]
pub enum EquivarianceOutcome {
    /// `sigma(g_i) = sum_j c_ij g_j`; the matrix `c` is returned row-major.
    Stable { matrix: Vec<Vec<Cyclotomic>> },
    /// Some image is not in the generator span; the residual witnesses it.
    Failure { generator: usize, residual: MPoly },
}

/// Find scalars with `sigma(g_i) = sum_j c_ij g_j` by exact coefficient
/// matching, or report the first residual.
pub fn check_ideal_equivariance(family: &EquivariantFamily) -> EquivarianceOutcome {
    let n = family.field_order;
    let gens = &family.generators;
    let images: Vec<MPoly> = gens
        .iter()
        .map(|g| apply_action(g, &family.action))
        .collect();

    // Monomial basis spanning generators and images.
    let mut basis: BTreeMap<[u8; NVARS], usize> = BTreeMap::new();
    for p in gens.iter().chain(images.iter()) {
        for (e, _) in p.terms() {
            let next = basis.len();
            basis.entry(*e).or_insert(next);
        }
    }
    let rows = basis.len();
    let mut a = vec![vec![Cyclotomic::zero(n); gens.len()]; rows];
    for (j, g) in gens.iter().enumerate() {
        for (e, c) in g.terms() {
            a[basis[e]][j] = c.clone();
        }
    }

    let mut matrix = Vec::new();
    for (i, image) in images.iter().enumerate() {
        let mut b = vec![Cyclotomic::zero(n); rows];
        for (e, c) in image.terms() {
            b[basis[e]] = c.clone();
        }
        match solve_linear(&a, &b, n) {
            LinSolve::Solution(c) => matrix.push(c),
            LinSolve::Inconsistent(c) => {
                let mut residual = image.clone();
                for (j, g) in gens.iter().enumerate() {
                    residual = residual.sub(&g.scale(&c[j]));
                }
                return EquivarianceOutcome::Failure {
                    generator: i,
                    residual,
                };
            }
        }
    }
    EquivarianceOutcome::Stable { matrix }
}

/// A linear form on the projective coordinates, normalized so the first
/// nonzero coefficient is 1. Serializes as its display string, which is
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm(pub [Cyclotomic; 4]);

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl LinearForm {
    fn normalized(mut coeffs: [Cyclotomic; 4]) -> Self {
        if let Some(lead) = coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let inv = lead.inverse().expect("nonzero leading coefficient");
            for c in coeffs.iter_mut() {
                *c = c.mul(&inv);
            }
        }
        LinearForm(coeffs)
    }

    fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            if first {
                if s == "1" {
                    write!(f, "{}", VAR_NAMES[j])?;
                } else {
                    write!(f, "({})*{}", s, VAR_NAMES[j])?;
                }
                first = false;
            } else if s == "1" {
                write!(f, " + {}", VAR_NAMES[j])?;
            } else {
                write!(f, " + ({})*{}", s, VAR_NAMES[j])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A reduced component of the central fiber: a line in `P3` cut by two
/// independent linear forms.
#[derive(Clone, Debug, Serialize)]
pub struct FiberComponent {
    pub forms: [LinearForm; 2],
    /// Product of factor multiplicities along the branches reaching this
    /// component; purely informational.
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberDecomposition {
    pub components: Vec<FiberComponent>,
    pub reduced_count: usize,
    /// A common point of all components, when one exists.
    pub meeting_point: Option<[Cyclotomic; 4]>,
    pub notes: Vec<String>,
}

struct BranchState {
    constraints: Vec<LinearForm>,
    gens: Vec<MPoly>,
    mult: u32,
}

/// Decompose the central fiber `u = v = 0` into reduced components by
/// branching over linear factors of the specialized generators. Refuses with
/// an unsupported-shape error when a needed factorization is not visible
/// over the cyclotomic field.
pub fn central_fiber_components(
    family: &EquivariantFamily,
) -> Result<FiberDecomposition, VerifyError> {
    let n = family.field_order;
    let zero = MPoly::zero(n);
    let specialized: Vec<MPoly> = family
        .generators
        .iter()
        .map(|g| g.substitute_var(4, &zero).substitute_var(5, &zero))
        .collect();
    for p in &specialized {
        if p.is_zero() {
            return Err(VerifyError::UnsupportedShape(
                "a generator vanishes identically on the central fiber".into(),
            ));
        }
        for (e, _) in p.terms() {
            debug_assert_eq!(e[4] + e[5], 0);
        }
    }

    let mut notes = Vec::new();
    let mut found: BTreeMap<String, FiberComponent> = BTreeMap::new();
    let mut stack = vec![BranchState {
        constraints: Vec::new(),
        gens: specialized,
        mult: 1,
    }];

    while let Some(state) = stack.pop() {
        // Reduce generators modulo the constraints.
        let mut gens: Vec<MPoly> = Vec::new();
        for g in &state.gens {
            let mut g = g.clone();
            for form in &state.constraints {
                let p = form.pivot().expect("constraints are nonzero");
                let mut image = MPoly::zero(n);
                for (j, c) in form.0.iter().enumerate() {
                    if j != p && !c.is_zero() {
                        image = image.sub(&MPoly::var(n, j).scale(c));
                    }
                }
                g = g.substitute_var(p, &image);
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }

        if gens.iter().any(|g| g.total_degree() == 0) {
            // A nonzero constant: empty branch.
            continue;
        }
        if gens.is_empty() {
            match state.constraints.len() {
                2 => {
                    let mut forms = state.constraints.clone();
                    forms.sort_by_key(|f| f.pivot());
                    let key = format!("{} & {}", forms[0], forms[1]);
                    found
                        .entry(key)
                        .and_modify(|c| c.multiplicity += state.mult)
                        .or_insert(FiberComponent {
                            forms: [forms[0].clone(), forms[1].clone()],
                            multiplicity: state.mult,
                        });
                }
                r if r > 2 => {
                    notes.push(format!(
                        "branch cut out an isolated point (rank {r}); not a curve component"
                    ));
                }
                r => {
                    return Err(VerifyError::UnsupportedShape(format!(
                        "branch of rank {r} has excess dimension"
                    )));
                }
            }
            continue;
        }

        // Branch over the linear factors of the first factorable generator.
        let mut factored = None;
        for (idx, g) in gens.iter().enumerate() {
            if let Some(f) = factor_into_linears(g) {
                factored = Some((idx, f));
                break;
            }
        }
        let Some((idx, factors)) = factored else {
            return Err(VerifyError::UnsupportedShape(format!(
                "no generator splits into linear forms: {}",
                gens.iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            )));
        };
        let rest: Vec<MPoly> = gens
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, g)| g.clone())
            .collect();
        for (form, mult) in factors {
            let mut constraints = state.constraints.clone();
            constraints.push(form);
            rref(&mut constraints);
            stack.push(BranchState {
                constraints,
                gens: rest.clone(),
                mult: state.mult * mult,
            });
        }
    }

    let mut components: Vec<FiberComponent> = found.into_values().collect();
    components.sort_by_key(|c| format!("{} & {}", c.forms[0], c.forms[1]));
    let meeting_point = common_point(&components, n);
    Ok(FiberDecomposition {
        reduced_count: components.len(),
        components,
        meeting_point,
        notes,
    })
}

/// Row-reduce a set of linear forms to reduced echelon form.
fn rref(forms: &mut Vec<LinearForm>) {
    let mut rows: Vec<[Cyclotomic; 4]> = forms.iter().map(|f| f.0.clone()).collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse().expect("pivot nonzero");
        for c in 0..4 {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..4 {
                    let v = rows[r][c].sub(&f.mul(&rows[rank][c]));
                    rows[r][c] = v;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    *forms = rows.into_iter().map(LinearForm::normalized).collect();
}

/// Factor a homogeneous polynomial in the projective variables into linear
/// forms: variable content, then a remaining linear or binary-quadratic
/// factor. `None` when the polynomial does not visibly split.
fn factor_into_linears(p: &MPoly) -> Option<Vec<(LinearForm, u32)>> {
    let n = p.order();
    let mut factors: Vec<(LinearForm, u32)> = Vec::new();
    let mut r = p.clone();
    for i in 0..4 {
        let k = r.min_exp(i);
        if k > 0 && !r.is_zero() {
            let mut coeffs: [Cyclotomic; 4] = std::array::from_fn(|_| Cyclotomic::zero(n));
            coeffs[i] = Cyclotomic::one(n);
            factors.push((LinearForm(coeffs), k as u32));
            r = r.shift_down(i, k);
        }
    }
    match r.total_degree() {
        0 => Some(factors),
        1 => {
            let mut coeffs: [Cyclotomic; 4] = std::array::from_fn(|_| Cyclotomic::zero(n));
            for (e, c) in r.terms() {
                let j = (0..4).find(|&j| e[j] == 1).expect("projective linear term");
                coeffs[j] = c.clone();
            }
            factors.push((LinearForm::normalized(coeffs), 1));
            Some(factors)
        }
        2 => {
            let vars: Vec<usize> = (0..4).filter(|&i| r.degree_in(i) > 0).collect();
            if vars.len() != 2 {
                return None;
            }
            let (s, t) = (vars[0], vars[1]);
            let coef = |es: u8, et: u8| {
                let mut e = [0u8; NVARS];
                e[s] = es;
                e[t] = et;
                r.coefficient(&e)
            };
            let alpha = coef(2, 0);
            let beta = coef(1, 1);
            let gamma = coef(0, 2);
            // Variable content is stripped, so alpha and gamma are nonzero.
            let disc = beta.mul(&beta).sub(&alpha.mul(&gamma).mul(&Cyclotomic::from_integer(n, 4)));
            let sq = disc.monomial_sqrt()?;
            let two_alpha = alpha.mul(&Cyclotomic::from_integer(n, 2));
            let r1 = beta.neg().add(&sq).div(&two_alpha).expect("alpha is nonzero");
            let r2 = beta.neg().sub(&sq).div(&two_alpha).expect("alpha is nonzero");
            let form_for = |root: &Cyclotomic| {
                let mut coeffs: [Cyclotomic; 4] = std::array::from_fn(|_| Cyclotomic::zero(n));
                coeffs[s] = Cyclotomic::one(n);
                coeffs[t] = root.neg();
                LinearForm::normalized(coeffs)
            };
            if r1 == r2 {
                factors.push((form_for(&r1), 2));
            } else {
                factors.push((form_for(&r1), 1));
                factors.push((form_for(&r2), 1));
            }
            Some(factors)
        }
        _ => None,
    }
}

fn common_point(components: &[FiberComponent], n: u32) -> Option<[Cyclotomic; 4]> {
    if components.is_empty() {
        return None;
    }
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for c in components {
        for f in &c.forms {
            rows.push(f.0.to_vec());
        }
    }
    // Pad to a square system for the null-space routine.
    while rows.len() < 4 {
        rows.push(vec![Cyclotomic::zero(n); 4]);
    }
    let rows: Vec<Vec<Cyclotomic>> = rows
        .into_iter()
        .map(|mut r| {
            r.resize(4, Cyclotomic::zero(n));
            r
        })
        .collect();
    // Reduce to exactly 4 rows by Gaussian elimination on the stack.
    let mut square = vec![vec![Cyclotomic::zero(n); 4]; 4];
    let mut rank = 0;
    let mut work = rows;
    for col in 0..4 {
        if let Some(p) = (0..work.len()).find(|&r| !work[r][col].is_zero()) {
            let row = work.remove(p);
            let inv = row[col].inverse().expect("pivot nonzero");
            let row: Vec<Cyclotomic> = row.iter().map(|c| c.mul(&inv)).collect();
            for other in work.iter_mut() {
                if !other[col].is_zero() {
                    let f = other[col].clone();
                    for c in 0..4 {
                        let v = other[c].sub(&f.mul(&row[c]));
                        other[c] = v;
                    }
                }
            }
            square[rank] = row;
            rank += 1;
        }
    }
    let ns = null_space(&square, n);
    if ns.len() == 1 {
        let v = &ns[0];
        Some(std::array::from_fn(|i| v[i].clone()))
    } else {
        None
    }
}

/// A candidate piece of the fixed locus.
#[derive(Clone, Debug, Serialize)]
pub enum Candidate {
    Point {
        label: String,
        proj: [Cyclotomic; 4],
        base: [Cyclotomic; 2],
    },
    Hyperplane {
        label: String,
        form: [Cyclotomic; 4],
    },
}

impl Candidate {
    pub fn point(label: &str, proj: [Cyclotomic; 4], base: [Cyclotomic; 2]) -> Self {
        Candidate::Point {
            label: label.into(),
            proj,
            base,
        }
    }

    pub fn coordinate_hyperplane(label: &str, n: u32, var: usize) -> Self {
        let mut form: [Cyclotomic; 4] = std::array::from_fn(|_| Cyclotomic::zero(n));
        form[var] = Cyclotomic::one(n);
        Candidate::Hyperplane {
            label: label.into(),
            form,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Candidate::Point { label, .. } | Candidate::Hyperplane { label, .. } => label,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum CandidateOutcome {
    Point {
        label: String,
        projectively_fixed: bool,
        base_fixed: bool,
        on_family: bool,
    },
    Hyperplane {
        label: String,
        invariant: bool,
        pointwise_fixed: bool,
    },
}

impl CandidateOutcome {
    pub fn passed(&self) -> bool {
        match self {
            CandidateOutcome::Point {
                projectively_fixed,
                base_fixed,
                on_family,
                ..
            } => *projectively_fixed && *base_fixed && *on_family,
            CandidateOutcome::Hyperplane {
                invariant,
                pointwise_fixed,
                ..
            } => *invariant && *pointwise_fixed,
        }
    }
}

/// One projectivized eigenspace of the projective action matrix.
#[derive(Clone, Debug, Serialize)]
pub struct EigenComponent {
    pub eigenvalue: Cyclotomic,
    pub dim: usize,
    pub basis: Vec<Vec<Cyclotomic>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedLocusReport {
    /// The full projective fixed locus: eigenspaces by root-of-unity
    /// eigenvalue.
    pub eigen: Vec<EigenComponent>,
    pub candidates: Vec<CandidateOutcome>,
}

impl FixedLocusReport {
    pub fn all_candidates_pass(&self) -> bool {
        self.candidates.iter().all(|c| c.passed())
    }
}

/// Verify candidate fixed points/divisors and list the full projective fixed
/// locus of the action matrix (eigenvalues among the roots of unity of the
/// field order).
pub fn fixed_points_check(
    family: &EquivariantFamily,
    candidates: &[Candidate],
) -> FixedLocusReport {
    let n = family.field_order;
    let action = &family.action;

    let mut eigen = Vec::new();
    for k in 0..n {
        let lambda = Cyclotomic::root(n, k as i64);
        let mut mat: Vec<Vec<Cyclotomic>> = action.proj.iter().map(|r| r.to_vec()).collect();
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = row[i].sub(&lambda);
        }
        let ns = null_space(&mat, n);
        if !ns.is_empty() {
            eigen.push(EigenComponent {
                eigenvalue: lambda,
                dim: ns.len(),
                basis: ns,
            });
        }
    }

    let outcomes = candidates
        .iter()
        .map(|cand| match cand {
            Candidate::Point { label, proj, base } => {
                let image = action.proj_apply(proj);
                let projectively_fixed = proportional(&image, proj, n);
                let base_image = action.base_apply(base);
                let base_fixed = base_image == *base;
                let point: [Cyclotomic; NVARS] = [
                    proj[0].clone(),
                    proj[1].clone(),
                    proj[2].clone(),
                    proj[3].clone(),
                    base[0].clone(),
                    base[1].clone(),
                ];
                let on_family = family
                    .generators
                    .iter()
                    .all(|g| g.eval(&point).is_zero());
                CandidateOutcome::Point {
                    label: label.clone(),
                    projectively_fixed,
                    base_fixed,
                    on_family,
                }
            }
            Candidate::Hyperplane { label, form } => {
                // The pullback of the form is form composed with the matrix.
                let pulled: [Cyclotomic; 4] = std::array::from_fn(|j| {
                    let mut acc = Cyclotomic::zero(n);
                    for i in 0..4 {
                        acc = acc.add(&form[i].mul(&action.proj[i][j]));
                    }
                    acc
                });
                let invariant = proportional(&pulled, form, n);
                let pointwise_fixed = invariant
                    && hyperplane_pointwise_fixed(action, form)
                    && action.base == GroupAction::identity(n).base;
                CandidateOutcome::Hyperplane {
                    label: label.clone(),
                    invariant,
                    pointwise_fixed,
                }
            }
        })
        .collect();

    FixedLocusReport {
        eigen,
        candidates: outcomes,
    }
}

fn proportional(a: &[Cyclotomic; 4], b: &[Cyclotomic; 4], n: u32) -> bool {
    // a = lambda * b for some nonzero lambda.
    let Some(j) = (0..4).find(|&j| !b[j].is_zero()) else {
        return a.iter().all(|c| c.is_zero());
    };
    if a[j].is_zero() {
        return false;
    }
    let lambda = match a[j].div(&b[j]) {
        Ok(l) => l,
        Err(_) => return false,
    };
    let _ = n;
    (0..4).all(|i| a[i] == lambda.mul(&b[i]))
}

fn hyperplane_pointwise_fixed(action: &GroupAction, form: &[Cyclotomic; 4]) -> bool {
    let n = action.field_order;
    // Basis of ker(form).
    let mut rows = vec![form.to_vec()];
    for _ in 1..4 {
        rows.push(vec![Cyclotomic::zero(n); 4]);
    }
    let kernel = null_space(&rows, n);
    debug_assert_eq!(kernel.len(), 3);
    let mut scalar: Option<Cyclotomic> = None;
    for b in &kernel {
        let bp: [Cyclotomic; 4] = std::array::from_fn(|i| b[i].clone());
        let image = action.proj_apply(&bp);
        let Some(j) = (0..4).find(|&j| !bp[j].is_zero()) else {
            return false;
        };
        if bp[j].is_zero() {
            return false;
        }
        let lambda = match image[j].div(&bp[j]) {
            Ok(l) => l,
            Err(_) => return false,
        };
        if !(0..4).all(|i| image[i] == lambda.mul(&bp[i])) {
            return false;
        }
        match &scalar {
            None => scalar = Some(lambda),
            Some(s) if *s == lambda => {}
            Some(_) => return false,
        }
    }
    true
}

/// Names of the built-in families.
pub fn builtin_names() -> [&'static str; 5] {
    [
        "elliptic-A3",
        "elliptic-A1",
        "cAx4-family",
        "multiple-fiber",
        "two-nodes",
    ]
}

/// Construct a built-in family by name. `k` is required for the family
/// carrying a parameter and ignored elsewhere.
pub fn builtin_examples(name: &str, k: Option<u32>) -> Result<EquivariantFamily, VerifyError> {
    match name {
        // Intersection of two quadric pencils with a Z8 action; the quotient
        // has an A3 base point.
        "elliptic-A3" => {
            let n = 8;
            let e = |k: i64| Cyclotomic::root(n, k);
            let x = MPoly::var(n, 0);
            let y = MPoly::var(n, 1);
            let z = MPoly::var(n, 2);
            let t = MPoly::var(n, 3);
            let u = MPoly::var(n, 4);
            let v = MPoly::var(n, 5);
            let g1 = x.mul(&y).sub(&u.mul(&t.pow(2)));
            let g2 = x.add(&y).add(&z).mul(&z).sub(&v.mul(&t.pow(2)));
            let zero = || Cyclotomic::zero(n);
            let action = GroupAction {
                field_order: n,
                order: 8,
                proj: [
                    [zero(), zero(), e(5), zero()],
                    [e(1), e(1), e(1), zero()],
                    [zero(), e(1).neg(), zero(), zero()],
                    [zero(), zero(), zero(), Cyclotomic::one(n)],
                ],
                base: [
                    [zero(), e(6)],
                    [e(2).neg(), zero()],
                ],
            };
            let q = Candidate::point(
                "Q",
                [zero(), zero(), zero(), Cyclotomic::one(n)],
                [zero(), zero()],
            );
            Ok(EquivariantFamily {
                name: name.into(),
                field_order: n,
                generators: vec![g1, g2],
                action,
                param: None,
                default_candidates: vec![q],
            })
        }
        // The same ambient pencils with a Z4 action; the quotient has an A1
        // base point and a 1/4(1,1,3) singularity.
        "elliptic-A1" => {
            let n = 4;
            let i = Cyclotomic::root(n, 1);
            let one = Cyclotomic::one(n);
            let zero = || Cyclotomic::zero(n);
            let x = MPoly::var(n, 0);
            let y = MPoly::var(n, 1);
            let z = MPoly::var(n, 2);
            let t = MPoly::var(n, 3);
            let u = MPoly::var(n, 4);
            let v = MPoly::var(n, 5);
            let g1 = x.mul(&y).sub(&u.mul(&t.pow(2)));
            let g2 = z
                .pow(2)
                .sub(&u.mul(&x.pow(2).add(&y.pow(2))))
                .sub(&v.mul(&t.pow(2)));
            let action = GroupAction {
                field_order: n,
                order: 4,
                proj: [
                    [zero(), one.clone(), zero(), zero()],
                    [one.clone().neg(), zero(), zero(), zero()],
                    [zero(), zero(), i, zero()],
                    [zero(), zero(), zero(), one.clone()],
                ],
                base: [
                    [one.clone().neg(), zero()],
                    [zero(), one.clone().neg()],
                ],
            };
            let q = Candidate::point(
                "Q",
                [zero(), zero(), zero(), one],
                [zero(), zero()],
            );
            Ok(EquivariantFamily {
                name: name.into(),
                field_order: n,
                generators: vec![g1, g2],
                action,
                param: None,
                default_candidates: vec![q],
            })
        }
        // Z4-equivariant family whose quotient carries a cAx/4 point.
        "cAx4-family" => {
            let Some(k) = k.filter(|&k| k >= 1) else {
                return Err(VerifyError::MissingParam(name.into()));
            };
            let n = 4;
            let i = Cyclotomic::root(n, 1);
            let one = Cyclotomic::one(n);
            let zero = || Cyclotomic::zero(n);
            let x = MPoly::var(n, 0);
            let y = MPoly::var(n, 1);
            let z = MPoly::var(n, 2);
            let t = MPoly::var(n, 3);
            let u = MPoly::var(n, 4);
            let v = MPoly::var(n, 5);
            let u_pow = u.pow((2 * k + 1) as u8);
            let g1 = x
                .mul(&y)
                .sub(&u_pow.mul(&t.pow(2)))
                .sub(&v.mul(&t.pow(2)));
            let g2 = z
                .pow(2)
                .sub(&u.mul(&x.pow(2).sub(&y.pow(2))))
                .sub(&v.mul(&t.pow(2)));
            let action = GroupAction {
                field_order: n,
                order: 4,
                proj: [
                    [zero(), i.clone(), zero(), zero()],
                    [i.clone(), zero(), zero(), zero()],
                    [zero(), zero(), i, zero()],
                    [zero(), zero(), zero(), one.clone()],
                ],
                base: [
                    [one.clone().neg(), zero()],
                    [zero(), one.clone().neg()],
                ],
            };
            let q = Candidate::point(
                "Q",
                [zero(), zero(), zero(), one],
                [zero(), zero()],
            );
            Ok(EquivariantFamily {
                name: name.into(),
                field_order: n,
                generators: vec![g1, g2],
                action,
                param: Some(k),
                default_candidates: vec![q],
            })
        }
        // Z2-equivariant family with a multiple central fiber over a smooth
        // base point.
        "multiple-fiber" => {
            let n = 2;
            let one = Cyclotomic::one(n);
            let neg = one.clone().neg();
            let zero = || Cyclotomic::zero(n);
            let x = MPoly::var(n, 0);
            let y = MPoly::var(n, 1);
            let z = MPoly::var(n, 2);
            let t = MPoly::var(n, 3);
            let u = MPoly::var(n, 4);
            let v = MPoly::var(n, 5);
            let g1 = x.mul(&y).sub(&z.pow(2)).sub(&u.mul(&t.pow(2)));
            let g2 = x
                .pow(2)
                .sub(&u.mul(&y.pow(2)))
                .sub(&v.mul(&z.pow(2).add(&t.pow(2))));
            let action = GroupAction {
                field_order: n,
                order: 2,
                proj: [
                    [neg.clone(), zero(), zero(), zero()],
                    [zero(), neg.clone(), zero(), zero()],
                    [zero(), zero(), neg.clone(), zero()],
                    [zero(), zero(), zero(), one.clone()],
                ],
                base: GroupAction::identity(n).base,
            };
            let b = Candidate::coordinate_hyperplane("B: t = 0", n, 3);
            let q = Candidate::point(
                "isolated point",
                [zero(), zero(), zero(), one],
                [zero(), zero()],
            );
            Ok(EquivariantFamily {
                name: name.into(),
                field_order: n,
                generators: vec![g1, g2],
                action,
                param: None,
                default_candidates: vec![b, q],
            })
        }
        // Z2-equivariant family whose quotient has one 1/2(1,1,1) point and
        // two ordinary double points.
        "two-nodes" => {
            let n = 2;
            let one = Cyclotomic::one(n);
            let neg = one.clone().neg();
            let zero = || Cyclotomic::zero(n);
            let x = MPoly::var(n, 0);
            let y = MPoly::var(n, 1);
            let z = MPoly::var(n, 2);
            let t = MPoly::var(n, 3);
            let u = MPoly::var(n, 4);
            let v = MPoly::var(n, 5);
            let g1 = x
                .pow(2)
                .sub(&u.mul(&z.pow(2)))
                .sub(&v.mul(&t.pow(2)));
            let g2 = y
                .pow(2)
                .sub(&u.mul(&t.pow(2)))
                .sub(&v.mul(&z.pow(2)));
            let action = GroupAction {
                field_order: n,
                order: 2,
                proj: [
                    [neg.clone(), zero(), zero(), zero()],
                    [zero(), neg.clone(), zero(), zero()],
                    [zero(), zero(), neg.clone(), zero()],
                    [zero(), zero(), zero(), one.clone()],
                ],
                base: GroupAction::identity(n).base,
            };
            let b = Candidate::coordinate_hyperplane("B: t = 0", n, 3);
            let q = Candidate::point(
                "Q",
                [zero(), zero(), zero(), one],
                [zero(), zero()],
            );
            Ok(EquivariantFamily {
                name: name.into(),
                field_order: n,
                generators: vec![g1, g2],
                action,
                param: None,
                default_candidates: vec![b, q],
            })
        }
        other => Err(VerifyError::UnknownFamily(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_action_examples() {
        let fam = builtin_examples("elliptic-A3", None).unwrap();
        let sigma_g1 = apply_action(&fam.generators[0], &fam.action);
        // sigma(g1) = eps^(-2) * g2.
        let expected = fam.generators[1].scale(&Cyclotomic::root(8, 6));
        assert_eq!(sigma_g1, expected);

        let id = GroupAction::identity(8);
        assert_eq!(apply_action(&fam.generators[0], &id), fam.generators[0]);

        let fam4 = builtin_examples("multiple-fiber", None).unwrap();
        let x = MPoly::var(2, 0);
        assert_eq!(apply_action(&x, &fam4.action), x.neg());
    }

    #[test]
    fn equivariance_scalars() {
        let fam = builtin_examples("elliptic-A3", None).unwrap();
        match check_ideal_equivariance(&fam) {
            EquivarianceOutcome::Stable { matrix } => {
                assert!(matrix[0][0].is_zero());
                assert_eq!(matrix[0][1], Cyclotomic::root(8, 6));
                assert_eq!(matrix[1][0], Cyclotomic::root(8, 2).neg());
                assert!(matrix[1][1].is_zero());
            }
            EquivarianceOutcome::Failure { .. } => panic!("family is equivariant"),
        }

        let fam = builtin_examples("multiple-fiber", None).unwrap();
        match check_ideal_equivariance(&fam) {
            EquivarianceOutcome::Stable { matrix } => {
                assert_eq!(matrix[0][0], Cyclotomic::one(2));
                assert!(matrix[0][1].is_zero());
                assert!(matrix[1][0].is_zero());
                assert_eq!(matrix[1][1], Cyclotomic::one(2));
            }
            EquivarianceOutcome::Failure { .. } => panic!("family is equivariant"),
        }
    }

    #[test]
    fn perturbed_generator_fails() {
        let mut fam = builtin_examples("elliptic-A3", None).unwrap();
        let x = MPoly::var(8, 0);
        fam.generators[0] = fam.generators[0].add(&x.pow(2));
        match check_ideal_equivariance(&fam) {
            EquivarianceOutcome::Failure { residual, .. } => assert!(!residual.is_zero()),
            EquivarianceOutcome::Stable { .. } => panic!("perturbation must break stability"),
        }
    }

    #[test]
    fn action_orders() {
        for name in builtin_names() {
            let k = (name == "cAx4-family").then_some(1);
            let fam = builtin_examples(name, k).unwrap();
            assert!(action_order_holds(&fam), "{name}");
            assert!(fam.action.is_invertible(), "{name}");
        }
    }

    #[test]
    fn equivariance_matrices_have_the_action_order() {
        for name in builtin_names() {
            let k = (name == "cAx4-family").then_some(1);
            let fam = builtin_examples(name, k).unwrap();
            let EquivarianceOutcome::Stable { matrix } = check_ideal_equivariance(&fam) else {
                panic!("{name} is stable");
            };
            let n = fam.field_order;
            let size = matrix.len();
            // Invertible: the matrix annihilates nothing.
            let ns = super::super::poly::null_space(&matrix, n);
            assert!(ns.is_empty(), "{name} matrix is invertible");
            // Raising to the action order gives the identity.
            let mut acc = matrix.clone();
            for _ in 1..fam.action.order {
                let mut next = vec![vec![Cyclotomic::zero(n); size]; size];
                for (i, row) in next.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        for l in 0..size {
                            *cell = cell.add(&acc[i][l].mul(&matrix[l][j]));
                        }
                    }
                }
                acc = next;
            }
            for (i, row) in acc.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    let expect = if i == j {
                        Cyclotomic::one(n)
                    } else {
                        Cyclotomic::zero(n)
                    };
                    assert_eq!(*cell, expect, "{name} matrix^order at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn fiber_decomposition_stable_under_linear_generator_change() {
        let fam = builtin_examples("elliptic-A3", None).unwrap();
        let base = central_fiber_components(&fam).unwrap();

        let mut changed = fam.clone();
        changed.generators = vec![
            fam.generators[0].add(&fam.generators[1]),
            fam.generators[1].clone(),
        ];
        let mixed = central_fiber_components(&changed).unwrap();

        assert_eq!(base.reduced_count, mixed.reduced_count);
        let key = |f: &FiberDecomposition| {
            let mut v: Vec<String> = f
                .components
                .iter()
                .map(|c| format!("{} & {}", c.forms[0], c.forms[1]))
                .collect();
            v.sort();
            v
        };
        assert_eq!(key(&base), key(&mixed));
    }

    #[test]
    fn central_fibers() {
        let fam = builtin_examples("elliptic-A3", None).unwrap();
        let fiber = central_fiber_components(&fam).unwrap();
        assert_eq!(fiber.reduced_count, 4);
        // All four lines meet at (0,0,0,1).
        let p = fiber.meeting_point.expect("lines are concurrent");
        assert!(p[0].is_zero() && p[1].is_zero() && p[2].is_zero() && !p[3].is_zero());

        let fam = builtin_examples("multiple-fiber", None).unwrap();
        let fiber = central_fiber_components(&fam).unwrap();
        assert_eq!(fiber.reduced_count, 1);
        assert!(fiber.components[0].multiplicity > 1);

        let fam = builtin_examples("two-nodes", None).unwrap();
        let fiber = central_fiber_components(&fam).unwrap();
        assert_eq!(fiber.reduced_count, 1);
    }

    #[test]
    fn codimension_two_linear_system() {
        // {x, y} cuts a single line.
        let n = 2;
        let fam = EquivariantFamily {
            name: "linear".into(),
            field_order: n,
            generators: vec![MPoly::var(n, 0), MPoly::var(n, 1)],
            action: GroupAction::identity(n),
            param: None,
            default_candidates: vec![],
        };
        let fiber = central_fiber_components(&fam).unwrap();
        assert_eq!(fiber.reduced_count, 1);
        assert_eq!(fiber.components[0].multiplicity, 1);
    }

    #[test]
    fn fixed_point_examples() {
        let fam = builtin_examples("elliptic-A3", None).unwrap();
        let report = fixed_points_check(&fam, &fam.default_candidates);
        assert!(report.all_candidates_pass());
        // Four simple eigenlines: the generator fixes exactly 4 projective
        // points, only one of which lies on the family.
        let total_dim: usize = report.eigen.iter().map(|e| e.dim).sum();
        assert_eq!(total_dim, 4);
        assert_eq!(report.eigen.iter().filter(|e| e.dim == 1).count(), 4);

        // A generic point is not fixed.
        let one = Cyclotomic::one(8);
        let generic = Candidate::point(
            "generic",
            [one.clone(), one.clone(), one.clone(), one.clone()],
            [Cyclotomic::zero(8), Cyclotomic::zero(8)],
        );
        let report = fixed_points_check(&fam, &[generic]);
        assert!(!report.candidates[0].passed());

        let fam = builtin_examples("multiple-fiber", None).unwrap();
        let report = fixed_points_check(&fam, &fam.default_candidates);
        assert!(report.all_candidates_pass());
    }
}
