//! Characters, polynomials in the character basis, dual-polynomial
//! validation, and the approximate-degree linear programs for total and
//! partial Boolean functions.
//!
//! Both programs are solved through their standard-form duals, so one
//! simplex run yields the optimal approximation distance, the dual witness
//! (the dual polynomial), and the primal witness (the approximating
//! polynomial, read off the simplex multipliers).

use std::collections::BTreeMap;

use ndarray::Array2;

use crate::domain::{enumerate_assignments, Assignment, InputDomain, PartialFunction, Word};
use crate::error::{Error, Result};
use crate::simplex::{solve_max, StandardLp};
use crate::Config;

/// Character value `prod_{i in S} (-1)^{x_i}` for a Boolean string.
pub fn chi(indices: &[usize], x: &Word) -> Result<f64> {
    if let Some(&s) = x.iter().find(|&&s| s > 1) {
        return Err(Error::BooleanOnly { q: s as usize + 1 });
    }
    let mut mask = 0u64;
    for &i in indices {
        if i >= x.len() {
            return Err(Error::InvalidAssignment(format!(
                "index {i} out of range for n = {}",
                x.len()
            )));
        }
        mask |= 1 << i;
    }
    Ok(chi_mask(mask, x))
}

pub(crate) fn chi_mask(mask: u64, x: &Word) -> f64 {
    let mut parity = 0u32;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        parity ^= x[i] as u32;
        m &= m - 1;
    }
    if parity & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Subset masks of {0,...,n-1} with at most `d` bits, ordered by
/// (size, index set lexicographic).
pub(crate) fn subsets_upto(n: usize, d: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 0..=d.min(n) {
        for coords in crate::domain::combinations(n, k) {
            out.push(coords.iter().fold(0u64, |m, &i| m | (1 << i)));
        }
    }
    out
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// A real polynomial over `{0,1}^n` in the character basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    coeffs: BTreeMap<u64, f64>,
}

impl Polynomial {
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = (Vec<usize>, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (indices, c) in coeffs {
            let mut mask = 0u64;
            for &i in &indices {
                if i >= n {
                    return Err(Error::InvalidAssignment(format!(
                        "index {i} out of range for n = {n}"
                    )));
                }
                mask |= 1 << i;
            }
            if !c.is_finite() {
                return Err(Error::Solver("non-finite polynomial coefficient".into()));
            }
            *map.entry(mask).or_insert(0.0) += c;
        }
        Ok(Polynomial { n, coeffs: map })
    }

    pub(crate) fn from_masks(n: usize, coeffs: BTreeMap<u64, f64>) -> Self {
        Polynomial { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(&m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        let mask = indices.iter().fold(0u64, |m, &i| m | (1 << i));
        self.coeffs.get(&mask).copied().unwrap_or(0.0)
    }

    /// Coefficients as (index set, value) pairs in (size, lexicographic) order handled by mask order.
    pub fn coefficients(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (mask_indices(m), c))
    }

    pub fn eval(&self, x: &Word) -> f64 {
        self.coeffs.iter().map(|(&m, &c)| c * chi_mask(m, x)).sum()
    }
}

/// A signed table over `{0,1}^n` with a claimed orthogonality degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolynomial {
    n: usize,
    degree: usize,
    values: Vec<f64>,
}

impl DualPolynomial {
    pub fn new(n: usize, degree: usize, values: Vec<f64>) -> Result<Self> {
        let len = 1usize << n;
        if values.len() != len {
            return Err(Error::InvalidDual(format!(
                "need {len} values for n = {n}, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDual("non-finite value".into()));
        }
        Ok(DualPolynomial { n, degree, values })
    }

    /// The normalized full parity character, a valid dual at every degree < n.
    pub fn parity(n: usize) -> Self {
        let len = 1usize << n;
        let scale = 1.0 / len as f64;
        let values = (0..len)
            .map(|r| if (r as u64).count_ones() % 2 == 0 { scale } else { -scale })
            .collect();
        DualPolynomial { n, degree: n.saturating_sub(1), values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at_rank(&self, r: usize) -> f64 {
        self.values[r]
    }

    pub fn value(&self, domain: &InputDomain, x: &Word) -> f64 {
        self.values[domain.rank(x)]
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn negated(&self) -> Self {
        DualPolynomial {
            n: self.n,
            degree: self.degree,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `sum_x phi(x) f(x)` over the 1-inputs of a total function.
    pub fn objective_total(&self, f: &PartialFunction) -> f64 {
        let domain = f.domain();
        f.ones().iter().map(|x| self.values[domain.rank(x)]).sum()
    }

    /// `sum_{x in X} phi^+(x) - sum_{x not in Y} phi^-(x)`.
    pub fn objective_partial(&self, f: &PartialFunction) -> f64 {
        let domain = f.domain();
        let mut obj = 0.0;
        for x in f.ones() {
            obj += self.values[domain.rank(x)].max(0.0);
        }
        for r in 0..self.values.len() {
            let w = domain.word_from_rank(r);
            if !f.zeros().contains(&w) {
                obj -= (-self.values[r]).max(0.0);
            }
        }
        obj
    }

    /// `sum_{x in X} phi^+(x) + sum_{x in Y} phi^-(x)`, the partial normalization.
    pub fn partial_normalization(&self, f: &PartialFunction) -> f64 {
        let domain = f.domain();
        let pos: f64 = f.ones().iter().map(|x| self.values[domain.rank(x)].max(0.0)).sum();
        let neg: f64 = f.zeros().iter().map(|x| (-self.values[domain.rank(x)]).max(0.0)).sum();
        pos + neg
    }

    pub fn negative_part_sum(&self) -> f64 {
        self.values.iter().map(|v| (-v).max(0.0)).sum()
    }
}

/// Outcome of checking both equivalent dual conditions: the character
/// condition and the assignment condition.
#[derive(Debug, Clone)]
pub struct DualValidationReport {
    pub checked_degree: usize,
    pub l1_norm: f64,
    pub max_character_violation: f64,
    pub worst_character: Vec<usize>,
    pub max_assignment_violation: f64,
    pub worst_assignment: Assignment,
    pub tol: f64,
}

impl DualValidationReport {
    pub fn characters_ok(&self) -> bool {
        self.max_character_violation <= self.tol
    }

    pub fn assignments_ok(&self) -> bool {
        self.max_assignment_violation <= self.tol
    }

    pub fn verdicts_agree(&self) -> bool {
        self.characters_ok() == self.assignments_ok()
    }

    /// Valid total dual: orthogonality plus unit l1 mass.
    pub fn is_valid_total(&self) -> bool {
        self.characters_ok() && self.assignments_ok() && (self.l1_norm - 1.0).abs() <= self.tol
    }

    pub fn summary(&self) -> String {
        format!(
            "degree {}: l1 = {:.12}, max character violation {:.3e} at {:?}, \
             max assignment violation {:.3e} at {}",
            self.checked_degree,
            self.l1_norm,
            self.max_character_violation,
            self.worst_character,
            self.max_assignment_violation,
            self.worst_assignment
        )
    }
}

/// Checks both degree-`d` dual conditions and reports the worst violation of
/// each; the two verdicts agree for every table (the conditions are
/// equivalent up to a basis change).
pub fn validate_dual(phi: &DualPolynomial, d: usize, tol: f64) -> Result<DualValidationReport> {
    let n = phi.n();
    let domain = InputDomain::boolean(n)?;
    if d >= n {
        return Err(Error::DegreeOutOfRange { d, n });
    }
    let strings = domain.strings();

    let mut max_char = 0.0f64;
    let mut worst_char = Vec::new();
    for mask in subsets_upto(n, d) {
        let s: f64 = strings
            .iter()
            .enumerate()
            .map(|(r, x)| phi.value_at_rank(r) * chi_mask(mask, x))
            .sum();
        if s.abs() > max_char {
            max_char = s.abs();
            worst_char = mask_indices(mask);
        }
    }

    let mut max_assign = 0.0f64;
    let mut worst_assign = Assignment::empty();
    for a in enumerate_assignments(&domain, d)? {
        let s: f64 = strings
            .iter()
            .enumerate()
            .filter(|(_, x)| a.agrees(x))
            .map(|(r, _)| phi.value_at_rank(r))
            .sum();
        if s.abs() > max_assign {
            max_assign = s.abs();
            worst_assign = a;
        }
    }

    Ok(DualValidationReport {
        checked_degree: d,
        l1_norm: phi.l1_norm(),
        max_character_violation: max_char,
        worst_character: worst_char,
        max_assignment_violation: max_assign,
        worst_assignment: worst_assign,
        tol,
    })
}

/// Result of an approximate-degree LP solve.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    /// Best approximation distance at the requested degree.
    pub epsilon_star: f64,
    /// Optimal approximating polynomial.
    pub witness: Polynomial,
    /// Dual witness; absent in the partial case when the outer clamp at 0 is
    /// active (the inner dual objective is nonpositive there).
    pub dual: Option<DualPolynomial>,
    /// Value of the dual objective (equals `epsilon_star` by strong duality).
    pub dual_objective: f64,
    /// Verified primal-dual gap.
    pub gap: f64,
    pub clamp_active: bool,
    pub notes: Vec<String>,
}

// Column layout of the total-function dual LP.
fn total_lp(f: &PartialFunction, d: usize) -> (StandardLp, Vec<u64>) {
    let domain = f.domain();
    let n = domain.n();
    let strings = domain.strings();
    let masks = subsets_upto(n, d);
    let rows = masks.len() + 1;
    let cols = 2 * strings.len();

    let mut a = Array2::zeros((rows, cols));
    let mut obj = vec![0.0; cols];
    for (r, x) in strings.iter().enumerate() {
        let fx = if f.ones().contains(x) { 1.0 } else { 0.0 };
        obj[r] = fx;
        obj[strings.len() + r] = -fx;
        for (i, &mask) in masks.iter().enumerate() {
            let c = chi_mask(mask, x);
            a[(i, r)] = c;
            a[(i, strings.len() + r)] = -c;
        }
        a[(rows - 1, r)] = 1.0;
        a[(rows - 1, strings.len() + r)] = 1.0;
    }
    let mut rhs = vec![0.0; rows];
    rhs[rows - 1] = 1.0;
    (StandardLp { objective: obj, constraints: a, rhs }, masks)
}

/// Best uniform approximation of a total Boolean function by a degree-`d`
/// polynomial, with the optimal dual polynomial extracted from the same
/// basis.  In the exact-representation case (distance 0) the returned dual
/// is the normalized parity function.
pub fn solve_lp_total(f: &PartialFunction, d: usize, cfg: &Config) -> Result<ApproxResult> {
    let domain = f.domain();
    domain.require_boolean()?;
    if !f.is_total() {
        return Err(Error::InvalidFunction("total-function LP needs a total function".into()));
    }
    let n = domain.n();
    if d >= n {
        return Err(Error::DegreeOutOfRange { d, n });
    }

    let (lp, masks) = total_lp(f, d);
    let sol = solve_max(&lp)?;
    let num_strings = domain.num_strings();

    // primal witness polynomial from the row duals
    let mut coeffs = BTreeMap::new();
    for (i, &mask) in masks.iter().enumerate() {
        coeffs.insert(mask, sol.row_duals[i]);
    }
    let witness = Polynomial::from_masks(n, coeffs);
    let eps_from_duals = sol.row_duals[masks.len()];

    // dual witness
    let strings = domain.strings();
    let phi_values: Vec<f64> =
        (0..num_strings).map(|r| sol.x[r] - sol.x[num_strings + r]).collect();

    // verify against the primal definition
    let mut eps_primal = 0.0f64;
    for x in &strings {
        let fx = if f.ones().contains(x) { 1.0 } else { 0.0 };
        eps_primal = eps_primal.max((fx - witness.eval(x)).abs());
    }
    let gap = (eps_primal - sol.value).abs();
    if gap > cfg.tol.duality_gap {
        return Err(Error::Solver(format!(
            "duality gap {gap:.3e} exceeds {:.1e}",
            cfg.tol.duality_gap
        )));
    }
    if (eps_from_duals - sol.value).abs() > cfg.tol.duality_gap {
        return Err(Error::Solver("multiplier for the distance row disagrees with the LP value".into()));
    }

    let epsilon_star = sol.value.max(0.0);
    let mut notes = Vec::new();

    let dual = if epsilon_star > cfg.tol.feasibility {
        // complementary slackness: at most one of the paired duals is nonzero
        for r in 0..num_strings {
            let (ax, bx) = (sol.x[r], sol.x[num_strings + r]);
            if ax.min(bx) > cfg.tol.feasibility {
                return Err(Error::Solver(format!(
                    "complementary slackness violated at rank {r}: a = {ax:.3e}, b = {bx:.3e}"
                )));
            }
        }
        let phi = DualPolynomial::new(n, d, phi_values)?;
        let report = validate_dual(&phi, d, cfg.tol.dual_validity)?;
        if !report.is_valid_total() {
            return Err(Error::Solver(format!(
                "extracted dual fails validation: {}",
                report.summary()
            )));
        }
        let obj = phi.objective_total(f);
        if (obj - epsilon_star).abs() > cfg.tol.duality_gap {
            return Err(Error::Solver(format!(
                "dual objective {obj} disagrees with distance {epsilon_star}"
            )));
        }
        phi
    } else {
        notes.push("distance is zero: returning the normalized parity dual".to_string());
        DualPolynomial::parity(n)
    };

    Ok(ApproxResult {
        epsilon_star,
        witness,
        dual_objective: epsilon_star,
        dual: Some(dual),
        gap,
        clamp_active: false,
        notes,
    })
}

// Column layout of the partial-function dual LP: a_x on X, b_x on Y,
// c_x off X, d_x off Y, each block in rank order.
struct PartialColumns {
    a: Vec<usize>, // ranks of X
    b: Vec<usize>, // ranks of Y
    c: Vec<usize>, // ranks outside X
    d: Vec<usize>, // ranks outside Y
}

fn partial_lp(f: &PartialFunction, d: usize) -> (StandardLp, Vec<u64>, PartialColumns) {
    let domain = f.domain();
    let n = domain.n();
    let strings = domain.strings();
    let masks = subsets_upto(n, d);

    let in_x: Vec<bool> = strings.iter().map(|x| f.ones().contains(x)).collect();
    let in_y: Vec<bool> = strings.iter().map(|x| f.zeros().contains(x)).collect();
    let cols = PartialColumns {
        a: (0..strings.len()).filter(|&r| in_x[r]).collect(),
        b: (0..strings.len()).filter(|&r| in_y[r]).collect(),
        c: (0..strings.len()).filter(|&r| !in_x[r]).collect(),
        d: (0..strings.len()).filter(|&r| !in_y[r]).collect(),
    };

    let width = cols.a.len() + cols.b.len() + cols.c.len() + cols.d.len();
    let rows = masks.len() + 1;
    let mut a = Array2::zeros((rows, width));
    let mut obj = vec![0.0; width];

    let mut col = 0;
    for &r in &cols.a {
        for (i, &mask) in masks.iter().enumerate() {
            a[(i, col)] = chi_mask(mask, &strings[r]);
        }
        a[(rows - 1, col)] = 1.0;
        obj[col] = 1.0;
        col += 1;
    }
    for &r in &cols.b {
        for (i, &mask) in masks.iter().enumerate() {
            a[(i, col)] = -chi_mask(mask, &strings[r]);
        }
        a[(rows - 1, col)] = 1.0;
        col += 1;
    }
    for &r in &cols.c {
        for (i, &mask) in masks.iter().enumerate() {
            a[(i, col)] = chi_mask(mask, &strings[r]);
        }
        col += 1;
    }
    for &r in &cols.d {
        for (i, &mask) in masks.iter().enumerate() {
            a[(i, col)] = -chi_mask(mask, &strings[r]);
        }
        obj[col] = -1.0;
        col += 1;
    }
    debug_assert_eq!(col, width);

    let mut rhs = vec![0.0; rows];
    rhs[rows - 1] = 1.0;
    (StandardLp { objective: obj, constraints: a, rhs }, masks, cols)
}

/// Best approximation distance of a partial Boolean function by a degree-`d`
/// polynomial bounded in [0,1] off the promise.  The optimum is the clamped
/// dual objective; when the clamp is active no dual witness exists and none
/// is returned.
pub fn solve_lp_partial(f: &PartialFunction, d: usize, cfg: &Config) -> Result<ApproxResult> {
    let domain = f.domain();
    domain.require_boolean()?;
    let n = domain.n();
    if d >= n {
        return Err(Error::DegreeOutOfRange { d, n });
    }
    if f.ones().is_empty() {
        return Err(Error::TrivialFunction("X is empty".into()));
    }
    if f.zeros().is_empty() {
        return Err(Error::TrivialFunction("Y is empty".into()));
    }

    let (lp, masks, cols) = partial_lp(f, d);
    let sol = solve_max(&lp)?;
    let strings = domain.strings();
    let num_strings = strings.len();

    let mut coeffs = BTreeMap::new();
    for (i, &mask) in masks.iter().enumerate() {
        coeffs.insert(mask, sol.row_duals[i]);
    }
    let witness = Polynomial::from_masks(n, coeffs);

    // recompute the primal distance and feasibility from the witness
    let p: Vec<f64> = strings.iter().map(|x| witness.eval(x)).collect();
    let mut eps_primal = 0.0f64;
    for &r in &cols.a {
        eps_primal = eps_primal.max(1.0 - p[r]);
    }
    for &r in &cols.b {
        eps_primal = eps_primal.max(p[r]);
    }
    let eps_primal = eps_primal.max(0.0);
    for &r in &cols.c {
        if p[r] < -cfg.tol.feasibility {
            return Err(Error::Solver(format!("witness drops below 0 at rank {r}: {}", p[r])));
        }
    }
    for &r in &cols.d {
        if p[r] > 1.0 + cfg.tol.feasibility {
            return Err(Error::Solver(format!("witness exceeds 1 at rank {r}: {}", p[r])));
        }
    }
    let epsilon_star = sol.value.max(0.0);
    let gap = (eps_primal - epsilon_star).abs();
    if gap > cfg.tol.duality_gap {
        return Err(Error::Solver(format!(
            "duality gap {gap:.3e} exceeds {:.1e}",
            cfg.tol.duality_gap
        )));
    }

    let mut notes = Vec::new();
    let clamp_active = sol.value <= cfg.tol.feasibility;

    let dual = if !clamp_active {
        // assemble phi from the four dual-variable groups
        let mut phi_values = vec![0.0; num_strings];
        let mut col = 0;
        for &r in &cols.a {
            phi_values[r] += sol.x[col];
            col += 1;
        }
        for &r in &cols.b {
            phi_values[r] -= sol.x[col];
            col += 1;
        }
        for &r in &cols.c {
            phi_values[r] += sol.x[col];
            col += 1;
        }
        for &r in &cols.d {
            phi_values[r] -= sol.x[col];
            col += 1;
        }

        // complementary slackness: every string meets exactly two of the four
        // dual-variable groups, and at most one of the pair may be active,
        // except at distance exactly 1/2
        if (epsilon_star - 0.5).abs() > cfg.tol.feasibility {
            let mut per_rank: Vec<Vec<f64>> = vec![Vec::new(); num_strings];
            let mut col = 0usize;
            for group in [&cols.a, &cols.b, &cols.c, &cols.d] {
                for &r in group {
                    per_rank[r].push(sol.x[col]);
                    col += 1;
                }
            }
            for (r, vals) in per_rank.iter().enumerate() {
                debug_assert_eq!(vals.len(), 2);
                if vals.iter().fold(f64::INFINITY, |m, &v| m.min(v)) > cfg.tol.feasibility {
                    return Err(Error::Solver(format!(
                        "complementary slackness violated at rank {r}: {vals:?}"
                    )));
                }
            }
        }

        let phi = DualPolynomial::new(n, d, phi_values)?;
        let report = validate_dual(&phi, d, cfg.tol.dual_validity)?;
        if !report.characters_ok() {
            return Err(Error::Solver(format!(
                "extracted dual fails orthogonality: {}",
                report.summary()
            )));
        }
        let norm = phi.partial_normalization(f);
        if (norm - 1.0).abs() > cfg.tol.dual_validity {
            return Err(Error::Solver(format!(
                "extracted dual fails partial normalization: {norm}"
            )));
        }
        let obj = phi.objective_partial(f);
        if (obj - epsilon_star).abs() > cfg.tol.duality_gap {
            return Err(Error::Solver(format!(
                "dual objective {obj} disagrees with distance {epsilon_star}"
            )));
        }
        Some(phi)
    } else {
        notes.push(
            "clamp at 0 active: inner dual objective is nonpositive, no dual witness returned"
                .to_string(),
        );
        None
    };

    Ok(ApproxResult {
        epsilon_star,
        witness,
        dual,
        dual_objective: epsilon_star,
        gap,
        clamp_active,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PartialFunction;

    fn bits(s: &str) -> Word {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&[], &bits("10")).unwrap(), 1.0);
        assert_eq!(chi(&[0], &bits("10")).unwrap(), -1.0);
        assert_eq!(chi(&[0, 1], &bits("11")).unwrap(), 1.0);
        assert!(matches!(chi(&[0], &vec![2, 0]), Err(Error::BooleanOnly { q: 3 })));
    }

    #[test]
    fn parity_dual_is_valid_at_every_lower_degree() {
        let phi = DualPolynomial::parity(3);
        for d in 0..3 {
            let report = validate_dual(&phi, d, 1e-9).unwrap();
            assert!(report.is_valid_total(), "d = {d}: {}", report.summary());
            assert_eq!(report.max_character_violation, 0.0);
            assert_eq!(report.max_assignment_violation, 0.0);
        }
    }

    #[test]
    fn constant_table_fails_at_degree_zero() {
        let n = 3;
        let phi = DualPolynomial::new(n, 0, vec![1.0 / 8.0; 8]).unwrap();
        let report = validate_dual(&phi, 0, 1e-9).unwrap();
        assert!(!report.characters_ok());
        assert!(!report.assignments_ok());
        assert!(report.verdicts_agree());
        assert!(report.worst_character.is_empty()); // fails at S = empty set
        assert!((report.max_character_violation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validity_is_monotone_in_degree() {
        let phi = DualPolynomial::parity(4);
        let r3 = validate_dual(&phi, 3, 1e-9).unwrap();
        let r2 = validate_dual(&phi, 2, 1e-9).unwrap();
        assert!(r3.is_valid_total() && r2.is_valid_total());
        assert!(r2.max_character_violation <= r3.max_character_violation);
    }

    #[test]
    fn or2_degree_one_distance() {
        let f = PartialFunction::or(2).unwrap();
        let res = solve_lp_total(&f, 1, &Config::default()).unwrap();
        assert!((res.epsilon_star - 0.25).abs() < 1e-9, "got {}", res.epsilon_star);
        assert!(res.gap <= 1e-7);
        let phi = res.dual.unwrap();
        assert!(validate_dual(&phi, 1, 1e-9).unwrap().is_valid_total());
        assert!((phi.objective_total(&f) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn parity2_degree_one_distance() {
        let f = PartialFunction::parity(2).unwrap();
        let res = solve_lp_total(&f, 1, &Config::default()).unwrap();
        assert!((res.epsilon_star - 0.5).abs() < 1e-9);
        // constant 1/2 is an optimal witness; ours must achieve the bound
        let domain = f.domain().clone();
        for x in domain.strings() {
            let fx = if f.ones().contains(&x) { 1.0 } else { 0.0 };
            assert!((fx - res.witness.eval(&x)).abs() <= 0.5 + 1e-9);
        }
    }

    #[test]
    fn representable_function_returns_parity_dual() {
        // dictator x_0 has exact degree 1
        let f = PartialFunction::total(InputDomain::boolean(2).unwrap(), |w| w[0] == 1).unwrap();
        let res = solve_lp_total(&f, 1, &Config::default()).unwrap();
        assert!(res.epsilon_star.abs() <= 1e-9);
        let phi = res.dual.unwrap();
        assert_eq!(phi.values(), DualPolynomial::parity(2).values());
    }

    #[test]
    fn degree_precondition_is_enforced() {
        let f = PartialFunction::parity(3).unwrap();
        assert!(matches!(
            solve_lp_total(&f, 3, &Config::default()),
            Err(Error::DegreeOutOfRange { d: 3, n: 3 })
        ));
    }

    #[test]
    fn partial_promise_pair_degrees() {
        let domain = InputDomain::boolean(2).unwrap();
        let f = PartialFunction::new(domain, [bits("11")], [bits("00")]).unwrap();
        // d = 1: p(x) = (x1 + x2)/2 is exact
        let res = solve_lp_partial(&f, 1, &Config::default()).unwrap();
        assert!(res.epsilon_star.abs() <= 1e-9);
        assert!(res.clamp_active);
        assert!(res.dual.is_none());
        assert!(!res.notes.is_empty());
        // d = 0: constant 1/2 is optimal
        let res = solve_lp_partial(&f, 0, &Config::default()).unwrap();
        assert!((res.epsilon_star - 0.5).abs() < 1e-9);
    }

    #[test]
    fn partial_rejects_trivial_functions() {
        let domain = InputDomain::boolean(2).unwrap();
        let f = PartialFunction::new(domain, [bits("11")], []).unwrap();
        assert!(matches!(
            solve_lp_partial(&f, 1, &Config::default()),
            Err(Error::TrivialFunction(_))
        ));
    }

    #[test]
    fn partial_agrees_with_total_on_total_functions() {
        for n in [2usize, 3] {
            for d in 0..n {
                let f = PartialFunction::parity(n).unwrap();
                let t = solve_lp_total(&f, d, &Config::default()).unwrap();
                let p = solve_lp_partial(&f, d, &Config::default()).unwrap();
                // the partial program additionally enforces [0,1] boundedness,
                // so its distance can only be smaller or equal... for parity the
                // optimum is attained inside [0,1] and the two coincide
                assert!(
                    (t.epsilon_star - p.epsilon_star).abs() < 1e-8,
                    "n={n} d={d}: {} vs {}",
                    t.epsilon_star,
                    p.epsilon_star
                );
            }
        }
    }
}
