//! Algebraic verdicts: conference / Hadamard / Seidel identities, the Paley
//! block equations, eigenvalue structure, necessary conditions for real
//! conference matrices, canonical normalization, and equivalence testing
//! under the two switching operations (unimodular row/conjugate-column
//! scaling and simultaneous row/column permutation).

use num::complex::Complex64;
use serde::Serialize;

use crate::construct::PaleyBlocks;
use crate::error::{Error, Result};
use crate::matrix::{DesignMatrix, Matrix, ScalarMode};
use crate::scalar::{probe_assignment, SymExpr};

/// Default tolerance for identity residuals such as `CC* - (n-1)I`.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Entrywise tolerance for equivalence testing after normalization.
pub const EQUIV_TOL: f64 = 1e-8;
/// Relative gap that separates eigenvalue clusters.
pub const CLUSTER_GAP: f64 = 1e-6;
/// Hermitian deviation accepted before eigen-decomposing.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Default node budget for the equivalence search.
pub const DEFAULT_EQUIV_BUDGET: u64 = 20_000_000;

/// Outcome of one identity check.  `residual` is the largest absolute
/// deviation observed (0 for a passing exact check) and `witness` is a
/// 1-based index pair locating a failure.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub identity: String,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

impl Verdict {
    fn pass(identity: &str) -> Verdict {
        Verdict { ok: true, identity: identity.into(), residual: 0.0, witness: None }
    }

    fn pass_residual(identity: &str, residual: f64) -> Verdict {
        Verdict { ok: true, identity: identity.into(), residual, witness: None }
    }

    fn fail(identity: &str, residual: f64, witness: Option<(usize, usize)>) -> Verdict {
        Verdict {
            ok: false,
            identity: identity.into(),
            residual,
            witness: witness.map(|(i, j)| (i + 1, j + 1)),
        }
    }
}

/// Tracks the worst deviation seen while scanning a numeric matrix.
struct Deviation {
    max: f64,
    witness: Option<(usize, usize)>,
}

impl Deviation {
    fn new() -> Deviation {
        Deviation { max: 0.0, witness: None }
    }

    fn note(&mut self, value: f64, at: (usize, usize)) {
        if value > self.max {
            self.max = value;
            self.witness = Some(at);
        }
    }

    fn into_verdict(self, identity: &str, tol: f64) -> Verdict {
        if self.max <= tol {
            Verdict::pass_residual(identity, self.max)
        } else {
            Verdict::fail(identity, self.max, self.witness)
        }
    }
}

/// Largest residual of a failing exact check, reported at a fixed probe
/// assignment so the verdict still carries a number.
fn symbolic_residual(entries: &[(usize, usize, SymExpr)]) -> (f64, Option<(usize, usize)>) {
    let probe = probe_assignment();
    let mut dev = Deviation::new();
    for (i, j, e) in entries {
        if let Ok(v) = e.eval(&probe) {
            dev.note(v.norm().max(f64::MIN_POSITIVE), (*i, *j));
        } else {
            dev.note(1.0, (*i, *j));
        }
    }
    (dev.max, dev.witness)
}

enum IdentityTarget {
    /// `M M* = c I` with zero diagonal demanded (conference).
    Conference,
    /// `M M* = c I`, entries unimodular everywhere (Hadamard).
    Hadamard,
}

fn gram_identity_check(m: &DesignMatrix, target: IdentityTarget, tol: f64, name: &str) -> Verdict {
    let n = m.order();
    let scale = match target {
        IdentityTarget::Conference => (n - 1) as i64,
        IdentityTarget::Hadamard => n as i64,
    };
    match m.scalar_mode() {
        ScalarMode::Symbolic => {
            let mat = m.as_symbolic().unwrap();
            let mut failures: Vec<(usize, usize, SymExpr)> = Vec::new();
            for (i, j, e) in mat.entries() {
                let diag = i == j;
                match (&target, diag) {
                    (IdentityTarget::Conference, true) => {
                        if !e.is_zero() {
                            failures.push((i, j, e.clone()));
                        }
                    }
                    _ => {
                        if !e.is_unit_monomial() {
                            // a failing entry contributes |entry| - 1 at the probe
                            let dev = &(e * &e.conj()) - &SymExpr::one();
                            failures.push((i, j, dev));
                        }
                    }
                }
            }
            if failures.is_empty() {
                let product = mat.mul_mat(&mat.dagger());
                let expect = Matrix::<SymExpr>::identity(n).scale(&SymExpr::from_int(scale));
                for (i, j, e) in product.sub_mat(&expect).entries() {
                    if !e.is_zero() {
                        failures.push((i, j, e.clone()));
                    }
                }
            }
            if failures.is_empty() {
                Verdict::pass(name)
            } else {
                let (residual, witness) = symbolic_residual(&failures);
                Verdict::fail(name, residual, witness)
            }
        }
        ScalarMode::Complex => {
            let mat = m.as_complex().unwrap();
            let mut dev = Deviation::new();
            for (i, j, v) in mat.entries() {
                let diag = i == j;
                match (&target, diag) {
                    (IdentityTarget::Conference, true) => dev.note(v.norm(), (i, j)),
                    _ => dev.note((v.norm() - 1.0).abs(), (i, j)),
                }
            }
            let product = mat.mul_mat(&mat.dagger());
            let scale = Complex64::new(scale as f64, 0.0);
            for (i, j, v) in product.entries() {
                let expect = if i == j { scale } else { Complex64::new(0.0, 0.0) };
                dev.note((v - expect).norm(), (i, j));
            }
            dev.into_verdict(name, tol)
        }
    }
}

/// Zero diagonal, unimodular off-diagonal entries, and `C C* = (n-1) I`.
pub fn is_conference(m: &DesignMatrix, tol: f64) -> Verdict {
    gram_identity_check(m, IdentityTarget::Conference, tol, "conference")
}

/// Unimodular entries and `H H* = n I`.
pub fn is_hadamard(m: &DesignMatrix, tol: f64) -> Verdict {
    gram_identity_check(m, IdentityTarget::Hadamard, tol, "hadamard")
}

/// The six integer identities of the Paley block decomposition:
/// `A` symmetric, `AJ = J`, `BJ = JB = 0`, `AB = BA`, `B Bt = Bt B`, and
/// `A^2 + B Bt = (2k-1) I - 2J`.
pub fn check_paley_blocks(blocks: &PaleyBlocks) -> Verdict {
    let name = "paley-blocks";
    let k = blocks.half_order();
    let t = k - 1;
    let a = blocks.a();
    let b = blocks.b();
    let j = Matrix::<i64>::from_fn(t, t, |_, _| 1);
    let mut dev = Deviation::new();
    let mut check = |lhs: &Matrix<i64>, rhs: &Matrix<i64>| {
        for (i, jj, v) in lhs.sub_mat(rhs).entries() {
            dev.note((v.abs()) as f64, (i, jj));
        }
    };
    check(&a.transpose(), a);
    check(&a.mul_mat(&j), &j);
    check(&b.mul_mat(&j), &Matrix::zeros(t, t));
    check(&j.mul_mat(b), &Matrix::zeros(t, t));
    check(&a.mul_mat(b), &b.mul_mat(a));
    check(&b.mul_mat(&b.transpose()), &b.transpose().mul_mat(b));
    let lhs = a.mul_mat(a).add_mat(&b.mul_mat(&b.transpose()));
    let rhs = Matrix::<i64>::identity(t)
        .scale(&((2 * k - 1) as i64))
        .sub_mat(&j.scale(&2));
    check(&lhs, &rhs);
    dev.into_verdict(name, 0.0)
}

/// Clustered eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, Serialize)]
pub struct EigStructure {
    /// Cluster means, ascending.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub two_valued: bool,
}

fn hermitian_deviation(m: &Matrix<Complex64>) -> (f64, (usize, usize)) {
    let mut worst = (0.0f64, (0, 0));
    for i in 0..m.rows() {
        for j in i..m.cols() {
            let d = (m.get(i, j) - m.get(j, i).conj()).norm();
            if d > worst.0 {
                worst = (d, (i, j));
            }
        }
    }
    worst
}

fn cluster_eigenvalues(mut values: Vec<f64>) -> EigStructure {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len()
            || (values[i] - values[i - 1]) > CLUSTER_GAP * (1.0 + values[i].abs());
        if split {
            let slice = &values[start..i];
            let mean = slice.iter().sum::<f64>() / slice.len() as f64;
            clusters.push((mean, slice.len()));
            start = i;
        }
    }
    EigStructure {
        two_valued: clusters.len() == 2,
        eigenvalues: clusters.iter().map(|c| c.0).collect(),
        multiplicities: clusters.iter().map(|c| c.1).collect(),
    }
}

/// Eigenvalue clusters of a Hermitian matrix; symbolic matrices must be
/// evaluated by the caller first.
pub fn eig_structure(m: &DesignMatrix) -> Result<EigStructure> {
    let mat = m
        .as_complex()
        .ok_or(Error::SymbolicNotSupported("eig_structure"))?;
    let (dev, at) = hermitian_deviation(mat);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(at.0 + 1, at.1 + 1, dev));
    }
    let values: Vec<f64> = mat.to_nalgebra().symmetric_eigenvalues().iter().cloned().collect();
    Ok(cluster_eigenvalues(values))
}

/// Seidel matrix of an `(n, k)` frame: Hermitian, zero diagonal, unimodular
/// off-diagonal, exactly two eigenvalues, and the positive one has
/// multiplicity `k`.
///
/// Symbolic matrices are checked through the exact quadratic identity
/// `Q^2 - s Q - (n-1) I = 0` whenever the eigenvalue sum `s` determined by
/// `(n, k)` is an integer; otherwise the check falls back to a numeric probe
/// assignment.
pub fn seidel_check(m: &DesignMatrix, k: usize, tol: f64) -> Verdict {
    let name = "seidel";
    let n = m.order();
    if k == 0 || k >= n {
        return Verdict::fail(name, 1.0, None);
    }
    match m.scalar_mode() {
        ScalarMode::Symbolic => {
            let mat = m.as_symbolic().unwrap();
            let mut failures: Vec<(usize, usize, SymExpr)> = Vec::new();
            for (i, j, e) in mat.entries() {
                if i == j {
                    if !e.is_zero() {
                        failures.push((i, j, e.clone()));
                    }
                } else if !e.is_unit_monomial() {
                    failures.push((i, j, &(e * &e.conj()) - &SymExpr::one()));
                }
            }
            // Hermitian
            for i in 0..n {
                for j in i + 1..n {
                    let d = mat.get(i, j) - &mat.get(j, i).conj();
                    if !d.is_zero() {
                        failures.push((i, j, d));
                    }
                }
            }
            if !failures.is_empty() {
                let (residual, witness) = symbolic_residual(&failures);
                return Verdict::fail(name, residual, witness);
            }
            match integral_eigen_sum(n, k) {
                Some(s) => {
                    let q2 = mat.mul_mat(mat);
                    let sq = mat.scale(&SymExpr::from_int(s));
                    let c = Matrix::<SymExpr>::identity(n).scale(&SymExpr::from_int((n - 1) as i64));
                    let dev = q2.sub_mat(&sq).sub_mat(&c);
                    let failures: Vec<_> = dev
                        .entries()
                        .filter(|(_, _, e)| !e.is_zero())
                        .map(|(i, j, e)| (i, j, e.clone()))
                        .collect();
                    if failures.is_empty() {
                        Verdict::pass(name)
                    } else {
                        let (residual, witness) = symbolic_residual(&failures);
                        Verdict::fail(name, residual, witness)
                    }
                }
                None => match m.evaluate(&probe_assignment()) {
                    Ok(num) => seidel_check(&num, k, tol),
                    Err(_) => Verdict::fail(name, 1.0, None),
                },
            }
        }
        ScalarMode::Complex => {
            let mat = m.as_complex().unwrap();
            let mut dev = Deviation::new();
            for (i, j, v) in mat.entries() {
                if i == j {
                    dev.note(v.norm(), (i, j));
                } else {
                    dev.note((v.norm() - 1.0).abs(), (i, j));
                }
            }
            let (hdev, hat) = hermitian_deviation(mat);
            dev.note(hdev, hat);
            if dev.max > tol {
                return dev.into_verdict(name, tol);
            }
            let eig = match eig_structure(m) {
                Ok(e) => e,
                Err(_) => return Verdict::fail(name, dev.max.max(1.0), None),
            };
            let positive_mult = eig
                .eigenvalues
                .iter()
                .zip(&eig.multiplicities)
                .filter(|(v, _)| **v > 0.0)
                .map(|(_, m)| *m)
                .sum::<usize>();
            if eig.two_valued && positive_mult == k {
                dev.into_verdict(name, tol)
            } else {
                Verdict::fail(name, dev.max.max(1.0), None)
            }
        }
    }
}

/// Eigenvalue sum `s = l1 + l2` for a two-eigenvalue Seidel matrix with
/// positive multiplicity `k`, when it is an exact integer.
fn integral_eigen_sum(n: usize, k: usize) -> Option<i64> {
    // l1^2 = (n-1)(n-k)/k, s = l1 (n-2k)/(n-k); integrality via s^2.
    let (n, k) = (n as i128, k as i128);
    if n == 2 * k {
        return Some(0);
    }
    let num = (n - 1) * (n - 2 * k) * (n - 2 * k);
    let den = k * (n - k);
    if num % den != 0 {
        return None;
    }
    let s2 = (num / den) as u64;
    let s_abs = (s2 as f64).sqrt().round() as i64;
    if (s_abs as u64) * (s_abs as u64) != s2 {
        return None;
    }
    Some(if n > 2 * k { s_abs } else { -s_abs })
}

/// Necessary conditions on the order of a real conference matrix:
/// `n = 2 (mod 4)` with `n - 1` a sum of two squares in the symmetric case,
/// `n = 2` or `n = 0 (mod 4)` in the skew case.
pub fn real_necessary_conditions(n: u64, symmetric: bool) -> Verdict {
    let name = if symmetric {
        "real-symmetric-order"
    } else {
        "real-skew-order"
    };
    let ok = if symmetric {
        n % 4 == 2 && crate::arith::is_sum_of_two_squares(n - 1)
    } else {
        n == 2 || n % 4 == 0
    };
    if ok {
        Verdict::pass(name)
    } else {
        Verdict::fail(name, 1.0, None)
    }
}

fn checked_seidel_entries(m: &DesignMatrix) -> Result<&Matrix<Complex64>> {
    let mat = m.as_complex().ok_or(Error::SymbolicNotSupported("normalize"))?;
    let (dev, at) = hermitian_deviation(mat);
    if dev > EQUIV_TOL {
        return Err(Error::NotHermitian(at.0 + 1, at.1 + 1, dev));
    }
    Ok(mat)
}

/// Gauge a Hermitian Seidel matrix so a chosen row (and column) becomes all
/// ones off the diagonal: conjugate by `diag(d)` with `d_j` the row entry.
fn normalize_with_first(mat: &Matrix<Complex64>, row: usize) -> Result<Matrix<Complex64>> {
    let n = mat.rows();
    let mut d = vec![Complex64::new(1.0, 0.0); n];
    for j in 0..n {
        if j == row {
            continue;
        }
        let v = *mat.get(row, j);
        if v.norm() < 0.5 {
            return Err(Error::ZeroEntryInFirstRow(j + 1));
        }
        d[j] = v / v.norm();
    }
    Ok(Matrix::from_fn(n, n, |i, j| d[i] * mat.get(i, j) * d[j].conj()))
}

/// Canonical gauge: scale rows and conjugate columns so the first row is all
/// ones off the diagonal.  Idempotent, eigenvalue-preserving.
pub fn normalize(m: &DesignMatrix) -> Result<DesignMatrix> {
    let mat = checked_seidel_entries(m)?;
    let normalized = normalize_with_first(mat, 0)?;
    DesignMatrix::complex(m.kind(), normalized)
}

/// Completeness certificate of an equivalence search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Every branch was visited explicitly.
    Exhaustive,
    /// Branches were removed only by sound invariants; still a complete search.
    PrunedComplete,
    /// The node budget ran out; a negative answer is not a certificate.
    BudgetExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivReport {
    pub equivalent: bool,
    /// One-line notation, 1-based: entry `i` is the row of the first matrix
    /// that lands in position `i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    pub certificate: Certificate,
    pub nodes: u64,
}

struct EquivSearch<'a> {
    a: &'a Matrix<Complex64>,
    b: &'a Matrix<Complex64>,
    a_fp: Vec<Vec<(i64, i64)>>,
    b_fp: &'a [Vec<(i64, i64)>],
    sigma: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    pruned: bool,
}

fn row_fingerprint(row: &[Complex64]) -> Vec<(i64, i64)> {
    let mut fp: Vec<(i64, i64)> = row
        .iter()
        .map(|z| ((z.re / CLUSTER_GAP).round() as i64, (z.im / CLUSTER_GAP).round() as i64))
        .collect();
    fp.sort_unstable();
    fp
}

impl<'a> EquivSearch<'a> {
    fn dfs(&mut self, pos: usize) -> Option<bool> {
        let n = self.a.rows();
        if pos == n {
            return Some(true);
        }
        for u in 0..n {
            if self.used[u] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if self.a_fp[u] != self.b_fp[pos] {
                self.pruned = true;
                continue;
            }
            let consistent = (0..pos).all(|j| {
                (self.a.get(u, self.sigma[j]) - self.b.get(pos, j)).norm() <= EQUIV_TOL
            });
            if !consistent {
                self.pruned = true;
                continue;
            }
            self.sigma.push(u);
            self.used[u] = true;
            match self.dfs(pos + 1) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            self.used[u] = false;
            self.sigma.pop();
        }
        Some(false)
    }
}

/// Decide whether two Hermitian Seidel matrices are equivalent under the
/// combined switching operations, by backtracking over row orders in the
/// canonical gauge.  The returned witness is the lexicographically smallest
/// one.
pub fn permutation_equivalent(
    q1: &DesignMatrix,
    q2: &DesignMatrix,
    budget: u64,
) -> Result<EquivReport> {
    if q1.order() != q2.order() {
        return Err(Error::OrderMismatch(q1.order(), q2.order()));
    }
    let n = q1.order();
    let m1 = checked_seidel_entries(q1)?;
    let m2 = checked_seidel_entries(q2)?;
    let target = normalize_with_first(m2, 0)?;
    let b_fp: Vec<Vec<(i64, i64)>> = (0..n).map(|i| row_fingerprint(target.row(i))).collect();

    let mut nodes_total = 0u64;
    let mut pruned_any = false;
    for r in 0..n {
        if nodes_total >= budget {
            return Ok(EquivReport {
                equivalent: false,
                permutation: None,
                certificate: Certificate::BudgetExhausted,
                nodes: nodes_total,
            });
        }
        let gauged = normalize_with_first(m1, r)?;
        let a_fp: Vec<Vec<(i64, i64)>> = (0..n).map(|i| row_fingerprint(gauged.row(i))).collect();
        if a_fp[r] != b_fp[0] {
            pruned_any = true;
            nodes_total += 1;
            continue;
        }
        let mut search = EquivSearch {
            a: &gauged,
            b: &target,
            a_fp,
            b_fp: &b_fp,
            sigma: vec![r],
            used: {
                let mut v = vec![false; n];
                v[r] = true;
                v
            },
            nodes: nodes_total,
            budget,
            pruned: pruned_any,
        };
        match search.dfs(1) {
            Some(true) => {
                return Ok(EquivReport {
                    equivalent: true,
                    permutation: Some(search.sigma.iter().map(|&x| x + 1).collect()),
                    certificate: if search.pruned {
                        Certificate::PrunedComplete
                    } else {
                        Certificate::Exhaustive
                    },
                    nodes: search.nodes,
                });
            }
            Some(false) => {
                nodes_total = search.nodes;
                pruned_any = search.pruned;
            }
            None => {
                return Ok(EquivReport {
                    equivalent: false,
                    permutation: None,
                    certificate: Certificate::BudgetExhausted,
                    nodes: search.nodes,
                });
            }
        }
    }
    Ok(EquivReport {
        equivalent: false,
        permutation: None,
        certificate: if pruned_any {
            Certificate::PrunedComplete
        } else {
            Certificate::Exhaustive
        },
        nodes: nodes_total,
    })
}
