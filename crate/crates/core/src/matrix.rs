//! Dense matrices over the three entry domains the crate works in: exact
//! integers, exact symbolic scalars, and complex floats.  [`DesignMatrix`]
//! wraps a square matrix with its declared kind and is the unit of JSON
//! exchange.

use std::fmt;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Assignment, Param, SymExpr};

/// Tolerance used for the cheap structural checks performed when a complex
/// matrix is wrapped in a [`DesignMatrix`].  Full algebraic verification has
/// its own tolerances.
pub const STRUCT_TOL: f64 = 1e-9;

/// Minimal scalar interface shared by `i64`, `Complex64` and `SymExpr`.
pub trait EntryScalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl EntryScalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl EntryScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl EntryScalar for SymExpr {
    fn zero() -> Self {
        SymExpr::zero()
    }
    fn one() -> Self {
        SymExpr::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        SymExpr::conj(self)
    }
    fn is_zero(&self) -> bool {
        SymExpr::is_zero(self)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: EntryScalar> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Matrix<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Matrix<T> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Matrix<T> {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix<T> {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .map(|(idx, v)| (idx / self.cols, idx % self.cols, v))
    }

    pub fn map<U: EntryScalar>(&self, f: impl Fn(&T) -> U + Sync) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| f(v)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(rhs.get(i, j)))
    }

    pub fn sub_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        self.add_mat(&rhs.map(|v| v.neg()))
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|v| v.mul(s))
    }

    /// Matrix product; larger operands are computed row-parallel with a fixed
    /// per-entry summation order, so results do not depend on the schedule.
    pub fn mul_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let (rows, cols, inner) = (self.rows, rhs.cols, self.cols);
        let compute_row = |i: usize, out: &mut [T]| {
            for (j, slot) in out.iter_mut().enumerate() {
                let mut acc = T::zero();
                for l in 0..inner {
                    acc = acc.add(&self.get(i, l).mul(rhs.get(l, j)));
                }
                *slot = acc;
            }
        };
        let mut data = vec![T::zero(); rows * cols];
        if rows >= 64 {
            data.par_chunks_mut(cols)
                .enumerate()
                .for_each(|(i, chunk)| compute_row(i, chunk));
        } else {
            for (i, chunk) in data.chunks_mut(cols).enumerate() {
                compute_row(i, chunk);
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }
}

impl Matrix<Complex64> {
    /// Largest entrywise absolute value of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix<Complex64>) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }
}

impl Matrix<SymExpr> {
    pub fn eval(&self, assignment: &Assignment) -> Result<Matrix<Complex64>> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.eval(assignment)?);
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn param_mask(&self) -> u8 {
        self.data.iter().fold(0, |m, e| m | e.param_mask())
    }
}

impl Matrix<i64> {
    pub fn to_symbolic(&self) -> Matrix<SymExpr> {
        self.map(|&v| SymExpr::from_int(v))
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|&v| Complex64::new(v as f64, 0.0))
    }
}

/// Role a matrix claims for itself; verification decides whether the claim
/// holds algebraically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Conference,
    Hadamard,
    Seidel,
    Gram,
    Generic,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatrixKind::Conference => "conference",
            MatrixKind::Hadamard => "hadamard",
            MatrixKind::Seidel => "seidel",
            MatrixKind::Gram => "gram",
            MatrixKind::Generic => "generic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Symbolic,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixEntries {
    Symbolic(Matrix<SymExpr>),
    Complex(Matrix<Complex64>),
}

/// A square matrix of exact symbolic scalars or complex floats together with
/// its declared kind.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    kind: MatrixKind,
    entries: MatrixEntries,
}

impl DesignMatrix {
    pub fn symbolic(kind: MatrixKind, m: Matrix<SymExpr>) -> Result<DesignMatrix> {
        let dm = DesignMatrix { kind, entries: MatrixEntries::Symbolic(m) };
        dm.structural_check()?;
        Ok(dm)
    }

    pub fn complex(kind: MatrixKind, m: Matrix<Complex64>) -> Result<DesignMatrix> {
        for (i, j, v) in m.entries() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteEntry(i + 1, j + 1));
            }
        }
        let dm = DesignMatrix { kind, entries: MatrixEntries::Complex(m) };
        dm.structural_check()?;
        Ok(dm)
    }

    fn structural_check(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::BadStructure { kind: self.kind.to_string(), reason: reason.into() })
        };
        let n = match &self.entries {
            MatrixEntries::Symbolic(m) => {
                if !m.is_square() {
                    return bad("matrix must be square");
                }
                m.rows()
            }
            MatrixEntries::Complex(m) => {
                if !m.is_square() {
                    return bad("matrix must be square");
                }
                m.rows()
            }
        };
        if n < 2 {
            return Err(Error::BadOrder { order: n as u64, reason: "order must be at least 2".into() });
        }
        match (self.kind, &self.entries) {
            (MatrixKind::Conference | MatrixKind::Seidel, MatrixEntries::Symbolic(m)) => {
                if (0..n).any(|i| !m.get(i, i).is_zero()) {
                    return bad("diagonal must be zero");
                }
            }
            (MatrixKind::Conference | MatrixKind::Seidel, MatrixEntries::Complex(m)) => {
                if (0..n).any(|i| m.get(i, i).norm() > STRUCT_TOL) {
                    return bad("diagonal must be zero");
                }
            }
            (MatrixKind::Hadamard, MatrixEntries::Symbolic(m)) => {
                if m.entries().any(|(_, _, v)| v.is_zero()) {
                    return bad("entries must be nonzero");
                }
            }
            (MatrixKind::Hadamard, MatrixEntries::Complex(m)) => {
                if m.entries().any(|(_, _, v)| v.norm() <= STRUCT_TOL) {
                    return bad("entries must be nonzero");
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Reinterpret the same entries under another kind (structural checks
    /// rerun).
    pub fn with_kind(&self, kind: MatrixKind) -> Result<DesignMatrix> {
        let dm = DesignMatrix { kind, entries: self.entries.clone() };
        dm.structural_check()?;
        Ok(dm)
    }

    pub fn order(&self) -> usize {
        match &self.entries {
            MatrixEntries::Symbolic(m) => m.rows(),
            MatrixEntries::Complex(m) => m.rows(),
        }
    }

    pub fn scalar_mode(&self) -> ScalarMode {
        match &self.entries {
            MatrixEntries::Symbolic(_) => ScalarMode::Symbolic,
            MatrixEntries::Complex(_) => ScalarMode::Complex,
        }
    }

    pub fn as_symbolic(&self) -> Option<&Matrix<SymExpr>> {
        match &self.entries {
            MatrixEntries::Symbolic(m) => Some(m),
            MatrixEntries::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&Matrix<Complex64>> {
        match &self.entries {
            MatrixEntries::Complex(m) => Some(m),
            MatrixEntries::Symbolic(_) => None,
        }
    }

    /// Parameter names occurring in the entries, in alphabetical order.
    pub fn params(&self) -> Vec<char> {
        match &self.entries {
            MatrixEntries::Complex(_) => Vec::new(),
            MatrixEntries::Symbolic(m) => {
                let mask = m.param_mask();
                Param::all()
                    .filter(|p| mask & (1 << p.index()) != 0)
                    .map(Param::as_char)
                    .collect()
            }
        }
    }

    /// Evaluate a symbolic matrix at an assignment; complex matrices pass
    /// through unchanged.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<DesignMatrix> {
        match &self.entries {
            MatrixEntries::Complex(_) => Ok(self.clone()),
            MatrixEntries::Symbolic(m) => {
                DesignMatrix::complex(self.kind, m.eval(assignment)?)
            }
        }
    }

    /// The complex matrix behind this one: either the stored entries or, for
    /// parameter-free symbolic matrices, their exact numeric image.
    pub fn complex_entries(&self) -> Result<Matrix<Complex64>> {
        match &self.entries {
            MatrixEntries::Complex(m) => Ok(m.clone()),
            MatrixEntries::Symbolic(m) => m.eval(&Assignment::new()),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON: {order, kind, scalar_mode, params, entries}; symbolic entries are
// grammar strings, complex entries are [re, im] pairs.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    order: usize,
    kind: MatrixKind,
    scalar_mode: ScalarMode,
    params: Vec<String>,
    entries: Vec<Vec<EntryDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Sym(String),
    Cx([f64; 2]),
}

impl Serialize for DesignMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.order();
        let entries: Vec<Vec<EntryDoc>> = match &self.entries {
            MatrixEntries::Symbolic(m) => (0..n)
                .map(|i| m.row(i).iter().map(|e| EntryDoc::Sym(e.to_string())).collect())
                .collect(),
            MatrixEntries::Complex(m) => (0..n)
                .map(|i| m.row(i).iter().map(|z| EntryDoc::Cx([z.re, z.im])).collect())
                .collect(),
        };
        MatrixDoc {
            order: n,
            kind: self.kind,
            scalar_mode: self.scalar_mode(),
            params: self.params().iter().map(|c| c.to_string()).collect(),
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DesignMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let doc = MatrixDoc::deserialize(deserializer)?;
        let n = doc.order;
        if doc.entries.len() != n || doc.entries.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("entries do not form an order x order square"));
        }
        let dm = match doc.scalar_mode {
            ScalarMode::Symbolic => {
                let mut rows = Vec::with_capacity(n);
                for row in &doc.entries {
                    let mut out = Vec::with_capacity(n);
                    for e in row {
                        match e {
                            EntryDoc::Sym(s) => out.push(
                                SymExpr::parse(s).map_err(|err| D::Error::custom(err.to_string()))?,
                            ),
                            EntryDoc::Cx(_) => {
                                return Err(D::Error::custom("numeric entry in a symbolic matrix"))
                            }
                        }
                    }
                    rows.push(out);
                }
                DesignMatrix::symbolic(doc.kind, Matrix::from_rows(rows))
            }
            ScalarMode::Complex => {
                let mut rows = Vec::with_capacity(n);
                for row in &doc.entries {
                    let mut out = Vec::with_capacity(n);
                    for e in row {
                        match e {
                            EntryDoc::Cx([re, im]) => out.push(Complex64::new(*re, *im)),
                            EntryDoc::Sym(_) => {
                                return Err(D::Error::custom("symbolic entry in a complex matrix"))
                            }
                        }
                    }
                    rows.push(out);
                }
                DesignMatrix::complex(doc.kind, Matrix::from_rows(rows))
            }
        };
        dm.map_err(|err| D::Error::custom(err.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> SymExpr {
        SymExpr::parse(s).unwrap()
    }

    #[test]
    fn integer_matrix_product_is_exact() {
        let a = Matrix::from_rows(vec![vec![0i64, 1], vec![1, 0]]);
        let sq = a.mul_mat(&a);
        assert_eq!(sq, Matrix::identity(2));
    }

    #[test]
    fn symbolic_dagger_conjugates() {
        let m = Matrix::from_rows(vec![
            vec![sym("0"), sym("a*conj(b)")],
            vec![sym("i"), sym("0")],
        ]);
        let d = m.dagger();
        assert_eq!(*d.get(0, 1), sym("-i"));
        assert_eq!(*d.get(1, 0), sym("conj(a)*b"));
    }

    #[test]
    fn design_matrix_structural_checks() {
        let bad_conf = Matrix::from_rows(vec![vec![sym("1"), sym("1")], vec![sym("1"), sym("0")]]);
        assert!(DesignMatrix::symbolic(MatrixKind::Conference, bad_conf).is_err());

        let with_zero = Matrix::from_rows(vec![vec![sym("0"), sym("1")], vec![sym("1"), sym("1")]]);
        assert!(DesignMatrix::symbolic(MatrixKind::Hadamard, with_zero).is_err());

        let nan = Matrix::from_rows(vec![
            vec![Complex64::new(f64::NAN, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        assert!(matches!(
            DesignMatrix::complex(MatrixKind::Generic, nan),
            Err(Error::NonFiniteEntry(1, 1))
        ));
    }

    #[test]
    fn json_round_trip_symbolic() {
        let m = Matrix::from_rows(vec![
            vec![sym("0"), sym("b")],
            vec![sym("conj(b)"), sym("0")],
        ]);
        let dm = DesignMatrix::symbolic(MatrixKind::Seidel, m).unwrap();
        let text = serde_json::to_string(&dm).unwrap();
        let back: DesignMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dm);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["order"], 2);
        assert_eq!(value["kind"], "seidel");
        assert_eq!(value["scalar_mode"], "symbolic");
        assert_eq!(value["params"], serde_json::json!(["b"]));
        assert_eq!(value["entries"][0][1], "b");
    }

    #[test]
    fn json_round_trip_complex() {
        let m = Matrix::from_rows(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.25, -0.75)],
            vec![Complex64::new(0.25, 0.75), Complex64::new(0.0, 0.0)],
        ]);
        let dm = DesignMatrix::complex(MatrixKind::Generic, m).unwrap();
        let text = serde_json::to_string(&dm).unwrap();
        let back: DesignMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dm);
    }

    #[test]
    fn evaluate_symbolic_to_complex() {
        let m = Matrix::from_rows(vec![
            vec![sym("0"), sym("b")],
            vec![sym("conj(b)"), sym("0")],
        ]);
        let dm = DesignMatrix::symbolic(MatrixKind::Seidel, m).unwrap();
        let b = Complex64::from_polar(1.0, 0.7);
        let asn = Assignment::new().with(Param::B, b);
        let num = dm.evaluate(&asn).unwrap();
        assert_eq!(num.scalar_mode(), ScalarMode::Complex);
        assert!((num.as_complex().unwrap().get(0, 1) - b).norm() < 1e-15);
    }
}
