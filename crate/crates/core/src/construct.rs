//! Constructors for every matrix family the crate knows how to build.
//!
//! The Paley matrix of order q+1 comes from the quadratic character on
//! GF(q) evaluated on an alternating form, assembled in the block shape
//!
//! ```text
//! [ 0    1     j^T    j^T ]
//! [ 1    0    -j^T    j^T ]
//! [ j   -j      A      B  ]
//! [ j    j     B^T    -A  ]
//! ```
//!
//! whose blocks satisfy integer identities that make the two-parameter
//! deformation
//!
//! ```text
//! [ 0     1      j^T        j^T   ]
//! [ 1     0    -a j^T      a j^T  ]
//! [ j   -a j     a A       ab B   ]
//! [ j    a j   a conj(b) B^T  -a A]
//! ```
//!
//! a complex conference matrix for all unimodular a, b.  On top of that sit
//! Hadamard doubling, the order-squaring block construction from row outer
//! products, Fourier matrices, the explicit parametric conference matrices of
//! orders 6, 10 and 14, quaternary specializations, and the Seidel matrix of
//! a real skew conference matrix.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{DesignMatrix, EntryScalar, Matrix, MatrixKind, ScalarMode};
use crate::scalar::{Assignment, GaussianInt, Param, SymExpr, UNIMODULAR_TOL};
use crate::verify::{self, IDENTITY_TOL};

/// A scalar argument for a parametric construction: keep it symbolic, pin it
/// to an exact Gaussian unit, or give an arbitrary unimodular float.
#[derive(Debug, Clone, Copy)]
pub enum UnitScalar {
    Sym(Param),
    Exact(GaussianInt),
    Value(Complex64),
}

impl UnitScalar {
    fn is_value(&self) -> bool {
        matches!(self, UnitScalar::Value(_))
    }

    fn check(&self, role: Param) -> Result<()> {
        match self {
            UnitScalar::Sym(_) => Ok(()),
            UnitScalar::Exact(g) => {
                if g.is_unit() {
                    Ok(())
                } else {
                    Err(Error::NonUnimodularValue {
                        param: role.as_char(),
                        modulus: (g.norm() as f64).sqrt(),
                    })
                }
            }
            UnitScalar::Value(v) => {
                if (v.norm() - 1.0).abs() <= UNIMODULAR_TOL {
                    Ok(())
                } else {
                    Err(Error::NonUnimodularValue { param: role.as_char(), modulus: v.norm() })
                }
            }
        }
    }
}

/// Bind the provided scalars to the template parameters of a symbolic matrix:
/// exact units are substituted, symbolic arguments must keep the template
/// letter, and float values force an evaluation to complex mode.
fn resolve_parametric(
    template: Matrix<SymExpr>,
    args: &[(Param, UnitScalar)],
    kind: MatrixKind,
) -> Result<DesignMatrix> {
    for (role, arg) in args {
        arg.check(*role)?;
        if let UnitScalar::Sym(p) = arg {
            if p != role {
                return Err(Error::BadScalarArg(
                    p.as_char().to_string(),
                    format!("this family names the parameter '{}'", role.as_char()),
                ));
            }
        }
    }
    let any_value = args.iter().any(|(_, a)| a.is_value());
    if any_value && args.iter().any(|(_, a)| matches!(a, UnitScalar::Sym(_))) {
        return Err(Error::MixedScalarModes);
    }

    let mut m = template;
    for (role, arg) in args {
        if let UnitScalar::Exact(g) = arg {
            let mut rows = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                let mut row = Vec::with_capacity(m.cols());
                for j in 0..m.cols() {
                    row.push(m.get(i, j).substitute(*role, *g)?);
                }
                rows.push(row);
            }
            m = Matrix::from_rows(rows);
        }
    }
    if any_value {
        let mut asn = Assignment::new();
        for (role, arg) in args {
            if let UnitScalar::Value(v) = arg {
                asn.set(*role, *v);
            }
        }
        DesignMatrix::complex(kind, m.eval(&asn)?)
    } else {
        DesignMatrix::symbolic(kind, m)
    }
}

// ---------------------------------------------------------------------------
// Paley matrices and their blocks.
// ---------------------------------------------------------------------------

fn paley_field(q: u64) -> Result<FieldSpec> {
    if q % 4 != 1 {
        return Err(Error::BadOrder {
            order: q,
            reason: "the Paley block form needs a prime power q = 1 (mod 4)".into(),
        });
    }
    FieldSpec::for_order(q)
}

/// The real symmetric conference matrix of order q+1 as an integer matrix.
pub fn paley_matrix_int(q: u64) -> Result<Matrix<i64>> {
    let field = paley_field(q)?;
    let alphas = field.paley_element_order();
    let n = (q + 1) as usize;
    let m = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0
        } else if i == 0 || j == 0 {
            // chi(det) of the basis pair in either order; chi(-1) = 1 here
            1
        } else {
            field.legendre_chi(&field.sub(&alphas[i - 1], &alphas[j - 1]))
        }
    });
    Ok(m)
}

/// The Paley conference matrix of order q+1, exact symbolic entries.
pub fn paley_matrix(q: u64) -> Result<DesignMatrix> {
    DesignMatrix::symbolic(MatrixKind::Conference, paley_matrix_int(q)?.to_symbolic())
}

/// The interior blocks A and B of the Paley block form, of order k-1 each,
/// where 2k = q+1.
#[derive(Debug, Clone)]
pub struct PaleyBlocks {
    k: usize,
    a: Matrix<i64>,
    b: Matrix<i64>,
}

impl PaleyBlocks {
    pub fn half_order(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &Matrix<i64> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<i64> {
        &self.b
    }

    /// Flip one entry of A; lets tests confirm the block equations are
    /// sensitive to every entry.
    pub fn perturb_for_test(&mut self, i: usize, j: usize) {
        let v = *self.a.get(i, j);
        self.a.set(i, j, if v == 1 { -1 } else { 1 });
    }

    /// Recognize a matrix already in the Paley block shape and slice out its
    /// blocks.  Entries must be integers and the border rows, columns, and
    /// the mirrored interior placement must all match.
    pub fn extract(m: &DesignMatrix) -> Option<PaleyBlocks> {
        let n = m.order();
        if n < 6 || n % 4 != 2 {
            return None;
        }
        let ints = to_integer_matrix(m)?;
        let k = n / 2;
        let t = k - 1;
        for j in 1..n {
            if *ints.get(0, j) != 1 || *ints.get(j, 0) != 1 {
                return None;
            }
        }
        if *ints.get(0, 0) != 0 || *ints.get(1, 1) != 0 {
            return None;
        }
        for idx in 0..t {
            if *ints.get(1, 2 + idx) != -1 || *ints.get(2 + idx, 1) != -1 {
                return None;
            }
            if *ints.get(1, 2 + t + idx) != 1 || *ints.get(2 + t + idx, 1) != 1 {
                return None;
            }
        }
        let a = Matrix::from_fn(t, t, |i, j| *ints.get(2 + i, 2 + j));
        let b = Matrix::from_fn(t, t, |i, j| *ints.get(2 + i, 2 + t + j));
        for i in 0..t {
            for j in 0..t {
                if *ints.get(2 + t + i, 2 + j) != *b.get(j, i) {
                    return None;
                }
                if *ints.get(2 + t + i, 2 + t + j) != -*a.get(i, j) {
                    return None;
                }
            }
        }
        Some(PaleyBlocks { k, a, b })
    }
}

fn to_integer_matrix(m: &DesignMatrix) -> Option<Matrix<i64>> {
    let n = m.order();
    match m.scalar_mode() {
        ScalarMode::Symbolic => {
            let s = m.as_symbolic().unwrap();
            let mut out = Matrix::zeros(n, n);
            for (i, j, e) in s.entries() {
                let c = e.as_constant()?;
                if c.im != 0 {
                    return None;
                }
                out.set(i, j, c.re);
            }
            Some(out)
        }
        ScalarMode::Complex => {
            let c = m.as_complex().unwrap();
            let mut out = Matrix::zeros(n, n);
            for (i, j, v) in c.entries() {
                let r = v.re.round();
                if (v.re - r).abs() > 1e-9 || v.im.abs() > 1e-9 {
                    return None;
                }
                out.set(i, j, r as i64);
            }
            Some(out)
        }
    }
}

/// The A, B blocks of `paley_matrix(q)`.
pub fn paley_blocks(q: u64) -> Result<PaleyBlocks> {
    let m = paley_matrix(q)?;
    PaleyBlocks::extract(&m).ok_or_else(|| Error::BadStructure {
        kind: "conference".into(),
        reason: "Paley assembly did not land in the block form".into(),
    })
}

// ---------------------------------------------------------------------------
// The two-parameter deformation C(a, b) and its derived families.
// ---------------------------------------------------------------------------

/// C(a, b): the Paley blocks dressed with two unimodular parameters.
/// Symbolic when both arguments stay symbolic or exact, complex when a float
/// value appears.
pub fn cab_matrix(q: u64, a: UnitScalar, b: UnitScalar) -> Result<DesignMatrix> {
    let blocks = paley_blocks(q)?;
    let template = assemble_cab(&blocks);
    resolve_parametric(template, &[(Param::A, a), (Param::B, b)], MatrixKind::Conference)
}

fn assemble_cab(blocks: &PaleyBlocks) -> Matrix<SymExpr> {
    let k = blocks.k;
    let t = k - 1;
    let n = 2 * k;
    let sa = SymExpr::param(Param::A);
    let sb = SymExpr::param(Param::B);
    let one = SymExpr::one();
    let lift = |v: i64| SymExpr::from_int(v);
    Matrix::from_fn(n, n, |i, j| {
        match (region(i, t), region(j, t)) {
            (Region::X, Region::X) => SymExpr::zero(),
            (Region::X, _) | (_, Region::X) => one.clone(),
            (Region::Y, Region::Y) => SymExpr::zero(),
            (Region::Y, Region::Odd) => -&sa,
            (Region::Y, Region::Even) => sa.clone(),
            (Region::Odd, Region::Y) => -&sa,
            (Region::Even, Region::Y) => sa.clone(),
            (Region::Odd, Region::Odd) => &sa * &lift(*blocks.a.get(i - 2, j - 2)),
            (Region::Odd, Region::Even) => {
                &(&sa * &sb) * &lift(*blocks.b.get(i - 2, j - 2 - t))
            }
            (Region::Even, Region::Odd) => {
                &(&sa * &sb.conj()) * &lift(*blocks.b.get(j - 2, i - 2 - t))
            }
            (Region::Even, Region::Even) => {
                -&(&sa * &lift(*blocks.a.get(i - 2 - t, j - 2 - t)))
            }
        }
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Region {
    X,
    Y,
    Odd,
    Even,
}

fn region(idx: usize, t: usize) -> Region {
    match idx {
        0 => Region::X,
        1 => Region::Y,
        i if i < 2 + t => Region::Odd,
        _ => Region::Even,
    }
}

// ---------------------------------------------------------------------------
// Hadamard constructions.
// ---------------------------------------------------------------------------

/// Doubling: `[[C+I, C*-I], [C-I, -C*-I]]` of order 2n from a conference
/// matrix of order n.
pub fn hadamard_double(c: &DesignMatrix) -> Result<DesignMatrix> {
    let v = verify::is_conference(c, IDENTITY_TOL);
    if !v.ok {
        let (i, j) = v.witness.unwrap_or((1, 1));
        return Err(Error::NotConference(i, j));
    }
    let n = c.order();
    match c.scalar_mode() {
        ScalarMode::Symbolic => {
            let m = c.as_symbolic().unwrap();
            let d = double_blocks(m, &SymExpr::one());
            DesignMatrix::symbolic(MatrixKind::Hadamard, d)
        }
        ScalarMode::Complex => {
            let m = c.as_complex().unwrap();
            let d = double_blocks(m, &Complex64::new(1.0, 0.0));
            DesignMatrix::complex(MatrixKind::Hadamard, d)
        }
    }
    .map_err(|e| match e {
        Error::BadStructure { .. } => Error::NotConference(n, n),
        other => other,
    })
}

fn double_blocks<T: EntryScalar>(c: &Matrix<T>, one: &T) -> Matrix<T> {
    let n = c.rows();
    let dag = c.dagger();
    Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let (si, sj) = (i % n, j % n);
        let diag = if si == sj { one.clone() } else { T::zero() };
        match (bi, bj) {
            (0, 0) => c.get(si, sj).add(&diag),
            (0, 1) => dag.get(si, sj).add(&diag.neg()),
            (1, 0) => c.get(si, sj).add(&diag.neg()),
            _ => dag.get(si, sj).neg().add(&diag.neg()),
        }
    })
}

/// `I + iC` for a Hermitian conference matrix `C`: a complex Hadamard matrix
/// of the same order, the seed the iterated block construction grows from.
pub fn hadamard_from_conference(c: &DesignMatrix) -> Result<DesignMatrix> {
    let v = verify::is_conference(c, IDENTITY_TOL);
    if !v.ok {
        let (i, j) = v.witness.unwrap_or((1, 1));
        return Err(Error::NotConference(i, j));
    }
    let n = c.order();
    match c.scalar_mode() {
        ScalarMode::Symbolic => {
            let m = c.as_symbolic().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let d = m.get(i, j) - &m.get(j, i).conj();
                    if !d.is_zero() {
                        return Err(Error::NotHermitian(i + 1, j + 1, 1.0));
                    }
                }
            }
            let i_unit = SymExpr::i();
            let out = Matrix::from_fn(n, n, |i, j| {
                let v = m.get(i, j).mul(&i_unit);
                if i == j {
                    v.add(&SymExpr::one())
                } else {
                    v
                }
            });
            DesignMatrix::symbolic(MatrixKind::Hadamard, out)
        }
        ScalarMode::Complex => {
            let m = c.as_complex().unwrap();
            let mut worst = (0.0f64, (0usize, 0usize));
            for i in 0..n {
                for j in i..n {
                    let d = (m.get(i, j) - m.get(j, i).conj()).norm();
                    if d > worst.0 {
                        worst = (d, (i, j));
                    }
                }
            }
            if worst.0 > IDENTITY_TOL {
                return Err(Error::NotHermitian(worst.1 .0 + 1, worst.1 .1 + 1, worst.0));
            }
            let i_unit = Complex64::new(0.0, 1.0);
            let out = Matrix::from_fn(n, n, |i, j| {
                let v = m.get(i, j) * i_unit;
                if i == j {
                    v + Complex64::new(1.0, 0.0)
                } else {
                    v
                }
            });
            DesignMatrix::complex(MatrixKind::Hadamard, out)
        }
    }
}

/// Largest order the block-squaring construction will emit.
pub const MAX_BLOCK_ORDER: usize = 2048;

/// The order-n^2 Hermitian complex Hadamard matrix with unit diagonal built
/// from the row outer products of a Hadamard matrix of order n: block (i, j)
/// is `h_j* h_i`.
pub fn block_square(h: &DesignMatrix) -> Result<DesignMatrix> {
    let v = verify::is_hadamard(h, IDENTITY_TOL);
    if !v.ok {
        let (i, j) = v.witness.unwrap_or((1, 1));
        return Err(Error::NotHadamard(i, j));
    }
    let n = h.order();
    if n * n > MAX_BLOCK_ORDER {
        return Err(Error::TooLarge((n * n) as u64, MAX_BLOCK_ORDER as u64));
    }
    match h.scalar_mode() {
        ScalarMode::Symbolic => {
            let m = h.as_symbolic().unwrap();
            let out = Matrix::from_fn(n * n, n * n, |r, c| {
                let (i, a) = (r / n, r % n);
                let (j, b) = (c / n, c % n);
                m.get(j, a).conj().mul(m.get(i, b))
            });
            DesignMatrix::symbolic(MatrixKind::Hadamard, out)
        }
        ScalarMode::Complex => {
            let m = h.as_complex().unwrap();
            let out = Matrix::from_fn(n * n, n * n, |r, c| {
                let (i, a) = (r / n, r % n);
                let (j, b) = (c / n, c % n);
                m.get(j, a).conj() * m.get(i, b)
            });
            DesignMatrix::complex(MatrixKind::Hadamard, out)
        }
    }
}

/// The Fourier matrix of order n: entry (k, l) is `exp(2 pi i k l / n)`.
pub fn fourier(n: usize) -> Result<DesignMatrix> {
    if n < 2 {
        return Err(Error::BadOrder { order: n as u64, reason: "Fourier order must be >= 2".into() });
    }
    let m = Matrix::from_fn(n, n, |i, j| {
        let angle = 2.0 * std::f64::consts::PI * ((i * j) % n) as f64 / n as f64;
        Complex64::from_polar(1.0, angle)
    });
    DesignMatrix::complex(MatrixKind::Hadamard, m)
}

// ---------------------------------------------------------------------------
// The explicit parametric conference matrices of orders 6, 10 and 14.
// Stored entry-for-entry as grammar strings.
// ---------------------------------------------------------------------------

const C6_TEMPLATE: [[&str; 6]; 6] = [
    ["0", "1", "1", "1", "1", "1"],
    ["1", "0", "-1", "b", "1", "-b"],
    ["1", "-1", "0", "-b", "1", "b"],
    ["1", "conj(b)", "-conj(b)", "0", "-1", "1"],
    ["1", "1", "1", "-1", "0", "-1"],
    ["1", "-conj(b)", "conj(b)", "1", "-1", "0"],
];

const C10_TEMPLATE: [[&str; 10]; 10] = [
    ["0", "1", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["1", "0", "a*conj(b)", "a", "conj(c)", "1", "-conj(c)", "-a", "-a*conj(b)", "-1"],
    ["1", "conj(a)*b", "0", "-b", "-conj(c)", "1", "conj(c)", "b", "-1", "-conj(a)*b"],
    ["1", "conj(a)", "-conj(b)", "0", "1", "-1", "1", "-1", "conj(b)", "-conj(a)"],
    ["1", "c", "-c", "1", "0", "-1", "-1", "1", "-c", "c"],
    ["1", "1", "1", "-1", "-1", "0", "-1", "-1", "1", "1"],
    ["1", "-c", "c", "1", "-1", "-1", "0", "1", "c", "-c"],
    ["1", "-conj(a)", "conj(b)", "-1", "1", "-1", "1", "0", "-conj(b)", "conj(a)"],
    ["1", "-conj(a)*b", "-1", "b", "-conj(c)", "1", "conj(c)", "-b", "0", "conj(a)*b"],
    ["1", "-1", "-a*conj(b)", "-a", "conj(c)", "1", "-conj(c)", "a", "a*conj(b)", "0"],
];

const C14_TEMPLATE: [[&str; 14]; 14] = [
    ["0", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["1", "0", "-1", "a*conj(b)", "-a*conj(b)", "-conj(c)", "a", "conj(e)", "conj(c)", "1", "-a", "-conj(e)", "a", "-a"],
    ["1", "-1", "0", "-a*conj(b)", "a*conj(b)", "-conj(c)", "-a", "conj(e)", "conj(c)", "1", "a", "-conj(e)", "-a", "a"],
    ["1", "conj(a)*b", "-conj(a)*b", "0", "-1", "b", "-b", "-conj(e)", "b", "1", "conj(f)", "conj(e)", "-b", "-conj(f)"],
    ["1", "-conj(a)*b", "conj(a)*b", "-1", "0", "-b", "b", "-conj(e)", "-b", "1", "conj(f)", "conj(e)", "b", "-conj(f)"],
    ["1", "-c", "-c", "conj(b)", "-conj(b)", "0", "-c*conj(d)", "c", "-1", "-1", "1", "c", "c*conj(d)", "1"],
    ["1", "conj(a)", "-conj(a)", "-conj(b)", "conj(b)", "-d*conj(c)", "0", "-d*conj(e)", "d*conj(c)", "-1", "-d*conj(f)", "d*conj(e)", "1", "d*conj(f)"],
    ["1", "e", "e", "-e", "-e", "conj(c)", "-e*conj(d)", "0", "-conj(c)", "1", "-conj(f)", "-1", "e*conj(d)", "conj(f)"],
    ["1", "c", "c", "conj(b)", "-conj(b)", "-1", "c*conj(d)", "-c", "0", "-1", "1", "-c", "-c*conj(d)", "1"],
    ["1", "1", "1", "1", "1", "-1", "-1", "1", "-1", "0", "-1", "1", "-1", "-1"],
    ["1", "-conj(a)", "conj(a)", "f", "f", "1", "-f*conj(d)", "-f", "1", "-1", "0", "-f", "f*conj(d)", "-1"],
    ["1", "-e", "-e", "e", "e", "conj(c)", "e*conj(d)", "-1", "-conj(c)", "1", "-conj(f)", "0", "-e*conj(d)", "conj(f)"],
    ["1", "conj(a)", "-conj(a)", "-conj(b)", "conj(b)", "d*conj(c)", "1", "d*conj(e)", "-d*conj(c)", "-1", "d*conj(f)", "-d*conj(e)", "0", "-d*conj(f)"],
    ["1", "-conj(a)", "conj(a)", "-f", "-f", "1", "f*conj(d)", "f", "1", "-1", "-1", "f", "-f*conj(d)", "0"],
];

fn template_matrix(rows: &[&[&str]]) -> Matrix<SymExpr> {
    let parsed: Vec<Vec<SymExpr>> = rows
        .iter()
        .map(|row| row.iter().map(|s| SymExpr::parse(s).expect("template entry")).collect())
        .collect();
    Matrix::from_rows(parsed)
}

fn c6_template() -> Matrix<SymExpr> {
    let rows: Vec<&[&str]> = C6_TEMPLATE.iter().map(|r| r.as_slice()).collect();
    template_matrix(&rows)
}

fn c10_template() -> Matrix<SymExpr> {
    let rows: Vec<&[&str]> = C10_TEMPLATE.iter().map(|r| r.as_slice()).collect();
    template_matrix(&rows)
}

fn c14_template() -> Matrix<SymExpr> {
    let rows: Vec<&[&str]> = C14_TEMPLATE.iter().map(|r| r.as_slice()).collect();
    template_matrix(&rows)
}

/// The one-parameter Hermitian conference family of order 6.
pub fn c6(b: UnitScalar) -> Result<DesignMatrix> {
    resolve_parametric(c6_template(), &[(Param::B, b)], MatrixKind::Conference)
}

/// The three-parameter Hermitian conference family of order 10.
pub fn c10(a: UnitScalar, b: UnitScalar, c: UnitScalar) -> Result<DesignMatrix> {
    resolve_parametric(
        c10_template(),
        &[(Param::A, a), (Param::B, b), (Param::C, c)],
        MatrixKind::Conference,
    )
}

/// The six-parameter Hermitian conference family of order 14.
pub fn c14(args: [UnitScalar; 6]) -> Result<DesignMatrix> {
    let roles = [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F];
    let pairs: Vec<(Param, UnitScalar)> = roles.into_iter().zip(args).collect();
    resolve_parametric(c14_template(), &pairs, MatrixKind::Conference)
}

/// Turn `D(t) = I + iC` families back into Hermitian conference matrices:
/// `-i (D - I) = C`.  With no parameters this is the identity on real
/// symmetric conference matrices; with parameters it dispatches to the
/// explicit family of the matching order.
pub fn proposition8(c: &DesignMatrix, params: &[UnitScalar]) -> Result<DesignMatrix> {
    let v = verify::is_conference(c, IDENTITY_TOL);
    if !v.ok {
        let (i, j) = v.witness.unwrap_or((1, 1));
        return Err(Error::NotConference(i, j));
    }
    if params.is_empty() {
        // -i((I + iC) - I) collapses to C
        let d = hadamard_from_conference(c)?;
        let n = c.order();
        return match d.scalar_mode() {
            ScalarMode::Symbolic => {
                let m = d.as_symbolic().unwrap();
                let minus_i = -&SymExpr::i();
                let out = Matrix::from_fn(n, n, |i, j| {
                    let v = if i == j { m.get(i, j) - &SymExpr::one() } else { m.get(i, j).clone() };
                    v.mul(&minus_i)
                });
                DesignMatrix::symbolic(MatrixKind::Conference, out)
            }
            ScalarMode::Complex => {
                let m = d.as_complex().unwrap();
                let minus_i = Complex64::new(0.0, -1.0);
                let out = Matrix::from_fn(n, n, |i, j| {
                    let v = if i == j { m.get(i, j) - Complex64::new(1.0, 0.0) } else { *m.get(i, j) };
                    v * minus_i
                });
                DesignMatrix::complex(MatrixKind::Conference, out)
            }
        };
    }
    match (c.order(), params.len()) {
        (6, 1) => c6(params[0]),
        (10, 3) => c10(params[0], params[1], params[2]),
        (14, 6) => c14([params[0], params[1], params[2], params[3], params[4], params[5]]),
        (6, got) => Err(Error::WrongParamCount { expected: 1, got }),
        (10, got) => Err(Error::WrongParamCount { expected: 3, got }),
        (14, got) => Err(Error::WrongParamCount { expected: 6, got }),
        (n, _) => Err(Error::NoFamilyForOrder(n)),
    }
}

/// `C(1, sign*i) + sign*i*I`: a Hadamard matrix of order q+1 whose entries
/// are all fourth roots of unity, exact in Gaussian-integer arithmetic.
pub fn quaternary(q: u64, sign: i8) -> Result<DesignMatrix> {
    if sign != 1 && sign != -1 {
        return Err(Error::BadScalarArg(sign.to_string(), "sign must be +1 or -1".into()));
    }
    let b = GaussianInt::new(0, sign as i64);
    let c = cab_matrix(q, UnitScalar::Exact(GaussianInt::ONE), UnitScalar::Exact(b))?;
    let m = c.as_symbolic().unwrap();
    let n = c.order();
    let shift = SymExpr::from_gaussian(b);
    let out = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            m.get(i, j) + &shift
        } else {
            m.get(i, j).clone()
        }
    });
    DesignMatrix::symbolic(MatrixKind::Hadamard, out)
}

/// `iC` for a real skew-symmetric conference matrix `C`: a Hermitian Seidel
/// matrix with eigenvalues of equal multiplicity.
pub fn skew_to_seidel(c: &DesignMatrix) -> Result<DesignMatrix> {
    let n = c.order();
    let ints = to_integer_matrix(c).ok_or(Error::NotSkewConference(1, 1))?;
    for i in 0..n {
        for j in 0..n {
            if *ints.get(i, j) != -*ints.get(j, i) {
                return Err(Error::NotSkewConference(i + 1, j + 1));
            }
        }
    }
    let gram = ints.mul_mat(&ints.transpose());
    for (i, j, v) in gram.entries() {
        let expect = if i == j { (n - 1) as i64 } else { 0 };
        if *v != expect {
            return Err(Error::NotSkewConference(i + 1, j + 1));
        }
    }
    let i_unit = SymExpr::i();
    let out = ints.to_symbolic().map(|e| e.mul(&i_unit));
    DesignMatrix::symbolic(MatrixKind::Seidel, out)
}
