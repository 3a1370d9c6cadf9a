//! Parseval equiangular tight frames out of two-eigenvalue Seidel matrices:
//! Gram assembly, deterministic factorization into frame vectors, frame
//! verification, the iterated order-squaring family, and its redundancy
//! sequence.

use nalgebra::SymmetricEigen;
use num::complex::Complex64;
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DesignMatrix, Matrix, MatrixKind};
use crate::verify::{self, Verdict};

/// Eigenvalues of a Gram matrix must sit this close to 0 or 1.
pub const RANK_TOL: f64 = 1e-6;
/// Tolerance on uniform norms and the Parseval identity.
pub const FRAME_TOL: f64 = 1e-9;
/// Tolerance on the pairwise angle.
pub const ANGLE_TOL: f64 = 1e-8;

/// `n` unit-trace-normalized vectors in C^k with their expected common angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub n: usize,
    pub k: usize,
    pub common_angle: f64,
    vectors: Vec<Vec<Complex64>>,
}

impl Frame {
    pub fn new(n: usize, k: usize, common_angle: f64, vectors: Vec<Vec<Complex64>>) -> Result<Frame> {
        if vectors.len() != n || vectors.iter().any(|v| v.len() != k) {
            return Err(Error::BadStructure {
                kind: "frame".into(),
                reason: format!("expected {n} vectors of length {k}"),
            });
        }
        Ok(Frame { n, k, common_angle, vectors })
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        self.vectors[i]
            .iter()
            .zip(&self.vectors[j])
            .map(|(x, y)| x * y.conj())
            .sum()
    }

    /// n/k as an exact rational.
    pub fn redundancy(&self) -> BigRational {
        BigRational::new(BigInt::from(self.n), BigInt::from(self.k))
    }
}

/// The off-diagonal scale linking a Seidel matrix to its Gram matrix:
/// `sqrt(k(n-k) / (n^2 (n-1)))`.
pub fn seidel_coefficient(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (k * (n - k) / (n * n * (n - 1.0))).sqrt()
}

/// `G = (k/n) I + c Q`: the rank-k projection whose frame realizes the
/// Seidel matrix `Q`.
pub fn gram_from_seidel(q: &DesignMatrix, k: usize, tol: f64) -> Result<DesignMatrix> {
    let n = q.order();
    let numeric = DesignMatrix::complex(q.kind(), q.complex_entries()?)?;
    if !verify::seidel_check(&numeric, k, tol).ok {
        return Err(Error::NotSeidel);
    }
    let c = seidel_coefficient(n, k);
    let kn = Complex64::new(k as f64 / n as f64, 0.0);
    let mat = numeric.as_complex().unwrap();
    let g = Matrix::from_fn(n, n, |i, j| {
        let base = mat.get(i, j) * c;
        if i == j {
            base + kn
        } else {
            base
        }
    });
    DesignMatrix::complex(MatrixKind::Gram, g)
}

/// Deterministic factorization of a rank-k Hermitian projection into frame
/// vectors: keep the k eigenvectors at eigenvalue 1, fix each phase so the
/// first sizable component is positive real, and order them reproducibly.
pub fn frame_from_gram(g: &DesignMatrix, k: usize) -> Result<Frame> {
    let n = g.order();
    let mat = g
        .as_complex()
        .ok_or(Error::SymbolicNotSupported("frame_from_gram"))?;
    let eig = SymmetricEigen::new(mat.to_nalgebra());

    let mut kept: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut clean = true;
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - 1.0).abs() <= RANK_TOL {
            let col: Vec<Complex64> = eig.eigenvectors.column(idx).iter().cloned().collect();
            kept.push((lambda, phase_fix(col, lambda)));
        } else if lambda.abs() > RANK_TOL {
            clean = false;
        }
    }
    if !clean || kept.len() != k {
        return Err(Error::RankMismatch { expected: k, found: kept.len() });
    }
    kept.sort_by(|a, b| {
        b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1, &b.1))
    });

    // rows of the n x k factor, conjugated, are the frame vectors
    let vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|row| kept.iter().map(|(_, col)| col[row].conj()).collect())
        .collect();
    let frame = Frame::new(n, k, seidel_coefficient(n, k), vectors)?;

    // the factor must reproduce the projection
    let recon = Matrix::from_fn(n, n, |i, j| frame.inner(j, i));
    if recon.max_abs_diff(mat) > ANGLE_TOL {
        return Err(Error::BadStructure {
            kind: "gram".into(),
            reason: "factorization does not reproduce the Gram matrix".into(),
        });
    }
    Ok(frame)
}

fn phase_fix(mut col: Vec<Complex64>, lambda: f64) -> Vec<Complex64> {
    let scale = lambda.max(0.0).sqrt();
    if let Some(first) = col.iter().find(|z| z.norm() > 1e-8) {
        let phase = first.conj() / first.norm();
        for z in col.iter_mut() {
            *z *= phase * scale;
        }
    } else {
        for z in col.iter_mut() {
            *z *= scale;
        }
    }
    col
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Uniform norms `k/n`, equiangularity at the expected common angle, and the
/// Parseval identity `sum f f* = I_k`.
pub fn verify_frame(frame: &Frame) -> Verdict {
    let name = "frame";
    let (n, k) = (frame.n, frame.k);
    let mut worst = 0.0f64;
    let mut witness = None;
    let note = |v: f64, at: Option<(usize, usize)>, worst: &mut f64, witness: &mut Option<(usize, usize)>| {
        if v > *worst {
            *worst = v;
            *witness = at;
        }
    };

    let target_norm = k as f64 / n as f64;
    let mut norm_dev = 0.0f64;
    for (i, f) in frame.vectors.iter().enumerate() {
        let nsq: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let d = (nsq - target_norm).abs();
        if d > norm_dev {
            norm_dev = d;
            if d > FRAME_TOL {
                note(d, Some((i, i)), &mut worst, &mut witness);
            }
        }
    }
    let mut angle_dev = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let d = (frame.inner(i, j).norm() - frame.common_angle).abs();
            if d > angle_dev {
                angle_dev = d;
                if d > ANGLE_TOL {
                    note(d, Some((i, j)), &mut worst, &mut witness);
                }
            }
        }
    }
    let mut parseval_dev = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            let sum: Complex64 = frame
                .vectors
                .iter()
                .map(|f| f[a] * f[b].conj())
                .sum();
            let expect = if a == b { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            let d = (sum - expect).norm();
            if d > parseval_dev {
                parseval_dev = d;
                if d > FRAME_TOL {
                    note(d, Some((a, b)), &mut worst, &mut witness);
                }
            }
        }
    }

    let ok = norm_dev <= FRAME_TOL && angle_dev <= ANGLE_TOL && parseval_dev <= FRAME_TOL;
    let residual = norm_dev.max(angle_dev).max(parseval_dev);
    Verdict {
        ok,
        identity: name.into(),
        residual,
        witness: if ok { None } else { witness.map(|(i, j)| (i + 1, j + 1)) },
    }
}

/// Parameters of a block-iterated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrameParams {
    pub n: usize,
    pub k: usize,
    pub beta: u32,
    /// +1 for the frame, -1 for its conjugate (negated Seidel matrix).
    pub sign: i8,
}

/// Flip the sign of a Seidel matrix, moving between a frame and its
/// conjugate: `(n, k)` becomes `(n, n-k)`.
pub fn seidel_negate(q: &DesignMatrix) -> Result<DesignMatrix> {
    let mat = q
        .as_complex()
        .ok_or(Error::SymbolicNotSupported("seidel_negate"))?;
    DesignMatrix::complex(q.kind(), mat.map(|z| -z))
}

/// Apply the order-squaring block construction `beta` times to a Hadamard
/// matrix of order n0 and return the resulting Seidel matrix `K - I` together
/// with its frame parameters `(n0^(2^beta), (sqrt(n) (sqrt(n) + 1)) / 2)`.
pub fn iterate_block(h0: &DesignMatrix, beta: u32) -> Result<(DesignMatrix, FrameParams)> {
    if beta == 0 {
        return Err(Error::BadOrder { order: 0, reason: "iteration depth must be >= 1".into() });
    }
    let n0 = h0.order() as u64;
    let final_order = (0..beta).try_fold(n0, |acc, _| {
        let next = acc.checked_mul(acc)?;
        (next <= crate::construct::MAX_BLOCK_ORDER as u64).then_some(next)
    });
    let Some(final_order) = final_order else {
        return Err(Error::TooLarge(0, crate::construct::MAX_BLOCK_ORDER as u64));
    };

    let mut k_mat = DesignMatrix::complex(h0.kind(), h0.complex_entries()?)?;
    for _ in 0..beta {
        k_mat = crate::construct::block_square(&k_mat)?;
    }
    let n = final_order as usize;
    let mat = k_mat.as_complex().unwrap();
    let q = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            mat.get(i, j) - Complex64::new(1.0, 0.0)
        } else {
            *mat.get(i, j)
        }
    });
    let seidel = DesignMatrix::complex(MatrixKind::Seidel, q)?;
    let root = (n as f64).sqrt().round() as usize;
    let params = FrameParams { n, k: root * (root + 1) / 2, beta, sign: 1 };
    Ok((seidel, params))
}

/// Redundancies n/k of the block-iterated family seeded at order n0:
/// `2 M / (M + 1)` with `M = n0^(2^(beta-1))`, strictly increasing to 2.
pub fn redundancy_sequence(n0: u64, beta_max: u32) -> Result<Vec<BigRational>> {
    if n0 < 2 {
        return Err(Error::BadOrder { order: n0, reason: "seed order must be >= 2".into() });
    }
    if beta_max > 16 {
        return Err(Error::TooLarge(beta_max as u64, 16));
    }
    let mut out = Vec::with_capacity(beta_max as usize);
    for beta in 1..=beta_max {
        let m = BigInt::from(n0).pow(1u32 << (beta - 1));
        out.push(BigRational::new(2 * m.clone(), m + 1));
    }
    Ok(out)
}

/// Full pipeline: Seidel matrix to verified frame.
pub fn frame_from_seidel(q: &DesignMatrix, k: usize, tol: f64) -> Result<Frame> {
    let gram = gram_from_seidel(q, k, tol)?;
    frame_from_gram(&gram, k)
}

// ---------------------------------------------------------------------------
// JSON: {n, k, common_angle, vectors: [[[re, im], ...], ...]}.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FrameDoc {
    n: usize,
    k: usize,
    common_angle: f64,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FrameDoc {
            n: self.n,
            k: self.k,
            common_angle: self.common_angle,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let doc = FrameDoc::deserialize(deserializer)?;
        let vectors = doc
            .vectors
            .into_iter()
            .map(|v| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        Frame::new(doc.n, doc.k, doc.common_angle, vectors)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{self, UnitScalar};
    use crate::scalar::{Param, SymExpr};
    use crate::verify::IDENTITY_TOL;

    fn unit(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    fn two_one_seidel() -> DesignMatrix {
        DesignMatrix::complex(
            MatrixKind::Seidel,
            Matrix::from_rows(vec![
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn gram_of_the_two_one_frame() {
        let g = gram_from_seidel(&two_one_seidel(), 1, IDENTITY_TOL).unwrap();
        let m = g.as_complex().unwrap();
        for (_, _, v) in m.entries() {
            assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gram_coefficient_and_trace() {
        let c = construct::c6(UnitScalar::Value(unit(std::f64::consts::PI / 5.0))).unwrap();
        let g = gram_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let expect = 1.0 / (2.0 * 5f64.sqrt());
        assert!((seidel_coefficient(6, 3) - expect).abs() < 1e-15);
        let m = g.as_complex().unwrap();
        for (i, j, v) in m.entries() {
            if i != j {
                assert!((v.norm() - expect).abs() < 1e-12);
            }
        }
        let tr = m.trace();
        assert!((tr - Complex64::new(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn gram_refuses_non_seidel_input() {
        let not_seidel = DesignMatrix::complex(
            MatrixKind::Seidel,
            Matrix::from_fn(3, 3, |i, j| {
                if i == j {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.5, 0.0)
                }
            }),
        )
        .unwrap();
        assert!(matches!(
            gram_from_seidel(&not_seidel, 1, IDENTITY_TOL),
            Err(Error::NotSeidel)
        ));
    }

    #[test]
    fn factorized_two_one_frame() {
        let g = gram_from_seidel(&two_one_seidel(), 1, IDENTITY_TOL).unwrap();
        let f = frame_from_gram(&g, 1).unwrap();
        assert_eq!((f.n, f.k), (2, 1));
        for v in f.vectors() {
            assert!((v[0].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        assert!(verify_frame(&f).ok);
    }

    #[test]
    fn six_three_frame_has_the_expected_angle() {
        let c = construct::c6(UnitScalar::Value(unit(std::f64::consts::PI / 5.0))).unwrap();
        let f = frame_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let angle = 1.0 / (2.0 * 5f64.sqrt());
        for i in 0..6 {
            for j in i + 1..6 {
                assert!((f.inner(i, j).norm() - angle).abs() < 1e-9, "({i},{j})");
            }
        }
        let v = verify_frame(&f);
        assert!(v.ok, "residual {}", v.residual);
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let g = gram_from_seidel(&two_one_seidel(), 1, IDENTITY_TOL).unwrap();
        assert!(matches!(
            frame_from_gram(&g, 2),
            Err(Error::RankMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn orthonormal_basis_is_a_frame_with_angle_zero() {
        let vectors = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let f = Frame::new(2, 2, 0.0, vectors).unwrap();
        assert!(verify_frame(&f).ok);
    }

    #[test]
    fn perturbed_frame_fails_verification() {
        let c = construct::c6(UnitScalar::Value(unit(0.3))).unwrap();
        let f = frame_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let mut vectors = f.vectors().to_vec();
        vectors[2][1] += Complex64::new(1e-3, 0.0);
        let bad = Frame::new(6, 3, f.common_angle, vectors).unwrap();
        let v = verify_frame(&bad);
        assert!(!v.ok);
        assert!(v.witness.is_some());
    }

    #[test]
    fn factorization_gauge_is_deterministic() {
        let c = construct::c6(UnitScalar::Value(unit(1.234))).unwrap();
        let f1 = frame_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let f2 = frame_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        assert_eq!(f1, f2);
        // Gram recomputed from the vectors matches the source Gram entrywise
        let g = gram_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let recon = Matrix::from_fn(6, 6, |i, j| f1.inner(j, i));
        assert!(recon.max_abs_diff(g.as_complex().unwrap()) < 1e-8);
    }

    #[test]
    fn iterated_block_parameters() {
        // order-6 Hermitian conference seeds the (36, 21) frame
        let c = construct::c6(UnitScalar::Value(unit(std::f64::consts::PI / 5.0))).unwrap();
        let h = construct::hadamard_from_conference(&c).unwrap();
        let (q, params) = iterate_block(&h, 1).unwrap();
        assert_eq!((params.n, params.k), (36, 21));
        assert!(verify::seidel_check(&q, 21, IDENTITY_TOL).ok);

        // doubling route: order 12 seeds the (144, 78) frame
        let cab = construct::cab_matrix(
            5,
            UnitScalar::Value(unit(0.4)),
            UnitScalar::Value(unit(1.9)),
        )
        .unwrap();
        let h12 = construct::hadamard_double(&cab).unwrap();
        let (_, params) = iterate_block(&h12, 1).unwrap();
        assert_eq!((params.n, params.k), (144, 78));

        // too deep is refused
        assert!(matches!(iterate_block(&h, 3), Err(Error::TooLarge(..))));
    }

    #[test]
    fn conjugate_branch_parameters_add_up() {
        let c = construct::c6(UnitScalar::Value(unit(0.8))).unwrap();
        let h = construct::hadamard_from_conference(&c).unwrap();
        let (q, params) = iterate_block(&h, 1).unwrap();
        let neg = seidel_negate(&q).unwrap();
        let k_minus = params.n - params.k;
        assert!(verify::seidel_check(&neg, k_minus, IDENTITY_TOL).ok);
        let f = frame_from_seidel(&neg, k_minus, IDENTITY_TOL).unwrap();
        assert!(verify_frame(&f).ok);
        assert_eq!(params.k + k_minus, params.n);
    }

    #[test]
    fn redundancy_sequence_values() {
        let seq = redundancy_sequence(6, 3).unwrap();
        let expect: Vec<BigRational> = [(12, 7), (72, 37), (2592, 1297)]
            .iter()
            .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
            .collect();
        assert_eq!(seq, expect);
        let two = BigRational::new(BigInt::from(2), BigInt::from(1));
        for w in seq.windows(2) {
            assert!(w[0] < w[1]);
        }
        for r in &seq {
            assert!(*r < two);
        }
    }

    #[test]
    fn frame_json_round_trip() {
        let c = construct::c6(UnitScalar::Value(unit(0.7))).unwrap();
        let f = frame_from_seidel(&c, 3, IDENTITY_TOL).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: Frame = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["n"], 6);
        assert_eq!(value["k"], 3);
        assert!(value["vectors"][0][0].is_array());
    }

    #[test]
    fn symbolic_seidel_goes_through_the_numeric_image() {
        // parameter-free symbolic input works end to end
        let c6_at_i = construct::c6(UnitScalar::Exact(crate::GaussianInt::I)).unwrap();
        let f = frame_from_seidel(&c6_at_i, 3, IDENTITY_TOL).unwrap();
        assert!(verify_frame(&f).ok);
        // a parametric one cannot be framed directly
        let c = construct::c6(UnitScalar::Sym(Param::B)).unwrap();
        assert!(frame_from_seidel(&c, 3, IDENTITY_TOL).is_err());
        let _ = SymExpr::parse("b").unwrap();
    }
}
