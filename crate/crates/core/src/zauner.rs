//! Zauner's (q+1, (q+1)/2) equiangular tight frames from additive characters
//! on GF(q), the Gauss-sum closed form of their Gram entries, and the
//! classification of the associated Seidel matrices as Paley-type.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::frame::Frame;
use crate::matrix::{DesignMatrix, Matrix, MatrixKind};
use crate::verify::{self, EquivReport, IDENTITY_TOL};

/// Largest supported field order for the character-sum vectors.
pub const MAX_ZAUNER_ORDER: u64 = 1 << 10;

/// Entry tolerance when classifying Seidel entries as fourth roots of unity.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// The q+1 unit vectors in C^((q+1)/2), plus the element and square
/// orderings that define them.
#[derive(Debug, Clone)]
pub struct ZaunerFamily {
    q: u64,
    field: FieldSpec,
    elements: Vec<FieldElement>,
    squares: Vec<FieldElement>,
    non_squares: Vec<FieldElement>,
    vectors: Vec<Vec<Complex64>>,
}

impl ZaunerFamily {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The elements a_1, ..., a_q in the fixed order 0, eta, eta^2, ...
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    /// The nonzero squares b_1, ..., b_((q-1)/2) in the order eta^2, eta^4, ...
    pub fn squares(&self) -> &[FieldElement] {
        &self.squares
    }

    pub fn non_squares(&self) -> &[FieldElement] {
        &self.non_squares
    }

    /// Unit-norm vectors; the first is (1, 0, ..., 0).
    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn dimension(&self) -> usize {
        ((self.q + 1) / 2) as usize
    }

    pub fn inner(&self, k: usize, l: usize) -> Complex64 {
        self.vectors[k]
            .iter()
            .zip(&self.vectors[l])
            .map(|(x, y)| x * y.conj())
            .sum()
    }

    /// Scale to the uniform Parseval normalization `||f||^2 = k/n` and wrap
    /// as a [`Frame`].
    pub fn to_frame(&self) -> Result<Frame> {
        let n = (self.q + 1) as usize;
        let k = self.dimension();
        let scale = (k as f64 / n as f64).sqrt();
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| z * scale).collect())
            .collect();
        Frame::new(n, k, crate::frame::seidel_coefficient(n, k), vectors)
    }
}

/// Build the character-sum family for an odd prime power q.
pub fn zauner_vectors(q: u64) -> Result<ZaunerFamily> {
    if q > MAX_ZAUNER_ORDER {
        return Err(Error::TooLarge(q, MAX_ZAUNER_ORDER));
    }
    let field = FieldSpec::for_order(q)?;
    let eta = field.eta().clone();
    let mut elements = Vec::with_capacity(q as usize);
    elements.push(field.zero());
    for e in 1..q {
        elements.push(field.pow(&eta, e));
    }
    let squares = field.square_order();
    let non_squares: Vec<FieldElement> = (0..(q - 1) / 2)
        .map(|s| field.pow(&eta, 2 * s + 1))
        .collect();

    let dim = ((q + 1) / 2) as usize;
    let mut vectors = Vec::with_capacity((q + 1) as usize);
    let mut first = vec![Complex64::new(0.0, 0.0); dim];
    first[0] = Complex64::new(1.0, 0.0);
    vectors.push(first);
    let inv_root = 1.0 / (q as f64).sqrt();
    let amp = (2.0 / q as f64).sqrt();
    for a in &elements {
        let mut v = Vec::with_capacity(dim);
        v.push(Complex64::new(inv_root, 0.0));
        for b in &squares {
            v.push(amp * field.additive_character(&field.mul(b, a)));
        }
        vectors.push(v);
    }
    Ok(ZaunerFamily { q, field, elements, squares, non_squares, vectors })
}

/// The coefficient of the closed-form Gram entry
/// `<x_k, x_l> = coeff * chi(a_k - a_l)`: the Gauss sum over q.
pub fn closed_form_coefficient(field: &FieldSpec) -> Complex64 {
    field.gauss_sum_closed_form() / field.order() as f64
}

/// The Gram matrix of the family.
pub fn zauner_gram(family: &ZaunerFamily) -> Result<DesignMatrix> {
    let n = (family.q + 1) as usize;
    let g = Matrix::from_fn(n, n, |i, j| family.inner(i, j));
    DesignMatrix::complex(MatrixKind::Gram, g)
}

/// What a Zauner Seidel matrix reduces to in the canonical gauge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeidelClass {
    RealSymmetricConference,
    ITimesRealSkew,
}

/// `Q = sqrt(q) (G - I)`: the Seidel matrix of the family, classified by its
/// interior entries after normalization.  Rows and columns through the first
/// vector are all ones already, so the classification looks at the rest: all
/// near +-1 means a real symmetric conference matrix, all near +-i means i
/// times a real skew one.
pub fn zauner_seidel(q: u64) -> Result<(DesignMatrix, SeidelClass)> {
    let family = zauner_vectors(q)?;
    let n = (q + 1) as usize;
    let root = (q as f64).sqrt();
    let qm = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            family.inner(i, j) * root
        }
    });
    let seidel = DesignMatrix::complex(MatrixKind::Seidel, qm)?;
    let k = ((q + 1) / 2) as usize;
    if !verify::seidel_check(&seidel, k, IDENTITY_TOL).ok {
        return Err(Error::ClassificationFailed(
            "the family's Seidel matrix failed its two-eigenvalue check".into(),
        ));
    }

    let normalized = verify::normalize(&seidel)?;
    let mat = normalized.as_complex().unwrap();
    let (mut real_entries, mut imag_entries, mut other) = (0usize, 0usize, 0usize);
    for i in 1..n {
        for j in 1..n {
            if i == j {
                continue;
            }
            let v = mat.get(i, j);
            if (v.im.abs() <= CLASSIFY_TOL) && ((v.re.abs() - 1.0).abs() <= CLASSIFY_TOL) {
                real_entries += 1;
            } else if (v.re.abs() <= CLASSIFY_TOL) && ((v.im.abs() - 1.0).abs() <= CLASSIFY_TOL) {
                imag_entries += 1;
            } else {
                other += 1;
            }
        }
    }
    let class = if other == 0 && imag_entries == 0 {
        SeidelClass::RealSymmetricConference
    } else if other == 0 && real_entries == 0 {
        SeidelClass::ITimesRealSkew
    } else {
        return Err(Error::ClassificationFailed(format!(
            "interior entry histogram: {real_entries} real units, {imag_entries} imaginary units, {other} other"
        )));
    };
    Ok((seidel, class))
}

/// Certify that the family's Seidel matrix is equivalent to the Paley matrix
/// of the same order under the two switching operations.
pub fn zauner_matches_paley(q: u64, budget: u64) -> Result<EquivReport> {
    let (seidel, _) = zauner_seidel(q)?;
    let paley = crate::construct::paley_matrix(q)?;
    let paley_num = DesignMatrix::complex(MatrixKind::Conference, paley.complex_entries()?)?;
    verify::permutation_equivalent(&seidel, &paley_num, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::verify_frame;
    use crate::verify::DEFAULT_EQUIV_BUDGET;

    #[test]
    fn dimensions_and_first_vector_overlaps() {
        let fam = zauner_vectors(5).unwrap();
        assert_eq!(fam.vectors().len(), 6);
        assert_eq!(fam.dimension(), 3);
        for v in fam.vectors() {
            assert_eq!(v.len(), 3);
        }
        let target = 1.0 / 5f64.sqrt();
        for l in 1..6 {
            assert!((fam.inner(0, l).norm() - target).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_norms_and_common_angle() {
        for q in [5u64, 7, 9, 11, 13, 25, 27] {
            let fam = zauner_vectors(q).unwrap();
            let target = 1.0 / (q as f64).sqrt();
            let n = (q + 1) as usize;
            for k in 0..n {
                assert!((fam.inner(k, k).norm() - 1.0).abs() < 1e-10, "q={q}");
                for l in k + 1..n {
                    assert!(
                        (fam.inner(k, l).norm() - target).abs() < 1e-10,
                        "q={q} pair ({k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn gram_entries_match_the_gauss_sum_closed_form() {
        for q in [5u64, 7, 9, 13, 25, 27] {
            let fam = zauner_vectors(q).unwrap();
            let coeff = closed_form_coefficient(fam.field());
            let n = (q + 1) as usize;
            for k in 1..n {
                for l in 1..n {
                    if k == l {
                        continue;
                    }
                    let d = fam.field().sub(&fam.elements()[k - 1], &fam.elements()[l - 1]);
                    let expect = coeff * fam.field().legendre_chi(&d) as f64;
                    assert!(
                        (fam.inner(k, l) - expect).norm() < 1e-10,
                        "q={q} pair ({k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_coefficients_by_congruence_class() {
        // q = 5: real 1/sqrt(5); q = 7: i/sqrt(7); q = 9: +1/3
        let f5 = FieldSpec::for_order(5).unwrap();
        assert!((closed_form_coefficient(&f5) - Complex64::new(1.0 / 5f64.sqrt(), 0.0)).norm() < 1e-12);
        let f7 = FieldSpec::for_order(7).unwrap();
        assert!((closed_form_coefficient(&f7) - Complex64::new(0.0, 1.0 / 7f64.sqrt())).norm() < 1e-12);
        let f9 = FieldSpec::for_order(9).unwrap();
        assert!((closed_form_coefficient(&f9) - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn character_sum_identities_behind_the_closed_form() {
        for q in [5u64, 7, 9, 27] {
            let fam = zauner_vectors(q).unwrap();
            let field = fam.field();
            for d_code in 1..q.min(12) {
                let d = field.decode(d_code);
                let square_sum: Complex64 = fam
                    .squares()
                    .iter()
                    .map(|b| field.additive_character(&field.mul(b, &d)))
                    .sum();
                let non_square_sum: Complex64 = fam
                    .non_squares()
                    .iter()
                    .map(|b| field.additive_character(&field.mul(b, &d)))
                    .sum();
                // the two halves sum to -1
                assert!((square_sum + non_square_sum + Complex64::new(1.0, 0.0)).norm() < 1e-10);
                // and their difference is the Gauss sum over chi(d)
                let gauss = field.gauss_sum();
                let chi = field.legendre_chi(&d) as f64;
                assert!((square_sum - non_square_sum - gauss / chi).norm() < 1e-9, "q={q} d={d_code}");
                // so the brute-force Gram entry matches the closed form
                let brute = 1.0 / q as f64 + 2.0 / q as f64 * square_sum;
                let closed = closed_form_coefficient(field) * chi;
                assert!((brute - closed).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn seidel_classification_by_field() {
        for (q, expect) in [
            (5u64, SeidelClass::RealSymmetricConference),
            (9, SeidelClass::RealSymmetricConference),
            (7, SeidelClass::ITimesRealSkew),
            (27, SeidelClass::ITimesRealSkew),
        ] {
            let (seidel, class) = zauner_seidel(q).unwrap();
            assert_eq!(class, expect, "q={q}");
            let k = ((q + 1) / 2) as usize;
            assert!(verify::seidel_check(&seidel, k, IDENTITY_TOL).ok);
        }
    }

    #[test]
    fn family_is_a_verified_frame() {
        for q in [5u64, 7, 9] {
            let fam = zauner_vectors(q).unwrap();
            let frame = fam.to_frame().unwrap();
            let v = verify_frame(&frame);
            assert!(v.ok, "q={q}, residual {}", v.residual);
        }
    }

    #[test]
    fn small_orders_recover_the_paley_matrix() {
        for q in [5u64, 9] {
            let rep = zauner_matches_paley(q, DEFAULT_EQUIV_BUDGET).unwrap();
            assert!(rep.equivalent, "q={q}");
            assert!(rep.permutation.is_some());
        }
    }

    use crate::field::FieldSpec;
}
