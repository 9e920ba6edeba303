//! Orthonormal bases, projections and random unitaries over `C^n`.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `(x, y) = sum x_i conj(y_i)`, linear in the first slot.
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    y.dotc(x)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> CVector {
    CVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// New orthonormal columns spanning `candidates` modulo `existing`.
///
/// Modified Gram-Schmidt with one re-orthogonalization pass; a candidate is
/// dropped when less than `1e-8` of its norm survives.
pub fn extend_basis(existing: &CMatrix, candidates: &CMatrix) -> CMatrix {
    let n = candidates.nrows().max(existing.nrows());
    let mut basis: Vec<CVector> = existing.column_iter().map(|c| c.into_owned()).collect();
    let start = basis.len();
    for c in candidates.column_iter() {
        let mut v = c.into_owned();
        let original = v.norm();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for b in &basis {
                let coef = b.dotc(&v);
                v -= b * coef;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 * original {
            basis.push(v / Complex64::from(norm));
        }
    }
    let added = &basis[start..];
    CMatrix::from_fn(n, added.len(), |i, j| added[j][i])
}

pub fn orthonormalize(columns: &CMatrix) -> CMatrix {
    extend_basis(&CMatrix::zeros(columns.nrows(), 0), columns)
}

pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        let q = orthonormalize(&random_matrix(n, n, rng));
        if q.ncols() == n {
            return q;
        }
    }
}

/// Random orthonormal basis of a `dim`-dimensional subspace of `span(space)`.
pub fn random_subspace(space: &CMatrix, dim: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(dim <= space.ncols());
    let u = random_unitary(space.ncols(), rng);
    orthonormalize(&(space * u.columns(0, dim)))
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` inside `span(space)`.
pub fn complement_within(space: &CMatrix, basis: &CMatrix) -> CMatrix {
    extend_basis(basis, space)
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in `C^n`.
pub fn complement(basis: &CMatrix, rng: &mut impl Rng) -> CMatrix {
    let n = basis.nrows();
    let target = n - basis.ncols();
    loop {
        let c = extend_basis(basis, &random_matrix(n, n, rng));
        if c.ncols() >= target {
            return c.columns(0, target).into_owned();
        }
    }
}

pub fn projector(basis: &CMatrix) -> CMatrix {
    basis * basis.adjoint()
}

pub fn project(basis: &CMatrix, v: &CVector) -> CVector {
    basis * (basis.adjoint() * v)
}

pub fn hstack(parts: &[&CMatrix], rows: usize) -> CMatrix {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.columns_mut(at, p.ncols()).copy_from(p);
        at += p.ncols();
    }
    out
}

/// Largest entry modulus of `M^* M - I`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let g = m.adjoint() * m;
    max_abs(&(g - CMatrix::identity(m.ncols(), m.ncols())))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral-norm bound via the Frobenius norm.
pub fn op_norm_bound(m: &CMatrix) -> f64 {
    m.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 7, 32] {
            let u = random_unitary(n, &mut rng);
            assert!(unitarity_residual(&u) < 1e-13);
            assert!(unitarity_residual(&u.adjoint()) < 1e-13);
        }
    }

    #[test]
    fn complements_are_orthogonal_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary(9, &mut rng);
        let b = random_subspace(&u.columns(0, 6).into_owned(), 4, &mut rng);
        let inside = complement_within(&u.columns(0, 6).into_owned(), &b);
        assert_eq!(inside.ncols(), 2);
        assert!(max_abs(&(b.adjoint() * &inside)) < 1e-13);
        let rest = complement(&b, &mut rng);
        assert_eq!(rest.ncols(), 5);
        let full = hstack(&[&b, &rest], 9);
        assert!(unitarity_residual(&full) < 1e-13);
    }

    #[test]
    fn projections_are_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = orthonormalize(&random_matrix(6, 3, &mut rng));
        let p = projector(&b);
        assert!(max_abs(&(&p * &p - &p)) < 1e-14);
        assert!(max_abs(&(p.adjoint() - &p)) < 1e-14);
        let v = random_vector(6, &mut rng);
        let r = &v - project(&b, &v);
        assert!((b.adjoint() * r).norm() < 1e-13);
    }

    #[test]
    fn dependent_columns_are_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_matrix(5, 2, &mut rng);
        let twice = hstack(&[&a, &a], 5);
        assert_eq!(orthonormalize(&twice).ncols(), 2);
        // inner product is linear in the first slot
        let x = random_vector(3, &mut rng);
        let y = random_vector(3, &mut rng);
        let c = Complex64::new(0.0, 2.0);
        assert!((inner(&(&x * c), &y) - c * inner(&x, &y)).norm() < 1e-12);
    }
}
