//! Dense complex matrices: characteristic polynomials, eigenvalues, and
//! scalar-affine pencil determinants.
//!
//! Coefficients come from the Faddeev-LeVerrier recurrence (an exact
//! algebraic recurrence, O(k^4)); spectra come from a Schur/QR eigensolver.
//! The two paths are independent and cross-validate each other in the test
//! suite.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::poly::{ComplexPolynomial, ONE, ZERO};

type C = Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Largest entry modulus.
pub fn max_entry_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Rejects NaN/Inf entries.
pub fn check_finite(m: &CMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry(i, j));
            }
        }
    }
    Ok(())
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C::new(x, 0.0))
}

/// Deviation from unitarity, max |(M* M - I)_ij|.
pub fn unitary_deviation(m: &CMatrix) -> f64 {
    let k = m.ncols();
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { ONE } else { ZERO };
            worst = worst.max((prod[(i, j)] - want).norm());
        }
    }
    worst
}

fn square_dim(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Faddeev-LeVerrier coefficients c_0..c_k with
/// det(lambda I - M) = sum_j c_j lambda^(k - j), c_0 = 1.
fn faddeev_leverrier(m: &CMatrix) -> Vec<C> {
    let k = m.nrows();
    let mut cs = Vec::with_capacity(k + 1);
    cs.push(ONE);
    if k == 0 {
        return cs;
    }
    let mut mk = m.clone();
    let mut c = -mk.trace();
    cs.push(c);
    for j in 2..=k {
        // M_j = M (M_{j-1} + c_{j-1} I)
        for i in 0..k {
            mk[(i, i)] += c;
        }
        mk = m * mk;
        c = -mk.trace() / C::new(j as f64, 0.0);
        cs.push(c);
    }
    cs
}

/// Characteristic polynomial det(lambda I - M), monic, ascending in lambda.
pub fn char_poly(m: &CMatrix) -> Result<ComplexPolynomial> {
    let k = square_dim(m)?;
    check_finite(m)?;
    let cs = faddeev_leverrier(m);
    let mut asc = vec![ZERO; k + 1];
    for (j, &c) in cs.iter().enumerate() {
        asc[k - j] = c;
    }
    Ok(ComplexPolynomial::new(asc))
}

/// det(I - u M) as a polynomial in u.
///
/// The coefficient of u^k is (-1)^k e_k over the eigenvalues, i.e. the
/// characteristic polynomial reversed; the constant term is exactly 1.
pub fn det_resolvent_poly(m: &CMatrix) -> Result<ComplexPolynomial> {
    square_dim(m)?;
    check_finite(m)?;
    Ok(ComplexPolynomial::new(faddeev_leverrier(m)))
}

/// All eigenvalues with algebraic multiplicity, sorted lexicographically by
/// (re, im) for determinism.
///
/// QR iteration can stall on highly structured inputs (permutation matrices
/// in particular), so failed attempts are retried under a deterministic
/// random unitary similarity, which leaves the spectrum unchanged.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C>> {
    let k = square_dim(m)?;
    check_finite(m)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let max_iter = 80 * k.max(10);
    for attempt in 0..4u64 {
        let candidate = if attempt == 0 {
            m.clone()
        } else {
            let q = random_unitary(k, 0x5eed_c0de ^ attempt);
            &q * m * q.adjoint()
        };
        if let Some(schur) = candidate.try_schur(1e-13, max_iter) {
            let t = schur.unpack().1;
            let mut vals: Vec<C> = (0..k).map(|i| t[(i, i)]).collect();
            sort_eigenvalues(&mut vals);
            return Ok(vals);
        }
    }
    Err(Error::NumericalFailure)
}

pub fn sort_eigenvalues(vals: &mut [C]) {
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// det(alpha(u) I - beta(u) K), expanded through the eigenvalues of K:
/// the product over mu in Spec(K) of (alpha - mu beta).
pub fn affine_pencil_det(
    alpha: &ComplexPolynomial,
    beta: &ComplexPolynomial,
    k: &CMatrix,
) -> Result<ComplexPolynomial> {
    let mut acc = ComplexPolynomial::one();
    for mu in eigenvalues(k)? {
        acc = acc.mul(&alpha.sub(&beta.scale(mu)));
    }
    Ok(acc)
}

/// Greedy nearest-distance pairing between two eigenvalue multisets;
/// returns the largest matched distance.
pub fn multiset_pairing_distance(a: &[C], b: &[C]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "multisets of size {} and {} cannot be paired",
            a.len(),
            b.len()
        )));
    }
    let mut avail: Vec<C> = b.to_vec();
    let mut worst = 0.0f64;
    for &x in a {
        let (j, d) = avail
            .iter()
            .enumerate()
            .map(|(j, &y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("nonempty by length check");
        worst = worst.max(d);
        avail.swap_remove(j);
    }
    Ok(worst)
}

/// Deterministic Haar-ish random unitary from a seeded Gram-Schmidt.
pub fn random_unitary(k: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            q[(i, j)] = C::new(re, im);
        }
    }
    orthonormalize_rows(&mut q).expect("gaussian rows are a.s. full rank");
    q
}

/// Modified Gram-Schmidt on the rows; fails on rank deficiency.
pub fn orthonormalize_rows(m: &mut CMatrix) -> Result<()> {
    let (p, n) = (m.nrows(), m.ncols());
    for i in 0..p {
        for r in 0..i {
            let mut dot = ZERO;
            for j in 0..n {
                dot += m[(r, j)].conj() * m[(i, j)];
            }
            for j in 0..n {
                let s = m[(r, j)];
                m[(i, j)] -= dot * s;
            }
        }
        let norm = (0..n).map(|j| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return Err(Error::NotIsometry { deviation: norm });
        }
        for j in 0..n {
            m[(i, j)] /= C::new(norm, 0.0);
        }
    }
    Ok(())
}
