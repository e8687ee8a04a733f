//! Dense complex matrices of small dimension.
//!
//! Everything here operates on single-party (M x M) or pair (M^2 x M^2)
//! reductions, so dimensions stay in the single digits. The eigensolver is a
//! cyclic complex Jacobi iteration; 2 x 2 inputs use the closed form.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    /// Build from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    /// Element-wise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut m = Self::zeros(d);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self[(r1, c1)];
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        m[(r1 * other.dim + r2, c1 * other.dim + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        m
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H_ij - conj(H_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(tolerances::HERMITIAN)) {
            return false;
        }
        match hermitian_eigen(self, false) {
            Ok(e) => e.values.first().is_none_or(|&v| v >= -tol),
            Err(_) => false,
        }
    }

    pub fn unitary_defect(&self) -> f64 {
        (&self.dagger() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    fn symmetrized(&self) -> Self {
        let mut m = self.clone();
        for r in 0..self.dim {
            for c in r..self.dim {
                let avg = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                m[(r, c)] = avg;
                m[(c, r)] = avg.conj();
            }
        }
        m
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * rhs[(k, c)];
                }
            }
        }
        m
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Option<ComplexMatrix>,
}

impl HermitianEigen {
    /// `V diag(e) V^dagger`; requires vectors.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let v = self.vectors.as_ref()?;
        let d = ComplexMatrix::from_diag(&self.values);
        Some(&(v * &d) * &v.dagger())
    }
}

/// Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    let defect = h.hermitian_defect();
    if defect > tolerances::HERMITIAN {
        return Err(Error::NotHermitian(defect));
    }
    let a = h.symmetrized();
    let (values, vectors) = match a.dim {
        1 => (vec![a[(0, 0)].re], ComplexMatrix::identity(1)),
        2 => eigen_2x2(&a),
        _ => jacobi(a)?,
    };
    sort_ascending(values, vectors, want_vectors)
}

fn sort_ascending(
    values: Vec<f64>,
    vectors: ComplexMatrix,
    want_vectors: bool,
) -> Result<HermitianEigen> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut v = ComplexMatrix::zeros(n);
        for (new_c, &old_c) in order.iter().enumerate() {
            for r in 0..n {
                v[(r, new_c)] = vectors[(r, old_c)];
            }
        }
        v
    });
    Ok(HermitianEigen {
        values: sorted,
        vectors,
    })
}

fn eigen_2x2(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let p = a[(0, 0)].re;
    let d = a[(1, 1)].re;
    let b = a[(0, 1)];
    let mean = 0.5 * (p + d);
    let radius = (0.5 * (p - d)).hypot(b.norm());
    let lo = mean - radius;
    let hi = mean + radius;

    if b.norm() <= f64::EPSILON * (p.abs() + d.abs()).max(f64::MIN_POSITIVE) {
        // Already diagonal.
        return (vec![p, d], ComplexMatrix::identity(2));
    }

    let vec_for = |lambda: f64| -> [Complex64; 2] {
        // Two candidate null vectors of (A - lambda I); keep the better conditioned.
        let u = [b, Complex64::new(lambda - p, 0.0)];
        let w = [Complex64::new(lambda - d, 0.0), b.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if nu >= nw {
            [u[0] / nu, u[1] / nu]
        } else {
            [w[0] / nw, w[1] / nw]
        }
    };
    let v_lo = vec_for(lo);
    // Second vector is the orthogonal complement of the first.
    let v_hi = [-v_lo[1].conj(), v_lo[0].conj()];
    let vectors = ComplexMatrix {
        dim: 2,
        data: vec![v_lo[0], v_hi[0], v_lo[1], v_hi[1]],
    };
    (vec![lo, hi], vectors)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for r in 0..a.dim {
        for c in 0..a.dim {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// `a_pq`, then applies a real Givens rotation to annihilate it.
fn jacobi(mut a: ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.dim;
    let mut v = ComplexMatrix::identity(n);
    let total: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * total.max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..tolerances::MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= threshold * 1e-3 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / r;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                let j_pp = Complex64::new(c, 0.0);
                let j_pq = Complex64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;

                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J^dagger A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence(tolerances::MAX_JACOBI_SWEEPS));
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Clamp tiny negatives to zero; error on genuinely negative input.
pub(crate) fn clamp_nonnegative(x: f64) -> Result<f64> {
    if x < -tolerances::NOT_PSD {
        Err(Error::NotPsd(x))
    } else {
        Ok(x.max(0.0))
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h, true)?;
    let roots = eig
        .values
        .iter()
        .map(|&e| clamp_nonnegative(e).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    let v = eig.vectors.expect("vectors requested");
    let d = ComplexMatrix::from_diag(&roots);
    Ok((&(&v * &d) * &v.dagger()).symmetrized())
}

/// `sigma_y (x) sigma_y`.
pub fn sigma_yy() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 3)] = -ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 0)] = -ONE;
    m
}

/// Two-qubit spin flip `(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
pub fn spin_flip_conjugate(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.dim,
        });
    }
    let yy = sigma_yy();
    Ok(&(&yy * &rho.conj()) * &yy)
}
