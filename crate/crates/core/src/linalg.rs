//! Dense real vectors and small dense matrices.
//!
//! Problem sizes are desk scale, so everything here is plain dense storage
//! with direct factorizations. The SPD solver doubles as the ground-truth
//! oracle for the iterative engine, which is why it stays deliberately
//! simple: Cholesky, no pivoting tricks, no iterative refinement.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point of the ambient finite-dimensional real inner-product space.
///
/// Serializes as a bare JSON array of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    /// Like [`Vector::new`] but rejects NaN and infinite coordinates.
    /// Used at file-input boundaries.
    pub fn checked(coords: Vec<f64>) -> Result<Self> {
        match coords.iter().position(|c| !c.is_finite()) {
            Some(index) => Err(Error::NonFiniteCoordinate { index }),
            None => Ok(Vector(coords)),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Inner product ⟨x, y⟩ with an explicit dimension check.
    pub fn inner(&self, other: &Vector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
      Ok(self.dot(other))
    }

    /// Euclidean norm sqrt(⟨x, x⟩).
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unchecked inner product; panics on dimension mismatch.
    pub(crate) fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// a*x + b*y.
    pub fn lincomb(a: f64, x: &Vector, b: f64, y: &Vector) -> Vector {
        assert_eq!(x.dim(), y.dim(), "vector dimension mismatch");
        Vector(
            x.0.iter()
                .zip(&y.0)
                .map(|(xi, yi)| a * xi + b * yi)
                .collect(),
        )
    }

    /// Distance ‖x − y‖.
    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }
}

impl From<Vec<f64>> for Vector {
    fn from(coords: Vec<f64>) -> Self {
        Vector(coords)
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector::add(self, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector::sub(self, rhs)
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, c: f64) -> Vector {
        self.scale(c)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;
    fn mul(self, v: &Vector) -> Vector {
        v.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// The map x ↦ scale·x + shift.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub shift: Vector,
}

impl AffineMap {
    pub fn new(scale: f64, shift: Vector) -> Self {
        AffineMap { scale, shift }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::lincomb(self.scale, x, 1.0, &self.shift)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix-vector product M·x; panics on dimension mismatch.
    pub fn matvec(&self, x: &Vector) -> Vector {
        assert_eq!(self.cols, x.dim(), "matvec dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        }
        Vector(out)
    }

    /// Mᵀ·x; panics on dimension mismatch.
    pub fn transpose_matvec(&self, x: &Vector) -> Vector {
        assert_eq!(self.rows, x.dim(), "transpose matvec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for j in 0..self.cols {
                out[j] += self.data[i * self.cols + j] * xi;
            }
        }
        Vector(out)
    }

    /// Gram matrix M·Mᵀ.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let ri = &self.data[i * self.cols..(i + 1) * self.cols];
                let rj = &self.data[j * self.cols..(j + 1) * self.cols];
                let v: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// M + c·I for square M.
    pub fn add_scaled_identity(&self, c: f64) -> Matrix {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let mut m = self.clone();
        for i in 0..self.rows {
            m.set(i, i, m.get(i, i) + c);
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Maximum |m_ij − m_ji| over all pairs.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn check_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let asym = self.max_asymmetry();
        if asym > 1e-12 * (1.0 + self.max_abs()) {
            return Err(Error::NotSymmetric {
                max_asymmetry: asym,
            });
        }
        Ok(())
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors M = L·Lᵀ; fails if M is not symmetric positive definite.
    pub fn factor(m: &Matrix) -> Result<Self> {
        m.check_symmetric()?;
        let n = m.rows();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = m.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Cholesky { n, l })
    }

    /// Solves L·Lᵀ·x = b.
    pub fn solve(&self, b: &Vector) -> Vector {
        assert_eq!(self.n, b.dim(), "solve dimension mismatch");
        let n = self.n;
        // forward substitution L y = b
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        // back substitution Lᵀ x = y
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        Vector(x)
    }
}

/// Direct solve of M·x = b for symmetric positive-definite M.
pub fn solve_spd(m: &Matrix, b: &Vector) -> Result<Vector> {
    if m.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.dim(),
        });
    }
    Ok(Cholesky::factor(m)?.solve(b))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
///
/// Intended for the desk-scale matrices this crate works with; accuracy is
/// near machine precision, which the declared-modulus bookkeeping relies on.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    m.check_symmetric()?;
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a: Vec<f64> = (0..n * n).map(|k| m.data[k]).collect();
    let frob: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _sweep in 0..60 {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        s += a[p * n + q] * a[p * n + q];
                    }
                }
            }
            s.sqrt()
        };
        if off <= 1e-14 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[p * n + k] = a[k * n + p];
                        a[k * n + q] = s * akp + c * akq;
                        a[q * n + k] = a[k * n + q];
                    }
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec())
    }

    #[test]
    fn inner_orthogonal_axes() {
        assert_eq!(v(&[1.0, 0.0]).inner(&v(&[0.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn inner_direct_expansion() {
        assert_eq!(v(&[1.0, 2.0]).inner(&v(&[3.0, 4.0])).unwrap(), 11.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        assert!(matches!(
            v(&[1.0]).inner(&v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_self_is_norm_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = Vector::new((0..5).map(|_| rng.random_range(-3.0..3.0)).collect());
            let ip = x.inner(&x).unwrap();
            assert!(ip >= 0.0);
            assert!((ip - x.norm() * x.norm()).abs() <= 1e-12 * (1.0 + ip));
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(v(&[3.0, 4.0]).norm(), 5.0);
        assert_eq!(v(&[0.0, 0.0, 0.0]).norm(), 0.0);
        assert_eq!(v(&[-1.0]).norm(), 1.0);
    }

    #[test]
    fn cauchy_schwarz_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let dim = rng.random_range(1..8);
            let x = Vector::new((0..dim).map(|_| rng.random_range(-5.0..5.0)).collect());
            let y = Vector::new((0..dim).map(|_| rng.random_range(-5.0..5.0)).collect());
            let lhs = x.inner(&y).unwrap().abs();
            let rhs = x.norm() * y.norm();
            assert!(lhs <= rhs + 1e-12 * (1.0 + rhs));
        }
    }

    #[test]
    fn checked_rejects_non_finite() {
        assert!(Vector::checked(vec![0.0, f64::NAN]).is_err());
        assert!(Vector::checked(vec![f64::INFINITY]).is_err());
        assert!(Vector::checked(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn affine_map_exact_special_scales() {
        let shift = v(&[1.0, -2.0]);
        let x = v(&[0.25, 4.0]);
        assert_eq!(AffineMap::new(1.0, shift.clone()).apply(&x), &x + &shift);
        assert_eq!(AffineMap::new(-1.0, shift.clone()).apply(&x), &shift - &x);
        assert_eq!(AffineMap::new(0.0, shift.clone()).apply(&x), shift);
    }

    #[test]
    fn solve_identity_system() {
        let b = v(&[1.5, -2.0, 0.25]);
        let x = solve_spd(&Matrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_scalar_scaling() {
        let m = Matrix::identity(2).scale(2.0);
        let x = solve_spd(&m, &v(&[2.0, 4.0])).unwrap();
        assert_eq!(x, v(&[1.0, 2.0]));
    }

    #[test]
    fn solve_rejects_indefinite() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(matches!(
            solve_spd(&m, &v(&[1.0, 1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn solve_rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            solve_spd(&m, &v(&[1.0, 1.0])),
            Err(Error::NotSymmetric { .. })
        ));
    }

    fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
        let mut a = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                a.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
        // AᵀA is PSD; the shift keeps the spectrum away from zero
        let mut g = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut s = 0.0;
                for k in 0..dim {
                    s += a.get(k, i) * a.get(k, j);
                }
                g.set(i, j, s);
            }
        }
        g.add_scaled_identity(0.5)
    }

    #[test]
    fn solve_residual_bound_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let dim = rng.random_range(1..=20);
            let m = random_spd(&mut rng, dim);
            let b = Vector::new((0..dim).map(|_| rng.random_range(-2.0..2.0)).collect());
            let x = solve_spd(&m, &b).unwrap();
            let residual = m.matvec(&x).sub(&b).norm();
            assert!(
                residual <= 1e-10 * (1.0 + b.norm()),
                "residual {residual} too large at dim {dim}"
            );
        }
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = Matrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let eigs = sym_eigenvalues(&m).unwrap();
        assert_eq!(eigs, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigenvalues_of_2x2() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eigs = sym_eigenvalues(&m).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let dim = rng.random_range(2..=6);
            let mut m = Matrix::zeros(dim, dim);
            for i in 0..dim {
                for j in i..dim {
                    let val = rng.random_range(-2.0..2.0);
                    m.set(i, j, val);
                    m.set(j, i, val);
                }
            }
            let eigs = sym_eigenvalues(&m).unwrap();
            let trace: f64 = (0..dim).map(|i| m.get(i, i)).sum();
            let eig_sum: f64 = eigs.iter().sum();
            assert!((trace - eig_sum).abs() <= 1e-10 * (1.0 + trace.abs()));
        }
    }

    #[test]
    fn from_rows_rejects_ragged() {
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
