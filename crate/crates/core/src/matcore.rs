//! Small dense complex linear algebra: construction, tensor products,
//! partial transpose, Hermitian eigenvalues, traces.
//!
//! Everything here targets the handful of matrices the detector states need
//! (at most 6x6 states, 3x3 projectors); a cyclic Jacobi sweep is accurate
//! and dependency-free at that scale.

use crate::numkernel::Complex64;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(&'static str),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge (off-diagonal norm {0:e})")]
    NoConvergence(f64),
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Dimensions of a bipartite system `A ⊗ B`, first factor first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteShape {
    pub dim_a: usize,
    pub dim_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "dimensions must be at least 1");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Rank-1 projector |v><v| from a real vector.
    pub fn projector_from_real_vec(v: &[f64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| Complex64::new(v[i] * v[j], 0.0))
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

    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimMismatch("matrix product"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::DimMismatch("matrix sum"));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::DimMismatch("matrix difference"));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// ‖m − m†‖_max.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Commutator [a, b] = ab − ba.
    pub fn commutator(&self, other: &Self) -> Result<Self, MatError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product with the first factor as the first subsystem, so the
/// joint basis runs `|a_0 b_0>, |a_0 b_1>, ...` and ground states sit last.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Partial transpose on one factor of a bipartite matrix.
pub fn partial_transpose(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    subsystem: Subsystem,
) -> Result<ComplexMatrix, MatError> {
    let n = shape.dim_a * shape.dim_b;
    if !m.is_square() || m.rows != n {
        return Err(MatError::DimMismatch("partial transpose shape"));
    }
    let (da, db) = (shape.dim_a, shape.dim_b);
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let (i, j) = (a * db + b, a2 * db + b2);
                    let src = match subsystem {
                        Subsystem::A => (a2 * db + b, a * db + b2),
                        Subsystem::B => (a * db + b2, a2 * db + b),
                    };
                    out[(i, j)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
///
/// Inputs may deviate from Hermiticity by at most 1e-10 in max norm and are
/// symmetrized internally.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>, MatError> {
    if !m.is_square() {
        return Err(MatError::DimMismatch("eigensolver needs a square matrix"));
    }
    let dev = m.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(MatError::NotHermitian(dev));
    }
    let n = m.rows;
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let scale = a.max_abs().max(1e-300);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    for _sweep in 0..60 {
        if off(&a) <= 1e-14 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 * scale {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // tan(2θ) = 2|apq|/(aqq - app); NR-style stable solve for t = tan θ.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- U† A U with U = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on (p, q).
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp * c - arq * s * phase.conj();
                    let new_rq = arp * s * phase + arq * c;
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp.conj();
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq.conj();
                }
                let new_pp = c * c * app - 2.0 * c * s * mag + s * s * aqq;
                let new_qq = s * s * app + 2.0 * c * s * mag + c * c * aqq;
                a[(p, p)] = Complex64::new(new_pp, 0.0);
                a[(q, q)] = Complex64::new(new_qq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let resid = off(&a);
    if resid > 1e-12 * scale * n as f64 {
        return Err(MatError::NoConvergence(resid));
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}

/// Expectation value Tr(ρ op).
pub fn expect(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<Complex64, MatError> {
    if rho.rows != op.cols || rho.cols != op.rows {
        return Err(MatError::DimMismatch("expectation value"));
    }
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..rho.rows {
        for k in 0..rho.cols {
            tr += rho[(i, k)] * op[(k, i)];
        }
    }
    Ok(tr)
}
