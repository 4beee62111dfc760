//! Dense matrices over an exact field, with the elimination-based solvers
//! the rest of the crate is built on.

use std::fmt;

use super::scalar::{FieldTag, Scalar};
use super::subspace::Subspace;
use super::ExactError;

/// A dense `rows x cols` matrix with entries in a single exact field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    tag: FieldTag,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>, tag: FieldTag) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        for s in &data {
            assert!(s.tag() == tag, "field mismatch: {} in {} matrix", s.tag(), tag);
        }
        Matrix { rows, cols, data, tag }
    }

    pub fn from_fn(rows: usize, cols: usize, tag: FieldTag, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data, tag)
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64(rows: &[&[i64]], tag: FieldTag) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in *row {
                data.push(Scalar::from_integer(x, tag));
            }
        }
        Matrix::new(r, c, data, tag)
    }

    pub fn zero(rows: usize, cols: usize, tag: FieldTag) -> Self {
        Matrix::from_fn(rows, cols, tag, |_, _| Scalar::zero(tag))
    }

    pub fn identity(n: usize, tag: FieldTag) -> Self {
        Matrix::from_fn(n, n, tag, |i, j| {
            if i == j {
                Scalar::one(tag)
            } else {
                Scalar::zero(tag)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(v.tag() == self.tag, "field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix::from_fn(self.rows, self.cols, self.tag, |i, j| self.at(i, j).add(other.at(i, j)))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.tag, |i, j| self.at(i, j).neg())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.tag, |i, j| self.at(i, j).mul(c))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        Matrix::from_fn(self.rows, other.cols, self.tag, |i, j| {
            let mut acc = Scalar::zero(self.tag);
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.at(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.tag);
                for k in 0..self.cols {
                    let a = self.at(i, k);
                    if !a.is_zero() && !v[k].is_zero() {
                        acc = acc.add(&a.mul(&v[k]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.tag, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut acc = Scalar::zero(self.tag);
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "power of non-square matrix");
        let mut acc = Matrix::identity(self.rows, self.tag);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Commutator `self*other - other*self`.
    pub fn bracket(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Rank-one matrix `v * phi^T`.
    pub fn outer(v: &[Scalar], phi: &[Scalar], tag: FieldTag) -> Matrix {
        Matrix::from_fn(v.len(), phi.len(), tag, |i, j| v[i].mul(&phi[j]))
    }

    /// Row-major flattening, the coordinate chart for spaces of matrices.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vectorized(rows: usize, cols: usize, v: Vec<Scalar>, tag: FieldTag) -> Matrix {
        Matrix::new(rows, cols, v, tag)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv();
            for j in col..self.cols {
                let v = self.at(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j).sub(&factor.mul(self.at(row, j)));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Kernel `{v : Mv = 0}` as a canonical subspace of the column space.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis_cols = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(self.tag); self.cols];
            v[free] = Scalar::one(self.tag);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m.at(r, free).neg();
            }
            basis_cols.push(v);
        }
        Subspace::from_column_vectors(self.cols, &basis_cols, self.tag)
    }

    /// Solves `M x = b`. Returns a particular solution (free variables set to
    /// zero) together with the kernel, or `None` when the system is
    /// inconsistent.
    pub fn solve_affine(&self, b: &[Scalar]) -> Option<(Vec<Scalar>, Subspace)> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, self.tag, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(self.tag); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some((x, self.kernel()))
    }

    /// Coefficients `[1, c1, ..., cn]` of `x^n + c1 x^(n-1) + ... + cn`,
    /// computed by the Faddeev-LeVerrier recursion. Needs `1..=n` invertible
    /// in the field, so small prime fields with `p <= n` are rejected.
    pub fn char_poly(&self) -> Result<Vec<Scalar>, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if let FieldTag::Prime(p) = self.tag {
            if (p as usize) <= n {
                return Err(ExactError::SmallCharacteristic { modulus: p, size: n });
            }
        }
        let mut coeffs = vec![Scalar::one(self.tag)];
        let mut m = Matrix::zero(n, n, self.tag);
        let mut c = Scalar::one(self.tag);
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{k-1} I);  c_k = -tr(M_k)/k
            let shifted = {
                let mut t = m.clone();
                for i in 0..n {
                    let v = t.at(i, i).add(&c);
                    t.set(i, i, v);
                }
                t
            };
            m = self.mul(&shifted);
            c = m.trace().neg().div(&Scalar::from_integer(k as i64, self.tag));
            coeffs.push(c.clone());
        }
        Ok(coeffs)
    }

    /// True iff `M^n = 0` for an `n x n` matrix.
    pub fn is_nilpotent(&self) -> Result<bool, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.pow(self.rows).is_zero())
    }

    /// Monic minimal polynomial over Q, low degree first.
    pub fn min_poly(&self) -> Result<Vec<Scalar>, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.tag != FieldTag::Rational {
            return Err(ExactError::RequiresRational);
        }
        let n = self.rows;
        let mut powers = vec![Matrix::identity(n, self.tag)];
        for _ in 0..n {
            powers.push(powers.last().unwrap().mul(self));
        }
        for deg in 1..=n {
            // Try to write M^deg as a combination of lower powers.
            let cols = Matrix::from_fn(n * n, deg, self.tag, |i, j| powers[j].data[i].clone());
            if let Some((coeffs, _)) = cols.solve_affine(&powers[deg].vectorize()) {
                let mut poly: Vec<Scalar> = coeffs.iter().map(Scalar::neg).collect();
                poly.push(Scalar::one(self.tag));
                return Ok(poly);
            }
        }
        unreachable!("Cayley-Hamilton bounds the minimal polynomial degree")
    }

    /// True iff the minimal polynomial is squarefree, i.e. the matrix is
    /// diagonalizable over the algebraic closure. Defined over Q only.
    pub fn is_semisimple(&self) -> Result<bool, ExactError> {
        let mu = super::poly::Poly::new(self.min_poly()?);
        let g = mu.gcd(&mu.derivative());
        Ok(g.degree() == 0)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Factor-once solver for `C x = rhs` with many right-hand sides.
///
/// Stores the row transform that reduces the coefficient matrix, so each
/// solve is a single matrix-vector product plus back-substitution.
#[derive(Clone)]
pub struct PreparedSolver {
    reduced: Matrix,
    transform: Matrix,
    pivots: Vec<usize>,
    kernel: Vec<Vec<Scalar>>,
    tag: FieldTag,
}

impl PreparedSolver {
    pub fn new(coeff: &Matrix) -> Self {
        let m = coeff.rows();
        let tag = coeff.tag();
        let mut aug = Matrix::from_fn(m, coeff.cols() + m, tag, |i, j| {
            if j < coeff.cols() {
                coeff.at(i, j).clone()
            } else if j - coeff.cols() == i {
                Scalar::one(tag)
            } else {
                Scalar::zero(tag)
            }
        });
        let pivots = aug.rref();
        // Rows whose C-part vanishes pick up pivots inside the identity
        // block; only the C-block pivots matter for back-substitution.
        let pivots: Vec<usize> = pivots.into_iter().filter(|&c| c < coeff.cols()).collect();
        let reduced = Matrix::from_fn(m, coeff.cols(), tag, |i, j| aug.at(i, j).clone());
        let transform = Matrix::from_fn(m, m, tag, |i, j| aug.at(i, coeff.cols() + j).clone());
        let kernel_sub = coeff.kernel();
        let kernel = (0..kernel_sub.dim())
            .map(|k| kernel_sub.basis_column(k))
            .collect();
        PreparedSolver { reduced, transform, pivots, kernel, tag }
    }

    pub fn kernel_basis(&self) -> &[Vec<Scalar>] {
        &self.kernel
    }

    /// One particular solution with free variables zero, or `None` when
    /// inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        let t = self.transform.mul_vec(rhs);
        let rank = self.pivots.len();
        if t[rank..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(self.tag); self.reduced.cols()];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = t[r].clone();
        }
        Some(x)
    }
}
