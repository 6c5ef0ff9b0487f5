//! Dense square matrices over GF(q).
//!
//! Storage is row-major and 0-based; documentation and messages talk about
//! entries `m_{ij}` with 1-based indices.

mod io;
pub mod linalg;
mod polys;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::fields::{Fe, Field, FieldError, Poly, PolyError};

pub use io::parse_labelled_blocks;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("matrix is singular")]
    Singular,
    #[error("direct sum of an empty list")]
    EmptyDirectSum,
    #[error("companion matrix needs order at least 1 and a monic polynomial of that degree")]
    BadCompanion,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix over {:?} [", self.field)?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.0.to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

/// Last column `(u_0, ..., u_{n-1})` of a companion matrix. The matrix has
/// ones on the subdiagonal and characteristic polynomial
/// `x^n - u_{n-1} x^{n-1} - ... - u_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionSpec {
    pub u: Vec<Fe>,
}

impl CompanionSpec {
    pub fn new(u: Vec<Fe>) -> Result<Self, MatrixError> {
        if u.is_empty() {
            return Err(MatrixError::BadCompanion);
        }
        Ok(CompanionSpec { u })
    }

    pub fn from_poly(f: &Poly) -> Result<Self, MatrixError> {
        match f.degree() {
            Some(d) if d >= 1 && f.is_monic() => {
                let field = f.field();
                Ok(CompanionSpec { u: (0..d).map(|i| field.neg(f.coeff(i))).collect() })
            }
            _ => Err(MatrixError::BadCompanion),
        }
    }

    pub fn order(&self) -> usize {
        self.u.len()
    }

    /// Equals the trace of the companion matrix.
    pub fn top(&self) -> Fe {
        *self.u.last().unwrap()
    }

    pub fn poly(&self, field: &Field) -> Poly {
        let mut c: Vec<Fe> = self.u.iter().map(|&a| field.neg(a)).collect();
        c.push(Fe::ONE);
        Poly::new(field, c)
    }
}

/// Result of attempting to invert a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    Invertible(Matrix),
    /// A nonzero vector `v` with `A v = 0`.
    Singular(Vec<Fe>),
}

impl Matrix {
    pub fn zero(field: &Field, n: usize) -> Matrix {
        Matrix { field: field.clone(), n, data: vec![Fe::ZERO; n * n] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, Fe::ONE)
    }

    pub fn scalar(field: &Field, n: usize, c: Fe) -> Matrix {
        let mut m = Matrix::zero(field, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn diagonal(field: &Field, diag: &[Fe]) -> Matrix {
        let mut m = Matrix::zero(field, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(field: &Field, n: usize, mut f: impl FnMut(usize, usize) -> Fe) -> Matrix {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), n, data }
    }

    /// Row-major entries; `data.len()` must be a perfect square and every
    /// entry must lie in the field.
    pub fn from_vec(field: &Field, n: usize, data: Vec<Fe>) -> Result<Matrix, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::OrderMismatch(n * n, data.len()));
        }
        if let Some(bad) = data.iter().find(|e| e.0 >= field.order()) {
            return Err(FieldError::OutOfRange { value: bad.0 as u64, q: field.order() }.into());
        }
        Ok(Matrix { field: field.clone(), n, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix, MatrixError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(MatrixError::OrderMismatch(n, r.len()));
        }
        Matrix::from_vec(field, n, rows.concat())
    }

    pub fn from_columns(field: &Field, cols: &[Vec<Fe>]) -> Result<Matrix, MatrixError> {
        Ok(Matrix::from_rows(field, cols)?.transpose())
    }

    /// Integers are reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix::from_fn(field, n, |i, j| field.from_int(rows[i][j]))
    }

    pub fn companion(field: &Field, spec: &CompanionSpec) -> Matrix {
        let n = spec.order();
        let mut m = Matrix::zero(field, n);
        for i in 1..n {
            m[(i, i - 1)] = Fe::ONE;
        }
        for (i, &u) in spec.u.iter().enumerate() {
            m[(i, n - 1)] = u;
        }
        m
    }

    /// Companion matrix of a monic polynomial of degree at least 1.
    pub fn companion_of(f: &Poly) -> Result<Matrix, MatrixError> {
        Ok(Matrix::companion(f.field(), &CompanionSpec::from_poly(f)?))
    }

    /// Block-diagonal assembly.
    pub fn direct_sum(blocks: &[Matrix]) -> Result<Matrix, MatrixError> {
        let first = blocks.first().ok_or(MatrixError::EmptyDirectSum)?;
        let field = first.field.clone();
        for b in blocks {
            if b.field != field {
                return Err(MatrixError::FieldMismatch(field.to_string(), b.field.to_string()));
            }
        }
        let n = blocks.iter().map(|b| b.n).sum();
        let mut out = Matrix::zero(&field, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.n;
        }
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Fe>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.n, |i, j| self[(j, i)])
    }

    /// Leading principal `k x k` block.
    pub fn submatrix(&self, start: usize, k: usize) -> Matrix {
        Matrix::from_fn(&self.field, k, |i, j| self[(start + i, start + j)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self[(i, j)] == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    fn check_compatible(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.n != other.n {
            return Err(MatrixError::OrderMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), n: self.n, data })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { field: f.clone(), n: self.n, data })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_compatible(other)?;
        let n = self.n;
        let f = &self.field;
        let mut data = vec![Fe::ZERO; n * n];
        if f.is_prime_field() {
            let p = f.order() as u64;
            let mut acc = vec![0u64; n];
            for i in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                for k in 0..n {
                    let a = self.data[i * n + k].0 as u64;
                    if a == 0 {
                        continue;
                    }
                    let row = &other.data[k * n..(k + 1) * n];
                    for (slot, b) in acc.iter_mut().zip(row) {
                        *slot += a * b.0 as u64;
                    }
                }
                for j in 0..n {
                    data[i * n + j] = Fe((acc[j] % p) as u32);
                }
            }
        } else {
            for i in 0..n {
                for k in 0..n {
                    let a = self.data[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let idx = i * n + j;
                        data[idx] = f.add(data[idx], f.mul(a, other.data[k * n + j]));
                    }
                }
            }
        }
        Ok(Matrix { field: f.clone(), n, data })
    }

    pub fn scalar_mul(&self, c: Fe) -> Matrix {
        let f = &self.field;
        Matrix { field: f.clone(), n: self.n, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// `self + c * Id`
    pub fn add_scalar(&self, c: Fe) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] = self.field.add(m[(i, i)], c);
        }
        m
    }

    /// Square-and-multiply; `A^0 = Id`.
    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn trace(&self) -> Fe {
        (0..self.n).fold(Fe::ZERO, |acc, i| self.field.add(acc, self[(i, i)]))
    }

    /// `M * M = 0`.
    pub fn is_square_zero(&self) -> bool {
        (self * self).is_zero()
    }

    /// `A^q = A`, which over GF(q) is equivalent to diagonalizability.
    pub fn is_diagonalizable(&self) -> bool {
        self.pow(self.field.order() as u64) == *self
    }

    /// Second route: the minimal polynomial is squarefree and splits.
    pub fn is_diagonalizable_via_min_poly(&self) -> bool {
        let mu = self.min_poly();
        mu.is_squarefree() && mu.splits_distinct_linear()
    }

    /// Minimal polynomial equals characteristic polynomial.
    pub fn is_nonderogatory(&self) -> bool {
        self.min_poly().degree() == Some(self.n)
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        let mut acc = Matrix::zero(&self.field, self.n);
        for &c in p.coeffs().iter().rev() {
            acc = (&acc * self).add_scalar(c);
        }
        acc
    }

    pub fn annihilated_by(&self, p: &Poly) -> bool {
        self.eval_poly(p).is_zero()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, self.rows())
    }

    /// Rank plus a basis of the right null space; `rank + basis.len() = n`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Fe>>) {
        let kernel = linalg::kernel(&self.field, self.rows(), self.n);
        (self.n - kernel.len(), kernel)
    }

    pub fn inverse(&self) -> Inversion {
        linalg::invert(self)
    }

    pub fn try_inverse(&self) -> Result<Matrix, MatrixError> {
        match self.inverse() {
            Inversion::Invertible(m) => Ok(m),
            Inversion::Singular(_) => Err(MatrixError::Singular),
        }
    }

    /// `P^{-1} A P`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_compatible(p)?;
        let p_inv = p.try_inverse()?;
        Ok(&(&p_inv * self) * p)
    }

    pub fn char_poly(&self) -> Poly {
        polys::char_poly(self)
    }

    pub fn min_poly(&self) -> Poly {
        polys::min_poly(self)
    }

    /// Monic generator of `{g : g(A) v = 0}`.
    pub fn local_min_poly(&self, v: &[Fe]) -> Poly {
        polys::local_min_poly(self, v)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Fe;

    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix addition")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix subtraction")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix multiplication")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        let f = &self.field;
        Matrix { field: f.clone(), n: self.n, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }
}
