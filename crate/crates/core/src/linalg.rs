//! Exact linear algebra over the integers, the rationals and prime fields.
//!
//! Matrices are dense and row-major. Integer work (Smith normal form, lattice
//! kernels, integral solving) uses arbitrary-precision integers throughout;
//! field work uses Gauss-Jordan elimination on exact rationals or residues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Every coefficient in the crate is an exact rational. Integer and prime-field
/// values are rationals with denominator one, residues living in `[0, p)`.
pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value {value} is not an element of {ring}")]
    NotInRing { value: String, ring: Ring },
    #[error("{0} is not a field")]
    NotAField(Ring),
}

/// Coefficient ring for modules and chain complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    Prime(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "Z" | "ZZ" | "int" | "integers" => Ok(Ring::Integers),
            "Q" | "QQ" | "rat" | "rationals" => Ok(Ring::Rationals),
            _ => {
                let digits = t
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| t.strip_prefix("GF"))
                    .or_else(|| t.strip_prefix("F"))
                    .ok_or_else(|| format!("unknown ring `{s}` (expected Z, Q or GF(p))"))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| format!("unknown ring `{s}` (expected Z, Q or GF(p))"))?;
                if crate::group::is_prime(p) {
                    Ok(Ring::Prime(p))
                } else {
                    Err(format!("{p} is not prime"))
                }
            }
        }
    }
}

impl Ring {
    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Maps a rational into the ring, reducing residues for prime fields.
    pub fn element(self, x: &Scalar) -> Result<Scalar, LinalgError> {
        match self {
            Ring::Rationals => Ok(x.clone()),
            Ring::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(LinalgError::NotInRing {
                        value: x.to_string(),
                        ring: self,
                    })
                }
            }
            Ring::Prime(p) => {
                let pb = BigInt::from(p);
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(LinalgError::NotInRing {
                        value: x.to_string(),
                        ring: self,
                    });
                }
                let inv = mod_inverse(den.to_u64().unwrap(), p);
                let num = x.numer().mod_floor(&pb);
                let v = (num * BigInt::from(inv)).mod_floor(&pb);
                Ok(BigRational::from_integer(v))
            }
        }
    }

    pub fn from_int(self, v: i64) -> Scalar {
        self.element(&BigRational::from_integer(BigInt::from(v)))
            .expect("integers embed in every ring")
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(self) -> Scalar {
        Scalar::one()
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    fn reduce(self, x: Scalar) -> Scalar {
        match self {
            Ring::Prime(p) => BigRational::from_integer(x.to_integer().mod_floor(&BigInt::from(p))),
            _ => x,
        }
    }

    /// Re-expresses every entry of a matrix in this ring.
    pub fn matrix(self, m: &Matrix<Scalar>) -> Result<Matrix<Scalar>, LinalgError> {
        let data = m
            .data
            .iter()
            .map(|x| self.element(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix {
            rows: m.rows,
            cols: m.cols,
            data,
        })
    }

    pub fn mat_mul(self, a: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Matrix<Scalar> {
        assert_eq!(a.cols, b.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if !y.is_zero() {
                        let cur = out.get(i, j) + x * y;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out.map_in_place(|x| self.reduce(x));
        out
    }

    pub fn mat_add(self, a: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Matrix<Scalar> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| self.add(x, y))
            .collect();
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data,
        }
    }

    pub fn mat_sub(self, a: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Matrix<Scalar> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| self.sub(x, y))
            .collect();
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data,
        }
    }

    pub fn mat_vec(self, a: &Matrix<Scalar>, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let c = a.get(i, j);
                    if !c.is_zero() && !x.is_zero() {
                        acc += c * x;
                    }
                }
                self.reduce(acc)
            })
            .collect()
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, c).inspect(|m| {
            debug_assert_eq!(m.rows, r);
        })
    }

    /// Like [`Matrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Sub-matrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn map_in_place<F: FnMut(T) -> T>(&mut self, mut f: F) {
        for x in self.data.iter_mut() {
            let v = std::mem::replace(x, x.clone());
            *x = f(v);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Matrix::zeros(rows, cols);
        for (src, r0, c0) in [
            (a, 0, 0),
            (b, 0, a.cols),
            (c, a.rows, 0),
            (d, a.rows, a.cols),
        ] {
            for i in 0..src.rows {
                for j in 0..src.cols {
                    m.set(r0 + i, c0 + j, src.get(i, j).clone());
                }
            }
        }
        m
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.get(k, j);
                    if !y.is_zero() {
                        let v = out.get(i, j) + x * y;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn to_scalar(&self) -> Matrix<Scalar> {
        self.map(|x| BigRational::from_integer(x.clone()))
    }
}

/// `A = U · D · V` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | ⋯`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Row transform with `P · A · Q = D`; `P = U⁻¹`.
    pub p: IntMatrix,
    /// Column transform with `P · A · Q = D`; `Q = V⁻¹`.
    pub q: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Tracks `P · A · Q = D` together with the inverses of `P` and `Q`.
struct SmithWork {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl SmithWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// row_i -= f · row_t
    fn row_axpy(&mut self, i: usize, t: usize, f: &BigInt) {
        for j in 0..self.a.cols {
            let v = self.a.get(i, j) - f * self.a.get(t, j);
            self.a.set(i, j, v);
        }
        for j in 0..self.p.cols {
            let v = self.p.get(i, j) - f * self.p.get(t, j);
            self.p.set(i, j, v);
        }
        for r in 0..self.p_inv.rows {
            let v = self.p_inv.get(r, t) + f * self.p_inv.get(r, i);
            self.p_inv.set(r, t, v);
        }
    }

    /// col_j -= f · col_t
    fn col_axpy(&mut self, j: usize, t: usize, f: &BigInt) {
        for i in 0..self.a.rows {
            let v = self.a.get(i, j) - f * self.a.get(i, t);
            self.a.set(i, j, v);
        }
        for i in 0..self.q.rows {
            let v = self.q.get(i, j) - f * self.q.get(i, t);
            self.q.set(i, j, v);
        }
        for c in 0..self.q_inv.cols {
            let v = self.q_inv.get(t, c) + f * self.q_inv.get(j, c);
            self.q_inv.set(t, c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols {
            let v = -self.a.get(i, j);
            self.a.set(i, j, v);
        }
        for j in 0..self.p.cols {
            let v = -self.p.get(i, j);
            self.p.set(i, j, v);
        }
        for r in 0..self.p_inv.rows {
            let v = -self.p_inv.get(r, i);
            self.p_inv.set(r, i, v);
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut w = SmithWork {
        a: a.clone(),
        p: IntMatrix::identity(m),
        p_inv: IntMatrix::identity(m),
        q: IntMatrix::identity(n),
        q_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = w.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !w.a.get(i, t).is_zero() {
                    let f = w.a.get(i, t).div_floor(w.a.get(t, t));
                    w.row_axpy(i, t, &f);
                    if !w.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !w.a.get(t, j).is_zero() {
                    let f = w.a.get(t, j).div_floor(w.a.get(t, t));
                    w.col_axpy(j, t, &f);
                    if !w.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remainder in the pivot row/column onto the diagonal
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = w.a.get(i, t);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = w.a.get(t, j);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a.get(t, t).clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    // row_t += row_i
                    w.row_axpy(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition {
        u: w.p_inv,
        d: w.a,
        v: w.q_inv,
        p: w.p,
        q: w.q,
        rank: t,
    }
}

/// Basis of the integer kernel `{x : A·x = 0}` in Hermite (row echelon) form,
/// leading entries positive. Empty iff the kernel is trivial.
pub fn hermite_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let basis: Vec<Vec<BigInt>> = (snf.rank..a.cols).map(|j| snf.q.column(j)).collect();
    hermite_rows(basis)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
pub fn hermite_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut rows = rows;
    let mut out_rank = 0;
    for col in 0..n {
        if out_rank == rows.len() {
            break;
        }
        // Euclid on column `col` among rows out_rank..
        loop {
            let mut best: Option<usize> = None;
            for r in out_rank..rows.len() {
                if !rows[r][col].is_zero()
                    && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            rows.swap(out_rank, b);
            let mut done = true;
            for r in out_rank + 1..rows.len() {
                if !rows[r][col].is_zero() {
                    let f = rows[r][col].div_floor(&rows[out_rank][col]);
                    let pivot_row = rows[out_rank].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                    if !rows[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if out_rank < rows.len() && !rows[out_rank][col].is_zero() {
            if rows[out_rank][col].is_negative() {
                for x in rows[out_rank].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = rows[out_rank].clone();
            for r in 0..out_rank {
                let f = rows[r][col].div_floor(&pivot_row[col]);
                if !f.is_zero() {
                    for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            out_rank += 1;
        }
    }
    rows.truncate(out_rank);
    rows
}

/// Integral solution of `A·x = b`, or `None` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows,
            b.len()
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.p.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let d = snf.d.get(i, i);
            if !ci.is_multiple_of(d) {
                return Ok(None);
            }
            y[i] = ci / d;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.q.mul_vec(&y)))
}

/// Exact solution of `A·x = b` over `ring`, or `None` (no solution).
pub fn solve_linear(
    a: &Matrix<Scalar>,
    b: &[Scalar],
    ring: Ring,
) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows,
            b.len()
        )));
    }
    match ring {
        Ring::Integers => {
            let ai = to_int_matrix(a, ring)?;
            let bi = b
                .iter()
                .map(|x| ring.element(x).map(|v| v.to_integer()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(solve_integer(&ai, &bi)?
                .map(|x| x.into_iter().map(BigRational::from_integer).collect()))
        }
        Ring::Rationals => {
            let f = Rationals;
            let am = a.map(|x| x.clone());
            let bm = b.to_vec();
            Ok(field_solve(&f, &am, &bm))
        }
        Ring::Prime(p) => {
            let f = PrimeField(p);
            let am = to_residues(a, p)?;
            let bm = b
                .iter()
                .map(|x| residue(x, p))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(field_solve(&f, &am, &bm).map(|x| {
                x.into_iter()
                    .map(|v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            }))
        }
    }
}

/// Rank over a field, or over ℤ (the free rank of the column space).
pub fn rank(a: &Matrix<Scalar>, ring: Ring) -> Result<usize, LinalgError> {
    match ring {
        Ring::Integers => Ok(smith_normal_form(&to_int_matrix(a, ring)?).rank),
        Ring::Rationals => Ok(field_rref(&Rationals, a.clone()).1.len()),
        Ring::Prime(p) => Ok(field_rref(&PrimeField(p), to_residues(a, p)?).1.len()),
    }
}

/// Basis of the kernel of `A` over a field.
pub fn kernel_basis(a: &Matrix<Scalar>, ring: Ring) -> Result<Vec<Vec<Scalar>>, LinalgError> {
    match ring {
        Ring::Integers => Ok(hermite_kernel(&to_int_matrix(a, ring)?)
            .into_iter()
            .map(|v| v.into_iter().map(BigRational::from_integer).collect())
            .collect()),
        Ring::Rationals => Ok(field_kernel(&Rationals, a.clone())),
        Ring::Prime(p) => Ok(field_kernel(&PrimeField(p), to_residues(a, p)?)
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect()),
    }
}

/// Indices of pivot columns after row reduction over a field; the columns of `A`
/// at these indices form a basis of its column space.
pub fn pivot_columns(a: &Matrix<Scalar>, ring: Ring) -> Result<Vec<usize>, LinalgError> {
    match ring {
        Ring::Integers => Err(LinalgError::NotAField(ring)),
        Ring::Rationals => Ok(field_rref(&Rationals, a.clone()).1),
        Ring::Prime(p) => Ok(field_rref(&PrimeField(p), to_residues(a, p)?).1),
    }
}

pub fn to_int_matrix(a: &Matrix<Scalar>, ring: Ring) -> Result<IntMatrix, LinalgError> {
    let data = a
        .data
        .iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(LinalgError::NotInRing {
                    value: x.to_string(),
                    ring,
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix {
        rows: a.rows,
        cols: a.cols,
        data,
    })
}

fn residue(x: &Scalar, p: u64) -> Result<u64, LinalgError> {
    Ring::Prime(p)
        .element(x)
        .map(|v| v.to_integer().to_u64().expect("residue fits in u64"))
}

fn to_residues(a: &Matrix<Scalar>, p: u64) -> Result<Matrix<u64>, LinalgError> {
    let data = a
        .data
        .iter()
        .map(|x| residue(x, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix {
        rows: a.rows,
        cols: a.cols,
        data,
    })
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

trait Field {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
}

struct Rationals;

impl Field for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

struct PrimeField(u64);

impl Field for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inverse(*a, self.0)
    }
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
fn field_rref<F: Field>(f: &F, mut a: Matrix<F::E>) -> (Matrix<F::E>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, pr);
        let inv = f.inv(a.get(r, c));
        for j in c..a.cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                let t = f.mul(&factor, a.get(r, j));
                let v = f.sub(a.get(i, j), &t);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn field_solve<F: Field>(f: &F, a: &Matrix<F::E>, b: &[F::E]) -> Option<Vec<F::E>> {
    let n = a.cols;
    let mut aug = Matrix::filled(a.rows, n + 1, f.zero());
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let (red, pivots) = field_rref(f, aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![f.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red.get(r, n).clone();
    }
    Some(x)
}

fn field_kernel<F: Field>(f: &F, a: Matrix<F::E>) -> Vec<Vec<F::E>> {
    let n = a.cols;
    let (red, pivots) = field_rref(f, a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(r, fc));
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> Scalar {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check_snf(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&s.d).mul(&s.v), *a);
        assert_eq!(s.p.mul(a).mul(&s.q), s.d);
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_zero_matrix() {
        let s = check_snf(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_single_entry() {
        let s = check_snf(&im(&[vec![2]]));
        assert_eq!(s.d, im(&[vec![2]]));
    }

    #[test]
    fn snf_coprime_diagonal() {
        let s = check_snf(&im(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), bi(&[1, 6]));
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let s = check_snf(&im(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.invariant_factors(), bi(&[2, 6, 12]));
    }

    #[test]
    fn kernel_examples() {
        assert!(hermite_kernel(&IntMatrix::identity(3)).is_empty());
        assert_eq!(hermite_kernel(&im(&[vec![1, 1]])), vec![bi(&[1, -1])]);
        assert_eq!(hermite_kernel(&im(&[vec![2, -4]])), vec![bi(&[2, 1])]);
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3).to_scalar();
        let b = vec![q(3, 1), q(-1, 1), q(7, 1)];
        assert_eq!(
            solve_linear(&id, &b, Ring::Integers).unwrap(),
            Some(b.clone())
        );
        let two = im(&[vec![2]]).to_scalar();
        let one = vec![q(1, 1)];
        assert_eq!(solve_linear(&two, &one, Ring::Integers).unwrap(), None);
        assert_eq!(
            solve_linear(&two, &one, Ring::Rationals).unwrap(),
            Some(vec![q(1, 2)])
        );
        assert_eq!(
            solve_linear(&two, &one, Ring::Prime(3)).unwrap(),
            Some(vec![q(2, 1)])
        );
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = IntMatrix::identity(2).to_scalar();
        assert!(matches!(
            solve_linear(&a, &[q(1, 1)], Ring::Rationals),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_depends_on_ring() {
        let a = im(&[vec![2, 0], vec![0, 3]]).to_scalar();
        assert_eq!(rank(&a, Ring::Rationals).unwrap(), 2);
        assert_eq!(rank(&a, Ring::Prime(2)).unwrap(), 1);
        assert_eq!(rank(&a, Ring::Prime(3)).unwrap(), 1);
        assert_eq!(rank(&a, Ring::Prime(5)).unwrap(), 2);
    }

    #[test]
    fn prime_field_reduction() {
        let r = Ring::Prime(5);
        assert_eq!(r.element(&q(1, 2)).unwrap(), q(3, 1));
        assert_eq!(r.element(&q(-1, 1)).unwrap(), q(4, 1));
        assert!(r.element(&q(1, 5)).is_err());
        assert!(Ring::Integers.element(&q(1, 2)).is_err());
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integers);
        assert_eq!("Q".parse::<Ring>().unwrap(), Ring::Rationals);
        assert_eq!("GF(3)".parse::<Ring>().unwrap(), Ring::Prime(3));
        assert_eq!("GF2".parse::<Ring>().unwrap(), Ring::Prime(2));
        assert!("GF(4)".parse::<Ring>().is_err());
    }
}
