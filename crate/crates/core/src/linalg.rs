//! Exact linear algebra over a cyclotomic field.
//!
//! Dense [`Matrix`] values cover maps of size `n <= 64`. Solving is done by an incremental
//! sparse reduced-row-echelon form ([`LinearSystem`]) so that the heavily overdetermined but
//! very sparse systems produced by tensor identities never materialize as dense matrices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{HopfError, Result};

pub type Vector = Vec<CycloNum>;

pub fn zero_vec(field: &CycloField, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vec(field: &CycloField, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[CycloNum]) -> bool {
    v.iter().all(CycloNum::is_zero)
}

pub fn scale_vec(c: &CycloNum, v: &[CycloNum]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn add_vec(a: &[CycloNum], b: &[CycloNum]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[CycloNum], b: &[CycloNum]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [CycloNum], c: &CycloNum, v: &[CycloNum]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn dot(a: &[CycloNum], b: &[CycloNum]) -> CycloNum {
    let mut acc = a[0].field().zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// `c * v` where `c` is the unique scalar with `w = c * v`, if any.
pub fn proportionality(w: &[CycloNum], v: &[CycloNum]) -> Option<CycloNum> {
    let pivot = v.iter().position(|x| !x.is_zero())?;
    let c = w[pivot].try_div(&v[pivot]).ok()?;
    w.iter()
        .zip(v)
        .all(|(a, b)| *a == &c * b)
        .then_some(c)
}

/// Dense row-major matrix. As a linear map `f(e_j)` is column `j`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = String;

    fn try_from(m: RawMatrix) -> std::result::Result<Matrix, String> {
        if m.data.len() != m.rows * m.cols {
            return Err(format!("matrix {}x{} has {} entries", m.rows, m.cols, m.data.len()));
        }
        Ok(Matrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data,
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &CycloField, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &CycloField, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn diagonal(diag: &[CycloNum]) -> Matrix {
        let n = diag.len();
        let mut m = Matrix::zeros(diag[0].field(), n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[Vector]) -> Matrix {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &CycloField {
        self.data[0].field()
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
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

    pub fn apply(&self, v: &[CycloNum]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let field = self.field().clone();
        let mut out = zero_vec(&field, self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    /// Row vector times matrix: the functional `f` composed with this map.
    pub fn apply_left(&self, f: &[CycloNum]) -> Vector {
        assert_eq!(f.len(), self.rows, "functional length");
        let field = self.field().clone();
        let mut out = zero_vec(&field, self.cols);
        for (i, x) in f.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(x * a);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension");
        let field = self.field().clone();
        let mut out = Matrix::zeros(&field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add_vec(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vec(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale_vec(c, &self.data),
        }
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.field(), self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloNum::is_zero)
    }

    /// Kronecker product; the basis of the result is row-major in `(self index, other index)`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let field = self.field().clone();
        let mut out = Matrix::zeros(&field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn embed(&self, target: &CycloField) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.embed(target))
                .collect::<Result<_>>()?,
        })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(HopfError::ShapeError(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let field = self.field().clone();
        let mut a: Vec<Vector> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vector> = (0..n).map(|i| unit_vec(&field, n, i)).collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(HopfError::SingularMap)?;
            a.swap(col, p);
            inv.swap(col, p);
            let pinv = a[col][col].inv()?;
            a[col] = scale_vec(&pinv, &a[col]);
            inv[col] = scale_vec(&pinv, &inv[col]);
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let c = -&a[r][col];
                let (prow, pinvrow) = (a[col].clone(), inv[col].clone());
                axpy(&mut a[r], &c, &prow);
                axpy(&mut inv[r], &c, &pinvrow);
            }
        }
        Ok(Matrix::from_rows(inv))
    }

    pub fn rank(&self) -> usize {
        let mut span = Span::new(self.field(), self.cols);
        for i in 0..self.rows {
            span.insert(self.row(i));
        }
        span.rank()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut sys = LinearSystem::new(self.field(), self.cols);
        for i in 0..self.rows {
            let row: Vec<(usize, CycloNum)> = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect();
            sys.add_equation(&row, &self.field().zero())
                .expect("homogeneous system is consistent");
        }
        sys.solution().1
    }
}

type SparseRow = BTreeMap<usize, CycloNum>;

fn sub_scaled(row: &mut SparseRow, rhs: &mut CycloNum, c: &CycloNum, p: &SparseRow, prhs: &CycloNum) {
    for (&k, v) in p {
        let delta = c * v;
        match row.get_mut(&k) {
            Some(x) => {
                *x -= &delta;
                if x.is_zero() {
                    row.remove(&k);
                }
            }
            None => {
                row.insert(k, -delta);
            }
        }
    }
    if !prhs.is_zero() {
        *rhs -= &(c * prhs);
    }
}

/// Incremental exact solver for affine systems `sum_j a_j x_j = b` in reduced row echelon form.
#[derive(Clone)]
pub struct LinearSystem {
    field: CycloField,
    nvars: usize,
    /// pivot column -> (row with unit pivot and no other pivot columns, rhs)
    pivots: BTreeMap<usize, (SparseRow, CycloNum)>,
}

/// Returned when an added equation contradicts the previous ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent;

impl LinearSystem {
    pub fn new(field: &CycloField, nvars: usize) -> LinearSystem {
        LinearSystem {
            field: field.clone(),
            nvars,
            pivots: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_dim(&self) -> usize {
        self.nvars - self.pivots.len()
    }

    fn reduce(&self, row: &mut SparseRow, rhs: &mut CycloNum) {
        let hits: Vec<usize> = row
            .keys()
            .copied()
            .filter(|k| self.pivots.contains_key(k))
            .collect();
        for k in hits {
            if let Some(c) = row.get(&k).cloned() {
                let (p, prhs) = &self.pivots[&k];
                sub_scaled(row, rhs, &c, p, prhs);
            }
        }
    }

    /// Adds one equation; `Ok(true)` when it raised the rank.
    pub fn add_equation(
        &mut self,
        coeffs: &[(usize, CycloNum)],
        rhs: &CycloNum,
    ) -> std::result::Result<bool, Inconsistent> {
        let mut row = SparseRow::new();
        for (j, c) in coeffs {
            assert!(*j < self.nvars, "variable index out of range");
            if c.is_zero() {
                continue;
            }
            match row.get_mut(j) {
                Some(x) => {
                    *x += c;
                    if x.is_zero() {
                        row.remove(j);
                    }
                }
                None => {
                    row.insert(*j, c.clone());
                }
            }
        }
        let mut rhs = rhs.clone();
        self.reduce(&mut row, &mut rhs);
        let Some((&pc, pv)) = row.iter().next() else {
            return if rhs.is_zero() { Ok(false) } else { Err(Inconsistent) };
        };
        let pinv = pv.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &pinv;
        }
        rhs = &rhs * &pinv;
        let others: Vec<usize> = self
            .pivots
            .iter()
            .filter(|(_, (r, _))| r.contains_key(&pc))
            .map(|(&k, _)| k)
            .collect();
        for k in others {
            let (mut r, mut b) = self.pivots.remove(&k).unwrap();
            let c = r.get(&pc).cloned().unwrap();
            sub_scaled(&mut r, &mut b, &c, &row, &rhs);
            self.pivots.insert(k, (r, b));
        }
        self.pivots.insert(pc, (row, rhs));
        Ok(true)
    }

    /// Whether `x` satisfies every equation added so far.
    pub fn satisfied_by(&self, x: &[CycloNum]) -> bool {
        self.pivots.values().all(|(row, rhs)| {
            let mut acc = self.field.zero();
            for (&j, c) in row {
                acc += &(c * &x[j]);
            }
            acc == *rhs
        })
    }

    /// `(particular solution with free variables zero, basis of the homogeneous solutions)`.
    pub fn solution(&self) -> (Vector, Vec<Vector>) {
        let mut part = zero_vec(&self.field, self.nvars);
        for (&p, (_, rhs)) in &self.pivots {
            part[p] = rhs.clone();
        }
        let mut dirs = Vec::new();
        for f in 0..self.nvars {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = zero_vec(&self.field, self.nvars);
            v[f] = self.field.one();
            for (&p, (row, _)) in &self.pivots {
                if let Some(c) = row.get(&f) {
                    v[p] = -c;
                }
            }
            dirs.push(v);
        }
        (part, dirs)
    }
}

/// A subspace of `K^n` kept in echelon form for membership tests.
#[derive(Clone)]
pub struct Span {
    sys: LinearSystem,
}

impl Span {
    pub fn new(field: &CycloField, n: usize) -> Span {
        Span {
            sys: LinearSystem::new(field, n),
        }
    }

    pub fn from_vectors(field: &CycloField, n: usize, vs: &[Vector]) -> Span {
        let mut s = Span::new(field, n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn sparse(v: &[CycloNum]) -> Vec<(usize, CycloNum)> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    /// Inserts `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &[CycloNum]) -> bool {
        let zero = self.sys.field.zero();
        self.sys
            .add_equation(&Self::sparse(v), &zero)
            .expect("homogeneous insert")
    }

    pub fn contains(&self, v: &[CycloNum]) -> bool {
        let mut row: SparseRow = Self::sparse(v).into_iter().collect();
        let mut rhs = self.sys.field.zero();
        self.sys.reduce(&mut row, &mut rhs);
        row.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.sys.nvars
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(f: &CycloField, v: &[i64]) -> Vector {
        v.iter().map(|&x| f.int(x)).collect()
    }

    #[test]
    fn inverse_multiplies_back() {
        let f = CycloField::new(4);
        let i = f.zeta_pow(1);
        let m = Matrix::from_rows(vec![
            vec![f.int(2), i.clone(), f.zero()],
            vec![f.zero(), f.one(), f.int(3)],
            vec![i.clone(), f.zero(), f.one()],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let sing = Matrix::from_rows(vec![q(&f, &[1, 2]), q(&f, &[2, 4])]);
        assert!(matches!(sing.inverse(), Err(HopfError::SingularMap)));
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn nullspace_matches_brute_force_check() {
        let f = CycloField::new(1);
        let m = Matrix::from_rows(vec![q(&f, &[1, 1, 0, 2]), q(&f, &[0, 1, 1, 1]), q(&f, &[1, 2, 1, 3])]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.apply(v)));
        }
        assert_eq!(Matrix::from_columns(&ns).rank(), 2);
    }

    #[test]
    fn affine_system_and_inconsistency() {
        let f = CycloField::new(3);
        let mut s = LinearSystem::new(&f, 3);
        let z = f.zeta_pow(1);
        assert_eq!(s.add_equation(&[(0, f.one()), (1, z.clone())], &f.int(2)), Ok(true));
        assert_eq!(s.add_equation(&[(1, f.one())], &f.one()), Ok(true));
        assert_eq!(s.add_equation(&[(0, f.int(2)), (1, f.int(2))], &(f.int(4) - &(&z.scale_int(2) - &f.int(2)))), Ok(false));
        let (p, d) = s.solution();
        assert_eq!(d.len(), 1);
        assert!(s.satisfied_by(&p));
        assert_eq!(p[0], &f.int(2) - &z);
        assert_eq!(s.add_equation(&[(1, f.one())], &f.int(5)), Err(Inconsistent));
    }

    #[test]
    fn span_membership() {
        let f = CycloField::new(1);
        let s = Span::from_vectors(&f, 3, &[q(&f, &[1, 1, 0]), q(&f, &[0, 1, 1])]);
        assert!(s.contains(&q(&f, &[1, 2, 1])));
        assert!(!s.contains(&q(&f, &[1, 0, 0])));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn kron_and_pow() {
        let f = CycloField::new(4);
        let a = Matrix::diagonal(&[f.one(), f.zeta_pow(1)]);
        assert!(a.pow(4).is_identity());
        assert!(!a.pow(2).is_identity());
        let k = a.kron(&a);
        assert_eq!(k.get(3, 3), &f.int(-1));
        assert_eq!(k.rows(), 4);
    }
}
