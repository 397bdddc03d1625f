//! Dense exact matrices and the elimination engine behind every rank,
//! kernel and solve in the crate.
//!
//! Forward elimination is fraction-free (Bareiss). Over the rationals each
//! row is first scaled to integers and the elimination runs on `BigInt`;
//! over GF(p) the same code runs on residues, where the exact division is a
//! multiplication by an inverse. Pivots are deterministic: columns are
//! scanned left to right and the first remaining row (in input order) with a
//! nonzero entry becomes the pivot row.
//!
//! Rows are kept sparse during elimination. A row whose entry in the pivot
//! column is zero is only rescaled by Bareiss, so that rescaling is deferred:
//! each row remembers the step at which it was last written and is brought
//! up to date (multiply by the current pivot, divide by the pivot of that
//! step) only when it is touched again.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error};
use crate::scalar::{Field, Residue, Scalar};

pub type Vector = Vec<Scalar>;

/// Dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from a row-major entry list, checking shape and field.
    pub fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, Error> {
        check_dim("matrix entries", rows * cols, entries.len())?;
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    /// Build from explicit rows; every row must have `cols` entries.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vector>) -> Result<Self, Error> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            check_dim("matrix row", cols, r.len())?;
            entries.extend(r);
        }
        Matrix::from_entries(field, n, cols, entries)
    }

    /// Build from columns of equal length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<Self, Error> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            check_dim("matrix column", rows, c.len())?;
            for (i, v) in c.iter().enumerate() {
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, Error> {
        check_dim("matrix-vector product", self.cols, v.len())?;
        let mut out = vec![self.field.zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                o.add_product(self.get(r, c), x);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, Error> {
        check_dim("matrix product", self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.entries[idx].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, Error> {
        check_dim("matrix sum rows", self.rows, other.rows)?;
        check_dim("matrix sum cols", self.cols, other.cols)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, Error> {
        check_dim("matrix difference rows", self.rows, other.rows)?;
        check_dim("matrix difference cols", self.cols, other.cols)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, Error> {
        check_dim("horizontal stack", self.rows, other.rows)?;
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(self.field, self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(m)
    }
}

pub fn zero_vector(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// `acc += s * a`.
pub fn vec_axpy(acc: &mut [Scalar], s: &Scalar, a: &[Scalar]) {
    if s.is_zero() {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        x.add_product(s, y);
    }
}

// ---------------------------------------------------------------------------
// elimination engine

type SparseRow<T> = Vec<(usize, T)>;

trait Ring: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn exact_div(&self, o: &Self) -> Self;
}

impl Ring for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Self {
        if o.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(o);
        debug_assert!(Zero::is_zero(&r), "inexact Bareiss division");
        q
    }
}

impl Ring for Residue {
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
    fn mul(&self, o: &Self) -> Self {
        Residue::mul(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Residue::sub(self, o)
    }
    fn neg(&self) -> Self {
        Residue::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Self {
        Residue::mul(self, &o.inverse())
    }
}

struct Echelon<T> {
    rows: Vec<SparseRow<T>>,
    pivots: Vec<usize>,
    /// Rows that never became pivots. Their entries in the pivoting columns
    /// are all zero; the scale of each row is arbitrary.
    leftover: Vec<SparseRow<T>>,
}

struct LiveRow<T> {
    entries: SparseRow<T>,
    stamp: usize,
}

fn rescale<T: Ring>(row: &mut LiveRow<T>, prev: &[T], step: usize) {
    if row.stamp == step {
        return;
    }
    let num = &prev[step];
    let den = &prev[row.stamp];
    for (_, v) in row.entries.iter_mut() {
        *v = v.mul(num).exact_div(den);
    }
    row.stamp = step;
}

/// Fraction-free forward elimination restricted to pivots in columns
/// `< pivot_cols`.
fn bareiss<T: Ring>(rows: Vec<SparseRow<T>>, pivot_cols: usize, one: T) -> Echelon<T> {
    let mut live: Vec<LiveRow<T>> = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|entries| LiveRow { entries, stamp: 0 })
        .collect();
    let mut prev: Vec<T> = vec![one];
    let mut out = Echelon { rows: Vec::new(), pivots: Vec::new(), leftover: Vec::new() };

    for c in 0..pivot_cols {
        let Some(pi) = live.iter().position(|r| r.entries[0].0 == c) else {
            continue;
        };
        let step = prev.len() - 1;
        let mut pivot_row = live.remove(pi);
        rescale(&mut pivot_row, &prev, step);
        let piv = pivot_row.entries[0].1.clone();

        for row in live.iter_mut() {
            if row.entries[0].0 != c {
                continue;
            }
            rescale(row, &prev, step);
            let a = row.entries[0].1.clone();
            row.entries = combine(&piv, &row.entries, &a, &pivot_row.entries, &prev[step]);
            row.stamp = step + 1;
        }
        live.retain(|r| !r.entries.is_empty());
        prev.push(piv);
        out.pivots.push(c);
        out.rows.push(pivot_row.entries);
    }
    out.leftover = live.into_iter().map(|r| r.entries).collect();
    out
}

/// `(p * x - a * y) / d` on sparse rows, dropping zeros.
fn combine<T: Ring>(p: &T, x: &SparseRow<T>, a: &T, y: &SparseRow<T>, d: &T) -> SparseRow<T> {
    let mut out = Vec::with_capacity(x.len().max(y.len()));
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, p.mul(vx).sub(&a.mul(vy)))
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, p.mul(vx))
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, p.mul(vx))
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, a.mul(vy).neg())
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v.exact_div(d)));
        }
    }
    out
}

fn integer_rows(m: &Matrix, extra: &[Vector]) -> Vec<SparseRow<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let mut row: Vec<(usize, &BigRational)> = Vec::new();
            for (c, v) in m.row(r).iter().enumerate() {
                let q = v.as_rational().expect("rational matrix");
                if !q.is_zero() {
                    row.push((c, q));
                }
            }
            for (k, b) in extra.iter().enumerate() {
                let q = b[r].as_rational().expect("rational vector");
                if !q.is_zero() {
                    row.push((m.cols + k, q));
                }
            }
            let lcm = row.iter().fold(BigInt::one(), |l, (_, q)| l.lcm(q.denom()));
            row.into_iter().map(|(c, q)| (c, q.numer() * (&lcm / q.denom()))).collect()
        })
        .collect()
}

fn residue_rows(m: &Matrix, extra: &[Vector]) -> Vec<SparseRow<Residue>> {
    (0..m.rows)
        .map(|r| {
            let mut row = Vec::new();
            for (c, v) in m.row(r).iter().enumerate() {
                let x = *v.as_residue().expect("prime-field matrix");
                if x.value() != 0 {
                    row.push((c, x));
                }
            }
            for (k, b) in extra.iter().enumerate() {
                let x = *b[r].as_residue().expect("prime-field vector");
                if x.value() != 0 {
                    row.push((m.cols + k, x));
                }
            }
            row
        })
        .collect()
}

fn forward(m: &Matrix, extra: &[Vector]) -> Echelon<Scalar> {
    match m.field {
        Field::Rational => {
            let e = bareiss(integer_rows(m, extra), m.cols, BigInt::one());
            let lift = |rows: Vec<SparseRow<BigInt>>| -> Vec<SparseRow<Scalar>> {
                rows.into_iter()
                    .map(|r| r.into_iter().map(|(c, v)| (c, Scalar::Rational(BigRational::from_integer(v)))).collect())
                    .collect()
            };
            Echelon { pivots: e.pivots, rows: lift(e.rows), leftover: lift(e.leftover) }
        }
        Field::Prime(p) => {
            let e = bareiss(residue_rows(m, extra), m.cols, Residue::new(1, p));
            let lift = |rows: Vec<SparseRow<Residue>>| -> Vec<SparseRow<Scalar>> {
                rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (c, Scalar::Residue(v))).collect()).collect()
            };
            Echelon { pivots: e.pivots, rows: lift(e.rows), leftover: lift(e.leftover) }
        }
    }
}

fn sparse_get(row: &SparseRow<Scalar>, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `x - s * y` on sparse scalar rows.
fn sparse_axpy(x: &SparseRow<Scalar>, s: &Scalar, y: &SparseRow<Scalar>) -> SparseRow<Scalar> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, vx - &(s * vy))
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, vx.clone())
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, vx.clone())
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, -(s * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Reduced row echelon form of `[M | extra columns]`, pivoting only inside `M`.
pub struct Rref {
    field: Field,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseRow<Scalar>>,
    /// Rows with no pivot in `M` that are nonzero in the extra columns.
    residual: Vec<SparseRow<Scalar>>,
}

impl Rref {
    fn compute(m: &Matrix, extra: &[Vector]) -> Rref {
        let mut e = forward(m, extra);
        let residual = core::mem::take(&mut e.leftover);
        for row in e.rows.iter_mut() {
            let inv = row[0].1.inverse().expect("nonzero pivot");
            for (_, v) in row.iter_mut() {
                *v = &*v * &inv;
            }
        }
        for r in (0..e.rows.len()).rev() {
            let c = e.pivots[r];
            let (above, rest) = e.rows.split_at_mut(r);
            let pivot_row = &rest[0];
            for q in above.iter_mut() {
                if let Some(s) = sparse_get(q, c).cloned() {
                    *q = sparse_axpy(q, &s, pivot_row);
                }
            }
        }
        Rref { field: m.field, cols: m.cols, pivots: e.pivots, rows: e.rows, residual }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Free-variable unit completions, ordered by free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = zero_vector(self.field, self.cols);
                v[j] = self.field.one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Some(x) = sparse_get(row, j) {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }

    /// Particular solution for extra column `k`, free variables zero.
    fn solution(&self, k: usize) -> Option<Vector> {
        let col = self.cols + k;
        if self.residual.iter().any(|r| sparse_get(r, col).is_some()) {
            return None;
        }
        let mut x = zero_vector(self.field, self.cols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(v) = sparse_get(row, col) {
                x[p] = v.clone();
            }
        }
        Some(x)
    }
}

/// Reduced row echelon form of `m`.
pub fn rref(m: &Matrix) -> Rref {
    Rref::compute(m, &[])
}

/// Dimension of the column space.
pub fn rank(m: &Matrix) -> usize {
    forward(m, &[]).pivots.len()
}

/// Basis of `{x : Mx = 0}`, canonical free-variable unit completions in
/// free-column order.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    rref(m).kernel_basis()
}

/// One solution of `Mx = b` with free variables set to zero, or `None` if
/// the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>, Error> {
    Ok(solve_many(m, &[b.to_vec()])?.pop().expect("one right-hand side"))
}

/// [`solve`] for several right-hand sides sharing one elimination.
pub fn solve_many(m: &Matrix, bs: &[Vector]) -> Result<Vec<Option<Vector>>, Error> {
    for b in bs {
        check_dim("right-hand side", m.rows, b.len())?;
        if b.iter().any(|x| x.field() != m.field) {
            return Err(Error::FieldMismatch);
        }
    }
    let r = Rref::compute(m, bs);
    Ok((0..bs.len()).map(|k| r.solution(k)).collect())
}

/// Incrementally grown linearly independent set, used to decide whether a
/// vector lies in a span.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    len: usize,
    rows: BTreeMap<usize, SparseRow<Scalar>>,
}

impl EchelonBasis {
    pub fn new(field: Field, len: usize) -> Self {
        EchelonBasis { field, len, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> SparseRow<Scalar> {
        let mut row: SparseRow<Scalar> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        while let Some((lead, coef)) = row.first().cloned() {
            match self.rows.get(&lead) {
                Some(b) => row = sparse_axpy(&row, &coef, b),
                None => break,
            }
        }
        row
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(v).is_empty()
    }

    /// Add `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        debug_assert!(v.iter().all(|x| x.field() == self.field));
        let mut row = self.reduce(v);
        if row.is_empty() {
            return false;
        }
        let inv = row[0].1.inverse().expect("nonzero lead");
        for (_, x) in row.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.insert(row[0].0, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        let f = Field::Rational;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(f, cols, rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()).unwrap()
    }

    fn ints(v: &[Scalar]) -> Vec<i64> {
        v.iter()
            .map(|x| {
                let r = x.as_rational().unwrap();
                assert!(r.is_integer());
                i64::try_from(r.numer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(Field::Rational, 3)), 3);
        assert_eq!(rank(&Matrix::zeros(Field::Rational, 2, 3)), 0);
        assert_eq!(rank(&q(&[&[1, 2, 3], &[2, 4, 6]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(Field::Rational, 3)).is_empty());
        let k = kernel_basis(&Matrix::zeros(Field::Rational, 2, 2));
        assert_eq!(k.iter().map(|v| ints(v)).collect::<Vec<_>>(), vec![vec![1, 0], vec![0, 1]]);
        let k = kernel_basis(&q(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(ints(&k[0]), vec![-1, 1]);
    }

    #[test]
    fn solve_examples() {
        let f = Field::Rational;
        let b: Vector = [3, -1, 7].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(solve(&Matrix::identity(f, 3), &b).unwrap().unwrap(), b);
        let x = solve(&q(&[&[1, 1]]), &[f.from_i64(2)]).unwrap().unwrap();
        assert_eq!(ints(&x), vec![2, 0]);
        assert!(solve(&q(&[&[0]]), &[f.from_i64(1)]).unwrap().is_none());
        assert!(solve(&q(&[&[1, 1]]), &[f.from_i64(1), f.from_i64(2)]).is_err());
    }

    #[test]
    fn zero_by_zero_and_empty_shapes() {
        let f = Field::Rational;
        assert_eq!(rank(&Matrix::zeros(f, 0, 0)), 0);
        assert_eq!(kernel_basis(&Matrix::zeros(f, 0, 3)).len(), 3);
        assert!(kernel_basis(&Matrix::zeros(f, 3, 0)).is_empty());
        assert_eq!(solve(&Matrix::zeros(f, 0, 2), &[]).unwrap().unwrap().len(), 2);
    }

    #[test]
    fn mixed_fields_rejected() {
        let p = Field::prime(7).unwrap();
        let entries = vec![Field::Rational.one(), p.one()];
        assert_eq!(Matrix::from_entries(Field::Rational, 1, 2, entries), Err(Error::FieldMismatch));
    }

    #[test]
    fn bareiss_handles_rows_skipped_over_several_steps() {
        // Third row is untouched for two steps and then eliminated.
        let m = q(&[&[2, 1, 0, 1], &[0, 3, 1, 0], &[0, 0, 0, 5], &[4, 5, 1, 7]]);
        assert_eq!(rank(&m), 3);
        for k in kernel_basis(&m) {
            assert!(is_zero_vector(&m.mul_vec(&k).unwrap()));
        }
    }

    #[test]
    fn echelon_basis_span_membership() {
        let f = Field::Rational;
        let mut b = EchelonBasis::new(f, 3);
        let v = |x: [i64; 3]| x.iter().map(|&a| f.from_i64(a)).collect::<Vector>();
        assert!(b.insert(&v([1, 2, 3])));
        assert!(b.insert(&v([0, 1, 1])));
        assert!(!b.insert(&v([2, 5, 7])));
        assert!(b.contains(&v([1, 3, 4])));
        assert!(!b.contains(&v([0, 0, 1])));
        assert_eq!(b.dim(), 2);
    }
}
