use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ToricError};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * BigInt::from(*b)).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Sub-matrix made of the given rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        IntMatrix::from_big_rows(self.cols, rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        self.transpose().select_rows(idx).transpose()
    }

    pub fn reverse_cols(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.cols).rev().collect();
        self.select_cols(&idx)
    }

    pub fn reverse_rows(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.rows).rev().collect();
        self.select_rows(&idx)
    }

    /// Converts to machine integers, failing if any entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(big_to_i64).collect())
            .collect()
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    /// Replaces rows (a, b) by (x*a + y*b, z*a + w*b).
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for j in 0..self.cols {
            let ra = self.data[a * self.cols + j].clone();
            let rb = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = x * &ra + y * &rb;
            self.data[b * self.cols + j] = z * &ra + w * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for i in 0..self.rows {
            let ca = self.data[i * self.cols + a].clone();
            let cb = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = x * &ca + y * &cb;
            self.data[i * self.cols + b] = z * &ca + w * &cb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(ToricError::Overflow)
}

/// Extended gcd with a non-negative gcd: returns (g, x, y) with x*a + y*b = g.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U * A = H`. Nonzero rows of `H` come first,
/// pivots are positive and strictly increase in column, and every entry above a pivot is
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivot_row = 0;
    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        // gather the gcd of the column below pivot_row into pivot_row
        for r in pivot_row + 1..h.rows() {
            if h[(r, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_zero() {
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
                continue;
            }
            let a0 = h[(pivot_row, col)].clone();
            let b0 = h[(r, col)].clone();
            if (&b0 % &a0).is_zero() {
                let q = -(&b0 / &a0);
                h.add_row_multiple(r, pivot_row, &q);
                u.add_row_multiple(r, pivot_row, &q);
                continue;
            }
            let (g, x, y) = xgcd(&a0, &b0);
            let z = -(&b0 / &g);
            let w = &a0 / &g;
            h.combine_rows(pivot_row, r, &x, &y, &z, &w);
            u.combine_rows(pivot_row, r, &x, &y, &z, &w);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&p);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(r, pivot_row, &nq);
                u.add_row_multiple(r, pivot_row, &nq);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Pivot columns of a matrix already in row Hermite form.
pub fn hnf_pivots(h: &IntMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..h.rows() {
        if let Some(j) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
            out.push((i, j));
        }
    }
    out
}

/// Smith normal form: returns `(S, P, Q)` with `P * A * Q = S`, `S` diagonal with
/// non-negative entries d1 | d2 | ..., and `P`, `Q` unimodular.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = a.clone();
    let mut p = IntMatrix::identity(a.rows());
    let mut q = IntMatrix::identity(a.cols());
    let (m, n) = (a.rows(), a.cols());
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if s[(bi, bj)].abs() <= s[(i, j)].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        p.swap_rows(t, bi);
        s.swap_cols(t, bj);
        q.swap_cols(t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                if (&s[(i, t)] % &s[(t, t)]).is_zero() {
                    let q = -(&s[(i, t)] / &s[(t, t)]);
                    s.add_row_multiple(i, t, &q);
                    p.add_row_multiple(i, t, &q);
                } else {
                    let (g, x, y) = xgcd(&s[(t, t)], &s[(i, t)]);
                    let z = -(&s[(i, t)] / &g);
                    let w = &s[(t, t)] / &g;
                    s.combine_rows(t, i, &x, &y, &z, &w);
                    p.combine_rows(t, i, &x, &y, &z, &w);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                if (&s[(t, j)] % &s[(t, t)]).is_zero() {
                    let k = -(&s[(t, j)] / &s[(t, t)]);
                    s.add_col_multiple(j, t, &k);
                    q.add_col_multiple(j, t, &k);
                } else {
                    let (g, x, y) = xgcd(&s[(t, t)], &s[(t, j)]);
                    let z = -(&s[(t, j)] / &g);
                    let w = &s[(t, t)] / &g;
                    s.combine_cols(t, j, &x, &y, &z, &w);
                    q.combine_cols(t, j, &x, &y, &z, &w);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let piv = s[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&s[(i, j)] % &piv).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    (s, p, q)
}

/// Diagonal of a Smith form (length min(rows, cols)).
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = smith_normal_form(a);
    (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect()
}

/// Rank over the rationals.
pub fn int_rank(a: &IntMatrix) -> usize {
    let (h, _) = hermite_normal_form(a);
    hnf_pivots(&h).len()
}

/// Integer basis of the right kernel, returned as the columns of a matrix. The basis is
/// saturated (spans the full lattice of integer kernel vectors) and in a canonical Hermite
/// form: its transpose is row-HNF.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(&a.transpose());
    let r = hnf_pivots(&h).len();
    let rows: Vec<usize> = (r..u.rows()).collect();
    let k = u.select_rows(&rows);
    let (kh, _) = hermite_normal_form(&k);
    kh.transpose()
}

/// Integer right inverse `S` of a surjective integer matrix `A` (so `A * S = I`).
pub fn integer_right_inverse(a: &IntMatrix) -> Result<IntMatrix> {
    let (s, p, q) = smith_normal_form(a);
    let k = a.rows();
    for i in 0..k {
        if i >= s.cols() || !s[(i, i)].is_one() {
            return Err(ToricError::NotSurjective);
        }
    }
    let cols: Vec<usize> = (0..k).collect();
    Ok(q.select_cols(&cols).mul(&p))
}

/// Divides out the content of an integer vector.
///
/// The result is `v / gcd(v)`, so its entries have gcd 1 and it points the same way.
pub fn primitive_vector(v: &[i64]) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        return Err(ToricError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

/// Reduces `v` modulo the lattice spanned by the rows of `basis_hnf` (a row-HNF matrix)
/// so that the entries in pivot columns land in `[0, pivot)`.
pub fn reduce_mod_lattice(v: &[BigInt], basis_hnf: &IntMatrix) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for (i, j) in hnf_pivots(basis_hnf) {
        let p = &basis_hnf[(i, j)];
        let q = out[j].div_floor(p);
        if !q.is_zero() {
            for (c, o) in out.iter_mut().enumerate() {
                *o -= &q * &basis_hnf[(i, c)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_small_cases() {
        let (s, _, _) = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s, IntMatrix::identity(3));
        let a = m(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(smith_diagonal(&a), vec![BigInt::from(1), BigInt::from(6)]);
        let row = m(2, &[&[1, 0]]);
        let (s, _, _) = smith_normal_form(&row);
        assert_eq!(s, row);
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_vector(&[2, 4]).unwrap(), vec![1, 2]);
        assert_eq!(primitive_vector(&[0, -3]).unwrap(), vec![0, -1]);
        assert_eq!(primitive_vector(&[6, 10, 15]).unwrap(), vec![6, 10, 15]);
        let err = primitive_vector(&[0, 0]).unwrap_err();
        assert_eq!(err.to_string(), "zero vector has no primitive representative");
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = m(3, &[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // cofactor expansion along the first row
        let d = 2 * (3 * -2 - 4 * 5) - (-1) * (1 * -2 - 4 * 0);
        assert_eq!(a.determinant(), BigInt::from(d));
        assert_eq!(m(2, &[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
        assert_eq!(m(2, &[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&m(2, &[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn right_inverse() {
        let a = m(3, &[&[1, 1, 1]]);
        let s = integer_right_inverse(&a).unwrap();
        assert_eq!(a.mul(&s), IntMatrix::identity(1));
        assert!(integer_right_inverse(&m(1, &[&[2]])).is_err());
    }

    #[test]
    fn reduce_mod_hnf_lattice() {
        let basis = m(2, &[&[1, 0]]);
        let v = vec![BigInt::from(-3), BigInt::from(1)];
        assert_eq!(reduce_mod_lattice(&v, &basis), vec![BigInt::from(0), BigInt::from(1)]);
    }
}
