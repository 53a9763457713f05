//! Integer linear algebra: Smith normal form and unimodular completion of a
//! primitive vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().cloned().map(Into::into))
            .collect();
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn column_vector<T: Into<BigInt> + Clone>(v: &[T]) -> Self {
        let rows: Vec<Vec<BigInt>> = v.iter().cloned().map(|x| vec![x.into()]).collect();
        IntMatrix {
            rows: v.len(),
            cols: 1,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::InvalidArgument(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = self
                    .row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
                return Err(Error::NotUnimodular("0".into()));
            };
            aug.swap(col, p);
            let pivot = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x = &*x / &pivot;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (x, y) in aug[r].iter_mut().zip(pivot_row.iter()) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        let mut inv = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &aug[i][n + j];
                if !v.is_integer() {
                    let d = self.determinant()?;
                    return Err(Error::NotUnimodular(d.to_string()));
                }
                inv[(i, j)] = v.to_integer();
            }
        }
        Ok(inv)
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
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

/// `d = p * m * q` with `p`, `q` unimodular and `d` diagonal with a
/// nonnegative divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntMatrix::identity(r);
    let mut q = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            // Pivot on the entry of least absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d[(i, j)].abs() < d[(bi, bj)].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { d, p, q };
            };
            d.swap_rows(t, pi);
            p.swap_rows(t, pi);
            d.swap_cols(t, pj);
            q.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = -(d[(i, t)].div_floor(&d[(t, t)]));
                d.add_row_multiple(i, t, &k);
                p.add_row_multiple(i, t, &k);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -(d[(t, j)].div_floor(&d[(t, t)]));
                d.add_col_multiple(j, t, &k);
                q.add_col_multiple(j, t, &k);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let mut offender = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    SmithDecomposition { d, p, q }
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    g.is_one()
}

/// Unimodular `B` with `B * e_1 = v`, built as `d * P * (Q^T)^{-1}` from the
/// Smith form `d e_1^T = P v^T Q` of the row vector `v^T`.
pub fn fit_ray(v: &[BigInt]) -> Result<IntMatrix> {
    if v.is_empty() || v.iter().all(|x| x.is_zero()) {
        return Err(Error::NotPrimitive("zero vector".into()));
    }
    if !is_primitive(v) {
        let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        return Err(Error::NotPrimitive(format!("({})", shown.join(", "))));
    }
    let row = IntMatrix::from_rows(&[v.to_vec()])?;
    let snf = smith_normal_form(&row);
    let d = snf.d[(0, 0)].clone();
    let qt_inv = snf.q.transpose().inverse_unimodular()?;
    let b = qt_inv.scale(&(&d * &snf.p[(0, 0)]));
    debug_assert_eq!(b.column(0), v.to_vec());
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check(mm: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(mm);
        assert_eq!(s.p.mul(mm).unwrap().mul(&s.q).unwrap(), s.d);
        assert!(s.p.is_unimodular());
        assert!(s.q.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn coprime_row_vector() {
        // gcd(2, 3) = 1 forces d_1 = 1.
        let s = check(&m(&[vec![2, 3]]));
        assert_eq!(s.d, m(&[vec![1, 0]]));
    }

    #[test]
    fn divisibility_chain_kept() {
        let s = check(&m(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(s.d, m(&[vec![2, 0], vec![0, 4]]));
        let s = check(&m(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn fit_ray_examples() {
        for v in [vec![1, 0], vec![2, 3], vec![0, 1], vec![-3, 5, 7]] {
            let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            let b = fit_ray(&vb).unwrap();
            assert_eq!(b.column(0), vb);
            assert!(b.determinant().unwrap().abs().is_one());
        }
        let e1 = fit_ray(&[BigInt::from(1), BigInt::from(0)]).unwrap();
        assert_eq!(e1, IntMatrix::identity(2));
    }

    #[test]
    fn fit_ray_rejects_bad_input() {
        assert!(fit_ray(&[BigInt::from(2), BigInt::from(4)]).is_err());
        assert!(fit_ray(&[BigInt::from(0), BigInt::from(0)]).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(1));
        let inv = a.inverse_unimodular().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(2));
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_err());
    }
}
