//! Exact integer matrices.
//!
//! Determinants and leading principal minors use fraction-free (Bareiss)
//! elimination, so every intermediate value is an integer. Two independent
//! characteristic polynomial routes are provided: Faddeev–LeVerrier over the
//! integers and fraction-free elimination of `X*I - M` over `Z[X]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polyint::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
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

    pub fn from_data(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Build from rows; every row must have `cols` entries. An empty row list
    /// gives a `0 x cols` matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: r,
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices. Panics on ragged
    /// input.
    pub fn from_i64s<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged literal matrix")
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

    pub fn data(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
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

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none() && self.is_square()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self[(i, j)] != self[(j, i)])
    }

    pub fn matmul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^T * self`, always symmetric.
    pub fn gram(&self) -> SymIntMatrix {
        let g = self.transpose().matmul(self).expect("shapes agree");
        SymIntMatrix(g)
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &IntMatrix, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let data = rows
            .iter()
            .flat_map(|&r| self.row(r).iter().cloned())
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn leading_submatrix(&self, k: usize) -> IntMatrix {
        let mut out = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Stack the rows of `self` on top of the rows of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Assemble `[[tl, tr], [bl, br]]`.
    pub fn block_assemble(
        tl: &IntMatrix,
        tr: &IntMatrix,
        bl: &IntMatrix,
        br: &IntMatrix,
    ) -> Result<IntMatrix> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(Error::DimensionMismatch(format!(
                "incompatible blocks {}x{}, {}x{}, {}x{}, {}x{}",
                tl.rows, tl.cols, tr.rows, tr.cols, bl.rows, bl.cols, br.rows, br.cols
            )));
        }
        let (r, c) = (tl.rows + bl.rows, tl.cols + tr.cols);
        let mut out = Self::zeros(r, c);
        for (block, r0, c0) in [(tl, 0, 0), (tr, 0, tl.cols), (bl, tl.rows, 0), (br, tl.rows, tl.cols)] {
            for i in 0..block.rows {
                for j in 0..block.cols {
                    out[(r0 + i, c0 + j)] = block[(i, j)].clone();
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum<'a>(blocks: impl IntoIterator<Item = &'a IntMatrix>) -> IntMatrix {
        let blocks: Vec<&IntMatrix> = blocks.into_iter().collect();
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * if n == 0 { BigInt::one() } else { prev })
    }

    /// Characteristic polynomial `det(X*I - M)` by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Result<IntPoly> {
        let n = self.require_square()?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        // Running matrix N_k with c_{n-k} = -tr(M N_k) / k.
        let mut nk = Self::zeros(n, n);
        for k in 1..=n {
            for i in 0..n {
                nk[(i, i)] += &coeffs[n - k + 1];
            }
            let mn = self.matmul(&nk)?;
            let tr = mn.trace();
            let c = -tr / BigInt::from(k);
            coeffs[n - k] = c;
            nk = mn;
        }
        Ok(IntPoly::new(coeffs))
    }

    /// Characteristic polynomial by fraction-free elimination of `X*I - M`
    /// over `Z[X]`. Every pivot is a leading principal minor of `X*I - M`,
    /// hence monic, so each Bareiss division is an exact monic division.
    pub fn charpoly_bareiss(&self) -> Result<IntPoly> {
        let n = self.require_square()?;
        let mut a: Vec<Vec<IntPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = IntPoly::constant(-self[(i, j)].clone());
                        if i == j {
                            &c + &IntPoly::monomial(BigInt::one(), 1)
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        let mut prev = IntPoly::one();
        for k in 0..n {
            let (head, tail) = a.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let update = |row: &mut Vec<IntPoly>| -> Result<()> {
                for j in k + 1..n {
                    let v = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                    row[j] = v
                        .div_exact(&prev)?
                        .ok_or_else(|| Error::InternalCertificateFailure("inexact Bareiss step".into()))?;
                }
                Ok(())
            };
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                tail.par_iter_mut().try_for_each(update)?;
            }
            #[cfg(not(feature = "parallel"))]
            tail.iter_mut().try_for_each(update)?;
            prev = a[k][k].clone();
        }
        Ok(prev)
    }

    /// Exact check of `det(Q^T Q) = sum_J det(Q_J)^2` over all row subsets
    /// `J` of size `cols`.
    pub fn cauchy_binet(&self) -> Result<(BigInt, BigInt)> {
        if self.rows < self.cols {
            return Err(Error::DimensionMismatch(format!(
                "Cauchy–Binet needs rows >= cols, got {}x{}",
                self.rows, self.cols
            )));
        }
        let lhs = self.gram().0.det()?;
        let subsets: Vec<Vec<usize>> = (0..self.rows).combinations(self.cols).collect();
        let square_minor = |rows: &Vec<usize>| -> BigInt {
            let d = self.select_rows(rows).det().expect("square");
            &d * &d
        };
        #[cfg(feature = "parallel")]
        let rhs: BigInt = {
            use rayon::prelude::*;
            subsets.par_iter().map(square_minor).sum()
        };
        #[cfg(not(feature = "parallel"))]
        let rhs: BigInt = subsets.iter().map(square_minor).sum();
        Ok((lhs, rhs))
    }

    pub fn cauchy_binet_check(&self) -> Result<bool> {
        let (lhs, rhs) = self.cauchy_binet()?;
        Ok(lhs == rhs)
    }

    pub fn max_abs_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
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
            write!(f, "[{}]", self.row(i).iter().join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let line = self.row(i).iter().map(|x| format!("{x:>width$}")).join(" ");
            writeln!(f, "[{line}]")?;
        }
        Ok(())
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("dimension mismatch in +")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("dimension mismatch in -")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.matmul(rhs).expect("dimension mismatch in *")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }
}

/// Array of rows, each entry a decimal string.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        let cols = rows.first().map_or(0, Vec::len);
        let parsed = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| s.parse::<BigInt>().map_err(|_| D::Error::custom(format!("invalid integer {s:?}"))))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(parsed, cols).map_err(D::Error::custom)
    }
}

/// Square integer matrix whose symmetry was checked at construction.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SymIntMatrix(IntMatrix);

impl SymIntMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        match m.first_asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(SymIntMatrix(m)),
        }
    }

    pub fn from_i64s<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::new(IntMatrix::from_i64s(rows)).expect("literal matrix is not symmetric")
    }

    pub fn identity(n: usize) -> Self {
        SymIntMatrix(IntMatrix::identity(n))
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn scale(&self, c: &BigInt) -> SymIntMatrix {
        SymIntMatrix(self.0.scale(c))
    }

    pub fn sub_identity(&self) -> SymIntMatrix {
        let mut m = self.0.clone();
        for i in 0..m.rows {
            m[(i, i)] -= 1;
        }
        SymIntMatrix(m)
    }

    /// `Δ_1, …, Δ_n` by fraction-free elimination without pivoting. When an
    /// intermediate minor vanishes the remaining minors are computed one at a
    /// time.
    pub fn leading_principal_minors(&self) -> Vec<BigInt> {
        let n = self.size();
        let mut a = self.0.to_rows();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                minors.push(BigInt::zero());
                minors.extend((k + 2..=n).map(|j| self.0.leading_submatrix(j).det().expect("square")));
                return minors;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
            minors.push(prev.clone());
        }
        minors
    }

    /// Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        self.leading_principal_minors().iter().all(Signed::is_positive)
    }

    pub fn det(&self) -> BigInt {
        self.0.det().expect("square")
    }

    pub fn charpoly(&self) -> IntPoly {
        self.0.charpoly().expect("square")
    }
}

impl std::ops::Index<(usize, usize)> for SymIntMatrix {
    type Output = BigInt;
    fn index(&self, idx: (usize, usize)) -> &BigInt {
        &self.0[idx]
    }
}

impl fmt::Debug for SymIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for SymIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl<'de> Deserialize<'de> for SymIntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = IntMatrix::deserialize(deserializer)?;
        SymIntMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
