use std::fmt;

use crate::scalar::{format_rational, Scalar};
use crate::Q;

/// Outcome of [`ScalarMatrix::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solve<F = Q> {
    Solution(Vec<F>),
    NoSolution,
}

impl<F> Solve<F> {
    pub fn solution(self) -> Option<Vec<F>> {
        match self {
            Solve::Solution(x) => Some(x),
            Solve::NoSolution => None,
        }
    }
}

/// A dense matrix over an exact field, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ScalarMatrix<F = Q> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> ScalarMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(ScalarMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(F::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &ScalarMatrix<F>) -> ScalarMatrix<F> {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out: ScalarMatrix<F> = ScalarMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let x = out.get(r, c).add_ref(&a.mul_ref(other.get(k, c)));
                    out.set(r, c, x);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    ///
    /// The pivot in each column is the first nonzero entry at or below the
    /// current row, so the result depends only on the entries.
    pub fn rref(&self) -> (ScalarMatrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one().div_ref(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub_mul(&f, m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space, one vector per free column with that
    /// column's entry set to one.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A particular solution of `self * x = b`, or [`Solve::NoSolution`].
    pub fn solve(&self, b: &[F]) -> Solve<F> {
        assert_eq!(
            b.len(),
            self.rows,
            "right-hand side length must match row count"
        );
        let mut aug = ScalarMatrix::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Solve::NoSolution;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Solve::Solution(x)
    }
}

impl<F: Scalar> fmt::Debug for ScalarMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}
