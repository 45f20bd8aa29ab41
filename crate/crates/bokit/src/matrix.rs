//! Dense complex matrices with a row-pivoted LU factorization.
//!
//! The matrix type is deliberately small: the whole toolkit works at desk
//! scale (sections of a few hundred rows), so a flat `Vec<Complex64>` with
//! naive O(n^3) multiplication and elimination is both adequate and easy to
//! audit against the brute-force oracles.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivot columns whose remaining entries all fall below this absolute floor
/// are treated as identically zero (exact zero determinant).
const EXACT_ZERO_FLOOR: f64 = 1e-300;

/// Dense rectangular complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Copy a `d x d` block into position (block-row `bi`, block-col `bj`).
    pub fn set_block(&mut self, bi: usize, bj: usize, d: usize, block: &[Complex64]) {
        debug_assert_eq!(block.len(), d * d);
        for r in 0..d {
            for c in 0..d {
                self[(bi * d + r, bj * d + c)] = block[r * d + c];
            }
        }
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    /// `I - self` for square matrices.
    pub fn identity_minus(&self) -> ComplexMatrix {
        assert!(self.is_square());
        ComplexMatrix::identity(self.rows).sub(self)
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Row-pivoted LU factorization of a square matrix.
///
/// The pivot magnitudes are kept so that determinant code can accumulate
/// log-magnitudes and phases without ever forming a possibly overflowing
/// product. A column whose remaining entries are all below the exact-zero
/// floor marks the matrix as exactly singular.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: ComplexMatrix,
    pivots: Vec<usize>,
    swap_count: usize,
    exact_zero: bool,
    pivot_max: f64,
    pivot_min: f64,
}

pub fn lu_factor(m: &ComplexMatrix) -> Result<LuFactorization> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.all_finite() {
        return Err(Error::NonFiniteEntries);
    }
    let n = m.rows;
    let mut lu = m.clone();
    let mut pivots = Vec::with_capacity(n);
    let mut swap_count = 0usize;
    let mut exact_zero = false;
    let mut pivot_max = 0.0f64;
    let mut pivot_min = f64::INFINITY;

    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[(k, k)].norm();
        for i in (k + 1)..n {
            let mag = lu[(i, k)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag < EXACT_ZERO_FLOOR {
            exact_zero = true;
            pivots.push(k);
            continue;
        }
        if best != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            swap_count += 1;
        }
        pivots.push(best);
        pivot_max = pivot_max.max(best_mag);
        pivot_min = pivot_min.min(best_mag);
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in (k + 1)..n {
                let upd = factor * lu[(k, j)];
                lu[(i, j)] -= upd;
            }
        }
    }

    if n == 0 {
        pivot_max = 1.0;
        pivot_min = 1.0;
    }
    Ok(LuFactorization {
        lu,
        pivots,
        swap_count,
        exact_zero,
        pivot_max,
        pivot_min,
    })
}

impl LuFactorization {
    pub fn order(&self) -> usize {
        self.lu.rows
    }

    pub fn is_singular(&self) -> bool {
        self.exact_zero
    }

    pub fn swap_count(&self) -> usize {
        self.swap_count
    }

    /// Diagonal of U, i.e. the pivot values whose product is ±det.
    pub fn pivot_values(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.lu.rows).map(move |k| self.lu[(k, k)])
    }

    /// Ratio of extreme pivot magnitudes; crude but cheap conditioning signal.
    pub fn condition_hint(&self) -> f64 {
        if self.exact_zero {
            f64::INFINITY
        } else if self.lu.rows == 0 {
            1.0
        } else {
            self.pivot_max / self.pivot_min
        }
    }

    /// Solve `A x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n, "right-hand side length must match");
        if self.exact_zero {
            return Err(Error::SingularMatrix {
                condition_hint: self.condition_hint(),
            });
        }
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        // forward substitution with unit lower factor
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let adj = l * x[j];
                x[i] -= adj;
            }
        }
        // back substitution with U
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let adj = u * x[j];
                x[i] -= adj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solve `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows;
        assert_eq!(b.rows(), n);
        let mut out = ComplexMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<Complex64> = (0..n).map(|i| b[(i, j)]).collect();
            let x = self.solve_vec(&col)?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }
}
