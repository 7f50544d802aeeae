//! Dense matrices over a [`Field`] and the exterior square of 4x4 matrices.
//!
//! Vectors are rows; a matrix acts on the right (`v -> v * M`).

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// A `1 x k` matrix.
pub type RowVector<F> = Matrix<F>;

/// Exterior-square basis order: `e_i ^ e_j` for `i < j`, lexicographic.
pub const WEDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Usage("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= field.order()) {
            return Err(Error::Usage(format!("entry {bad} outside the field")));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: F, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Usage("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn row_vector(field: F, entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        Self::new(field, 1, n, entries)
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = m.field.one();
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        debug_assert!(value < self.field.order());
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Usage("matrices over different fields".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, other.get(t, c)));
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u32, u32) -> u32) -> Result<Self> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Usage("shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Matrix {
            entries,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, s: u32) -> Self {
        let entries = self.entries.iter().map(|&e| self.field.mul(s, e)).collect();
        Matrix {
            entries,
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// `self^e` for square matrices, `e >= 0`.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Usage("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                m.entries.swap(pr * m.cols + j, lead * m.cols + j);
            }
            let inv = f.inv(m.get(lead, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(inv, m.get(lead, j));
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r == lead || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(lead, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the left null space `{x : x * self = 0}` as rows of a matrix,
    /// or `None` when the space is zero.
    pub fn left_nullspace(&self) -> Option<Self> {
        let t = self.transpose();
        let (r, pivots) = t.rref();
        let free: Vec<usize> = (0..t.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return None;
        }
        let f = &self.field;
        let mut basis = Self::zeros(f.clone(), free.len(), t.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, f.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(pr, fc)));
            }
        }
        Some(basis)
    }

    pub fn nullity(&self) -> usize {
        self.left_nullspace().map_or(0, |b| b.rows())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Usage("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, f.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        let mut out = Self::zeros(f.clone(), n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.get(r, n + c));
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::Usage(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (t, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(t, c)));
            }
        }
        Ok(out)
    }

    /// Matrix of the induced map on the exterior square, on the basis
    /// [`WEDGE_PAIRS`]. Entry `((i,j),(k,l))` is `g[i,k] g[j,l] - g[i,l] g[j,k]`.
    pub fn exterior_square(&self) -> Result<Self> {
        if (self.rows, self.cols) != (4, 4) {
            return Err(Error::Usage(format!(
                "exterior square needs a 4x4 matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), 6, 6);
        for (a, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
            for (b, &(k, l)) in WEDGE_PAIRS.iter().enumerate() {
                let v = f.sub(
                    f.mul(self.get(i, k), self.get(j, l)),
                    f.mul(self.get(i, l), self.get(j, k)),
                );
                out.set(a, b, v);
            }
        }
        Ok(out)
    }
}

/// Coordinates of `u ^ v` on the basis [`WEDGE_PAIRS`].
pub fn wedge<F: Field>(field: &F, u: &[u32], v: &[u32]) -> [u32; 6] {
    let mut out = [0u32; 6];
    for (a, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
        out[a] = field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]));
    }
    out
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = (0..self.rows).map(|r| self.row(r)).collect();
        write!(f, "Matrix{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{BinaryField, PrimeField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b2(p: u32) -> Matrix<PrimeField> {
        Matrix::from_rows(gf(p), &[vec![1, 0], vec![1, 1]]).unwrap()
    }

    fn random_invertible<F: Field>(field: &F, rng: &mut ChaCha8Rng) -> Matrix<F> {
        loop {
            let entries = (0..16).map(|_| rng.gen_range(0..field.order())).collect();
            let m = Matrix::new(field.clone(), 4, 4, entries).unwrap();
            if m.rank() == 4 {
                return m;
            }
        }
    }

    #[test]
    fn identity_is_neutral() {
        let f = gf(7);
        let m = Matrix::from_rows(f, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(Matrix::identity(f, 2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&Matrix::identity(f, 3)).unwrap(), m);
    }

    #[test]
    fn b2_squared_over_gf5() {
        let sq = b2(5).mul(&b2(5)).unwrap();
        assert_eq!(
            sq,
            Matrix::from_rows(gf(5), &[vec![1, 0], vec![2, 1]]).unwrap()
        );
    }

    #[test]
    fn nilpotent_shift() {
        let f = gf(7);
        for k in 2..6 {
            let mut a = Matrix::zeros(f, k, k);
            for i in 1..k {
                a.set(i, i - 1, 1);
            }
            let prev = a.pow(k as u64 - 1).unwrap();
            assert!(!prev.is_zero());
            assert!(a.mul(&prev).unwrap().is_zero());
        }
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let f = gf(3);
        let a = Matrix::zeros(f, 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Usage(_))));
        assert!(matches!(
            Matrix::new(f, 2, 2, vec![0; 3]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(a.exterior_square(), Err(Error::Usage(_))));
        let other = Matrix::zeros(gf(5), 3, 3);
        assert!(matches!(a.mul(&other), Err(Error::Usage(_))));
    }

    #[test]
    fn inverse_examples() {
        let f = gf(3);
        assert_eq!(
            Matrix::identity(f, 3).inverse().unwrap(),
            Matrix::identity(f, 3)
        );
        // Oracle: solve B_2 X = I by enumerating all 81 candidate X.
        let b = b2(3);
        let mut solutions = Vec::new();
        for code in 0..81u32 {
            let e: Vec<u32> = (0..4).map(|t| (code / 3u32.pow(t)) % 3).collect();
            let x = Matrix::new(f, 2, 2, e).unwrap();
            if b.mul(&x).unwrap().is_identity() {
                solutions.push(x);
            }
        }
        assert_eq!(solutions.len(), 1);
        assert_eq!(
            solutions[0],
            Matrix::from_rows(f, &[vec![1, 0], vec![2, 1]]).unwrap()
        );
        assert_eq!(b.inverse().unwrap(), solutions[0]);
        let singular = Matrix::from_rows(f, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_examples() {
        let f = BinaryField::with_default(2).unwrap();
        assert_eq!(Matrix::zeros(f, 4, 4).rank(), 0);
        assert_eq!(Matrix::identity(f, 4).rank(), 4);
        // x -> x + B(x, v) v with v = e1 and the standard symplectic Gram matrix.
        let mut t = Matrix::identity(f, 4);
        t.set(1, 0, 1);
        let diff = t.sub(&Matrix::identity(f, 4)).unwrap();
        assert_eq!(diff.rank(), 1);
    }

    #[test]
    fn rank_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = gf(5);
        for _ in 0..200 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let entries = (0..rows * cols)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        0
                    } else {
                        rng.gen_range(0..5)
                    }
                })
                .collect();
            let m = Matrix::new(f, rows, cols, entries).unwrap();
            // The left null space lives in F^rows.
            assert_eq!(m.rank() + m.nullity(), rows);
            assert_eq!(m.transpose().rank(), m.rank());
            assert_eq!(m.transpose().rank() + m.transpose().nullity(), cols);
            if let Some(basis) = m.left_nullspace() {
                assert!(basis.mul(&m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn exterior_square_diagonal_and_identity() {
        let f = gf(7);
        assert!(Matrix::identity(f, 4)
            .exterior_square()
            .unwrap()
            .is_identity());
        let d = [2u32, 3, 5, 6];
        let mut g = Matrix::zeros(f, 4, 4);
        for i in 0..4 {
            g.set(i, i, d[i]);
        }
        let sq = g.exterior_square().unwrap();
        for (a, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
            for b in 0..6 {
                let expect = if a == b { f.mul(d[i], d[j]) } else { 0 };
                assert_eq!(sq.get(a, b), expect);
            }
        }
    }

    #[test]
    fn exterior_square_acts_on_wedges() {
        let f = BinaryField::with_default(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_invertible(&f, &mut rng);
            let sq = g.exterior_square().unwrap();
            for u in 1..16u32 {
                for v in (u + 1)..16u32 {
                    let uv: Vec<u32> = (0..4).map(|t| (u >> t) & 1).collect();
                    let vv: Vec<u32> = (0..4).map(|t| (v >> t) & 1).collect();
                    let lhs = sq.apply(&wedge(&f, &uv, &vv)).unwrap();
                    let rhs = wedge(&f, &g.apply(&uv).unwrap(), &g.apply(&vv).unwrap());
                    assert_eq!(lhs, rhs.to_vec());
                }
            }
        }
    }

    #[test]
    fn exterior_square_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1u32, 2] {
            let f = BinaryField::with_default(n).unwrap();
            let sample: Vec<_> = (0..100).map(|_| random_invertible(&f, &mut rng)).collect();
            let squares: Vec<_> = sample
                .iter()
                .map(|g| g.exterior_square().unwrap())
                .collect();
            for (g, sg) in sample.iter().zip(&squares) {
                for (h, sh) in sample.iter().zip(&squares) {
                    let lhs = g.mul(h).unwrap().exterior_square().unwrap();
                    assert_eq!(lhs, sg.mul(sh).unwrap());
                }
            }
            for g in &sample {
                assert!(g.mul(&g.inverse().unwrap()).unwrap().is_identity());
            }
        }
    }
}
