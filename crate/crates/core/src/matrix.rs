//! Dense matrices over an exact [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::bareiss;
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect(), cols)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| F::sample(rng))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// Adds `s * rhs` in place.
    pub fn add_scaled(&mut self, rhs: &Self, s: &F) {
        assert_eq!(self.shape(), rhs.shape());
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = a.clone() + b.clone() * s.clone();
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    /// Column vectors stacked horizontally.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inverse().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            let pivot_row: Vec<F> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                let base = i * self.cols;
                for (off, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let idx = base + c + off;
                    self.data[idx] = self.data[idx].clone() - f.clone() * pv.clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            self.transpose().rref().1.len()
        } else {
            self.rref().1.len()
        }
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (k, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(k);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(k, free)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        if F::FRACTION_FREE {
            return bareiss::det(self.to_rows());
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inverse().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let pivots = aug.rref_in_place();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (r, v) in b.iter().enumerate() {
            aug[(r, self.cols)] = v.clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, &c) in pivots.iter().enumerate() {
            x[c] = aug[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Characteristic polynomial `det(xI - A)`, low degree first, via Hessenberg reduction.
    pub fn charpoly(&self) -> Vec<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // Reduce to upper Hessenberg form by similarity transforms.
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) else {
                continue;
            };
            if p != c + 1 {
                for j in 0..n {
                    h.data.swap(p * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = h[(c + 1, c)].inverse().expect("nonzero pivot");
            for i in c + 2..n {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let f = h[(i, c)].clone() * inv.clone();
                for j in 0..n {
                    let v = h[(i, j)].clone() - f.clone() * h[(c + 1, j)].clone();
                    h[(i, j)] = v;
                }
                for k in 0..n {
                    let v = h[(k, c + 1)].clone() + f.clone() * h[(k, i)].clone();
                    h[(k, c + 1)] = v;
                }
            }
        }
        // p_k(x) = charpoly of leading k x k block.
        let mut polys: Vec<Vec<F>> = vec![vec![F::one()]];
        for k in 0..n {
            // p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik * (prod_{m=i+1}^{k} h_{m,m-1}) p_i
            let mut next = vec![F::zero(); k + 2];
            for (d, c) in polys[k].iter().enumerate() {
                next[d + 1] = next[d + 1].clone() + c.clone();
                next[d] = next[d].clone() - h[(k, k)].clone() * c.clone();
            }
            let mut prod = F::one();
            for i in (0..k).rev() {
                prod = prod * h[(i + 1, i)].clone();
                let coef = h[(i, k)].clone() * prod.clone();
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] = next[d].clone() - coef.clone() * c.clone();
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

/// A subspace of `F^n` kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<F>>) -> Self {
        let rows: Vec<Vec<F>> = vectors.into_iter().collect();
        let mut m = Matrix::from_rows(rows, ambient);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|k| m.row(k).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let c: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let residual = self.reduce(v);
        residual.iter().all(|x| x.is_zero()).then_some(c)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// `v` minus its projection along the complement coordinates; zero on pivot positions.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let f = out[p].clone();
            if f.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.clone() - f.clone() * x.clone();
            }
        }
        out
    }

    /// Positions of the standard basis vectors completing this subspace.
    pub fn complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    /// Coordinates of the class of `v` in the quotient, in the complement basis.
    pub fn quotient_coords(&self, v: &[F]) -> Vec<F> {
        let r = self.reduce(v);
        self.complement().into_iter().map(|i| r[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::{One, Zero};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Fp<32003>;
    type Q = BigRational;

    fn m(rows: &[Vec<i64>]) -> Matrix<F> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn det_both_strategies() {
        let a = vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -2, 2]];
        assert_eq!(m(&a).det(), F::from_i64(-2));
        assert_eq!(Matrix::<Q>::from_i64_rows(&a).det(), Q::from_i64(-2));
        assert_eq!(Matrix::<F>::zeros(0, 0).det(), F::one());
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Matrix::<F>::random(5, 5, &mut rng);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(5));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
        assert_eq!(Matrix::<F>::zeros(0, 0).inverse(), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn charpoly_matches_det_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 0..6 {
            let a = Matrix::<F>::random(n, n, &mut rng);
            let cp = a.charpoly();
            assert_eq!(cp.len(), n + 1);
            for _ in 0..3 {
                let x = F::sample(&mut rng);
                let xi_minus_a = Matrix::identity(n).scale(&x).sub(&a);
                assert_eq!(crate::field::poly_eval(&cp, &x), xi_minus_a.det());
            }
        }
        // a matrix needing row swaps during the Hessenberg reduction
        let a = m(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]);
        let cp = a.charpoly(); // x^3 - x
        assert_eq!(cp, vec![F::zero(), F::from_i64(-1), F::zero(), F::one()]);
    }

    #[test]
    fn subspace_quotient() {
        let s = Subspace::span(3, vec![vec![F::one(), F::one(), F::zero()]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.complement(), vec![1, 2]);
        assert!(s.contains(&[F::from_i64(2), F::from_i64(2), F::zero()]));
        let q = s.quotient_coords(&[F::one(), F::zero(), F::zero()]);
        assert_eq!(q, vec![F::from_i64(-1), F::zero()]);
        assert_eq!(s.coords(&[F::from_i64(3), F::from_i64(3), F::zero()]), Some(vec![F::from_i64(3)]));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[vec![1, 1], vec![1, -1]]);
        let x = a.solve(&[F::from_i64(2), F::zero()]).unwrap();
        assert_eq!(x, vec![F::one(), F::one()]);
        let b = m(&[vec![1, 1], vec![2, 2]]);
        assert!(b.solve(&[F::one(), F::zero()]).is_none());
    }
}
