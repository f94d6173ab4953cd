//! Small dense linear algebra over the ambient space E^{n+2}.
//!
//! The ambient metric is `eps dx_1^2 + dx_2^2 + ... + dx_{n+2}^2`, so the
//! only non-Euclidean weight sits on the first coordinate. Dimensions are
//! tiny (<= 7) and everything here is written directly for dense small
//! matrices: LU with partial pivoting, Cholesky, and a Jacobi symmetric
//! eigensolver.

use crate::error::GeomError;
use crate::scalar::Real;

/// Metric signature of E^{dim}: `epsilon` applies to coordinate 1 only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub dim: usize,
    pub epsilon: i8,
}

impl Signature {
    pub fn new(dim: usize, epsilon: i8) -> Self {
        assert!(epsilon == 1 || epsilon == -1, "epsilon must be +1 or -1");
        Signature { dim, epsilon }
    }

    /// Metric weight of coordinate `i`.
    pub fn weight<F: Real>(&self, i: usize) -> F {
        if i == 0 && self.epsilon == -1 {
            -F::one()
        } else {
            F::one()
        }
    }
}

/// Point or vector of E^{dim}, standard coordinates.
pub type AmbientVector<F> = Vec<F>;

/// Pseudo-Euclidean inner product `eps u_1 v_1 + sum_{i>=2} u_i v_i`.
pub fn inner<F: Real>(sig: Signature, u: &[F], v: &[F]) -> Result<F, GeomError> {
    if u.len() != sig.dim || v.len() != sig.dim {
        return Err(GeomError::DimensionMismatch {
            expected: sig.dim,
            got: if u.len() != sig.dim { u.len() } else { v.len() },
        });
    }
    let mut acc = sig.weight::<F>(0) * u[0] * v[0];
    for i in 1..sig.dim {
        acc = acc + u[i] * v[i];
    }
    Ok(acc)
}

/// Symmetric k x k matrix, packed lower-triangular storage.
///
/// `(i, j)` and `(j, i)` share one storage cell, so symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<F> {
    k: usize,
    data: Vec<F>,
}

impl<F: Real> SymMatrix<F> {
    pub fn zeros(k: usize) -> Self {
        SymMatrix {
            k,
            data: vec![F::zero(); k * (k + 1) / 2],
        }
    }

    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diag(d: &[F]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { F::zero() })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        let idx = self.idx(i, j);
        self.data[idx] = v;
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn to_mat(&self) -> Mat<F> {
        Mat::from_fn(self.k, self.k, |i, j| self.get(i, j))
    }
}

/// Dense row-major matrix for the small solves in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Real> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows);
        Mat::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|l| self[(i, l)] * other[(l, j)]).sum()
        })
    }

    /// LU decomposition with partial pivoting; returns (LU, perm, sign) or
    /// None when a pivot underflows.
    fn lu(&self) -> Option<(Mat<F>, Vec<usize>, F)> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = F::one();
        for col in 0..n {
            let mut p = col;
            let mut best = a[(col, col)].abs();
            for r in col + 1..n {
                let v = a[(r, col)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == F::zero() {
                return None;
            }
            if p != col {
                for j in 0..n {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(col, p);
                sign = -sign;
            }
            let piv = a[(col, col)];
            for r in col + 1..n {
                let factor = a[(r, col)] / piv;
                a[(r, col)] = factor;
                for j in col + 1..n {
                    let sub = factor * a[(col, j)];
                    a[(r, j)] = a[(r, j)] - sub;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> F {
        match self.lu() {
            Some((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.rows {
                    d = d * lu[(i, i)];
                }
                d
            }
            None => F::zero(),
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, GeomError> {
        let n = self.rows;
        let (lu, perm, _) = self.lu().ok_or(GeomError::DegenerateSubspace)?;
        let mut x: Vec<F> = perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = lu[(i, j)] * x[j];
                x[i] = x[i] - sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = lu[(i, j)] * x[j];
                x[i] = x[i] - sub;
            }
            x[i] = x[i] / lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<F>, GeomError> {
        let n = self.rows;
        let mut out = Mat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![F::zero(); n];
            e[j] = F::one();
            let col = self.solve(&e)?;
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        Ok(out)
    }
}

impl<F> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower Cholesky factor of a positive-definite symmetric matrix.
pub fn cholesky<F: Real>(g: &SymMatrix<F>) -> Result<Mat<F>, GeomError> {
    let n = g.dim();
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = g.get(i, j);
            for p in 0..j {
                s = s - l[(i, p)] * l[(j, p)];
            }
            if i == j {
                if s <= F::zero() {
                    return Err(GeomError::MetricNotRiemannian);
                }
                l[(i, j)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Forward substitution `L x = b` for lower-triangular `L`.
fn solve_lower<F: Real>(l: &Mat<F>, b: &[F]) -> Vec<F> {
    let n = l.rows;
    let mut x = b.to_vec();
    for i in 0..n {
        for j in 0..i {
            let sub = l[(i, j)] * x[j];
            x[i] = x[i] - sub;
        }
        x[i] = x[i] / l[(i, i)];
    }
    x
}

/// Back substitution `L^T x = b` for lower-triangular `L`.
fn solve_lower_t<F: Real>(l: &Mat<F>, b: &[F]) -> Vec<F> {
    let n = l.rows;
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for j in i + 1..n {
            let sub = l[(j, i)] * x[j];
            x[i] = x[i] - sub;
        }
        x[i] = x[i] / l[(i, i)];
    }
    x
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues ascending with matching orthonormal eigenvectors.
pub fn jacobi_eigen<F: Real>(a: &SymMatrix<F>) -> (Vec<F>, Vec<Vec<F>>) {
    let n = a.dim();
    let mut m = a.to_mat();
    let mut v = Mat::identity(n);
    let tol = F::epsilon() * F::of(1e-2);
    for _sweep in 0..64 {
        let mut off = F::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + m[(i, j)] * m[(i, j)];
            }
        }
        let mut scale = F::zero();
        for i in 0..n {
            scale = scale.max(m[(i, i)].abs());
        }
        if off.sqrt() <= tol * scale.max(F::one()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= tol * scale.max(F::one()) * F::of(1e-3) {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (F::two() * apq);
                let t = {
                    let s = if theta >= F::zero() { F::one() } else { -F::one() };
                    s / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = c * mip - s * miq;
                    m[(i, q)] = s * mip + c * miq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = c * mpj - s * mqj;
                    m[(q, j)] = s * mpj + c * mqj;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }
    let mut pairs: Vec<(F, Vec<F>)> = (0..n)
        .map(|j| (m[(j, j)], (0..n).map(|i| v[(i, j)]).collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let vals = pairs.iter().map(|p| p.0).collect();
    let vecs = pairs.into_iter().map(|p| p.1).collect();
    (vals, vecs)
}

/// Generalized symmetric eigenproblem `h v = lambda g v` with `g` SPD.
///
/// Route: Cholesky `g = L L^T`, Jacobi on `L^{-1} h L^{-T}`, then map the
/// eigenvectors back through `L^{-T}` so they come out g-orthonormal.
/// Eigenvalues ascending.
pub fn generalized_eigen<F: Real>(
    g: &SymMatrix<F>,
    h: &SymMatrix<F>,
) -> Result<(Vec<F>, Vec<Vec<F>>), GeomError> {
    let n = g.dim();
    if h.dim() != n {
        return Err(GeomError::DimensionMismatch {
            expected: n,
            got: h.dim(),
        });
    }
    let l = cholesky(g)?;
    // B = L^{-1} H L^{-T}, built column by column.
    let mut b_cols: Vec<Vec<F>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![F::zero(); n];
        e[j] = F::one();
        let linv_t_col = solve_lower_t(&l, &e);
        let h_col = h.to_mat().mul_vec(&linv_t_col);
        b_cols.push(solve_lower(&l, &h_col));
    }
    let b = SymMatrix::from_fn(n, |i, j| (b_cols[j][i] + b_cols[i][j]) * F::half());
    let (vals, wvecs) = jacobi_eigen(&b);
    let vecs = wvecs
        .into_iter()
        .map(|w| solve_lower_t(&l, &w))
        .collect();
    Ok((vals, vecs))
}

/// Degeneracy threshold for a k x k Gram matrix: |det| < 1e-12 (max entry)^k.
fn gram_degenerate<F: Real>(gram: &Mat<F>) -> bool {
    let k = gram.rows;
    let mut maxabs = F::zero();
    for v in &gram.data {
        maxabs = maxabs.max(v.abs());
    }
    if maxabs == F::zero() {
        return true;
    }
    gram.det().abs() < F::of(1e-12) * maxabs.powi(k as i32)
}

/// Vectors spanning the sig-orthogonal complement of `span(basis)`,
/// normalized to `<v, v> = +-1` and mutually sig-orthogonal.
///
/// Sign convention: each returned vector is scaled so that its last
/// coordinate of magnitude above 1e-9 of the vector norm is positive.
pub fn orthonormal_complement<F: Real>(
    sig: Signature,
    basis: &[AmbientVector<F>],
) -> Result<Vec<AmbientVector<F>>, GeomError> {
    let d = sig.dim;
    let k = basis.len();
    if k >= d {
        return Err(GeomError::RankDeficient);
    }
    for b in basis {
        if b.len() != d {
            return Err(GeomError::DimensionMismatch {
                expected: d,
                got: b.len(),
            });
        }
    }
    let gram = Mat::from_fn(k, k, |i, j| inner(sig, &basis[i], &basis[j]).unwrap());
    if k > 0 && gram_degenerate(&gram) {
        return Err(GeomError::DegenerateSubspace);
    }

    // Project the standard basis onto the complement, keeping a vector
    // whenever it stays independent of those already collected.
    let mut out: Vec<AmbientVector<F>> = Vec::with_capacity(d - k);
    for j in 0..d {
        if out.len() == d - k {
            break;
        }
        let mut v = vec![F::zero(); d];
        v[j] = F::one();
        if k > 0 {
            let rhs: Vec<F> = basis
                .iter()
                .map(|b| inner(sig, b, &v).unwrap())
                .collect();
            let coeff = gram.solve(&rhs)?;
            for (c, b) in coeff.iter().zip(basis) {
                for i in 0..d {
                    v[i] = v[i] - *c * b[i];
                }
            }
        }
        // Pseudo Gram-Schmidt against what we already have.
        for w in &out {
            let ww = inner(sig, w, w).unwrap(); // +-1 after normalization
            let c = inner(sig, w, &v).unwrap() / ww;
            for i in 0..d {
                v[i] = v[i] - c * w[i];
            }
        }
        let vv = inner(sig, &v, &v).unwrap();
        let euclid: F = v.iter().map(|x| *x * *x).sum();
        if vv.abs() < F::of(1e-10) * euclid.max(F::epsilon()) {
            continue; // lightlike or numerically dead direction
        }
        let scale = F::one() / vv.abs().sqrt();
        for x in v.iter_mut() {
            *x = *x * scale;
        }
        canonicalize_sign(&mut v);
        out.push(v);
    }
    if out.len() != d - k {
        return Err(GeomError::DegenerateSubspace);
    }
    Ok(out)
}

/// Flip so the last coordinate with |x_i| > 1e-9 * max|x| is positive.
pub fn canonicalize_sign<F: Real>(v: &mut [F]) {
    let mut maxabs = F::zero();
    for x in v.iter() {
        maxabs = maxabs.max(x.abs());
    }
    let thresh = F::of(1e-9) * maxabs;
    for i in (0..v.len()).rev() {
        if v[i].abs() > thresh {
            if v[i] < F::zero() {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            return;
        }
    }
}
