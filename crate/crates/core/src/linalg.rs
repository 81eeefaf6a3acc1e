//! Dense complex matrices and the small eigen/SVD kernels the rest of the
//! crate is built on.
//!
//! Matrices here are tiny (irrep dimensions, at most a few hundred rows), so
//! everything favours robustness and determinism over speed: the eigensolver
//! is a cyclic Jacobi iteration on Hermitian matrices and the SVD is derived
//! from it via the Gram matrix.

use num_complex::Complex64;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kahan compensated accumulator for deterministic sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMat { rows: r, cols: c, data }
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = CMat::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        CMat::from_rows(&converted)
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

    pub fn scale(&self, a: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * a).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for i in 0..self.rows {
            re.add(self[(i, i)].re);
            im.add(self[(i, i)].im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Kronecker product, row-major convention: index `(i*or + k, j*oc + l)`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C_ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        let mut acc = Kahan::new();
        for x in &self.data {
            acc.add(x.norm_sqr());
        }
        acc.value().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        assert_eq!(col.len(), self.rows);
        for (i, &x) in col.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    let mut acc = Kahan::new();
    for x in v {
        acc.add(x.norm_sqr());
    }
    acc.value().sqrt()
}

pub fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // <a, b> = sum conj(a_i) b_i
    let mut re = Kahan::new();
    let mut im = Kahan::new();
    for (x, y) in a.iter().zip(b) {
        let p = x.conj() * y;
        re.add(p.re);
        im.add(p.im);
    }
    Complex64::new(re.value(), im.value())
}

/// Multiply `v` by the phase that makes its first entry with modulus above
/// `tol` real and positive. No effect on the zero vector.
pub fn fix_phase(v: &mut [Complex64], tol: f64) {
    if let Some(x) = v.iter().find(|x| x.norm() > tol) {
        let phase = x.conj() / x.norm();
        for y in v.iter_mut() {
            *y *= phase;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvector columns. Deterministic for fixed input.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    assert!(h.is_square(), "eigh requires a square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMat::identity(n);
    if n == 0 {
        return (vec![], v);
    }
    if n == 1 {
        return (vec![a[(0, 0)].re], v);
    }

    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs <= 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J differs from I only at (p,p)=c, (p,q)=s*phase,
                // (q,p)=-s*conj(phase), (q,q)=c.  Update A <- J^* A J.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s * phase.conj();
                    a[(k, q)] = akp * s * phase + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s * phase;
                    a[(q, k)] = apk * s * phase.conj() + aqk * c;
                }
                a[(p, q)] = C_ZERO;
                a[(q, p)] = C_ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s * phase.conj();
                    v[(k, q)] = vkp * s * phase + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = v.column(old_col);
        vecs.set_column(new_col, &col);
    }
    (vals, vecs)
}

/// Thin singular value decomposition `A = U diag(s) V^*`.
///
/// Singular values come out in descending order. Columns of `U`/`V` beyond
/// the numerical rank are zero; only the nonzero part is reliable.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

/// SVD via the Hermitian eigenproblem on the Gram matrix `A^* A`.
pub fn svd(a: &CMat) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let k = m.min(n);
    // Work with the smaller Gram matrix.
    if n <= m {
        let gram = a.adjoint().matmul(a);
        let (vals, vecs) = eigh(&gram);
        // descending
        let mut s = Vec::with_capacity(k);
        let mut v = CMat::zeros(n, k);
        let mut u = CMat::zeros(m, k);
        // Eigenvalues below the Jacobi noise floor of the Gram matrix are
        // pure rounding; clamping them avoids sqrt turning O(eps) noise
        // into O(sqrt(eps)) spurious singular values.
        let lmax = vals.last().map(|x| x.max(0.0)).unwrap_or(0.0);
        let cutoff = lmax * 1e-14;
        for i in 0..k {
            let idx = n - 1 - i;
            let sv = if vals[idx] > cutoff {
                vals[idx].sqrt()
            } else {
                0.0
            };
            s.push(sv);
            let mut vcol = vecs.column(idx);
            fix_phase(&mut vcol, 1e-12);
            v.set_column(i, &vcol);
            if sv > 0.0 {
                let av: Vec<Complex64> = (0..m)
                    .map(|r| (0..n).map(|c| a[(r, c)] * vcol[c]).sum::<Complex64>() / sv)
                    .collect();
                u.set_column(i, &av);
            }
        }
        Svd { u, s, v }
    } else {
        // A^* has more columns than rows; recurse and swap factors.
        let t = svd(&a.adjoint());
        Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        }
    }
}

/// Modified Gram-Schmidt with re-orthogonalization.
///
/// Returns an orthonormal basis (as columns) for the span of the input
/// columns, accepting a column only when its residual exceeds `tol` times
/// its original norm scale. Deterministic: columns processed left to right.
pub fn orthonormal_columns(a: &CMat, tol: f64) -> CMat {
    let m = a.rows();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let scale = a.max_abs().max(1e-300);
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _pass in 0..2 {
            for b in &basis {
                let c = vec_dot(b, &v);
                for i in 0..m {
                    v[i] -= c * b[i];
                }
            }
        }
        let nrm = vec_norm(&v);
        if nrm > tol * scale {
            for x in v.iter_mut() {
                *x /= nrm;
            }
            fix_phase(&mut v, 1e-12);
            basis.push(v);
        }
    }
    let mut out = CMat::zeros(m, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigh_diagonal() {
        let m = CMat::from_diag(&[c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let (vals, _) = eigh(&m);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_hermitian_random() {
        // Fixed Hermitian matrix with complex off-diagonals.
        let h = CMat::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0), c(0.5, -0.25)],
            vec![c(1.0, -1.0), c(-1.0, 0.0), c(0.0, 2.0)],
            vec![c(0.5, 0.25), c(0.0, -2.0), c(0.5, 0.0)],
        ]);
        let (vals, vecs) = eigh(&h);
        // Residual H v = lambda v
        for i in 0..3 {
            let v = vecs.column(i);
            for r in 0..3 {
                let hv: Complex64 = (0..3).map(|k| h[(r, k)] * v[k]).sum();
                assert!((hv - v[r] * vals[i]).norm() < 1e-12, "residual too big");
            }
        }
        // Orthonormality
        let g = vecs.adjoint().matmul(&vecs);
        assert!(g.sub(&CMat::identity(3)).max_abs() < 1e-13);
    }

    #[test]
    fn svd_rectangular() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 2.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0)],
            vec![c(1.0, -1.0), c(0.0, 0.0)],
        ]);
        let d = svd(&a);
        // Reconstruct
        let mut rec = CMat::zeros(3, 2);
        for i in 0..2 {
            let u = d.u.column(i);
            let v = d.v.column(i);
            for r in 0..3 {
                for cidx in 0..2 {
                    rec[(r, cidx)] += u[r] * d.s[i] * v[cidx].conj();
                }
            }
        }
        assert!(rec.sub(&a).max_abs() < 1e-12);
        assert!(d.s[0] >= d.s[1] && d.s[1] >= 0.0);
    }

    #[test]
    fn gram_schmidt_rank() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        // Column 2 = 2 * column 1, so rank 2.
        let q = orthonormal_columns(&a, 1e-9);
        assert_eq!(q.cols(), 2);
        let g = q.adjoint().matmul(&q);
        assert!(g.sub(&CMat::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn kahan_compensates() {
        let mut k = Kahan::new();
        for _ in 0..1_000_000 {
            k.add(0.1);
        }
        assert!((k.value() - 100_000.0).abs() < 1e-9);
    }
}
