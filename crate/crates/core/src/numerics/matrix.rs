//! Dense complex matrices with the handful of operations the Fock-space
//! checks need: products, LU solves, exponential and principal logarithm.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{real, Real, C};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = real(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major data. Panics if the length does not match.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
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

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| *x * k).collect(),
        }
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(real(k))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o = *o + a * *b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(C::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|x| x.norm()).fold(T::zero(), T::max)
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    pub fn lu(&self) -> Result<Lu<T>> {
        Lu::new(self)
    }

    pub fn solve_vec(&self, b: &[C<T>]) -> Result<Vec<C<T>>> {
        Ok(self.lu()?.solve_vec(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.lu()?.solve_mat(&Self::identity(self.rows)))
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidInput("LU of a non-square matrix".into()));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        let tiny = scale * T::epsilon() * T::lit(1e-3);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > tiny) {
                return Err(Error::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(p, j)];
                    lu[(p, j)] = lu[(k, j)];
                    lu[(k, j)] = tmp;
                }
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let d = f * lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - d;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.lu.rows;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let d = self.lu[(i, j)] * x[j];
                x[i] = x[i] - d;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let d = self.lu[(i, j)] * x[j];
                x[i] = x[i] - d;
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }

    pub fn solve_mat(&self, b: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(b.rows, b.cols);
        let mut col = vec![C::new(T::zero(), T::zero()); b.rows];
        for j in 0..b.cols {
            for (i, c) in col.iter_mut().enumerate() {
                *c = b[(i, j)];
            }
            let x = self.solve_vec(&col);
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by degree-13 Padé approximation with scaling and squaring.
pub fn mat_exp<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.is_square(), "mat_exp of a non-square matrix");
    let n = a.rows;
    let norm = a.norm_one().to_f64_lossy();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale_real(T::lit(2f64.powi(-s)));
    let b = |k: usize| T::lit(PADE13[k]);
    let id = CMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let lin = |c6: T, c4: T, c2: T, c0: T| -> CMatrix<T> {
        let mut m = a6.scale_real(c6);
        m = &m + &a4.scale_real(c4);
        m = &m + &a2.scale_real(c2);
        &m + &id.scale_real(c0)
    };
    let inner_u = a6.matmul(&lin(b(13), b(11), b(9), T::zero()));
    let u = a.matmul(&(&inner_u + &lin(b(7), b(5), b(3), b(1))));
    let inner_v = a6.matmul(&lin(b(12), b(10), b(8), T::zero()));
    let v = &inner_v + &lin(b(6), b(4), b(2), b(0));
    let num = &v + &u;
    let den = &v - &u;
    let mut r = den
        .lu()
        .expect("Padé denominator is nonsingular after scaling")
        .solve_mat(&num);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    r
}

fn sqrt_denman_beavers<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.rows;
    let mut y = a.clone();
    let mut z = CMatrix::identity(n);
    let tol = T::epsilon() * T::lit(n as f64 * 10.0);
    for _ in 0..100 {
        let yi = y
            .inverse()
            .map_err(|_| Error::LogBranch("singular matrix square root".into()))?;
        let zi = z
            .inverse()
            .map_err(|_| Error::LogBranch("singular matrix square root".into()))?;
        let half = T::lit(0.5);
        let yn = (&y + &zi).scale_real(half);
        let zn = (&z + &yi).scale_real(half);
        let delta = (&yn - &y).norm_fro();
        let size = yn.norm_fro();
        y = yn;
        z = zn;
        if delta <= tol * size {
            return Ok(y);
        }
    }
    Err(Error::LogBranch(
        "square-root iteration did not converge (eigenvalue on the negative real axis?)".into(),
    ))
}

/// Principal matrix logarithm by inverse scaling and squaring.
pub fn mat_log_principal<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !a.is_square() {
        return Err(Error::InvalidInput("log of a non-square matrix".into()));
    }
    if a.rows == 2 {
        return log2x2_principal(a);
    }
    let n = a.rows;
    let id = CMatrix::identity(n);
    let mut x = a.clone();
    let mut k = 0;
    while (&x - &id).norm_one() > T::lit(0.25) {
        x = sqrt_denman_beavers(&x)?;
        k += 1;
        if k > 64 {
            return Err(Error::LogBranch("too many square roots".into()));
        }
    }
    let e = &x - &id;
    let mut term = e.clone();
    let mut sum = e.clone();
    for j in 2..200 {
        term = term.matmul(&e);
        let coeff = if j % 2 == 0 { -T::one() } else { T::one() } / T::lit(j as f64);
        let add = term.scale_real(coeff);
        let small = add.norm_one() <= T::epsilon() * sum.norm_one().max(T::min_positive_value());
        sum = &sum + &add;
        if small {
            break;
        }
    }
    Ok(sum.scale_real(T::lit(2f64.powi(k))))
}

fn roots2<T: Real>(a: &CMatrix<T>) -> (C<T>, C<T>, C<T>) {
    let two = T::lit(2.0);
    let tau = a.trace() / two;
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let delta = (tau * tau - det).sqrt();
    // Pick the larger root first; the smaller follows from the determinant.
    let big = if (tau + delta).norm() >= (tau - delta).norm() {
        tau + delta
    } else {
        tau - delta
    };
    let small = if big.norm() > T::zero() { det / big } else { tau - delta };
    (tau, big, small)
}

/// Closed-form 2x2 exponential.
pub fn exp2x2<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.rows == 2 && a.cols == 2, "exp2x2 needs a 2x2 matrix");
    let tau = a.trace() / T::lit(2.0);
    let n = &(a.clone()) - &CMatrix::identity(2).scale(tau);
    let q2 = n[(0, 0)] * n[(0, 0)] + n[(0, 1)] * n[(1, 0)];
    let q = q2.sqrt();
    let (ch, shc) = if q.norm() < T::lit(1e-4) {
        let one = real(T::one());
        (
            one + q2 / T::lit(2.0) + q2 * q2 / T::lit(24.0),
            one + q2 / T::lit(6.0) + q2 * q2 / T::lit(120.0),
        )
    } else {
        (q.cosh(), q.sinh() / q)
    };
    let e = tau.exp();
    let mut out = n.scale(shc * e);
    out[(0, 0)] = out[(0, 0)] + ch * e;
    out[(1, 1)] = out[(1, 1)] + ch * e;
    out
}

/// Closed-form principal logarithm of a 2x2 matrix. Fails if an eigenvalue
/// lies on the closed negative real axis.
pub fn log2x2_principal<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    assert!(a.rows == 2 && a.cols == 2, "log2x2 needs a 2x2 matrix");
    let (tau, l1, l2) = roots2(a);
    log2x2_with_roots(a, tau, l1, l2)
}

/// Principal log of a 2x2 matrix known to have unit determinant. Uses that
/// fact instead of the computed determinant, which cancels badly when the
/// entries are large.
pub fn log2x2_unimodular<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    assert!(a.rows == 2 && a.cols == 2, "log2x2 needs a 2x2 matrix");
    let tau = a.trace() / T::lit(2.0);
    let one = real(T::one());
    let delta = ((tau - one) * (tau + one)).sqrt();
    let big = if (tau + delta).norm() >= (tau - delta).norm() {
        tau + delta
    } else {
        tau - delta
    };
    log2x2_with_roots(a, tau, big, one / big)
}

fn log2x2_with_roots<T: Real>(a: &CMatrix<T>, tau: C<T>, l1: C<T>, l2: C<T>) -> Result<CMatrix<T>> {
    let scale = a.max_abs().max(T::min_positive_value());
    let bad = |l: C<T>| l.re <= T::zero() && l.im.abs() <= T::epsilon() * scale * T::lit(16.0);
    if bad(l1) || bad(l2) {
        return Err(Error::LogBranch(format!(
            "eigenvalue on the non-positive real axis ({}, {})",
            l1, l2
        )));
    }
    let (g1, g2) = (l1.ln(), l2.ln());
    let diff = l1 - l2;
    // Divided difference of log between the two eigenvalues.
    let dd = if diff.norm() <= T::lit(1e-4) * l1.norm() {
        let m = (l1 + l2) / T::lit(2.0);
        let h = diff / T::lit(2.0);
        let x2 = (h / m) * (h / m);
        (real(T::one()) + x2 / T::lit(3.0) + x2 * x2 / T::lit(5.0)) / m
    } else {
        (g1 - g2) / diff
    };
    let n = &(a.clone()) - &CMatrix::identity(2).scale(tau);
    let mut out = n.scale(dd);
    let mid = (g1 + g2) / T::lit(2.0);
    out[(0, 0)] = out[(0, 0)] + mid;
    out[(1, 1)] = out[(1, 1)] + mid;
    Ok(out)
}
