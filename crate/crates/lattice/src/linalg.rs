//! Small dense integer and mod-p linear algebra: exact determinants and
//! inverses, row reduction over `F_p`, sublattices of the form
//! `{x : x mod p in S}`, LLL reduction of Gram matrices and Fincke–Pohst
//! short-vector enumeration.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IMat = DMatrix<i64>;

pub fn modp(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

pub fn inv_mod(x: i64, p: i64) -> i64 {
    let x = modp(x, p);
    let (mut a, mut b, mut u, mut v) = (x, p, 1i64, 0i64);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (u, v) = (v, u - t * v);
    }
    debug_assert_eq!(a, 1, "{x} not invertible mod {p}");
    modp(u, p)
}

/// Reduced row echelon form over `F_p` in place; returns pivot columns.
/// Zero rows are removed.
pub fn rref_mod(rows: &mut Vec<Vec<i64>>, p: i64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = modp(*x, p);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..ncols {
                    rows[k][j] = modp(rows[k][j] - f * rows[r][j], p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut r = rows.to_vec();
    rref_mod(&mut r, p).len()
}

/// Basis (rows, in RREF) of the right kernel `{x : A x = 0}` of `a` over `F_p`.
pub fn kernel_mod(a: &[Vec<i64>], ncols: usize, p: i64) -> Vec<Vec<i64>> {
    let mut r = a.to_vec();
    let pivots = rref_mod(&mut r, p);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = modp(-r[i][f], p);
        }
        basis.push(v);
    }
    let mut out = basis;
    rref_mod(&mut out, p);
    out
}

/// The sublattice `{x in Z^m : x mod p in S}` for a subspace `S` given in RREF.
#[derive(Debug, Clone)]
pub struct ModSublattice {
    pub p: i64,
    pub dim: usize,
    pub rows: Vec<Vec<i64>>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl ModSublattice {
    pub fn new(span: &[Vec<i64>], dim: usize, p: i64) -> Self {
        let mut rows = span.to_vec();
        let pivots = if rows.is_empty() { vec![] } else { rref_mod(&mut rows, p) };
        let free = (0..dim).filter(|c| !pivots.contains(c)).collect();
        ModSublattice { p, dim, rows, pivots, free }
    }

    /// Basis as matrix columns: the lifted RREF rows followed by `p e_j` for
    /// non-pivot `j`.
    pub fn basis(&self) -> IMat {
        let mut b = IMat::zeros(self.dim, self.dim);
        for (k, r) in self.rows.iter().enumerate() {
            for (i, &x) in r.iter().enumerate() {
                b[(i, k)] = x;
            }
        }
        for (k, &j) in self.free.iter().enumerate() {
            b[(j, self.rows.len() + k)] = self.p;
        }
        b
    }

    /// Coordinates of `y` in [`Self::basis`], or `None` if `y` is not in the sublattice.
    pub fn coords(&self, y: &[i64]) -> Option<Vec<i64>> {
        let mut r = y.to_vec();
        let mut out = vec![0; self.dim];
        for (k, &c) in self.pivots.iter().enumerate() {
            let a = r[c];
            out[k] = a;
            if a != 0 {
                for (x, s) in r.iter_mut().zip(&self.rows[k]) {
                    *x -= a * s;
                }
            }
        }
        for (k, &j) in self.free.iter().enumerate() {
            if r[j] % self.p != 0 {
                return None;
            }
            out[self.rows.len() + k] = r[j] / self.p;
        }
        Some(out)
    }

    /// `B^{-1} M B` for an integer matrix `M` preserving the sublattice.
    pub fn conjugate(&self, m: &IMat) -> Option<IMat> {
        let b = self.basis();
        let mb = m * &b;
        let mut out = IMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col: Vec<i64> = mb.column(j).iter().copied().collect();
            let c = self.coords(&col)?;
            for i in 0..self.dim {
                out[(i, j)] = c[i];
            }
        }
        Some(out)
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IMat) -> i128 {
    let n = m.nrows();
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&s| a[s][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Exact inverse over the rationals.
pub fn rational_inverse(m: &IMat) -> Option<Vec<Vec<BigRational>>> {
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(m[(i, j)]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !a[k][c].is_zero())?;
        a.swap(c, k);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..n {
            if k != c && !a[k][c].is_zero() {
                let f = a[k][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[k][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `(adj, d)` with `m * adj = d * I`, where `d` is the positive common
/// denominator of `m^{-1}`.
pub fn scaled_inverse(m: &IMat) -> Option<(Vec<Vec<i128>>, i128)> {
    let inv = rational_inverse(m)?;
    let mut d = BigInt::one();
    for x in inv.iter().flatten() {
        let den = x.denom().clone();
        d = num_integer::Integer::lcm(&d, &den);
    }
    let adj = inv
        .iter()
        .map(|r| r.iter().map(|x| (x * &d).to_integer().to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((adj, d.abs().to_i128()?))
}

/// Exact `X` with `X * m = c * I` inverse application: returns `a * m^{-1}`
/// if it is integral.
pub fn right_divide(a: &IMat, adj: &[Vec<i128>], d: i128) -> Option<IMat> {
    let n = adj.len();
    let mut out = IMat::zeros(a.nrows(), n);
    for i in 0..a.nrows() {
        for j in 0..n {
            let mut s = 0i128;
            for k in 0..n {
                s += a[(i, k)] as i128 * adj[k][j];
            }
            if s % d != 0 {
                return None;
            }
            out[(i, j)] = i64::try_from(s / d).ok()?;
        }
    }
    Some(out)
}

fn gso(g: &IMat) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.nrows();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[(i, j)] as f64;
            for k in 0..j {
                s -= mu[j][k] * r[i][k];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = s / b[j];
            }
        }
        b[i] = r[i][i];
    }
    (mu, b)
}

/// LLL reduction (δ = 0.99) of a positive definite Gram matrix. Returns the
/// unimodular transform `T` (new basis = old basis · T) and its inverse.
pub fn lll(gram: &IMat) -> (IMat, IMat) {
    let n = gram.nrows();
    let mut g = gram.clone();
    let mut t = IMat::identity(n, n);
    let mut tinv = IMat::identity(n, n);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                // b_k -= q b_j
                for i in 0..n {
                    t[(i, k)] -= q * t[(i, j)];
                    tinv[(j, i)] += q * tinv[(k, i)];
                }
                for i in 0..n {
                    g[(k, i)] -= q * g[(j, i)];
                }
                for i in 0..n {
                    g[(i, k)] -= q * g[(i, j)];
                }
            }
        }
        let (mu, b) = gso(&g);
        if b[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            t.swap_columns(k, k - 1);
            tinv.swap_rows(k, k - 1);
            g.swap_columns(k, k - 1);
            g.swap_rows(k, k - 1);
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
    (t, tinv)
}

/// All nonzero `x` with `x^T G x <= bound`, one of each `±x` pair (first
/// nonzero coordinate positive), with their norms.
pub fn short_vectors(g: &IMat, bound: i64) -> Vec<(Vec<i64>, i64)> {
    let n = g.nrows();
    // Cholesky-type decomposition: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[(i, j)] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let eps = 1e-6 * (bound as f64 + 1.0);
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut t = vec![0.0f64; n];
    let mut c = vec![0.0f64; n];
    let mut ub = vec![0i64; n];
    t[n - 1] = bound as f64;
    let mut i = n - 1;
    // set bounds for coordinate i
    let set = |i: usize, t: &[f64], x: &mut [i64], c: &mut [f64], ub: &mut [i64]| {
        let mut s = 0.0;
        for j in i + 1..n {
            s += q[i][j] * x[j] as f64;
        }
        c[i] = -s;
        let z = ((t[i] + eps).max(0.0) / q[i][i]).sqrt();
        ub[i] = (c[i] + z).floor() as i64;
        x[i] = (c[i] - z).ceil() as i64 - 1;
    };
    set(i, &t, &mut x, &mut c, &mut ub);
    loop {
        x[i] += 1;
        if x[i] > ub[i] {
            if i == n - 1 {
                break;
            }
            i += 1;
            continue;
        }
        if i > 0 {
            let d = x[i] as f64 - c[i];
            t[i - 1] = t[i] - q[i][i] * d * d;
            i -= 1;
            set(i, &t, &mut x, &mut c, &mut ub);
            continue;
        }
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let first = x.iter().find(|&&v| v != 0).copied().unwrap_or(0);
        if first < 0 {
            continue;
        }
        let norm = quad(g, &x);
        if norm <= bound {
            out.push((x.clone(), norm));
        }
    }
    out
}

pub fn quad(g: &IMat, x: &[i64]) -> i64 {
    bilinear(g, x, x)
}

pub fn bilinear(g: &IMat, x: &[i64], y: &[i64]) -> i64 {
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut r = 0i64;
        for j in 0..n {
            r += g[(i, j)] * y[j];
        }
        s += x[i] * r;
    }
    s
}

pub fn mat_vec(m: &IMat, x: &[i64]) -> Vec<i64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = IMat::from_row_slice(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        assert_eq!(det(&m), 18);
        let (adj, d) = scaled_inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| m[(i, k)] as i128 * adj[k][j]).sum();
                assert_eq!(s, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn mod_p_kernel() {
        let a = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        let k = kernel_mod(&a, 4, 2);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &a {
                assert_eq!(r.iter().zip(v).map(|(x, y)| x * y).sum::<i64>() % 2, 0);
            }
        }
    }

    #[test]
    fn mod_sublattice_coordinates() {
        let s = ModSublattice::new(&[vec![1, 2, 0]], 3, 3);
        let b = s.basis();
        assert_eq!(det(&b).abs(), 9);
        let y = vec![4, 2, 6];
        let c = s.coords(&y).unwrap();
        assert_eq!(mat_vec(&b, &c), y);
        assert!(s.coords(&[1, 0, 0]).is_none());
    }

    #[test]
    fn lll_and_short_vectors_on_a2() {
        // A2 root lattice in a skewed basis
        let g0 = IMat::from_row_slice(2, 2, &[2, -1, -1, 2]);
        let u = IMat::from_row_slice(2, 2, &[1, 5, 0, 1]);
        let g = u.transpose() * &g0 * &u;
        let (t, tinv) = lll(&g);
        assert_eq!(&t * &tinv, IMat::identity(2, 2));
        let red = t.transpose() * &g * &t;
        assert!(red[(0, 0)] == 2 && red[(1, 1)] == 2);
        let sv = short_vectors(&red, 2);
        assert_eq!(sv.len(), 3);
        assert_eq!(short_vectors(&red, 6).len(), 6);
    }
}
