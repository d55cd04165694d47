//! Definite quaternion algebras over ℚ, Hilbert symbols and maximal orders.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IMat};

pub type Quat = [Rational64; 4];

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut r = 1i64;
    let (mut base, mut e) = (a, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn split_valuation(mut x: i64, p: i64) -> (u32, i64) {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// The local Hilbert symbol `(a, b)_p` for nonzero integers `a, b`.
pub fn hilbert_symbol(a: i64, b: i64, p: u64) -> i64 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    let p = p as i64;
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if p == 2 {
        let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i64| ((x * x - 1) / 8).rem_euclid(2);
        let e = eps(u) * eps(v) + alpha as i64 * omega(v) + beta as i64 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let sign = if (alpha as i64 * beta as i64 * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
        sign * legendre(u, p).pow(beta) * legendre(v, p).pow(alpha)
    }
}

/// The definite algebra `(a, b | ℚ)` with `i^2 = a`, `j^2 = b`, `ij = -ji`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionAlgebra {
    pub a: i64,
    pub b: i64,
    pub discriminant: u64,
}

impl QuaternionAlgebra {
    /// Certifies `(a, b)` and computes its discriminant from Hilbert symbols.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a >= 0 || b >= 0 {
            return Err(Error::Inconsistent(format!("({a},{b}) is not definite")));
        }
        let mut primes: Vec<u64> = prime_factors(2 * (a * b).unsigned_abs()).into_iter().map(|(p, _)| p).collect();
        primes.dedup();
        let discriminant = primes.into_iter().filter(|&p| hilbert_symbol(a, b, p) == -1).product();
        Ok(QuaternionAlgebra { a, b, discriminant })
    }

    pub fn is_split_at(&self, p: u64) -> bool {
        self.discriminant % p != 0
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let a = Rational64::from_integer(self.a);
        let b = Rational64::from_integer(self.b);
        [
            x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1],
        ]
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        [x[0], -x[1], -x[2], -x[3]]
    }

    pub fn trd(&self, x: &Quat) -> Rational64 {
        x[0] * 2
    }

    pub fn nrd(&self, x: &Quat) -> Rational64 {
        let a = Rational64::from_integer(self.a);
        let b = Rational64::from_integer(self.b);
        x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]
    }
}

fn presets(d: u64) -> Option<(i64, i64)> {
    Some(match d {
        2 => (-1, -1),
        3 => (-1, -3),
        5 => (-2, -5),
        7 => (-1, -7),
        11 => (-1, -11),
        13 => (-2, -13),
        _ => return None,
    })
}

/// A certified presentation of the definite algebra ramified exactly at the
/// primes dividing `d` (and at infinity).
pub fn build_algebra(d: u64) -> Result<QuaternionAlgebra> {
    let f = prime_factors(d);
    if d < 2 || f.iter().any(|&(_, e)| e > 1) || f.len() % 2 == 0 {
        return Err(Error::UnsupportedDiscriminant(d));
    }
    if let Some((a, b)) = presets(d) {
        let alg = QuaternionAlgebra::new(a, b)?;
        if alg.discriminant == d {
            return Ok(alg);
        }
    }
    let limit = 8 * d as i64;
    for a in (1..=limit).map(|x| -x) {
        for b in (1..=limit).map(|x| -x) {
            let alg = QuaternionAlgebra::new(a, b)?;
            if alg.discriminant == d {
                return Ok(alg);
            }
        }
    }
    Err(Error::UnsupportedDiscriminant(d))
}

/// A maximal order with `ε_0 = 1`, given by integer numerators over a common
/// denominator in the basis `1, i, j, ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalOrder {
    pub algebra: QuaternionAlgebra,
    pub denominator: i64,
    pub basis: [[i64; 4]; 4],
    /// `ε_l ε_m = Σ_k mult[l][m][k] ε_k`.
    pub mult: [[[i64; 4]; 4]; 4],
    /// `conj(ε_m) = Σ_k conj[m][k] ε_k`.
    pub conj: [[i64; 4]; 4],
    /// `trd(conj(ε_l) ε_m)`.
    pub trace_gram: [[i64; 4]; 4],
}

fn rational_rows(rows: &[[i64; 4]], den: i64) -> Vec<Quat> {
    rows.iter()
        .map(|r| {
            let mut q = [Rational64::zero(); 4];
            for k in 0..4 {
                q[k] = Rational64::new(r[k], den);
            }
            q
        })
        .collect()
}

fn lcm(a: i64, b: i64) -> i64 {
    a / num_integer::gcd(a, b) * b
}

/// Z-span of rational quaternions as an HNF basis over a common denominator;
/// columns are ordered `ij, j, i, 1` so that the last row spans `M ∩ ℚ`.
fn module_hnf(gens: &[Quat]) -> (Vec<[i64; 4]>, i64) {
    let den = gens.iter().flatten().fold(1i64, |d, x| lcm(d, *x.denom()));
    let rows: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| (0..4).rev().map(|k| (g[k] * den).to_integer()).collect())
        .collect();
    let h = amf_core::affine::hermite_normal_form(&rows);
    let out = h.iter().map(|r| [r[3], r[2], r[1], r[0]]).collect();
    (out, den)
}

impl MaximalOrder {
    pub fn element(&self, m: usize) -> Quat {
        rational_rows(&[self.basis[m]], self.denominator)[0]
    }

    /// Integer coordinates of `x` in the order basis, if `x` lies in the order.
    pub fn coords(&self, x: &Quat) -> Option<[i64; 4]> {
        let m = IMat::from_fn(4, 4, |i, j| self.basis[j][i]);
        let inv = linalg::rational_inverse(&m)?;
        let mut out = [0i64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = Rational64::zero();
            for j in 0..4 {
                let c = &inv[i][j];
                let c = Rational64::new(
                    num_traits::ToPrimitive::to_i64(c.numer())?,
                    num_traits::ToPrimitive::to_i64(c.denom())?,
                );
                s += c * x[j] * self.denominator;
            }
            if !s.is_integer() {
                return None;
            }
            *o = s.to_integer();
        }
        Some(out)
    }

    pub fn mul_coords(&self, x: &[i64], y: &[i64]) -> [i64; 4] {
        let mut out = [0i64; 4];
        for l in 0..4 {
            if x[l] == 0 {
                continue;
            }
            for m in 0..4 {
                if y[m] == 0 {
                    continue;
                }
                for k in 0..4 {
                    out[k] += x[l] * y[m] * self.mult[l][m][k];
                }
            }
        }
        out
    }

    pub fn conj_coords(&self, x: &[i64]) -> [i64; 4] {
        let mut out = [0i64; 4];
        for m in 0..4 {
            for k in 0..4 {
                out[k] += x[m] * self.conj[m][k];
            }
        }
        out
    }

    pub fn trd_coords(&self, x: &[i64]) -> i64 {
        (0..4).map(|m| x[m] * self.trace_gram[0][m]).sum()
    }

    pub fn nrd_coords(&self, x: &[i64]) -> i64 {
        let g = IMat::from_fn(4, 4, |i, j| self.trace_gram[i][j]);
        linalg::quad(&g, x) / 2
    }

    /// Reduced discriminant: `sqrt |det(trd(ε_l ε_m))|`.
    pub fn reduced_discriminant(&self) -> u64 {
        reduced_disc(&self.algebra, &rational_rows(&self.basis, self.denominator))
    }

    /// Number of units, i.e. elements of reduced norm 1.
    pub fn unit_count(&self) -> usize {
        let g = IMat::from_fn(4, 4, |i, j| self.trace_gram[i][j]);
        2 * linalg::short_vectors(&g, 2).len()
    }

    fn from_basis(algebra: QuaternionAlgebra, elems: &[Quat]) -> Result<Self> {
        let (rows, den) = module_hnf(elems);
        if rows.len() != 4 || rows[3] != [den, 0, 0, 0] {
            return Err(Error::Saturation("basis does not contain 1 primitively".into()));
        }
        let basis = [rows[3], rows[0], rows[1], rows[2]];
        let mut o = MaximalOrder {
            algebra,
            denominator: den,
            basis,
            mult: [[[0; 4]; 4]; 4],
            conj: [[0; 4]; 4],
            trace_gram: [[0; 4]; 4],
        };
        let e: Vec<Quat> = (0..4).map(|m| o.element(m)).collect();
        for l in 0..4 {
            for m in 0..4 {
                let p = algebra.mul(&e[l], &e[m]);
                o.mult[l][m] = o.coords(&p).ok_or_else(|| Error::Saturation("not closed".into()))?;
                let t = algebra.trd(&algebra.mul(&algebra.conj(&e[l]), &e[m]));
                if !t.is_integer() {
                    return Err(Error::Saturation("non-integral trace".into()));
                }
                o.trace_gram[l][m] = t.to_integer();
            }
            o.conj[l] = o.coords(&algebra.conj(&e[l])).ok_or_else(|| Error::Saturation("conjugation".into()))?;
        }
        Ok(o)
    }
}

fn reduced_disc(alg: &QuaternionAlgebra, elems: &[Quat]) -> u64 {
    // det(trd(e_l e_m)) for a rational basis, as an exact rational
    let mut m = vec![vec![Rational64::zero(); 4]; 4];
    for l in 0..4 {
        for k in 0..4 {
            m[l][k] = alg.trd(&alg.mul(&elems[l], &elems[k]));
        }
    }
    let mut det = Rational64::one();
    for c in 0..4 {
        let Some(p) = (c..4).find(|&r| !m[r][c].is_zero()) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                let t = f * m[c][k];
                m[r][k] -= t;
            }
        }
    }
    let d = det.to_integer().unsigned_abs();
    let s = (d as f64).sqrt().round() as u64;
    assert_eq!(s * s, d, "discriminant of an order is a square");
    s
}

/// Ring generated by a module basis and `x`, if it stays within denominators
/// dividing `max_den`.
fn ring_closure(alg: &QuaternionAlgebra, basis: &[Quat], x: &Quat, max_den: i64) -> Option<Vec<Quat>> {
    let mut gens: Vec<Quat> = basis.to_vec();
    gens.push(*x);
    loop {
        let (rows, den) = module_hnf(&gens);
        if max_den % den != 0 {
            return None;
        }
        let cur = rational_rows(&rows, den);
        let mut more = cur.clone();
        for u in &cur {
            for v in &cur {
                more.push(alg.mul(u, v));
            }
        }
        let (rows2, den2) = module_hnf(&more);
        if den2 == den && rows2 == rows {
            return Some(cur);
        }
        gens = more;
    }
}

/// A maximal order of `algebra`, found by saturating `Z<1, i, j, ij>` one
/// prime at a time until its reduced discriminant equals the algebra's.
pub fn build_maximal_order(algebra: &QuaternionAlgebra) -> Result<MaximalOrder> {
    let one = Rational64::one();
    let zero = Rational64::zero();
    let mut basis: Vec<Quat> = vec![
        [one, zero, zero, zero],
        [zero, one, zero, zero],
        [zero, zero, one, zero],
        [zero, zero, zero, one],
    ];
    let target = algebra.discriminant;
    let mut disc = reduced_disc(algebra, &basis);
    while disc != target {
        if disc % target != 0 {
            return Err(Error::Saturation(format!("discriminant {disc} vs {target}")));
        }
        let l = prime_factors(disc / target)[0].0 as i64;
        let (rows, den) = module_hnf(&basis);
        let cur = rational_rows(&rows, den);
        let mut improved = None;
        'search: for code in 1..l.pow(4) {
            let mut c = [0i64; 4];
            let mut t = code;
            for ck in c.iter_mut() {
                *ck = t % l;
                t /= l;
            }
            let mut x = [zero; 4];
            for (m, b) in cur.iter().enumerate() {
                for k in 0..4 {
                    x[k] += b[k] * Rational64::new(c[m], l);
                }
            }
            if !algebra.trd(&x).is_integer() || !algebra.nrd(&x).is_integer() {
                continue;
            }
            if let Some(ring) = ring_closure(algebra, &cur, &x, den * l) {
                let d2 = reduced_disc(algebra, &ring);
                if d2 < disc && ring.iter().all(|y| algebra.trd(y).is_integer() && algebra.nrd(y).is_integer()) {
                    improved = Some((ring, d2));
                    break 'search;
                }
            }
        }
        let (ring, d2) = improved.ok_or_else(|| Error::Saturation(format!("stuck at discriminant {disc}")))?;
        basis = ring;
        disc = d2;
    }
    let order = MaximalOrder::from_basis(*algebra, &basis)?;
    if order.reduced_discriminant() != target {
        return Err(Error::Saturation("certificate mismatch".into()));
    }
    Ok(order)
}
