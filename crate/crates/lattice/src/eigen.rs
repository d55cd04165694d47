//! Exact joint eigenspace decomposition of commuting integer matrices.
//!
//! Characteristic polynomials come from the division-free Berkowitz
//! recurrence. Integer roots are located from floating-point eigenvalue
//! estimates and confirmed exactly; what remains is split into squarefree
//! parts, and each part is reported as a minimal polynomial.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{self, HeckeMatrix};

/// Polynomial with coefficients in ascending degree order.
pub type Poly = Vec<BigInt>;
type QMat = Vec<Vec<BigRational>>;
type QPoly = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorLabel {
    pub prime: u64,
    pub word: String,
}

/// An eigenvalue: an integer, or an irreducible monic minimal polynomial
/// (ascending coefficients) when it is irrational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eigenvalue {
    Integer(i128),
    MinPoly { minpoly: Vec<i128> },
}

impl Eigenvalue {
    pub fn degree(&self) -> usize {
        match self {
            Eigenvalue::Integer(_) => 1,
            Eigenvalue::MinPoly { minpoly } => minpoly.len() - 1,
        }
    }
}

impl std::fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Eigenvalue::Integer(v) => write!(f, "{v}"),
            Eigenvalue::MinPoly { minpoly } => {
                let mut terms = Vec::new();
                for (k, c) in minpoly.iter().enumerate().rev() {
                    if *c == 0 {
                        continue;
                    }
                    let mag = c.abs();
                    let body = match (k, mag) {
                        (0, m) => m.to_string(),
                        (1, 1) => "x".into(),
                        (1, m) => format!("{m}x"),
                        (k, 1) => format!("x^{k}"),
                        (k, m) => format!("{m}x^{k}"),
                    };
                    let sign = if *c < 0 { "-" } else { "+" };
                    terms.push(if terms.is_empty() && *c > 0 { body } else { format!("{sign} {body}") });
                }
                write!(f, "{}", terms.join(" "))
            }
        }
    }
}

/// One joint eigenspace: its dimension over `Q` and the eigenvalue of every
/// operator on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointEigenspace {
    pub dimension: usize,
    pub eigenvalues: Vec<(OperatorLabel, Eigenvalue)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenReport {
    pub dimension: usize,
    pub spaces: Vec<JointEigenspace>,
}

/// Flat record for serialization: one operator's eigenvalue on one space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub space: usize,
    pub operators: Vec<OperatorLabel>,
    pub eigenvalue: Eigenvalue,
    pub multiplicity: usize,
}

impl EigenReport {
    pub fn records(&self) -> Vec<EigenRecord> {
        self.spaces
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                s.eigenvalues.iter().map(move |(label, ev)| EigenRecord {
                    space: i,
                    operators: vec![label.clone()],
                    eigenvalue: ev.clone(),
                    multiplicity: s.dimension / ev.degree(),
                })
            })
            .collect()
    }

    /// The eigenvalues of one operator with multiplicities, merged over spaces.
    pub fn spectrum(&self, label: &OperatorLabel) -> Vec<(Eigenvalue, usize)> {
        let mut out: Vec<(Eigenvalue, usize)> = Vec::new();
        for s in &self.spaces {
            for (l, ev) in &s.eigenvalues {
                if l != label {
                    continue;
                }
                let m = s.dimension / ev.degree();
                match out.iter_mut().find(|(e, _)| e == ev) {
                    Some(slot) => slot.1 += m,
                    None => out.push((ev.clone(), m)),
                }
            }
        }
        out
    }
}

fn q(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_qmat(m: &hecke::Matrix) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// `det(xI - A)` by the Berkowitz recurrence, ascending coefficients.
fn charpoly_q(a: &QMat) -> QPoly {
    let n = a.len();
    // descending coefficients of the leading r x r block
    let mut vect: QPoly = vec![BigRational::one()];
    for r in 0..n {
        let mut t: QPoly = Vec::with_capacity(r + 2);
        t.push(BigRational::one());
        t.push(-a[r][r].clone());
        let mut v: Vec<BigRational> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rv: BigRational = (0..r).map(|j| &a[r][j] * &v[j]).sum();
            t.push(-rv);
            v = (0..r).map(|i| (0..r).map(|j| &a[i][j] * &v[j]).sum()).collect();
        }
        let next: QPoly = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &vect[j]).sum())
            .collect();
        vect = next;
    }
    vect.reverse();
    vect
}

/// Characteristic polynomial `det(xI - A)` of an integer matrix.
pub fn charpoly(m: &hecke::Matrix) -> Poly {
    charpoly_q(&to_qmat(m)).into_iter().map(|c| c.to_integer()).collect()
}

fn trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn deg(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

fn eval_q(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Quotient and remainder of `a / b`.
fn divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = deg(b);
    let lead = b[db].clone();
    if r.len() <= db || (r.len() == 1 && r[0].is_zero()) {
        return (vec![BigRational::zero()], r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    for k in (0..quo.len()).rev() {
        let c = &r[k + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        quo[k] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (quo, r)
}

fn is_zero_poly(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn monic(mut p: QPoly) -> QPoly {
    trim(&mut p);
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    if !lead.is_zero() {
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i128)).collect()
}

/// Squarefree decomposition (Yun): monic `(factor, multiplicity)` pairs.
fn squarefree(p: &QPoly) -> Vec<(QPoly, usize)> {
    let p = monic(p.clone());
    if deg(&p) == 0 {
        return Vec::new();
    }
    let dp = derivative(&p);
    let mut a = gcd(&p, &dp);
    let mut b = divmod(&p, &a).0;
    let mut c = divmod(&dp, &a).0;
    let mut d: QPoly = {
        let db = derivative(&b);
        let mut out = c.clone();
        out.resize(out.len().max(db.len()), BigRational::zero());
        for (k, x) in db.iter().enumerate() {
            out[k] -= x;
        }
        trim(&mut out);
        out
    };
    let mut out = Vec::new();
    let mut k = 1;
    while deg(&b) > 0 {
        a = gcd(&b, &d);
        if deg(&a) > 0 {
            out.push((a.clone(), k));
        }
        b = divmod(&b, &a).0;
        c = divmod(&d, &a).0;
        let db = derivative(&b);
        d = c.clone();
        d.resize(d.len().max(db.len()), BigRational::zero());
        for (j, x) in db.iter().enumerate() {
            d[j] -= x;
        }
        trim(&mut d);
        k += 1;
    }
    out
}

/// Irreducible-or-raw factors of the characteristic polynomial of `a`:
/// `(monic factor, multiplicity)`, integer roots first.
fn factor_charpoly(a: &QMat) -> Vec<(QPoly, usize)> {
    let mut rest = charpoly_q(a);
    let n = a.len();
    let approx = DMatrix::from_fn(n, n, |i, j| a[i][j].to_f64().unwrap_or(f64::NAN));
    let mut candidates: Vec<BigInt> = approx
        .complex_eigenvalues()
        .iter()
        .flat_map(|z| {
            let r = z.re.round();
            [r - 1.0, r, r + 1.0]
        })
        .filter(|x| x.is_finite())
        .map(|x| BigInt::from(x as i128))
        .collect();
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for r in candidates {
        let root = BigRational::from_integer(r.clone());
        let lin = vec![-root.clone(), BigRational::one()];
        let mut mult = 0;
        while deg(&rest) > 0 && eval_q(&rest, &root).is_zero() {
            rest = divmod(&rest, &lin).0;
            mult += 1;
        }
        if mult > 0 {
            out.push((lin, mult));
        }
    }
    out.extend(squarefree(&rest));
    out
}

fn mat_mul_q(a: &QMat, b: &QMat) -> QMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..m).map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect())
        .collect()
}

fn poly_of_matrix(p: &QPoly, a: &QMat) -> QMat {
    let n = a.len();
    let mut acc: QMat = vec![vec![BigRational::zero(); n]; n];
    for c in p.iter().rev() {
        acc = mat_mul_q(&acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

fn mat_pow(a: &QMat, k: usize) -> QMat {
    let n = a.len();
    let mut acc: QMat = (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    for _ in 0..k {
        acc = mat_mul_q(&acc, a);
    }
    acc
}

/// Row reduction over `Q`; returns pivot columns and keeps nonzero rows.
fn rref(rows: &mut QMat) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel of `a` (vectors `x` with `a x = 0`).
fn kernel(a: &QMat, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut rows = a.clone();
    let pivots = rref(&mut rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Matrix of `a` restricted to the invariant subspace spanned by the
/// columns `basis` (given as a list of vectors).
fn restrict(a: &QMat, basis: &[Vec<BigRational>]) -> QMat {
    let k = basis.len();
    let h = a.len();
    // solve B M = A B through k independent rows of B
    let images: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|v| (0..h).map(|i| a[i].iter().zip(v).map(|(x, y)| x * y).sum()).collect())
        .collect();
    // augmented rows [B^T | (AB)^T]^T restricted to pivot rows of B
    let mut bt: QMat = (0..h).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect();
    let mut aug: QMat = (0..h)
        .map(|i| {
            let mut row: Vec<BigRational> = bt[i].clone();
            row.extend(images.iter().map(|w| w[i].clone()));
            row
        })
        .collect();
    bt.clear();
    rref(&mut aug);
    // the first k rows now read [I | M]
    (0..k).map(|i| aug[i][k..2 * k].to_vec()).collect()
}

fn to_eigenvalue(f: &QPoly) -> Result<Eigenvalue> {
    let ints: Option<Vec<i128>> = f.iter().map(|c| if c.is_integer() { c.to_integer().to_i128() } else { None }).collect();
    let ints = ints.ok_or_else(|| Error::Inconsistent("non-integral characteristic factor".into()))?;
    Ok(if ints.len() == 2 { Eigenvalue::Integer(-ints[0]) } else { Eigenvalue::MinPoly { minpoly: ints } })
}

/// Joint eigenspaces of pairwise commuting operators on the same classes.
pub fn eigen_report(ops: &[HeckeMatrix]) -> Result<EigenReport> {
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !hecke::commute(&a.matrix, &b.matrix) {
                return Err(Error::NotCommuting);
            }
        }
    }
    let h = ops.first().map_or(0, |o| o.matrix.len());
    let unit: Vec<Vec<BigRational>> = (0..h)
        .map(|i| (0..h).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut spaces: Vec<(Vec<Vec<BigRational>>, Vec<(OperatorLabel, Eigenvalue)>)> = vec![(unit, Vec::new())];
    for op in ops {
        let a = to_qmat(&op.matrix);
        let label = OperatorLabel { prime: op.prime, word: op.word.clone() };
        let mut next = Vec::new();
        for (basis, values) in spaces {
            let m = restrict(&a, &basis);
            let k = m.len();
            for (f, mult) in factor_charpoly(&m) {
                let gen = mat_pow(&poly_of_matrix(&f, &m), mult);
                let sub: Vec<Vec<BigRational>> = kernel(&gen, k)
                    .into_iter()
                    .map(|c| (0..h).map(|i| c.iter().zip(&basis).map(|(x, v)| x * &v[i]).sum()).collect())
                    .collect();
                let mut values = values.clone();
                values.push((label.clone(), to_eigenvalue(&f)?));
                next.push((sub, values));
            }
        }
        spaces = next;
    }
    let spaces = spaces
        .into_iter()
        .map(|(basis, eigenvalues)| JointEigenspace { dimension: basis.len(), eigenvalues })
        .collect();
    Ok(EigenReport { dimension: h, spaces })
}

/// Integer roots by divisor search over the constant term, capped by the
/// Cauchy bound. Exact but slow for large coefficients; an oracle for the
/// floating-point route.
pub fn integer_roots(p: &Poly) -> Vec<BigInt> {
    let qp: QPoly = p.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut roots = Vec::new();
    if qp.iter().all(|c| c.is_zero()) {
        return roots;
    }
    let lead = qp.iter().rev().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigRational::one);
    let bound: BigInt = qp.iter().map(|c| (c / &lead).abs().ceil().to_integer()).max().unwrap_or_default() + 1;
    // all integer roots divide the constant term once zero roots are removed
    let mut stripped = qp.clone();
    while stripped.len() > 1 && stripped[0].is_zero() {
        stripped.remove(0);
        if !roots.contains(&BigInt::zero()) {
            roots.push(BigInt::zero());
        }
    }
    let c0 = stripped[0].to_integer().abs();
    let mut d = BigInt::one();
    while d <= bound && d <= c0 {
        if c0.is_multiple_of(&d) {
            for r in [d.clone(), -d.clone()] {
                if eval_q(&stripped, &BigRational::from_integer(r.clone())).is_zero() {
                    roots.push(r);
                }
            }
        }
        d += 1;
    }
    roots.sort();
    roots
}
