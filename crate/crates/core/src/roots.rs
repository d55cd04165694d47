//! Root data of the split simple types A-G and their finite Weyl groups.
//!
//! Everything is built from a Euclidean realization of the simple roots. Internally
//! roots are stored by their coefficients in the simple roots and coweights by their
//! pairings with the simple roots ("coweight coordinates"), so all hot-path
//! arithmetic is over `i64`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type QVec = Vec<Rational64>;

/// Default bound on the order of enumerated finite groups.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(Error::UnknownSeries(s.to_string())),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(Error::InvalidType {
                series: series.letter(),
                rank,
            })
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

fn unit(dim: usize, i: usize) -> QVec {
    let mut v = vec![Rational64::zero(); dim];
    v[i] = Rational64::one();
    v
}

fn diff(dim: usize, i: usize, j: usize) -> QVec {
    let mut v = unit(dim, i);
    v[j] -= Rational64::one();
    v
}

fn scaled(v: QVec, s: i64) -> QVec {
    v.into_iter().map(|x| x * s).collect()
}

fn half(num: &[i64]) -> QVec {
    num.iter().map(|&x| Rational64::new(x, 2)).collect()
}

fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Simple roots in the usual Euclidean realizations, Bourbaki numbering except
/// that G2 lists the long simple root first.
fn simple_roots_euclid(t: CartanType) -> (usize, Vec<QVec>) {
    let n = t.rank;
    match t.series {
        Series::A => (n + 1, (0..n).map(|i| diff(n + 1, i, i + 1)).collect()),
        Series::B => {
            let mut s: Vec<QVec> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(unit(n, n - 1));
            (n, s)
        }
        Series::C => {
            let mut s: Vec<QVec> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(scaled(unit(n, n - 1), 2));
            (n, s)
        }
        Series::D => {
            let mut s: Vec<QVec> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            let mut last = unit(n, n - 2);
            last[n - 1] = Rational64::one();
            s.push(last);
            (n, s)
        }
        Series::E => {
            let mut s = vec![
                half(&[1, -1, -1, -1, -1, -1, -1, 1]),
                {
                    let mut v = unit(8, 0);
                    v[1] = Rational64::one();
                    v
                },
            ];
            for i in 0..6 {
                s.push(diff(8, i + 1, i));
            }
            s.truncate(n);
            (8, s)
        }
        Series::F => (
            4,
            vec![
                diff(4, 1, 2),
                diff(4, 2, 3),
                unit(4, 3),
                half(&[1, -1, -1, -1]),
            ],
        ),
        // long root first, so that the affine node is attached to node 1
        Series::G => (
            3,
            vec![
                vec![
                    Rational64::from(-2),
                    Rational64::one(),
                    Rational64::one(),
                ],
                diff(3, 0, 1),
            ],
        ),
    }
}

/// Exact root datum of one irreducible split type.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub ambient_dim: usize,
    pub simple_euclid: Vec<QVec>,
    /// `cartan[i][j] = <alpha_i^vee, alpha_j>`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    /// Coroots of the positive roots in coweight coordinates, aligned with `positive_roots`.
    pub positive_coroots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    /// Coweight coordinates of the highest coroot `alpha_0^vee`.
    pub highest_coroot: Vec<i64>,
    inner: Vec<Vec<Rational64>>,
    cartan_inverse: Vec<Vec<Rational64>>,
}

impl RootDatum {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let t = CartanType::new(series, rank)?;
        let (ambient_dim, simple) = simple_roots_euclid(t);
        let n = rank;
        let inner: Vec<Vec<Rational64>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&simple[i], &simple[j])).collect())
            .collect();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = inner[i][j] * 2 / inner[i][i];
                        debug_assert!(c.is_integer());
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();

        // closure of the simple roots under simple reflections
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let pair: i64 = (0..n).map(|k| r[k] * cartan[i][k]).sum();
                let mut s = r.clone();
                s[i] -= pair;
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> =
            seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });

        let mut datum = RootDatum {
            cartan_type: t,
            ambient_dim,
            simple_euclid: simple,
            cartan,
            positive_roots: Vec::new(),
            positive_coroots: Vec::new(),
            highest_root: positive.last().cloned().unwrap_or_default(),
            highest_coroot: Vec::new(),
            inner,
            cartan_inverse: Vec::new(),
        };
        datum.positive_coroots = positive.iter().map(|r| datum.coroot(r)).collect();
        datum.highest_coroot = datum.coroot(&datum.highest_root);
        datum.positive_roots = positive;
        datum.cartan_inverse = rational_inverse(&datum.cartan);
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// All roots: positive roots followed by their negatives.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let mut all = self.positive_roots.clone();
        all.extend(
            self.positive_roots
                .iter()
                .map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()),
        );
        all
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    /// Euclidean inner product of two roots given in simple-root coordinates.
    pub fn root_inner(&self, a: &[i64], b: &[i64]) -> Rational64 {
        let n = self.rank();
        let mut s = Rational64::zero();
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += self.inner[i][j] * (a[i] * b[j]);
            }
        }
        s
    }

    /// Coweight coordinates of the coroot of `root`.
    pub fn coroot(&self, root: &[i64]) -> Vec<i64> {
        let n = self.rank();
        let norm = self.root_inner(root, root);
        (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let c = self.root_inner(root, &e) * 2 / norm;
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect()
    }

    /// `<lambda, alpha>` for a coweight in coweight coordinates and a root in simple-root coordinates.
    pub fn pairing(&self, coweight: &[i64], root: &[i64]) -> i64 {
        coweight.iter().zip(root).map(|(a, b)| a * b).sum()
    }

    pub fn euclid_root(&self, root: &[i64]) -> QVec {
        let mut v = vec![Rational64::zero(); self.ambient_dim];
        for (c, s) in root.iter().zip(&self.simple_euclid) {
            for (x, y) in v.iter_mut().zip(s) {
                *x += y * *c;
            }
        }
        v
    }

    /// Euclidean coroot `2 alpha / <alpha, alpha>`.
    pub fn euclid_coroot(&self, root: &[i64]) -> QVec {
        let norm = self.root_inner(root, root);
        self.euclid_root(root)
            .into_iter()
            .map(|x| x * 2 / norm)
            .collect()
    }

    /// Euclidean vector of the coweight with the given coweight coordinates.
    pub fn coweight_to_euclid(&self, coweight: &[i64]) -> QVec {
        // sum_i c_i omega_i^vee with omega_i^vee = sum_k (C^-1)_{ik} alpha_k^vee
        let n = self.rank();
        let mut v = vec![Rational64::zero(); self.ambient_dim];
        for k in 0..n {
            let coef: Rational64 = (0..n)
                .map(|i| self.cartan_inverse[i][k] * coweight[i])
                .sum();
            if coef.is_zero() {
                continue;
            }
            let mut e = vec![0; n];
            e[k] = 1;
            for (x, y) in v.iter_mut().zip(self.euclid_coroot(&e)) {
                *x += y * coef;
            }
        }
        v
    }

    pub fn fundamental_coweight(&self, i: usize) -> QVec {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        self.coweight_to_euclid(&c)
    }

    /// Coweight coordinates of a Euclidean vector (its pairings with the simple roots).
    pub fn euclid_to_coweight(&self, v: &[Rational64]) -> Result<Vec<i64>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let coords: Vec<Rational64> = self.simple_euclid.iter().map(|s| dot(v, s)).collect();
        if coords.iter().any(|c| !c.is_integer()) {
            return Err(Error::NotInLattice);
        }
        let cw: Vec<i64> = coords.iter().map(|c| c.to_integer()).collect();
        // reject components orthogonal to the span of the roots
        if self.coweight_to_euclid(&cw) != v {
            return Err(Error::NotInLattice);
        }
        Ok(cw)
    }

    /// `<lambda, alpha>` for Euclidean vectors; `lambda` must lie in the coweight lattice.
    pub fn coweight_pairing(&self, lambda: &[Rational64], alpha: &[Rational64]) -> Result<i64> {
        if lambda.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: lambda.len(),
            });
        }
        if alpha.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: alpha.len(),
            });
        }
        self.euclid_to_coweight(lambda)?;
        let p = dot(lambda, alpha);
        if p.is_integer() {
            Ok(p.to_integer())
        } else {
            Err(Error::NotInLattice)
        }
    }

    /// Coroot lattice basis (coweight coordinates of the simple coroots), one per row.
    pub fn coroot_basis(&self) -> Vec<Vec<i64>> {
        self.cartan.clone()
    }

    pub fn is_dominant(&self, coweight: &[i64]) -> bool {
        coweight.iter().all(|&c| c >= 0)
    }

    /// The dominant element of the `W_0`-orbit of a coweight.
    pub fn dominant(&self, coweight: &[i64]) -> Vec<i64> {
        let mut v = coweight.to_vec();
        let n = self.rank();
        loop {
            match (0..n).find(|&i| v[i] < 0) {
                Some(i) => {
                    let c = v[i];
                    for j in 0..n {
                        v[j] -= c * self.cartan[i][j];
                    }
                }
                None => return v,
            }
        }
    }

    /// Matrix (on coweight coordinates) of the reflection in `root`.
    pub fn reflection(&self, root: &[i64]) -> FiniteWeylElement {
        let n = self.rank();
        let a = self.coroot(root);
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            for k in 0..n {
                m[j * n + k] = i64::from(j == k) - a[j] * root[k];
            }
        }
        FiniteWeylElement {
            n,
            matrix: m,
            word: None,
        }
    }

    pub fn simple_reflection(&self, i: usize) -> FiniteWeylElement {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        let mut s = self.reflection(&e);
        s.word = Some(vec![i as u8 + 1]);
        s
    }

    /// Number of positive roots made negative by `w^-1`, i.e. the Coxeter length of `w`.
    pub fn finite_length(&self, w: &FiniteWeylElement) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| !w.inverse_maps_positive(r))
            .count()
    }
}

pub(crate) fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| (0..n).map(|j| Rational64::from(i64::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let x = a[col][j];
                    a[r][j] -= f * x;
                    let y = inv[col][j];
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    inv
}

/// Element of the finite Weyl group, stored as its matrix on coweight coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteWeylElement {
    pub n: usize,
    /// Row-major `n x n` matrix.
    pub matrix: Vec<i64>,
    /// Optional reduced word in the simple reflections `s_1..s_n` (1-based labels).
    pub word: Option<Vec<u8>>,
}

impl PartialEq for FiniteWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for FiniteWeylElement {}

impl Hash for FiniteWeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl FiniteWeylElement {
    pub fn identity(n: usize) -> Self {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        FiniteWeylElement {
            n,
            matrix: m,
            word: Some(Vec::new()),
        }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| self.matrix[i * n + j] == i64::from(i == j)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut m = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.matrix[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    m[i * n + j] += a * other.matrix[k * n + j];
                }
            }
        }
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => {
                let mut w = a.clone();
                w.extend(b);
                Some(w)
            }
            _ => None,
        };
        FiniteWeylElement { n, matrix: m, word }
    }

    pub fn inverse(&self) -> Self {
        let rows: Vec<Vec<i64>> = self.matrix.chunks(self.n).map(|r| r.to_vec()).collect();
        let inv = rational_inverse(&rows);
        let matrix = inv
            .iter()
            .flat_map(|r| r.iter().map(|x| x.to_integer()))
            .collect();
        FiniteWeylElement {
            n: self.n,
            matrix,
            word: self.word.as_ref().map(|w| w.iter().rev().copied().collect()),
        }
    }

    /// `w . lambda` for a coweight in coweight coordinates.
    pub fn act(&self, coweight: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|k| self.matrix[i * n + k] * coweight[k]).sum())
            .collect()
    }

    /// Simple-root coordinates of `w^-1 alpha`.
    pub fn inverse_on_root(&self, root: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n)
            .map(|k| (0..n).map(|j| root[j] * self.matrix[j * n + k]).sum())
            .collect()
    }

    /// Whether `w^-1 alpha` is a positive root.
    pub fn inverse_maps_positive(&self, root: &[i64]) -> bool {
        let n = self.n;
        for k in 0..n {
            let c: i64 = (0..n).map(|j| root[j] * self.matrix[j * n + k]).sum();
            if c != 0 {
                return c > 0;
            }
        }
        unreachable!("Weyl group elements map roots to roots")
    }
}

/// All elements of `W_0`, identity first, each with a reduced word (breadth-first closure).
pub fn finite_weyl_group(datum: &RootDatum, bound: usize) -> Result<Vec<FiniteWeylElement>> {
    let n = datum.rank();
    let gens: Vec<FiniteWeylElement> = (0..n).map(|i| datum.simple_reflection(i)).collect();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let id = FiniteWeylElement::identity(n);
    seen.insert(id.matrix.clone(), ());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for s in &gens {
            let ws = w.mul(s);
            if !seen.contains_key(&ws.matrix) {
                if out.len() >= bound {
                    return Err(Error::BoundExceeded { bound });
                }
                seen.insert(ws.matrix.clone(), ());
                out.push(ws);
            }
        }
    }
    Ok(out)
}
