//! Hermitian lattices over a maximal order, modelled intrinsically by the
//! integral trace form `(x, y) ↦ trd h(x, y)` on a ℤ-basis together with the
//! matrices of right multiplication by the order basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IMat, ModSublattice};
use crate::quaternion::MaximalOrder;

/// A right `O`-lattice of rank `n` as a `4n`-dimensional ℤ-lattice.
///
/// `action[m]` is the matrix (acting on coordinate columns) of `x ↦ x ε_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLattice {
    pub gram: IMat,
    pub action: [IMat; 4],
}

impl TraceLattice {
    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn rank(&self) -> usize {
        self.dim() / 4
    }

    /// The lattice `O^n` with hermitian form `h(x, y) = Σ conj(x_k) H_kj y_j`.
    pub fn from_hermitian(order: &MaximalOrder, h: &[Vec<[i64; 4]>]) -> Result<Self> {
        let n = h.len();
        let dim = 4 * n;
        let mut gram = IMat::zeros(dim, dim);
        for k in 0..n {
            if h[k].len() != n {
                return Err(Error::Inconsistent("hermitian gram is not square".into()));
            }
            for j in 0..n {
                if order.conj_coords(&h[k][j]) != h[j][k] {
                    return Err(Error::Inconsistent("gram is not hermitian".into()));
                }
                for l in 0..4 {
                    let mut el = [0; 4];
                    el[l] = 1;
                    let left = order.mul_coords(&order.conj_coords(&el), &h[k][j]);
                    for m in 0..4 {
                        let mut em = [0; 4];
                        em[m] = 1;
                        gram[(4 * k + l, 4 * j + m)] = order.trd_coords(&order.mul_coords(&left, &em));
                    }
                }
            }
        }
        let action = std::array::from_fn(|m| {
            let mut r = IMat::zeros(dim, dim);
            for k in 0..n {
                for l in 0..4 {
                    for s in 0..4 {
                        r[(4 * k + s, 4 * k + l)] = order.mult[l][m][s];
                    }
                }
            }
            r
        });
        let lat = TraceLattice { gram, action };
        if !lat.is_positive_definite() {
            return Err(Error::Inconsistent("trace form is not positive definite".into()));
        }
        Ok(lat)
    }

    /// The principal lattice `O^n` with the standard form.
    pub fn principal(order: &MaximalOrder, n: usize) -> Self {
        let h: Vec<Vec<[i64; 4]>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { [1, 0, 0, 0] } else { [0; 4] }).collect())
            .collect();
        Self::from_hermitian(order, &h).expect("standard form is valid")
    }

    pub fn is_positive_definite(&self) -> bool {
        let n = self.dim();
        (1..=n).all(|k| linalg::det(&self.gram.view((0, 0), (k, k)).into_owned()) > 0)
    }

    pub fn det(&self) -> i128 {
        linalg::det(&self.gram)
    }

    /// Change of basis by `t` (columns = new basis vectors) with inverse `tinv`.
    pub fn transform(&self, t: &IMat, tinv: &IMat) -> Self {
        TraceLattice {
            gram: t.transpose() * &self.gram * t,
            action: std::array::from_fn(|m| tinv * &self.action[m] * t),
        }
    }

    /// The sublattice `{x : x mod p ∈ S}`; `S` must be stable under the order.
    pub fn sublattice(&self, s: &ModSublattice) -> Result<Self> {
        let b = s.basis();
        let mut action: [IMat; 4] = std::array::from_fn(|_| IMat::zeros(0, 0));
        for m in 0..4 {
            action[m] = s
                .conjugate(&self.action[m])
                .ok_or_else(|| Error::Inconsistent("subspace is not an order submodule".into()))?;
        }
        Ok(TraceLattice { gram: b.transpose() * &self.gram * &b, action })
    }

    /// Divides the Gram matrix by `f`, which must divide every entry.
    pub fn scale_down(&self, f: i64) -> Result<Self> {
        if self.gram.iter().any(|x| x % f != 0) {
            return Err(Error::Inconsistent(format!("gram not divisible by {f}")));
        }
        Ok(TraceLattice { gram: self.gram.map(|x| x / f), action: self.action.clone() })
    }

    /// LLL-reduced copy, with the transform `T` and `T^{-1}` from the old basis.
    pub fn reduced(&self) -> (Self, IMat, IMat) {
        let (t, tinv) = linalg::lll(&self.gram);
        (self.transform(&t, &tinv), t, tinv)
    }

    /// `x ε` for `ε` given by order coordinates.
    pub fn right_mul(&self, x: &[i64], c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; x.len()];
        for m in 0..4 {
            if c[m] == 0 {
                continue;
            }
            let y = linalg::mat_vec(&self.action[m], x);
            for (o, v) in out.iter_mut().zip(y) {
                *o += c[m] * v;
            }
        }
        out
    }

    /// `h(x, y)` in order coordinates (only exact when it lies in the order).
    pub fn hermitian_value(&self, order: &MaximalOrder, x: &[i64], y: &[i64]) -> Option<[i64; 4]> {
        // t_m = B(x ε_m, y) = trd(conj(ε_m) h(x, y)) = Σ_k T_mk z_k
        let t: Vec<i64> = (0..4)
            .map(|m| linalg::bilinear(&self.gram, &linalg::mat_vec(&self.action[m], x), y))
            .collect();
        let tg = IMat::from_fn(4, 4, |i, j| order.trace_gram[i][j]);
        let (adj, d) = linalg::scaled_inverse(&tg)?;
        let mut z = [0i64; 4];
        for (k, zk) in z.iter_mut().enumerate() {
            let s: i128 = (0..4).map(|m| adj[k][m] * t[m] as i128).sum();
            if s % d != 0 {
                return None;
            }
            *zk = (s / d) as i64;
        }
        Some(z)
    }

    /// Checks the module structure: the action matrices realize the order's
    /// multiplication table and are adjoint to conjugation under the form.
    pub fn check(&self, order: &MaximalOrder) -> Result<()> {
        let n = self.dim();
        if self.action[0] != IMat::identity(n, n) {
            return Err(Error::Inconsistent("ε_0 does not act as 1".into()));
        }
        if self.gram != self.gram.transpose() {
            return Err(Error::Inconsistent("gram not symmetric".into()));
        }
        let combo = |c: &[i64]| {
            let mut r = IMat::zeros(n, n);
            for k in 0..4 {
                r += &self.action[k] * c[k];
            }
            r
        };
        for l in 0..4 {
            for m in 0..4 {
                // (x ε_l) ε_m = x (ε_l ε_m)
                if &self.action[m] * &self.action[l] != combo(&order.mult[l][m]) {
                    return Err(Error::Inconsistent("action violates the multiplication table".into()));
                }
            }
            if self.action[l].transpose() * &self.gram != &self.gram * combo(&order.conj[l]) {
                return Err(Error::Inconsistent("action not compatible with the form".into()));
            }
        }
        Ok(())
    }

    /// Smallest list of short vectors whose `O`-span has full rank `4n`, chosen
    /// greedily by norm (a minimum-weight basis of the `H`-linear matroid).
    pub fn frame(&self, vectors: &[(Vec<i64>, i64)]) -> Option<Vec<usize>> {
        let n = self.rank();
        let mut chosen = Vec::new();
        let mut span: Vec<Vec<i64>> = Vec::new();
        for (idx, (v, _)) in vectors.iter().enumerate() {
            let mut trial = span.clone();
            for m in 0..4 {
                trial.push(linalg::mat_vec(&self.action[m], v));
            }
            if rational_rank(&trial) == trial.len() {
                span = trial;
                chosen.push(idx);
                if chosen.len() == n {
                    return Some(chosen);
                }
            }
        }
        None
    }

    /// Vectors `v_1..v_n` with `v_1 O ⊕ ... ⊕ v_n O` equal to the lattice,
    /// searched among vectors of growing norm up to `max_norm`.
    pub fn free_basis(&self, max_norm: i64, budget: usize) -> Option<Vec<Vec<i64>>> {
        let mut bound = (0..self.dim()).map(|i| self.gram[(i, i)]).min()?;
        loop {
            if let Some(b) = self.free_basis_within(bound.min(max_norm), budget) {
                return Some(b);
            }
            if bound >= max_norm {
                return None;
            }
            bound += (bound + 1) / 2;
        }
    }

    fn free_basis_within(&self, max_norm: i64, budget: usize) -> Option<Vec<Vec<i64>>> {
        let n = self.rank();
        let target = self.det();
        let mut sv: Vec<(Vec<i64>, i64)> = linalg::short_vectors(&self.gram, max_norm);
        sv.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let mut stack: Vec<usize> = Vec::new();
        let mut tried = 0usize;
        fn rec(
            lat: &TraceLattice,
            sv: &[(Vec<i64>, i64)],
            start: usize,
            stack: &mut Vec<usize>,
            n: usize,
            target: i128,
            tried: &mut usize,
            budget: usize,
        ) -> bool {
            if stack.len() == n {
                *tried += 1;
                let cols: Vec<Vec<i64>> = stack
                    .iter()
                    .flat_map(|&i| (0..4).map(move |m| linalg::mat_vec(&lat.action[m], &sv[i].0)))
                    .collect();
                let b = IMat::from_fn(4 * n, 4 * n, |r, c| cols[c][r]);
                return linalg::det(&(b.transpose() * &lat.gram * &b)) == target;
            }
            for i in start..sv.len() {
                if *tried >= budget {
                    return false;
                }
                let mut span: Vec<Vec<i64>> = Vec::new();
                for &j in stack.iter().chain(std::iter::once(&i)) {
                    for m in 0..4 {
                        span.push(linalg::mat_vec(&lat.action[m], &sv[j].0));
                    }
                }
                if rational_rank(&span) < span.len() {
                    continue;
                }
                stack.push(i);
                if rec(lat, sv, i + 1, stack, n, target, tried, budget) {
                    return true;
                }
                stack.pop();
            }
            false
        }
        if rec(self, &sv, 0, &mut stack, n, target, &mut tried, budget) {
            Some(stack.iter().map(|&i| sv[i].0.clone()).collect())
        } else {
            None
        }
    }

    /// Hermitian Gram matrix over the order with respect to a free basis.
    pub fn hermitian_gram(&self, order: &MaximalOrder, basis: &[Vec<i64>]) -> Option<Vec<Vec<[i64; 4]>>> {
        basis
            .iter()
            .map(|x| basis.iter().map(|y| self.hermitian_value(order, x, y)).collect())
            .collect()
    }
}

/// Rank modulo a large prime: a lower bound for the rank over ℚ, so a
/// full-rank answer is always exact.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    const P: i64 = 2_147_483_629;
    let mut r: Vec<Vec<i64>> = rows.to_vec();
    let ncols = r.first().map_or(0, |x| x.len());
    for row in r.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(P);
        }
    }
    let mut rank = 0;
    for c in 0..ncols {
        let Some(k) = (rank..r.len()).find(|&k| r[k][c] != 0) else {
            continue;
        };
        r.swap(rank, k);
        let inv = linalg::inv_mod(r[rank][c], P);
        for k in rank + 1..r.len() {
            if r[k][c] != 0 {
                let f = (r[k][c] as i128 * inv as i128 % P as i128) as i64;
                for j in c..ncols {
                    r[k][j] = ((r[k][j] as i128 - f as i128 * r[rank][j] as i128).rem_euclid(P as i128)) as i64;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Serializable form of a lattice: the order, and a hermitian Gram matrix
/// over it with respect to a free basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub order: OrderRecord,
    pub rank: usize,
    pub gram: Vec<Vec<[i64; 4]>>,
    pub stab_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub a: i64,
    pub b: i64,
    /// Numerators of the order basis in `1, i, j, ij`, over `denominator`.
    pub basis: [[i64; 4]; 4],
    pub denominator: i64,
}

impl OrderRecord {
    pub fn of(order: &MaximalOrder) -> Self {
        OrderRecord { a: order.algebra.a, b: order.algebra.b, basis: order.basis, denominator: order.denominator }
    }

    pub fn matches(&self, order: &MaximalOrder) -> bool {
        *self == Self::of(order)
    }
}

impl LatticeRecord {
    pub fn new(order: &MaximalOrder, lat: &TraceLattice, stab_order: u64) -> Result<Self> {
        let basis = lat.free_basis(2 * lat.rank() as i64 * 16, 200_000).ok_or(Error::NoFreeBasis)?;
        let gram = lat.hermitian_gram(order, &basis).ok_or(Error::NoFreeBasis)?;
        Ok(LatticeRecord { order: OrderRecord::of(order), rank: lat.rank(), gram, stab_order })
    }

    pub fn lattice(&self, order: &MaximalOrder) -> Result<TraceLattice> {
        if !self.order.matches(order) {
            return Err(Error::Inconsistent("record belongs to a different order".into()));
        }
        let lat = TraceLattice::from_hermitian(order, &self.gram)?;
        Ok(lat.reduced().0)
    }
}
