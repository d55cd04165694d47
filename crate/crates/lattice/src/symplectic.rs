//! Reduction at a split prime `p`: an idempotent `e` of rank one in
//! `O/pO ≅ M_2(F_p)` cuts a `2n`-dimensional symplectic space `V = (L/pL)e`
//! out of a unimodular lattice, and isotropic subspaces of `V` give vertex
//! lattices and their unimodular overlattices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::TraceLattice;
use crate::linalg::{self, modp, IMat, ModSublattice};
use crate::quaternion::MaximalOrder;

/// A rank-one idempotent `e` of `O/pO` and an element `g` with `e g conj(e) ≠ 0`,
/// both in order coordinates modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Splitting {
    pub p: i64,
    pub e: [i64; 4],
    pub g: [i64; 4],
}

fn reduce4(x: [i64; 4], p: i64) -> [i64; 4] {
    x.map(|v| modp(v, p))
}

fn all_residues(p: i64) -> impl Iterator<Item = [i64; 4]> {
    (0..p.pow(4)).map(move |mut c| {
        let mut x = [0; 4];
        for v in x.iter_mut() {
            *v = c % p;
            c /= p;
        }
        x
    })
}

/// Finds the splitting data by search over `O/pO`.
pub fn splitting(order: &MaximalOrder, p: u64) -> Result<Splitting> {
    if !crate::quaternion::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let disc = order.algebra.discriminant;
    if disc % p == 0 {
        return Err(Error::Ramified { p, disc });
    }
    let p = p as i64;
    let one = [1, 0, 0, 0];
    let e = all_residues(p)
        .find(|x| *x != [0; 4] && *x != one && reduce4(order.mul_coords(x, x), p) == *x)
        .ok_or_else(|| Error::Inconsistent("no idempotent: prime not split".into()))?;
    let ebar = order.conj_coords(&e);
    let g = all_residues(p)
        .find(|g| reduce4(order.mul_coords(&order.mul_coords(&e, g), &ebar), p) != [0; 4])
        .ok_or_else(|| Error::Inconsistent("degenerate splitting".into()))?;
    Ok(Splitting { p, e, g })
}

fn combo(lat: &TraceLattice, c: &[i64; 4]) -> IMat {
    let n = lat.dim();
    let mut r = IMat::zeros(n, n);
    for k in 0..4 {
        r += &lat.action[k] * c[k];
    }
    r
}

/// RREF basis (mod p) of the `O`-span of the given vectors.
pub fn o_span(lat: &TraceLattice, vecs: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for v in vecs {
        for m in 0..4 {
            rows.push(linalg::mat_vec(&lat.action[m], v));
        }
    }
    if rows.is_empty() {
        return rows;
    }
    linalg::rref_mod(&mut rows, p);
    rows
}

/// Kernel of the Gram matrix modulo `p`, i.e. `pX^#/pX`.
pub fn radical(lat: &TraceLattice, p: i64) -> Vec<Vec<i64>> {
    let n = lat.dim();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| lat.gram[(i, j)]).collect()).collect();
    linalg::kernel_mod(&rows, n, p)
}

/// The alternating space `W e` for an order-stable subspace `W ⊆ X/pX`, with
/// the form `(u, v) ↦ B(u, v g)/scale mod p`.
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    pub p: i64,
    /// RREF basis of `V` in ambient coordinates.
    pub basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// Gram matrix of the alternating form in this basis.
    pub form: Vec<Vec<i64>>,
    idempotent: IMat,
}

impl SymplecticSpace {
    pub fn new(lat: &TraceLattice, w: &[Vec<i64>], scale: i64, split: &Splitting) -> Result<Self> {
        let p = split.p;
        let e = combo(lat, &split.e);
        let rg = combo(lat, &split.g);
        let mut basis: Vec<Vec<i64>> = w.iter().map(|v| linalg::mat_vec(&e, v)).collect();
        let pivots = linalg::rref_mod(&mut basis, p);
        let k = basis.len();
        let mut form = vec![vec![0; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = linalg::mat_vec(&rg, &basis[j]);
                let s = linalg::bilinear(&lat.gram, &basis[i], &v);
                if s % scale != 0 {
                    return Err(Error::Inconsistent("form not divisible by scale".into()));
                }
                form[i][j] = modp(s / scale, p);
            }
        }
        for i in 0..k {
            if form[i][i] != 0 || (0..k).any(|j| modp(form[i][j] + form[j][i], p) != 0) {
                return Err(Error::Inconsistent("induced form is not alternating".into()));
            }
        }
        if linalg::rank_mod(&form, p) != k {
            return Err(Error::Inconsistent("induced form is degenerate".into()));
        }
        Ok(SymplecticSpace { p, basis, pivots, form, idempotent: e })
    }

    /// `V = (L/pL)e` for a lattice unimodular at `p`.
    pub fn of_unimodular(lat: &TraceLattice, split: &Splitting) -> Result<Self> {
        let n = lat.dim();
        let w: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self::new(lat, &w, 1, split)
    }

    /// `e(pX^#/pX)` with the form scaled down by `p`, for `pX^# ⊆ X`.
    pub fn of_discriminant_group(lat: &TraceLattice, split: &Splitting) -> Result<Self> {
        let w = radical(lat, split.p);
        Self::new(lat, &w, split.p, split)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an ambient vector known to lie in `V`.
    pub fn coords(&self, v: &[i64]) -> Vec<i64> {
        self.pivots.iter().map(|&c| modp(v[c], self.p)).collect()
    }

    /// Coordinates of `e·v` for any ambient `v`.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        self.coords(&linalg::mat_vec(&self.idempotent, v))
    }

    pub fn ambient(&self, c: &[i64]) -> Vec<i64> {
        let n = self.basis[0].len();
        let mut out = vec![0; n];
        for (x, b) in c.iter().zip(&self.basis) {
            if *x != 0 {
                for (o, y) in out.iter_mut().zip(b) {
                    *o = modp(*o + x * y, self.p);
                }
            }
        }
        out
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let k = self.dim();
        let mut s = 0;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                s += x[i] * self.form[i][j] * y[j];
            }
        }
        modp(s, self.p)
    }

    pub fn is_isotropic(&self, rows: &[Vec<i64>]) -> bool {
        rows.iter().all(|x| rows.iter().all(|y| self.pair(x, y) == 0))
    }

    /// Orthogonal complement (RREF rows) of the span of `rows`.
    pub fn perp(&self, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let k = self.dim();
        let a: Vec<Vec<i64>> = rows
            .iter()
            .map(|x| (0..k).map(|j| modp((0..k).map(|i| x[i] * self.form[i][j]).sum(), self.p)).collect())
            .collect();
        linalg::kernel_mod(&a, k, self.p)
    }

    /// All totally isotropic `d`-dimensional subspaces, as RREF row lists, in
    /// lexicographic order of pivots and entries.
    pub fn isotropic_subspaces(&self, d: usize) -> Vec<Vec<Vec<i64>>> {
        let k = self.dim();
        let mut out = Vec::new();
        if d == 0 {
            out.push(Vec::new());
            return out;
        }
        if d > k / 2 {
            return out;
        }
        let mut pivots = Vec::new();
        self.pivot_sets(0, d, &mut pivots, &mut out);
        out
    }

    fn pivot_sets(&self, start: usize, d: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<Vec<i64>>>) {
        if pivots.len() == d {
            let mut rows = Vec::new();
            self.fill_rows(pivots, &mut rows, out);
            return;
        }
        for c in start..self.dim() {
            pivots.push(c);
            self.pivot_sets(c + 1, d, pivots, out);
            pivots.pop();
        }
    }

    fn fill_rows(&self, pivots: &[usize], rows: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        let i = rows.len();
        if i == pivots.len() {
            out.push(rows.clone());
            return;
        }
        let k = self.dim();
        let free: Vec<usize> = (pivots[i] + 1..k).filter(|c| !pivots.contains(c)).collect();
        let total = self.p.pow(free.len() as u32);
        for code in 0..total {
            let mut row = vec![0; k];
            row[pivots[i]] = 1;
            let mut c = code;
            for &f in &free {
                row[f] = c % self.p;
                c /= self.p;
            }
            if rows.iter().all(|r| self.pair(r, &row) == 0) {
                rows.push(row);
                self.fill_rows(pivots, rows, out);
                rows.pop();
            }
        }
    }

    /// Matrix (acting on coordinate rows from the right) of an `O`-linear
    /// lattice map `x ↦ P x` on `V`.
    pub fn matrix_of(&self, map: &IMat) -> Vec<Vec<i64>> {
        self.basis.iter().map(|b| self.coords(&linalg::mat_vec(map, b))).collect()
    }
}

/// Canonical (RREF) form of the row space of `rows · m`.
pub fn act_on_subspace(rows: &[Vec<i64>], m: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let k = m.len();
    let mut img: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| (0..k).map(|j| modp((0..k).map(|i| r[i] * m[i][j]).sum(), p)).collect())
        .collect();
    linalg::rref_mod(&mut img, p);
    img
}

/// Orbits of a matrix group (given by generators) on a list of subspaces
/// closed under the group: returns `(representative index, orbit size)` in
/// order of first appearance.
pub fn subspace_orbits(subspaces: &[Vec<Vec<i64>>], gens: &[Vec<Vec<i64>>], p: i64) -> Vec<(usize, usize)> {
    let index: HashMap<&Vec<Vec<i64>>, usize> = subspaces.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..subspaces.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, s) in subspaces.iter().enumerate() {
        for g in gens {
            let img = act_on_subspace(s, g, p);
            let j = *index.get(&img).expect("subspace list is closed under the group");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..subspaces.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut out: Vec<(usize, usize)> = sizes.into_iter().collect();
    out.sort();
    out
}

/// Generators of the group of matrices `mats` (assumed closed under
/// multiplication up to the listed elements): greedy, adding an element
/// whenever it lies outside the subgroup generated so far.
pub fn greedy_generators(mats: &[Vec<Vec<i64>>], p: i64) -> Vec<Vec<Vec<i64>>> {
    use std::collections::HashSet;
    let k = mats.first().map_or(0, |m| m.len());
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..k)
            .map(|i| (0..k).map(|j| modp((0..k).map(|l| a[i][l] * b[l][j]).sum(), p)).collect())
            .collect()
    };
    let id: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let mut group: HashSet<Vec<Vec<i64>>> = HashSet::from([id.clone()]);
    let mut gens = Vec::new();
    for m in mats {
        if group.contains(m) {
            continue;
        }
        gens.push(m.clone());
        let mut frontier: Vec<Vec<Vec<i64>>> = group.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = mul(&x, g);
                if group.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// A vertex lattice `N = {x ∈ L : h(x, U) ≡ 0 mod p}` for an isotropic
/// `U ⊆ V(L)`, in an LLL-reduced basis.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub lattice: TraceLattice,
    sub: ModSublattice,
    tinv: IMat,
}

impl Vertex {
    pub fn new(lat: &TraceLattice, space: &SymplecticSpace, u: &[Vec<i64>]) -> Result<Self> {
        if !space.is_isotropic(u) {
            return Err(Error::NotIsotropic);
        }
        let perp: Vec<Vec<i64>> = space.perp(u).iter().map(|c| space.ambient(c)).collect();
        let s = o_span(lat, &perp, space.p);
        let sub = ModSublattice::new(&s, lat.dim(), space.p);
        let (lattice, _, tinv) = lat.sublattice(&sub)?.reduced();
        Ok(Vertex { lattice, sub, tinv })
    }

    /// Coordinates in the vertex basis of a vector of `L` lying in `N`.
    pub fn coords(&self, y: &[i64]) -> Option<Vec<i64>> {
        self.sub.coords(y).map(|c| linalg::mat_vec(&self.tinv, &c))
    }

    /// The subspace `e(pL/pN)` of the discriminant space, in its coordinates.
    pub fn parent_subspace(&self, space: &SymplecticSpace) -> Vec<Vec<i64>> {
        let p = space.p;
        let n = self.lattice.dim();
        let mut rows: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let y: Vec<i64> = (0..n).map(|i| if i == j { p } else { 0 }).collect();
                space.project(&self.coords(&y).expect("pL ⊆ N"))
            })
            .collect();
        linalg::rref_mod(&mut rows, p);
        rows
    }
}

/// The unimodular overlattice `L' = Y/p` with `Y = pN + (Z·O)` for a
/// Lagrangian `Z` of the discriminant space of `N`, LLL-reduced.
pub fn overlattice(vertex: &TraceLattice, space: &SymplecticSpace, z: &[Vec<i64>]) -> Result<TraceLattice> {
    if !space.is_isotropic(z) {
        return Err(Error::NotIsotropic);
    }
    let amb: Vec<Vec<i64>> = z.iter().map(|c| space.ambient(c)).collect();
    let s = o_span(vertex, &amb, space.p);
    let sub = ModSublattice::new(&s, vertex.dim(), space.p);
    let y = vertex.sublattice(&sub)?;
    Ok(y.scale_down(space.p * space.p)?.reduced().0)
}
