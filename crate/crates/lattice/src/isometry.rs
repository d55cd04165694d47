//! Isometry testing and automorphism enumeration for trace-form lattices.
//!
//! An `O`-linear isometry is determined by the images of a frame
//! `v_1, ..., v_n` whose `O`-span has full rank. The search runs over images
//! among vectors of equal norm, pruned by the hermitian inner products with
//! earlier images, and completes each leaf by exact linear algebra.

use std::collections::BTreeMap;

use crate::lattice::TraceLattice;
use crate::linalg::{self, IMat};

/// Isometry invariants: determinant, frame norms, and the number of vectors
/// of each norm up to the largest frame norm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    pub det: i128,
    pub frame_norms: Vec<i64>,
    pub counts: Vec<(i64, usize)>,
}

/// A lattice with the data needed as either side of an isometry search.
#[derive(Debug, Clone)]
pub struct IsoData {
    pub lattice: TraceLattice,
    pub key: InvariantKey,
    /// Vectors (both signs) of each norm up to the largest frame norm.
    pub by_norm: BTreeMap<i64, Vec<Vec<i64>>>,
    pub frame: Vec<Vec<i64>>,
    frame_adj: Vec<Vec<i128>>,
    frame_den: i128,
    /// `targets[i][j][m] = B(v_i ε_m, v_j)` for `j < i`.
    targets: Vec<Vec<[i64; 4]>>,
}

impl IsoData {
    /// Expects an LLL-reduced lattice (any basis works, reduced ones are faster).
    pub fn new(lattice: TraceLattice) -> Self {
        let g = &lattice.gram;
        let n = lattice.dim();
        let diag: Vec<i64> = (0..n).map(|i| g[(i, i)]).collect();
        let max_diag = *diag.iter().max().expect("nonempty lattice");
        let mut bound = *diag.iter().min().expect("nonempty lattice");
        let (mut sv, frame_idx) = loop {
            let mut sv = linalg::short_vectors(g, bound);
            sv.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
            if let Some(f) = lattice.frame(&sv) {
                break (sv, f);
            }
            assert!(bound < max_diag, "LLL basis vectors always contain a frame");
            bound = (2 * bound).min(max_diag);
        };
        let frame: Vec<Vec<i64>> = frame_idx.iter().map(|&i| sv[i].0.clone()).collect();
        let frame_norms: Vec<i64> = frame_idx.iter().map(|&i| sv[i].1).collect();
        let top = *frame_norms.iter().max().expect("rank >= 1");
        sv.retain(|(_, nrm)| *nrm <= top);
        let mut by_norm: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
        for (v, nrm) in sv {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            let e = by_norm.entry(nrm).or_default();
            e.push(v);
            e.push(neg);
        }
        let counts = by_norm.iter().map(|(k, v)| (*k, v.len())).collect();
        let cols = frame_columns(&lattice, &frame);
        let vm = IMat::from_fn(n, n, |r, c| cols[c][r]);
        let (frame_adj, frame_den) = linalg::scaled_inverse(&vm).expect("frame has full rank");
        let targets = (0..frame.len())
            .map(|i| {
                (0..i)
                    .map(|j| {
                        std::array::from_fn(|m| {
                            linalg::bilinear(g, &linalg::mat_vec(&lattice.action[m], &frame[i]), &frame[j])
                        })
                    })
                    .collect()
            })
            .collect();
        let key = InvariantKey { det: lattice.det(), frame_norms, counts };
        IsoData { lattice, key, by_norm, frame, frame_adj, frame_den, targets }
    }
}

fn frame_columns(lat: &TraceLattice, vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    vs.iter()
        .flat_map(|v| (0..4).map(move |m| linalg::mat_vec(&lat.action[m], v)))
        .collect()
}

/// Depth-first search for isometries `P` from `a` to `c` (`P^T G_c P = G_a`,
/// `P` commuting with the order action). `visit` returns `false` to stop.
fn search(a: &IsoData, c: &IsoData, visit: &mut dyn FnMut(IMat) -> bool) {
    if a.key != c.key {
        return;
    }
    let n = a.frame.len();
    let dim = a.lattice.dim();
    let gc = &c.lattice.gram;
    // ys[j][m] = R_m^T G_c w_j, so that B_c(w ε_m, w_j) = w · ys[j][m]
    let mut ys: Vec<[Vec<i64>; 4]> = Vec::with_capacity(n);
    let mut chosen: Vec<&Vec<i64>> = Vec::with_capacity(n);
    let rt: Vec<IMat> = (0..4).map(|m| c.lattice.action[m].transpose() * gc).collect();

    fn rec<'a>(
        depth: usize,
        a: &IsoData,
        c: &'a IsoData,
        rt: &[IMat],
        ys: &mut Vec<[Vec<i64>; 4]>,
        chosen: &mut Vec<&'a Vec<i64>>,
        dim: usize,
        visit: &mut dyn FnMut(IMat) -> bool,
    ) -> bool {
        let n = a.frame.len();
        if depth == n {
            let cols = frame_columns(&c.lattice, &chosen.iter().map(|v| (*v).clone()).collect::<Vec<_>>());
            let w = IMat::from_fn(dim, dim, |r, col| cols[col][r]);
            let Some(p) = linalg::right_divide(&w, &a.frame_adj, a.frame_den) else {
                return true;
            };
            if p.transpose() * &c.lattice.gram * &p != a.lattice.gram {
                return true;
            }
            return visit(p);
        }
        let nrm = a.key.frame_norms[depth];
        let Some(cands) = c.by_norm.get(&nrm) else {
            return true;
        };
        'cand: for w in cands {
            for (j, y) in ys.iter().enumerate() {
                for m in 0..4 {
                    let s: i64 = w.iter().zip(&y[m]).map(|(x, z)| x * z).sum();
                    if s != a.targets[depth][j][m] {
                        continue 'cand;
                    }
                }
            }
            if chosen.iter().any(|v| std::ptr::eq(*v, w)) {
                continue;
            }
            ys.push(std::array::from_fn(|m| linalg::mat_vec(&rt[m], w)));
            chosen.push(w);
            let go_on = rec(depth + 1, a, c, rt, ys, chosen, dim, visit);
            ys.pop();
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(0, a, c, &rt, &mut ys, &mut chosen, dim, visit);
}

/// An isometry from `a` onto `c`, if one exists.
pub fn find_isometry(a: &IsoData, c: &IsoData) -> Option<IMat> {
    let mut found = None;
    search(a, c, &mut |p| {
        found = Some(p);
        false
    });
    found
}

pub fn is_isometric(a: &IsoData, c: &IsoData) -> bool {
    find_isometry(a, c).is_some()
}

/// Calls `f` on every automorphism; `f` returns `false` to stop early.
pub fn for_each_automorphism(c: &IsoData, f: &mut dyn FnMut(IMat) -> bool) {
    search(c, c, f);
}

pub fn automorphism_count(c: &IsoData) -> u64 {
    let mut k = 0u64;
    for_each_automorphism(c, &mut |_| {
        k += 1;
        true
    });
    k
}

pub fn automorphisms(c: &IsoData) -> Vec<IMat> {
    let mut out = Vec::new();
    for_each_automorphism(c, &mut |p| {
        out.push(p);
        true
    });
    out
}
