//! Special (standard parabolic) subgroups of the affine Weyl group, their
//! `Omega`-extensions, and minimal-length coset representatives.

use std::collections::HashMap;

use crate::affine::{AffineWeylElement, AffineWeylGroup, ReducedWord};
use crate::error::{Error, Result};
use crate::roots::DEFAULT_GROUP_BOUND;

/// Normalize a generator subset: sorted, deduplicated, in range.
pub fn normalize_generators(g: &AffineWeylGroup, gens: &[usize]) -> Result<Vec<usize>> {
    let mut s = gens.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&i| i > g.rank()) {
        return Err(Error::BadGenerator(bad));
    }
    Ok(s)
}

/// The generators left after deleting the given affine nodes.
pub fn complement(g: &AffineWeylGroup, deleted: &[usize]) -> Vec<usize> {
    (0..g.num_generators())
        .filter(|i| !deleted.contains(i))
        .collect()
}

/// Breadth-first closure of `start` under right multiplication by `gens`.
fn closure(
    start: Vec<AffineWeylElement>,
    gens: &[AffineWeylElement],
    bound: usize,
) -> Result<Vec<AffineWeylElement>> {
    let mut index: HashMap<AffineWeylElement, usize> = HashMap::new();
    let mut out = Vec::new();
    for x in start {
        if !index.contains_key(&x) {
            index.insert(x.clone(), out.len());
            out.push(x);
        }
    }
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for s in gens {
            let y = x.mul(s);
            if !index.contains_key(&y) {
                if out.len() >= bound {
                    return Err(Error::BoundExceeded { bound });
                }
                index.insert(y.clone(), out.len());
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// `W_S = <S>` for a proper subset `S` of the affine generators.
#[derive(Debug, Clone)]
pub struct SpecialSubgroup {
    pub generators: Vec<usize>,
    /// Elements in breadth-first order (so lengths are nondecreasing), identity first.
    pub elements: Vec<AffineWeylElement>,
    pub lengths: Vec<usize>,
    index: HashMap<AffineWeylElement, usize>,
}

impl SpecialSubgroup {
    pub fn new(g: &AffineWeylGroup, gens: &[usize]) -> Result<Self> {
        Self::with_bound(g, gens, DEFAULT_GROUP_BOUND)
    }

    pub fn with_bound(g: &AffineWeylGroup, gens: &[usize], bound: usize) -> Result<Self> {
        let generators = normalize_generators(g, gens)?;
        if generators.len() == g.num_generators() {
            // the full affine Weyl group is infinite
            return Err(Error::BoundExceeded { bound });
        }
        let elems: Vec<AffineWeylElement> =
            generators.iter().map(|&i| g.generator(i).clone()).collect();
        let elements = closure(vec![g.identity()], &elems, bound)?;
        let lengths = elements.iter().map(|x| g.length(x)).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, x)| (x.clone(), k))
            .collect();
        Ok(SpecialSubgroup {
            generators,
            elements,
            lengths,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &AffineWeylElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn is_subgroup_of(&self, other: &SpecialSubgroup) -> bool {
        self.generators.iter().all(|i| other.generators.contains(i))
    }

    pub fn longest_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

/// `W' = W_S * Omega_1` where `Omega_1` preserves `S`.
#[derive(Debug, Clone)]
pub struct ExtendedSpecialSubgroup {
    pub base: SpecialSubgroup,
    /// Indices into the ambient `Omega`, identity first, closed under products.
    pub omega_part: Vec<usize>,
    pub elements: Vec<AffineWeylElement>,
    index: HashMap<AffineWeylElement, usize>,
}

impl ExtendedSpecialSubgroup {
    pub fn new(g: &AffineWeylGroup, gens: &[usize], omega: &[usize]) -> Result<Self> {
        let base = SpecialSubgroup::new(g, gens)?;
        let mut part: Vec<usize> = vec![0];
        for &k in omega {
            if k >= g.omega.len() {
                return Err(Error::BadGenerator(k));
            }
            let act = &g.omega.diagram_action[k];
            if !base
                .generators
                .iter()
                .all(|&i| base.generators.contains(&act[i]))
            {
                return Err(Error::Containment);
            }
            if !part.contains(&k) {
                part.push(k);
            }
        }
        // close under products
        let mut head = 0;
        while head < part.len() {
            for j in 0..part.len() {
                let p = g.omega.product(part[head], part[j]);
                if !part.contains(&p) {
                    part.push(p);
                }
            }
            head += 1;
        }
        let mut elements = Vec::with_capacity(base.order() * part.len());
        for &k in &part {
            let rho = &g.omega.elements[k];
            elements.extend(base.elements.iter().map(|w| w.mul(rho)));
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, x)| (x.clone(), k))
            .collect();
        Ok(ExtendedSpecialSubgroup {
            base,
            omega_part: part,
            elements,
            index,
        })
    }

    pub fn plain(base: SpecialSubgroup) -> Self {
        let elements = base.elements.clone();
        let index = base.index.clone();
        ExtendedSpecialSubgroup {
            base,
            omega_part: vec![0],
            elements,
            index,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &AffineWeylElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn generators(&self) -> &[usize] {
        &self.base.generators
    }
}

/// Whether `x` has no left descent in `left` and no right descent in `right`.
pub fn is_minimal(g: &AffineWeylGroup, x: &AffineWeylElement, left: &[usize], right: &[usize]) -> bool {
    left.iter().all(|&i| !g.is_left_descent(i, x)) && right.iter().all(|&i| !g.is_right_descent(x, i))
}

/// Exhaustive minimality check over the finite groups `W_left` and `W_right`.
pub fn is_minimal_exhaustive(
    g: &AffineWeylGroup,
    x: &AffineWeylElement,
    left: &SpecialSubgroup,
    right: &SpecialSubgroup,
) -> bool {
    let l = g.length(x);
    left.elements
        .iter()
        .all(|a| right.elements.iter().all(|b| g.length(&a.mul(x).mul(b)) >= l))
}

/// The minimal element of `W_left x W_right`, reached by greedy descent.
pub fn min_rep(
    g: &AffineWeylGroup,
    x: &AffineWeylElement,
    left: &[usize],
    right: &[usize],
) -> AffineWeylElement {
    let mut y = x.clone();
    'outer: loop {
        let l = g.length(&y);
        for &i in left {
            let z = g.generator(i).mul(&y);
            if g.length(&z) < l {
                y = z;
                continue 'outer;
            }
        }
        for &i in right {
            let z = y.mul(g.generator(i));
            if g.length(&z) < l {
                y = z;
                continue 'outer;
            }
        }
        return y;
    }
}

/// `[W_1 / W_2]`: the minimal-length representatives of the left cosets of `W_2` in `W_1`.
pub fn min_left_coset_reps(
    g: &AffineWeylGroup,
    w1: &SpecialSubgroup,
    w2: &SpecialSubgroup,
) -> Result<Vec<AffineWeylElement>> {
    if !w2.is_subgroup_of(w1) {
        return Err(Error::Containment);
    }
    let reps: Vec<AffineWeylElement> = w1
        .elements
        .iter()
        .filter(|x| w2.generators.iter().all(|&i| !g.is_right_descent(x, i)))
        .cloned()
        .collect();
    debug_assert_eq!(reps.len() * w2.order(), w1.order());
    Ok(reps)
}

/// Lengths of `[W_1 / W_2]`.
pub fn left_coset_lengths(
    g: &AffineWeylGroup,
    w1: &SpecialSubgroup,
    w2: &SpecialSubgroup,
) -> Result<Vec<usize>> {
    Ok(min_left_coset_reps(g, w1, w2)?
        .iter()
        .map(|x| g.length(x))
        .collect())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// One minimal-length representative per `W_12`-double coset of the finite group `ambient`,
/// ties broken by the lexicographically least reduced word. Sorted by (length, word).
pub fn min_double_coset_reps(
    g: &AffineWeylGroup,
    w12: &SpecialSubgroup,
    ambient: &ExtendedSpecialSubgroup,
) -> Result<Vec<AffineWeylElement>> {
    if !w12.is_subgroup_of(&ambient.base) {
        return Err(Error::Containment);
    }
    let n = ambient.order();
    let mut uf = UnionFind::new(n);
    for (k, x) in ambient.elements.iter().enumerate() {
        for &i in &w12.generators {
            let s = g.generator(i);
            let a = ambient.index[&s.mul(x)];
            let b = ambient.index[&x.mul(s)];
            uf.union(k, a);
            uf.union(k, b);
        }
    }
    let lengths: Vec<usize> = ambient.elements.iter().map(|x| g.length(x)).collect();
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..n {
        let root = uf.find(k);
        let entry = classes.entry(root).or_default();
        match entry.first() {
            Some(&j) if lengths[j] < lengths[k] => {}
            Some(&j) if lengths[j] > lengths[k] => *entry = vec![k],
            _ => entry.push(k),
        }
    }
    let mut reps: Vec<(usize, ReducedWord, usize)> = Vec::with_capacity(classes.len());
    for members in classes.into_values() {
        let mut best: Option<(usize, ReducedWord, usize)> = None;
        for k in members {
            let key = (lengths[k], g.reduced_word(&ambient.elements[k])?, k);
            if best.as_ref().map_or(true, |b| (key.0, &key.1) < (b.0, &b.1)) {
                best = Some(key);
            }
        }
        reps.extend(best);
    }
    reps.sort();
    Ok(reps
        .into_iter()
        .map(|(_, _, k)| ambient.elements[k].clone())
        .collect())
}

/// Generators of `W_1 ∩ σ W_2 σ^-1` for `σ` minimal in `W_1 σ W_2`.
pub fn sigma_stabilizer(
    g: &AffineWeylGroup,
    sigma: &AffineWeylElement,
    w1: &[usize],
    w2: &[usize],
) -> Result<Vec<usize>> {
    if !is_minimal(g, sigma, w1, w2) {
        return Err(Error::NotMinimal);
    }
    let sinv = sigma.inverse();
    let mut gens: Vec<usize> = w1
        .iter()
        .copied()
        .filter(|&i| {
            let c = sinv.mul(g.generator(i)).mul(sigma);
            w2.iter().any(|&j| *g.generator(j) == c)
        })
        .collect();
    gens.sort_unstable();
    Ok(gens)
}
