//! Class lists, genus enumeration by neighbours at a split prime, vertex
//! genera and the intertwining matrices between them.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{self, InvariantKey, IsoData};
use crate::lattice::TraceLattice;
use crate::linalg::IMat;
use crate::quaternion::MaximalOrder;
use crate::symplectic::{self, Splitting, SymplecticSpace, Vertex};

/// A class representative with its (lazily computed) automorphism group.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub iso: IsoData,
    pub stab_order: u64,
    auts: OnceLock<Arc<Vec<IMat>>>,
}

impl ClassRep {
    pub fn new(iso: IsoData) -> Self {
        ClassRep { iso, stab_order: 0, auts: OnceLock::new() }
    }

    pub fn lattice(&self) -> &TraceLattice {
        &self.iso.lattice
    }

    pub fn automorphisms(&self) -> Arc<Vec<IMat>> {
        self.auts.get_or_init(|| Arc::new(isometry::automorphisms(&self.iso))).clone()
    }

    /// Generators of the image of the automorphism group on `space`.
    pub fn generators_on(&self, space: &SymplecticSpace) -> Vec<Vec<Vec<i64>>> {
        let mut mats: Vec<Vec<Vec<i64>>> = self.automorphisms().iter().map(|a| space.matrix_of(a)).collect();
        mats.sort();
        mats.dedup();
        symplectic::greedy_generators(&mats, space.p)
    }
}

/// Pairwise non-isometric lattices, indexed by invariants.
#[derive(Debug, Clone, Default)]
pub struct ClassList {
    pub reps: Vec<ClassRep>,
    index: HashMap<InvariantKey, Vec<usize>>,
}

impl ClassList {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn find(&self, x: &IsoData) -> Option<usize> {
        self.find_from(x, 0)
    }

    fn find_from(&self, x: &IsoData, start: usize) -> Option<usize> {
        self.index
            .get(&x.key)?
            .iter()
            .copied()
            .filter(|&i| i >= start)
            .find(|&i| isometry::is_isometric(x, &self.reps[i].iso))
    }

    pub fn push(&mut self, x: IsoData) -> usize {
        let i = self.reps.len();
        self.index.entry(x.key.clone()).or_default().push(i);
        self.reps.push(ClassRep::new(x));
        i
    }

    /// Class index of each item, appending new classes in item order. The
    /// result does not depend on the thread count.
    pub fn classify_batch(&mut self, items: Vec<IsoData>, bound: usize) -> Result<Vec<usize>> {
        let start = self.len();
        let pre: Vec<Option<usize>> = items.par_iter().map(|x| self.find(x)).collect();
        let mut out = Vec::with_capacity(items.len());
        for (x, found) in items.into_iter().zip(pre) {
            let c = match found {
                Some(c) => c,
                None => match self.find_from(&x, start) {
                    Some(c) => c,
                    None => {
                        if self.len() >= bound {
                            return Err(Error::ClassBound(bound));
                        }
                        self.push(x)
                    }
                },
            };
            out.push(c);
        }
        Ok(out)
    }

    /// Fills in all automorphism group orders.
    pub fn compute_stabilizers(&mut self) {
        let orders: Vec<u64> = self.reps.par_iter().map(|r| isometry::automorphism_count(&r.iso)).collect();
        for (r, o) in self.reps.iter_mut().zip(orders) {
            r.stab_order = o;
        }
    }

    pub fn mass(&self) -> BigRational {
        self.reps.iter().fold(BigRational::zero(), |m, r| {
            m + BigRational::new(BigInt::from(1), BigInt::from(r.stab_order))
        })
    }

    pub fn stab_orders(&self) -> Vec<u64> {
        self.reps.iter().map(|r| r.stab_order).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Hyperspecial,
    Vertex { p: u64, d: usize },
}

/// A genus of lattices of a fixed level: class representatives, stabilizer
/// orders and mass.
#[derive(Debug, Clone)]
pub struct GenusData {
    pub disc: u64,
    pub n: usize,
    pub level: Level,
    pub classes: ClassList,
    pub mass: BigRational,
}

impl GenusData {
    pub fn class_number(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub class_bound: usize,
    /// Evaluate one subspace per automorphism orbit (weighted by orbit size)
    /// instead of every subspace.
    pub use_orbits: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { class_bound: 10_000, use_orbits: true }
    }
}

/// Subspaces to evaluate for a class: `(subspace, weight)`.
fn weighted_subspaces(rep: &ClassRep, space: &SymplecticSpace, d: usize, use_orbits: bool) -> Vec<(Vec<Vec<i64>>, u64)> {
    let subs = space.isotropic_subspaces(d);
    if !use_orbits {
        return subs.into_iter().map(|s| (s, 1)).collect();
    }
    let gens = rep.generators_on(space);
    symplectic::subspace_orbits(&subs, &gens, space.p)
        .into_iter()
        .map(|(i, size)| (subs[i].clone(), size as u64))
        .collect()
}

/// The genus of the principal lattice `O^n`, as the closure of the principal
/// class under type-1 neighbour steps at the split prime `p`.
pub fn enumerate_genus(order: &MaximalOrder, n: usize, p: u64, opts: EnumOptions) -> Result<GenusData> {
    let split = symplectic::splitting(order, p)?;
    let mut classes = ClassList::default();
    classes.push(IsoData::new(TraceLattice::principal(order, n).reduced().0));
    let mut next = 0;
    while next < classes.len() {
        let rep = classes.reps[next].clone();
        let space = SymplecticSpace::of_unimodular(rep.lattice(), &split)?;
        let lines = weighted_subspaces(&rep, &space, 1, opts.use_orbits);
        let neighbours: Vec<IsoData> = lines
            .par_iter()
            .map(|(u, _)| -> Result<Vec<IsoData>> {
                let vx = Vertex::new(rep.lattice(), &space, u)?;
                let w = SymplecticSpace::of_discriminant_group(&vx.lattice, &split)?;
                w.isotropic_subspaces(1)
                    .iter()
                    .map(|z| Ok(IsoData::new(symplectic::overlattice(&vx.lattice, &w, z)?)))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        classes.classify_batch(neighbours, opts.class_bound)?;
        next += 1;
    }
    classes.compute_stabilizers();
    let mass = classes.mass();
    Ok(GenusData { disc: order.algebra.discriminant, n, level: Level::Hyperspecial, classes, mass })
}

/// The vertex genus of type `d` at `p` together with the incidence counts
/// `t21[i][c] = #{U : N(L_i, U) ≅ N_c}`.
#[derive(Debug, Clone)]
pub struct VertexLevel {
    pub p: u64,
    pub d: usize,
    pub genus: GenusData,
    pub t21: Vec<Vec<u64>>,
    /// Number of vertex lattices constructed and classified.
    pub evaluations: u64,
}

impl VertexLevel {
    pub fn summary(&self) -> VertexSummary {
        VertexSummary {
            p: self.p,
            d: self.d,
            stab_orders: self.genus.classes.stab_orders(),
            mass: self.genus.mass.to_string(),
            t21: self.t21.clone(),
            evaluations: self.evaluations,
        }
    }
}

/// What the Hecke computation needs from a vertex level: stabilizer orders
/// of its classes and the incidence counts. Serializable for caching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSummary {
    pub p: u64,
    pub d: usize,
    pub stab_orders: Vec<u64>,
    /// Exact mass as `numerator/denominator`.
    pub mass: String,
    pub t21: Vec<Vec<u64>>,
    pub evaluations: u64,
}

impl VertexSummary {
    pub fn class_number(&self) -> usize {
        self.stab_orders.len()
    }

    pub fn mass(&self) -> Result<BigRational> {
        self.mass.parse().map_err(|_| Error::Cache(format!("bad mass {}", self.mass)))
    }
}

pub fn vertex_genus(order: &MaximalOrder, genus: &GenusData, p: u64, d: usize, opts: EnumOptions) -> Result<VertexLevel> {
    let split = symplectic::splitting(order, p)?;
    let mut classes = ClassList::default();
    let mut t21 = Vec::with_capacity(genus.class_number());
    let mut evaluations = 0u64;
    for rep in &genus.classes.reps {
        let space = SymplecticSpace::of_unimodular(rep.lattice(), &split)?;
        let subs = weighted_subspaces(rep, &space, d, opts.use_orbits);
        evaluations += subs.len() as u64;
        let items: Vec<IsoData> = subs
            .par_iter()
            .map(|(u, _)| Ok(IsoData::new(Vertex::new(rep.lattice(), &space, u)?.lattice)))
            .collect::<Result<_>>()?;
        let idx = classes.classify_batch(items, opts.class_bound)?;
        let mut row = vec![0u64; 0];
        for ((_, w), c) in subs.iter().zip(idx) {
            if row.len() <= c {
                row.resize(c + 1, 0);
            }
            row[c] += w;
        }
        t21.push(row);
    }
    for row in t21.iter_mut() {
        row.resize(classes.len(), 0);
    }
    classes.compute_stabilizers();
    let mass = classes.mass();
    let genus = GenusData { disc: genus.disc, n: genus.n, level: Level::Vertex { p, d }, classes, mass };
    Ok(VertexLevel { p, d, genus, t21, evaluations })
}

/// `T^1_2 = D_2^{-1} (T^2_1)^T D_1` with `D = diag(1/|Γ|)`: entry `(c, i)` is
/// `|Γ_c| t21[i][c] / |Γ_i|`, which must be integral.
pub fn adjoint(t21: &[Vec<u64>], stab1: &[u64], stab2: &[u64]) -> Result<Vec<Vec<u64>>> {
    let h1 = t21.len();
    let h2 = stab2.len();
    let mut out = vec![vec![0u64; h1]; h2];
    for c in 0..h2 {
        for i in 0..h1 {
            let num = stab2[c] as u128 * t21[i][c] as u128;
            if num % stab1[i] as u128 != 0 {
                return Err(Error::NonIntegralAdjoint);
            }
            out[c][i] = (num / stab1[i] as u128) as u64;
        }
    }
    Ok(out)
}

/// Direct enumeration of `T^1_2`: for every vertex class, the classes of its
/// unimodular overlattices.
pub fn direct_t12(order: &MaximalOrder, genus: &GenusData, vertex: &VertexLevel) -> Result<Vec<Vec<u64>>> {
    let split = symplectic::splitting(order, vertex.p)?;
    let h1 = genus.class_number();
    vertex
        .genus
        .classes
        .reps
        .par_iter()
        .map(|rep| {
            let w = SymplecticSpace::of_discriminant_group(rep.lattice(), &split)?;
            let mut row = vec![0u64; h1];
            for z in w.isotropic_subspaces(vertex.d) {
                let lp = IsoData::new(symplectic::overlattice(rep.lattice(), &w, &z)?);
                let j = genus
                    .classes
                    .find(&lp)
                    .ok_or_else(|| Error::Inconsistent("overlattice outside the genus".into()))?;
                row[j] += 1;
            }
            Ok(row)
        })
        .collect()
}

/// Splitting data for `p`, re-exported for callers that build spaces directly.
pub fn split(order: &MaximalOrder, p: u64) -> Result<Splitting> {
    symplectic::splitting(order, p)
}
