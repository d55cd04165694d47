//! Hecke matrices on a genus of unimodular lattices: `ν`-matrices from the
//! intertwining operators, basis operators recovered through the Eichler
//! elements of the hyperspecial level, and the direct method used as an
//! oracle and for benchmarks.

use amf_core::cosets::complement;
use amf_core::hecke::{hyperspecial_eichler_elements, left_coset_count, solve_basis_operators};
use amf_core::{AffineWeylGroup, ExtendedSpecialSubgroup, RootDatum, Series};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genus::{self, EnumOptions, GenusData, VertexSummary};
use crate::isometry::IsoData;
use crate::quaternion::MaximalOrder;
use crate::symplectic::{self, SymplecticSpace, Vertex};

pub type Matrix = Vec<Vec<i128>>;

/// A Hecke operator `T(h_p(word))` on the classes of a genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeMatrix {
    pub prime: u64,
    pub word: String,
    pub matrix: Matrix,
    /// Number of left cosets in the double coset at `q = p`.
    pub degree: i128,
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn to_matrix(m: &[Vec<u64>]) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

/// `ν = T^2_1 · T^1_2` on the hyperspecial classes.
pub fn nu_matrix(genus: &GenusData, vertex: &VertexSummary) -> Result<Matrix> {
    let t12 = genus::adjoint(&vertex.t21, &genus.classes.stab_orders(), &vertex.stab_orders)?;
    Ok(mat_mul(&to_matrix(&vertex.t21), &to_matrix(&t12)))
}

/// The affine Weyl group of type `C_n` and its hyperspecial parahoric.
pub fn c_group(n: usize) -> Result<(AffineWeylGroup, ExtendedSpecialSubgroup)> {
    let g = AffineWeylGroup::simply_connected(RootDatum::new(Series::C, n)?);
    let k1 = ExtendedSpecialSubgroup::new(&g, &complement(&g, &[0]), &[])?;
    Ok((g, k1))
}

/// Basis Hecke operators `T(h_p(word))` for the generator words, from the
/// `ν`-matrices of the vertex levels `d = 1..n` (in that order).
pub fn basis_from_nus(n: usize, p: u64, nus: &[Matrix]) -> Result<Vec<HeckeMatrix>> {
    let (g, k1) = c_group(n)?;
    let elements: Vec<_> = hyperspecial_eichler_elements(&g)?.into_iter().map(|(_, e)| e).collect();
    let h = nus.first().map_or(0, |m| m.len());
    let q = p as i64;
    let mut out = Vec::new();
    for sol in solve_basis_operators(&elements)? {
        let (id, coeffs) = sol.expansion.evaluate(q);
        let mut m: Matrix = identity(h).into_iter().map(|r| r.into_iter().map(|x| x * id).collect()).collect();
        for (c, nu) in coeffs.iter().zip(nus) {
            for i in 0..h {
                for j in 0..h {
                    m[i][j] += c * nu[i][j];
                }
            }
        }
        let term = elements[sol.source]
            .terms
            .iter()
            .find(|t| t.label == sol.label)
            .ok_or_else(|| Error::Inconsistent("solved label missing".into()))?;
        let degree = left_coset_count(&g, &term.element, &k1, &k1)?.eval(q);
        out.push(HeckeMatrix { prime: p, word: sol.label.clone(), matrix: m, degree });
    }
    Ok(out)
}

/// Everything computed at one prime by the Eichler method.
#[derive(Debug, Clone)]
pub struct PrimeData {
    pub p: u64,
    pub vertices: Vec<VertexSummary>,
    pub nus: Vec<Matrix>,
    pub operators: Vec<HeckeMatrix>,
}

pub fn hecke_at_prime(order: &MaximalOrder, genus: &GenusData, p: u64, opts: EnumOptions) -> Result<PrimeData> {
    let vertices = (1..=genus.n)
        .map(|d| genus::vertex_genus(order, genus, p, d, opts).map(|v| v.summary()))
        .collect::<Result<Vec<_>>>()?;
    from_vertices(genus, p, vertices)
}

pub fn from_vertices(genus: &GenusData, p: u64, vertices: Vec<VertexSummary>) -> Result<PrimeData> {
    let nus = vertices.iter().map(|v| nu_matrix(genus, v)).collect::<Result<Vec<_>>>()?;
    let operators = basis_from_nus(genus.n, p, &nus)?;
    Ok(PrimeData { p, vertices, nus, operators })
}

/// The translation words `t(e_1 + ... + e_k)`, `k = 1..n`, as labels of the
/// hyperspecial double cosets, in lexicographically least reduced form
/// (`s0`, `s0s1s0`, `s0s1s0s2s1s0` for `n = 3`).
pub fn translation_words(n: usize) -> Result<Vec<String>> {
    let (g, _) = c_group(n)?;
    let elements: Vec<_> = hyperspecial_eichler_elements(&g)?.into_iter().map(|(_, e)| e).collect();
    (1..=n)
        .map(|k| {
            let mut want = vec![0i64; n];
            if k < n {
                want[k - 1] = 1;
            } else {
                want[n - 1] = 2;
            }
            elements
                .iter()
                .flat_map(|e| e.terms.iter())
                .find(|t| t.dominant.as_ref() == Some(&want))
                .map(|t| t.label.clone())
                .ok_or_else(|| Error::Inconsistent(format!("no double coset for k = {k}")))
        })
        .collect()
}

/// Direct method: `T(t(e_1 + ... + e_k))` by enumerating, for every isotropic
/// `k`-space `U`, the unimodular overlattices of `N(L, U)` that meet `L`
/// exactly in `N`. Returns the matrix and the number of lattices classified.
pub fn direct_operator(order: &MaximalOrder, genus: &GenusData, p: u64, k: usize, opts: EnumOptions) -> Result<(HeckeMatrix, u64)> {
    let split = symplectic::splitting(order, p)?;
    let h = genus.class_number();
    let mut matrix = vec![vec![0i128; h]; h];
    let mut evaluations = 0u64;
    for (i, rep) in genus.classes.reps.iter().enumerate() {
        let space = SymplecticSpace::of_unimodular(rep.lattice(), &split)?;
        let subs: Vec<(Vec<Vec<i64>>, u64)> = if opts.use_orbits {
            let all = space.isotropic_subspaces(k);
            let gens = rep.generators_on(&space);
            symplectic::subspace_orbits(&all, &gens, space.p)
                .into_iter()
                .map(|(j, s)| (all[j].clone(), s as u64))
                .collect()
        } else {
            space.isotropic_subspaces(k).into_iter().map(|s| (s, 1)).collect()
        };
        let rows: Vec<(Vec<usize>, u64)> = subs
            .par_iter()
            .map(|(u, w)| -> Result<(Vec<usize>, u64)> {
                let vx = Vertex::new(rep.lattice(), &space, u)?;
                let disc = SymplecticSpace::of_discriminant_group(&vx.lattice, &split)?;
                let parent = vx.parent_subspace(&disc);
                let mut hits = Vec::new();
                for z in disc.isotropic_subspaces(k) {
                    let mut both = z.clone();
                    both.extend(parent.iter().cloned());
                    if crate::linalg::rank_mod(&both, space.p) != 2 * k {
                        continue;
                    }
                    let lp = IsoData::new(symplectic::overlattice(&vx.lattice, &disc, &z)?);
                    let j = genus
                        .classes
                        .find(&lp)
                        .ok_or_else(|| Error::Inconsistent("neighbour outside the genus".into()))?;
                    hits.push(j);
                }
                Ok((hits, *w))
            })
            .collect::<Result<_>>()?;
        for (hits, w) in rows {
            evaluations += hits.len() as u64;
            for j in hits {
                matrix[i][j] += w as i128;
            }
        }
    }
    let word = translation_words(genus.n)?[k - 1].clone();
    let degree = matrix.first().map_or(0, |r| r.iter().sum());
    Ok((HeckeMatrix { prime: p, word, matrix, degree }, evaluations))
}

/// `D_1 T` symmetric, with `D_1 = diag(1/|Γ_i|)`.
pub fn is_self_adjoint(m: &Matrix, stabs: &[u64]) -> bool {
    let h = m.len();
    (0..h).all(|i| (0..h).all(|j| m[i][j] * stabs[j] as i128 == m[j][i] * stabs[i] as i128))
}

pub fn commute(a: &Matrix, b: &Matrix) -> bool {
    mat_mul(a, b) == mat_mul(b, a)
}

/// The all-ones vector is an eigenvector with eigenvalue `value`.
pub fn constant_eigenvalue(m: &Matrix) -> Option<i128> {
    let sums: Vec<i128> = m.iter().map(|r| r.iter().sum()).collect();
    let first = *sums.first()?;
    sums.iter().all(|&s| s == first).then_some(first)
}
