//! Hecke combinatorics in the indeterminate `q`: Poincaré polynomials, parahoric
//! indices, left-coset counts, Eichler elements and the triangular solver that
//! recovers basis operators from them.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::affine::{AffineWeylElement, AffineWeylGroup, ReducedWord};
use crate::cosets::{
    is_minimal, min_double_coset_reps, min_left_coset_reps, min_rep, sigma_stabilizer,
    ExtendedSpecialSubgroup, SpecialSubgroup,
};
use crate::error::{Error, Result};
use crate::poly::QPolynomial;
use crate::roots::{RootDatum, Series};

/// `sum_{w in W} q^{l(w)}`.
pub fn poincare_polynomial(w: &SpecialSubgroup) -> QPolynomial {
    QPolynomial::from_lengths(w.lengths.iter().copied())
}

/// Poincaré polynomial of the special subgroup with the given generators.
pub fn poincare_of(g: &AffineWeylGroup, gens: &[usize]) -> Result<QPolynomial> {
    Ok(poincare_polynomial(&SpecialSubgroup::new(g, gens)?))
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// `[P_1' : P_2'] = [Omega_1 : Omega_2] * sum_{w in [W_1/W_2]} q^{l(w)}`.
pub fn parahoric_index(
    g: &AffineWeylGroup,
    p1: &ExtendedSpecialSubgroup,
    p2: &ExtendedSpecialSubgroup,
) -> Result<QPolynomial> {
    if !p2.base.is_subgroup_of(&p1.base) || !p2.omega_part.iter().all(|k| p1.omega_part.contains(k)) {
        return Err(Error::Containment);
    }
    let lengths = min_left_coset_reps(g, &p1.base, &p2.base)?
        .iter()
        .map(|x| g.length(x))
        .collect::<Vec<_>>();
    let ratio = (p1.omega_part.len() / p2.omega_part.len()) as i64;
    Ok(QPolynomial::from_lengths(lengths).scale(ratio))
}

/// Index `[W_S : W_T]` of special subgroups as the quotient of Poincaré polynomials.
pub fn index_polynomial(g: &AffineWeylGroup, s: &[usize], t: &[usize]) -> Result<QPolynomial> {
    poincare_of(g, s)?.div_exact(&poincare_of(g, t)?)
}

/// Elements of `Omega_1 ∩ Omega_2` whose conjugation fixes the double coset `W_1 σ W_2`.
fn omega_stabilizer(
    g: &AffineWeylGroup,
    sigma: &AffineWeylElement,
    s1: &[usize],
    s2: &[usize],
    omegas: &[usize],
) -> usize {
    let base = min_rep(g, sigma, s1, s2);
    omegas
        .iter()
        .filter(|&&k| {
            let rho = &g.omega.elements[k];
            min_rep(g, &sigma.conjugate_by(rho), s1, s2) == base
        })
        .count()
}

/// `|P_1' σ P_2' / P_2'| = [Omega_1 : Omega_12^σ] q^{l(σ)} sum_{w in [W_1 / W_1^{σ W_2}]} q^{l(w)}`.
pub fn left_coset_count(
    g: &AffineWeylGroup,
    sigma: &AffineWeylElement,
    p1: &ExtendedSpecialSubgroup,
    p2: &ExtendedSpecialSubgroup,
) -> Result<QPolynomial> {
    let s1 = p1.generators();
    let s2 = p2.generators();
    if !is_minimal(g, sigma, s1, s2) {
        return Err(Error::NotMinimal);
    }
    let t = sigma_stabilizer(g, sigma, s1, s2)?;
    let omega12 = intersect(&p1.omega_part, &p2.omega_part);
    let stab = omega_stabilizer(g, sigma, s1, s2, &omega12);
    let factor = (p1.omega_part.len() / stab) as i64;
    let idx = index_polynomial(g, s1, &t)?;
    Ok((&QPolynomial::monomial(g.length(sigma)) * &idx).scale(factor))
}

/// One basis term `c * ind_{P κ P}` of a Hecke algebra element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeTerm {
    /// Lexicographically least reduced word of the minimal representative.
    pub label: String,
    pub word: ReducedWord,
    pub element: AffineWeylElement,
    pub coefficient: QPolynomial,
    /// Dominant translation labelling the `W_0`-double coset, when the level is `W_0`.
    pub dominant: Option<Vec<i64>>,
}

/// A finite formal sum of double cosets of the level `W_S * Omega`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeElement {
    pub level: Vec<usize>,
    pub level_omega: Vec<usize>,
    /// Sorted by (length, word).
    pub terms: Vec<HeckeTerm>,
}

impl HeckeElement {
    pub fn coefficient(&self, label: &str) -> Option<&QPolynomial> {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map(|t| &t.coefficient)
    }

    pub fn identity_coefficient(&self) -> QPolynomial {
        self.coefficient("1").cloned().unwrap_or_default()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.terms.iter().map(|t| t.label.as_str()).collect()
    }

    /// Coefficients evaluated at an integer `q`.
    pub fn evaluate(&self, q: i64) -> Vec<(String, i128)> {
        self.terms
            .iter()
            .map(|t| (t.label.clone(), t.coefficient.eval(q)))
            .collect()
    }
}

/// Canonical representative of `W_1' x W_1'`: minimal length, then least reduced word.
fn canonical_double_coset(
    g: &AffineWeylGroup,
    x: &AffineWeylElement,
    p1: &ExtendedSpecialSubgroup,
) -> Result<(AffineWeylElement, ReducedWord)> {
    let s1 = p1.generators();
    let mut best: Option<(usize, ReducedWord, AffineWeylElement)> = None;
    for &a in &p1.omega_part {
        for &b in &p1.omega_part {
            let y = g.omega.elements[a].mul(x).mul(&g.omega.elements[b]);
            let m = min_rep(g, &y, s1, s1);
            let key = (g.length(&m), g.reduced_word(&m)?);
            if best.as_ref().map_or(true, |(l, w, _)| (key.0, &key.1) < (*l, w)) {
                best = Some((key.0, key.1, m));
            }
        }
    }
    let (_, w, m) = best.expect("Omega part contains the identity");
    Ok((m, w))
}

fn is_finite_weyl_level(g: &AffineWeylGroup, level: &[usize], omega: &[usize]) -> bool {
    omega.len() == 1 && level == (1..=g.rank()).collect::<Vec<_>>().as_slice()
}

fn dominant_label(g: &AffineWeylGroup, x: &AffineWeylElement) -> Vec<i64> {
    g.datum.dominant(&x.translation)
}

/// The Eichler element `nu(P_1, P_2)` for special subgroups `W_1, W_2` of `W_af`.
pub fn eichler_element(g: &AffineWeylGroup, s1: &[usize], s2: &[usize]) -> Result<HeckeElement> {
    let p1 = ExtendedSpecialSubgroup::new(g, s1, &[])?;
    let p2 = ExtendedSpecialSubgroup::new(g, s2, &[])?;
    eichler_element_extended(g, &p1, &p2)
}

/// The Eichler element `nu(P_1', P_2')` for `Omega`-extended parahorics.
///
/// Each `κ ∈ [W_12 \ W_2' / W_12]` contributes `t_κ |Omega_1^κ|`, contributions of
/// `κ` with the same `W_1'`-double coset are merged, and the total is divided by
/// `|Omega_12|^2`.
pub fn eichler_element_extended(
    g: &AffineWeylGroup,
    p1: &ExtendedSpecialSubgroup,
    p2: &ExtendedSpecialSubgroup,
) -> Result<HeckeElement> {
    let s1 = p1.generators().to_vec();
    let s2 = p2.generators().to_vec();
    let s12 = intersect(&s1, &s2);
    let w12 = SpecialSubgroup::new(g, &s12)?;
    let omega12 = intersect(&p1.omega_part, &p2.omega_part);
    let kappas = min_double_coset_reps(g, &w12, p2)?;

    let mut poincare: HashMap<Vec<usize>, QPolynomial> = HashMap::new();
    let mut poincare_cached = |gens: Vec<usize>| -> Result<QPolynomial> {
        if let Some(p) = poincare.get(&gens) {
            return Ok(p.clone());
        }
        let p = poincare_of(g, &gens)?;
        poincare.insert(gens, p.clone());
        Ok(p)
    };

    let mut merged: BTreeMap<(usize, ReducedWord), (AffineWeylElement, QPolynomial)> = BTreeMap::new();
    for kappa in &kappas {
        let t = sigma_stabilizer(g, kappa, &s1, &s1)?;
        let t2 = intersect(&t, &s2);
        let t_kappa = poincare_cached(t.clone())?.div_exact(&poincare_cached(t2)?)?;
        let stab = omega_stabilizer(g, kappa, &s1, &s1, &p1.omega_part) as i64;
        let (rep, word) = canonical_double_coset(g, kappa, p1)?;
        let key = (g.length(&rep), word);
        let entry = merged
            .entry(key)
            .or_insert_with(|| (rep, QPolynomial::zero()));
        entry.1 = &entry.1 + &t_kappa.scale(stab);
    }

    let norm = (omega12.len() * omega12.len()) as i64;
    let dominant = is_finite_weyl_level(g, &s1, &p1.omega_part);
    let mut terms = Vec::with_capacity(merged.len());
    for ((_, word), (element, coeff)) in merged {
        let label = word.to_string();
        let coefficient = coeff
            .div_int(norm)
            .map_err(|_| Error::NonIntegral(label.clone()))?;
        if !coefficient.has_nonnegative_coeffs() {
            return Err(Error::NonIntegral(label));
        }
        terms.push(HeckeTerm {
            dominant: dominant.then(|| dominant_label(g, &element)),
            label,
            word,
            element,
            coefficient,
        });
    }
    Ok(HeckeElement {
        level: s1,
        level_omega: p1.omega_part.clone(),
        terms,
    })
}

/// Eichler elements `nu(W_0, W_d)` of the hyperspecial level against every maximal
/// parahoric `W_d` (delete node `d`, `d = 1..n`).
pub fn hyperspecial_eichler_elements(g: &AffineWeylGroup) -> Result<Vec<(usize, HeckeElement)>> {
    let s0: Vec<usize> = (1..=g.rank()).collect();
    (1..=g.rank())
        .map(|d| {
            let sd = crate::cosets::complement(g, &[d]);
            Ok((d, eichler_element(g, &s0, &sd)?))
        })
        .collect()
}

/// Translations whose double cosets generate the local Eichler algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    pub series: Series,
    pub rank: usize,
    /// Coweights in coweight coordinates (coefficients of the fundamental coweights).
    pub coweights: Vec<Vec<i64>>,
    pub full_hecke: bool,
}

impl GeneratorTable {
    pub fn describe(&self) -> Vec<String> {
        self.coweights.iter().map(|c| describe_coweight(c)).collect()
    }
}

/// Human-readable form such as `w1+w3` or `2w2` (fundamental coweights `w_i`).
pub fn describe_coweight(c: &[i64]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| match x {
            1 => format!("w{}", i + 1),
            _ => format!("{x}w{}", i + 1),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn eichler_algebra_generators(series: Series, rank: usize) -> Result<GeneratorTable> {
    crate::roots::CartanType::new(series, rank)?;
    let n = rank;
    let w = |entries: &[(usize, i64)]| {
        let mut v = vec![0i64; n];
        for &(i, c) in entries {
            v[i - 1] += c;
        }
        v
    };
    let coweights: Vec<Vec<i64>> = match series {
        Series::A => {
            let mut v: Vec<Vec<i64>> = (1..=n / 2).map(|i| w(&[(i, 1), (n + 1 - i, 1)])).collect();
            if n % 2 == 1 {
                v.push(w(&[((n + 1) / 2, 2)]));
            }
            v
        }
        Series::B => {
            if n < 3 {
                return Err(Error::UnsupportedType(format!("B{n}")));
            }
            let mut v: Vec<Vec<i64>> = (1..=n / 2).map(|i| w(&[(2 * i, 1)])).collect();
            v.push(w(&[(1, 2)]));
            v
        }
        Series::C => {
            let mut v: Vec<Vec<i64>> = (1..n).map(|i| w(&[(i, 1)])).collect();
            v.push(w(&[(n, 2)]));
            v
        }
        Series::D => {
            let mut v: Vec<Vec<i64>> = (1..n / 2).map(|i| w(&[(2 * i, 1)])).collect();
            v.push(w(&[(1, 2)]));
            if n % 2 == 0 {
                v.push(w(&[(n - 1, 2)]));
                v.push(w(&[(n, 2)]));
            } else {
                v.push(w(&[(n - 1, 1), (n, 1)]));
            }
            v
        }
        Series::E => match n {
            6 => vec![w(&[(2, 1)]), w(&[(1, 1), (6, 1)])],
            7 => vec![w(&[(1, 1)]), w(&[(5, 1)]), w(&[(6, 2)])],
            _ => vec![w(&[(1, 1)]), w(&[(3, 1)])],
        },
        Series::F => vec![w(&[(1, 1)]), w(&[(4, 1)])],
        Series::G => vec![w(&[(1, 1)])],
    };
    Ok(GeneratorTable {
        series,
        rank,
        coweights,
        full_hecke: series == Series::C,
    })
}

/// Dominant labels of the `W_0`-double cosets met by one maximal parahoric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParahoricLabels {
    /// The deleted affine node.
    pub node: usize,
    /// Sorted dominant coweights of `[W_{0,i} \ W_i / W_{0,i}]`.
    pub labels: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRowReport {
    pub table: GeneratorTable,
    pub parahorics: Vec<ParahoricLabels>,
    /// An order of the claimed generators in which each one first appears in a label
    /// set whose other nonzero labels all come earlier, if such an order exists.
    pub order: Option<Vec<Vec<i64>>>,
    pub verified: bool,
}

/// Label sets `[W_{0,i} \ W_i / W_{0,i}]` for every node `i = 1..n`.
pub fn parahoric_label_sets(g: &AffineWeylGroup, bound: usize) -> Result<Vec<ParahoricLabels>> {
    let n = g.rank();
    let mut out = Vec::new();
    for i in 1..=n {
        let wi_gens = crate::cosets::complement(g, &[i]);
        let w0i_gens: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
        let wi = SpecialSubgroup::with_bound(g, &wi_gens, bound)?;
        let w0i = SpecialSubgroup::with_bound(g, &w0i_gens, bound)?;
        let reps = min_double_coset_reps(g, &w0i, &ExtendedSpecialSubgroup::plain(wi))?;
        let mut labels: Vec<Vec<i64>> = reps.iter().map(|x| dominant_label(g, x)).collect();
        labels.sort();
        labels.dedup();
        out.push(ParahoricLabels { node: i, labels });
    }
    Ok(out)
}

/// Check a generator-table row against the label sets of the maximal parahorics.
///
/// The row is verified when the nonzero labels over all maximal parahorics are
/// exactly the claimed generators and the generators can be ordered so that each
/// one is the only new label of some parahoric, which is what makes the system of
/// Eichler elements triangular.
pub fn verify_generator_row(series: Series, rank: usize, bound: usize) -> Result<GeneratorRowReport> {
    let table = eichler_algebra_generators(series, rank)?;
    let g = AffineWeylGroup::simply_connected(RootDatum::new(series, rank)?);
    let parahorics = parahoric_label_sets(&g, bound)?;
    let zero = vec![0i64; rank];

    let mut claimed = table.coweights.clone();
    claimed.sort();
    let mut found: Vec<Vec<i64>> = parahorics
        .iter()
        .flat_map(|p| p.labels.iter().filter(|l| **l != zero).cloned())
        .collect();
    found.sort();
    found.dedup();

    // peel generators off one at a time: some label set must consist of the new
    // generator plus ones already reached
    let sets: Vec<Vec<Vec<i64>>> = parahorics
        .iter()
        .map(|p| p.labels.iter().filter(|l| **l != zero).cloned().collect())
        .collect();
    let mut order: Vec<Vec<i64>> = Vec::new();
    let mut remaining = claimed.clone();
    while !remaining.is_empty() {
        let next = remaining.iter().position(|gen| {
            sets.iter().any(|s| {
                s.contains(gen) && s.iter().all(|l| l == gen || order.contains(l))
            })
        });
        match next {
            Some(k) => order.push(remaining.remove(k)),
            None => break,
        }
    }
    let triangular = remaining.is_empty();
    let all_contain_zero = parahorics.iter().all(|p| p.labels.contains(&zero));
    let verified = triangular && all_contain_zero && found == claimed;
    Ok(GeneratorRowReport {
        table,
        parahorics,
        order: triangular.then_some(order),
        verified,
    })
}

/// A `Z[q]`-combination `c_id * Id + sum_k c_k * nu_k`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Combination {
    pub identity: QPolynomial,
    pub nus: Vec<QPolynomial>,
}

impl Combination {
    fn zero(m: usize) -> Self {
        Combination {
            identity: QPolynomial::zero(),
            nus: vec![QPolynomial::zero(); m],
        }
    }

    fn add_scaled(&mut self, other: &Combination, c: &QPolynomial) {
        self.identity = &self.identity + &(&other.identity * c);
        for (a, b) in self.nus.iter_mut().zip(&other.nus) {
            *a = &*a + &(b * c);
        }
    }

    /// Evaluate at `q`, giving integer coefficients for `Id` and each `nu_k`.
    pub fn evaluate(&self, q: i64) -> (i128, Vec<i128>) {
        (self.identity.eval(q), self.nus.iter().map(|c| c.eval(q)).collect())
    }
}

/// `T(label) = sign * (nu_source - sum lower)` and its expansion in the `nu`'s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSolution {
    pub label: String,
    pub source: usize,
    /// `(label, coefficient)` of the already-known terms subtracted from `nu_source`.
    pub lower: Vec<(String, QPolynomial)>,
    pub expansion: Combination,
}

/// Solve the triangular system `nu_k = sum_label c_{k,label} T(label)` for the `T(label)`.
pub fn solve_basis_operators(elements: &[HeckeElement]) -> Result<Vec<BasisSolution>> {
    let m = elements.len();
    let mut known: HashMap<String, Combination> = HashMap::new();
    let mut id = Combination::zero(m);
    id.identity = QPolynomial::one();
    known.insert("1".into(), id);
    let mut solved = Vec::new();
    let mut used = vec![false; m];
    loop {
        let mut progress = false;
        for (k, nu) in elements.iter().enumerate() {
            if used[k] {
                continue;
            }
            let unknown: Vec<&HeckeTerm> = nu
                .terms
                .iter()
                .filter(|t| !known.contains_key(&t.label))
                .collect();
            match unknown.as_slice() {
                [] => used[k] = true,
                [t] => {
                    let c = &t.coefficient;
                    let sign = match c.coeffs() {
                        [1] => 1,
                        [-1] => -1,
                        _ => continue,
                    };
                    let mut expansion = Combination::zero(m);
                    expansion.nus[k] = QPolynomial::constant(sign);
                    let mut lower = Vec::new();
                    for other in nu.terms.iter().filter(|o| o.label != t.label) {
                        expansion.add_scaled(&known[&other.label], &other.coefficient.scale(-sign));
                        lower.push((other.label.clone(), other.coefficient.clone()));
                    }
                    known.insert(t.label.clone(), expansion.clone());
                    solved.push(BasisSolution {
                        label: t.label.clone(),
                        source: k,
                        lower,
                        expansion,
                    });
                    used[k] = true;
                    progress = true;
                }
                _ => {}
            }
        }
        if used.iter().all(|&u| u) {
            return Ok(solved);
        }
        if !progress {
            return Err(Error::NotTriangular);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> AffineWeylGroup {
        AffineWeylGroup::simply_connected(RootDatum::new(Series::C, 2).unwrap())
    }

    fn p(c: &[i64]) -> QPolynomial {
        QPolynomial::new(c.to_vec())
    }

    #[test]
    fn poincare_c2() {
        let g = c2();
        assert_eq!(poincare_of(&g, &[]).unwrap(), p(&[1]));
        assert_eq!(poincare_of(&g, &[1]).unwrap(), p(&[1, 1]));
        assert_eq!(poincare_of(&g, &[1, 2]).unwrap(), p(&[1, 2, 2, 2, 1]));
    }

    #[test]
    fn indices_c2() {
        let g = c2();
        let e = |s: &[usize]| ExtendedSpecialSubgroup::new(&g, s, &[]).unwrap();
        assert_eq!(parahoric_index(&g, &e(&[1, 2]), &e(&[2])).unwrap(), p(&[1, 1, 1, 1]));
        assert_eq!(parahoric_index(&g, &e(&[0, 2]), &e(&[2])).unwrap(), p(&[1, 1]));
        assert_eq!(parahoric_index(&g, &e(&[0, 2]), &e(&[0, 2])).unwrap(), p(&[1]));
        assert!(parahoric_index(&g, &e(&[2]), &e(&[0, 2])).is_err());
    }

    #[test]
    fn left_coset_counts_c2() {
        let g = c2();
        let w1 = ExtendedSpecialSubgroup::new(&g, &[1, 2], &[]).unwrap();
        let count = |w: &str| left_coset_count(&g, &g.parse(w).unwrap(), &w1, &w1).unwrap();
        assert_eq!(count("1"), p(&[1]));
        assert_eq!(count("s0"), p(&[0, 1, 1, 1, 1]));
        assert_eq!(count("s0s1s0"), p(&[0, 0, 0, 1, 1, 1, 1]));
        assert_eq!(
            left_coset_count(&g, &g.parse("s1s0").unwrap(), &w1, &w1).unwrap_err(),
            Error::NotMinimal
        );
    }

    #[test]
    fn eichler_c2() {
        let g = c2();
        let nu12 = eichler_element(&g, &[1, 2], &[0, 2]).unwrap();
        assert_eq!(nu12.labels(), vec!["1", "s0"]);
        assert_eq!(nu12.coefficient("1").unwrap(), &p(&[1, 1, 1, 1]));
        assert_eq!(nu12.coefficient("s0").unwrap(), &p(&[1]));
        let nu13 = eichler_element(&g, &[1, 2], &[0, 1]).unwrap();
        assert_eq!(nu13.labels(), vec!["1", "s0", "s0s1s0"]);
        assert_eq!(nu13.coefficient("s0").unwrap(), &p(&[1, 1]));
        assert_eq!(nu13.coefficient("s0s1s0").unwrap(), &p(&[1]));
        let nu21 = eichler_element(&g, &[0, 2], &[1, 2]).unwrap();
        assert_eq!(nu21.labels(), vec!["1", "s1", "s1s2s1"]);
        assert_eq!(nu21.identity_coefficient(), p(&[1, 1]));
        assert_eq!(nu21.coefficient("s1s2s1").unwrap(), &p(&[1]));
        let nu31 = eichler_element(&g, &[0, 1], &[1, 2]).unwrap();
        assert_eq!(nu31.labels(), vec!["1", "s2", "s2s1s2"]);
        assert_eq!(nu31.coefficient("s2").unwrap(), &p(&[1, 1]));
        let same = eichler_element(&g, &[1, 2], &[1, 2]).unwrap();
        assert_eq!(same.labels(), vec!["1"]);
        assert_eq!(same.identity_coefficient(), p(&[1]));
        // dominant labels at the hyperspecial level
        assert_eq!(nu13.terms[1].dominant, Some(vec![1, 0]));
        assert_eq!(nu13.terms[2].dominant, Some(vec![0, 2]));
    }

    #[test]
    fn basis_solve_c2() {
        let g = c2();
        let nus: Vec<HeckeElement> = hyperspecial_eichler_elements(&g)
            .unwrap()
            .into_iter()
            .map(|(_, e)| e)
            .collect();
        let sol = solve_basis_operators(&nus).unwrap();
        assert_eq!(sol[0].label, "s0");
        assert_eq!(sol[0].expansion.identity, p(&[-1, -1, -1, -1]));
        assert_eq!(sol[0].expansion.nus, vec![p(&[1]), p(&[])]);
        assert_eq!(sol[1].label, "s0s1s0");
        // nu13 - P - (q+1)(nu12 - P) with P = q^3+q^2+q+1
        assert_eq!(sol[1].expansion.nus, vec![p(&[-1, -1]), p(&[1])]);
        assert_eq!(sol[1].expansion.identity, p(&[0, 1, 1, 1, 1]));
    }

    #[test]
    fn non_triangular() {
        let g = c2();
        let mut nu = eichler_element(&g, &[1, 2], &[0, 2]).unwrap();
        nu.terms[1].coefficient = p(&[2]);
        assert_eq!(solve_basis_operators(&[nu]).unwrap_err(), Error::NotTriangular);
    }

    #[test]
    fn generator_tables() {
        let c3 = eichler_algebra_generators(Series::C, 3).unwrap();
        assert_eq!(c3.coweights, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]);
        assert!(c3.full_hecke);
        let a3 = eichler_algebra_generators(Series::A, 3).unwrap();
        assert_eq!(a3.describe(), vec!["w1+w3", "2w2"]);
        assert!(!a3.full_hecke);
        assert_eq!(eichler_algebra_generators(Series::G, 2).unwrap().describe(), vec!["w1"]);
        assert!(eichler_algebra_generators(Series::B, 2).is_err());
    }

    #[test]
    fn generator_row_c2() {
        let r = verify_generator_row(Series::C, 2, 100_000).unwrap();
        assert!(r.verified);
        assert_eq!(r.parahorics[0].labels, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(r.parahorics[1].labels, vec![vec![0, 0], vec![0, 2], vec![1, 0]]);
    }
}
