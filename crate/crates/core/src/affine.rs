//! The extended affine Weyl group `X_* ⋊ W_0`, its length function and the
//! length-zero subgroup `Omega`.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{FiniteWeylElement, RootDatum};

/// `t_lambda * w`, with `lambda` in coweight coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineWeylElement {
    pub translation: Vec<i64>,
    pub finite: FiniteWeylElement,
}

impl PartialEq for AffineWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.translation == other.translation && self.finite.matrix == other.finite.matrix
    }
}

impl Eq for AffineWeylElement {}

impl Hash for AffineWeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.translation.hash(state);
        self.finite.matrix.hash(state);
    }
}

impl AffineWeylElement {
    pub fn identity(n: usize) -> Self {
        let mut finite = FiniteWeylElement::identity(n);
        finite.word = None;
        AffineWeylElement {
            translation: vec![0; n],
            finite,
        }
    }

    pub fn translation(lambda: Vec<i64>) -> Self {
        let mut x = Self::identity(lambda.len());
        x.translation = lambda;
        x
    }

    pub fn from_finite(w: &FiniteWeylElement) -> Self {
        let mut finite = w.clone();
        finite.word = None;
        AffineWeylElement {
            translation: vec![0; w.n],
            finite,
        }
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.translation.iter().all(|&c| c == 0) && self.finite.is_identity()
    }

    /// `(t_l w)(t_m v) = t_{l + w m} (w v)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: other.rank(),
            });
        }
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let wm = self.finite.act(&other.translation);
        let translation = self
            .translation
            .iter()
            .zip(&wm)
            .map(|(a, b)| a + b)
            .collect();
        let mut finite = self.finite.mul(&other.finite);
        finite.word = None;
        AffineWeylElement {
            translation,
            finite,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut winv = self.finite.inverse();
        winv.word = None;
        let translation = winv.act(&self.translation).iter().map(|c| -c).collect();
        AffineWeylElement {
            translation,
            finite: winv,
        }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }
}

/// Which cocharacter lattice `X_*` the translations range over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeMode {
    /// `X_* = Lambda`, the coroot lattice (simply connected group).
    Coroot,
    /// `X_*` is the full coweight lattice (adjoint group).
    Coweight,
    /// `X_*` given by a Z-basis in coweight coordinates; it must contain the coroot lattice.
    Overlattice(Vec<Vec<i64>>),
}

impl LatticeMode {
    /// The lattice generated by the coroots and `extra` (coweight coordinates).
    pub fn generated_by(datum: &RootDatum, extra: &[Vec<i64>]) -> Self {
        LatticeMode::Overlattice(cocharacter_hnf(datum, extra))
    }
}

/// Row-style Hermite normal form: nonzero rows, positive pivots, entries above pivots reduced.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let ncols = a[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let piv = (r..a.len())
                .filter(|&i| a[i][c] != 0)
                .min_by_key(|&i| a[i][c].abs());
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c] != 0 {
                    let f = a[i][c] / a[r][c];
                    let pivot_row = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = a[i][c].div_euclid(a[r][c]);
            if f != 0 {
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Membership test in the row span of a matrix in Hermite normal form.
pub fn in_row_span(hnf: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for row in hnf {
        let Some(c) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        if v[c] % row[c] != 0 {
            return false;
        }
        let f = v[c] / row[c];
        for (x, y) in v.iter_mut().zip(row) {
            *x -= f * y;
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Hermite normal form of the coroot lattice together with extra generators.
pub fn cocharacter_hnf(datum: &RootDatum, extra: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows = datum.coroot_basis();
    rows.extend(extra.iter().cloned());
    hermite_normal_form(&rows)
}

/// A reduced expression `s_{i_1} ... s_{i_k} rho` with `rho` the `omega`-th element of `Omega`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedWord {
    pub letters: Vec<usize>,
    pub omega: usize,
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() && self.omega == 0 {
            return write!(f, "1");
        }
        for i in &self.letters {
            write!(f, "s{i}")?;
        }
        if self.omega != 0 {
            write!(f, "r{}", self.omega)?;
        }
        Ok(())
    }
}

/// Parse words such as `s0s1s0`, `s0 s1 s0`, `0,1,0` or `1` (identity).
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() || t == "1" || t == "e" || t == "id" {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if t.starts_with('s') {
        t.split('s').skip(1).collect()
    } else {
        t.split(',').collect()
    };
    parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| Error::BadWord(text.to_string())))
        .collect()
}

/// Length-zero elements of the extended affine Weyl group and their action on the affine nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaGroup {
    /// Identity first.
    pub elements: Vec<AffineWeylElement>,
    /// `diagram_action[k][i] = j` when `rho_k s_i rho_k^-1 = s_j`.
    pub diagram_action: Vec<Vec<usize>>,
}

impl OmegaGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &AffineWeylElement) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Index of `rho_a rho_b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].mul(&self.elements[b]);
        self.index_of(&p).expect("Omega is closed under multiplication")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let p = self.elements[a].inverse();
        self.index_of(&p).expect("Omega is closed under inverses")
    }

    /// Indices of the elements whose diagram action preserves `nodes` setwise.
    pub fn stabilizer(&self, nodes: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| {
                nodes
                    .iter()
                    .all(|&i| nodes.contains(&self.diagram_action[k][i]))
            })
            .collect()
    }
}

/// The extended affine Weyl group for one root datum and cocharacter lattice.
#[derive(Debug, Clone)]
pub struct AffineWeylGroup {
    pub datum: RootDatum,
    pub lattice: LatticeMode,
    generators: Vec<AffineWeylElement>,
    pub omega: OmegaGroup,
}

impl AffineWeylGroup {
    pub fn new(datum: RootDatum, lattice: LatticeMode) -> Result<Self> {
        let n = datum.rank();
        let theta = datum.highest_root.clone();
        let mut s0 = AffineWeylElement::from_finite(&datum.reflection(&theta));
        s0.translation = datum.highest_coroot.clone();
        let mut generators = vec![s0];
        for i in 0..n {
            generators.push(AffineWeylElement::from_finite(&datum.simple_reflection(i)));
        }
        let mut g = AffineWeylGroup {
            datum,
            lattice,
            generators,
            omega: OmegaGroup {
                elements: Vec::new(),
                diagram_action: Vec::new(),
            },
        };
        g.omega = g.compute_omega()?;
        Ok(g)
    }

    pub fn simply_connected(datum: RootDatum) -> Self {
        Self::new(datum, LatticeMode::Coroot).expect("coroot lattice is always valid")
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Number of affine generators `s_0, ..., s_n`.
    pub fn num_generators(&self) -> usize {
        self.rank() + 1
    }

    pub fn generator(&self, i: usize) -> &AffineWeylElement {
        &self.generators[i]
    }

    pub fn identity(&self) -> AffineWeylElement {
        AffineWeylElement::identity(self.rank())
    }

    /// Hermite normal form of the chosen cocharacter lattice.
    pub fn lattice_hnf(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        match &self.lattice {
            LatticeMode::Coroot => Ok(cocharacter_hnf(&self.datum, &[])),
            LatticeMode::Coweight => Ok(hermite_normal_form(
                &(0..n)
                    .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                    .collect::<Vec<_>>(),
            )),
            LatticeMode::Overlattice(basis) => {
                if basis.iter().any(|b| b.len() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: basis.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
                    });
                }
                let h = hermite_normal_form(basis);
                if h.len() != n
                    || self
                        .datum
                        .coroot_basis()
                        .iter()
                        .any(|r| !in_row_span(&h, r))
                {
                    return Err(Error::LatticeTooSmall);
                }
                Ok(h)
            }
        }
    }

    pub fn in_lattice(&self, lambda: &[i64]) -> Result<bool> {
        Ok(in_row_span(&self.lattice_hnf()?, lambda))
    }

    fn compute_omega(&self) -> Result<OmegaGroup> {
        let n = self.rank();
        let lat = self.lattice_hnf()?;
        let coroot = cocharacter_hnf(&self.datum, &[]);
        // coset representatives of Z^n / Lambda inside the box given by the HNF diagonal
        let diag: Vec<i64> = (0..n).map(|i| coroot[i][i]).collect();
        let mut reps: Vec<Vec<i64>> = vec![vec![0; n]];
        for (i, &d) in diag.iter().enumerate() {
            let mut next = Vec::new();
            for r in &reps {
                for c in 0..d {
                    let mut v = r.clone();
                    v[i] = c;
                    next.push(v);
                }
            }
            reps = next;
        }
        let mut elements = Vec::new();
        for lambda in reps.into_iter().filter(|v| in_row_span(&lat, v)) {
            let mut x = AffineWeylElement::translation(lambda);
            'descend: loop {
                let l = self.length(&x);
                if l == 0 {
                    break;
                }
                for s in &self.generators {
                    let y = x.mul(s);
                    if self.length(&y) < l {
                        x = y;
                        continue 'descend;
                    }
                }
                unreachable!("nonzero length implies a right descent");
            }
            elements.push(x);
        }
        let diagram_action = elements
            .iter()
            .map(|rho| {
                let rinv = rho.inverse();
                (0..=n)
                    .map(|i| {
                        let c = rho.mul(&self.generators[i]).mul(&rinv);
                        self.generators
                            .iter()
                            .position(|s| *s == c)
                            .expect("Omega permutes the affine generators")
                    })
                    .collect()
            })
            .collect();
        Ok(OmegaGroup {
            elements,
            diagram_action,
        })
    }

    /// Coxeter length of the `W_af` part.
    pub fn length(&self, x: &AffineWeylElement) -> usize {
        let mut total: i64 = 0;
        for root in &self.datum.positive_roots {
            let p = self.datum.pairing(&x.translation, root);
            if x.finite.inverse_maps_positive(root) {
                total += p.abs();
            } else {
                total += (p - 1).abs();
            }
        }
        total as usize
    }

    pub fn is_left_descent(&self, i: usize, x: &AffineWeylElement) -> bool {
        self.length(&self.generators[i].mul(x)) < self.length(x)
    }

    pub fn is_right_descent(&self, x: &AffineWeylElement, i: usize) -> bool {
        self.length(&x.mul(&self.generators[i])) < self.length(x)
    }

    pub fn from_word(&self, letters: &[usize]) -> Result<AffineWeylElement> {
        let mut x = self.identity();
        for &i in letters {
            if i > self.rank() {
                return Err(Error::BadGenerator(i));
            }
            x = x.mul(&self.generators[i]);
        }
        Ok(x)
    }

    pub fn from_reduced_word(&self, w: &ReducedWord) -> Result<AffineWeylElement> {
        let x = self.from_word(&w.letters)?;
        let rho = self
            .omega
            .elements
            .get(w.omega)
            .ok_or(Error::BadGenerator(w.omega))?;
        Ok(x.mul(rho))
    }

    pub fn parse(&self, text: &str) -> Result<AffineWeylElement> {
        self.from_word(&parse_word(text)?)
    }

    /// Lexicographically least reduced word and the `Omega` part.
    pub fn reduced_word(&self, x: &AffineWeylElement) -> Result<ReducedWord> {
        let mut letters = Vec::new();
        let mut y = x.clone();
        let mut l = self.length(&y);
        while l > 0 {
            let (i, z) = (0..=self.rank())
                .find_map(|i| {
                    let z = self.generators[i].mul(&y);
                    (self.length(&z) < l).then_some((i, z))
                })
                .expect("nonzero length implies a left descent");
            letters.push(i);
            y = z;
            l -= 1;
        }
        let omega = self.omega.index_of(&y).ok_or(Error::NotInLattice)?;
        Ok(ReducedWord { letters, omega })
    }

    pub fn word_string(&self, x: &AffineWeylElement) -> String {
        self.reduced_word(x)
            .map(|w| w.to_string())
            .unwrap_or_else(|_| format!("{x:?}"))
    }
}
