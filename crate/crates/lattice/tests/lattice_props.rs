//! Property tests for isometry testing, vertex lattices, eigen-decomposition
//! and the local arithmetic underneath.

use amf_lattice::eigen::{charpoly, eigen_report, Eigenvalue, OperatorLabel};
use amf_lattice::hecke::{mat_mul, HeckeMatrix, Matrix};
use amf_lattice::isometry::{automorphism_count, find_isometry, IsoData};
use amf_lattice::lattice::TraceLattice;
use amf_lattice::linalg::IMat;
use amf_lattice::quaternion::{build_algebra, build_maximal_order, hilbert_symbol, prime_factors, MaximalOrder};
use amf_lattice::symplectic::{overlattice, splitting, SymplecticSpace, Vertex};
use num_bigint::BigInt;
use proptest::prelude::*;

fn order(disc: u64) -> MaximalOrder {
    build_maximal_order(&build_algebra(disc).unwrap()).unwrap()
}

/// A unimodular matrix and its inverse as a product of elementary moves.
fn unimodular(dim: usize, moves: &[(usize, usize, i64)]) -> (IMat, IMat) {
    let mut t = IMat::identity(dim, dim);
    let mut tinv = IMat::identity(dim, dim);
    for &(i, j, c) in moves {
        let (i, j) = (i % dim, j % dim);
        if i == j {
            continue;
        }
        let mut e = IMat::identity(dim, dim);
        e[(i, j)] = c;
        let mut einv = IMat::identity(dim, dim);
        einv[(i, j)] = -c;
        t = t * e;
        tinv = einv * tinv;
    }
    (t, tinv)
}

fn pow(p: i128, k: usize) -> i128 {
    (0..k).fold(1, |acc, _| acc * p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn change_of_basis_is_an_isometry(
        disc in prop::sample::select(vec![2u64, 3, 5]),
        moves in prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 1..12),
    ) {
        let l = TraceLattice::principal(&order(disc), 2);
        let (t, tinv) = unimodular(8, &moves);
        let m = l.transform(&t, &tinv);
        let (a, c) = (IsoData::new(l.clone()), IsoData::new(m.clone()));
        let p = find_isometry(&a, &c).expect("isometric");
        prop_assert_eq!(p.transpose() * &m.gram * &p, l.gram.clone());
        prop_assert_eq!(automorphism_count(&a), automorphism_count(&c));
    }

    #[test]
    fn vertex_and_overlattices_have_expected_invariants(
        disc in prop::sample::select(vec![3u64, 5]),
        p in prop::sample::select(vec![2u64, 7]),
        d in 1usize..=2,
        pick in any::<prop::sample::Index>(),
    ) {
        let o = order(disc);
        let split = splitting(&o, p).unwrap();
        let l = TraceLattice::principal(&o, 2).reduced().0;
        let space = SymplecticSpace::of_unimodular(&l, &split).unwrap();
        let subspaces = space.isotropic_subspaces(d);
        let u = &subspaces[pick.index(subspaces.len())];
        let vx = Vertex::new(&l, &space, u).unwrap();
        let q = p as i128;
        prop_assert_eq!(vx.lattice.det(), l.det() * pow(q, 4 * d));

        let disc_space = SymplecticSpace::of_discriminant_group(&vx.lattice, &split).unwrap();
        prop_assert_eq!(disc_space.dim(), 2 * d);
        let lagrangians = disc_space.isotropic_subspaces(d);
        let expected: i128 = (1..=d).map(|i| pow(q, i) + 1).product();
        prop_assert_eq!(lagrangians.len() as i128, expected);

        let parent = vx.parent_subspace(&disc_space);
        prop_assert!(lagrangians.contains(&parent));
        let orig = IsoData::new(l.clone());
        for z in &lagrangians {
            let m = overlattice(&vx.lattice, &disc_space, z).unwrap();
            prop_assert_eq!(m.det(), l.det());
            prop_assert!(m.is_positive_definite());
            if z == &parent {
                prop_assert!(find_isometry(&orig, &IsoData::new(m)).is_some());
            }
        }
    }

    #[test]
    fn similar_matrices_recover_spectrum(
        diag in prop::collection::vec(-6i128..=6, 1..6),
        upper in prop::collection::vec(-3i128..=3, 15),
    ) {
        let n = diag.len();
        // P unitriangular, so P^{-1} is integral
        let mut pm: Matrix = vec![vec![0; n]; n];
        let mut k = 0;
        for i in 0..n {
            pm[i][i] = 1;
            for j in i + 1..n {
                pm[i][j] = upper[k];
                k += 1;
            }
        }
        let mut pinv: Matrix = vec![vec![0; n]; n];
        for col in 0..n {
            for i in (0..n).rev() {
                let mut v = if i == col { 1 } else { 0 };
                for j in i + 1..n {
                    v -= pm[i][j] * pinv[j][col];
                }
                pinv[i][col] = v;
            }
        }
        let dm: Matrix = (0..n).map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0 }).collect()).collect();
        let a = mat_mul(&mat_mul(&pm, &dm), &pinv);

        let mut expected = vec![BigInt::from(1)];
        for &r in &diag {
            let mut next = vec![BigInt::from(0); expected.len() + 1];
            for (i, c) in expected.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * BigInt::from(r);
            }
            expected = next;
        }
        prop_assert_eq!(charpoly(&a), expected);

        let op = HeckeMatrix { prime: 2, word: "s0".into(), matrix: a, degree: 0 };
        let report = eigen_report(&[op]).unwrap();
        let label = OperatorLabel { prime: 2, word: "s0".into() };
        let mut got: Vec<(i128, usize)> = report
            .spectrum(&label)
            .into_iter()
            .map(|(e, m)| match e {
                Eigenvalue::Integer(v) => (v, m),
                other => panic!("unexpected {other}"),
            })
            .collect();
        got.sort();
        let mut want: Vec<(i128, usize)> = Vec::new();
        let mut sorted = diag.clone();
        sorted.sort();
        for v in sorted {
            match want.last_mut() {
                Some((w, m)) if *w == v => *m += 1,
                _ => want.push((v, 1)),
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn hilbert_symbols_satisfy_product_formula(
        a in (-300i64..300).prop_filter("nonzero", |x| *x != 0),
        b in (-300i64..300).prop_filter("nonzero", |x| *x != 0),
    ) {
        let mut primes: Vec<u64> = prime_factors((2 * a * b).unsigned_abs()).into_iter().map(|(p, _)| p).collect();
        primes.dedup();
        let finite: i64 = primes.iter().map(|&p| hilbert_symbol(a, b, p)).product();
        let infinite = if a < 0 && b < 0 { -1 } else { 1 };
        prop_assert_eq!(finite * infinite, 1);
    }
}
