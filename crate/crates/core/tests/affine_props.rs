use std::collections::{HashMap, VecDeque};

use amf_core::affine::LatticeMode;
use amf_core::{AffineWeylElement, AffineWeylGroup, RootDatum, Series};
use proptest::prelude::*;

fn group(series: Series, rank: usize, mode: LatticeMode) -> AffineWeylGroup {
    AffineWeylGroup::new(RootDatum::new(series, rank).unwrap(), mode).unwrap()
}

/// Word length over the affine generators, with Omega steps free (0-1 BFS).
fn bfs_lengths(g: &AffineWeylGroup, depth: usize) -> HashMap<AffineWeylElement, usize> {
    let mut dist: HashMap<AffineWeylElement, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(g.identity(), 0);
    queue.push_back(g.identity());
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for rho in &g.omega.elements {
            let y = x.mul(rho);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d);
                queue.push_front(y);
            }
        }
        if d == depth {
            continue;
        }
        for i in 0..g.num_generators() {
            let y = x.mul(g.generator(i));
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

#[test]
fn closed_form_length_matches_breadth_first_search() {
    let cases = [
        (Series::A, 1, LatticeMode::Coweight, 10),
        (Series::A, 2, LatticeMode::Coweight, 9),
        (Series::B, 3, LatticeMode::Coroot, 7),
        (Series::C, 2, LatticeMode::Coroot, 10),
        (Series::C, 3, LatticeMode::Coweight, 7),
        (Series::G, 2, LatticeMode::Coroot, 10),
    ];
    for (s, n, mode, depth) in cases {
        let g = group(s, n, mode);
        let dist = bfs_lengths(&g, depth);
        for (x, d) in &dist {
            assert_eq!(g.length(x), *d, "{s}{n}: {x:?}");
        }
    }
    // and the A3 overlattice of index 2
    let d = RootDatum::new(Series::A, 3).unwrap();
    let mode = LatticeMode::generated_by(&d, &[vec![0, 1, 0]]);
    let g = AffineWeylGroup::new(d, mode).unwrap();
    for (x, d) in bfs_lengths(&g, 7) {
        assert_eq!(g.length(&x), d);
    }
}

#[test]
fn spec_length_examples() {
    let g = group(Series::C, 2, LatticeMode::Coroot);
    assert_eq!(g.length(&g.identity()), 0);
    assert_eq!(g.length(&g.parse("s0s1s0").unwrap()), 3);
    assert_eq!(g.length(&AffineWeylElement::translation(vec![1, 0])), 4);
    let theta = g.datum.highest_root.clone();
    let mut s0 = AffineWeylElement::from_finite(&g.datum.reflection(&theta));
    s0.translation = g.datum.highest_coroot.clone();
    assert_eq!(g.reduced_word(&s0).unwrap().to_string(), "s0");
}

fn arb_word(gens: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..gens, 0..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(a in arb_word(4, 12), b in arb_word(4, 12), c in arb_word(4, 12)) {
        let g = group(Series::C, 3, LatticeMode::Coroot);
        let (x, y, z) = (g.from_word(&a).unwrap(), g.from_word(&b).unwrap(), g.from_word(&c).unwrap());
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert!(x.multiply(&g.identity()).unwrap() == x);
    }

    #[test]
    fn parity_and_reduced_words(word in arb_word(4, 16), s in 0usize..4) {
        for (series, rank) in [(Series::C, 3), (Series::B, 3), (Series::A, 3)] {
            let g = group(series, rank, LatticeMode::Coweight);
            let w = g.from_word(&word).unwrap();
            let l = g.length(&w) as i64;
            let ls = g.length(&w.mul(g.generator(s))) as i64;
            prop_assert_eq!((ls - l).abs(), 1);
            let red = g.reduced_word(&w).unwrap();
            prop_assert_eq!(red.len() as i64, l);
            prop_assert_eq!(g.from_reduced_word(&red).unwrap(), w.clone());
        }
    }

    #[test]
    fn exchange_deletion(word in arb_word(4, 14), s in 0usize..4, rho in 0usize..2) {
        let g = group(Series::C, 3, LatticeMode::Coweight);
        let w = g.from_word(&word).unwrap().mul(&g.omega.elements[rho]);
        let red = g.reduced_word(&w).unwrap();
        let ws = w.mul(g.generator(s));
        let longer = g.length(&ws) == g.length(&w) + 1;
        let rho_el = &g.omega.elements[red.omega];
        let deletions = (0..red.len())
            .filter(|&i| {
                let mut shorter = red.letters.clone();
                shorter.remove(i);
                g.from_word(&shorter).unwrap().mul(rho_el) == ws
            })
            .count();
        prop_assert!(longer != (deletions > 0));
    }

    #[test]
    fn conjugating_translations(word in arb_word(3, 10), lam in prop::collection::vec(-3i64..4, 3)) {
        let g = group(Series::C, 3, LatticeMode::Coweight);
        let w = AffineWeylElement::from_finite(
            &g.from_word(&word.iter().map(|i| i + 1).collect::<Vec<_>>()).unwrap().finite,
        );
        let t = AffineWeylElement::translation(lam.clone());
        let c = w.inverse().mul(&t).mul(&w);
        let expected = AffineWeylElement::translation(w.finite.inverse().act(&lam));
        let red = g.reduced_word(&c).unwrap();
        prop_assert_eq!(g.from_reduced_word(&red).unwrap(), expected);
    }

    #[test]
    fn omega_is_abelian_and_length_zero(_x in 0u8..1) {
        for (s, n) in [(Series::A, 3), (Series::A, 4), (Series::D, 4), (Series::D, 5), (Series::E, 6)] {
            let g = group(s, n, LatticeMode::Coweight);
            let om = &g.omega;
            for a in 0..om.len() {
                prop_assert_eq!(g.length(&om.elements[a]), 0);
                for b in 0..om.len() {
                    prop_assert_eq!(om.product(a, b), om.product(b, a));
                }
            }
        }
    }
}
