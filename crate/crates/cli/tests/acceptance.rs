//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false` so the lines always reach stdout.

use std::collections::{HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use amf_core::affine::LatticeMode;
use amf_core::cosets::{complement, min_double_coset_reps, min_left_coset_reps, min_rep, sigma_stabilizer};
use amf_core::hecke::{index_polynomial, verify_generator_row};
use amf_core::{AffineWeylElement, AffineWeylGroup, ExtendedSpecialSubgroup, RootDatum, Series, SpecialSubgroup};
use amf_lattice::bench::{benchmark, BenchMode};
use amf_lattice::eigen::{eigen_report, Eigenvalue, OperatorLabel};
use amf_lattice::genus::{self, EnumOptions, GenusData};
use amf_lattice::hecke::{self, HeckeMatrix, PrimeData};
use amf_lattice::quaternion::{build_algebra, build_maximal_order};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- shared data

struct Block {
    disc: u64,
    genus: GenusData,
    primes: Vec<PrimeData>,
    elapsed: Duration,
}

impl Block {
    fn compute(disc: u64, primes: &[u64]) -> Block {
        let start = Instant::now();
        let order = build_maximal_order(&build_algebra(disc).unwrap()).unwrap();
        let p0 = primes[0];
        let genus = genus::enumerate_genus(&order, 3, p0, EnumOptions::default()).unwrap();
        let primes = primes
            .iter()
            .map(|&p| hecke::hecke_at_prime(&order, &genus, p, EnumOptions::default()).unwrap())
            .collect();
        Block { disc, genus, primes, elapsed: start.elapsed() }
    }

    fn operators(&self) -> Vec<HeckeMatrix> {
        self.primes.iter().flat_map(|d| d.operators.iter().cloned()).collect()
    }
}

fn int(v: i128) -> Eigenvalue {
    Eigenvalue::Integer(v)
}

fn quad(b: i128, c: i128) -> Eigenvalue {
    Eigenvalue::MinPoly { minpoly: vec![c, b, 1] }
}

/// Compares the spectrum of every listed operator with the expected values
/// (each of multiplicity one).
fn check_spectra(block: &Block, expected: &[(u64, &str, Vec<Eigenvalue>)]) -> Result<(), String> {
    let report = eigen_report(&block.operators()).map_err(|e| e.to_string())?;
    ensure(block.genus.class_number() == report.dimension, || "report dimension".into())?;
    for (p, word, values) in expected {
        let label = OperatorLabel { prime: *p, word: word.to_string() };
        let mut got = report.spectrum(&label);
        let mut want: Vec<(Eigenvalue, usize)> = values.iter().map(|v| (v.clone(), 1)).collect();
        let key = |e: &(Eigenvalue, usize)| format!("{:?}", e);
        got.sort_by_key(key);
        want.sort_by_key(key);
        ensure(got == want, || format!("disc {} h_{p}({word}): got {got:?}, expected {want:?}", block.disc))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_amf"))
        .args(["eichler", "--type", "C", "--rank", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let expected = "nu_{1,2} = (q^3 + q^2 + q + 1)·1 + [s0]\n\
                    nu_{1,3} = (q^3 + q^2 + q + 1)·1 + (q + 1)[s0] + [s0s1s0]\n\
                    nu_{2,1} = (q + 1)·1 + [s1] + [s1s2s1]\n\
                    nu_{3,1} = (q^3 + q^2 + q + 1)·1 + (q + 1)[s2] + [s2s1s2]\n";
    ensure(text == expected, || format!("unexpected output:\n{text}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("four C2 Eichler elements exact, {} ms", elapsed.as_millis()))
}

fn criterion_2() -> Outcome {
    let rows = [
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::A, 4),
        (Series::B, 3),
        (Series::C, 2),
        (Series::C, 3),
        (Series::C, 4),
        (Series::D, 4),
        (Series::D, 5),
        (Series::F, 4),
        (Series::G, 2),
    ];
    let mut slowest = Duration::ZERO;
    for (s, n) in rows {
        let start = Instant::now();
        let report = verify_generator_row(s, n, 1_000_000).map_err(|e| format!("{s}{n}: {e}"))?;
        let t = start.elapsed();
        ensure(report.verified, || format!("{s}{n} not verified"))?;
        ensure(t < Duration::from_secs(30), || format!("{s}{n} took {t:?}"))?;
        slowest = slowest.max(t);
    }
    Ok(format!("12 rows verified, slowest {} ms", slowest.as_millis()))
}

/// Word length with length-zero steps free, by 0-1 breadth-first search.
fn bfs_lengths(g: &AffineWeylGroup, depth: usize) -> HashMap<AffineWeylElement, usize> {
    let mut dist = HashMap::new();
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

fn random_word(rng: &mut StdRng, gens: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..gens)).collect()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = 0usize;

    // length against breadth-first search
    let groups = [
        AffineWeylGroup::simply_connected(RootDatum::new(Series::C, 2).unwrap()),
        AffineWeylGroup::new(RootDatum::new(Series::A, 2).unwrap(), LatticeMode::Coweight).unwrap(),
        AffineWeylGroup::simply_connected(RootDatum::new(Series::G, 2).unwrap()),
    ];
    for g in &groups {
        let depth = 9;
        let dist = bfs_lengths(g, depth);
        for _ in 0..1500 {
            let w = random_word(&mut rng, g.num_generators(), depth);
            let rho = &g.omega.elements[rng.gen_range(0..g.omega.len())];
            let x = g.from_word(&w).unwrap().mul(rho);
            let d = dist.get(&x).ok_or("random element outside the ball")?;
            ensure(g.length(&x) == *d, || format!("length mismatch for {w:?}"))?;
            cases += 1;
        }
    }

    // deletion condition
    let c3 = AffineWeylGroup::new(RootDatum::new(Series::C, 3).unwrap(), LatticeMode::Coweight).unwrap();
    for _ in 0..2500 {
        let w = c3.from_word(&random_word(&mut rng, 4, 14)).unwrap().mul(&c3.omega.elements[rng.gen_range(0..c3.omega.len())]);
        let s = rng.gen_range(0..4);
        let red = c3.reduced_word(&w).unwrap();
        ensure(red.len() == c3.length(&w), || "reduced word length".into())?;
        let ws = w.mul(c3.generator(s));
        let rho = &c3.omega.elements[red.omega];
        let shorter = (0..red.len()).any(|i| {
            let mut letters = red.letters.clone();
            letters.remove(i);
            c3.from_word(&letters).unwrap().mul(rho) == ws
        });
        ensure((c3.length(&ws) < c3.length(&w)) == shorter, || "deletion condition".into())?;
        cases += 1;
    }

    // length additivity l(τ σ w) = l(τ) + l(σ) + l(w)
    let g = AffineWeylGroup::simply_connected(RootDatum::new(Series::C, 3).unwrap());
    let mut sub_cache: HashMap<Vec<usize>, SpecialSubgroup> = HashMap::new();
    let mut sub = |gens: &[usize]| -> SpecialSubgroup {
        sub_cache.entry(gens.to_vec()).or_insert_with(|| SpecialSubgroup::new(&g, gens).unwrap()).clone()
    };
    for _ in 0..2500 {
        let (d1, d2) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let (s1, s2) = (complement(&g, &[d1]), complement(&g, &[d2]));
        let x = g.from_word(&random_word(&mut rng, 4, 12)).unwrap();
        let sigma = min_rep(&g, &x, &s1, &s2);
        let t = sigma_stabilizer(&g, &sigma, &s1, &s2).unwrap();
        let (w1, w2, wt) = (sub(&s1), sub(&s2), sub(&t));
        let taus = min_left_coset_reps(&g, &w1, &wt).unwrap();
        let tau = &taus[rng.gen_range(0..taus.len())];
        let w = &w2.elements[rng.gen_range(0..w2.elements.len())];
        let total = g.length(&tau.mul(&sigma).mul(w));
        ensure(total == g.length(tau) + g.length(&sigma) + g.length(w), || "length additivity".into())?;
        cases += 1;
    }

    // uniqueness of the minimal representative
    for _ in 0..2500 {
        let (d1, d2) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let (s1, s2) = (complement(&g, &[d1]), complement(&g, &[d2]));
        let (w1, w2) = (sub(&s1), sub(&s2));
        let x = g.from_word(&random_word(&mut rng, 4, 12)).unwrap();
        let a = &w1.elements[rng.gen_range(0..w1.elements.len())];
        let b = &w2.elements[rng.gen_range(0..w2.elements.len())];
        let m = min_rep(&g, &x, &s1, &s2);
        let y = a.mul(&x).mul(b);
        ensure(min_rep(&g, &y, &s1, &s2) == m, || "minimal representative depends on the coset element".into())?;
        ensure(g.length(&m) <= g.length(&y), || "representative not minimal".into())?;
        cases += 1;
    }

    // the A3 example: distinct W_12-double cosets merging under Omega
    let d = RootDatum::new(Series::A, 3).unwrap();
    let mode = LatticeMode::generated_by(&d, &[vec![0, 1, 0]]);
    let a3 = AffineWeylGroup::new(d, mode).unwrap();
    let w1 = ExtendedSpecialSubgroup::new(&a3, &[1, 3], &[]).unwrap();
    let w12 = SpecialSubgroup::new(&a3, &[]).unwrap();
    let reps = min_double_coset_reps(&a3, &w12, &w1).unwrap();
    ensure(reps.len() == 4, || format!("{} representatives", reps.len()))?;
    let w2 = ExtendedSpecialSubgroup::new(&a3, &[0, 2], &[1]).unwrap();
    let class = |x: &AffineWeylElement| {
        let mut all: Vec<_> = w2
            .elements
            .iter()
            .flat_map(|a| w2.elements.iter().map(move |b| a.mul(x).mul(b)))
            .map(|y| (y.translation.clone(), y.finite.matrix.clone()))
            .collect();
        all.sort();
        all.dedup();
        all
    };
    let classes: Vec<_> = reps.iter().map(class).collect();
    let mut distinct = classes.clone();
    distinct.sort();
    distinct.dedup();
    ensure(distinct.len() == 3, || format!("{} merged classes", distinct.len()))?;
    cases += 1;

    let t = start.elapsed();
    ensure(cases >= 10_000, || format!("only {cases} cases"))?;
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("{cases} randomized cases in {:.1} s", t.as_secs_f64()))
}

fn criterion_4(b3: &Block) -> Outcome {
    ensure(b3.genus.class_number() == 2, || format!("class number {}", b3.genus.class_number()))?;
    check_spectra(
        b3,
        &[
            (2, "s0", vec![int(126), int(9)]),
            (2, "s0s1s0", vec![int(2520), int(-54)]),
            (2, "s0s1s0s2s1s0", vec![int(8640), int(216)]),
            (5, "s0", vec![int(19530), int(810)]),
            (5, "s0s1s0", vec![int(12694500), int(39780)]),
            (5, "s0s1s0s2s1s0", vec![int(307125000), int(491400)]),
        ],
    )?;
    ensure(b3.elapsed < Duration::from_secs(600), || format!("took {:?}", b3.elapsed))?;
    Ok(format!("class number 2, six operators exact, {:.1} s", b3.elapsed.as_secs_f64()))
}

fn criterion_5(b5: &Block, b7: &Block) -> Outcome {
    ensure(b5.genus.class_number() == 3, || "disc 5 class number".into())?;
    ensure(b7.genus.class_number() == 5, || "disc 7 class number".into())?;
    check_spectra(
        b5,
        &[
            (2, "s0", vec![int(126), int(33), int(-17)]),
            (2, "s0s1s0", vec![int(2520), int(226), int(76)]),
            (2, "s0s1s0s2s1s0", vec![int(8640), int(456), int(-44)]),
            (3, "s0", vec![int(1092), int(100), int(0)]),
            (3, "s0s1s0", vec![int(98280), int(1064), int(364)]),
            (3, "s0s1s0s2s1s0", vec![int(816480), int(7008), int(-1792)]),
        ],
    )?;
    check_spectra(
        b7,
        &[
            (2, "s0", vec![int(126), int(-3), int(-14), quad(-81, 1512)]),
            (2, "s0s1s0", vec![int(2520), int(-18), int(70), quad(-708, 92484)]),
            (2, "s0s1s0s2s1s0", vec![int(8640), int(0), int(-110), quad(-1548, 432864)]),
            (3, "s0", vec![int(1092), int(-4), int(-48), quad(-208, 2608)]),
            (3, "s0s1s0", vec![int(98280), int(-276), int(780), quad(-3444, -7969824)]),
            (3, "s0s1s0s2s1s0", vec![int(816480), int(720), int(-1920), quad(-26928, 131341824)]),
            (5, "s0", vec![int(19530), int(-138), int(610), quad(-1440, 467100)]),
            (5, "s0s1s0", vec![int(12694500), int(-72), int(37240), quad(-54780, -419479200)]),
            (5, "s0s1s0s2s1s0", vec![int(307125000), int(2448), int(203440), quad(-941400, 201197520000)]),
        ],
    )?;
    ensure(b7.elapsed < Duration::from_secs(7200), || format!("disc 7 took {:?}", b7.elapsed))?;
    Ok(format!(
        "disc 5 (6 operators) and disc 7 (9 operators) exact, {:.1} s and {:.1} s",
        b5.elapsed.as_secs_f64(),
        b7.elapsed.as_secs_f64()
    ))
}

fn criterion_6(blocks: &[&Block]) -> Outcome {
    let mut pairs = 0;
    for b in blocks {
        let ops = b.operators();
        let stabs = b.genus.classes.stab_orders();
        for (i, x) in ops.iter().enumerate() {
            ensure(hecke::is_self_adjoint(&x.matrix, &stabs), || format!("disc {} h_{}({}) not self-adjoint", b.disc, x.prime, x.word))?;
            for y in &ops[i + 1..] {
                ensure(hecke::commute(&x.matrix, &y.matrix), || {
                    format!("disc {}: h_{}({}) and h_{}({}) do not commute", b.disc, x.prime, x.word, y.prime, y.word)
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} commuting pairs, all D1*T symmetric"))
}

fn criterion_7(blocks: &[&Block]) -> Outcome {
    let mut count = 0;
    for b in blocks {
        for op in b.operators() {
            let ev = hecke::constant_eigenvalue(&op.matrix);
            ensure(ev == Some(op.degree), || format!("disc {} h_{}({}): {ev:?} vs {}", b.disc, op.prime, op.word, op.degree))?;
            count += 1;
        }
    }
    Ok(format!("{count} operators have the constant eigenvector with eigenvalue = left coset count"))
}

fn criterion_8() -> Outcome {
    let mut checks = 0;
    for disc in [2u64, 3, 5] {
        let order = build_maximal_order(&build_algebra(disc).unwrap()).unwrap();
        let split: Vec<u64> = [2u64, 3, 5].into_iter().filter(|p| disc % p != 0).collect();
        for n in 1..=3 {
            let g = genus::enumerate_genus(&order, n, split[0], EnumOptions::default()).map_err(|e| e.to_string())?;
            // Sp_2 = SL_2 is type A1
            let series = if n == 1 { Series::A } else { Series::C };
            let w = AffineWeylGroup::simply_connected(RootDatum::new(series, n).unwrap());
            let s1 = complement(&w, &[0]);
            for &p in &split {
                for d in 1..=n {
                    let v = genus::vertex_genus(&order, &g, p, d, EnumOptions::default()).map_err(|e| e.to_string())?;
                    let s2 = complement(&w, &[d]);
                    let s12: Vec<usize> = s1.iter().copied().filter(|i| s2.contains(i)).collect();
                    let i1 = index_polynomial(&w, &s1, &s12).unwrap().eval(p as i64);
                    let i2 = index_polynomial(&w, &s2, &s12).unwrap().eval(p as i64);
                    let lhs = g.mass.clone() * num_rational::BigRational::from_integer(i1.into());
                    let rhs = v.genus.mass.clone() * num_rational::BigRational::from_integer(i2.into());
                    ensure(lhs == rhs, || format!("disc {disc} n {n} p {p} d {d}: {lhs} != {rhs}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} exact mass relations (disc 2, 3, 5; n <= 3; split p <= 5)"))
}

fn criterion_9() -> Outcome {
    let mut rows = 0;
    for disc in [5u64, 7, 11, 13] {
        let order = build_maximal_order(&build_algebra(disc).unwrap()).unwrap();
        let g = genus::enumerate_genus(&order, 2, 2, EnumOptions::default()).map_err(|e| e.to_string())?;
        for p in [2u64, 3] {
            let e = benchmark(&order, &g, p, BenchMode::Eichler).map_err(|e| e.to_string())?;
            let d = benchmark(&order, &g, p, BenchMode::Direct).map_err(|e| e.to_string())?;
            let q = p;
            let c = 1 + q + q * q + q * q * q;
            ensure(e.lattice_evals == 2 * c, || format!("disc {disc} p {p}: eichler {}", e.lattice_evals))?;
            ensure(d.lattice_evals == q * c + q * q * q * c, || format!("disc {disc} p {p}: direct {}", d.lattice_evals))?;
            ensure(e.lattice_evals < d.lattice_evals, || "eichler evaluates more lattices".into())?;
            ensure(e.wall_ms < d.wall_ms, || format!("disc {disc} p {p}: eichler {:.1} ms >= direct {:.1} ms", e.wall_ms, d.wall_ms))?;
            let same = e.operators.iter().zip(&d.operators).all(|(a, b)| a.matrix == b.matrix);
            ensure(same && e.operators.len() == 2, || format!("disc {disc} p {p}: methods disagree"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} Sp4 configurations: counts exact, Eichler faster, matrices equal"))
}

fn nonnegative(e: &Eigenvalue) -> bool {
    match e {
        Eigenvalue::Integer(v) => *v >= 0,
        // monic x^2 + b x + c with real roots: both >= 0 iff b <= 0 and c >= 0
        Eigenvalue::MinPoly { minpoly } if minpoly.len() == 3 => {
            let (c, b) = (minpoly[0], minpoly[1]);
            b * b - 4 * c >= 0 && b <= 0 && c >= 0
        }
        Eigenvalue::MinPoly { .. } => false,
    }
}

fn criterion_10(blocks: &[&Block]) -> Outcome {
    let mut irrational = Vec::new();
    let mut count = 0;
    for b in blocks {
        let stabs = b.genus.classes.stab_orders();
        for pd in &b.primes {
            for v in &pd.vertices {
                // integrality of the adjoint is checked again here
                genus::adjoint(&v.t21, &stabs, &v.stab_orders).map_err(|e| e.to_string())?;
            }
            for (d, nu) in pd.nus.iter().enumerate() {
                ensure(hecke::is_self_adjoint(nu, &stabs), || "nu not self-adjoint".into())?;
                let op = HeckeMatrix { prime: pd.p, word: format!("nu{}", d + 1), matrix: nu.clone(), degree: 0 };
                let report = eigen_report(&[op]).map_err(|e| e.to_string())?;
                for s in &report.spaces {
                    let ev = &s.eigenvalues[0].1;
                    ensure(nonnegative(ev), || format!("disc {} p {} nu_{}: eigenvalue {ev}", b.disc, pd.p, d + 1))?;
                    if !matches!(ev, Eigenvalue::Integer(_)) {
                        irrational.push(format!("disc {} p {} nu_{}", b.disc, pd.p, d + 1));
                    }
                }
                count += 1;
            }
        }
    }
    let rational_discs: Vec<u64> = blocks
        .iter()
        .filter(|b| !irrational.iter().any(|s| s.starts_with(&format!("disc {} ", b.disc))))
        .map(|b| b.disc)
        .collect();
    ensure(rational_discs.contains(&3) && rational_discs.contains(&5), || format!("irrational spectra: {irrational:?}"))?;
    Ok(format!(
        "{count} nu-matrices: adjoints integral, spectra nonnegative; rational for disc {rational_discs:?}; \
         disc 7 has {} nu-matrices with nonnegative quadratic-irrational eigenvalues",
        irrational.len()
    ))
}

// ---------------------------------------------------------------- driver

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
    });
    match result {
        Ok(msg) => {
            println!("criterion {n:>2}: PASS  {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n:>2}: FAIL  {msg}");
            false
        }
    }
}

/// Criterion numbers given on the command line (all when none are given).
fn selected() -> Vec<usize> {
    let picked: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if picked.is_empty() {
        (1..=10).collect()
    } else {
        picked
    }
}

fn blocks() -> &'static [Block; 3] {
    static BLOCKS: OnceLock<[Block; 3]> = OnceLock::new();
    BLOCKS.get_or_init(|| [Block::compute(3, &[2, 5]), Block::compute(5, &[2, 3]), Block::compute(7, &[2, 3, 5])])
}

fn main() -> ExitCode {
    let want = selected();
    let all = || {
        let [b3, b5, b7] = blocks();
        [b3, b5, b7]
    };
    let criteria: Vec<Box<dyn FnOnce() -> Outcome>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(criterion_3),
        Box::new(|| criterion_4(&blocks()[0])),
        Box::new(|| criterion_5(&blocks()[1], &blocks()[2])),
        Box::new(move || criterion_6(&all())),
        Box::new(move || criterion_7(&all())),
        Box::new(criterion_8),
        Box::new(criterion_9),
        Box::new(move || criterion_10(&all())),
    ];
    let mut ok = true;
    for (k, f) in criteria.into_iter().enumerate() {
        if want.contains(&(k + 1)) {
            ok &= run(k + 1, f);
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
