//! Command implementations. Every command renders into a string first so
//! that `--out` and stdout produce identical bytes.

use std::fmt::Write as _;

use amf_core::cosets::complement;
use amf_core::hecke::{eichler_algebra_generators, eichler_element, HeckeElement};
use amf_core::{AffineWeylGroup, RootDatum, Series};
use amf_lattice::bench::{benchmark, BenchMode};
use amf_lattice::cache::GenusCache;
use amf_lattice::eigen::{eigen_report, EigenReport, Eigenvalue, OperatorLabel};
use amf_lattice::genus::{self, EnumOptions, GenusData, VertexSummary};
use amf_lattice::hecke::{self, HeckeMatrix};
use amf_lattice::lattice::LatticeRecord;
use amf_lattice::quaternion::{build_algebra, build_maximal_order, is_prime, MaximalOrder};
use serde_json::json;

use crate::{BenchArgs, Cli, Command, EichlerArgs, Failure, Format, GenusArgs, HeckeArgs, LatticeArgs, TypeArgs, WeylArgs};

type Outcome<T> = std::result::Result<T, Failure>;

pub fn run(cli: &Cli) -> Outcome<()> {
    let text = match &cli.command {
        Command::Weyl(a) => weyl(a, cli.format)?,
        Command::Eichler(a) => eichler(a, cli.format)?,
        Command::Genus(a) => genus_cmd(a, cli.format)?,
        Command::Hecke(a) => hecke_cmd(a, cli.format)?,
        Command::Bench(a) => bench(a, cli.format)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn no_csv(format: Format, command: &str) -> Outcome<()> {
    if format == Format::Csv {
        return Err(Failure::Validation(format!("csv output is not available for {command}")));
    }
    Ok(())
}

fn group(ty: &TypeArgs) -> Outcome<AffineWeylGroup> {
    let series: Series = ty.series.parse()?;
    Ok(AffineWeylGroup::simply_connected(RootDatum::new(series, ty.rank)?))
}

fn weyl(a: &WeylArgs, format: Format) -> Outcome<String> {
    no_csv(format, "weyl")?;
    let g = group(&a.ty)?;
    let mut obj = json!({
        "type": format!("{}{}", a.ty.series.to_ascii_uppercase(), a.ty.rank),
        "generators": g.num_generators(),
        "omega_order": g.omega.len(),
    });
    let mut out = format!(
        "type {}{}: {} affine generators s0..s{}, |Omega| = {}\n",
        a.ty.series.to_ascii_uppercase(),
        a.ty.rank,
        g.num_generators(),
        g.num_generators() - 1,
        g.omega.len()
    );
    if let Some(w) = &a.element {
        let x = g.parse(w)?;
        let len = g.length(&x);
        let word = g.word_string(&x);
        obj["element"] = json!({ "input": w, "length": len, "reduced_word": word, "translation": x.translation });
        writeln!(out, "{w}: length {len}, reduced word {word}").ok();
    }
    if a.omega {
        let elems: Vec<_> = g
            .omega
            .elements
            .iter()
            .zip(&g.omega.diagram_action)
            .map(|(e, act)| json!({ "translation": e.translation, "diagram_action": act }))
            .collect();
        obj["omega"] = json!(elems);
        if g.omega.len() == 1 {
            out.push_str("Omega is trivial\n");
        } else {
            for (k, act) in g.omega.diagram_action.iter().enumerate() {
                writeln!(out, "rho{k}: nodes -> {act:?}").ok();
            }
        }
    }
    Ok(match format {
        Format::Json => json_text(&obj),
        _ => out,
    })
}

fn parse_pair(text: &str, nodes: usize) -> Outcome<(usize, usize)> {
    let bad = || Failure::Validation(format!("pair must be i,j with 1 <= i, j <= {nodes}, got {text:?}"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [i, j] = parts.as_slice() else {
        return Err(bad());
    };
    let (i, j): (usize, usize) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
    if !(1..=nodes).contains(&i) || !(1..=nodes).contains(&j) {
        return Err(bad());
    }
    Ok((i, j))
}

fn coefficient_text(c: &str, label: &str) -> String {
    let wrapped = if c.contains(' ') { format!("({c})") } else { c.to_string() };
    match (label, c) {
        ("1", _) => format!("{wrapped}·1"),
        (_, "1") => format!("[{label}]"),
        _ => format!("{wrapped}[{label}]"),
    }
}

fn element_text(nu: &HeckeElement, q: Option<i64>) -> String {
    nu.terms
        .iter()
        .map(|t| {
            let c = match q {
                Some(q) => t.coefficient.eval(q).to_string(),
                None => t.coefficient.to_string(),
            };
            coefficient_text(&c, &t.label)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn eichler(a: &EichlerArgs, format: Format) -> Outcome<String> {
    no_csv(format, "eichler")?;
    let series: Series = a.ty.series.parse()?;
    if a.generators {
        let table = eichler_algebra_generators(series, a.ty.rank)?;
        let names = table.describe();
        return Ok(match format {
            Format::Json => json_text(&json!({ "coweights": table.coweights, "names": names, "full_hecke": table.full_hecke })),
            _ => format!("generators: {}\nfull Hecke algebra: {}\n", names.join(", "), table.full_hecke),
        });
    }
    let g = group(&a.ty)?;
    let nodes = g.num_generators();
    let pairs = match &a.pair {
        Some(p) => vec![parse_pair(p, nodes)?],
        None => (2..=nodes).map(|j| (1, j)).chain((2..=nodes).map(|i| (i, 1))).collect(),
    };
    let mut out = String::new();
    let mut records = Vec::new();
    for (i, j) in pairs {
        let nu = eichler_element(&g, &complement(&g, &[i - 1]), &complement(&g, &[j - 1]))?;
        writeln!(out, "nu_{{{i},{j}}} = {}", element_text(&nu, a.eval_q)).ok();
        let terms: Vec<_> = nu
            .terms
            .iter()
            .map(|t| {
                let mut v = json!({ "label": t.label, "coefficient": t.coefficient.coeffs() });
                if let Some(q) = a.eval_q {
                    v["value"] = json!(t.coefficient.eval(q));
                }
                v
            })
            .collect();
        records.push(json!({ "pair": [i, j], "terms": terms }));
    }
    Ok(match format {
        Format::Json => json_text(&json!(records)),
        _ => out,
    })
}

fn order_for(disc: u64) -> Outcome<MaximalOrder> {
    Ok(build_maximal_order(&build_algebra(disc)?)?)
}

fn check_split(disc: u64, p: u64) -> Outcome<()> {
    if !is_prime(p) {
        return Err(amf_lattice::Error::NotPrime(p).into());
    }
    if disc % p == 0 {
        return Err(amf_lattice::Error::Ramified { p, disc }.into());
    }
    Ok(())
}

fn check_rank(lat: &LatticeArgs) -> Outcome<()> {
    if lat.n == 0 {
        return Err(Failure::Validation("--n must be positive".into()));
    }
    if lat.class_bound == 0 {
        return Err(Failure::Validation("--class-bound must be positive".into()));
    }
    Ok(())
}

fn smallest_split_prime(disc: u64) -> u64 {
    (2..).find(|&p| is_prime(p) && disc % p != 0).expect("infinitely many primes")
}

/// The genus and, when caching, the cache it came from.
fn load_genus(lat: &LatticeArgs, order: &MaximalOrder, p: u64, opts: EnumOptions) -> Outcome<(GenusData, Option<GenusCache>)> {
    match &lat.cache_dir {
        Some(dir) => {
            let mut cache = GenusCache::open(dir)?;
            let g = cache.genus(order, lat.n, p, opts)?;
            Ok((g, Some(cache)))
        }
        None => Ok((genus::enumerate_genus(order, lat.n, p, opts)?, None)),
    }
}

fn genus_cmd(a: &GenusArgs, format: Format) -> Outcome<String> {
    no_csv(format, "genus")?;
    check_rank(&a.lat)?;
    let order = order_for(a.lat.disc)?;
    let p = a.prime.unwrap_or_else(|| smallest_split_prime(a.lat.disc));
    check_split(a.lat.disc, p)?;
    let opts = EnumOptions { class_bound: a.lat.class_bound, ..EnumOptions::default() };
    let (g, _) = load_genus(&a.lat, &order, p, opts)?;
    let stabs = g.classes.stab_orders();
    Ok(match format {
        Format::Json => {
            let classes = g
                .classes
                .reps
                .iter()
                .map(|r| LatticeRecord::new(&order, r.lattice(), r.stab_order))
                .collect::<amf_lattice::Result<Vec<_>>>()?;
            json_text(&json!({
                "disc": g.disc,
                "n": g.n,
                "prime": p,
                "class_number": g.class_number(),
                "mass": g.mass.to_string(),
                "stab_orders": stabs,
                "classes": classes,
            }))
        }
        _ => format!(
            "disc {}, n {}: class number {}, mass {}\nstabilizer orders: {}\n",
            g.disc,
            g.n,
            g.class_number(),
            g.mass,
            stabs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        ),
    })
}

fn dedup_primes(primes: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for &p in primes {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Integers in decreasing order, then minimal polynomials in order of appearance.
fn sorted_spectrum(report: &EigenReport, label: &OperatorLabel) -> Vec<(Eigenvalue, usize)> {
    let mut spec = report.spectrum(label);
    spec.sort_by(|(a, _), (b, _)| match (a, b) {
        (Eigenvalue::Integer(x), Eigenvalue::Integer(y)) => y.cmp(x),
        (Eigenvalue::Integer(_), _) => std::cmp::Ordering::Less,
        (_, Eigenvalue::Integer(_)) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    spec
}

fn hecke_cmd(a: &HeckeArgs, format: Format) -> Outcome<String> {
    check_rank(&a.lat)?;
    let disc = a.lat.disc;
    let order = order_for(disc)?;
    let primes = dedup_primes(&a.primes);
    for &p in &primes {
        check_split(disc, p)?;
    }
    let opts = EnumOptions { class_bound: a.lat.class_bound, ..EnumOptions::default() };
    let p_enum = smallest_split_prime(disc);
    let (g, mut cache) = load_genus(&a.lat, &order, p_enum, opts)?;
    let mut operators: Vec<HeckeMatrix> = Vec::new();
    let mut levels: Vec<VertexSummary> = Vec::new();
    for &p in &primes {
        let vertices = (1..=g.n)
            .map(|d| match cache.as_mut() {
                Some(c) => c.vertex(&order, &g, p_enum, p, d, opts),
                None => genus::vertex_genus(&order, &g, p, d, opts).map(|v| v.summary()),
            })
            .collect::<amf_lattice::Result<Vec<_>>>()?;
        let data = hecke::from_vertices(&g, p, vertices)?;
        let words = hecke::translation_words(g.n)?;
        for w in &words {
            if let Some(op) = data.operators.iter().find(|o| &o.word == w) {
                operators.push(op.clone());
            }
        }
        levels.extend(data.vertices);
    }
    let report = eigen_report(&operators)?;
    let labels: Vec<OperatorLabel> = operators.iter().map(|o| OperatorLabel { prime: o.prime, word: o.word.clone() }).collect();
    Ok(match format {
        Format::Json => json_text(&json!({
            "disc": disc,
            "n": g.n,
            "enumeration_prime": p_enum,
            "class_number": g.class_number(),
            "mass": g.mass.to_string(),
            "stab_orders": g.classes.stab_orders(),
            "vertex_levels": levels,
            "operators": operators,
            "eigenvalues": report.records(),
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["prime", "word", "space", "eigenvalue", "multiplicity"]).map_err(|e| Failure::Other(e.into()))?;
            for r in report.records() {
                let op = &r.operators[0];
                w.write_record([
                    op.prime.to_string(),
                    op.word.clone(),
                    r.space.to_string(),
                    r.eigenvalue.to_string(),
                    r.multiplicity.to_string(),
                ])
                .map_err(|e| Failure::Other(e.into()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Other(anyhow::anyhow!("{e}")))?)
                .map_err(|e| Failure::Other(e.into()))?
        }
        Format::Text => {
            let mut out = format!("disc {disc}, n {}: class number {}, mass {}\n", g.n, g.class_number(), g.mass);
            for l in &labels {
                let spec: Vec<String> = sorted_spectrum(&report, l)
                    .iter()
                    .map(|(e, m)| if *m > 1 { format!("{e} (x{m})") } else { e.to_string() })
                    .collect();
                writeln!(out, "h_{}({}): {}", l.prime, l.word, spec.join(", ")).ok();
            }
            out
        }
    })
}

fn bench(a: &BenchArgs, format: Format) -> Outcome<String> {
    check_rank(&a.lat)?;
    let modes = a
        .modes
        .iter()
        .map(|m| m.parse::<BenchMode>().map_err(Failure::Validation))
        .collect::<Outcome<Vec<_>>>()?;
    let disc = a.lat.disc;
    let order = order_for(disc)?;
    let primes = dedup_primes(&a.prime);
    for &p in &primes {
        check_split(disc, p)?;
    }
    let opts = EnumOptions { class_bound: a.lat.class_bound, ..EnumOptions::default() };
    let (g, _) = load_genus(&a.lat, &order, smallest_split_prime(disc), opts)?;
    let mut rows = Vec::new();
    for &p in &primes {
        for &m in &modes {
            rows.push(benchmark(&order, &g, p, m)?);
        }
    }
    Ok(match format {
        Format::Json => json_text(&json!(rows
            .iter()
            .map(|r| json!({ "mode": r.mode, "prime": r.prime, "lattice_evals": r.lattice_evals, "wall_ms": format!("{:.3}", r.wall_ms) }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut out = String::from("mode,prime,lattice_evals,wall_ms\n");
            for r in &rows {
                writeln!(out, "{},{},{},{:.3}", r.mode, r.prime, r.lattice_evals, r.wall_ms).ok();
            }
            out
        }
        Format::Text => {
            let mut out = format!("{:<8} {:>5} {:>13} {:>12}\n", "mode", "prime", "lattice_evals", "wall_ms");
            for r in &rows {
                writeln!(out, "{:<8} {:>5} {:>13} {:>12.3}", r.mode.to_string(), r.prime, r.lattice_evals, r.wall_ms).ok();
            }
            out
        }
    })
}
