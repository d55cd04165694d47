//! Runtime comparison of the Eichler method and the direct method on the
//! generating Hecke operators at one prime.
//!
//! Both modes evaluate every subspace (no orbit reduction), so the lattice
//! counts are the raw coset counts: the parahoric indices for Eichler, the
//! left coset counts of the double cosets for the direct method.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::genus::{EnumOptions, GenusData};
use crate::hecke::{self, HeckeMatrix};
use crate::quaternion::MaximalOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    Eichler,
    Direct,
}

impl std::fmt::Display for BenchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BenchMode::Eichler => "eichler",
            BenchMode::Direct => "direct",
        })
    }
}

impl std::str::FromStr for BenchMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "eichler" => Ok(BenchMode::Eichler),
            "direct" => Ok(BenchMode::Direct),
            other => Err(format!("unknown mode {other:?} (expected eichler or direct)")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub mode: BenchMode,
    pub prime: u64,
    /// Lattices evaluated per class of the genus.
    pub lattice_evals: u64,
    pub wall_ms: f64,
    #[serde(skip)]
    pub operators: Vec<HeckeMatrix>,
}

/// Computes the generating operators `T(t(e_1 + ... + e_k))` at `p` in the
/// given mode and reports the work done.
pub fn benchmark(order: &MaximalOrder, genus: &GenusData, p: u64, mode: BenchMode) -> Result<BenchRow> {
    let opts = EnumOptions { use_orbits: false, ..EnumOptions::default() };
    let h = genus.class_number().max(1) as u64;
    let start = Instant::now();
    let (total, operators) = match mode {
        BenchMode::Eichler => {
            let data = hecke::hecke_at_prime(order, genus, p, opts)?;
            let total = data.vertices.iter().map(|v| v.evaluations).sum();
            let words = hecke::translation_words(genus.n)?;
            let ops = words
                .iter()
                .filter_map(|w| data.operators.iter().find(|o| &o.word == w).cloned())
                .collect();
            (total, ops)
        }
        BenchMode::Direct => {
            let mut total = 0;
            let mut ops = Vec::new();
            for k in 1..=genus.n {
                let (op, evals) = hecke::direct_operator(order, genus, p, k, opts)?;
                total += evals;
                ops.push(op);
            }
            (total, ops)
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRow { mode, prime: p, lattice_evals: total / h, wall_ms, operators })
}
