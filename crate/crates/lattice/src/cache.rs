//! On-disk cache of genus enumerations and vertex levels, keyed by
//! `(disc, n, p, d)` with `d = 0` for the hyperspecial genus enumerated at `p`.
//!
//! Vertex files carry a fingerprint of the hyperspecial class list they were
//! computed against and are ignored when it does not match.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genus::{self, ClassList, EnumOptions, GenusData, Level, VertexSummary};
use crate::isometry::IsoData;
use crate::lattice::LatticeRecord;
use crate::quaternion::MaximalOrder;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GenusFile {
    disc: u64,
    n: usize,
    p: u64,
    mass: String,
    classes: Vec<LatticeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexFile {
    disc: u64,
    n: usize,
    genus_fingerprint: String,
    vertex: VertexSummary,
}

/// Cache directory plus hit/miss counters for the current session.
#[derive(Debug, Clone)]
pub struct GenusCache {
    dir: PathBuf,
    pub hits: usize,
    pub misses: usize,
}

/// Fingerprint of a hyperspecial genus: FNV-1a of its serialized records.
fn fingerprint(records: &[LatticeRecord]) -> Result<String> {
    let bytes = serde_json::to_vec(records).map_err(|e| Error::Cache(e.to_string()))?;
    let h = bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    Ok(format!("{h:016x}"))
}

impl GenusCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(GenusCache { dir, hits: 0, misses: 0 })
    }

    fn path(&self, disc: u64, n: usize, p: u64, d: usize) -> PathBuf {
        self.dir.join(format!("disc{disc}_n{n}_p{p}_d{d}.json"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Option<T> {
        let text = fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn write<T: Serialize>(path: &Path, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    fn genus_records(&self, order: &MaximalOrder, n: usize, p: u64) -> Option<GenusFile> {
        let file: GenusFile = Self::read(&self.path(order.algebra.discriminant, n, p, 0))?;
        (file.disc == order.algebra.discriminant && file.n == n && file.p == p && file.classes.iter().all(|r| r.order.matches(order)))
            .then_some(file)
    }

    fn load_genus(&self, order: &MaximalOrder, n: usize, p: u64) -> Result<Option<GenusData>> {
        let Some(file) = self.genus_records(order, n, p) else {
            return Ok(None);
        };
        let mut classes = ClassList::default();
        for r in &file.classes {
            let i = classes.push(IsoData::new(r.lattice(order)?));
            classes.reps[i].stab_order = r.stab_order;
        }
        let mass = file.mass.parse().map_err(|_| Error::Cache(format!("bad mass {}", file.mass)))?;
        if classes.mass() != mass {
            return Err(Error::Cache("cached mass disagrees with stabilizers".into()));
        }
        Ok(Some(GenusData { disc: file.disc, n, level: Level::Hyperspecial, classes, mass }))
    }

    /// The hyperspecial genus, loaded from the cache or enumerated at `p`
    /// and stored.
    pub fn genus(&mut self, order: &MaximalOrder, n: usize, p: u64, opts: EnumOptions) -> Result<GenusData> {
        if let Some(g) = self.load_genus(order, n, p)? {
            self.hits += 1;
            return Ok(g);
        }
        self.misses += 1;
        let g = genus::enumerate_genus(order, n, p, opts)?;
        let classes = g
            .classes
            .reps
            .iter()
            .map(|r| LatticeRecord::new(order, r.lattice(), r.stab_order))
            .collect::<Result<Vec<_>>>()?;
        let file = GenusFile { disc: g.disc, n, p, mass: g.mass.to_string(), classes };
        Self::write(&self.path(g.disc, n, p, 0), &file)?;
        // reload so that cold and warm runs use the same representatives
        self.load_genus(order, n, p)?.ok_or_else(|| Error::Cache("cache write did not persist".into()))
    }

    /// The vertex level of type `d` at `p` for a genus previously obtained
    /// from this cache by enumeration at `p_enum`.
    pub fn vertex(
        &mut self,
        order: &MaximalOrder,
        genus: &GenusData,
        p_enum: u64,
        p: u64,
        d: usize,
        opts: EnumOptions,
    ) -> Result<VertexSummary> {
        let disc = order.algebra.discriminant;
        let records = self
            .genus_records(order, genus.n, p_enum)
            .ok_or_else(|| Error::Cache("hyperspecial genus is not cached".into()))?;
        let fp = fingerprint(&records.classes)?;
        // vertex files are keyed by the level prime; the enumeration prime
        // enters through the fingerprint
        let path = self.dir.join(format!("disc{disc}_n{}_p{p}_d{d}_g{p_enum}.json", genus.n));
        if let Some(file) = Self::read::<VertexFile>(&path) {
            if file.genus_fingerprint == fp && file.vertex.p == p && file.vertex.d == d {
                self.hits += 1;
                return Ok(file.vertex);
            }
        }
        self.misses += 1;
        let vertex = genus::vertex_genus(order, genus, p, d, opts)?.summary();
        Self::write(&path, &VertexFile { disc, n: genus.n, genus_fingerprint: fp, vertex: vertex.clone() })?;
        Ok(vertex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{build_algebra, build_maximal_order};

    #[test]
    fn warm_cache_reproduces_cold_run() {
        let dir = std::env::temp_dir().join(format!("amf-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let o = build_maximal_order(&build_algebra(3).unwrap()).unwrap();
        let opts = EnumOptions::default();
        let mut cold = GenusCache::open(&dir).unwrap();
        let g = cold.genus(&o, 2, 2, opts).unwrap();
        let v = cold.vertex(&o, &g, 2, 2, 1, opts).unwrap();
        assert_eq!((cold.hits, cold.misses), (0, 2));
        let mut warm = GenusCache::open(&dir).unwrap();
        let g2 = warm.genus(&o, 2, 2, opts).unwrap();
        let v2 = warm.vertex(&o, &g2, 2, 2, 1, opts).unwrap();
        assert_eq!((warm.hits, warm.misses), (2, 0));
        assert_eq!(g.classes.stab_orders(), g2.classes.stab_orders());
        assert_eq!(v, v2);
        fs::remove_dir_all(&dir).unwrap();
    }
}
