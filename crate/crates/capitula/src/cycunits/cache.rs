use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::table::{parse_table_line, render_line};
use super::{CycUnitError, FittingIdealRecord};

/// Directory of computed records, one file per (ℓ, p, χ, n, seed). Writes go
/// through a temporary file and a rename, so readers never see half a record.
#[derive(Debug, Clone)]
pub struct RecordCache {
    dir: PathBuf,
}

impl RecordCache {
    pub fn open(dir: &Path) -> Result<Self, CycUnitError> {
        fs::create_dir_all(dir)?;
        Ok(RecordCache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, ell: u64, p: u64, chi_order: u64, chi_id: u64, n: u32, seed: u64) -> PathBuf {
        self.dir.join(format!("fit-{ell}-{p}-{chi_order}-{chi_id}-n{n}-s{seed}.txt"))
    }

    /// A cached record; unreadable or corrupt files count as misses.
    pub fn get(
        &self,
        ell: u64,
        p: u64,
        chi_order: u64,
        chi_id: u64,
        n: u32,
        seed: u64,
    ) -> Option<FittingIdealRecord> {
        let text = fs::read_to_string(self.path(ell, p, chi_order, chi_id, n, seed)).ok()?;
        parse_table_line(text.trim(), 1).ok().flatten()
    }

    pub fn put(&self, rec: &FittingIdealRecord) -> Result<(), CycUnitError> {
        let path = self.path(rec.ell, rec.p, rec.chi_order, rec.chi_id, rec.n, rec.seed);
        write_atomic(&path, (render_line(rec) + "\n").as_bytes())
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CycUnitError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("record"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
