//! On-disk cache of Hecke operator matrices, one file per `(N, n)`.
//!
//! Format (version 1): a header line
//!
//! ```text
//! heckecache v1 N=<N> n=<n> rows=<r> cols=<c> sha256=<hex>
//! ```
//!
//! followed by `r*c` decimal entries, row-major, one per line. The checksum
//! covers the body bytes after the header line; a mismatch (or any parse
//! problem) is treated as a miss, so corruption triggers recomputation and
//! never a wrong answer. Writes go through a temporary file and an atomic
//! rename.

use eisver_core::hecke::HeckeCache;
use eisver_core::linalg::IntMatrix;
use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub struct FileCache {
    dir: PathBuf,
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<FileCache> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(FileCache { dir })
    }

    pub fn path_for(&self, level: u64, n: u64) -> PathBuf {
        self.dir.join(format!("N{level}-n{n}.heckecache"))
    }

    fn encode(level: u64, n: u64, m: &IntMatrix) -> String {
        let mut body = String::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                body.push_str(&m.at(r, c).to_string());
                body.push('\n');
            }
        }
        let digest = hex_digest(body.as_bytes());
        format!(
            "heckecache v1 N={level} n={n} rows={} cols={} sha256={digest}\n{body}",
            m.rows(),
            m.cols(),
        )
    }

    fn decode(level: u64, n: u64, text: &str) -> Option<IntMatrix> {
        let (header, body) = text.split_once('\n')?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 7 || fields[0] != "heckecache" || fields[1] != "v1" {
            return None;
        }
        let field = |idx: usize, key: &str| -> Option<&str> {
            fields[idx].strip_prefix(key)
        };
        if field(2, "N=")?.parse::<u64>().ok()? != level
            || field(3, "n=")?.parse::<u64>().ok()? != n
        {
            return None;
        }
        let rows: usize = field(4, "rows=")?.parse().ok()?;
        let cols: usize = field(5, "cols=")?.parse().ok()?;
        let expected = field(6, "sha256=")?;
        if hex_digest(body.as_bytes()) != expected {
            return None;
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for line in body.lines() {
            entries.push(BigInt::from_str(line.trim()).ok()?);
        }
        if entries.len() != rows * cols {
            return None;
        }
        Some(IntMatrix::from_entries(rows, cols, entries))
    }

    fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        std::fs::write(&tmp, contents)?;
        std::fs::rename(&tmp, path)
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

impl HeckeCache for FileCache {
    fn load(&self, level: u64, n: u64) -> Option<IntMatrix> {
        let text = std::fs::read_to_string(self.path_for(level, n)).ok()?;
        Self::decode(level, n, &text)
    }

    fn store(&self, level: u64, n: u64, matrix: &IntMatrix) {
        let path = self.path_for(level, n);
        // Cache write failures are not fatal; the value is recomputed next
        // time.
        let _ = Self::write_atomic(&path, &Self::encode(level, n, matrix));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eisver_core::hecke::HeckeCache;

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FileCache::new(dir.path()).unwrap();
        let m = IntMatrix::from_i64(2, 3, &[1, -2, 3, 0, 5, -6]);
        cache.store(7, 3, &m);
        assert_eq!(cache.load(7, 3), Some(m.clone()));
        assert_eq!(cache.load(7, 4), None);

        // Flip a byte in the body: checksum must reject it.
        let path = cache.path_for(7, 3);
        let mut text = std::fs::read_to_string(&path).unwrap();
        let pos = text.find('\n').unwrap() + 1;
        text.replace_range(pos..pos + 1, "9");
        std::fs::write(&path, text).unwrap();
        assert_eq!(cache.load(7, 3), None);

        // Restore by storing again.
        cache.store(7, 3, &m);
        assert_eq!(cache.load(7, 3), Some(m));
    }

    #[test]
    fn header_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FileCache::new(dir.path()).unwrap();
        let m = IntMatrix::identity(2);
        cache.store(11, 2, &m);
        // Reading the same file under the wrong key must miss.
        let text = std::fs::read_to_string(cache.path_for(11, 2)).unwrap();
        std::fs::write(cache.path_for(11, 5), text).unwrap();
        assert_eq!(cache.load(11, 5), None);
    }
}
