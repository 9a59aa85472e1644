//! Binary save/load and CSV export for truncated operator matrices.
//!
//! Layout: header `magic "TSOP", version u32, n u32, N u32, K i64,
//! ordering u32` followed by the row-major complex-double array, all
//! little-endian. Ordering tag 0 is the graded-lexicographic frequency
//! order used by `TruncatedOperator`.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use torsym_core::{CMatrix, TorusGrid, TruncatedOperator};

const MAGIC: &[u8; 4] = b"TSOP";
const VERSION: u32 = 1;
const ORDER_GRADED_LEX: u32 = 0;

pub fn save_matrix(path: &Path, op: &TruncatedOperator) -> anyhow::Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(op.grid().dimension() as u32).to_le_bytes());
    buf.extend_from_slice(&(op.grid().points_per_dim() as u32).to_le_bytes());
    buf.extend_from_slice(&op.cutoff().to_le_bytes());
    buf.extend_from_slice(&ORDER_GRADED_LEX.to_le_bytes());
    let m = op.matrix();
    for v in m.data() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    crate::report::write_atomic(path, &buf)
}

pub fn load_matrix(path: &Path) -> anyhow::Result<TruncatedOperator> {
    let mut f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut head = [0u8; 28];
    f.read_exact(&mut head).context("reading matrix header")?;
    if &head[0..4] != MAGIC {
        bail!("not a matrix file: bad magic");
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        bail!("unsupported matrix file version {version}");
    }
    let n = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let points = u32::from_le_bytes(head[12..16].try_into().unwrap()) as usize;
    let cutoff = i64::from_le_bytes(head[16..24].try_into().unwrap());
    let ordering = u32::from_le_bytes(head[24..28].try_into().unwrap());
    if ordering != ORDER_GRADED_LEX {
        bail!("unsupported ordering tag {ordering}");
    }
    let grid = TorusGrid::new(n, points)?;
    let side = (2 * cutoff + 1).pow(n as u32) as usize;
    let mut body = Vec::new();
    f.read_to_end(&mut body)?;
    if body.len() != side * side * 16 {
        bail!("matrix body: expected {} bytes, found {}", side * side * 16, body.len());
    }
    let mut matrix = CMatrix::zeros(side, side);
    for (i, chunk) in body.chunks_exact(16).enumerate() {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        matrix.set(i / side, i % side, Complex64::new(re, im));
    }
    Ok(TruncatedOperator::from_matrix(grid, cutoff, matrix)?)
}

/// CSV export: one line per entry, columns `row,col,re,im` (indices into
/// the graded-lexicographic frequency order).
pub fn export_matrix_csv(path: &Path, op: &TruncatedOperator) -> anyhow::Result<()> {
    let m = op.matrix();
    let mut out = Vec::new();
    writeln!(out, "row,col,re,im")?;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.get(r, c);
            writeln!(out, "{r},{c},{},{}", crate::report::format_f64(v.re), crate::report::format_f64(v.im))?;
        }
    }
    crate::report::write_atomic(path, &out)
}
