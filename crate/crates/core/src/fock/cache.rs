//! On-disk sparse-triplet format for operator matrices.
//!
//! ```text
//! # toroidal-duality sparse v1
//! version <crate version>
//! params <sha256 of parameters>
//! tag <provenance>
//! dim <basis size>
//! degree2 <twice the degree shift | mixed>
//! lattice <comma separated shift | mixed>
//! exact <string of 0/1 flags, one per column>
//! nnz <count>
//! <row> <col> <re> <im>
//! ...
//! ```
//! Rows follow column-major canonical order. Floats are written in Rust's
//! shortest round-trip form, so a reload is bit-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;

use super::{ExactOp, GradedOp, LatticeShift, SparseMatrix};
use crate::error::{Error, Result};

const MAGIC: &str = "# toroidal-duality sparse v1";

pub fn write_op(path: &Path, op: &GradedOp, params_hash: &str) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "version {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "params {params_hash}");
    let _ = writeln!(out, "tag {}", op.tag);
    let _ = writeln!(out, "dim {}", op.op.dim());
    match op.degree2 {
        Some(d) => writeln!(out, "degree2 {d}"),
        None => writeln!(out, "degree2 mixed"),
    }
    .ok();
    match &op.lattice {
        LatticeShift::Fixed(v) => {
            let s: Vec<String> = v.iter().map(i32::to_string).collect();
            writeln!(out, "lattice {}", s.join(","))
        }
        LatticeShift::Mixed => writeln!(out, "lattice mixed"),
    }
    .ok();
    let flags: String = op.op.exact.iter().map(|&e| if e { '1' } else { '0' }).collect();
    let _ = writeln!(out, "exact {flags}");
    let _ = writeln!(out, "nnz {}", op.op.mat.nnz());
    for (r, c, v) in op.op.mat.triplets() {
        let _ = writeln!(out, "{r} {c} {:?} {:?}", v.re, v.im);
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads an operator back; fails if the parameter hash does not match.
pub fn read_op(path: &Path, params_hash: &str) -> Result<GradedOp> {
    let text = fs::read_to_string(path)?;
    let bad = |msg: &str| Error::Cache(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("missing header"));
    }
    let mut field = |name: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad("truncated header"))?;
        line.strip_prefix(name)
            .and_then(|s| s.strip_prefix(' ').or(Some("")))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected field {name}")))
    };
    let _version = field("version")?;
    if field("params")? != params_hash {
        return Err(bad("parameter hash mismatch"));
    }
    let tag = field("tag")?;
    let dim: usize = field("dim")?.parse().map_err(|_| bad("dim"))?;
    let degree2 = match field("degree2")?.as_str() {
        "mixed" => None,
        s => Some(s.parse().map_err(|_| bad("degree2"))?),
    };
    let lattice = match field("lattice")?.as_str() {
        "mixed" => LatticeShift::Mixed,
        "" => LatticeShift::Fixed(Vec::new()),
        s => LatticeShift::Fixed(s.split(',').map(|x| x.parse().map_err(|_| bad("lattice"))).collect::<Result<_>>()?),
    };
    let exact: Vec<bool> = field("exact")?.chars().map(|c| c == '1').collect();
    let nnz: usize = field("nnz")?.parse().map_err(|_| bad("nnz"))?;
    if exact.len() != dim {
        return Err(bad("exact flag count"));
    }
    let mut cols = vec![Vec::new(); dim];
    let mut count = 0;
    for line in lines {
        let mut it = line.split_whitespace();
        let mut next = || it.next().ok_or_else(|| bad("short triplet"));
        let r: u32 = next()?.parse().map_err(|_| bad("row"))?;
        let c: usize = next()?.parse().map_err(|_| bad("col"))?;
        let re: f64 = next()?.parse().map_err(|_| bad("re"))?;
        let im: f64 = next()?.parse().map_err(|_| bad("im"))?;
        if r as usize >= dim || c >= dim {
            return Err(bad("index out of range"));
        }
        cols[c].push((r, C64::new(re, im)));
        count += 1;
    }
    if count != nnz {
        return Err(bad("nnz mismatch"));
    }
    Ok(GradedOp { op: ExactOp::new(SparseMatrix { dim, cols }, exact), degree2, lattice, tag })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("op.txt");
        let mat = SparseMatrix::from_columns(
            3,
            vec![vec![(2, C64::new(0.1, -1.0 / 3.0))], vec![], vec![(0, C64::new(1e-300, 7.0))]],
        );
        let op = GradedOp {
            op: ExactOp::new(mat, vec![true, false, true]),
            degree2: Some(-2),
            lattice: LatticeShift::Fixed(vec![1, 0, -1, 0]),
            tag: "test".into(),
        };
        write_op(&path, &op, "abc").unwrap();
        let back = read_op(&path, "abc").unwrap();
        assert_eq!(back.op.mat, op.op.mat);
        assert_eq!(back.op.exact, op.op.exact);
        assert_eq!(back.lattice, op.lattice);
        assert_eq!(back.degree2, op.degree2);
        assert!(read_op(&path, "other").is_err());
    }
}
