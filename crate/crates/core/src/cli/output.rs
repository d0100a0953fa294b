use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::MeasurementRecord;
use crate::qudit::UnitaryMatrix;
use crate::transmon::CoherenceTable;

pub const UNITARY_HEADER: &str = "row,col,re,im";
pub const DENSITY_HEADER: &str = "delta_phi_rad,density";
pub const T2_HEADER: &str = "phi_wb,t2_s";

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(BufWriter::new(f))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(BufReader::new(f))
}

pub fn records_header(d: usize) -> String {
    let mut h = String::from("step,delay_s,compensation_rad,outcome");
    for j in 0..d {
        h.push_str(&format!(",p{j}"));
    }
    h
}

pub fn write_records<W: Write>(mut out: W, d: usize, records: &[MeasurementRecord]) -> Result<()> {
    writeln!(out, "{}", records_header(d))?;
    for r in records {
        write!(out, "{},{:e},{:e},{}", r.step, r.delay, r.compensation, r.outcome)?;
        for p in &r.probabilities {
            write!(out, ",{p:e}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a records CSV back into measurement records.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<MeasurementRecord>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.ok_or_else(|| Error::Parse("empty records file".into()))?;
    let d = header.split(',').count().checked_sub(4).filter(|&d| d >= 2).ok_or_else(|| Error::Parse("bad records header".into()))?;
    if header != records_header(d) {
        return Err(Error::Parse(format!("unexpected records header `{header}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let cols: Vec<&str> = line.split(',').collect();
        let bad = |what: &str| Error::Parse(format!("records line {}: {what}", i + 2));
        if cols.len() != d + 4 {
            return Err(bad("wrong column count"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad("not a number"));
        out.push(MeasurementRecord {
            step: cols[0].parse().map_err(|_| bad("bad step"))?,
            delay: float(cols[1])?,
            compensation: float(cols[2])?,
            outcome: cols[3].parse().map_err(|_| bad("bad outcome"))?,
            probabilities: cols[4..].iter().map(|s| float(s)).collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

pub fn write_unitary<W: Write>(mut out: W, u: &UnitaryMatrix) -> Result<()> {
    writeln!(out, "{UNITARY_HEADER}")?;
    for r in 0..u.dim() {
        for c in 0..u.dim() {
            let z = u.get(r, c);
            writeln!(out, "{r},{c},{:e},{:e}", z.re, z.im)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a `row,col,re,im` file into a unitary (checked to 1e-10).
pub fn read_unitary<R: BufRead>(input: R) -> Result<UnitaryMatrix> {
    let mut lines = input.lines();
    match lines.next().transpose()? {
        Some(h) if h == UNITARY_HEADER => {}
        other => return Err(Error::Parse(format!("expected header `{UNITARY_HEADER}`, found {other:?}"))),
    }
    let mut cells = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let cols: Vec<&str> = line.split(',').collect();
        let bad = || Error::Parse(format!("unitary line {}", i + 2));
        if cols.len() != 4 {
            return Err(bad());
        }
        let r: usize = cols[0].parse().map_err(|_| bad())?;
        let c: usize = cols[1].parse().map_err(|_| bad())?;
        let re: f64 = cols[2].parse().map_err(|_| bad())?;
        let im: f64 = cols[3].parse().map_err(|_| bad())?;
        cells.push((r, c, Complex64::new(re, im)));
    }
    let dim = (cells.len() as f64).sqrt().round() as usize;
    if dim * dim != cells.len() || dim == 0 {
        return Err(Error::Parse(format!("{} entries do not form a square matrix", cells.len())));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (r, c, z) in cells {
        if r >= dim || c >= dim {
            return Err(Error::Parse(format!("index ({r},{c}) out of range")));
        }
        entries[r * dim + c] = z;
    }
    UnitaryMatrix::from_entries(dim, entries)
}

pub fn write_density<W: Write>(mut out: W, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(out, "{DENSITY_HEADER}")?;
    for (x, p) in rows {
        writeln!(out, "{x:e},{p:e}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_density<R: BufRead>(input: R) -> Result<Vec<(f64, f64)>> {
    read_pairs(input, DENSITY_HEADER)
}

fn read_pairs<R: BufRead>(input: R, header: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = input.lines();
    match lines.next().transpose()? {
        Some(h) if h.trim() == header => {}
        other => return Err(Error::Parse(format!("expected header `{header}`, found {other:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: expected two numbers, found `{line}`", i + 2));
        let (a, b) = line.split_once(',').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        rows.push((a, b));
    }
    Ok(rows)
}

/// Loads a `phi_wb,t2_s` coherence table.
pub fn read_t2_table(path: &Path) -> Result<CoherenceTable> {
    let rows = read_pairs(open(path)?, T2_HEADER).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    CoherenceTable::new(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::fourier_matrix;

    #[test]
    fn records_round_trip() {
        let recs = vec![MeasurementRecord {
            step: 2,
            delay: 9e-7,
            compensation: 0.1f64.sqrt(),
            outcome: 1,
            probabilities: vec![1.0 / 3.0, 0.5, 1.0 / 6.0],
        }];
        let mut buf = Vec::new();
        write_records(&mut buf, 3, &recs).unwrap();
        assert!(buf.starts_with(b"step,delay_s,compensation_rad,outcome,p0,p1,p2\n"));
        assert_eq!(read_records(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn unitary_round_trip() {
        let f = fourier_matrix(5).unwrap();
        let mut buf = Vec::new();
        write_unitary(&mut buf, &f).unwrap();
        assert_eq!(read_unitary(buf.as_slice()).unwrap().entries(), f.entries());
    }

    #[test]
    fn malformed_pairs() {
        assert!(read_pairs("phi_wb,t2_s\n1,x\n".as_bytes(), T2_HEADER).is_err());
        assert!(read_pairs("a,b\n1,2\n".as_bytes(), T2_HEADER).is_err());
        assert_eq!(read_pairs("phi_wb,t2_s\n1,2\n".as_bytes(), T2_HEADER).unwrap(), vec![(1.0, 2.0)]);
    }
}
