//! Field export as CSV and legacy VTK.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nemflow::solver::{CellKind, FlowField, Stagger};
use nemflow::Vec3d;

use crate::error::{CliError, Result};

/// Header of the CSV field format.
pub const CSV_HEADER: &str = "x,y,z,v1,v2,v3,p";

/// Cell-centre sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSample {
    pub x: Vec3d,
    pub v: Vec3d,
    pub p: f64,
    pub fluid: bool,
}

/// Cell samples in z-major order (x fastest).
pub fn cell_samples(field: &FlowField) -> Result<Vec<CellSample>> {
    let g = &field.grid;
    let n = g.n;
    if field.u.iter().any(|u| u.len() != g.len()) || field.p.len() != g.len() {
        return Err(CliError::Empty("field arrays do not match the grid"));
    }
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let t = [i + 1, j + 1, k + 1];
                let c = g.index(t);
                let fluid = g.cell_kind([i, j, k]) != CellKind::Solid;
                let (v, p) = if fluid { (field.cell_velocity(c), field.p[c]) } else { (Vec3d::zero(), 0.0) };
                out.push(CellSample {
                    x: g.position(Stagger::Cell, t),
                    v,
                    p,
                    fluid,
                });
            }
        }
    }
    if !out.iter().any(|s| s.fluid) {
        return Err(CliError::Empty("no fluid cells"));
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

/// Writes fluid cell centres as CSV with 17 significant digits.
pub fn write_csv(field: &FlowField, path: &Path) -> Result<()> {
    let samples = cell_samples(field)?;
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(w, "{CSV_HEADER}").map_err(io)?;
    for s in samples.iter().filter(|s| s.fluid) {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.x[0], s.x[1], s.x[2], s.v[0], s.v[1], s.v[2], s.p
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a CSV written by [`write_csv`] as rows of seven numbers.
pub fn read_csv(path: &Path) -> Result<Vec<[f64; 7]>> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = BufReader::new(f).lines();
    let header = lines.next().transpose().map_err(|e| CliError::io(path, e))?;
    if header.as_deref() != Some(CSV_HEADER) {
        return Err(CliError::Schema(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.parse::<f64>().map_err(|e| CliError::Schema(format!("bad number {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let row: [f64; 7] = vals
            .try_into()
            .map_err(|_| CliError::Schema(format!("expected 7 columns in {line:?}")))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Writes all `n³` cell centres as legacy VTK structured points; solid
/// cells are zero-filled and flagged by the `mask` scalar.
pub fn write_vtk(field: &FlowField, path: &Path) -> Result<()> {
    let samples = cell_samples(field)?;
    let g = &field.grid;
    let n = g.n;
    let o = -g.half_width + 0.5 * g.h;
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    let mut body = String::new();
    body.push_str("# vtk DataFile Version 3.0\nnemflow velocity and pressure\nASCII\nDATASET STRUCTURED_POINTS\n");
    body.push_str(&format!("DIMENSIONS {n} {n} {n}\nORIGIN {o:.16e} {o:.16e} {o:.16e}\n"));
    body.push_str(&format!("SPACING {:.16e} {:.16e} {:.16e}\nPOINT_DATA {}\n", g.h, g.h, g.h, samples.len()));
    w.write_all(body.as_bytes()).map_err(io)?;
    writeln!(w, "VECTORS velocity double").map_err(io)?;
    for s in &samples {
        writeln!(w, "{:.16e} {:.16e} {:.16e}", s.v[0], s.v[1], s.v[2]).map_err(io)?;
    }
    writeln!(w, "SCALARS pressure double 1\nLOOKUP_TABLE default").map_err(io)?;
    for s in &samples {
        writeln!(w, "{:.16e}", s.p).map_err(io)?;
    }
    writeln!(w, "SCALARS mask int 1\nLOOKUP_TABLE default").map_err(io)?;
    for s in &samples {
        writeln!(w, "{}", u8::from(s.fluid)).map_err(io)?;
    }
    w.flush().map_err(io)
}
