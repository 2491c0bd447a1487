//! Text snapshots, error tables and JSON run manifests.
//!
//! Snapshot layout: `#`-prefixed `key value` header lines, a `# columns`
//! line, then one whitespace-separated record per cell in row-major order
//! (x fastest). Numbers use Rust's shortest round-trip formatting, so
//! identical fields produce identical bytes and read back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Mesh};
use crate::state::{Conserved, GasModel};

pub const SNAPSHOT_MAGIC: &str = "# lowdiss snapshot v1";

/// Run identification written into snapshot headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub problem: u32,
    pub scheme: String,
    pub order: u32,
    pub time: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<const N: usize> {
    pub meta: SnapshotMeta,
    pub field: Field<N>,
}

pub fn format_snapshot<const N: usize>(field: &Field<N>, meta: &SnapshotMeta) -> String {
    let dim = N - 2;
    let m = &field.mesh;
    let mut s = String::with_capacity(64 * m.cells() + 512);
    let _ = writeln!(s, "{SNAPSHOT_MAGIC}");
    let _ = writeln!(s, "# problem {}", meta.problem);
    let _ = writeln!(s, "# scheme {}", meta.scheme);
    let _ = writeln!(s, "# order {}", meta.order);
    let _ = writeln!(s, "# dim {dim}");
    let _ = writeln!(s, "# nx {}", m.nx);
    let _ = writeln!(s, "# ny {}", m.ny);
    let _ = writeln!(s, "# x0 {:?}", m.x.0);
    let _ = writeln!(s, "# x1 {:?}", m.x.1);
    if dim == 2 {
        let _ = writeln!(s, "# y0 {:?}", m.y.0);
        let _ = writeln!(s, "# y1 {:?}", m.y.1);
    }
    let _ = writeln!(s, "# time {:?}", meta.time);
    let _ = writeln!(s, "# gamma {:?}", meta.gamma);
    if dim == 1 {
        let _ = writeln!(s, "# columns x rho u p E mx");
    } else {
        let _ = writeln!(s, "# columns x y rho u v p E mx my");
    }
    let gas = GasModel { gamma: meta.gamma };
    for j in 0..m.ny as isize {
        for i in 0..m.nx as isize {
            let u = field.at(i, j);
            let rho = u.0[0];
            let p = u.pressure_unchecked(gas);
            let _ = write!(s, "{:?}", m.xc(i));
            if dim == 2 {
                let _ = write!(s, " {:?}", m.yc(j));
            }
            let _ = write!(s, " {:?} {:?}", rho, u.0[1] / rho);
            if dim == 2 {
                let _ = write!(s, " {:?}", u.0[2] / rho);
            }
            let _ = write!(s, " {:?} {:?} {:?}", p, u.0[N - 1], u.0[1]);
            if dim == 2 {
                let _ = write!(s, " {:?}", u.0[2]);
            }
            s.push('\n');
        }
    }
    s
}

pub fn write_snapshot<const N: usize>(field: &Field<N>, meta: &SnapshotMeta, path: &Path) -> Result<()> {
    write_atomic(path, format_snapshot(field, meta).as_bytes())
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("partial");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot<const N: usize>(path: &Path) -> Result<Snapshot<N>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text, path)
}

pub fn parse_snapshot<const N: usize>(text: &str, path: &Path) -> Result<Snapshot<N>> {
    let bad = |message: String| Error::Parse { path: path.to_path_buf(), message };
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_MAGIC) {
        return Err(bad("missing snapshot header".into()));
    }
    let mut header = std::collections::HashMap::new();
    let mut body = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("# ") {
            if let Some((k, v)) = rest.split_once(' ') {
                header.insert(k.to_string(), v.to_string());
            }
        } else if !line.trim().is_empty() {
            body.push(line);
        }
    }
    let get = |k: &str| header.get(k).cloned().ok_or_else(|| bad(format!("header key '{k}' missing")));
    let num = |k: &str| -> Result<f64> { get(k)?.parse::<f64>().map_err(|e| bad(format!("{k}: {e}"))) };
    let int = |k: &str| -> Result<usize> { get(k)?.parse::<usize>().map_err(|e| bad(format!("{k}: {e}"))) };

    let dim = int("dim")?;
    if dim != N - 2 {
        return Err(bad(format!("snapshot is {dim}-D")));
    }
    let (nx, ny) = (int("nx")?, int("ny")?);
    let mesh = if dim == 1 {
        Mesh::line(nx, num("x0")?, num("x1")?)
    } else {
        Mesh::rect(nx, ny, (num("x0")?, num("x1")?), (num("y0")?, num("y1")?))
    };
    let meta = SnapshotMeta {
        problem: int("problem")? as u32,
        scheme: get("scheme")?,
        order: int("order")? as u32,
        time: num("time")?,
        gamma: num("gamma")?,
    };
    if body.len() != mesh.cells() {
        return Err(bad(format!("{} records for {} cells", body.len(), mesh.cells())));
    }
    let mut field = Field::<N>::new(mesh, 0)?;
    let mut values = Vec::with_capacity(mesh.cells());
    for (k, line) in body.iter().enumerate() {
        let cols = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("record {k}: {e}")))?;
        let u = if dim == 1 {
            if cols.len() != 6 {
                return Err(bad(format!("record {k} has {} columns", cols.len())));
            }
            Conserved::<N>(std::array::from_fn(|c| [cols[1], cols[5], cols[4]][c]))
        } else {
            if cols.len() != 9 {
                return Err(bad(format!("record {k} has {} columns", cols.len())));
            }
            Conserved::<N>(std::array::from_fn(|c| [cols[2], cols[7], cols[8], cols[6]][c]))
        };
        values.push(u);
    }
    field.set_interior(&values);
    Ok(Snapshot { meta, field })
}

/// Scientific notation with three significant digits and a two-digit
/// exponent, e.g. `9.91e-03`.
pub fn sci3(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.2e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

/// One row of an error table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub mesh: String,
    pub l1_rho: f64,
    pub rate: Option<f64>,
}

pub fn format_error_table(title: &str, rows: &[TableRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {title}");
    let _ = writeln!(s, "mesh\tl1_rho\trate");
    for r in rows {
        let rate = r.rate.map(|v| format!("{v:.3}")).unwrap_or_default();
        let _ = writeln!(s, "{}\t{}\t{}", r.mesh, sci3(r.l1_rho), rate);
    }
    s
}

pub fn write_error_table(path: &Path, title: &str, rows: &[TableRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("error table needs at least one row".into()));
    }
    write_atomic(path, format_error_table(title, rows).as_bytes())
}

/// Parses a table written by [`write_error_table`].
pub fn read_error_table(path: &Path) -> Result<Vec<TableRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::Parse { path: path.to_path_buf(), message };
    let mut rows = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("mesh")) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(bad(format!("row '{line}'")));
        }
        let l1_rho = cols[1].parse().map_err(|e| bad(format!("{e}")))?;
        let rate = if cols[2].is_empty() { None } else { Some(cols[2].parse().map_err(|e| bad(format!("{e}")))?) };
        rows.push(TableRow { mesh: cols[0].to_string(), l1_rho, rate });
    }
    Ok(rows)
}

/// Snapshot file name for a run at time `t`.
pub fn snapshot_name(problem: u32, scheme: &str, order: u32, nx: usize, ny: usize, t: f64) -> PathBuf {
    PathBuf::from(format!("ex{problem:02}_{scheme}_o{order}_{nx}x{ny}_t{t}.dat"))
}
