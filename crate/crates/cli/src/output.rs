//! Snapshot files: CSV (primary) and legacy VTK structured points.

use std::fmt::Write as _;
use std::path::Path;

use weno_tvd::physics::euler::{eos_pressure, Background, Constants};
use weno_tvd::scenarios::diagnostics::theta_prime;
use weno_tvd::{Field, Grid, Result as SolverResult};

use crate::{CliError, OutputFormat};

/// Cell-centre table of one output time, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub nx: usize,
    pub nz: usize,
    pub dx: f64,
    pub dz: f64,
    /// Column names after `x,z`.
    pub columns: Vec<String>,
    /// One row per cell: `x, z, values...`.
    pub rows: Vec<Vec<f64>>,
}

impl Snapshot {
    fn empty(grid: &Grid, t: f64, columns: &[&str]) -> Self {
        Snapshot {
            t,
            nx: grid.nx,
            nz: grid.nz,
            dx: grid.dx,
            dz: grid.dz,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::with_capacity(grid.nx * grid.nz),
        }
    }

    pub fn advection(field: &Field<1>, grid: &Grid, t: f64) -> Self {
        let mut s = Self::empty(grid, t, &["q"]);
        for (i, j, q) in field.interior() {
            s.rows.push(vec![grid.x_center(i as isize), grid.z_center(j as isize), q[0]]);
        }
        s
    }

    /// Conserved variables plus `theta_prime, u, w, P`.
    pub fn atmosphere(
        field: &Field<4>,
        grid: &Grid,
        t: f64,
        consts: &Constants,
        background: &Background,
    ) -> SolverResult<Self> {
        let mut s = Self::empty(grid, t, &["rho", "rho_u", "rho_w", "rho_theta", "theta_prime", "u", "w", "P"]);
        for (i, j, q) in field.interior() {
            let p = eos_pressure(consts, q[3])?;
            s.rows.push(vec![
                grid.x_center(i as isize),
                grid.z_center(j as isize),
                q[0],
                q[1],
                q[2],
                q[3],
                theta_prime(q, background, j as isize),
                q[1] / q[0],
                q[2] / q[0],
                p,
            ]);
        }
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# t={} nx={} nz={} dx={} dz={}\n# x,z,{}\n",
            self.t,
            self.nx,
            self.nz,
            self.dx,
            self.dz,
            self.columns.join(",")
        );
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().and_then(|l| l.strip_prefix("# ")).ok_or("missing '# t=...' header")?;
        let mut t = None;
        let mut nx = None;
        let mut nz = None;
        let mut dx = None;
        let mut dz = None;
        for kv in header.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad header field '{kv}'"))?;
            let bad = |e: &dyn std::fmt::Display| format!("bad header value '{kv}': {e}");
            match k {
                "t" => t = Some(v.parse::<f64>().map_err(|e| bad(&e))?),
                "nx" => nx = Some(v.parse::<usize>().map_err(|e| bad(&e))?),
                "nz" => nz = Some(v.parse::<usize>().map_err(|e| bad(&e))?),
                "dx" => dx = Some(v.parse::<f64>().map_err(|e| bad(&e))?),
                "dz" => dz = Some(v.parse::<f64>().map_err(|e| bad(&e))?),
                _ => return Err(format!("unknown header field '{k}'")),
            }
        }
        let names = lines
            .next()
            .and_then(|l| l.strip_prefix("# x,z,"))
            .ok_or("missing column header line")?;
        let columns: Vec<String> = names.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| format!("data line {}: {e}", n + 1))?;
            if row.len() != columns.len() + 2 {
                return Err(format!("data line {}: expected {} values, got {}", n + 1, columns.len() + 2, row.len()));
            }
            rows.push(row);
        }
        let missing = |what: &str| format!("header lacks {what}");
        let s = Snapshot {
            t: t.ok_or_else(|| missing("t"))?,
            nx: nx.ok_or_else(|| missing("nx"))?,
            nz: nz.ok_or_else(|| missing("nz"))?,
            dx: dx.ok_or_else(|| missing("dx"))?,
            dz: dz.ok_or_else(|| missing("dz"))?,
            columns,
            rows,
        };
        if s.rows.len() != s.nx * s.nz {
            return Err(format!("expected {} data rows, got {}", s.nx * s.nz, s.rows.len()));
        }
        Ok(s)
    }

    /// Legacy VTK structured points with one point per cell centre.
    pub fn to_vtk(&self) -> String {
        let (x0, z0) = self.rows.first().map(|r| (r[0], r[1])).unwrap_or((0.0, 0.0));
        let mut out = String::new();
        let _ = write!(
            out,
            "# vtk DataFile Version 3.0\nt={}\nASCII\nDATASET STRUCTURED_POINTS\nDIMENSIONS {} {} 1\nORIGIN {:.16e} {:.16e} 0\nSPACING {:.16e} {:.16e} 1\nPOINT_DATA {}\n",
            self.t,
            self.nx,
            self.nz,
            x0,
            z0,
            self.dx,
            self.dz,
            self.nx * self.nz
        );
        for (c, name) in self.columns.iter().enumerate() {
            let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for row in &self.rows {
                let _ = writeln!(out, "{:.16e}", row[c + 2]);
            }
        }
        out
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<(), CliError> {
        let text = match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Vtk => self.to_vtk(),
        };
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Snapshot::from_csv(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// File name of a snapshot, e.g. `snapshot_002_t600.csv`.
pub fn snapshot_name(index: usize, t: f64, format: OutputFormat) -> String {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Vtk => "vtk",
    };
    format!("snapshot_{index:03}_t{t}.{ext}")
}
