//! Configuration files and output writers.
//!
//! The configuration format is a list of `key=value` tokens separated by
//! whitespace or newlines, with `#` comments and optional `[section]`
//! headers:
//!
//! ```text
//! case=vortex scheme=catmood6 nx=100 ny=100
//! [mood]
//! cascade=6,4,2,1   # CAT6, CAT4, CAT2, parachute
//! eps1=1e-4 eps2=1e-3
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::driver::{ConvergenceRow, RunConfig, StepRecord};
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::models::Model;

// ---------------------------------------------------------------- frames

/// Primitive output of one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub step: usize,
    pub time: f64,
    pub nx: usize,
    pub ny: usize,
    /// Lower-left cell centre.
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
    /// `(x, y, rho, u, v, p)` per cell, rows by `j` then `i`.
    pub cells: Vec<[f64; 6]>,
    pub mask: Option<Vec<i8>>,
}

impl Frame {
    pub fn from_field<M: Model>(model: &M, field: &Field<M::State>, step: usize, time: f64, mask: Option<&[i8]>) -> Self {
        let m = field.mesh;
        let mut cells = Vec::with_capacity(m.cells());
        for j in 0..m.ny as isize {
            for i in 0..m.nx as isize {
                let (x, y) = m.cell_center(i, j);
                let [a, b, c, d] = model.frame_values(&field.get(i, j));
                cells.push([x, y, a, b, c, d]);
            }
        }
        Frame {
            step,
            time,
            nx: m.nx,
            ny: m.ny,
            origin: m.cell_center(0, 0),
            spacing: (m.dx, m.dy),
            cells,
            mask: mask.map(<[i8]>::to_vec),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub const CSV_HEADER: &str = "x,y,rho,u,v,p";

/// CSV text of a frame: header `x,y,rho,u,v,p[,mask]`, then one row per
/// cell.
pub fn field_csv(frame: &Frame) -> String {
    let mut s = String::with_capacity(frame.cells.len() * 80);
    s.push_str(CSV_HEADER);
    if frame.mask.is_some() {
        s.push_str(",mask");
    }
    s.push('\n');
    for (k, c) in frame.cells.iter().enumerate() {
        let _ = write!(s, "{},{},{},{},{},{}", c[0], c[1], c[2], c[3], c[4], c[5]);
        if let Some(m) = &frame.mask {
            let _ = write!(s, ",{}", m[k]);
        }
        s.push('\n');
    }
    s
}

pub fn write_field_csv(frame: &Frame, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(field_csv(frame).as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(w, path)
}

/// Rows and optional mask column of a field CSV.
pub fn parse_field_csv(text: &str) -> Result<(Vec<[f64; 6]>, Option<Vec<i8>>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let with_mask = match header.trim() {
        h if h == CSV_HEADER => false,
        h if h == format!("{CSV_HEADER},mask") => true,
        h => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header '{h}'"),
            })
        }
    };
    let mut rows = Vec::new();
    let mut mask = with_mask.then(Vec::new);
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: n + 1, msg };
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 + usize::from(with_mask) {
            return Err(bad(format!("expected {} columns, found {}", 6 + usize::from(with_mask), parts.len())));
        }
        let mut row = [0.0; 6];
        for (v, p) in row.iter_mut().zip(&parts) {
            *v = p.trim().parse().map_err(|_| bad(format!("not a number: '{p}'")))?;
        }
        rows.push(row);
        if let Some(m) = mask.as_mut() {
            m.push(parts[6].trim().parse().map_err(|_| bad(format!("bad mask value '{}'", parts[6])))?);
        }
    }
    Ok((rows, mask))
}

pub fn read_field_csv(path: &Path) -> Result<(Vec<[f64; 6]>, Option<Vec<i8>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_field_csv(&text)
}

/// Legacy VTK structured-points text, one scalar field per variable.
pub fn field_vtk(frame: &Frame) -> String {
    let mut s = String::with_capacity(frame.cells.len() * 100);
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "step {} time {}", frame.step, frame.time);
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", frame.nx, frame.ny);
    let _ = writeln!(s, "ORIGIN {} {} 0", frame.origin.0, frame.origin.1);
    let _ = writeln!(s, "SPACING {} {} 1", frame.spacing.0, frame.spacing.1);
    let _ = writeln!(s, "POINT_DATA {}", frame.cells.len());
    for (k, name) in ["rho", "u", "v", "p"].iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for c in &frame.cells {
            let _ = writeln!(s, "{}", c[2 + k]);
        }
    }
    if let Some(m) = &frame.mask {
        let _ = writeln!(s, "SCALARS mask int 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for v in m {
            let _ = writeln!(s, "{v}");
        }
    }
    s
}

pub fn write_vtk(frame: &Frame, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(field_vtk(frame).as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(w, path)
}

// ---------------------------------------------------------------- diagnostics

/// Per-step MOOD statistics: `step,time,dt,pct_<scheme>...`.
pub fn stats_csv(records: &[StepRecord]) -> String {
    let mut s = String::from("step,time,dt");
    if let Some(r) = records.first() {
        for l in &r.stats.labels {
            let _ = write!(s, ",pct_{l}");
        }
    }
    s.push('\n');
    for r in records {
        let _ = write!(s, "{},{},{}", r.step, r.time, r.dt);
        for p in r.stats.percentages() {
            let _ = write!(s, ",{p}");
        }
        s.push('\n');
    }
    s
}

pub fn write_stats_csv(records: &[StepRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(stats_csv(records).as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(w, path)
}

/// Text table `N | L1 error | order`.
pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut s = format!("{:>6} | {:>12} | {:>6}\n", "N", "L1 error", "order");
    for r in rows {
        let order = r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
        let _ = writeln!(s, "{:>6} | {:>12.3e} | {:>6}", r.n, r.l1_error, order);
    }
    s
}

/// Writes frames into an output directory as `field_<step>.csv` (and
/// `.vtk`).
#[derive(Clone, Debug)]
pub struct FrameWriter {
    pub dir: PathBuf,
    pub vtk: bool,
}

impl FrameWriter {
    pub fn write(&self, frame: &Frame) -> Result<()> {
        let stem = format!("field_{:06}", frame.step);
        write_field_csv(frame, &self.dir.join(format!("{stem}.csv")))?;
        if self.vtk {
            write_vtk(frame, &self.dir.join(format!("{stem}.vtk")))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- config

const SECTIONS: [(&str, &[&str]); 5] = [
    ("run", &["case", "scheme", "nx", "ny", "cfl", "tfinal"]),
    ("mood", &["cascade", "parachute", "eps1", "eps2"]),
    ("acat", &["limiter"]),
    ("gas", &["gamma"]),
    ("output", &["outdir", "output_every", "vtk"]),
];

/// Parse and validate a configuration. Warnings (such as a CFL above 0.5)
/// are logged.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut section: Option<&str> = None;
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("malformed section header '{body}'"),
                })?
                .trim();
            let known = SECTIONS.iter().find(|(s, _)| *s == name).ok_or_else(|| Error::Parse {
                line,
                msg: format!("unknown section [{name}]"),
            })?;
            section = Some(known.0);
            continue;
        }
        for token in body.split_whitespace() {
            let (k, v) = token.split_once('=').ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected key=value, found '{token}'"),
            })?;
            let key = match k.trim().to_ascii_lowercase().as_str() {
                "t_final" => "tfinal".to_string(),
                other => other.to_string(),
            };
            let allowed = match section {
                Some(sec) => SECTIONS.iter().find(|(s, _)| *s == sec).map(|(_, keys)| keys.contains(&key.as_str())),
                None => Some(SECTIONS.iter().any(|(_, keys)| keys.contains(&key.as_str()))),
            };
            if allowed != Some(true) {
                let place = section.map_or_else(String::new, |s| format!(" in [{s}]"));
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key '{key}'{place}"),
                });
            }
            if pairs.iter().any(|(_, k2, _)| *k2 == key) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate key '{key}'"),
                });
            }
            pairs.push((line, key, v.trim().to_string()));
        }
    }

    let find = |key: &str| pairs.iter().find(|(_, k, _)| k == key);
    let (_, _, case) = find("case").ok_or(Error::Parse {
        line: 0,
        msg: "missing required key 'case'".into(),
    })?;
    let (_, _, scheme) = find("scheme").ok_or(Error::Parse {
        line: 0,
        msg: "missing required key 'scheme'".into(),
    })?;
    let case = case.parse().map_err(|e: Error| at_line(find("case").unwrap().0, e))?;
    let scheme = scheme.parse().map_err(|e: Error| at_line(find("scheme").unwrap().0, e))?;
    let mut cfg = RunConfig::new(case, scheme, 100, 100);
    let mut ny_set = false;
    for (line, key, value) in &pairs {
        apply_key(&mut cfg, key, value).map_err(|e| at_line(*line, e))?;
        ny_set |= key == "ny";
    }
    if !ny_set {
        cfg.ny = cfg.nx;
    }
    if cfg.case.is_1d() {
        cfg.ny = 1;
    }
    for w in cfg.validate()? {
        log::warn!("{w}");
    }
    Ok(cfg)
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::Parse { line, msg },
        other => other,
    }
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T> {
    match v.parse::<T>() {
        Ok(x) if x > T::default() => Ok(x),
        _ => Err(Error::config(format!("{key} must be a positive number, got '{v}'"))),
    }
}

/// Set one configuration key from its text value.
pub fn apply_key(cfg: &mut RunConfig, key: &str, v: &str) -> Result<()> {
    match key {
        "case" => cfg.case = v.parse()?,
        "scheme" => cfg.scheme = v.parse()?,
        "nx" => cfg.nx = positive(key, v)?,
        "ny" => cfg.ny = positive(key, v)?,
        "cfl" => cfg.cfl = positive(key, v)?,
        "tfinal" | "t_final" => cfg.t_final = Some(positive(key, v)?),
        "cascade" => cfg.cascade = Some(parse_list(v)?),
        "parachute" => cfg.parachute = v.parse()?,
        "limiter" => cfg.limiter = v.parse()?,
        "eps1" => cfg.detection.eps1 = positive(key, v)?,
        "eps2" => cfg.detection.eps2 = positive(key, v)?,
        "gamma" => cfg.gamma = Some(positive(key, v)?),
        "outdir" => cfg.outdir = Some(PathBuf::from(v)),
        "output_every" => {
            cfg.output_every = v
                .parse()
                .map_err(|_| Error::config(format!("output_every must be a step count, got '{v}'")))?
        }
        "vtk" => {
            cfg.vtk = match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                _ => return Err(Error::config(format!("vtk must be true or false, got '{v}'"))),
            }
        }
        other => return Err(Error::config(format!("unknown key '{other}'"))),
    }
    Ok(())
}

/// Comma-separated positive integers, e.g. `50,100,200`.
pub fn parse_list(v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::config(format!("expected a list of positive integers, got '{v}'")))
        })
        .collect()
}
