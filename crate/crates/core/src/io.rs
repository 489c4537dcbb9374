//! Files: polyline and support CSVs, trace directories, arrival fields, JSON reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arrival::ArrivalTimeField;
use crate::curve::{Polyline, SupportCurve};
use crate::diagnostics::DiagnosticsRecord;
use crate::evolver::{FlowTrace, Snapshot, TraceMeta};
use crate::exact::ExactFamily;
use crate::Point;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

fn file_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> IoError + '_ {
    move |source| IoError::Csv { path: path.to_path_buf(), source }
}

/// Header comment of a polyline CSV.
pub fn polyline_header(family: Option<&ExactFamily>, t: Option<f64>, closed: bool) -> String {
    let mut fields = Vec::new();
    if let Some(f) = family {
        fields.push(format!("family={}", f.kind.name()));
        fields.push(format!(
            "pose=rotation:{},translation:{}:{},scale:{}",
            f.rotation, f.translation.x, f.translation.y, f.scale
        ));
    }
    if let Some(t) = t {
        fields.push(format!("t={t}"));
    }
    fields.push(format!("closed={closed}"));
    format!("# {}", fields.join(" "))
}

/// Polyline as `index,x,y` rows below a `#` header comment.
pub fn polyline_csv(p: &Polyline, header: &str) -> String {
    let mut out = String::with_capacity(32 * (p.len() + 2));
    out.push_str(header);
    out.push_str("\nindex,x,y\n");
    for (i, q) in p.points.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", q.x, q.y));
    }
    out
}

pub fn write_polyline_csv(path: &Path, p: &Polyline, header: &str) -> Result<(), IoError> {
    fs::write(path, polyline_csv(p, header)).map_err(file_err(path))
}

/// Reads an `index,x,y` CSV. The polyline is closed unless the header
/// comment says `closed=false`.
pub fn read_polyline_csv(path: &Path) -> Result<Polyline, IoError> {
    let text = fs::read_to_string(path).map_err(file_err(path))?;
    let closed = !text.lines().take_while(|l| l.starts_with('#')).any(|l| l.contains("closed=false"));
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut points = Vec::new();
    for rec in rdr.deserialize::<(usize, f64, f64)>() {
        let (_, x, y) = rec.map_err(csv_err(path))?;
        points.push(Point::new(x, y));
    }
    if points.len() < 3 {
        return Err(IoError::Format { path: path.to_path_buf(), message: format!("{} points", points.len()) });
    }
    Ok(Polyline::new(points, closed))
}

/// Support function as `theta,h` rows.
pub fn write_support_csv(path: &Path, h: &SupportCurve) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["theta", "h"]).map_err(csv_err(path))?;
    for (k, v) in h.h().iter().enumerate() {
        w.write_record([h.theta(k).to_string(), v.to_string()]).map_err(csv_err(path))?;
    }
    w.flush().map_err(file_err(path))
}

pub fn write_diagnostics_csv(path: &Path, records: &[DiagnosticsRecord]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(DiagnosticsRecord::COLUMNS).map_err(csv_err(path))?;
    for r in records {
        w.write_record(r.values().iter().map(|v| v.to_string())).map_err(csv_err(path))?;
    }
    w.flush().map_err(file_err(path))
}

/// Arrival field as `x,y,u,mask` rows; masked-out nodes carry `u = NaN`.
pub fn write_arrival_csv(path: &Path, f: &ArrivalTimeField) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["x", "y", "u", "mask"]).map_err(csv_err(path))?;
    let g = f.grid;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let p = g.node(i, j);
            let k = g.index(i, j);
            let mask = if f.mask[k] { "1" } else { "0" };
            w.write_record([p.x.to_string(), p.y.to_string(), f.u[k].to_string(), mask.to_string()])
                .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(file_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut f = fs::File::create(path).map_err(file_err(path))?;
    serde_json::to_writer_pretty(&mut f, value).map_err(|source| IoError::Json { path: path.to_path_buf(), source })?;
    f.write_all(b"\n").map_err(file_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(file_err(path))?;
    serde_json::from_str(&text).map_err(|source| IoError::Json { path: path.to_path_buf(), source })
}

/// Grid of one snapshot, as recorded in `trace.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", rename_all = "snake_case")]
pub enum SnapshotGrid {
    Polyline { nodes: usize, closed: bool },
    Support { nodes: usize },
    Turning { nodes: usize, theta0: f64, dtheta: f64 },
    Graph { nodes: usize, a_minus: f64, a_plus: f64 },
}

impl SnapshotGrid {
    pub fn of(s: &Snapshot) -> Self {
        match s {
            Snapshot::Polyline(p) => Self::Polyline { nodes: p.len(), closed: p.closed },
            Snapshot::Support(h) => Self::Support { nodes: h.len() },
            Snapshot::Turning(c) => Self::Turning { nodes: c.len(), theta0: c.theta0(), dtheta: c.dtheta() },
            Snapshot::Graph(g) => Self::Graph { nodes: g.len(), a_minus: g.a_minus(), a_plus: g.a_plus() },
        }
    }
}

/// Contents of `trace.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub meta: TraceMeta,
    pub times: Vec<f64>,
    pub grids: Vec<SnapshotGrid>,
    pub curves: Vec<String>,
}

pub fn curve_file_name(index: usize) -> String {
    format!("curve_{index:06}.csv")
}

/// Writes `trace.json`, one `curve_NNNNNN.csv` per snapshot and
/// `diagnostics.csv` (empty apart from the header when the trace is not
/// annotated). Returns the paths written.
pub fn write_trace_dir(trace: &FlowTrace, dir: &Path, family: Option<&ExactFamily>) -> Result<Vec<PathBuf>, IoError> {
    fs::create_dir_all(dir).map_err(file_err(dir))?;
    let mut written = Vec::with_capacity(trace.len() + 2);
    let mut curves = Vec::with_capacity(trace.len());
    for (k, (&t, s)) in trace.times.iter().zip(&trace.snapshots).enumerate() {
        let p = s.to_polyline().map_err(|e| IoError::Format { path: dir.to_path_buf(), message: e.to_string() })?;
        let name = curve_file_name(k);
        let path = dir.join(&name);
        write_polyline_csv(&path, &p, &polyline_header(family, Some(t), p.closed))?;
        curves.push(name);
        written.push(path);
    }
    let file = TraceFile {
        meta: trace.meta.clone(),
        times: trace.times.clone(),
        grids: trace.snapshots.iter().map(SnapshotGrid::of).collect(),
        curves,
    };
    let path = dir.join("trace.json");
    write_json(&path, &file)?;
    written.push(path);
    let path = dir.join("diagnostics.csv");
    write_diagnostics_csv(&path, &trace.diagnostics)?;
    written.push(path);
    Ok(written)
}

/// Reads a trace directory back with polyline snapshots.
pub fn read_trace_dir(dir: &Path) -> Result<FlowTrace, IoError> {
    let file: TraceFile = read_json(&dir.join("trace.json"))?;
    if file.curves.len() != file.times.len() || file.times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(IoError::Format { path: dir.join("trace.json"), message: "times and curves disagree".into() });
    }
    let snapshots = file
        .curves
        .iter()
        .map(|c| read_polyline_csv(&dir.join(c)).map(Snapshot::Polyline))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FlowTrace::new(file.meta, file.times, snapshots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::annotate;
    use crate::exact::{exact_trace, sample_exact, ClipBox};

    #[test]
    fn polyline_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let clip = ClipBox::new(-2.0, 2.0, -5.0, 5.0);
        let fam = ExactFamily::grim_reaper();
        let p = sample_exact(&fam, -1.0, 101, Some(&clip)).unwrap();
        let path = dir.path().join("grim.csv");
        let header = polyline_header(Some(&fam), Some(-1.0), false);
        assert!(header.starts_with("# family=grim_reaper"));
        write_polyline_csv(&path, &p, &header).unwrap();
        let q = read_polyline_csv(&path).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn trace_directory_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut tr = exact_trace(&ExactFamily::circle(), &[-2.0, -1.5, -1.0], 64, None).unwrap();
        annotate(&mut tr).unwrap();
        write_trace_dir(&tr, dir.path(), Some(&ExactFamily::circle())).unwrap();
        for name in ["trace.json", "curve_000000.csv", "curve_000002.csv", "diagnostics.csv"] {
            assert!(dir.path().join(name).exists(), "{name}");
        }
        let diag = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert!(diag.starts_with("t,area,length,theta_gauss,ell_minus,ell_plus,width,kappa_min,kappa_max,iso_ratio\n"));
        assert_eq!(diag.lines().count(), 4);
        let back = read_trace_dir(dir.path()).unwrap();
        assert_eq!(back.times, tr.times);
        assert_eq!(back.polylines().unwrap(), tr.polylines().unwrap());
    }

    #[test]
    fn support_csv_has_theta_h_columns() {
        let dir = tempfile::tempdir().unwrap();
        let h = SupportCurve::from_fn(16, Point::zeros(), |_| 1.0).unwrap();
        let path = dir.path().join("h.csv");
        write_support_csv(&path, &h).unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert!(text.starts_with("theta,h\n0,1\n"));
        assert_eq!(text.lines().count(), 17);
    }
}
