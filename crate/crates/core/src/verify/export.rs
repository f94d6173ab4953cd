//! Sample export: CSV/JSON point tables and OBJ meshes of 2-parameter
//! slices for quick visual inspection.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::GeomError;
use crate::geometry::{fundamental_data, sectional_curvature};
use crate::verify::{grid_points, resolve, FamilyEntry, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    Obj,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            "obj" => Ok(ExportFormat::Obj),
            other => Err(format!("unknown format {other:?} (expected csv, json or obj)")),
        }
    }
}

/// Write a sample table (csv/json) or a projected mesh (obj) for the
/// family member to `out`.
///
/// Table rows carry the chart parameters, the ambient coordinates, nu,
/// the height, the principal curvatures and the sectional curvature of
/// the (d_0, d_1) coordinate plane. The OBJ mesh triangulates the
/// 2-parameter slice obtained by freezing all but the first two chart
/// parameters at the domain center and orthographically projecting to
/// the ambient coordinates in `project` (0-based; default x2, x3, x4) —
/// a deliberately lossy visualization.
pub fn export_samples(
    entry: &FamilyEntry,
    grid: &GridSpec,
    format: ExportFormat,
    out: &Path,
    project: Option<[usize; 3]>,
) -> Result<(), GeomError> {
    let resolved = resolve(entry)?;
    let chart = &resolved.chart;
    let content = match format {
        ExportFormat::Csv => render_table(chart, grid, true)?,
        ExportFormat::Json => render_table(chart, grid, false)?,
        ExportFormat::Obj => {
            if entry.family == "slice" {
                return Err(GeomError::UnsupportedFamily(
                    "slice (no 2-parameter curved slice of interest)".into(),
                ));
            }
            render_obj(chart, grid, project.unwrap_or([1, 2, 3]))?
        }
    };
    std::fs::write(out, content).map_err(|e| GeomError::Io(e.to_string()))
}

fn row_values(
    chart: &crate::catalog::Chart<f64>,
    u: &[f64],
) -> Result<(Vec<f64>, f64, f64, Vec<f64>, f64), GeomError> {
    let fd = fundamental_data(chart, u)?;
    let n = chart.intrinsic_dim;
    let mut e0 = vec![0.0; n];
    e0[0] = 1.0;
    let mut e1 = vec![0.0; n];
    e1[1] = 1.0;
    let k = sectional_curvature(&fd, &e0, &e1)?;
    Ok((fd.point.clone(), fd.nu, fd.height, fd.spectrum.clone(), k))
}

fn render_table(
    chart: &crate::catalog::Chart<f64>,
    grid: &GridSpec,
    csv: bool,
) -> Result<String, GeomError> {
    let points = grid_points(chart, grid);
    if csv {
        let mut out = String::new();
        for i in 0..chart.intrinsic_dim {
            write!(out, "u{},", i + 1).unwrap();
        }
        for i in 0..chart.ambient_dim {
            write!(out, "x{},", i + 1).unwrap();
        }
        out.push_str("nu,height,");
        for i in 0..chart.intrinsic_dim {
            write!(out, "kappa{},", i + 1).unwrap();
        }
        out.push_str("K01\n");
        for u in &points {
            let (x, nu, h, kappa, k) = row_values(chart, u)?;
            for v in u {
                write!(out, "{v:.17e},").unwrap();
            }
            for v in &x {
                write!(out, "{v:.17e},").unwrap();
            }
            write!(out, "{nu:.17e},{h:.17e},").unwrap();
            for v in &kappa {
                write!(out, "{v:.17e},").unwrap();
            }
            writeln!(out, "{k:.17e}").unwrap();
        }
        Ok(out)
    } else {
        let mut rows = Vec::with_capacity(points.len());
        for u in &points {
            let (x, nu, h, kappa, k) = row_values(chart, u)?;
            rows.push(serde_json::json!({
                "u": u,
                "x": x,
                "nu": nu,
                "height": h,
                "principal": kappa,
                "k_plane": k,
            }));
        }
        Ok(serde_json::to_string_pretty(&rows).expect("sample serialization"))
    }
}

fn render_obj(
    chart: &crate::catalog::Chart<f64>,
    grid: &GridSpec,
    project: [usize; 3],
) -> Result<String, GeomError> {
    if chart.intrinsic_dim < 2 {
        return Err(GeomError::UnsupportedFamily(
            "obj export needs at least two chart parameters".into(),
        ));
    }
    for p in project {
        if p >= chart.ambient_dim {
            return Err(GeomError::IndexOutOfRange {
                index: p,
                n: chart.ambient_dim,
            });
        }
    }
    let k = grid.samples_per_axis.max(3);
    let center = chart.center();
    let axis = |d: usize, i: usize| -> f64 {
        let (lo, hi) = chart.domain[d];
        let w = hi - lo;
        let (a, b) = (lo + grid.margin * w, hi - grid.margin * w);
        a + (b - a) * i as f64 / (k - 1) as f64
    };
    let mut out = String::from("# projected 2-parameter slice\n");
    for i in 0..k {
        for j in 0..k {
            let mut u = center.clone();
            u[0] = axis(0, i);
            u[1] = axis(1, j);
            let p = chart.point(&u)?;
            writeln!(
                out,
                "v {:.9} {:.9} {:.9}",
                p[project[0]], p[project[1]], p[project[2]]
            )
            .unwrap();
        }
    }
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            // OBJ indices are 1-based.
            let a = i * k + j + 1;
            let b = a + 1;
            let c = a + k;
            let d = c + 1;
            writeln!(out, "f {a} {c} {b}").unwrap();
            writeln!(out, "f {b} {c} {d}").unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::FamilyEntry;

    fn grid() -> GridSpec {
        GridSpec {
            samples_per_axis: 8,
            planes: 1,
            fd_points: 1,
            ..Default::default()
        }
    }

    #[test]
    fn csv_row_count_and_header() {
        let dir = std::env::temp_dir().join("hypersurface-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rot.csv");
        let mut g = grid();
        g.samples_per_axis = 8;
        let entry = FamilyEntry::new("rot-sph-S", 1, 4.0);
        export_samples(&entry, &g, ExportFormat::Csv, &path, None).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // n = 3 chart: 8^3 rows plus the header.
        assert_eq!(lines.len(), 1 + 8 * 8 * 8);
        assert_eq!(lines[0], "u1,u2,u3,x1,x2,x3,x4,x5,nu,height,kappa1,kappa2,kappa3,K01");
    }

    #[test]
    fn json_nu_constant_for_clifford() {
        let dir = std::env::temp_dir().join("hypersurface-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("clifford.json");
        let entry = FamilyEntry::new("constant-angle-clifford", 1, 0.0).with_b(1.0);
        export_samples(&entry, &grid(), ExportFormat::Json, &path, None).unwrap();
        let rows: Vec<serde_json::Value> =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            let nu = row["nu"].as_f64().unwrap();
            assert!((nu - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn obj_rejected_for_slice() {
        let dir = std::env::temp_dir().join("hypersurface-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("slice.obj");
        let entry = FamilyEntry::new("slice", 1, 1.0);
        let err =
            export_samples(&entry, &grid(), ExportFormat::Obj, &path, None).unwrap_err();
        assert!(err.to_string().contains("unsupported family"));
    }

    #[test]
    fn obj_mesh_well_formed() {
        let dir = std::env::temp_dir().join("hypersurface-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rot.obj");
        let entry = FamilyEntry::new("rot-sph-S", 1, 4.0);
        export_samples(&entry, &grid(), ExportFormat::Obj, &path, Some([1, 2, 3])).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let verts = text.lines().filter(|l| l.starts_with("v ")).count();
        let faces = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(verts, 8 * 8);
        assert_eq!(faces, 2 * 7 * 7);
    }
}
